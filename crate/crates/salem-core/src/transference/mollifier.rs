//! Mollification f = υ_N * ⊓_N * μ.
//!
//! The default profile is the polynomial bump c·(1−(2s)²)⁴ on (−1/2,1/2)
//! tensorized over axes. Unlike the C^∞ bump of the continuum construction it
//! has only finite smoothness; its Fourier decay (|ξ|^{−5} per axis) is
//! sufficient at the scales represented on the grid.

use crate::error::{CoreError, Result};
use crate::grid::{convolve_function_measure, AtomicMeasure, GridFunction};
use crate::transference::{box_kernel, RefinedGrid};

/// A symmetric nonnegative bump profile on (−1/2,1/2)^d with unit discrete
/// mass after normalization, scaled by N.
#[derive(Debug, Clone, Copy)]
pub struct MollifierSpec {
    /// Exponent of the polynomial bump (1−(2s)²)^k; controls smoothness.
    pub bump_exponent: i32,
    /// Scale N: the mollifier υ_N = N^d υ(N·) lives at width 1/N.
    pub scale: usize,
}

impl MollifierSpec {
    pub fn new(scale: usize) -> Self {
        MollifierSpec { bump_exponent: 4, scale }
    }

    /// Sampled υ_N on the refined grid, normalized to exact unit discrete
    /// mass. Support is strictly inside the cube of side 1/N around 0.
    pub fn sample(&self, resolution: usize, dim: usize) -> Result<GridFunction> {
        if resolution % (2 * self.scale) != 0 {
            return Err(CoreError::config(format!(
                "resolution {resolution} must be divisible by 2N = {}",
                2 * self.scale
            )));
        }
        let n = self.scale as f64;
        let k = self.bump_exponent;
        let raw = GridFunction::sample(resolution, dim, |coords| {
            coords
                .iter()
                .map(|&t| {
                    // centered representative in [−1/2, 1/2)
                    let s = if t >= 0.5 { t - 1.0 } else { t };
                    let arg = 2.0 * n * s;
                    let v = 1.0 - arg * arg;
                    if v > 0.0 {
                        v.powi(k)
                    } else {
                        0.0
                    }
                })
                .product::<f64>()
        })?;
        let mean = raw.mean();
        if mean <= 0.0 {
            return Err(CoreError::config("mollifier support resolves to no samples"));
        }
        let values = raw.values().iter().map(|v| v / mean).collect();
        GridFunction::new(resolution, dim, values)
    }
}

/// Mollified pair (f, g) with f = υ_N*⊓_N*μ and g = ⊓_N*μ.
#[derive(Debug, Clone)]
pub struct Mollified {
    pub f: GridFunction,
    pub g: GridFunction,
}

/// Build f = υ_N * ⊓_N * μ on the refined grid. μ must live on Γ_N^d; the
/// intermediate g = ⊓_N * μ is returned alongside f for the spectral and
/// sup-bound checks.
pub fn mollify_build_f(
    mu: &AtomicMeasure,
    spec: &MollifierSpec,
    resolution: usize,
) -> Result<Mollified> {
    let n = mu.grid().side();
    let dim = mu.grid().dim();
    if spec.scale != n {
        return Err(CoreError::config("mollifier scale must equal the measure grid side"));
    }
    RefinedGrid::for_box_kernel(n, resolution, dim)?;
    let boxk = box_kernel(n, resolution, dim)?;
    let g = convolve_function_measure(&boxk, mu)?;
    let upsilon = spec.sample(resolution, dim)?;
    let f = convolve_compact(&upsilon, &g)?;
    Ok(Mollified { f, g })
}

/// Direct convolution (f*g)(x) = (1/R^d) Σ_y f(y) g(x−y) over the small
/// support of f; keeps nonnegativity exact (no FFT round-off sign flips).
fn convolve_compact(small: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    if small.resolution() != g.resolution() || small.dim() != g.dim() {
        return Err(CoreError::config("mollifier grid mismatch"));
    }
    let r = g.resolution();
    let d = g.dim();
    let cells = g.len();
    let support: Vec<(usize, f64)> = small
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, &v)| (i, v))
        .collect();
    let mut out = vec![0.0f64; cells];
    let scale = 1.0 / cells as f64;
    let g_values = g.values();
    for (out_idx, slot) in out.iter_mut().enumerate() {
        let x = small.point_of(out_idx);
        let mut acc = 0.0;
        for &(y_idx, weight) in &support {
            let y = small.point_of(y_idx);
            let mut src = 0usize;
            for k in 0..d {
                src = src * r + (x[k] + r - y[k]) % r;
            }
            acc += weight * g_values[src];
        }
        *slot = acc * scale;
    }
    GridFunction::new(r, d, out)
}

/// Support property of mollification: every nonzero sample of f lies within
/// per-axis wrapped distance 1/N of some atom of μ (i.e. supp f is covered
/// by one cube of side 2/N per atom).
pub fn support_cover_check(f: &GridFunction, mu: &AtomicMeasure) -> Result<bool> {
    let r = f.resolution();
    let n = mu.grid().side() as f64;
    let d = f.dim();
    let atoms: Vec<Vec<f64>> = mu
        .support()
        .map(|(idx, _)| mu.grid().coords(&mu.grid().point_of(idx)))
        .collect();
    let tolerance = 1.0 / r as f64;
    'outer: for (idx, &value) in f.values().iter().enumerate() {
        if value == 0.0 {
            continue;
        }
        let point = f.point_of(idx);
        for atom in &atoms {
            let near = (0..d).all(|k| {
                let t = point[k] as f64 / r as f64;
                let diff = (t - atom[k]).rem_euclid(1.0);
                diff.min(1.0 - diff) <= 1.0 / n + tolerance
            });
            if near {
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}
