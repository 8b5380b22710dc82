//! Cyclic group convolution and convolution powers.
//!
//! Integer-count measures go through the floating FFT with rounding
//! verification: every rounded residual must stay below [`ROUND_TOLERANCE`],
//! otherwise the computation falls back to direct convolution over the
//! nonzero cells, which is exact for integer masses.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::grid::fft::FftEngine;
use crate::grid::function::GridFunction;
use crate::grid::measure::AtomicMeasure;
use crate::grid::TorusGrid;

/// Max admissible |rounded − raw| before the FFT path is declared unsafe.
pub const ROUND_TOLERANCE: f64 = 0.25;

/// Counts above 2^50 lose the integer-exactness guarantee in f64.
const MAX_EXACT_COUNT: f64 = (1u64 << 50) as f64;

/// Group convolution of measures: (a*b)({w}) = Σ_{u+v=w} a({u})·b({v}).
pub fn convolve_measures(a: &AtomicMeasure, b: &AtomicMeasure) -> Result<AtomicMeasure> {
    if a.grid() != b.grid() {
        return Err(CoreError::config("convolution of measures on different grids"));
    }
    let grid = *a.grid();
    let integral = a.is_integer_mass() && b.is_integer_mass();
    let engine = FftEngine::new(grid.side(), grid.dim())?;
    let mut fa: Vec<Complex64> = a.masses().iter().map(|&m| m.into()).collect();
    let mut fb: Vec<Complex64> = b.masses().iter().map(|&m| m.into()).collect();
    engine.forward(&mut fa);
    engine.forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    engine.inverse(&mut fa);
    let scale = 1.0 / grid.cell_count() as f64;
    let raw: Vec<f64> = fa.iter().map(|v| v.re * scale).collect();
    finalize_measure(grid, raw, integral, || direct_convolve(a, b))
}

/// ℓ-fold convolution power; conv_power(μ, 0) = δ_0.
pub fn measure_power(measure: &AtomicMeasure, ell: u32) -> Result<AtomicMeasure> {
    let grid = *measure.grid();
    match ell {
        0 => AtomicMeasure::dirac(grid, &vec![0; grid.dim()]),
        1 => Ok(measure.clone()),
        _ => {
            let integral = measure.is_integer_mass();
            if integral {
                let expected_total = measure.total_mass().powi(ell as i32);
                if expected_total > MAX_EXACT_COUNT {
                    return Err(CoreError::precision(format!(
                        "total mass {expected_total:.3e} of the {ell}-th power exceeds the exact-integer range"
                    )));
                }
            }
            let engine = FftEngine::new(grid.side(), grid.dim())?;
            let mut data: Vec<Complex64> =
                measure.masses().iter().map(|&m| m.into()).collect();
            engine.forward(&mut data);
            for v in data.iter_mut() {
                *v = v.powu(ell);
            }
            engine.inverse(&mut data);
            let scale = 1.0 / grid.cell_count() as f64;
            let raw: Vec<f64> = data.iter().map(|v| v.re * scale).collect();
            finalize_measure(grid, raw, integral, || direct_power(measure, ell))
        }
    }
}

fn finalize_measure(
    grid: TorusGrid,
    raw: Vec<f64>,
    integral: bool,
    fallback: impl FnOnce() -> Result<AtomicMeasure>,
) -> Result<AtomicMeasure> {
    if integral {
        let mut rounded = Vec::with_capacity(raw.len());
        let mut max_residual = 0.0f64;
        for &v in &raw {
            let r = v.round();
            max_residual = max_residual.max((v - r).abs());
            rounded.push(r.max(0.0));
        }
        if max_residual < ROUND_TOLERANCE {
            return AtomicMeasure::from_masses(grid, rounded);
        }
        // FFT precision compromised; the direct path is exact for integers.
        return fallback();
    }
    // Small negative round-off on nonnegative data is clamped.
    let clamped = raw
        .into_iter()
        .map(|v| if v < 0.0 && v > -1e-9 { 0.0 } else { v })
        .collect();
    AtomicMeasure::from_masses(grid, clamped)
}

/// Exact direct convolution over nonzero cells, O(nnz(a)·nnz(b)).
pub(crate) fn direct_convolve(a: &AtomicMeasure, b: &AtomicMeasure) -> Result<AtomicMeasure> {
    let grid = *a.grid();
    let mut out = AtomicMeasure::zero(grid)?;
    let b_support: Vec<(Vec<usize>, f64)> = b
        .support()
        .map(|(idx, m)| (grid.point_of(idx), m))
        .collect();
    for (ia, ma) in a.support() {
        let pa = grid.point_of(ia);
        for (pb, mb) in &b_support {
            let sum = grid.add_points(&pa, pb);
            out.add_mass(&sum, ma * mb);
        }
    }
    Ok(out)
}

pub(crate) fn direct_power(measure: &AtomicMeasure, ell: u32) -> Result<AtomicMeasure> {
    let grid = *measure.grid();
    let mut acc = AtomicMeasure::dirac(grid, &vec![0; grid.dim()])?;
    for _ in 0..ell {
        acc = direct_convolve(&acc, measure)?;
    }
    Ok(acc)
}

/// Convolution of functions on 𝕋^d: (f*g)(t) = ∫ f(t−s)g(s) ds, i.e.
/// coefficientwise multiplication of the Fourier coefficients.
pub fn convolve_functions(a: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
    if a.resolution() != b.resolution() || a.dim() != b.dim() {
        return Err(CoreError::config("convolution of functions on different grids"));
    }
    let spec = a.dft()?.pointwise_mul(&b.dft()?)?;
    GridFunction::from_spectrum(&spec)
}

/// n-fold convolution power of a function; `function_power(f, 0)` is the
/// convolution unit on the grid (the discrete Dirac of total integral one).
pub fn function_power(f: &GridFunction, n: u32) -> Result<GridFunction> {
    let spec = f.dft()?.pointwise_pow(n);
    GridFunction::from_spectrum(&spec)
}

/// (f * μ)(t) = Σ_u f(t − u)·mass(u), by exact shift accumulation. The
/// measure's grid must divide the function's resolution.
pub fn convolve_function_measure(
    f: &GridFunction,
    mu: &AtomicMeasure,
) -> Result<GridFunction> {
    let r = f.resolution();
    let n = mu.grid().side();
    if f.dim() != mu.grid().dim() {
        return Err(CoreError::config("dimension mismatch"));
    }
    if r % n != 0 {
        return Err(CoreError::config(format!(
            "measure grid N={n} must divide function resolution R={r}"
        )));
    }
    let step = r / n;
    let dim = f.dim();
    let mut out = vec![0.0; f.len()];
    let mut shifted_point = vec![0usize; dim];
    for (idx_atom, mass) in mu.support() {
        let atom = mu.grid().point_of(idx_atom);
        // target index x receives mass·f(x − u): accumulate f shifted by +u
        for (idx, value) in f.values().iter().enumerate() {
            let point = f.point_of(idx);
            for k in 0..dim {
                shifted_point[k] = (point[k] + atom[k] * step) % r;
            }
            let dst = f.linear_index(&shifted_point);
            out[dst] += mass * value;
        }
    }
    GridFunction::new(r, dim, out)
}
