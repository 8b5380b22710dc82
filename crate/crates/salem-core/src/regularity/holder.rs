//! Estimation of ω_{ρ,ψ}(f) and C^{ρ,ψ} norms from grid samples.
//!
//! The supremum is scanned over all grid base points and grid-aligned offsets
//! at dyadic separations |h| ∈ {2^{−j}}, so every reported value is a
//! certified LOWER bound on the true norm. Integer-order derivatives use
//! centered finite differences of order 4.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::grid::GridFunction;
use crate::regularity::ModulusPsi;

#[derive(Debug, Clone, Serialize)]
pub struct HolderEstimate {
    /// ρ of the requested space.
    pub rho: f64,
    /// Σ_{|a| ≤ ⌊ρ⌋} ‖∂^a f‖_∞ over the sampled grid.
    pub derivative_sup: f64,
    /// max over top-order derivatives of the ω_{ρ−⌊ρ⌋,ψ} scan
    /// (zero when the fractional part is 0: the modulus term degenerates to
    /// the sup norm already accounted for).
    pub omega: f64,
    /// derivative_sup + omega.
    pub norm: f64,
    /// Number of (base point, offset) pairs scanned.
    pub pairs_scanned: usize,
}

/// ω_{ρ,ψ}(f) for 0 ≤ ρ < 1 over dyadic grid-aligned offsets.
pub fn holder_omega(f: &GridFunction, rho: f64, psi: ModulusPsi) -> Result<(f64, usize)> {
    if !(0.0..1.0).contains(&rho) {
        return Err(CoreError::domain("holder_omega needs 0 <= rho < 1"));
    }
    let r = f.resolution();
    let d = f.dim();
    let mut sup = 0.0f64;
    let mut pairs = 0usize;
    // offsets: per axis, step sizes R/2, R/4, …, 2, 1
    let mut steps = Vec::new();
    let mut s = r / 2;
    while s >= 1 {
        steps.push(s);
        if s == 1 {
            break;
        }
        s /= 2;
    }
    if *steps.last().unwrap_or(&0) != 1 {
        steps.push(1);
    }
    let values = f.values();
    for axis in 0..d {
        let stride = r.pow((d - 1 - axis) as u32);
        for &step in &steps {
            let h = step as f64 / r as f64;
            let weight = h.powf(rho) * psi.eval(h)?;
            for (idx, &v) in values.iter().enumerate() {
                // idx with axis coordinate advanced by `step`, wrapping
                let coord = (idx / stride) % r;
                let shifted = if coord + step < r {
                    idx + step * stride
                } else {
                    idx + step * stride - r * stride
                };
                let diff = (values[shifted] - v).abs();
                sup = sup.max(diff / weight);
                pairs += 1;
            }
        }
    }
    Ok((sup, pairs))
}

/// Lower estimate of the C^{ρ,ψ} norm:
/// Σ_{|a| ≤ ⌊ρ⌋} ‖∂^a f‖_∞ + Σ_{|b| = ⌊ρ⌋} ω_{ρ−⌊ρ⌋,ψ}(∂^b f),
/// with the ω term omitted when ρ is an integer.
pub fn holder_norm(f: &GridFunction, rho: f64, psi: ModulusPsi) -> Result<HolderEstimate> {
    if rho < 0.0 {
        return Err(CoreError::domain("rho must be nonnegative"));
    }
    let order = rho.floor() as usize;
    let frac = rho - rho.floor();
    let mut derivative_sup = 0.0f64;
    let mut top: Vec<GridFunction> = vec![f.clone()];
    derivative_sup += f.sup_norm();
    for _ in 0..order {
        let mut next = Vec::new();
        for g in &top {
            for axis in 0..f.dim() {
                let dg = central_derivative(g, axis);
                derivative_sup += dg.sup_norm();
                next.push(dg);
            }
        }
        top = next;
    }
    let mut omega = 0.0f64;
    let mut pairs = 0usize;
    if frac > 0.0 {
        for g in &top {
            let (w, p) = holder_omega(g, frac, psi)?;
            omega = omega.max(w);
            pairs += p;
        }
    }
    Ok(HolderEstimate {
        rho,
        derivative_sup,
        omega,
        norm: derivative_sup + omega,
        pairs_scanned: pairs,
    })
}

/// 4th-order centered finite difference along one axis (grid spacing 1/R).
pub fn central_derivative(f: &GridFunction, axis: usize) -> GridFunction {
    let r = f.resolution();
    let d = f.dim();
    let stride = r.pow((d - 1 - axis) as u32);
    let values = f.values();
    let shift = |idx: usize, by: isize| -> usize {
        let coord = (idx / stride) % r;
        let new_coord = (coord as isize + by).rem_euclid(r as isize) as usize;
        idx + new_coord * stride - coord * stride
    };
    let h = 1.0 / r as f64;
    let out: Vec<f64> = (0..values.len())
        .map(|idx| {
            (-values[shift(idx, 2)] + 8.0 * values[shift(idx, 1)]
                - 8.0 * values[shift(idx, -1)]
                + values[shift(idx, -2)])
                / (12.0 * h)
        })
        .collect();
    GridFunction::new(r, d, out).expect("same shape")
}
