//! Discrete restriction machinery: the exact convolution-power inequality
//! Σ_ξ |ĝμ(ξ)|^{2n} ≤ N^d ‖μ^{*n}‖_∞ (Σ|g|² dμ)^n, restriction-constant
//! estimation, Bochner-Riesz-type multipliers and the lower-regularity
//! dichotomy diagnostic.

mod ap;
mod diagnostic;
mod multiplier;

pub use ap::{estimate_ap, ApEstimate};
pub use diagnostic::{
    ad_regularity_diagnostic, near_comb_measure, profile_at_dyadic_radii, AdRegularityReport,
};
pub use multiplier::{
    annulus_multiplier_check, build_m_lambda, AnnulusCheckReport, MLambdaBuild,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::grid::{measure_power, AtomicMeasure, FftEngine};

/// One instance of the discrete restriction inequality.
#[derive(Debug, Clone)]
pub struct RestrictionInstance {
    /// Probability-normalized measure.
    pub mu: AtomicMeasure,
    /// Complex weights, one per lattice cell (only cells with mass matter).
    pub weights: Vec<Complex64>,
    /// Convolution order n ≥ 1.
    pub n: u32,
}

impl RestrictionInstance {
    pub fn new(mu: AtomicMeasure, weights: Vec<Complex64>, n: u32) -> Result<Self> {
        if (mu.total_mass() - 1.0).abs() > 1e-12 {
            return Err(CoreError::domain("measure must be probability-normalized"));
        }
        if weights.len() != mu.grid().cell_count() {
            return Err(CoreError::domain("weight array length != N^d"));
        }
        if n == 0 {
            return Err(CoreError::domain("convolution order n must be >= 1"));
        }
        Ok(RestrictionInstance { mu, weights, n })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictionCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Evaluate both sides of the exact discrete inequality
/// Σ_ξ |widehat{gμ}(ξ)|^{2n} ≤ N^d · max_u μ^{*n}({u}) · (Σ |g|² dμ)^n.
/// The inequality is a theorem (Cauchy-Schwarz through the n-fold
/// convolution), so ratio ≤ 1 up to FFT round-off on every instance.
pub fn restriction_check(instance: &RestrictionInstance) -> Result<RestrictionCheck> {
    let grid = instance.mu.grid();
    let cells = grid.cell_count();
    let engine = FftEngine::new(grid.side(), grid.dim())?;
    // ĥ for h = gμ
    let mut data: Vec<Complex64> = instance
        .mu
        .masses()
        .iter()
        .zip(&instance.weights)
        .map(|(&m, w)| w * m)
        .collect();
    engine.forward(&mut data);
    let lhs: f64 = data.iter().map(|v| v.norm().powi(2 * instance.n as i32)).sum();

    let power = measure_power(&instance.mu, instance.n)?;
    let (max_mass, _) = power.max_point_mass();
    let g_l2: f64 = instance
        .mu
        .masses()
        .iter()
        .zip(&instance.weights)
        .map(|(&m, w)| w.norm_sqr() * m)
        .sum();
    let rhs = cells as f64 * max_mass * g_l2.powi(instance.n as i32);
    let ratio = if rhs > 0.0 { lhs / rhs } else { f64::INFINITY };
    Ok(RestrictionCheck { lhs, rhs, ratio })
}

/// Direct-summation oracle for both sides (O(N^{2d}) DFT, direct convolution
/// powers); used to validate the spectral path at small N.
pub fn restriction_check_direct(instance: &RestrictionInstance) -> Result<RestrictionCheck> {
    let grid = instance.mu.grid();
    let cells = grid.cell_count();
    let two_pi = 2.0 * std::f64::consts::PI;
    let n_side = grid.side() as f64;
    let mut lhs = 0.0f64;
    for xi_idx in 0..cells {
        let xi = grid.point_of(xi_idx);
        let mut acc = Complex64::default();
        for (u_idx, mass) in instance.mu.support() {
            let u = grid.point_of(u_idx);
            let phase: f64 = xi
                .iter()
                .zip(&u)
                .map(|(&a, &b)| (a * b) as f64)
                .sum::<f64>()
                / n_side;
            acc += instance.weights[u_idx] * mass * Complex64::from_polar(1.0, -two_pi * phase);
        }
        lhs += acc.norm().powi(2 * instance.n as i32);
    }
    let mut power = AtomicMeasure::dirac(*grid, &vec![0; grid.dim()])?;
    for _ in 0..instance.n {
        power = crate::grid::convolve_measures(&power, &instance.mu)?;
    }
    let (max_mass, _) = power.max_point_mass();
    let g_l2: f64 = instance
        .mu
        .masses()
        .iter()
        .zip(&instance.weights)
        .map(|(&m, w)| w.norm_sqr() * m)
        .sum();
    let rhs = cells as f64 * max_mass * g_l2.powi(instance.n as i32);
    Ok(RestrictionCheck { lhs, rhs, ratio: lhs / rhs })
}
