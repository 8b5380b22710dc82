//! Restriction-constant estimation
//! A_p = sup_{‖f‖_p ≤ 1} (Σ_u μ({u}) |f̂(u)|²)^{1/2}
//! on Z_N^d with counting-measure norms on the spatial side and the
//! unnormalized DFT (that convention gives the closed form
//! A_2² = N^d·max_u μ({u}) and matches the convolution-power inequality).
//!
//! p = 2 is exact; p < 2 runs the nonlinear power method (ascent on the
//! ℓ^p sphere) from random restarts and reports a certified lower bound,
//! sandwiched against the duality upper bound
//! A_p ≤ (N^d ‖μ^{*n}‖_∞)^{1/(2n)} at the admissible n with 2n/(2n−1) ≥ p.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::grid::{measure_power, AtomicMeasure, FftEngine};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Serialize)]
pub struct ApEstimate {
    pub p: f64,
    /// Certified lower bound (attained by the reported extremizer).
    pub lower: f64,
    /// Duality upper bound via the convolution-power inequality.
    pub upper: f64,
    /// Convolution order used for the upper bound.
    pub upper_n: u32,
    /// True when the ascent stalled before the iteration budget.
    pub converged: bool,
}

pub fn estimate_ap(
    mu: &AtomicMeasure,
    p: f64,
    restarts: usize,
    seed: u64,
) -> Result<ApEstimate> {
    if !(1.0..=2.0).contains(&p) {
        return Err(CoreError::domain("p must lie in [1, 2]"));
    }
    let grid = mu.grid();
    let cells = grid.cell_count();
    let nd = cells as f64;

    // duality upper bound at the admissible order: smallest 2n/(2n−1) ≥ p
    let upper_n = if p <= 1.0 + 1e-12 {
        1u32 // p = 1: every n works; n = 1 gives the tightest computable bound here
    } else {
        (p / (2.0 * (p - 1.0))).floor().max(1.0) as u32
    };
    let power = measure_power(mu, upper_n)?;
    let upper = (nd * power.max_point_mass().0).powf(1.0 / (2.0 * upper_n as f64));

    if (p - 2.0).abs() < 1e-12 {
        let exact = (nd * mu.max_point_mass().0).sqrt();
        return Ok(ApEstimate { p, lower: exact, upper, upper_n, converged: true });
    }

    let engine = FftEngine::new(grid.side(), grid.dim())?;
    let masses = mu.masses();
    let q_value = |f: &[Complex64]| -> f64 {
        let mut data = f.to_vec();
        engine.forward(&mut data);
        data.iter()
            .zip(masses)
            .map(|(v, &m)| m * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let lp_norm = |f: &[Complex64]| -> f64 {
        f.iter().map(|v| v.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    };

    let p_dual = if p > 1.0 { p / (p - 1.0) } else { f64::INFINITY };
    let mut best = 0.0f64;
    let mut converged = false;
    for restart in 0..restarts.max(1) {
        let mut rng = SplitMix64::for_trial(seed, restart as u64);
        let mut f: Vec<Complex64> = (0..cells)
            .map(|_| {
                let (re, im) = rng.next_complex_gaussian();
                Complex64::new(re, im)
            })
            .collect();
        let scale = lp_norm(&f);
        f.iter_mut().for_each(|v| *v /= scale);
        let mut last = q_value(&f);
        let mut stalled = false;
        for _iter in 0..200 {
            // v = T* M T f, the gradient direction of Q(f)²
            let mut data = f.clone();
            engine.forward(&mut data);
            for (v, &m) in data.iter_mut().zip(masses) {
                *v *= m;
            }
            engine.inverse(&mut data);
            // ℓ^p-dual renormalization: maximizer of Re⟨v,f⟩ on the sphere
            let next: Vec<Complex64> = if p_dual.is_infinite() {
                data.iter()
                    .map(|v| {
                        if v.norm() > 0.0 {
                            v / v.norm()
                        } else {
                            Complex64::new(1.0, 0.0)
                        }
                    })
                    .collect()
            } else {
                data.iter()
                    .map(|v| {
                        let r = v.norm();
                        if r > 0.0 {
                            v * r.powf(p_dual - 2.0)
                        } else {
                            Complex64::default()
                        }
                    })
                    .collect()
            };
            let scale = lp_norm(&next);
            if scale == 0.0 {
                break;
            }
            f = next.iter().map(|v| v / scale).collect();
            let current = q_value(&f);
            if (current - last).abs() <= 1e-12 * current.max(1.0) {
                stalled = true;
                last = current;
                break;
            }
            last = current;
        }
        converged |= stalled;
        best = best.max(last);
    }
    Ok(ApEstimate { p, lower: best, upper, upper_n, converged })
}
