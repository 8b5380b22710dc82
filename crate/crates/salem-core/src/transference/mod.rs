//! Transference from discrete point masses to smooth periodic functions:
//! the box kernel ⊓_N, the lattice comb τ_N, mollification f = υ_N*⊓_N*μ,
//! p-periodization, the building block F_m = Per_{2m+1} f and the
//! approximation-step metric components.

mod approx;
mod fm;
mod mollifier;

pub use approx::{approximation_step, ApproxInput, MetricComponents};
pub use fm::{build_f_m, verify_fm_properties, FmBuild, FmParams, FmPropertyReport, PropertyCheck};
pub use mollifier::{mollify_build_f, support_cover_check, Mollified, MollifierSpec};

use crate::error::{CoreError, Result};
use crate::grid::{AtomicMeasure, GridFunction, TorusGrid};

/// Carrier resolution for the smooth objects; R must be divisible by the
/// periods of everything represented on it (2N for ⊓_N, 2N(2m+1) for F_m).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefinedGrid {
    pub resolution: usize,
    pub dim: usize,
}

impl RefinedGrid {
    pub fn for_box_kernel(n: usize, resolution: usize, dim: usize) -> Result<Self> {
        if resolution % (2 * n) != 0 {
            return Err(CoreError::config(format!(
                "resolution {resolution} must be divisible by 2N = {}",
                2 * n
            )));
        }
        Ok(RefinedGrid { resolution, dim })
    }

    pub fn for_f_m(n: usize, m: usize, resolution: usize, dim: usize) -> Result<Self> {
        let period = 2 * n * (2 * m + 1);
        if resolution % period != 0 {
            return Err(CoreError::config(format!(
                "resolution {resolution} must be divisible by 2N(2m+1) = {period}"
            )));
        }
        Ok(RefinedGrid { resolution, dim })
    }
}

/// The box kernel ⊓_N = N^d 𝟙_{[−1/2,1/2)^d}(Nt): the exact piecewise-constant
/// sampling on the refined grid, i.e. value N^d on the half-open box of side
/// 1/N around the origin. Requires 2N | R so the box edge falls on the grid.
pub fn box_kernel(n: usize, resolution: usize, dim: usize) -> Result<GridFunction> {
    RefinedGrid::for_box_kernel(n, resolution, dim)?;
    let samples_per_period = resolution / n;
    let half = samples_per_period / 2;
    let height = (n as f64).powi(dim as i32);
    GridFunction::sample(resolution, dim, |coords| {
        let inside = coords.iter().all(|&t| {
            let j = (t * resolution as f64).round() as usize % resolution;
            j < half || j >= resolution - half
        });
        if inside {
            height
        } else {
            0.0
        }
    })
}

/// The lattice comb τ_N = N^{−d} Σ_{j∈Γ_N^d} δ_{j/N} as an atomic measure on
/// its own N-grid; convolve against functions with
/// [`crate::grid::convolve_function_measure`].
pub fn lattice_comb(n: usize, dim: usize) -> Result<AtomicMeasure> {
    AtomicMeasure::lattice_comb(TorusGrid::new(dim, n)?)
}

/// Per_p of a grid function (re-exported from the grid layer for symmetry).
pub fn periodize(f: &GridFunction, p: usize) -> Result<GridFunction> {
    f.periodize(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{convolve_function_measure, function_power};
    use num_complex::Complex64;

    #[test]
    fn box_kernel_has_unit_mean() {
        for d in [1usize, 2] {
            let f = box_kernel(4, 32, d).unwrap();
            assert!((f.mean() - 1.0).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn box_kernel_spectrum_vanishes_on_lattice_frequencies() {
        // ⊓̂_N(r) = 0 for r ∈ (NZ)^d \ {0}, exactly
        let n = 4usize;
        let f = box_kernel(n, 64, 1).unwrap();
        let spec = f.dft().unwrap();
        assert!((spec.at(&[0]) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for k in [1i64, -1, 2, 3, -3, 7] {
            let v = spec.at(&[k * n as i64]);
            assert!(v.norm() < 1e-10, "residual {} at {}", v.norm(), k * n as i64);
        }
    }

    #[test]
    fn box_kernel_spectrum_matches_discrete_closed_form() {
        // ⊓̂_N(r) = (N/R)·e^{iπr/R}·sin(πr/N)/sin(πr/R), the discrete form of
        // the sinc; it converges to sin(πr/N)/(πr/N) as R → ∞.
        let n = 4usize;
        let r_res = 64usize;
        let f = box_kernel(n, r_res, 1).unwrap();
        let spec = f.dft().unwrap();
        for (freq, value) in spec.iter_centered() {
            let r = freq[0] as f64;
            let expect = if freq[0] == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                let ratio = (std::f64::consts::PI * r / n as f64).sin()
                    / (std::f64::consts::PI * r / r_res as f64).sin();
                Complex64::from_polar(1.0, std::f64::consts::PI * r / r_res as f64)
                    * (n as f64 / r_res as f64)
                    * ratio
            };
            assert!(
                (value - expect).norm() < 1e-10,
                "freq {freq:?}: {value} vs {expect}"
            );
        }
    }

    #[test]
    fn box_kernel_spectrum_approaches_continuum_sinc() {
        let n = 4usize;
        let r_res = 1 << 14; // 16384
        let f = box_kernel(n, r_res, 1).unwrap();
        let spec = f.dft().unwrap();
        for k in [1i64, 2, 3, 5, 6] {
            let x = std::f64::consts::PI * k as f64 / n as f64;
            let sinc = x.sin() / x;
            let err = (spec.at(&[k]) - Complex64::new(sinc, 0.0)).norm();
            assert!(err < 5e-4, "sinc mismatch {err} at r={k}");
        }
    }

    #[test]
    fn comb_spectrum_is_lattice_indicator_on_refined_grid() {
        // embed τ_N on resolution R divisible by N: τ̂_N(r) = 1 iff N | r
        let n = 4usize;
        let r_res = 32usize;
        let tau = lattice_comb(n, 1).unwrap();
        // convolve a pure frequency and read off the eigenvalue τ̂(k)
        // (stop below the Nyquist frequency where ±k coincide)
        for k in 0..(r_res as i64 / 2) {
            let probe = GridFunction::sample(r_res, 1, |t| {
                (2.0 * std::f64::consts::PI * k as f64 * t[0]).cos()
            })
            .unwrap();
            let image = convolve_function_measure(&probe, &tau).unwrap();
            let spec = image.dft().unwrap();
            let coeff = spec.at(&[k]);
            let expect = if k % n as i64 == 0 { 0.5 } else { 0.0 };
            let expect = if k == 0 { 1.0 } else { expect };
            assert!(
                (coeff - Complex64::new(expect, 0.0)).norm() < 1e-10,
                "k={k}: {coeff} vs {expect}"
            );
        }
    }

    #[test]
    fn box_power_comb_convolution_is_uniform_multiple_ells() {
        // ⊓_N^{*ℓ} * τ_N = 1 identically, N=4, R=32, d=1
        let boxk = box_kernel(4, 32, 1).unwrap();
        let tau = lattice_comb(4, 1).unwrap();
        for ell in 1..=2u32 {
            let powered = function_power(&boxk, ell).unwrap();
            let image = convolve_function_measure(&powered, &tau).unwrap();
            let worst = image
                .values()
                .iter()
                .map(|v| (v - 1.0).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-9, "ell={ell}: {worst}");
        }
    }

    #[test]
    fn refined_grid_divisibility_enforced() {
        assert!(RefinedGrid::for_box_kernel(4, 30, 1).is_err());
        assert!(RefinedGrid::for_f_m(9, 3, 126, 1).is_ok()); // 2·9·7 = 126
        assert!(RefinedGrid::for_f_m(9, 3, 125, 1).is_err());
    }

    #[test]
    fn product_identity_for_periodized_factors() {
        // (G1·P1)*(G2·P2) = (G1*G2)·(P1*P2) when the P_ν have frequencies in
        // one p-window; exact by cyclic Fourier bookkeeping.
        let r_res = 64usize;
        let p = 4usize;
        let mut rng = crate::rng::SplitMix64::new(21);
        // real polynomials have conjugate-symmetric spectra; degree 1 keeps
        // the support {−1,0,1} inside one window of length p = 4
        let mut random_trig = || -> GridFunction {
            let coeffs: Vec<(i64, f64, f64)> = (0..=1i64)
                .map(|k| (k, rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                .collect();
            GridFunction::sample(r_res, 1, |t| {
                coeffs
                    .iter()
                    .map(|&(k, a, b)| {
                        let phase = 2.0 * std::f64::consts::PI * k as f64 * t[0];
                        a * phase.cos() + b * phase.sin()
                    })
                    .sum()
            })
            .unwrap()
        };
        let f1 = GridFunction::sample(r_res, 1, |t| {
            1.0 + (2.0 * std::f64::consts::PI * 3.0 * t[0]).cos()
        })
        .unwrap();
        let f2 = GridFunction::sample(r_res, 1, |t| {
            0.5 + 0.2 * (2.0 * std::f64::consts::PI * 5.0 * t[0]).sin()
        })
        .unwrap();
        let g1 = f1.periodize(p).unwrap();
        let g2 = f2.periodize(p).unwrap();
        let p1 = random_trig();
        let p2 = random_trig();
        let lhs = crate::grid::convolve_functions(
            &g1.pointwise_mul(&p1).unwrap(),
            &g2.pointwise_mul(&p2).unwrap(),
        )
        .unwrap();
        let rhs = crate::grid::convolve_functions(&g1, &g2)
            .unwrap()
            .pointwise_mul(&crate::grid::convolve_functions(&p1, &p2).unwrap())
            .unwrap();
        let worst = lhs
            .values()
            .iter()
            .zip(rhs.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "product identity residual {worst}");
    }

    #[test]
    fn periodized_spectrum_lives_on_sublattice() {
        let r_res = 64usize;
        let p = 4usize;
        let f = GridFunction::sample(r_res, 1, |t| {
            1.0 + (2.0 * std::f64::consts::PI * t[0]).cos()
                + 0.4 * (2.0 * std::f64::consts::PI * 3.0 * t[0]).sin()
        })
        .unwrap();
        let per = f.periodize(p).unwrap();
        let spec = per.dft().unwrap();
        for (freq, v) in spec.iter_centered() {
            if freq[0].rem_euclid(p as i64) != 0 {
                assert!(v.norm() < 1e-12, "leakage {} at {:?}", v.norm(), freq);
            }
        }
        // band-limited input: coefficient at kp equals f̂(k)
        let fspec = f.dft().unwrap();
        for k in [-3i64, -1, 0, 1, 3] {
            let lhs = spec.at(&[k * p as i64]);
            let rhs = fspec.at(&[k]);
            assert!((lhs - rhs).norm() < 1e-12, "k={k}");
        }
    }
}
