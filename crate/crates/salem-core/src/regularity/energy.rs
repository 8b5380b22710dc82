//! Spectral energy integrals ℰ_γ(μ) ≍ Σ_{r≠0} |μ̂(r)|² |r|^{γ−d} with
//! per-shell sums for divergence-trend diagnosis.
//!
//! Energies are computed spectrally: the double sum over atoms diverges on
//! the diagonal for atomic measures, while the truncated frequency window is
//! the finite proxy used throughout.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::grid::{AtomicMeasure, Spectrum};

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub gamma: f64,
    /// Σ over the nonzero fundamental window.
    pub total: f64,
    /// (shell index j, Σ over 2^j ≤ |r| < 2^{j+1}).
    pub shells: Vec<(u32, f64)>,
    /// True when the last three shell sums are strictly increasing.
    pub divergence_trend: bool,
}

pub fn energy_spectral(measure: &AtomicMeasure, gamma: f64) -> Result<EnergyReport> {
    let d = measure.grid().dim() as f64;
    if gamma <= 0.0 || gamma >= d {
        return Err(CoreError::domain(format!("gamma {gamma} outside (0, {d})")));
    }
    let spectrum = measure.dft()?;
    energy_of_spectrum(&spectrum, gamma, d)
}

pub(crate) fn energy_of_spectrum(
    spectrum: &Spectrum,
    gamma: f64,
    d: f64,
) -> Result<EnergyReport> {
    let mut total = 0.0f64;
    let mut shells: Vec<f64> = Vec::new();
    for (freq, value) in spectrum.iter_centered() {
        let norm = Spectrum::freq_norm(&freq);
        if norm == 0.0 {
            continue;
        }
        let term = value.norm_sqr() * norm.powf(gamma - d);
        total += term;
        let shell = norm.log2().floor().max(0.0) as u32;
        if shells.len() <= shell as usize {
            shells.resize(shell as usize + 1, 0.0);
        }
        shells[shell as usize] += term;
    }
    // the trend ignores shells clipped by the window: shell j is complete
    // only when the annulus [2^j, 2^{j+1}) fits inside |r| ≤ ⌊R/2⌋
    let window = (spectrum.side() / 2) as f64;
    let complete = shells
        .iter()
        .enumerate()
        .take_while(|(j, _)| 2.0f64.powi(*j as i32 + 1) <= window)
        .count();
    let divergence_trend = complete >= 3 && {
        shells[complete - 1] > shells[complete - 2]
            && shells[complete - 2] > shells[complete - 3]
    };
    Ok(EnergyReport {
        gamma,
        total,
        shells: shells.into_iter().enumerate().map(|(j, s)| (j as u32, s)).collect(),
        divergence_trend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;

    #[test]
    fn uniform_comb_has_zero_energy() {
        let grid = TorusGrid::new(1, 32).unwrap();
        let tau = AtomicMeasure::lattice_comb(grid).unwrap();
        let report = energy_spectral(&tau, 0.5).unwrap();
        assert!(report.total < 1e-18);
    }

    #[test]
    fn dirac_shells_grow_geometrically() {
        // |μ̂| ≡ 1: shell j sums ≈ (count in shell)·2^{j(γ−d)} ~ 2^{jγ} in d=1
        let grid = TorusGrid::new(1, 256).unwrap();
        let delta = AtomicMeasure::dirac(grid, &[0]).unwrap();
        let report = energy_spectral(&delta, 0.7).unwrap();
        assert!(report.divergence_trend, "shells {:?}", report.shells);
    }

    #[test]
    fn gamma_domain_enforced() {
        let grid = TorusGrid::new(1, 8).unwrap();
        let delta = AtomicMeasure::dirac(grid, &[0]).unwrap();
        assert!(energy_spectral(&delta, 0.0).is_err());
        assert!(energy_spectral(&delta, 1.0).is_err());
    }

    #[test]
    fn shell_sums_match_direct_annulus_sums() {
        let grid = TorusGrid::new(2, 16).unwrap();
        let mut rng = crate::rng::SplitMix64::new(4);
        let atoms: Vec<Vec<usize>> = (0..5)
            .map(|_| vec![rng.next_below(16) as usize, rng.next_below(16) as usize])
            .collect();
        let sigma = AtomicMeasure::from_atoms(grid, &atoms).unwrap();
        let report = energy_spectral(&sigma, 1.3).unwrap();
        let spec = sigma.dft().unwrap();
        for &(j, shell_sum) in &report.shells {
            let lo = 2.0f64.powi(j as i32);
            let hi = 2.0 * lo;
            let direct: f64 = spec
                .iter_centered()
                .filter(|(freq, _)| {
                    let n = Spectrum::freq_norm(freq);
                    n >= lo && n < hi
                })
                .map(|(freq, v)| v.norm_sqr() * Spectrum::freq_norm(&freq).powf(1.3 - 2.0))
                .sum();
            assert!(
                (shell_sum - direct).abs() <= 1e-9 * direct.max(1e-12),
                "shell {j}: {shell_sum} vs {direct}"
            );
        }
    }
}
