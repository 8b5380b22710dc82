//! One-atom convolution increments Δ_{j,ℓ} = σ_j^{*ℓ} − σ_{j−1}^{*ℓ} and the
//! binomial identity Δ_{j,ℓ} = δ_{ℓx_j} + Σ_{k<ℓ} C(ℓ,k) δ_{(ℓ−k)x_j} * σ_{j−1}^{*k}.

use crate::error::{CoreError, Result};
use crate::grid::{convolve_measures, measure_power, AtomicMeasure};
use crate::sampler::constants::binomial;

/// Compute Δ_{j,ℓ} from σ_j = σ_{j−1} + δ_{x_j}, verifying nonnegativity and
/// the exact binomial identity along the way.
pub fn conv_increment(
    sigma_j: &AtomicMeasure,
    sigma_prev: &AtomicMeasure,
    ell: u32,
    new_atom: &[usize],
) -> Result<AtomicMeasure> {
    if sigma_j.grid() != sigma_prev.grid() {
        return Err(CoreError::config("increment measures live on different grids"));
    }
    let grid = *sigma_j.grid();
    // precondition: σ_j − σ_{j−1} = δ_{x_j}
    {
        let mut expect = sigma_prev.clone();
        expect.add_mass(new_atom, 1.0);
        if expect != *sigma_j {
            return Err(CoreError::domain(
                "sigma_j must equal sigma_{j-1} plus a unit atom at x_j",
            ));
        }
    }
    let power_j = measure_power(sigma_j, ell)?;
    let power_prev = measure_power(sigma_prev, ell)?;
    let mut delta_mass = Vec::with_capacity(power_j.masses().len());
    for (a, b) in power_j.masses().iter().zip(power_prev.masses()) {
        let diff = a - b;
        if diff < 0.0 {
            return Err(CoreError::inconsistency(format!(
                "increment has a negative mass {diff}"
            )));
        }
        delta_mass.push(diff);
    }
    let delta = AtomicMeasure::from_masses(grid, delta_mass)?;

    // binomial identity, exact in integer masses
    let mut expected = AtomicMeasure::zero(grid)?;
    if ell >= 1 {
        let scaled_atom: Vec<usize> = new_atom
            .iter()
            .map(|&c| (c * ell as usize) % grid.side())
            .collect();
        expected.add_mass(&scaled_atom, 1.0);
        for k in 1..ell {
            let shift: Vec<usize> = new_atom
                .iter()
                .map(|&c| (c * (ell - k) as usize) % grid.side())
                .collect();
            let shifted_delta = AtomicMeasure::dirac(grid, &shift)?;
            let term = convolve_measures(&shifted_delta, &measure_power(sigma_prev, k)?)?;
            let coeff = binomial(ell, k) as f64;
            for (idx, mass) in term.support() {
                expected.add_mass(&grid.point_of(idx), coeff * mass);
            }
        }
    }
    if ell >= 1 && delta != expected {
        let worst = delta
            .masses()
            .iter()
            .zip(expected.masses())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        return Err(CoreError::inconsistency(format!(
            "binomial increment identity failed, max residual {worst}"
        )));
    }
    Ok(delta)
}
