//! Moduli of continuity ψ, C^{ρ,ψ} norm estimation, spectral energy
//! integrals, ball-mass profiles ϖ(r) and dyadic spectral blocks B_ρ(μ).

mod energy;
mod holder;
mod profile;

pub use energy::{energy_spectral, EnergyReport};
pub use holder::{holder_norm, holder_omega, HolderEstimate};
pub use profile::{b_rho_blocks, ball_mass_profile, BallProfileRow, BlockRow};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// A modulus of continuity: nondecreasing, bounded, slowly varying in the
/// sense that t^{−ε}ψ(t) → ∞ for every ε > 0. Only the small-t behaviour
/// matters; above the variant's cutoff the value is held constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "variant")]
pub enum ModulusPsi {
    /// ψ ≡ 1 (plain Hölder spaces).
    Constant,
    /// ψ(t) = exp(−√(log 1/t)) for t ≤ e^{−1}.
    ExpSqrtLog,
    /// ψ(t) = 1/log(1/t) for t ≤ e^{−1}.
    InverseLog,
    /// ψ(t) = 1/log log(1/t) for t ≤ e^{−e}.
    InverseLogLog,
}

impl ModulusPsi {
    /// Upper end of the formula's validity; the value is constant above it.
    pub fn cutoff(&self) -> f64 {
        match self {
            ModulusPsi::Constant => 1.0,
            ModulusPsi::ExpSqrtLog | ModulusPsi::InverseLog => (-1.0f64).exp(),
            ModulusPsi::InverseLogLog => (-std::f64::consts::E).exp(),
        }
    }

    /// Doubling constant C_ψ with ψ(t) ≤ C_ψ ψ(t/2); analytic values.
    pub fn doubling_constant(&self) -> f64 {
        let ln2 = std::f64::consts::LN_2;
        match self {
            ModulusPsi::Constant => 1.0,
            // sup over t of exp(√(L+log2) − √L) at L = 1
            ModulusPsi::ExpSqrtLog => ((1.0 + ln2).sqrt() - 1.0).exp(),
            // sup of log(2/t)/log(1/t) at t = e^{−1}
            ModulusPsi::InverseLog => 1.0 + ln2,
            // sup of loglog(2/t)/loglog(1/t) at t = e^{−e}
            ModulusPsi::InverseLogLog => (std::f64::consts::E + ln2).ln() / 1.0,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t <= 0.0 || !t.is_finite() {
            return Err(CoreError::domain(format!("psi argument t={t} must be positive")));
        }
        let t = t.min(self.cutoff());
        Ok(match self {
            ModulusPsi::Constant => 1.0,
            ModulusPsi::ExpSqrtLog => (-(1.0 / t).ln().sqrt()).exp(),
            ModulusPsi::InverseLog => 1.0 / (1.0 / t).ln(),
            ModulusPsi::InverseLogLog => 1.0 / (1.0 / t).ln().ln(),
        })
    }
}

/// Observed doubling constant over the dyadic grid t = cutoff·2^{−j} down to
/// `t_min`, compared against the analytic C_ψ.
pub fn psi_doubling_check(psi: ModulusPsi, t_min: f64) -> Result<(f64, bool)> {
    if t_min <= 0.0 || t_min >= 1.0 {
        return Err(CoreError::domain("t_min must lie in (0,1)"));
    }
    let mut observed = 1.0f64;
    // include a few points above the cutoff to exercise the constant zone
    let mut t = (4.0 * psi.cutoff()).min(1.0);
    while t >= t_min {
        let ratio = psi.eval(t)? / psi.eval(t / 2.0)?;
        observed = observed.max(ratio);
        t /= 2.0;
    }
    // intermediate offsets catch suprema between dyadic points
    for frac in [1.25f64, 1.5, 1.75] {
        let mut t = (frac * psi.cutoff()).min(1.0);
        while t >= t_min {
            let ratio = psi.eval(t)? / psi.eval(t / 2.0)?;
            observed = observed.max(ratio);
            t /= 2.0;
        }
    }
    let pass = observed <= psi.doubling_constant() + 1e-9;
    Ok((observed, pass))
}
