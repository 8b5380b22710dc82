//! Martingale concentration bounds and their falsification oracles:
//! Hoeffding (both branches), Azuma-Hoeffding, Bernstein, the binomial tail
//! bound 2(mp)^M/M!, the two-point MGF inequality, and Monte Carlo tail
//! frequency checks against the bounds.
//!
//! All bound evaluation happens in log space to avoid overflow; exact tails
//! are available in big-rational arithmetic for cross-checking.

use num::BigRational;
use num::{BigInt, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::rng::SplitMix64;

/// Which Appendix-A bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    HoeffdingSmallT,
    HoeffdingLargeT,
    Azuma,
    Bernstein,
}

/// Parameters of a bounded-increment martingale: increment MGF scales a_j,
/// the MGF window δ, and A = Σ a_j².
#[derive(Debug, Clone, Serialize)]
pub struct MartingaleSpec {
    pub a: Vec<f64>,
    pub delta: f64,
}

impl MartingaleSpec {
    pub fn new(a: Vec<f64>, delta: f64) -> Result<Self> {
        if a.is_empty() || a.iter().any(|&x| x <= 0.0) {
            return Err(CoreError::domain("martingale scales a_j must be positive"));
        }
        if delta <= 0.0 {
            return Err(CoreError::domain("MGF window delta must be positive"));
        }
        Ok(MartingaleSpec { a, delta })
    }

    /// A = Σ a_j², exactly as summed.
    pub fn variance_proxy(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }
}

/// log of the tail bound; exponentiate for the probability bound (clamped to
/// nothing — the bounds may exceed 1 and that is fine, they are vacuous there).
pub fn concentration_bound_log(kind: BoundKind, params: &BoundParams) -> Result<f64> {
    let ln2 = std::f64::consts::LN_2;
    match kind {
        BoundKind::HoeffdingSmallT => {
            let (a, delta, t) = params.hoeffding()?;
            if t < 0.0 || t > a * delta {
                return Err(CoreError::domain(format!(
                    "small-t branch requires 0 <= t <= A*delta = {}",
                    a * delta
                )));
            }
            Ok(ln2 - t * t / (2.0 * a))
        }
        BoundKind::HoeffdingLargeT => {
            let (a, delta, t) = params.hoeffding()?;
            if t < a * delta {
                return Err(CoreError::domain(format!(
                    "large-t branch requires t >= A*delta = {}",
                    a * delta
                )));
            }
            // grouped so that at the seam t = Aδ the expression reduces to
            // ln2 − Aδ²/2 with the same rounding as the small-t branch
            Ok(ln2 + (a * delta * delta / 2.0 - delta * t))
        }
        BoundKind::Azuma => {
            let (a, t) = params.azuma()?;
            Ok(ln2 - t * t / (2.0 * a))
        }
        BoundKind::Bernstein => {
            let (m, t) = params.bernstein()?;
            Ok(2.0 * ln2 - m as f64 * t * t / 4.0)
        }
    }
}

/// The tail bound itself.
pub fn concentration_bound(kind: BoundKind, params: &BoundParams) -> Result<f64> {
    Ok(concentration_bound_log(kind, params)?.exp())
}

/// Parameter bag for [`concentration_bound`].
#[derive(Debug, Clone, Default)]
pub struct BoundParams {
    /// A = Σ a_j² for hoeffding/azuma kinds.
    pub a: Option<f64>,
    /// MGF window for the hoeffding kinds.
    pub delta: Option<f64>,
    /// Deviation threshold.
    pub t: Option<f64>,
    /// Sample count for bernstein.
    pub m: Option<usize>,
}

impl BoundParams {
    fn hoeffding(&self) -> Result<(f64, f64, f64)> {
        match (self.a, self.delta, self.t) {
            (Some(a), Some(delta), Some(t)) if a > 0.0 && delta > 0.0 => Ok((a, delta, t)),
            _ => Err(CoreError::domain("hoeffding needs positive A, delta and t")),
        }
    }
    fn azuma(&self) -> Result<(f64, f64)> {
        match (self.a, self.t) {
            (Some(a), Some(t)) if a > 0.0 && t > 0.0 => Ok((a, t)),
            _ => Err(CoreError::domain("azuma needs positive A and t")),
        }
    }
    fn bernstein(&self) -> Result<(usize, f64)> {
        match (self.m, self.t) {
            (Some(m), Some(t)) if m > 0 && t >= 0.0 => Ok((m, t)),
            _ => Err(CoreError::domain("bernstein needs m >= 1 and t >= 0")),
        }
    }
}

/// Binomial tail Σ_{k=M}^m C(m,k) p^k versus the bound 2(mp)^M / M!.
#[derive(Debug, Clone, Serialize)]
pub struct SmallSummation {
    pub tail: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Requires 0 < p < 1, m >= 2 and 2mp <= M <= m (the bound can fail outside
/// that range).
pub fn small_summation(m: u64, p: f64, big_m: u64) -> Result<SmallSummation> {
    if !(0.0..1.0).contains(&p) || p == 0.0 {
        return Err(CoreError::domain("p must lie in (0,1)"));
    }
    if m < 2 {
        return Err(CoreError::domain("m must be >= 2"));
    }
    if (big_m as f64) < 2.0 * m as f64 * p || big_m > m {
        return Err(CoreError::domain("M must satisfy 2mp <= M <= m"));
    }
    let tail = binomial_tail_exact(m, p, big_m)
        .to_f64()
        .ok_or_else(|| CoreError::precision("tail does not fit in f64"))?;
    let log_bound = std::f64::consts::LN_2 + big_m as f64 * (m as f64 * p).ln() - ln_factorial(big_m);
    let bound = log_bound.exp();
    Ok(SmallSummation { tail, bound, pass: tail <= bound })
}

/// Exact big-rational tail using the exact rational value of the f64 `p`.
pub fn binomial_tail_exact(m: u64, p: f64, big_m: u64) -> BigRational {
    let p_rat = BigRational::from_float(p).expect("p is finite");
    let mut sum = BigRational::zero();
    let mut binom = BigInt::from(1);
    // advance C(m,k) incrementally to k = M
    for k in 0..big_m {
        binom = binom * BigInt::from(m - k) / BigInt::from(k + 1);
    }
    let mut p_pow = num::pow::pow(p_rat.clone(), big_m as usize);
    let mut k = big_m;
    loop {
        sum += BigRational::from_integer(binom.clone()) * &p_pow;
        if k == m {
            break;
        }
        binom = binom * BigInt::from(m - k) / BigInt::from(k + 1);
        p_pow *= &p_rat;
        k += 1;
    }
    sum
}

/// ln(n!) via lgamma-free exact summation (n stays small in this crate).
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Exact check of E e^{tX} <= e^{a²t²/2} for a mean-zero distribution with
/// |X| <= a, over a grid of t values. Returns the minimal slack
/// e^{a²t²/2} − E e^{tX} (negative slack below −1e−12 means failure).
#[derive(Debug, Clone, Serialize)]
pub struct MgfCheck {
    pub min_slack: f64,
    pub worst_t: f64,
    pub pass: bool,
}

/// `distribution` is a list of (value, probability) pairs.
pub fn mgf_twopoint_check(distribution: &[(f64, f64)], t_grid: &[f64]) -> Result<MgfCheck> {
    if distribution.is_empty() {
        return Err(CoreError::domain("empty distribution"));
    }
    let total_p: f64 = distribution.iter().map(|&(_, p)| p).sum();
    if (total_p - 1.0).abs() > 1e-12 {
        return Err(CoreError::domain("probabilities must sum to 1"));
    }
    let mean: f64 = distribution.iter().map(|&(x, p)| x * p).sum();
    if mean.abs() > 1e-12 {
        return Err(CoreError::domain(format!("distribution mean {mean} is not zero")));
    }
    let a = distribution
        .iter()
        .map(|&(x, _)| x.abs())
        .fold(0.0f64, f64::max);
    if a <= 0.0 {
        return Err(CoreError::domain("distribution must have a positive bound a"));
    }
    let mut min_slack = f64::INFINITY;
    let mut worst_t = 0.0;
    for &t in t_grid {
        let mgf: f64 = distribution.iter().map(|&(x, p)| p * (t * x).exp()).sum();
        let slack = (a * a * t * t / 2.0).exp() - mgf;
        if slack < min_slack {
            min_slack = slack;
            worst_t = t;
        }
    }
    Ok(MgfCheck { min_slack, worst_t, pass: min_slack >= -1e-12 })
}

/// The calculus inequality T^n/n! <= e^{−n} for n >= e²·T, checked in log
/// space.
pub fn factorial_ineq_check(t: f64, n: u64) -> Result<bool> {
    if t < 1.0 {
        return Err(CoreError::domain("factorial inequality requires T >= 1"));
    }
    if (n as f64) < std::f64::consts::E.powi(2) * t {
        return Err(CoreError::domain("hypothesis n >= e^2 T not met"));
    }
    Ok(n as f64 * t.ln() - ln_factorial(n) <= -(n as f64))
}

/// Sampling model for [`monte_carlo_tail`].
#[derive(Debug, Clone)]
pub enum TailDistribution {
    /// X_j = ±1 with equal probability.
    Rademacher { m: usize },
    /// X_j = e^{−2πi u·x_j} with x_j uniform on Z_N (the Fourier decay
    /// setting); u is any fixed nonzero frequency, 1 by default.
    UnitCharacter { m: usize, n: usize, freq: u64 },
}

impl TailDistribution {
    fn m(&self) -> usize {
        match self {
            TailDistribution::Rademacher { m } => *m,
            TailDistribution::UnitCharacter { m, .. } => *m,
        }
    }

    /// |m^{-1} Σ X_j| for one trial.
    fn sample_mean_abs(&self, rng: &mut SplitMix64) -> f64 {
        match self {
            TailDistribution::Rademacher { m } => {
                let mut sum = 0i64;
                for _ in 0..*m {
                    sum += if rng.next_u64() & 1 == 0 { 1 } else { -1 };
                }
                (sum.abs() as f64) / *m as f64
            }
            TailDistribution::UnitCharacter { m, n, freq } => {
                let mut re = 0.0f64;
                let mut im = 0.0f64;
                for _ in 0..*m {
                    let x = rng.next_below(*n as u64);
                    let phase =
                        -2.0 * std::f64::consts::PI * (*freq as f64) * (x as f64) / *n as f64;
                    re += phase.cos();
                    im += phase.sin();
                }
                (re * re + im * im).sqrt() / *m as f64
            }
        }
    }
}

/// One row of the Monte Carlo tail table.
#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub t: f64,
    pub empirical: f64,
    pub wilson_upper: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Empirical P(|m^{-1} Σ X_j| >= t) against the Bernstein bound 4e^{−mt²/4}
/// (unit modulus, M = 1). Pass requires the 99% Wilson upper confidence
/// limit to stay below the bound.
pub fn monte_carlo_tail(
    dist: &TailDistribution,
    thresholds: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<TailRow>> {
    if trials < 1000 {
        return Err(CoreError::domain("need at least 10^3 trials"));
    }
    let m = dist.m();
    let mut exceed = vec![0usize; thresholds.len()];
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial as u64);
        let value = dist.sample_mean_abs(&mut rng);
        for (slot, &t) in exceed.iter_mut().zip(thresholds) {
            if value >= t {
                *slot += 1;
            }
        }
    }
    Ok(thresholds
        .iter()
        .zip(&exceed)
        .map(|(&t, &k)| {
            let empirical = k as f64 / trials as f64;
            let wilson_upper = wilson_upper_99(k, trials);
            let bound = concentration_bound(
                BoundKind::Bernstein,
                &BoundParams { m: Some(m), t: Some(t), ..Default::default() },
            )
            .expect("valid bernstein params");
            TailRow { t, empirical, wilson_upper, bound, pass: wilson_upper <= bound }
        })
        .collect())
}

/// One-sided 99% Wilson upper confidence limit for a binomial proportion.
pub fn wilson_upper_99(successes: usize, trials: usize) -> f64 {
    // z for one-sided 99%
    const Z: f64 = 2.3263478740408408;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let spread = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center + spread) / denom).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hoeffding_params(a: f64, delta: f64, t: f64) -> BoundParams {
        BoundParams { a: Some(a), delta: Some(delta), t: Some(t), m: None }
    }

    #[test]
    fn small_t_at_zero_deviation_is_two() {
        let b = concentration_bound(BoundKind::HoeffdingSmallT, &hoeffding_params(1.0, 1.0, 0.0))
            .unwrap();
        assert_eq!(b, 2.0);
    }

    #[test]
    fn large_t_example_value() {
        // 2 e^{1/2} e^{−2} = 2 e^{−3/2} ≈ 0.44626
        let b = concentration_bound(BoundKind::HoeffdingLargeT, &hoeffding_params(1.0, 1.0, 2.0))
            .unwrap();
        assert!((b - 2.0 * (-1.5f64).exp()).abs() < 1e-12);
        assert!((b - 0.44626).abs() < 1e-5);
    }

    #[test]
    fn bernstein_example_value() {
        let b = concentration_bound(
            BoundKind::Bernstein,
            &BoundParams { m: Some(100), t: Some(0.3), ..Default::default() },
        )
        .unwrap();
        assert!((b - 4.0 * (-2.25f64).exp()).abs() < 1e-12);
        assert!((b - 0.42160).abs() < 1e-4);
    }

    #[test]
    fn wrong_branch_is_domain_error() {
        assert!(concentration_bound(
            BoundKind::HoeffdingSmallT,
            &hoeffding_params(1.0, 1.0, 2.0)
        )
        .is_err());
        assert!(concentration_bound(
            BoundKind::HoeffdingLargeT,
            &hoeffding_params(1.0, 1.0, 0.5)
        )
        .is_err());
    }

    #[test]
    fn branch_continuity_at_seam_dyadic_grid() {
        // At t = Aδ both branches evaluate to log2 − Aδ²/2; on dyadic A and δ
        // the float expressions agree exactly.
        for a_exp in -2..3i32 {
            for d_exp in -3..2i32 {
                let a = 2.0f64.powi(a_exp);
                let delta = 2.0f64.powi(d_exp);
                let t = a * delta;
                let small =
                    concentration_bound_log(BoundKind::HoeffdingSmallT, &hoeffding_params(a, delta, t))
                        .unwrap();
                let large =
                    concentration_bound_log(BoundKind::HoeffdingLargeT, &hoeffding_params(a, delta, t))
                        .unwrap();
                assert_eq!(small, large, "A={a} delta={delta}");
            }
        }
    }

    #[test]
    fn small_summation_hand_example() {
        let s = small_summation(4, 0.1, 2).unwrap();
        assert!((s.tail - 0.0641).abs() < 1e-12);
        assert!((s.bound - 0.16).abs() < 1e-12);
        assert!(s.pass);
    }

    #[test]
    fn small_summation_single_term_tail() {
        // M = m: tail = p^m and 2 m^m/m! >= 1 makes the bound hold.
        let s = small_summation(6, 0.05, 6).unwrap();
        assert!((s.tail - 0.05f64.powi(6)).abs() < 1e-18);
        assert!(s.pass);
    }

    #[test]
    fn small_summation_rejects_bad_range() {
        assert!(small_summation(10, 0.3, 2).is_err()); // M < 2mp
        assert!(small_summation(1, 0.1, 1).is_err());
        assert!(small_summation(10, 0.0, 5).is_err());
    }

    #[test]
    fn mgf_fair_coin_is_cosh() {
        let dist = [(1.0, 0.5), (-1.0, 0.5)];
        let grid: Vec<f64> = (-100..=100).map(|i| i as f64 / 10.0).collect();
        let check = mgf_twopoint_check(&dist, &grid).unwrap();
        assert!(check.pass, "min slack {}", check.min_slack);
    }

    #[test]
    fn mgf_asymmetric_bounded_distribution() {
        // {+0.5 w.p. 2/3, −1 w.p. 1/3} has mean zero, a = 1.
        let dist = [(0.5, 2.0 / 3.0), (-1.0, 1.0 / 3.0)];
        let grid: Vec<f64> = (-50..=50).map(|i| i as f64 / 10.0).collect();
        let check = mgf_twopoint_check(&dist, &grid).unwrap();
        assert!(check.pass);
    }

    #[test]
    fn mgf_rejects_nonzero_mean() {
        let dist = [(1.0, 0.6), (-1.0, 0.4)];
        assert!(mgf_twopoint_check(&dist, &[1.0]).is_err());
    }

    #[test]
    fn factorial_inequality_examples() {
        assert!(factorial_ineq_check(1.0, 8).unwrap());
        assert!(factorial_ineq_check(1.0, 7).is_err()); // below e² T
        for t10 in 10..=50u64 {
            let t = t10 as f64 / 10.0;
            let n0 = (std::f64::consts::E.powi(2) * t).ceil() as u64;
            for n in n0..n0 + 5 {
                assert!(factorial_ineq_check(t, n).unwrap(), "T={t} n={n}");
            }
        }
    }

    #[test]
    fn monte_carlo_rademacher_small() {
        let rows = monte_carlo_tail(
            &TailDistribution::Rademacher { m: 100 },
            &[0.0, 0.3],
            2000,
            9,
        )
        .unwrap();
        // t = 0: empirical 1 <= vacuous bound 4
        assert_eq!(rows[0].empirical, 1.0);
        assert!(rows[0].pass);
        assert!(rows[1].pass);
    }

    #[test]
    fn exact_tail_matches_f64_summation_small_m() {
        for m in 2..=30u64 {
            let p = 0.07;
            let big_m = ((2.0 * m as f64 * p).ceil() as u64).max(2).min(m);
            let exact = binomial_tail_exact(m, p, big_m).to_f64().unwrap();
            let mut float_sum = 0.0f64;
            for k in big_m..=m {
                let mut term = 1.0f64;
                for j in 0..k {
                    term *= (m - j) as f64 / (j + 1) as f64;
                }
                float_sum += term * p.powi(k as i32);
            }
            assert!(
                (exact - float_sum).abs() <= 1e-15 * float_sum.max(1e-300),
                "m={m}"
            );
        }
    }
}
