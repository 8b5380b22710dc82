//! The regularity constants M(ℓ,ε,h) = U(ε,h)·κ(ℓ,h) from the mutual
//! recursion
//!
//! ```text
//! M(0,ε,h) = 1
//! U(ε,h)   = max{ ⌊e^{d+2}⌋, ⌈ε^{−1}(2d+h+1)⌉ }
//! κ(ℓ,h)   = Σ_{q<ℓ} C(ℓ,q) · M(q, d(1−q/ℓ), h+1)
//! ```
//!
//! together with the variants κ̃(ℓ,β,h) (ε = β(ℓ−q)) and κ̂(ℓ,h)
//! (ε = (d/2)(1−q/ℓ)). All values are exact positive integers, kept in u128;
//! ε is carried as an exact rational so the ceiling is computed in integer
//! arithmetic. (⌊e^{d+2}⌋ is evaluated in f64, which is safe: e^{d+2} is far
//! from every integer for the d in range here.)

use std::collections::HashMap;

use num::rational::Ratio;

use crate::error::{CoreError, Result};

pub type Eps = Ratio<u64>;

/// Memoized table of the recursion for a fixed ambient dimension d.
#[derive(Debug, Clone)]
pub struct RegularityConstants {
    d: u32,
    memo: HashMap<(u32, Eps, u32), u128>,
}

impl RegularityConstants {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 || d > 8 {
            return Err(CoreError::domain("dimension d must be in 1..=8"));
        }
        Ok(RegularityConstants { d: d as u32, memo: HashMap::new() })
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    /// U(ε,h) = max{⌊e^{d+2}⌋, ⌈(2d+h+1)/ε⌉}.
    pub fn u_constant(&self, eps: Eps, h: u32) -> Result<u128> {
        self.check_eps(eps)?;
        let floor_exp = (std::f64::consts::E).powi(self.d as i32 + 2).floor() as u128;
        let numer = (2 * self.d as u64 + h as u64 + 1) * eps.denom();
        let ceil = numer.div_ceil(*eps.numer()) as u128;
        Ok(floor_exp.max(ceil))
    }

    /// κ(ℓ,h) = Σ_{q<ℓ} C(ℓ,q)·M(q, d(1−q/ℓ), h+1).
    pub fn kappa(&mut self, ell: u32, h: u32) -> Result<u128> {
        let mut sum: u128 = 0;
        for q in 0..ell {
            let eps = Ratio::new(self.d as u64 * (ell - q) as u64, ell as u64);
            let m = self.m_constant(q, eps, h + 1)?;
            sum = sum
                .checked_add(
                    binomial(ell, q)
                        .checked_mul(m)
                        .ok_or_else(|| CoreError::precision("kappa overflow"))?,
                )
                .ok_or_else(|| CoreError::precision("kappa overflow"))?;
        }
        Ok(sum)
    }

    /// κ̃(ℓ,β,h) = Σ_{q<ℓ} C(ℓ,q)·M(q, β(ℓ−q), h+1).
    pub fn kappa_tilde(&mut self, ell: u32, beta: Eps, h: u32) -> Result<u128> {
        let mut sum: u128 = 0;
        for q in 0..ell {
            let eps = beta * Ratio::from_integer((ell - q) as u64);
            let m = self.m_constant(q, eps, h + 1)?;
            sum += binomial(ell, q)
                .checked_mul(m)
                .ok_or_else(|| CoreError::precision("kappa_tilde overflow"))?;
        }
        Ok(sum)
    }

    /// κ̂(ℓ,h) = Σ_{q<ℓ} C(ℓ,q)·M(q, (d/2)(1−q/ℓ), h+1).
    pub fn kappa_hat(&mut self, ell: u32, h: u32) -> Result<u128> {
        let mut sum: u128 = 0;
        for q in 0..ell {
            let eps = Ratio::new(self.d as u64 * (ell - q) as u64, 2 * ell as u64);
            let m = self.m_constant(q, eps, h + 1)?;
            sum += binomial(ell, q)
                .checked_mul(m)
                .ok_or_else(|| CoreError::precision("kappa_hat overflow"))?;
        }
        Ok(sum)
    }

    /// M(ℓ,ε,h), exact.
    pub fn m_constant(&mut self, ell: u32, eps: Eps, h: u32) -> Result<u128> {
        self.check_eps(eps)?;
        if h == 0 {
            return Err(CoreError::domain("confidence exponent h must be >= 1"));
        }
        if ell == 0 {
            return Ok(1);
        }
        if let Some(&value) = self.memo.get(&(ell, eps, h)) {
            return Ok(value);
        }
        let u = self.u_constant(eps, h)?;
        let kappa = self.kappa(ell, h)?;
        let value = u
            .checked_mul(kappa)
            .ok_or_else(|| CoreError::precision("M overflow"))?;
        self.memo.insert((ell, eps, h), value);
        Ok(value)
    }

    /// Convenience f64 view (exact for values below 2^53).
    pub fn m_constant_f64(&mut self, ell: u32, eps: Eps, h: u32) -> Result<f64> {
        Ok(self.m_constant(ell, eps, h)? as f64)
    }

    /// The growth cap ε^{−1}(e^{d+3}ℓ²(h+ℓ))^ℓ of the constants lemma.
    pub fn growth_bound(&self, ell: u32, eps: Eps, h: u32) -> f64 {
        let base = (std::f64::consts::E).powi(self.d as i32 + 3)
            * (ell as f64).powi(2)
            * (h as f64 + ell as f64);
        let eps_f = *eps.numer() as f64 / *eps.denom() as f64;
        base.powi(ell as i32) / eps_f
    }

    fn check_eps(&self, eps: Eps) -> Result<()> {
        if *eps.numer() == 0 {
            return Err(CoreError::domain("epsilon must be positive"));
        }
        if eps > Ratio::from_integer(self.d as u64) {
            return Err(CoreError::domain(format!(
                "epsilon {eps} must be at most d = {}",
                self.d
            )));
        }
        Ok(())
    }
}

/// C(n,k) in u128.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeroth_level_is_one() {
        let mut table = RegularityConstants::new(2).unwrap();
        for h in 1..4 {
            for num in 1..5u64 {
                assert_eq!(table.m_constant(0, Ratio::new(num, 4), h).unwrap(), 1);
            }
        }
    }

    #[test]
    fn hand_unfolded_example_d1() {
        // d=1, ε=1/2, h=1: U = max{⌊e³⌋, ⌈2·4⌉} = max{20, 8} = 20,
        // κ(1,1) = M(0,·,2) = 1, so M(1,1/2,1) = 20.
        let mut table = RegularityConstants::new(1).unwrap();
        assert_eq!(table.u_constant(Ratio::new(1, 2), 1).unwrap(), 20);
        assert_eq!(table.kappa(1, 1).unwrap(), 1);
        assert_eq!(table.m_constant(1, Ratio::new(1, 2), 1).unwrap(), 20);
    }

    #[test]
    fn growth_bound_holds_on_grid() {
        for d in 1..=3usize {
            let mut table = RegularityConstants::new(d).unwrap();
            for ell in 0..=5u32 {
                for h in 1..=3u32 {
                    for num in 1..=9u64 {
                        let eps = Ratio::new(num, 10);
                        if eps >= Ratio::from_integer(d as u64) {
                            continue;
                        }
                        let m = table.m_constant(ell, eps, h).unwrap() as f64;
                        let bound = table.growth_bound(ell, eps, h);
                        assert!(
                            m <= bound * (1.0 + 1e-12),
                            "d={d} l={ell} h={h} eps={eps}: {m} > {bound}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(6, 0), 1);
        assert_eq!(binomial(6, 6), 1);
        assert_eq!(binomial(4, 5), 0);
    }

    #[test]
    fn eps_domain_checks() {
        let mut table = RegularityConstants::new(1).unwrap();
        assert!(table.m_constant(1, Ratio::new(0, 1), 1).is_err());
        assert!(table.m_constant(1, Ratio::new(3, 2), 1).is_err());
    }
}
