//! d-dimensional DFT over cyclic index spaces of arbitrary side length.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::Result;
use crate::grid::cell_count;

/// Default cap on the number of cells of any transform (2^25 complex values,
/// ~512 MiB of scratch in the worst case).
pub const DEFAULT_CELL_BUDGET: u128 = 1 << 25;

/// Plans forward/inverse transforms once and applies them along every axis of
/// a row-major cube of shape `[side; dim]`.
pub struct FftEngine {
    side: usize,
    dim: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftEngine {
    pub fn new(side: usize, dim: usize) -> Result<Self> {
        cell_count(side, dim, DEFAULT_CELL_BUDGET)?;
        let mut planner = FftPlanner::new();
        Ok(FftEngine {
            side,
            dim,
            forward: planner.plan_fft_forward(side),
            inverse: planner.plan_fft_inverse(side),
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// In-place unnormalized forward DFT: out(r) = Σ_u in(u) e^{−2πi r·u/R}.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.apply(data, &self.forward);
    }

    /// In-place unnormalized inverse DFT: out(u) = Σ_r in(r) e^{+2πi r·u/R}.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.apply(data, &self.inverse);
    }

    fn apply(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let r = self.side;
        let total = r.pow(self.dim as u32);
        assert_eq!(data.len(), total);
        let mut line = vec![Complex64::default(); r];
        for axis in 0..self.dim {
            // Axis k has stride R^(d−1−k) in row-major order.
            let stride = r.pow((self.dim - 1 - axis) as u32);
            let block = stride * r;
            for base in (0..total).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (i, slot) in line.iter_mut().enumerate() {
                        *slot = data[start + i * stride];
                    }
                    plan.process(&mut line);
                    for (i, value) in line.iter().enumerate() {
                        data[start + i * stride] = *value;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_dft(input: &[Complex64], side: usize, dim: usize) -> Vec<Complex64> {
        let total = side.pow(dim as u32);
        let point = |mut idx: usize| -> Vec<usize> {
            let mut p = vec![0; dim];
            for k in (0..dim).rev() {
                p[k] = idx % side;
                idx /= side;
            }
            p
        };
        (0..total)
            .map(|ri| {
                let r = point(ri);
                let mut acc = Complex64::default();
                for (ui, value) in input.iter().enumerate() {
                    let u = point(ui);
                    let phase: f64 = r
                        .iter()
                        .zip(&u)
                        .map(|(&a, &b)| (a * b) as f64)
                        .sum::<f64>()
                        / side as f64;
                    acc += value * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * phase);
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_direct_summation() {
        for (side, dim) in [(5usize, 1usize), (6, 2), (4, 3)] {
            let total = side.pow(dim as u32);
            let mut rng = crate::rng::SplitMix64::new(99);
            let input: Vec<Complex64> = (0..total)
                .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                .collect();
            let mut data = input.clone();
            let engine = FftEngine::new(side, dim).unwrap();
            engine.forward(&mut data);
            let expect = direct_dft(&input, side, dim);
            for (a, b) in data.iter().zip(&expect) {
                assert!((a - b).norm() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn inverse_recovers_input() {
        let side = 9;
        let dim = 2;
        let total = side * side;
        let mut rng = crate::rng::SplitMix64::new(3);
        let input: Vec<Complex64> = (0..total)
            .map(|_| Complex64::new(rng.next_f64(), 0.0))
            .collect();
        let mut data = input.clone();
        let engine = FftEngine::new(side, dim).unwrap();
        engine.forward(&mut data);
        engine.inverse(&mut data);
        let scale = 1.0 / total as f64;
        for (a, b) in data.iter().zip(&input) {
            assert!((a * scale - b).norm() < 1e-10);
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(FftEngine::new(4096, 4).is_err());
    }
}
