//! Exact arithmetic on the discrete torus (Γ_N)^d: grids, measures, grid
//! functions, spectra, cyclic convolution and cube range queries.

mod convolution;
mod fft;
mod function;
mod measure;
mod range_sum;
mod spectrum;

pub use convolution::{
    convolve_function_measure, convolve_functions, convolve_measures, function_power,
    measure_power, ROUND_TOLERANCE,
};
pub use fft::{FftEngine, DEFAULT_CELL_BUDGET};
pub use function::GridFunction;
pub use measure::{AtomicMeasure, MeasureJson};
pub use range_sum::RangeSum;
pub use spectrum::Spectrum;

use crate::error::{CoreError, Result};

/// The index space {0,…,N−1}^d identified with the subgroup Γ_N^d = {k/N}^d
/// of the torus 𝕋^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct TorusGrid {
    d: usize,
    n: usize,
}

impl TorusGrid {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(CoreError::domain("dimension d must be >= 1"));
        }
        if n < 2 {
            return Err(CoreError::domain("side length N must be >= 2"));
        }
        let grid = TorusGrid { d, n };
        grid.cell_count_checked()?;
        Ok(grid)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn side(&self) -> usize {
        self.n
    }

    /// N^d, guarded against both usize overflow and the memory budget.
    pub fn cell_count_checked(&self) -> Result<usize> {
        cell_count(self.n, self.d, DEFAULT_CELL_BUDGET)
    }

    pub fn cell_count(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// Row-major linear index of a (reduced) lattice point.
    pub fn linear_index(&self, point: &[usize]) -> usize {
        debug_assert_eq!(point.len(), self.d);
        let mut idx = 0;
        for &c in point {
            idx = idx * self.n + (c % self.n);
        }
        idx
    }

    /// Inverse of [`linear_index`].
    pub fn point_of(&self, mut idx: usize) -> Vec<usize> {
        let mut point = vec![0; self.d];
        for k in (0..self.d).rev() {
            point[k] = idx % self.n;
            idx /= self.n;
        }
        point
    }

    /// Coordinatewise sum mod N, as linear indices.
    pub fn add_points(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + y) % self.n)
            .collect()
    }

    /// The torus coordinates k/N of a lattice point.
    pub fn coords(&self, point: &[usize]) -> Vec<f64> {
        point.iter().map(|&c| c as f64 / self.n as f64).collect()
    }
}

/// Compute `n^d` with overflow and budget checks.
pub(crate) fn cell_count(n: usize, d: usize, budget: u128) -> Result<usize> {
    let mut total: u128 = 1;
    for _ in 0..d {
        total = total
            .checked_mul(n as u128)
            .ok_or(CoreError::Capacity { needed: u128::MAX, budget })?;
    }
    if total > budget {
        return Err(CoreError::Capacity { needed: total, budget });
    }
    Ok(total as usize)
}

/// A half-open cyclic cube of `side` cells per axis, corner-anchored on the
/// lattice. Its Lebesgue measure is (side/N)^d.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Cube {
    pub corner: Vec<usize>,
    pub side: usize,
}

impl Cube {
    pub fn new(corner: Vec<usize>, side: usize, grid: &TorusGrid) -> Result<Self> {
        if side == 0 || side > grid.side() {
            return Err(CoreError::domain(format!(
                "cube side {side} out of range 1..={}",
                grid.side()
            )));
        }
        if corner.len() != grid.dim() {
            return Err(CoreError::domain("cube corner dimension mismatch"));
        }
        Ok(Cube { corner, side })
    }

    /// Lebesgue measure (side/N)^d.
    pub fn measure(&self, grid: &TorusGrid) -> f64 {
        (self.side as f64 / grid.side() as f64).powi(grid.dim() as i32)
    }
}

/// Intrinsic torus distance between two points with coordinates in [0,1):
/// the Euclidean norm of the coordinatewise cyclic distances.
pub fn torus_distance(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .map(|(&a, &b)| {
            let diff = (a - b).rem_euclid(1.0);
            let cyc = diff.min(1.0 - diff);
            cyc * cyc
        })
        .sum::<f64>()
        .sqrt()
}

/// Hausdorff-type distance between two nonempty finite subsets of 𝕋^d:
/// the SUM of the two one-sided excesses (not their max).
pub fn hausdorff_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(CoreError::domain("hausdorff_distance of an empty set"));
    }
    if a[0].len() == 1 && b[0].len() == 1 && (a.len() + b.len()) > 64 {
        return Ok(hausdorff_1d(a, b));
    }
    Ok(one_sided_excess(a, b) + one_sided_excess(b, a))
}

fn one_sided_excess(from: &[Vec<f64>], to: &[Vec<f64>]) -> f64 {
    from.iter()
        .map(|x| {
            to.iter()
                .map(|y| torus_distance(x, y))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Sorted sweep for d=1; equivalent to the pairwise scan but O((|A|+|B|) log).
fn hausdorff_1d(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let prep = |s: &[Vec<f64>]| -> Vec<f64> {
        let mut v: Vec<f64> = s.iter().map(|p| p[0].rem_euclid(1.0)).collect();
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        v
    };
    let sa = prep(a);
    let sb = prep(b);
    excess_1d(&sa, &sb) + excess_1d(&sb, &sa)
}

fn excess_1d(from: &[f64], to: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for &x in from {
        // nearest neighbour in the sorted cyclic list
        let idx = to.partition_point(|&y| y < x);
        let mut best = f64::INFINITY;
        for j in [idx.wrapping_sub(1), idx, idx + 1] {
            let y = to[j.min(to.len().wrapping_sub(1)) % to.len()];
            let diff = (x - y).rem_euclid(1.0);
            best = best.min(diff.min(1.0 - diff));
        }
        // also the true wrap neighbours
        let first = to[0];
        let last = to[to.len() - 1];
        for y in [first, last] {
            let diff = (x - y).rem_euclid(1.0);
            best = best.min(diff.min(1.0 - diff));
        }
        worst = worst.max(best);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_index_roundtrip() {
        let grid = TorusGrid::new(2, 5).unwrap();
        for idx in 0..grid.cell_count() {
            assert_eq!(grid.linear_index(&grid.point_of(idx)), idx);
        }
    }

    #[test]
    fn torus_distance_wraps() {
        assert!((torus_distance(&[0.0], &[0.9]) - 0.1).abs() < 1e-12);
        let d = torus_distance(&[0.0, 0.0], &[0.5, 0.9]);
        assert!((d - (0.25f64 + 0.01).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_identical_sets_is_zero() {
        let a = vec![vec![0.0]];
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_is_sum_of_excesses() {
        // d_K({0},{0,1/2}) = 0 + 1/2 on the circle
        let a = vec![vec![0.0]];
        let b = vec![vec![0.0], vec![0.5]];
        let d = hausdorff_distance(&a, &b).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_empty_set_is_domain_error() {
        let a = vec![vec![0.0]];
        assert!(hausdorff_distance(&a, &[]).is_err());
    }

    #[test]
    fn hausdorff_1d_sweep_matches_pairwise_scan() {
        let mut rng = crate::rng::SplitMix64::new(7);
        for _ in 0..20 {
            let a: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.next_f64()]).collect();
            let b: Vec<Vec<f64>> = (0..33).map(|_| vec![rng.next_f64()]).collect();
            let fast = hausdorff_distance(&a, &b).unwrap();
            let brute = one_sided_excess(&a, &b) + one_sided_excess(&b, &a);
            assert!((fast - brute).abs() < 1e-12, "fast={fast} brute={brute}");
        }
    }

    #[test]
    fn cube_measure() {
        let grid = TorusGrid::new(2, 16).unwrap();
        let cube = Cube::new(vec![3, 15], 2, &grid).unwrap();
        assert!((cube.measure(&grid) - (2.0f64 / 16.0).powi(2)).abs() < 1e-15);
    }
}
