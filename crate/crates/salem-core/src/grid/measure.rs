//! Nonnegative atomic measures on the lattice (Γ_N)^d.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::grid::fft::FftEngine;
use crate::grid::range_sum::RangeSum;
use crate::grid::spectrum::Spectrum;
use crate::grid::{Cube, TorusGrid};

/// A nonnegative measure with one mass per lattice cell. Masses of
/// integer-count measures (sums of Dirac masses) stay exact integers through
/// convolution; see [`crate::grid::measure_power`].
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    grid: TorusGrid,
    mass: Vec<f64>,
    total_mass: f64,
}

impl AtomicMeasure {
    pub fn zero(grid: TorusGrid) -> Result<Self> {
        let cells = grid.cell_count_checked()?;
        Ok(AtomicMeasure { grid, mass: vec![0.0; cells], total_mass: 0.0 })
    }

    /// Unit Dirac mass δ_x at a lattice point.
    pub fn dirac(grid: TorusGrid, point: &[usize]) -> Result<Self> {
        let mut measure = AtomicMeasure::zero(grid)?;
        measure.add_mass(point, 1.0);
        Ok(measure)
    }

    /// Sum of unit Dirac masses; repeated points accumulate multiplicity.
    pub fn from_atoms(grid: TorusGrid, atoms: &[Vec<usize>]) -> Result<Self> {
        let mut measure = AtomicMeasure::zero(grid)?;
        for atom in atoms {
            measure.add_mass(atom, 1.0);
        }
        Ok(measure)
    }

    pub fn from_masses(grid: TorusGrid, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != grid.cell_count_checked()? {
            return Err(CoreError::domain("mass array length != N^d"));
        }
        if mass.iter().any(|&m| m < 0.0 || !m.is_finite()) {
            return Err(CoreError::domain("masses must be nonnegative and finite"));
        }
        let total_mass = mass.iter().sum();
        Ok(AtomicMeasure { grid, mass, total_mass })
    }

    /// The lattice comb τ_N = N^{−d} Σ_{j∈Γ_N^d} δ_{j/N}.
    pub fn lattice_comb(grid: TorusGrid) -> Result<Self> {
        let cells = grid.cell_count_checked()?;
        let w = 1.0 / cells as f64;
        AtomicMeasure::from_masses(grid, vec![w; cells])
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn mass_at(&self, point: &[usize]) -> f64 {
        self.mass[self.grid.linear_index(point)]
    }

    pub fn mass_at_index(&self, idx: usize) -> f64 {
        self.mass[idx]
    }

    pub fn add_mass(&mut self, point: &[usize], amount: f64) {
        let idx = self.grid.linear_index(point);
        self.mass[idx] += amount;
        self.total_mass += amount;
    }

    /// Multiply all masses by a scalar (e.g. μ_m = σ_m/m).
    pub fn scaled(&self, factor: f64) -> AtomicMeasure {
        let mass: Vec<f64> = self.mass.iter().map(|m| m * factor).collect();
        let total_mass = self.total_mass * factor;
        AtomicMeasure { grid: self.grid, mass, total_mass }
    }

    /// Probability normalization.
    pub fn normalized(&self) -> Result<AtomicMeasure> {
        if self.total_mass <= 0.0 {
            return Err(CoreError::domain("cannot normalize a zero measure"));
        }
        Ok(self.scaled(1.0 / self.total_mass))
    }

    /// True when every mass is an exact integer count.
    pub fn is_integer_mass(&self) -> bool {
        self.mass.iter().all(|&m| m.fract() == 0.0)
    }

    /// Nonzero cells as (linear index, mass).
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0.0)
            .map(|(i, &m)| (i, m))
    }

    pub fn support_len(&self) -> usize {
        self.mass.iter().filter(|&&m| m != 0.0).count()
    }

    /// Largest single-cell mass with a witness point.
    pub fn max_point_mass(&self) -> (f64, Vec<usize>) {
        let (idx, &mass) = self
            .mass
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .expect("measure has at least one cell");
        (mass, self.grid.point_of(idx))
    }

    /// μ̂(r) = Σ_u mass(u)·e^{−2πi r·u/N}, exact up to round-off.
    pub fn dft(&self) -> Result<Spectrum> {
        let engine = FftEngine::new(self.grid.side(), self.grid.dim())?;
        let mut data: Vec<Complex64> =
            self.mass.iter().map(|&m| Complex64::new(m, 0.0)).collect();
        engine.forward(&mut data);
        Ok(Spectrum::from_fft_order(self.grid.side(), self.grid.dim(), data))
    }

    /// Exact mass of a half-open cyclic cube.
    pub fn cube_mass(&self, cube: &Cube) -> Result<f64> {
        let shape = vec![self.grid.side(); self.grid.dim()];
        let table = RangeSum::new(&shape, &self.mass)?;
        let sides = vec![cube.side; self.grid.dim()];
        table.wrapped_box_sum(&cube.corner, &sides)
    }

    /// Max cube mass over all N^d lattice corners at fixed side, with a
    /// witness cube. Summed-area preprocessing is per-call local.
    pub fn max_cube_mass(&self, side: usize) -> Result<(f64, Cube)> {
        if side == 0 || side > self.grid.side() {
            return Err(CoreError::domain(format!(
                "cube side {side} out of range 1..={}",
                self.grid.side()
            )));
        }
        let shape = vec![self.grid.side(); self.grid.dim()];
        let table = RangeSum::new(&shape, &self.mass)?;
        let sides = vec![side; self.grid.dim()];
        let mut best = f64::NEG_INFINITY;
        let mut best_corner = vec![0; self.grid.dim()];
        for idx in 0..self.grid.cell_count() {
            let corner = self.grid.point_of(idx);
            let sum = table.wrapped_box_sum(&corner, &sides)?;
            if sum > best {
                best = sum;
                best_corner = corner;
            }
        }
        Ok((best, Cube { corner: best_corner, side }))
    }

    /// JSON payload {d, N, atoms: [[[i,…], mass], …]} with atoms sorted by
    /// linear index.
    pub fn to_json(&self) -> MeasureJson {
        let atoms = self
            .support()
            .map(|(idx, mass)| (self.grid.point_of(idx), mass))
            .collect();
        MeasureJson { d: self.grid.dim(), n: self.grid.side(), atoms }
    }

    pub fn from_json(json: &MeasureJson) -> Result<Self> {
        let grid = TorusGrid::new(json.d, json.n)?;
        let mut measure = AtomicMeasure::zero(grid)?;
        for (point, mass) in &json.atoms {
            if *mass < 0.0 {
                return Err(CoreError::domain("negative atom mass"));
            }
            measure.add_mass(point, *mass);
        }
        Ok(measure)
    }
}

/// Serialization schema for [`AtomicMeasure`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub atoms: Vec<(Vec<usize>, f64)>,
}
