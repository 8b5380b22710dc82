//! Dense real samples of a function on 𝕋^d at the points {j/R}^d.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::grid::fft::FftEngine;
use crate::grid::range_sum::RangeSum;
use crate::grid::spectrum::Spectrum;

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    resolution: usize,
    dim: usize,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(resolution: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        if resolution < 2 {
            return Err(CoreError::domain("resolution R must be >= 2"));
        }
        let cells = crate::grid::cell_count(resolution, dim, crate::grid::DEFAULT_CELL_BUDGET)?;
        if values.len() != cells {
            return Err(CoreError::domain("value array length != R^d"));
        }
        Ok(GridFunction { resolution, dim, values })
    }

    pub fn constant(resolution: usize, dim: usize, value: f64) -> Result<Self> {
        let cells = crate::grid::cell_count(resolution, dim, crate::grid::DEFAULT_CELL_BUDGET)?;
        GridFunction::new(resolution, dim, vec![value; cells])
    }

    /// Sample a continuum function at the grid points {j/R}^d.
    pub fn sample(
        resolution: usize,
        dim: usize,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let cells = crate::grid::cell_count(resolution, dim, crate::grid::DEFAULT_CELL_BUDGET)?;
        let mut values = vec![0.0; cells];
        let mut point = vec![0usize; dim];
        let mut coords = vec![0.0; dim];
        for (idx, slot) in values.iter_mut().enumerate() {
            decompose(idx, resolution, dim, &mut point);
            for k in 0..dim {
                coords[k] = point[k] as f64 / resolution as f64;
            }
            *slot = f(&coords);
        }
        GridFunction::new(resolution, dim, values)
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point_of(&self, mut idx: usize) -> Vec<usize> {
        let mut point = vec![0; self.dim];
        for k in (0..self.dim).rev() {
            point[k] = idx % self.resolution;
            idx /= self.resolution;
        }
        point
    }

    pub fn linear_index(&self, point: &[usize]) -> usize {
        let mut idx = 0;
        for &c in point {
            idx = idx * self.resolution + (c % self.resolution);
        }
        idx
    }

    /// Mean value (1/R^d) Σ values = ∫ f.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |acc, &v| acc.min(v))
    }

    /// Normalized L^p norm (∫|f|^p)^{1/p} with the mean convention.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_norm();
        }
        let mean_pow = self
            .values
            .iter()
            .map(|v| v.abs().powf(p))
            .sum::<f64>()
            / self.values.len() as f64;
        mean_pow.powf(1.0 / p)
    }

    /// Fourier coefficients f̂(r) = (1/R^d) Σ_x f(x) e^{−2πi r·x/R}, so the
    /// mean sits at r = 0.
    pub fn dft(&self) -> Result<Spectrum> {
        let engine = FftEngine::new(self.resolution, self.dim)?;
        let mut data: Vec<Complex64> =
            self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        engine.forward(&mut data);
        let scale = 1.0 / self.values.len() as f64;
        for v in &mut data {
            *v *= scale;
        }
        Ok(Spectrum::from_fft_order(self.resolution, self.dim, data))
    }

    /// Synthesize a real function from Fourier coefficients:
    /// f(x) = Σ_r f̂(r) e^{+2πi r·x/R}.
    pub fn from_spectrum(spectrum: &Spectrum) -> Result<Self> {
        let engine = FftEngine::new(spectrum.side(), spectrum.dim())?;
        let mut data = spectrum.values().to_vec();
        engine.inverse(&mut data);
        let values = data.iter().map(|v| v.re).collect();
        GridFunction::new(spectrum.side(), spectrum.dim(), values)
    }

    /// ∫_B f over a wrapped half-open box of lattice cells: (1/R^d) Σ_{x∈B} f(x).
    pub fn box_integral(&self, corner: &[usize], sides: &[usize]) -> Result<f64> {
        let shape = vec![self.resolution; self.dim];
        let table = RangeSum::new(&shape, &self.values)?;
        Ok(table.wrapped_box_sum(corner, sides)? / self.values.len() as f64)
    }

    /// Pointwise product.
    pub fn pointwise_mul(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.resolution != other.resolution || self.dim != other.dim {
            return Err(CoreError::config("grid function shape mismatch"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        GridFunction::new(self.resolution, self.dim, values)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.resolution != other.resolution || self.dim != other.dim {
            return Err(CoreError::config("grid function shape mismatch"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        GridFunction::new(self.resolution, self.dim, values)
    }

    pub fn add_scalar(&self, c: f64) -> GridFunction {
        let values = self.values.iter().map(|v| v + c).collect();
        GridFunction { resolution: self.resolution, dim: self.dim, values }
    }

    /// Export as flat binary: values row-major, 8-byte little-endian floats,
    /// with a JSON sidecar header `{d, R}` at `<path>.json`.
    pub fn export_flat(&self, path: &std::path::Path) -> Result<()> {
        let mut bytes = Vec::with_capacity(self.values.len() * 8);
        for &v in &self.values {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        let sidecar = format!("{{\"d\": {}, \"R\": {}}}\n", self.dim, self.resolution);
        let sidecar_path = path.with_extension(match path.extension() {
            Some(ext) => format!("{}.json", ext.to_string_lossy()),
            None => "json".to_string(),
        });
        std::fs::write(path, bytes)
            .and_then(|()| std::fs::write(sidecar_path, sidecar))
            .map_err(|e| CoreError::Config(format!("write failed: {e}")))
    }

    /// Inverse of [`export_flat`].
    pub fn import_flat(path: &std::path::Path) -> Result<Self> {
        let sidecar_path = path.with_extension(match path.extension() {
            Some(ext) => format!("{}.json", ext.to_string_lossy()),
            None => "json".to_string(),
        });
        let header: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(&sidecar_path)
                .map_err(|e| CoreError::Config(format!("missing sidecar: {e}")))?,
        )
        .map_err(|e| CoreError::Config(format!("bad sidecar: {e}")))?;
        let dim = header["d"]
            .as_u64()
            .ok_or_else(|| CoreError::config("sidecar lacks d"))? as usize;
        let resolution = header["R"]
            .as_u64()
            .ok_or_else(|| CoreError::config("sidecar lacks R"))? as usize;
        let bytes = std::fs::read(path)
            .map_err(|e| CoreError::Config(format!("read failed: {e}")))?;
        if bytes.len() % 8 != 0 {
            return Err(CoreError::config("binary length not a multiple of 8"));
        }
        let values: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        GridFunction::new(resolution, dim, values)
    }

    /// The p-periodization Per_p f(t) = f(pt mod 1), by exact index remapping.
    /// Requires p | R.
    pub fn periodize(&self, p: usize) -> Result<GridFunction> {
        if p == 0 || self.resolution % p != 0 {
            return Err(CoreError::config(format!(
                "periodization order {p} must divide resolution {}",
                self.resolution
            )));
        }
        let mut values = vec![0.0; self.values.len()];
        let mut point = vec![0usize; self.dim];
        for (idx, slot) in values.iter_mut().enumerate() {
            decompose(idx, self.resolution, self.dim, &mut point);
            let mut src = 0usize;
            for &c in &point {
                src = src * self.resolution + (c * p) % self.resolution;
            }
            *slot = self.values[src];
        }
        GridFunction::new(self.resolution, self.dim, values)
    }
}

fn decompose(mut idx: usize, side: usize, dim: usize, out: &mut [usize]) {
    for k in (0..dim).rev() {
        out[k] = idx % side;
        idx /= side;
    }
}
