//! Complex Fourier data indexed by centered frequencies
//! r ∈ {−⌊R/2⌋,…,⌈R/2⌉−1}^d.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// DFT image of a measure or grid function. Storage is the standard FFT
/// layout (index 0..R per axis); frequency r maps to index r mod R.
#[derive(Debug, Clone)]
pub struct Spectrum {
    side: usize,
    dim: usize,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub(crate) fn from_fft_order(side: usize, dim: usize, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), side.pow(dim as u32));
        Spectrum { side, dim, values }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Coefficient at the (possibly negative) integer frequency vector.
    pub fn at(&self, freq: &[i64]) -> Complex64 {
        self.values[self.index_of(freq)]
    }

    pub fn index_of(&self, freq: &[i64]) -> usize {
        debug_assert_eq!(freq.len(), self.dim);
        let n = self.side as i64;
        let mut idx = 0usize;
        for &f in freq {
            idx = idx * self.side + f.rem_euclid(n) as usize;
        }
        idx
    }

    /// The centered frequency vector of a storage index: residues at or above
    /// ⌈R/2⌉ fold to negatives, giving the window {−⌊R/2⌋,…,⌈R/2⌉−1}.
    pub fn freq_of(&self, mut idx: usize) -> Vec<i64> {
        let r = self.side as i64;
        let upper = div_ceil_i64(r, 2);
        let mut freq = vec![0i64; self.dim];
        for k in (0..self.dim).rev() {
            let raw = (idx % self.side) as i64;
            freq[k] = if raw >= upper { raw - r } else { raw };
            idx /= self.side;
        }
        freq
    }

    /// Iterate over (centered frequency, coefficient) pairs of the
    /// fundamental window.
    pub fn iter_centered(&self) -> impl Iterator<Item = (Vec<i64>, Complex64)> + '_ {
        (0..self.values.len()).map(move |idx| (self.freq_of(idx), self.values[idx]))
    }

    /// Euclidean norm |r| of a centered frequency vector.
    pub fn freq_norm(freq: &[i64]) -> f64 {
        freq.iter()
            .map(|&f| (f as f64) * (f as f64))
            .sum::<f64>()
            .sqrt()
    }

    /// Pointwise product, used for the convolution theorem.
    pub fn pointwise_mul(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.side != other.side || self.dim != other.dim {
            return Err(CoreError::config("spectrum shape mismatch"));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Spectrum::from_fft_order(self.side, self.dim, values))
    }

    /// Pointwise integer power.
    pub fn pointwise_pow(&self, exponent: u32) -> Spectrum {
        let values = self.values.iter().map(|v| v.powu(exponent)).collect();
        Spectrum::from_fft_order(self.side, self.dim, values)
    }

    /// Max |a−b| over the window.
    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn div_ceil_i64(a: i64, b: i64) -> i64 {
    (a + b - 1) / b
}
