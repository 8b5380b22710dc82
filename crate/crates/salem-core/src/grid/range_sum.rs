//! d-dimensional summed-area table with cyclic box queries.
//!
//! Preprocessing is one prefix pass per axis (O(cells·d)); a wrapped box query
//! splits each axis range into at most two plain intervals and combines the
//! resulting sub-boxes by inclusion-exclusion, O(4^d) per query.

use crate::error::{CoreError, Result};

pub struct RangeSum {
    shape: Vec<usize>,
    strides: Vec<usize>,
    prefix: Vec<f64>,
}

impl RangeSum {
    pub fn new(shape: &[usize], values: &[f64]) -> Result<Self> {
        let total: usize = shape.iter().product();
        if values.len() != total {
            return Err(CoreError::domain("value array length != product(shape)"));
        }
        if shape.is_empty() || shape.iter().any(|&s| s == 0) {
            return Err(CoreError::domain("empty shape"));
        }
        let d = shape.len();
        let mut strides = vec![1usize; d];
        for k in (0..d.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * shape[k + 1];
        }
        let mut prefix = values.to_vec();
        // Running prefix along each axis in turn.
        for axis in 0..d {
            let stride = strides[axis];
            let len = shape[axis];
            let block = stride * len;
            for base in (0..total).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for i in 1..len {
                        prefix[start + i * stride] += prefix[start + (i - 1) * stride];
                    }
                }
            }
        }
        Ok(RangeSum { shape: shape.to_vec(), strides, prefix })
    }

    /// Sum over the plain (non-wrapping) half-open box ∏ [lo_k, hi_k).
    pub fn box_sum(&self, lo: &[usize], hi: &[usize]) -> Result<f64> {
        let d = self.shape.len();
        if lo.len() != d || hi.len() != d {
            return Err(CoreError::domain("box rank mismatch"));
        }
        for k in 0..d {
            if lo[k] > hi[k] || hi[k] > self.shape[k] {
                return Err(CoreError::domain("box out of bounds"));
            }
        }
        // Inclusion-exclusion over the 2^d corners.
        let mut sum = 0.0;
        for mask in 0..(1usize << d) {
            let mut idx = 0usize;
            let mut parity = 0usize;
            let mut degenerate = false;
            for k in 0..d {
                let bound = if mask & (1 << k) == 0 {
                    parity += 1;
                    lo[k]
                } else {
                    hi[k]
                };
                if bound == 0 {
                    degenerate = true;
                    break;
                }
                idx += (bound - 1) * self.strides[k];
            }
            if !degenerate {
                let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * self.prefix[idx];
            }
        }
        Ok(sum)
    }

    /// Sum over the cyclic half-open box with the given corner and per-axis
    /// side lengths, wrapping around each axis as needed.
    pub fn wrapped_box_sum(&self, corner: &[usize], sides: &[usize]) -> Result<f64> {
        let d = self.shape.len();
        if corner.len() != d || sides.len() != d {
            return Err(CoreError::domain("box rank mismatch"));
        }
        // Each axis contributes one or two plain segments.
        let mut segments: Vec<Vec<(usize, usize)>> = Vec::with_capacity(d);
        for k in 0..d {
            let n = self.shape[k];
            if sides[k] == 0 || sides[k] > n {
                return Err(CoreError::domain("box side out of range"));
            }
            let start = corner[k] % n;
            let end = start + sides[k];
            if end <= n {
                segments.push(vec![(start, end)]);
            } else {
                segments.push(vec![(start, n), (0, end - n)]);
            }
        }
        let mut sum = 0.0;
        let mut choice = vec![0usize; d];
        loop {
            let lo: Vec<usize> = (0..d).map(|k| segments[k][choice[k]].0).collect();
            let hi: Vec<usize> = (0..d).map(|k| segments[k][choice[k]].1).collect();
            sum += self.box_sum(&lo, &hi)?;
            // advance the mixed-radix counter over segment choices
            let mut k = 0;
            loop {
                if k == d {
                    return Ok(sum);
                }
                choice[k] += 1;
                if choice[k] < segments[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
}
