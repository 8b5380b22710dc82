//! Exact spectral and convolution machinery for random sparse measures on
//! the discrete torus (Γ_N)^d: DFTs and convolution powers of atomic
//! measures, cube range queries, per-trial certification of sparse-set
//! events (Fourier decay, cube regularity, point-mass and uniformity
//! bounds), transference to smooth periodic functions, Hölder/energy
//! regularity functionals, the discrete restriction inequality with
//! Bochner-Riesz-type multiplier diagnostics, and martingale concentration
//! bounds with Monte Carlo falsification.
//!
//! Everything is deterministic given a seed: trials re-derive their streams
//! from (master seed, trial index) and parallel execution never changes any
//! output byte.

pub mod concentration;
pub mod error;
pub mod grid;
pub mod regularity;
pub mod restriction;
pub mod rng;
pub mod sampler;
pub mod transference;

pub use error::{CoreError, Result};
pub use num_complex::Complex64;
pub use grid::{
    convolve_function_measure, convolve_functions, convolve_measures, function_power,
    hausdorff_distance, measure_power, torus_distance, AtomicMeasure, Cube, FftEngine,
    GridFunction, MeasureJson, RangeSum, Spectrum, TorusGrid,
};
pub use regularity::ModulusPsi;
pub use rng::SplitMix64;
pub use sampler::{EventReport, SampleConfig, Witness};
