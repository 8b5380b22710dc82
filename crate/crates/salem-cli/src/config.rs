//! Experiment configuration: TOML on disk (JSON accepted as a mirror),
//! internally tagged by `kind`, with unknown keys rejected.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub d: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExperimentConfig {
    /// Sample random sparse sets and certify the selected events per trial.
    SampleCertify {
        seed: u64,
        trials: usize,
        grid: GridSection,
        beta: f64,
        #[serde(default)]
        atom_count: Option<usize>,
        h: u32,
        ell_max: u32,
        #[serde(default = "default_true")]
        fourier_decay: bool,
        /// (ell, eps numerator, eps denominator) triples.
        #[serde(default)]
        cube_fixed: Vec<(u32, u64, u64)>,
        /// (ell, beta) pairs.
        #[serde(default)]
        cube_log: Vec<(u32, f64)>,
        /// (ell, B) pairs.
        #[serde(default)]
        point_mass: Vec<(u32, f64)>,
        /// (ell, kappa) pairs.
        #[serde(default)]
        uniformity: Vec<(u32, u32)>,
    },
    /// Build F_m and verify its defining properties.
    Transfer {
        seed: u64,
        m: usize,
        k: u32,
        beta: f64,
        alpha: f64,
        eta: f64,
        ell_max: u32,
        /// Multiplier of the minimal resolution 2N(2m+1).
        #[serde(default = "default_one")]
        resolution_factor: usize,
        #[serde(default)]
        psi: PsiSection,
    },
    /// Approximation-step distance components over a sweep of m values.
    ApproxStep {
        seed: u64,
        m_values: Vec<usize>,
        k: u32,
        beta: f64,
        alpha: f64,
        ell_max: u32,
        /// Amplitude of the cosine test input g = 1 + amplitude·cos(2πt).
        cosine_amplitude: f64,
        eps_net: f64,
        #[serde(default)]
        psi: PsiSection,
    },
    /// Discrete restriction inequality over randomized instances.
    Restrict {
        seed: u64,
        grid: GridSection,
        instances: usize,
        orders: Vec<u32>,
        atom_count: usize,
    },
    /// Bochner-Riesz multiplier sweeps: kernel norms and annulus ratios.
    Multiplier {
        seed: u64,
        grid: GridSection,
        beta: f64,
        alpha: f64,
        lambda: f64,
        windows: Vec<usize>,
        /// Frequency units per torus unit for the measure embedding.
        embed_scale: usize,
        q_list: Vec<f64>,
        /// Dyadic annulus radii for the operator-bound sweep.
        radii: Vec<f64>,
        p: f64,
        q: f64,
        batch: usize,
    },
    /// Spectral energies, ball profiles and B_ρ blocks.
    Energy {
        seed: u64,
        grid: GridSection,
        beta: f64,
        alpha: f64,
        gamma_list: Vec<f64>,
        rho_list: Vec<f64>,
    },
    /// Concentration-bound suite with Monte Carlo tails.
    Concentration {
        seed: u64,
        trials: usize,
        rademacher_m: usize,
        character_m: usize,
        character_n: usize,
        thresholds: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PsiSection {
    #[default]
    Constant,
    ExpSqrtLog,
    InverseLog,
    InverseLogLog,
}

impl From<PsiSection> for salem_core::ModulusPsi {
    fn from(section: PsiSection) -> Self {
        match section {
            PsiSection::Constant => salem_core::ModulusPsi::Constant,
            PsiSection::ExpSqrtLog => salem_core::ModulusPsi::ExpSqrtLog,
            PsiSection::InverseLog => salem_core::ModulusPsi::InverseLog,
            PsiSection::InverseLogLog => salem_core::ModulusPsi::InverseLogLog,
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text)
                .map_err(|e| anyhow::anyhow!("invalid TOML config: {e}")),
            Some("json") => serde_json::from_str(&text).map_err(|e| {
                anyhow::anyhow!(
                    "invalid JSON config at line {} column {}: {e}",
                    e.line(),
                    e.column()
                )
            }),
            other => bail!("unsupported config extension {other:?} (use .toml or .json)"),
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            ExperimentConfig::SampleCertify { seed, .. }
            | ExperimentConfig::Transfer { seed, .. }
            | ExperimentConfig::ApproxStep { seed, .. }
            | ExperimentConfig::Restrict { seed, .. }
            | ExperimentConfig::Multiplier { seed, .. }
            | ExperimentConfig::Energy { seed, .. }
            | ExperimentConfig::Concentration { seed, .. } => *seed,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ExperimentConfig::SampleCertify { .. } => "sample-certify",
            ExperimentConfig::Transfer { .. } => "transfer",
            ExperimentConfig::ApproxStep { .. } => "approx-step",
            ExperimentConfig::Restrict { .. } => "restrict",
            ExperimentConfig::Multiplier { .. } => "multiplier",
            ExperimentConfig::Energy { .. } => "energy",
            ExperimentConfig::Concentration { .. } => "concentration",
        }
    }
}
