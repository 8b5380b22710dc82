//! Random sparse samples σ_m on (Γ_N)^d and per-trial certification of the
//! sparse-set events: Fourier decay, cube regularity, point-mass bounds and
//! uniformity of high convolution powers.

pub mod calibration;
pub mod certify;
pub mod constants;
pub mod increments;

pub use calibration::CalibrationDefaults;
pub use certify::{
    certify_cube_regularity, certify_fourier_decay, certify_point_mass, certify_uniformity,
    uniformity_statistic, CubeMode, EventReport, Witness,
};
pub use constants::{binomial, RegularityConstants};
pub use increments::conv_increment;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::grid::{AtomicMeasure, TorusGrid};
use crate::rng::SplitMix64;

/// Configuration of a sampling experiment.
#[derive(Debug, Clone, Serialize)]
pub struct SampleConfig {
    pub grid: TorusGrid,
    /// Sparsity exponent β ∈ (0, d].
    pub beta: f64,
    /// Atom count; defaults to ⌊N^β⌋.
    pub atom_count: usize,
    pub seed: u64,
    pub trial_count: usize,
    /// Confidence exponent h ≥ 1.
    pub h: u32,
    /// Maximal convolution order 𝔫; gcd(𝔫!, N) = 1 is enforced.
    pub ell_max: u32,
}

impl SampleConfig {
    pub fn new(
        grid: TorusGrid,
        beta: f64,
        atom_count: Option<usize>,
        seed: u64,
        trial_count: usize,
        h: u32,
        ell_max: u32,
    ) -> Result<Self> {
        let d = grid.dim() as f64;
        if beta <= 0.0 || beta > d {
            return Err(CoreError::domain(format!("beta {beta} outside (0, {d}]")));
        }
        if h == 0 {
            return Err(CoreError::domain("confidence exponent h must be >= 1"));
        }
        let n = grid.side();
        if n <= 2 * ell_max as usize {
            return Err(CoreError::domain(format!(
                "need N > 2·ell_max, got N={n}, ell_max={ell_max}"
            )));
        }
        for k in 2..=(ell_max as usize) {
            if num::integer::gcd(k, n) != 1 {
                return Err(CoreError::domain(format!(
                    "gcd(ell_max!, N) = 1 violated: {k} divides N = {n}"
                )));
            }
        }
        let atom_count = atom_count.unwrap_or(((n as f64).powf(beta)).floor() as usize);
        if atom_count == 0 {
            return Err(CoreError::domain("atom count P must be >= 1"));
        }
        Ok(SampleConfig { grid, beta, atom_count, seed, trial_count, h, ell_max })
    }
}

/// One trial's draw: the ordered atom list and the measure σ_m it sums to.
#[derive(Debug, Clone)]
pub struct SampleDraw {
    pub trial: u64,
    pub atoms: Vec<Vec<usize>>,
    pub sigma: AtomicMeasure,
}

/// Draw the P i.i.d. uniform atoms of one trial. Atom collisions are allowed:
/// σ_m is a sum of Dirac masses with multiplicity.
pub fn sample_points(config: &SampleConfig, trial: u64) -> Result<SampleDraw> {
    let mut rng = SplitMix64::for_trial(config.seed, trial);
    let d = config.grid.dim();
    let n = config.grid.side() as u64;
    let atoms: Vec<Vec<usize>> = (0..config.atom_count)
        .map(|_| (0..d).map(|_| rng.next_below(n) as usize).collect())
        .collect();
    let sigma = AtomicMeasure::from_atoms(config.grid, &atoms)?;
    Ok(SampleDraw { trial, atoms, sigma })
}

/// Which certifiers a trial run evaluates.
#[derive(Debug, Clone, Serialize)]
pub struct CertifierSelection {
    pub fourier_decay: bool,
    pub cube_fixed: Vec<(u32, u64, u64)>, // (ell, eps_num, eps_den)
    pub cube_log: Vec<(u32, f64)>,        // (ell, beta)
    pub point_mass: Vec<(u32, f64)>,      // (ell, B)
    pub uniformity: Vec<(u32, u32)>,      // (ell, kappa)
}

impl Default for CertifierSelection {
    fn default() -> Self {
        CertifierSelection {
            fourier_decay: true,
            cube_fixed: Vec::new(),
            cube_log: Vec::new(),
            point_mass: Vec::new(),
            uniformity: Vec::new(),
        }
    }
}

/// Events of a single trial, in a fixed serialization order.
#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub trial: u64,
    pub atoms: Vec<Vec<usize>>,
    pub events: Vec<EventReport>,
}

/// Aggregate over all trials.
#[derive(Debug, Clone, Serialize)]
pub struct AggregateReport {
    pub trials: usize,
    /// (event name, pass count, worst observed/threshold ratio).
    pub per_event: Vec<EventSummary>,
    /// Index of the first trial passing every event, if any.
    pub existence_witness: Option<u64>,
    /// Atom multiset of that witness trial.
    pub witness_atoms: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EventSummary {
    pub event: String,
    pub pass_count: usize,
    pub pass_rate: f64,
    pub worst_observed: f64,
    pub worst_ratio: f64,
}

/// Run T independent trials and evaluate the selected certifiers on each.
/// Trials are computed in parallel; the reduction is by trial index, so the
/// output is independent of the parallelism level.
pub fn run_trials(
    config: &SampleConfig,
    selection: &CertifierSelection,
) -> Result<(Vec<TrialReport>, AggregateReport)> {
    let defaults = CalibrationDefaults::load();
    let reports: Result<Vec<TrialReport>> = (0..config.trial_count as u64)
        .into_par_iter()
        .map(|trial| run_one_trial(config, selection, &defaults, trial))
        .collect();
    let reports = reports?;
    let aggregate = aggregate(&reports);
    Ok((reports, aggregate))
}

fn run_one_trial(
    config: &SampleConfig,
    selection: &CertifierSelection,
    defaults: &CalibrationDefaults,
    trial: u64,
) -> Result<TrialReport> {
    let draw = sample_points(config, trial)?;
    let mut events = Vec::new();
    if selection.fourier_decay {
        events.push(certify_fourier_decay(&draw.sigma, config.h, trial)?);
    }
    for &(ell, eps_num, eps_den) in &selection.cube_fixed {
        events.push(certify_cube_regularity(
            &draw.sigma,
            ell,
            CubeMode::Fixed { eps_num, eps_den },
            config.h,
            trial,
        )?);
    }
    for &(ell, beta) in &selection.cube_log {
        events.push(certify_cube_regularity(
            &draw.sigma,
            ell,
            CubeMode::Log { beta },
            config.h,
            trial,
        )?);
    }
    for &(ell, b) in &selection.point_mass {
        events.push(certify_point_mass(
            &draw.sigma,
            ell,
            b,
            defaults.point_mass_m0,
            trial,
        )?);
    }
    for &(ell, kappa) in &selection.uniformity {
        events.push(certify_uniformity(
            &draw.sigma,
            ell,
            kappa,
            defaults.uniformity_c_cal,
            trial,
        )?);
    }
    Ok(TrialReport { trial, atoms: draw.atoms, events })
}

fn aggregate(reports: &[TrialReport]) -> AggregateReport {
    let mut per_event: Vec<EventSummary> = Vec::new();
    for report in reports {
        for event in &report.events {
            let slot = per_event.iter_mut().find(|s| s.event == event.event);
            let ratio = if event.threshold > 0.0 {
                event.observed / event.threshold
            } else {
                f64::INFINITY
            };
            match slot {
                Some(summary) => {
                    if event.pass {
                        summary.pass_count += 1;
                    }
                    summary.worst_observed = summary.worst_observed.max(event.observed);
                    summary.worst_ratio = summary.worst_ratio.max(ratio);
                }
                None => per_event.push(EventSummary {
                    event: event.event.clone(),
                    pass_count: usize::from(event.pass),
                    pass_rate: 0.0,
                    worst_observed: event.observed,
                    worst_ratio: ratio,
                }),
            }
        }
    }
    for summary in &mut per_event {
        summary.pass_rate = summary.pass_count as f64 / reports.len().max(1) as f64;
    }
    let existence_witness = reports
        .iter()
        .find(|r| r.events.iter().all(|e| e.pass))
        .map(|r| r.trial);
    let witness_atoms = existence_witness.and_then(|trial| {
        reports
            .iter()
            .find(|r| r.trial == trial)
            .map(|r| r.atoms.clone())
    });
    AggregateReport {
        trials: reports.len(),
        per_event,
        existence_witness,
        witness_atoms,
    }
}

/// Serialize trial reports as JSON Lines, one event per line, in trial order.
pub fn reports_to_jsonl(reports: &[TrialReport]) -> String {
    let mut out = String::new();
    for report in reports {
        for event in &report.events {
            #[derive(Serialize)]
            struct Line<'a> {
                trial: u64,
                #[serde(flatten)]
                event: &'a EventReport,
            }
            out.push_str(
                &serde_json::to_string(&Line { trial: report.trial, event })
                    .expect("event reports serialize"),
            );
            out.push('\n');
        }
    }
    out
}
