//! Experiment execution: runs a parsed config, writes the run directory
//! (manifest.json, events.jsonl, summary.csv, data.json) and reports the
//! hard-failure / soft-warning counts for the exit code.

use anyhow::Context;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use salem_core::concentration::{monte_carlo_tail, TailDistribution};
use salem_core::grid::{GridFunction, TorusGrid};
use salem_core::regularity::{b_rho_blocks, ball_mass_profile, energy_spectral};
use salem_core::restriction::{
    ad_regularity_diagnostic, annulus_multiplier_check, build_m_lambda, near_comb_measure,
    restriction_check, RestrictionInstance,
};
use salem_core::sampler::{
    run_trials, sample_points, CertifierSelection, SampleConfig,
};
use salem_core::transference::{
    approximation_step, build_f_m, verify_fm_properties, ApproxInput, FmParams,
};
use salem_core::SplitMix64;

use crate::config::{ExperimentConfig, GridSection};

pub struct RunOutcome {
    pub dir: PathBuf,
    pub hard_failures: usize,
    pub soft_warnings: usize,
}

pub fn execute(config: &ExperimentConfig, out_root: &Path) -> anyhow::Result<RunOutcome> {
    let config_json = serde_json::to_string_pretty(config)?;
    let hash = hex_prefix(&config_json, 12);
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let dir = out_root.join(format!("{stamp}-{hash}"));
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("cannot create run dir {}", dir.display()))?;

    let (events_jsonl, summary_csv, data, hard_failures, soft_warnings) = run_kind(config)?;

    let manifest = json!({
        "kind": config.kind_name(),
        "seed": config.seed(),
        "config_hash": hash,
        "calibration_hash": hex_prefix(salem_core::sampler::calibration::CALIBRATION_JSON, 12),
        "versions": {
            "salem_core": env!("CARGO_PKG_VERSION"),
            "salem_cli": env!("CARGO_PKG_VERSION"),
        },
        "config": serde_json::from_str::<serde_json::Value>(&config_json)?,
    });
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    std::fs::write(dir.join("events.jsonl"), events_jsonl)?;
    std::fs::write(dir.join("summary.csv"), summary_csv)?;
    std::fs::write(dir.join("data.json"), serde_json::to_string_pretty(&data)?)?;
    Ok(RunOutcome { dir, hard_failures, soft_warnings })
}

fn hex_prefix(text: &str, len: usize) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::new();
    for byte in digest.iter().take((len + 1) / 2) {
        let _ = write!(out, "{byte:02x}");
    }
    out.truncate(len);
    out
}

fn jsonl_push<T: Serialize>(buffer: &mut String, value: &T) {
    buffer.push_str(&serde_json::to_string(value).expect("serializable row"));
    buffer.push('\n');
}

type KindOutput = (String, String, serde_json::Value, usize, usize);

fn run_kind(config: &ExperimentConfig) -> anyhow::Result<KindOutput> {
    match config {
        ExperimentConfig::SampleCertify {
            seed,
            trials,
            grid,
            beta,
            atom_count,
            h,
            ell_max,
            fourier_decay,
            cube_fixed,
            cube_log,
            point_mass,
            uniformity,
        } => {
            let torus = torus(grid)?;
            let sample_config = SampleConfig::new(
                torus, *beta, *atom_count, *seed, *trials, *h, *ell_max,
            )?;
            let selection = CertifierSelection {
                fourier_decay: *fourier_decay,
                cube_fixed: cube_fixed.clone(),
                cube_log: cube_log.clone(),
                point_mass: point_mass.clone(),
                uniformity: uniformity.clone(),
            };
            let (reports, aggregate) = run_trials(&sample_config, &selection)?;
            let events = salem_core::sampler::reports_to_jsonl(&reports);
            let mut csv = String::from("event,pass_count,pass_rate,worst_observed,worst_ratio\n");
            for summary in &aggregate.per_event {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    summary.event,
                    summary.pass_count,
                    summary.pass_rate,
                    summary.worst_observed,
                    summary.worst_ratio
                );
            }
            let hard = reports
                .iter()
                .flat_map(|r| &r.events)
                .filter(|e| !e.pass)
                .count();
            let soft = reports
                .iter()
                .flat_map(|r| &r.events)
                .filter(|e| !e.warnings.is_empty())
                .count();
            Ok((events, csv, serde_json::to_value(&aggregate)?, hard, soft))
        }
        ExperimentConfig::Transfer {
            seed,
            m,
            k,
            beta,
            alpha,
            eta,
            ell_max,
            resolution_factor,
            psi,
        } => {
            let n = m.pow(*k);
            let torus = TorusGrid::new(1, n)?;
            let sample_config = SampleConfig::new(torus, *beta, None, *seed, 1, 1, *ell_max)?;
            let mu = sample_points(&sample_config, 0)?.sigma.normalized()?;
            let params = FmParams {
                m: *m,
                k: *k,
                beta: *beta,
                alpha: *alpha,
                eta: *eta,
                ell_max: *ell_max,
            };
            let resolution = 2 * n * (2 * m + 1) * resolution_factor.max(&1);
            let build = build_f_m(&mu, params, resolution)?;
            let report = verify_fm_properties(&build, (*psi).into())?;
            let mut events = String::new();
            let mut csv = String::from("name,observed,threshold,pass\n");
            for check in &report.checks {
                jsonl_push(&mut events, check);
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    check.name, check.observed, check.threshold, check.pass
                );
            }
            let hard = report.checks.iter().filter(|c| !c.pass).count();
            let soft = build.warnings.len();
            Ok((
                events,
                csv,
                json!({"checks": report.checks, "warnings": build.warnings}),
                hard,
                soft,
            ))
        }
        ExperimentConfig::ApproxStep {
            seed,
            m_values,
            k,
            beta,
            alpha,
            ell_max,
            cosine_amplitude,
            eps_net,
            psi,
        } => {
            let mut events = String::new();
            let mut csv = String::from(
                "m,hausdorff,zero_coefficient,weighted_fourier,total\n",
            );
            let mut rows = Vec::new();
            for &m in m_values {
                let n = m.pow(*k);
                let torus = TorusGrid::new(1, n)?;
                let sample_config =
                    SampleConfig::new(torus, *beta, None, *seed, 1, 1, *ell_max)?;
                let mu = sample_points(&sample_config, 0)?.sigma.normalized()?;
                let params = FmParams {
                    m,
                    k: *k,
                    beta: *beta,
                    alpha: *alpha,
                    eta: 0.5,
                    ell_max: *ell_max,
                };
                let resolution = 2 * n * (2 * m + 1);
                let build = build_f_m(&mu, params, resolution)?;
                let amplitude = *cosine_amplitude;
                let g = GridFunction::sample(resolution, 1, |t| {
                    1.0 + amplitude * (2.0 * std::f64::consts::PI * t[0]).cos()
                })?;
                let input = ApproxInput {
                    g,
                    psi: (*psi).into(),
                    alpha: *alpha,
                    ell_max: *ell_max,
                    eps_net: *eps_net,
                };
                let components = approximation_step(&build, &input)?;
                #[derive(Serialize)]
                struct Row<'a> {
                    m: usize,
                    #[serde(flatten)]
                    components: &'a salem_core::transference::MetricComponents,
                }
                jsonl_push(&mut events, &Row { m, components: &components });
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    m,
                    components.hausdorff,
                    components.zero_coefficient,
                    components.weighted_fourier,
                    components.total
                );
                rows.push((m, components));
            }
            // trend: the weighted-Fourier component should not increase in m
            let monotone = rows
                .windows(2)
                .all(|w| w[1].1.weighted_fourier <= w[0].1.weighted_fourier + 1e-12);
            let hard = usize::from(!monotone);
            let data = json!({
                "rows": rows.iter().map(|(m, c)| json!({"m": m, "components": c})).collect::<Vec<_>>(),
                "weighted_fourier_monotone": monotone,
            });
            Ok((events, csv, data, hard, 0))
        }
        ExperimentConfig::Restrict { seed, grid, instances, orders, atom_count } => {
            let torus = torus(grid)?;
            let cells = torus.cell_count();
            let mut events = String::new();
            let mut csv = String::from("instance,n,lhs,rhs,ratio\n");
            let mut hard = 0usize;
            for index in 0..*instances {
                let mut rng = SplitMix64::for_trial(*seed, index as u64);
                let atoms: Vec<Vec<usize>> = (0..*atom_count)
                    .map(|_| {
                        (0..torus.dim())
                            .map(|_| rng.next_below(torus.side() as u64) as usize)
                            .collect()
                    })
                    .collect();
                let mu = salem_core::AtomicMeasure::from_atoms(torus, &atoms)?.normalized()?;
                let weights: Vec<salem_core::Complex64> = (0..cells)
                    .map(|_| {
                        let (re, im) = rng.next_complex_gaussian();
                        salem_core::Complex64::new(re, im)
                    })
                    .collect();
                for &n in orders {
                    let instance = RestrictionInstance::new(mu.clone(), weights.clone(), n)?;
                    let check = restriction_check(&instance)?;
                    if check.ratio > 1.0 + 1e-9 {
                        hard += 1;
                    }
                    #[derive(Serialize)]
                    struct Row {
                        instance: usize,
                        n: u32,
                        lhs: f64,
                        rhs: f64,
                        ratio: f64,
                    }
                    jsonl_push(
                        &mut events,
                        &Row { instance: index, n, lhs: check.lhs, rhs: check.rhs, ratio: check.ratio },
                    );
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{}",
                        index, n, check.lhs, check.rhs, check.ratio
                    );
                }
            }
            Ok((events, csv, json!({"instances": instances, "hard_failures": hard}), hard, 0))
        }
        ExperimentConfig::Multiplier {
            seed,
            grid,
            beta,
            alpha,
            lambda,
            windows,
            embed_scale,
            q_list,
            radii,
            p,
            q,
            batch,
        } => {
            let torus = torus(grid)?;
            let sample_config = SampleConfig::new(torus, *beta, None, *seed, 1, 1, 2)?;
            let mu = sample_points(&sample_config, 0)?.sigma.normalized()?;
            let mut events = String::new();
            let mut csv = String::from("series,x,observed,threshold,ratio\n");
            let mut kernel_rows = Vec::new();
            for &window in windows {
                let build = build_m_lambda(&mu, *lambda, *alpha, window, *embed_scale, q_list)?;
                for &(qv, norm) in &build.kernel_norms {
                    jsonl_push(&mut events, &json!({"series": "kernel", "window": window, "q": qv, "norm": norm}));
                    let _ = writeln!(csv, "kernel-q{qv},{window},{norm},,");
                    kernel_rows.push((window, qv, norm));
                }
            }
            let mut annulus_rows = Vec::new();
            for &r in radii {
                let report = annulus_multiplier_check(&mu, r, *p, *q, *batch, 3, *seed)?;
                jsonl_push(&mut events, &report);
                let _ = writeln!(csv, "annulus,{r},{},,{}", report.max_ratio, report.max_ratio);
                annulus_rows.push(report);
            }
            // stability across dyadic radii: max/min ratio within a factor 4
            let ratios: Vec<f64> = annulus_rows.iter().map(|r| r.max_ratio).collect();
            let stable = match (
                ratios.iter().cloned().fold(f64::INFINITY, f64::min),
                ratios.iter().cloned().fold(0.0f64, f64::max),
            ) {
                (lo, hi) if lo > 0.0 => hi / lo <= 4.0,
                _ => true,
            };
            let hard = usize::from(!stable && ratios.len() > 1);
            Ok((
                events,
                csv,
                json!({"kernel_norms": kernel_rows, "annulus": annulus_rows, "ratio_stable": stable}),
                hard,
                0,
            ))
        }
        ExperimentConfig::Energy { seed, grid, beta, alpha, gamma_list, rho_list } => {
            let torus = torus(grid)?;
            let sample_config = SampleConfig::new(torus, *beta, None, *seed, 1, 1, 2)?;
            let mu = sample_points(&sample_config, 0)?.sigma.normalized()?;
            let comb = near_comb_measure(torus, *alpha)?;
            let mut events = String::new();
            let mut csv = String::from("series,x,value\n");
            let mut energies = Vec::new();
            for &gamma in gamma_list {
                let report = energy_spectral(&mu, gamma)?;
                jsonl_push(&mut events, &report);
                for &(j, s) in &report.shells {
                    let _ = writeln!(csv, "energy-shells-gamma{gamma},{j},{s}");
                }
                energies.push(report);
            }
            let blocks_random = b_rho_blocks(&mu, *alpha, rho_list)?;
            let blocks_comb = b_rho_blocks(&comb, *alpha, rho_list)?;
            for row in &blocks_random {
                let _ = writeln!(csv, "brho-random,{},{}", row.rho, row.value);
            }
            for row in &blocks_comb {
                let _ = writeln!(csv, "brho-comb,{},{}", row.rho, row.value);
            }
            let radii: Vec<f64> = (1..=6).map(|j| 0.5f64.powi(j)).collect();
            let profile = ball_mass_profile(&mu, &radii)?;
            for row in &profile {
                let _ = writeln!(csv, "ball-profile,{},{}", row.r_snapped, row.mass);
            }
            let diagnostic = ad_regularity_diagnostic(&mu, *alpha, 0.1, &radii, rho_list)?;
            jsonl_push(&mut events, &diagnostic);
            let data = json!({
                "energies": energies,
                "blocks_random": blocks_random,
                "blocks_comb": blocks_comb,
                "profile": profile,
                "diagnostic": diagnostic,
            });
            Ok((events, csv, data, 0, 0))
        }
        ExperimentConfig::Concentration {
            seed,
            trials,
            rademacher_m,
            character_m,
            character_n,
            thresholds,
        } => {
            let mut events = String::new();
            let mut csv = String::from("series,t,empirical,wilson_upper,bound\n");
            let mut hard = 0usize;
            let rows_r = monte_carlo_tail(
                &TailDistribution::Rademacher { m: *rademacher_m },
                thresholds,
                *trials,
                *seed,
            )?;
            for row in &rows_r {
                jsonl_push(&mut events, &json!({"series": "rademacher", "row": row}));
                let _ = writeln!(
                    csv,
                    "rademacher,{},{},{},{}",
                    row.t, row.empirical, row.wilson_upper, row.bound
                );
                hard += usize::from(!row.pass);
            }
            let rows_c = monte_carlo_tail(
                &TailDistribution::UnitCharacter {
                    m: *character_m,
                    n: *character_n,
                    freq: 1,
                },
                thresholds,
                *trials,
                seed.wrapping_add(1),
            )?;
            for row in &rows_c {
                jsonl_push(&mut events, &json!({"series": "character", "row": row}));
                let _ = writeln!(
                    csv,
                    "character,{},{},{},{}",
                    row.t, row.empirical, row.wilson_upper, row.bound
                );
                hard += usize::from(!row.pass);
            }
            Ok((
                events,
                csv,
                json!({"rademacher": rows_r, "character": rows_c}),
                hard,
                0,
            ))
        }
    }
}

fn torus(section: &GridSection) -> anyhow::Result<TorusGrid> {
    Ok(TorusGrid::new(section.d, section.n)?)
}
