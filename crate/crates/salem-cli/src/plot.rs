//! Tidy plot-data emission from a completed run directory.

use anyhow::{bail, Context};
use serde_json::Value;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use salem_core::grid::AtomicMeasure;
use salem_core::TorusGrid;

/// Exit code used when a run directory lacks the requested data.
pub const EXIT_MISSING_DATA: i32 = 66;

pub fn emit_plotdata(run_dir: &Path, functional: &str) -> anyhow::Result<PathBuf> {
    let data: Value = read_json(&run_dir.join("data.json"))?;
    let manifest: Value = read_json(&run_dir.join("manifest.json"))?;
    let csv = match functional {
        "decay" => decay_series(&data, &manifest)?,
        "brho" => brho_series(&data)?,
        "holder" => holder_series(&data)?,
        "multiplier" => multiplier_series(&data)?,
        other => bail!("unknown functional {other} (decay | brho | holder | multiplier)"),
    };
    let plots = run_dir.join("plots");
    std::fs::create_dir_all(&plots)?;
    let path = plots.join(format!("{functional}.csv"));
    std::fs::write(&path, csv)?;
    Ok(path)
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("missing run data: {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

/// Columns (|r|, |mu_hat|, threshold) for the pinned witness of a
/// sample-certify run.
fn decay_series(data: &Value, manifest: &Value) -> anyhow::Result<String> {
    let atoms = data
        .get("witness_atoms")
        .and_then(|v| v.as_array())
        .context("run has no witness atom set (need a sample-certify run with an all-pass trial)")?;
    let config = manifest.get("config").context("manifest lacks config")?;
    let d = config["grid"]["d"].as_u64().context("grid.d")? as usize;
    let n = config["grid"]["n"].as_u64().context("grid.n")? as usize;
    let h = config["h"].as_u64().unwrap_or(1) as f64;
    let grid = TorusGrid::new(d, n)?;
    let points: Vec<Vec<usize>> = atoms
        .iter()
        .map(|a| {
            a.as_array()
                .map(|coords| {
                    coords
                        .iter()
                        .map(|c| c.as_u64().unwrap_or(0) as usize)
                        .collect()
                })
                .unwrap_or_default()
        })
        .collect();
    let sigma = AtomicMeasure::from_atoms(grid, &points)?;
    let m = sigma.total_mass();
    let mu = sigma.scaled(1.0 / m);
    let spectrum = mu.dft()?;
    let threshold =
        4.0 * (8.0 * (n as f64).powf(d as f64 + h)).ln().sqrt() / m.sqrt();
    let mut rows: Vec<(f64, f64)> = spectrum
        .iter_centered()
        .filter(|(freq, _)| freq.iter().any(|&f| f != 0))
        .map(|(freq, v)| (salem_core::Spectrum::freq_norm(&freq), v.norm()))
        .collect();
    rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut csv = String::from("abs_r,mu_hat_abs,threshold\n");
    for (r, modulus) in rows {
        let _ = writeln!(csv, "{r},{modulus},{threshold}");
    }
    Ok(csv)
}

/// Two labeled B_ρ series on a shared ρ axis (energy runs).
fn brho_series(data: &Value) -> anyhow::Result<String> {
    let random = data
        .get("blocks_random")
        .and_then(|v| v.as_array())
        .context("run has no B_rho blocks (need an energy run)")?;
    let comb = data
        .get("blocks_comb")
        .and_then(|v| v.as_array())
        .context("run has no comb blocks")?;
    let mut csv = String::from("rho,value,series\n");
    for row in random {
        let _ = writeln!(csv, "{},{},random", row["rho"], row["value"]);
    }
    for row in comb {
        let _ = writeln!(csv, "{},{},comb", row["rho"], row["value"]);
    }
    Ok(csv)
}

/// Hölder-norm refinement trend from a transfer run.
fn holder_series(data: &Value) -> anyhow::Result<String> {
    let checks = data
        .get("checks")
        .and_then(|v| v.as_array())
        .context("run has no property checks (need a transfer run)")?;
    let mut csv = String::from("name,observed,threshold\n");
    let mut any = false;
    for check in checks {
        let name = check["name"].as_str().unwrap_or("");
        if name.starts_with("holder") {
            any = true;
            let _ = writeln!(csv, "{},{},{}", name, check["observed"], check["threshold"]);
        }
    }
    if !any {
        bail!("transfer run contains no holder checks");
    }
    Ok(csv)
}

/// Multiplier ratio sweep from a multiplier run.
fn multiplier_series(data: &Value) -> anyhow::Result<String> {
    let annulus = data
        .get("annulus")
        .and_then(|v| v.as_array())
        .context("run has no annulus sweep (need a multiplier run)")?;
    let mut csv = String::from("r,max_ratio,a_p,ball_mass\n");
    for row in annulus {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            row["r"], row["max_ratio"], row["a_p"], row["ball_mass"]
        );
    }
    Ok(csv)
}
