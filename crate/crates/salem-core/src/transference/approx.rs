//! One approximation step: the distance components between (supp g, g) and
//! (supp(F_m g) ∪ ε'-net, F_m g) in the composite metric
//! d = d_Hausdorff + |Δ at r=0| + sup_{r≠0} |r|^{α/2}|Δ(r)|/ψ(1/|r|)
//!     + Σ_n 2^{−n} min{1, ‖g^{*n} − (F_m g)^{*n}‖_{C^{ρ_n,ψ}}}.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::grid::{function_power, hausdorff_distance, GridFunction, RangeSum, Spectrum};
use crate::regularity::{holder_norm, ModulusPsi};
use crate::transference::fm::FmBuild;

/// Inputs of the step beyond the F_m block itself.
#[derive(Debug, Clone)]
pub struct ApproxInput {
    /// Smooth nonnegative trig-polynomial factor g.
    pub g: GridFunction,
    pub psi: ModulusPsi,
    pub alpha: f64,
    /// Maximal convolution order 𝔫 of the Hölder terms.
    pub ell_max: u32,
    /// Spacing of the ε'-net added to the support.
    pub eps_net: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricComponents {
    pub hausdorff: f64,
    pub zero_coefficient: f64,
    pub weighted_fourier: f64,
    /// Analytic bound on the weighted sup over frequencies beyond the window
    /// (mollifier decay against the trig-polynomial input).
    pub fourier_tail_bound: f64,
    /// (n, ‖g^{*n} − (F_m g)^{*n}‖_{C^{ρ_n,ψ}} estimate).
    pub holder_terms: Vec<(u32, f64)>,
    /// Slack level c of the input: largest c with
    /// ∫_Q g^{*n} ≤ (1−c)ψ(|Q|)|Q|^{nα/d} over the sampled cubes, n < d/α.
    pub input_slack: f64,
    /// Whether F_m g satisfies the same cube bound at slack 0.
    pub output_bound_pass: bool,
    /// Composite total with the 2^{−n} min{1,·} wrapper.
    pub total: f64,
}

pub fn approximation_step(build: &FmBuild, input: &ApproxInput) -> Result<MetricComponents> {
    let g = &input.g;
    let f_m = &build.f_m;
    if g.resolution() != f_m.resolution() || g.dim() != f_m.dim() {
        return Err(CoreError::config("g must live on the F_m grid"));
    }
    if g.min_value() < -1e-12 {
        return Err(CoreError::domain("g must be nonnegative"));
    }
    let d = g.dim() as f64;
    let product = f_m.pointwise_mul(g)?;

    // supports and the Hausdorff component
    let support_points = |f: &GridFunction| -> Vec<Vec<f64>> {
        let r = f.resolution() as f64;
        f.values()
            .iter()
            .enumerate()
            .filter(|(_, &v)| v.abs() > 1e-12)
            .map(|(idx, _)| f.point_of(idx).iter().map(|&c| c as f64 / r).collect())
            .collect()
    };
    let k_set = support_points(g);
    if k_set.is_empty() {
        return Err(CoreError::domain("g has empty support"));
    }
    let mut h_set = support_points(&product);
    // ε'-net of supp(g): keep the first support point within each ε'-cell
    let net = eps_net_of(&k_set, input.eps_net);
    h_set.extend(net);
    let hausdorff = hausdorff_distance(&k_set, &h_set)?;

    // spectral components
    let g_spec = g.dft()?;
    let h_spec = product.dft()?;
    let zero = vec![0i64; g.dim()];
    let zero_coefficient = (g_spec.at(&zero) - h_spec.at(&zero)).norm();
    let mut weighted_fourier = 0.0f64;
    for ((freq, gv), (_, hv)) in g_spec.iter_centered().zip(h_spec.iter_centered()) {
        if freq.iter().all(|&f| f == 0) {
            continue;
        }
        let norm = Spectrum::freq_norm(&freq);
        let weighted =
            norm.powf(input.alpha / 2.0) * (gv - hv).norm() / input.psi.eval(1.0 / norm)?;
        weighted_fourier = weighted_fourier.max(weighted);
    }
    let fourier_tail_bound = tail_bound(build, g, input)?;

    // Hölder convolution terms, single chart
    let n_low = (d / input.alpha).ceil() as u32;
    let mut holder_terms = Vec::new();
    let mut wrapped_sum = 0.0f64;
    for n_conv in n_low..=input.ell_max {
        let rho = (n_conv as f64 * input.alpha - d) / 2.0;
        let g_power = function_power(g, n_conv)?;
        let h_power = function_power(&product, n_conv)?;
        let difference = g_power.sub(&h_power)?;
        let estimate = holder_norm(&difference, rho, input.psi)?;
        holder_terms.push((n_conv, estimate.norm));
        wrapped_sum += 0.5f64.powi(n_conv as i32) * estimate.norm.min(1.0);
    }

    // cube-regularity slack of the input and the bound for the output
    let input_slack = cube_slack(g, input)?;
    let output_bound_pass = cube_slack(&product, input)? >= 0.0;

    let total = hausdorff + zero_coefficient + weighted_fourier + wrapped_sum;
    Ok(MetricComponents {
        hausdorff,
        zero_coefficient,
        weighted_fourier,
        fourier_tail_bound,
        holder_terms,
        input_slack,
        output_bound_pass,
        total,
    })
}

/// Uniform sub-sample of the support at spacing ε' (the finite ε'-net).
fn eps_net_of(points: &[Vec<f64>], eps: f64) -> Vec<Vec<f64>> {
    if eps <= 0.0 {
        return Vec::new();
    }
    let cells = (1.0 / eps).ceil() as usize;
    let mut seen = std::collections::BTreeSet::new();
    let mut net = Vec::new();
    for point in points {
        let key: Vec<usize> = point
            .iter()
            .map(|&c| ((c / eps).floor() as usize).min(cells - 1))
            .collect();
        if seen.insert(key) {
            net.push(point.clone());
        }
    }
    net
}

/// Largest c such that ∫_Q φ^{*n} ≤ (1−c)ψ(|Q|)|Q|^{nα/d} over dyadic cube
/// sides and exhaustive corners, for every 1 ≤ n < d/α. Negative c means the
/// bound itself fails.
fn cube_slack(function: &GridFunction, input: &ApproxInput) -> Result<f64> {
    let d = function.dim() as f64;
    let n_low = (d / input.alpha).ceil() as u32;
    let r = function.resolution();
    let mut worst_ratio = 0.0f64;
    for n_conv in 1..n_low {
        let power = function_power(function, n_conv)?;
        let shape = vec![r; function.dim()];
        let table = RangeSum::new(&shape, power.values())?;
        let cells = power.len() as f64;
        let mut side = r;
        while side >= 1 {
            let measure = (side as f64 / r as f64).powi(function.dim() as i32);
            let denom =
                input.psi.eval(measure)? * measure.powf(n_conv as f64 * input.alpha / d);
            let sides = vec![side; function.dim()];
            let stride = (r / 128).max(1);
            let mut corner = vec![0usize; function.dim()];
            loop {
                let integral = table.wrapped_box_sum(&corner, &sides)? / cells;
                worst_ratio = worst_ratio.max(integral / denom);
                let mut k = 0;
                loop {
                    if k == function.dim() {
                        break;
                    }
                    corner[k] += stride;
                    if corner[k] < r {
                        break;
                    }
                    corner[k] = 0;
                    k += 1;
                }
                if k == function.dim() || corner.iter().all(|&c| c == 0) {
                    break;
                }
            }
            if side == 1 {
                break;
            }
            side /= 2;
        }
    }
    Ok(1.0 - worst_ratio)
}

/// Bound the weighted difference beyond the representable window: the input g
/// is a trig polynomial (ĝ = 0 beyond its degree), so out there the
/// difference is |(F_m g)^(r)| ≤ ‖ĝ‖₁ · max_{|v| ≥ R/2 − deg} |F̂_m(v)|,
/// bounded via the mollifier's polynomial Fourier decay.
fn tail_bound(build: &FmBuild, g: &GridFunction, input: &ApproxInput) -> Result<f64> {
    let r = g.resolution() as f64;
    let n = build.params.m.pow(build.params.k) as f64;
    let g_spec = g.dft()?;
    let mut degree = 0.0f64;
    let mut l1 = 0.0f64;
    for (freq, v) in g_spec.iter_centered() {
        if v.norm() > 1e-13 {
            degree = degree.max(Spectrum::freq_norm(&freq));
            l1 += v.norm();
        }
    }
    // |υ̂(ξ)| ≤ C/(1+|ξ|)^5 with C ≤ 32 for the quartic bump profile
    let c_profile = 32.0;
    let v_min = (r / 2.0 - degree).max(1.0);
    let fm_tail = c_profile / (1.0 + v_min / n).powi(5);
    let weight = (r / 2.0 + degree).powf(input.alpha / 2.0)
        / input.psi.eval(2.0 / r)?;
    Ok(l1 * fm_tail * weight)
}
