use std::f64::consts::FRAC_1_SQRT_2;

use catphase_core::analytic::{self, CatParams, ReferenceLimits};
use catphase_core::interferometer::{self, IfoConfig, PhaseRegime, Topology};
use catphase_core::montecarlo::{self, RngSpec};
use catphase_core::optimizer;
use rayon::prelude::*;
use serde_json::json;

use crate::error::CliError;
use crate::output::{Output, Table};
use crate::sweep::SweepSpec;

/// `1.5` becomes `1p5` so the column name stays a plain identifier.
fn alpha_label(alpha: f64) -> String {
    format!("{alpha}").replace('.', "p").replace('-', "m")
}

fn check_alphas(alphas: &[f64]) -> Result<(), CliError> {
    if alphas.is_empty() {
        return Err(CliError::Usage("at least one --alpha is required".into()));
    }
    for &a in alphas {
        CatParams::new(a, 0.0)?;
    }
    Ok(())
}

fn delta_curve(
    title: &str,
    prefix: &str,
    alphas: &[f64],
    delta_min: f64,
    delta_max: f64,
    steps: usize,
    f: fn(&CatParams) -> f64,
) -> Result<Output, CliError> {
    check_alphas(alphas)?;
    let deltas = SweepSpec::new("delta", delta_min, delta_max, steps)?.points();
    let rows = deltas
        .par_iter()
        .map(|&d| {
            let mut row = Vec::with_capacity(alphas.len() + 1);
            row.push(d);
            for &a in alphas {
                row.push(f(&CatParams::new(a, d)?));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, catphase_core::Error>>()?;
    let mut columns = vec!["delta".to_string()];
    columns.extend(alphas.iter().map(|&a| format!("{prefix}_alpha_{}", alpha_label(a))));
    Ok(Output::Table(Table {
        title: title.into(),
        columns,
        rows,
    }))
}

pub fn overlap_curve(
    alphas: &[f64],
    delta_min: f64,
    delta_max: f64,
    steps: usize,
) -> Result<Output, CliError> {
    delta_curve(
        "Overlap with the undisplaced cat",
        "overlap",
        alphas,
        delta_min,
        delta_max,
        steps,
        analytic::overlap,
    )
}

pub fn parity_curve(
    alphas: &[f64],
    delta_min: f64,
    delta_max: f64,
    steps: usize,
) -> Result<Output, CliError> {
    delta_curve(
        "Parity of the displaced cat",
        "parity",
        alphas,
        delta_min,
        delta_max,
        steps,
        analytic::parity,
    )
}

pub fn error_curve(
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    tolerance: f64,
) -> Result<Output, CliError> {
    let alphas = SweepSpec::new("alpha", alpha_min, alpha_max, steps)?.points();
    let points = optimizer::false_negative_curve(&alphas, tolerance)?;
    let rows = points
        .iter()
        .map(|p| vec![p.alpha, p.delta_star, p.p_even, p.p_odd, p.delta_series, p.p_even_series])
        .collect();
    Ok(Output::Table(Table {
        title: "Error probabilities at the parity minimum".into(),
        columns: ["alpha", "delta_star", "p_even", "p_odd", "delta_series", "p_even_series"]
            .map(String::from)
            .to_vec(),
        rows,
    }))
}

pub fn optimize(alpha: f64, tolerance: f64) -> Result<Output, CliError> {
    let opt = optimizer::minimize_parity(alpha, tolerance)?;
    let series = optimizer::parity_min_series(alpha);
    let mut record = serde_json::to_value(opt).map_err(|e| CliError::Io(e.to_string()))?;
    record["delta_series"] = json!(series);
    record["relative_gap"] = json!((series - opt.delta_star).abs() / opt.delta_star);
    Ok(Output::Record(record))
}

pub fn simulate(
    alpha: f64,
    delta: Option<f64>,
    shots: u64,
    seed: u64,
    tolerance: f64,
) -> Result<Output, CliError> {
    let (delta, delta_star) = match delta {
        Some(d) => (d, None),
        None => {
            let d = optimizer::minimize_parity(alpha, tolerance)?.delta_star;
            (d, Some(d))
        }
    };
    let stats = montecarlo::detection_experiment(alpha, delta, shots, &RngSpec::new(seed))?;
    let mut record = serde_json::to_value(stats).map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(d) = delta_star {
        record["delta_star"] = json!(d);
    }
    Ok(Output::Record(record))
}

fn balanced(name: &str, value: Option<f64>) -> Result<(), CliError> {
    match value {
        Some(v) if (v - FRAC_1_SQRT_2).abs() > 1e-12 => Err(CliError::Usage(format!(
            "antisymmetric topology uses balanced beamsplitters; --{name} must be 1/sqrt(2), got {v}"
        ))),
        _ => Ok(()),
    }
}

fn complement(x: f64) -> f64 {
    (1.0 - x * x).max(0.0).sqrt()
}

pub fn ifo(
    topology: Topology,
    reflectivity: Option<f64>,
    transmissivity: Option<f64>,
    carrier_amplitude: f64,
    phi: f64,
    phi2: f64,
) -> Result<Output, CliError> {
    let config = match topology {
        Topology::Antisymmetric => {
            balanced("reflectivity", reflectivity)?;
            balanced("transmissivity", transmissivity)?;
            IfoConfig::antisymmetric(carrier_amplitude)?
        }
        Topology::Asymmetric => {
            let t = transmissivity
                .ok_or_else(|| CliError::Usage("--transmissivity is required for asym".into()))?;
            let r = reflectivity.unwrap_or_else(|| complement(t));
            IfoConfig::new(topology, r, t, 0.0, 0.0, carrier_amplitude)?
        }
        Topology::General => {
            let (r, t) = match (reflectivity, transmissivity) {
                (Some(r), Some(t)) => (r, t),
                (Some(r), None) => (r, complement(r)),
                (None, Some(t)) => (complement(t), t),
                (None, None) => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            };
            IfoConfig::new(topology, r, t, phi, phi2, carrier_amplitude)?
        }
    };
    let d = interferometer::displacement_of(&config, phi)?;
    if d.regime == PhaseRegime::Marginal {
        eprintln!(
            "catphase: warning: phase above {} rad, the linear map may be inaccurate (error {:.3e})",
            interferometer::PHASE_WARNING,
            d.linearization_error
        );
    }
    let (phi1, phi2) = config.with_signal(phi).phases();
    Ok(Output::Record(json!({
        "topology": topology,
        "reflectivity": config.reflectivity(),
        "transmissivity": config.transmissivity(),
        "carrier_amplitude": carrier_amplitude,
        "phi1": phi1,
        "phi2": phi2,
        "b": d.b,
        "n_photons": d.n_photons,
        "delta": d.delta,
        "dark_re": d.exact_dark_amplitude.re,
        "dark_im": d.exact_dark_amplitude.im,
        "linearization_error": d.linearization_error,
        "regime": d.regime,
    })))
}

pub fn phase(alpha: f64, n_carrier: f64, squeeze: f64) -> Result<Output, CliError> {
    let delta_0 = analytic::overlap_zero(alpha, 0)?;
    let phi_0 = analytic::detectable_phase(alpha, n_carrier)?;
    let phi_0_approx = analytic::detectable_phase_approx(alpha, n_carrier)?;
    let limits = analytic::reference_limits(&ReferenceLimits::new(n_carrier, squeeze)?);
    Ok(Output::Record(json!({
        "alpha": alpha,
        "n_carrier": n_carrier,
        "delta_0": delta_0,
        "phi_0": phi_0,
        "phi_0_approx": phi_0_approx,
        "approx_relative_gap": (phi_0_approx - phi_0).abs() / phi_0,
        "snl": limits.snl,
        "sqz": limits.sqz,
        "hl": limits.hl,
    })))
}
