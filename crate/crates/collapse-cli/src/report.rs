//! The single-experiment commands: `alpha`, `bounds`, and the bundled
//! reference survey `table1`.

use crate::config::{self, Experiment, ResolvedAlphaMethod};
use crate::error::{CliError, Result};
use crate::output::{self, fmt, json_num, Format, Table};
use collapse_core::bounds::{bound_report, noise_budget, SusceptibilityMode};
use collapse_core::constants::HBAR;
use collapse_core::geometry::{alpha_asymptotic, alpha_exact, alpha_quadrature};
use collapse_core::sim::sql_coupling;
use collapse_core::Error as CoreError;
use serde_json::json;
use std::fmt::Write as _;
use std::path::Path;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Smallest surveyed collapse-rate decade (1/s).
const DECADE_MIN: f64 = 1e-10;
/// Largest surveyed collapse-rate decade (1/s).
const DECADE_MAX: f64 = 1e-6;

pub fn cmd_alpha(config_path: &Path, format: Format, out: Option<&Path>) -> Result<()> {
    let config = config::load_config(config_path)?;
    let experiment = config::build_experiment(&config)?;
    let mass = experiment.oscillator.mass;
    let r = experiment.collapse.r_csl;
    let tol = match experiment.alpha_method {
        ResolvedAlphaMethod::Quadrature(tol) => tol,
        _ => 1e-8,
    };

    // every route that applies to this geometry, so disagreements surface
    let mut notes: Vec<String> = experiment.consistency.warnings.clone();
    let exact = alpha_exact(&experiment.geometry, mass, r)?;
    let asymptotic = match alpha_asymptotic(&experiment.geometry, mass, r) {
        Ok(res) => Some(res),
        Err(e @ CoreError::OutOfAsymptoticRegime { .. }) => {
            notes.push(format!("asymptotic route skipped: {e}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let quadrature = match alpha_quadrature(&experiment.geometry, mass, r, tol) {
        Ok(res) => Some((res.alpha, res.estimated_relative_error)),
        Err(CoreError::QuadratureStalled {
            best,
            error,
            target,
        }) => {
            notes.push(format!(
                "quadrature stalled at relative error {error:.3e} (target {target:.3e}); \
                 reporting the best estimate"
            ));
            Some((best, Some(error)))
        }
        Err(e) => return Err(e.into()),
    };

    let text = match format {
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "alpha for mass {} kg at localization length {} m",
                fmt(mass),
                fmt(r)
            );
            let _ = writeln!(s, "  exact       {}", fmt(exact.alpha));
            if let Some(a) = &asymptotic {
                let _ = writeln!(s, "  asymptotic  {}", fmt(a.alpha));
            }
            if let Some((a, err)) = quadrature {
                match err {
                    Some(err) => {
                        let _ = writeln!(
                            s,
                            "  quadrature  {}  (estimated relative error {err:.1e})",
                            fmt(a)
                        );
                    }
                    None => {
                        let _ = writeln!(s, "  quadrature  {}", fmt(a));
                    }
                }
            }
            for note in &notes {
                let _ = writeln!(s, "note: {note}");
            }
            s
        }
        Format::Csv => {
            let mut table = Table::new(["method", "alpha", "estimated_relative_error"]);
            table.comment(format!("config: {}", config_path.display()));
            for note in &notes {
                table.comment(format!("note: {note}"));
            }
            table.row(vec!["exact".into(), fmt(exact.alpha), String::new()]);
            if let Some(a) = &asymptotic {
                table.row(vec!["asymptotic".into(), fmt(a.alpha), String::new()]);
            }
            if let Some((a, err)) = quadrature {
                table.row(vec![
                    "quadrature".into(),
                    fmt(a),
                    err.map(|e| format!("{e:.3e}")).unwrap_or_default(),
                ]);
            }
            table.to_csv()
        }
        Format::Json => {
            let mut methods = serde_json::Map::new();
            methods.insert("exact".into(), json!({ "alpha": json_num(exact.alpha) }));
            if let Some(a) = &asymptotic {
                methods.insert("asymptotic".into(), json!({ "alpha": json_num(a.alpha) }));
            }
            if let Some((a, err)) = quadrature {
                methods.insert(
                    "quadrature".into(),
                    json!({
                        "alpha": json_num(a),
                        "estimated_relative_error": err.map(json_num),
                    }),
                );
            }
            output::to_json_pretty(&json!({
                "tool": output::TOOL,
                "config": config_path.display().to_string(),
                "mass": json_num(mass),
                "r_csl": json_num(r),
                "methods": methods,
                "notes": notes,
            }))?
        }
    };
    output::emit(&text, out)
}

/// Everything `bounds` derives for one sensor at one analysis frequency.
struct BoundsSummary {
    alpha: f64,
    omega: f64,
    mode: SusceptibilityMode,
    d_thermal: f64,
    d_csl: f64,
    d_dp: Option<f64>,
    chi_inv: f64,
    force_psd_sql: f64,
    g_sql: f64,
    p_sql: Option<f64>,
    lambda_thermal: f64,
    lambda_sql: f64,
    lambda_floor: f64,
    sigma_dp: Option<f64>,
    lambda_configured: f64,
    detectable: f64,
    notes: Vec<String>,
}

fn derive_bounds(experiment: &Experiment, omega: f64) -> Result<BoundsSummary> {
    let osc = &experiment.oscillator;
    let alpha = experiment.alpha()?;
    let mode = experiment.susceptibility;
    let r = experiment.collapse.r_csl;

    let report = bound_report(
        osc,
        alpha.alpha,
        r,
        omega,
        mode,
        Some(&experiment.material),
    )?;
    let dp = match (
        experiment.collapse.sigma_dp,
        experiment.material.lattice().is_ok(),
    ) {
        (Some(sigma), true) => Some((&experiment.material, sigma)),
        _ => None,
    };
    let budget = noise_budget(osc, experiment.collapse.lambda_csl, r, alpha.alpha, dp)?;

    // the report already rejected out-of-regime frequencies for this mode
    let chi_inv = match mode {
        SusceptibilityMode::FullLorentzian => osc.inverse_susceptibility_magnitude(omega),
        SusceptibilityMode::FreeMass => osc.mass * omega * omega,
    };
    let optics = experiment.readout.as_ref().and_then(|r| r.optics.as_ref());
    let sql = sql_coupling(osc, omega, optics);

    let mut notes = experiment.consistency.warnings.clone();
    notes.extend(budget.notes.iter().cloned());

    Ok(BoundsSummary {
        alpha: alpha.alpha,
        omega,
        mode,
        d_thermal: budget.d_thermal,
        d_csl: budget.d_csl,
        d_dp: budget.d_dp,
        chi_inv,
        force_psd_sql: HBAR * chi_inv,
        g_sql: sql.g_sql,
        p_sql: sql.p_sql,
        lambda_thermal: report.lambda_thermal,
        lambda_sql: report.lambda_sql,
        lambda_floor: report.lambda_floor(),
        sigma_dp: report.sigma_dp,
        lambda_configured: experiment.collapse.lambda_csl,
        detectable: experiment.collapse.lambda_csl / report.lambda_floor(),
        notes,
    })
}

/// Smallest power of ten in the surveyed window at or above the floor.
fn smallest_detectable_decade(floor: f64) -> Option<f64> {
    let mut decade = DECADE_MIN;
    while decade <= DECADE_MAX * 1.0001 {
        if decade >= floor {
            return Some(decade);
        }
        decade *= 10.0;
    }
    None
}

pub fn cmd_bounds(
    config_path: &Path,
    omega_hz: Option<f64>,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    let config = config::load_config(config_path)?;
    let experiment = config::build_experiment(&config)?;
    let omega = match (omega_hz, experiment.analysis_omega) {
        (Some(f), _) => {
            if !(f > 0.0 && f.is_finite()) {
                return Err(CliError::Config(format!(
                    "--omega-hz must be positive and finite, got {f:e}"
                )));
            }
            TWO_PI * f
        }
        (None, Some(omega)) => omega,
        (None, None) => {
            return Err(CliError::Config(
                "bounds needs an analysis frequency: add a [readout] section or pass --omega-hz"
                    .into(),
            ))
        }
    };
    let summary = derive_bounds(&experiment, omega)?;
    let text = match format {
        Format::Human => render_bounds_human(&experiment, &summary),
        Format::Csv => render_bounds_csv(config_path, &summary),
        Format::Json => render_bounds_json(config_path, &summary)?,
    };
    output::emit(&text, out)
}

fn render_bounds_human(experiment: &Experiment, s: &BoundsSummary) -> String {
    let osc = &experiment.oscillator;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "sensor: m = {} kg, Omega/2pi = {} Hz, gamma = {} rad/s, T = {} K",
        fmt(osc.mass),
        fmt(osc.omega0 / TWO_PI),
        fmt(osc.gamma),
        fmt(osc.temperature)
    );
    let _ = writeln!(
        text,
        "analysis at omega/2pi = {} Hz, susceptibility {}",
        fmt(s.omega / TWO_PI),
        s.mode
    );
    let _ = writeln!(text, "  alpha                 {}", fmt(s.alpha));
    let _ = writeln!(text, "  D_thermal             {} N^2 s", fmt(s.d_thermal));
    let _ = writeln!(text, "  D_CSL (configured)    {} N^2 s", fmt(s.d_csl));
    if let Some(d) = s.d_dp {
        let _ = writeln!(text, "  D_DP                  {} N^2 s", fmt(d));
    }
    let _ = writeln!(text, "  1/|chi|               {} kg/s^2", fmt(s.chi_inv));
    let _ = writeln!(
        text,
        "  hbar/|chi| (SQL PSD)  {} N^2 s",
        fmt(s.force_psd_sql)
    );
    let _ = writeln!(text, "  g_SQL                 {} Hz^1/2 m^-1", fmt(s.g_sql));
    if let Some(p) = s.p_sql {
        let _ = writeln!(text, "  P_SQL                 {} W", fmt(p));
    }
    let _ = writeln!(text, "  Lambda_thermal        {} 1/s", fmt(s.lambda_thermal));
    let _ = writeln!(text, "  Lambda_SQL            {} 1/s", fmt(s.lambda_sql));
    let _ = writeln!(text, "  lambda floor          {} 1/s", fmt(s.lambda_floor));
    if let Some(sigma) = s.sigma_dp {
        let _ = writeln!(text, "  Sigma_DP              {} m", fmt(sigma));
    }
    if s.lambda_configured > 0.0 {
        if s.detectable >= 1.0 {
            let _ = writeln!(
                text,
                "verdict: configured lambda = {} sits {:.2} decades above the floor",
                fmt(s.lambda_configured),
                s.detectable.log10()
            );
        } else {
            let _ = writeln!(
                text,
                "verdict: configured lambda = {} sits {:.2} decades below the floor",
                fmt(s.lambda_configured),
                -s.detectable.log10()
            );
        }
    } else {
        let _ = writeln!(text, "verdict: no collapse rate configured (lambda = 0)");
    }
    match smallest_detectable_decade(s.lambda_floor) {
        Some(decade) => {
            let _ = writeln!(
                text,
                "smallest detectable decade in [{DECADE_MIN:e}, {DECADE_MAX:e}]: {decade:e} 1/s"
            );
        }
        None => {
            let _ = writeln!(
                text,
                "smallest detectable decade in [{DECADE_MIN:e}, {DECADE_MAX:e}]: none"
            );
        }
    }
    for note in &s.notes {
        let _ = writeln!(text, "note: {note}");
    }
    text
}

fn render_bounds_csv(config_path: &Path, s: &BoundsSummary) -> String {
    let mut table = Table::new(["quantity", "value", "unit"]);
    table.comment(format!("config: {}", config_path.display()));
    table.comment(format!("susceptibility: {}", s.mode));
    for note in &s.notes {
        table.comment(format!("note: {note}"));
    }
    let mut push = |name: &str, value: f64, unit: &str| {
        table.row(vec![name.into(), fmt(value), unit.into()]);
    };
    push("alpha", s.alpha, "1");
    push("omega", s.omega, "rad/s");
    push("d_thermal", s.d_thermal, "N^2 s");
    push("d_csl", s.d_csl, "N^2 s");
    if let Some(d) = s.d_dp {
        push("d_dp", d, "N^2 s");
    }
    push("chi_inv", s.chi_inv, "kg/s^2");
    push("force_psd_sql", s.force_psd_sql, "N^2 s");
    push("g_sql", s.g_sql, "Hz^1/2 m^-1");
    if let Some(p) = s.p_sql {
        push("p_sql", p, "W");
    }
    push("lambda_thermal", s.lambda_thermal, "1/s");
    push("lambda_sql", s.lambda_sql, "1/s");
    push("lambda_floor", s.lambda_floor, "1/s");
    if let Some(sigma) = s.sigma_dp {
        push("sigma_dp", sigma, "m");
    }
    push("lambda_configured", s.lambda_configured, "1/s");
    if let Some(decade) = smallest_detectable_decade(s.lambda_floor) {
        push("smallest_detectable_decade", decade, "1/s");
    }
    table.to_csv()
}

fn render_bounds_json(config_path: &Path, s: &BoundsSummary) -> Result<String> {
    output::to_json_pretty(&json!({
        "tool": output::TOOL,
        "config": config_path.display().to_string(),
        "susceptibility": s.mode.to_string(),
        "alpha": json_num(s.alpha),
        "omega": json_num(s.omega),
        "d_thermal": json_num(s.d_thermal),
        "d_csl": json_num(s.d_csl),
        "d_dp": s.d_dp.map(json_num),
        "chi_inv": json_num(s.chi_inv),
        "force_psd_sql": json_num(s.force_psd_sql),
        "g_sql": json_num(s.g_sql),
        "p_sql": s.p_sql.map(json_num),
        "lambda_thermal": json_num(s.lambda_thermal),
        "lambda_sql": json_num(s.lambda_sql),
        "lambda_floor": json_num(s.lambda_floor),
        "sigma_dp": s.sigma_dp.map(json_num),
        "lambda_configured": json_num(s.lambda_configured),
        "smallest_detectable_decade":
            smallest_detectable_decade(s.lambda_floor).map(json_num),
        "notes": s.notes,
    }))
}

/// Name and text of each bundled survey config, compiled into the binary so
/// `table1` runs without external files.
pub const SURVEY_CONFIGS: [(&str, &str); 6] = [
    (
        "gw_detector",
        include_str!("../configs/table1/gw_detector.toml"),
    ),
    (
        "gw_detector_sphere",
        include_str!("../configs/table1/gw_detector_sphere.toml"),
    ),
    (
        "suspended_disc",
        include_str!("../configs/table1/suspended_disc.toml"),
    ),
    (
        "hypothetical",
        include_str!("../configs/table1/hypothetical.toml"),
    ),
    (
        "sin_membrane",
        include_str!("../configs/table1/sin_membrane.toml"),
    ),
    (
        "aluminum_membrane",
        include_str!("../configs/table1/aluminum_membrane.toml"),
    ),
];

pub struct SurveyRow {
    pub name: &'static str,
    pub alpha: f64,
    pub lambda_thermal: f64,
    pub lambda_sql: f64,
    pub sigma_dp: Option<f64>,
}

pub fn survey_rows() -> Result<Vec<SurveyRow>> {
    SURVEY_CONFIGS
        .iter()
        .map(|(name, text)| {
            let config = config::parse_config(text, name)?;
            let experiment = config::build_experiment(&config)?;
            let omega = experiment.analysis_omega()?;
            let summary = derive_bounds(&experiment, omega)?;
            Ok(SurveyRow {
                name,
                alpha: summary.alpha,
                lambda_thermal: summary.lambda_thermal,
                lambda_sql: summary.lambda_sql,
                sigma_dp: summary.sigma_dp,
            })
        })
        .collect()
}

pub fn cmd_table1(format: Format, out: Option<&Path>) -> Result<()> {
    let rows = survey_rows()?;
    let text = match format {
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:<20} {:>15} {:>15} {:>15} {:>15}",
                "config", "alpha", "lambda_thermal", "lambda_sql", "sigma_dp"
            );
            for row in &rows {
                let _ = writeln!(
                    s,
                    "{:<20} {:>15.6e} {:>15.6e} {:>15.6e} {:>15}",
                    row.name,
                    row.alpha,
                    row.lambda_thermal,
                    row.lambda_sql,
                    row.sigma_dp
                        .map(|v| format!("{v:.6e}"))
                        .unwrap_or_else(|| "-".into()),
                );
            }
            s
        }
        Format::Csv => {
            let mut table = Table::new([
                "config",
                "alpha",
                "lambda_thermal",
                "lambda_sql",
                "sigma_dp",
            ]);
            for row in &rows {
                table.row(vec![
                    row.name.into(),
                    fmt(row.alpha),
                    fmt(row.lambda_thermal),
                    fmt(row.lambda_sql),
                    row.sigma_dp.map(fmt).unwrap_or_default(),
                ]);
            }
            table.to_csv()
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|row| {
                    json!({
                        "config": row.name,
                        "alpha": json_num(row.alpha),
                        "lambda_thermal": json_num(row.lambda_thermal),
                        "lambda_sql": json_num(row.lambda_sql),
                        "sigma_dp": row.sigma_dp.map(json_num),
                    })
                })
                .collect();
            output::to_json_pretty(&json!({ "tool": output::TOOL, "rows": rows }))?
        }
    };
    output::emit(&text, out)
}
