//! Parameter sweeps over detectability outputs, one or two axes.
//!
//! A mass axis rescales the geometry at fixed aspect ratio and recomputes
//! the form factor; every other axis leaves alpha untouched. Two-axis
//! sweeps also emit decade contour lines of the output, interpolated in
//! log-output along the y axis.

use crate::config::{self, AxisSection, Experiment};
use crate::error::{CliError, Result};
use crate::output::{self, fmt, Table};
use collapse_core::bounds::{
    dp_blur_bound, measurement_bound, thermal_bound, SusceptibilityMode,
};
use collapse_core::constants::HBAR;
use collapse_core::model::Oscillator;
use std::path::Path;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SweepParameter {
    Mass,
    Gamma,
    Linewidth,
    Temperature,
    OmegaMeas,
    FrequencyMeas,
}

impl SweepParameter {
    fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "mass" => SweepParameter::Mass,
            "gamma" => SweepParameter::Gamma,
            "linewidth" => SweepParameter::Linewidth,
            "temperature" => SweepParameter::Temperature,
            "omega_meas" => SweepParameter::OmegaMeas,
            "frequency_meas" => SweepParameter::FrequencyMeas,
            other => {
                return Err(CliError::Config(format!(
                    "sweep parameter {other:?} is not recognized; expected one of \
                     mass, gamma, linewidth, temperature, omega_meas, frequency_meas"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SweepOutput {
    LambdaThermal,
    LambdaSql,
    SigmaDp,
    Alpha,
    ForcePsdSql,
}

impl SweepOutput {
    fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "lambda_thermal" => SweepOutput::LambdaThermal,
            "lambda_sql" => SweepOutput::LambdaSql,
            "sigma_dp" => SweepOutput::SigmaDp,
            "alpha" => SweepOutput::Alpha,
            "force_psd_sql" => SweepOutput::ForcePsdSql,
            other => {
                return Err(CliError::Config(format!(
                    "sweep output {other:?} is not recognized; expected one of \
                     lambda_thermal, lambda_sql, sigma_dp, alpha, force_psd_sql"
                )))
            }
        })
    }

    fn needs_omega(self) -> bool {
        matches!(
            self,
            SweepOutput::LambdaSql | SweepOutput::SigmaDp | SweepOutput::ForcePsdSql
        )
    }
}

#[derive(Debug, Clone)]
struct Axis {
    parameter: SweepParameter,
    name: String,
    values: Vec<f64>,
    log_scale: bool,
}

fn build_axis(section: &AxisSection) -> Result<Axis> {
    let parameter = SweepParameter::parse(&section.parameter)?;
    let log_scale = match section.scale.as_str() {
        "log" => true,
        "linear" => false,
        other => {
            return Err(CliError::Config(format!(
                "sweep axis scale {other:?}; expected \"log\" or \"linear\""
            )))
        }
    };
    if section.points == 0 {
        return Err(CliError::Config(
            "sweep axis needs points >= 1".into(),
        ));
    }
    if section.points == 1 && section.min != section.max {
        return Err(CliError::Config(format!(
            "a single-point sweep axis needs min == max, got [{:e}, {:e}]",
            section.min, section.max
        )));
    }
    if section.points > 1 && section.min >= section.max {
        return Err(CliError::Config(format!(
            "sweep axis needs min < max, got [{:e}, {:e}]",
            section.min, section.max
        )));
    }
    if log_scale && section.min <= 0.0 {
        return Err(CliError::Config(format!(
            "log-scale sweep axis needs min > 0, got {:e}",
            section.min
        )));
    }
    let n = section.points;
    let values = if n == 1 {
        vec![section.min]
    } else if log_scale {
        let (lo, hi) = (section.min.ln(), section.max.ln());
        (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect()
    } else {
        (0..n)
            .map(|i| section.min + (section.max - section.min) * i as f64 / (n - 1) as f64)
            .collect()
    };
    Ok(Axis {
        parameter,
        name: section.parameter.clone(),
        values,
        log_scale,
    })
}

/// One grid point's effective experiment state.
struct EvalPoint {
    oscillator: Oscillator,
    alpha: f64,
    /// Measurement frequency override from an omega/frequency axis (rad/s).
    omega: Option<f64>,
}

fn apply_parameter(
    experiment: &Experiment,
    point: &mut EvalPoint,
    parameter: SweepParameter,
    value: f64,
) -> Result<()> {
    let osc = &point.oscillator;
    match parameter {
        SweepParameter::Mass => {
            let geometry = experiment
                .geometry
                .with_mass(value, experiment.material.density)?;
            point.oscillator =
                Oscillator::new(value, osc.omega0, osc.gamma, osc.temperature)?;
            point.alpha = match experiment.alpha_method {
                config::ResolvedAlphaMethod::Exact => {
                    collapse_core::geometry::alpha_exact(&geometry, value, experiment.collapse.r_csl)?
                }
                config::ResolvedAlphaMethod::Asymptotic => collapse_core::geometry::alpha_asymptotic(
                    &geometry,
                    value,
                    experiment.collapse.r_csl,
                )?,
                config::ResolvedAlphaMethod::Quadrature(tol) => {
                    collapse_core::geometry::alpha_quadrature(
                        &geometry,
                        value,
                        experiment.collapse.r_csl,
                        tol,
                    )?
                }
            }
            .alpha;
        }
        SweepParameter::Gamma => {
            point.oscillator = Oscillator::new(osc.mass, osc.omega0, value, osc.temperature)?;
        }
        SweepParameter::Linewidth => {
            point.oscillator =
                Oscillator::new(osc.mass, osc.omega0, TWO_PI * value, osc.temperature)?;
        }
        SweepParameter::Temperature => {
            point.oscillator = Oscillator::new(osc.mass, osc.omega0, osc.gamma, value)?;
        }
        SweepParameter::OmegaMeas => point.omega = Some(value),
        SweepParameter::FrequencyMeas => point.omega = Some(TWO_PI * value),
    }
    Ok(())
}

fn evaluate(
    experiment: &Experiment,
    point: &EvalPoint,
    output: SweepOutput,
) -> Result<f64> {
    let r = experiment.collapse.r_csl;
    let mode = experiment.susceptibility;
    let omega = match (output.needs_omega(), point.omega, experiment.analysis_omega) {
        (false, _, _) => 0.0,
        (true, Some(w), _) => w,
        (true, None, Some(w)) => w,
        (true, None, None) => {
            return Err(CliError::Config(
                "this sweep output needs a measurement frequency: add a [readout] \
                 section or sweep omega_meas/frequency_meas"
                    .into(),
            ))
        }
    };
    let value = match output {
        SweepOutput::Alpha => point.alpha,
        SweepOutput::LambdaThermal => thermal_bound(&point.oscillator, point.alpha, r)?,
        SweepOutput::LambdaSql => {
            measurement_bound(&point.oscillator, point.alpha, r, omega, mode)?
        }
        SweepOutput::SigmaDp => dp_blur_bound(&experiment.material, &point.oscillator, omega)?,
        SweepOutput::ForcePsdSql => {
            let chi_inv = match mode {
                SusceptibilityMode::FullLorentzian => {
                    point.oscillator.inverse_susceptibility_magnitude(omega)
                }
                SusceptibilityMode::FreeMass => {
                    // same regime guard as the bound itself
                    measurement_bound(&point.oscillator, point.alpha, r, omega, mode)?;
                    point.oscillator.mass * omega * omega
                }
            };
            HBAR * chi_inv
        }
    };
    Ok(value)
}

pub fn cmd_sweep(config_path: &Path, out_dir: &Path) -> Result<()> {
    let config = config::load_config(config_path)?;
    let section = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep needs a [sweep] section".into()))?;
    let experiment = config::build_experiment(&config)?;
    let output = SweepOutput::parse(&section.output)?;
    let x = build_axis(&section.x)?;
    let y = section.y.as_ref().map(build_axis).transpose()?;
    if let Some(y) = &y {
        if y.parameter == x.parameter {
            return Err(CliError::Config(format!(
                "sweep.x and sweep.y both vary {:?}; use two different parameters",
                x.name
            )));
        }
    }

    let base_alpha = experiment.alpha()?.alpha;
    let base_point = || EvalPoint {
        oscillator: experiment.oscillator,
        alpha: base_alpha,
        omega: None,
    };

    match y {
        None => {
            let mut table = Table::new([x.name.as_str(), section.output.as_str()]);
            table.comment(format!("config: {}", config_path.display()));
            for &xv in &x.values {
                let mut point = base_point();
                apply_parameter(&experiment, &mut point, x.parameter, xv)?;
                let value = evaluate(&experiment, &point, output)?;
                table.row(vec![fmt(xv), fmt(value)]);
            }
            output::write_file(&out_dir.join("sweep.csv"), &table.to_csv())?;
            println!(
                "wrote {} ({} points)",
                out_dir.join("sweep.csv").display(),
                x.values.len()
            );
        }
        Some(y) => {
            let mut grid = vec![vec![0.0_f64; y.values.len()]; x.values.len()];
            let mut table = Table::new([
                x.name.as_str(),
                y.name.as_str(),
                section.output.as_str(),
            ]);
            table.comment(format!("config: {}", config_path.display()));
            for (ix, &xv) in x.values.iter().enumerate() {
                for (iy, &yv) in y.values.iter().enumerate() {
                    let mut point = base_point();
                    apply_parameter(&experiment, &mut point, x.parameter, xv)?;
                    apply_parameter(&experiment, &mut point, y.parameter, yv)?;
                    let value = evaluate(&experiment, &point, output)?;
                    grid[ix][iy] = value;
                    table.row(vec![fmt(xv), fmt(yv), fmt(value)]);
                }
            }
            output::write_file(&out_dir.join("sweep.csv"), &table.to_csv())?;

            let contours = decade_contours(&x, &y, &grid, &section.output);
            output::write_file(&out_dir.join("contours.csv"), &contours.to_csv())?;
            println!(
                "wrote {} ({} x {} points) and {}",
                out_dir.join("sweep.csv").display(),
                x.values.len(),
                y.values.len(),
                out_dir.join("contours.csv").display()
            );
        }
    }
    Ok(())
}

/// Decade level lines of the output: for each power of ten inside the data
/// range and each x column, the y positions where the output crosses the
/// level, interpolated in log-output (and log-y for a log axis).
fn decade_contours(x: &Axis, y: &Axis, grid: &[Vec<f64>], output_name: &str) -> Table {
    let mut table = Table::new(["level", x.name.as_str(), y.name.as_str()]);
    table.comment(format!("decade contours of {output_name}"));

    let positive = grid
        .iter()
        .flatten()
        .copied()
        .filter(|v| v.is_finite() && *v > 0.0);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in positive {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return table;
    }

    let k_lo = lo.log10().ceil() as i32;
    let k_hi = hi.log10().floor() as i32;
    for k in k_lo..=k_hi {
        let level = 10.0_f64.powi(k);
        let log_level = f64::from(k);
        for (ix, column) in grid.iter().enumerate() {
            for iy in 0..column.len().saturating_sub(1) {
                let (v0, v1) = (column[iy], column[iy + 1]);
                if !(v0 > 0.0 && v1 > 0.0) {
                    continue;
                }
                let (l0, l1) = (v0.log10(), v1.log10());
                // half-open test keeps a node value from matching twice
                let crosses = (l0 <= log_level && log_level < l1)
                    || (l1 <= log_level && log_level < l0);
                if !crosses || l0 == l1 {
                    continue;
                }
                let t = (log_level - l0) / (l1 - l0);
                let (y0, y1) = (y.values[iy], y.values[iy + 1]);
                let y_cross = if y.log_scale {
                    (y0.ln() + t * (y1.ln() - y0.ln())).exp()
                } else {
                    y0 + t * (y1 - y0)
                };
                table.row(vec![fmt(level), fmt(x.values[ix]), fmt(y_cross)]);
            }
        }
    }
    table
}
