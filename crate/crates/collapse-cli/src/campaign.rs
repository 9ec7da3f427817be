//! The `simulate` command: run a Langevin campaign, infer the force
//! spectrum behind the homodyne record, and test it against the analytic
//! model and against a collapse-free null.

use crate::config;
use crate::error::{CliError, Result};
use crate::output::{self, fmt, json_num, Table};
use collapse_core::sim::{
    analytic_force_psd, compare_force_spectra, infer_force_spectrum, simulate, ChannelSet,
    ForceSpectrum, SimulationConfig, SpectrumOrigin,
};
use serde_json::json;
use std::fmt::Write as _;
use std::io::{BufWriter, Write as _};
use std::path::Path;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Below this many Welch segments the per-bin error bars are too coarse to
/// trust a verdict.
const MIN_SEGMENTS: usize = 8;
/// Detection threshold on the band-mean excess over the collapse-free null.
const DETECTION_Z: f64 = 5.0;
/// |z| below this is called consistent with the null.
const NULL_Z: f64 = 2.0;

pub fn cmd_simulate(
    config_path: &Path,
    out_dir: &Path,
    seed_override: Option<u64>,
    one_sided: bool,
) -> Result<()> {
    let config = config::load_config(config_path)?;
    let experiment = config::build_experiment(&config)?;
    let sim_section = config.simulation.as_ref().ok_or_else(|| {
        CliError::Config("simulate needs a [simulation] section".into())
    })?;
    let welch_section = config.welch.as_ref().ok_or_else(|| {
        CliError::Config("simulate needs a [welch] section to infer spectra".into())
    })?;
    let readout = *experiment.readout()?;
    let channels = config::build_channels(sim_section)?;
    let drive = config::build_drive(sim_section)?;
    let welch = config::build_welch(welch_section)?;
    let seed = seed_override.unwrap_or(sim_section.seed);
    let alpha = experiment.alpha()?.alpha;

    let sim = SimulationConfig {
        oscillator: experiment.oscillator,
        readout,
        collapse: experiment.collapse,
        alpha,
        dt: sim_section.dt,
        duration: sim_section.duration,
        settle: sim_section.settle,
        seed,
        channels,
        drive,
        initial_position: sim_section.initial_position,
        initial_momentum: sim_section.initial_momentum,
    };
    let record = simulate(&sim)?;
    write_record(
        &out_dir.join("record.csv"),
        config_path,
        seed,
        &channels,
        &record.x,
        &record.p_out,
        record.dt,
    )?;

    let estimate = infer_force_spectrum(&record, &readout, &experiment.oscillator, &welch)?;
    let (segments, rse) = match estimate.origin {
        SpectrumOrigin::Estimated {
            segments,
            relative_standard_error,
        } => (segments, relative_standard_error),
        SpectrumOrigin::Analytic => unreachable!("inference always carries statistics"),
    };

    // analytic model restricted to the channels that actually ran
    let full = analytic_force_psd(
        &experiment.oscillator,
        &readout,
        &experiment.collapse,
        alpha,
        &estimate.omega,
    )?;
    let model = enabled_channel_spectrum(&full, &channels);
    let null = enabled_channel_spectrum(&full, &ChannelSet { csl: false, ..channels });

    let band = match config::welch_band(welch_section)? {
        Some(band) => band,
        None => (
            *estimate.omega.first().unwrap(),
            *estimate.omega.last().unwrap(),
        ),
    };
    let comparison = compare_force_spectra(&estimate, &model, band)?;
    let excess = null_excess(&estimate, &null, band, rse)?;

    let scale = if one_sided { 2.0 } else { 1.0 };
    let convention = if one_sided {
        "one-sided (double-sided values x2)"
    } else {
        "double-sided"
    };
    write_psd(
        &out_dir.join("psd.csv"),
        config_path,
        seed,
        convention,
        scale,
        &estimate,
        segments,
        rse,
    )?;
    write_analytic(
        &out_dir.join("analytic.csv"),
        config_path,
        convention,
        scale,
        &model,
    )?;

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "simulated {} samples at dt = {} s (seed {seed}), channels: {}",
        record.len(),
        fmt(record.dt),
        channel_list(&channels)
    );
    let _ = writeln!(
        summary,
        "force diffusion applied: thermal {} / csl {} / backaction {} N^2 s; shot PSD {}",
        fmt(record.diffusion.thermal),
        fmt(record.diffusion.csl),
        fmt(record.diffusion.backaction),
        fmt(record.diffusion.shot_psd)
    );
    let _ = writeln!(
        summary,
        "Welch: {segments} segments of {}, relative standard error {:.3}",
        welch.segment_length, rse
    );
    if segments < MIN_SEGMENTS {
        let _ = writeln!(
            summary,
            "warning: only {segments} segments (< {MIN_SEGMENTS}); spectral uncertainties are coarse"
        );
    }
    let _ = writeln!(
        summary,
        "band [{:.6e}, {:.6e}] rad/s: estimate/model ratio {:.4} ({} of {} bins flagged beyond 4 sigma)",
        band.0,
        band.1,
        comparison.band_ratio,
        comparison.flagged.len(),
        comparison.omega.len()
    );
    let _ = writeln!(
        summary,
        "excess over collapse-free null: z = {:.2} ({})",
        excess.z, excess.verdict
    );
    for warning in &experiment.consistency.warnings {
        let _ = writeln!(summary, "note: {warning}");
    }

    let summary_json = output::to_json_pretty(&json!({
        "tool": output::TOOL,
        "config": config_path.display().to_string(),
        "seed": seed,
        "samples": record.len(),
        "dt": json_num(record.dt),
        "channels": channel_list(&channels),
        "diffusion": {
            "thermal": json_num(record.diffusion.thermal),
            "csl": json_num(record.diffusion.csl),
            "backaction": json_num(record.diffusion.backaction),
            "shot_psd": json_num(record.diffusion.shot_psd),
        },
        "segments": segments,
        "relative_standard_error": json_num(rse),
        "band": [json_num(band.0), json_num(band.1)],
        "band_ratio_model": json_num(comparison.band_ratio),
        "flagged_bins": comparison.flagged.len(),
        "compared_bins": comparison.omega.len(),
        "null_excess_z": json_num(excess.z),
        "verdict": excess.verdict,
    }))?;
    output::write_file(&out_dir.join("summary.json"), &summary_json)?;

    print!("{summary}");
    println!(
        "wrote record.csv, psd.csv, analytic.csv, summary.json to {}",
        out_dir.display()
    );
    Ok(())
}

fn channel_list(channels: &ChannelSet) -> String {
    let mut names = Vec::new();
    if channels.thermal {
        names.push("thermal");
    }
    if channels.csl {
        names.push("csl");
    }
    if channels.backaction {
        names.push("backaction");
    }
    if channels.shot {
        names.push("shot");
    }
    if names.is_empty() {
        "none".into()
    } else {
        names.join("+")
    }
}

/// Rebuild a spectrum keeping only the channels that were simulated, so the
/// comparison target matches what actually entered the record. The floor
/// column keeps its measurement part hbar/|chi| (recovered from the full
/// spectrum as 2 sqrt(shot * backaction)) but drops disabled force channels.
fn enabled_channel_spectrum(full: &ForceSpectrum, channels: &ChannelSet) -> ForceSpectrum {
    let parts = full.channels.as_ref().expect("analytic spectra carry channels");
    let n = full.omega.len();
    let zero = vec![0.0; n];
    let pick = |on: bool, values: &Vec<f64>| if on { values.clone() } else { zero.clone() };
    let csl = pick(channels.csl, &parts.csl);
    let thermal = pick(channels.thermal, &parts.thermal);
    let shot = pick(channels.shot, &parts.shot);
    let backaction = pick(channels.backaction, &parts.backaction);
    let total: Vec<f64> = (0..n)
        .map(|i| csl[i] + thermal[i] + shot[i] + backaction[i])
        .collect();
    let floor: Vec<f64> = (0..n)
        .map(|i| csl[i] + thermal[i] + 2.0 * (parts.shot[i] * parts.backaction[i]).sqrt())
        .collect();
    ForceSpectrum {
        omega: full.omega.clone(),
        total,
        channels: Some(collapse_core::sim::SpectrumChannels {
            csl,
            thermal,
            shot,
            backaction,
        }),
        sql_optimized: Some(floor),
        origin: SpectrumOrigin::Analytic,
    }
}

struct NullExcess {
    z: f64,
    verdict: &'static str,
}

/// Band-mean ratio of the estimate to the collapse-free model, expressed in
/// standard errors: z = (mean(est/null) - 1) / (rse / sqrt(bins)).
fn null_excess(
    estimate: &ForceSpectrum,
    null: &ForceSpectrum,
    band: (f64, f64),
    rse: f64,
) -> Result<NullExcess> {
    let mut ratios = Vec::new();
    for ((&w, &est), &null_val) in estimate
        .omega
        .iter()
        .zip(&estimate.total)
        .zip(&null.total)
    {
        if w < band.0 || w > band.1 {
            continue;
        }
        if null_val <= 0.0 {
            return Err(CliError::Config(
                "collapse-free model vanishes inside the band; enable at least one \
                 noise channel"
                    .into(),
            ));
        }
        ratios.push(est / null_val);
    }
    if ratios.is_empty() {
        return Err(CliError::Config(
            "analysis band contains no spectral bins; widen welch.band_min/band_max".into(),
        ));
    }
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let standard_error = rse / n.sqrt();
    let z = (mean - 1.0) / standard_error;
    let verdict = if z >= DETECTION_Z {
        "excess detected"
    } else if z.abs() < NULL_Z {
        "consistent with no collapse noise"
    } else {
        "inconclusive"
    };
    Ok(NullExcess { z, verdict })
}

#[allow(clippy::too_many_arguments)]
fn write_record(
    path: &Path,
    config_path: &Path,
    seed: u64,
    channels: &ChannelSet,
    x: &[f64],
    p_out: &[f64],
    dt: f64,
) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# tool: {}", output::TOOL)?;
    writeln!(w, "# config: {}", config_path.display())?;
    writeln!(w, "# seed: {seed}")?;
    writeln!(w, "# channels: {}", channel_list(channels))?;
    writeln!(w, "t,x,p_out")?;
    for (i, (&xi, &pi)) in x.iter().zip(p_out).enumerate() {
        writeln!(w, "{},{},{}", fmt(i as f64 * dt), fmt(xi), fmt(pi))?;
    }
    w.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn write_psd(
    path: &Path,
    config_path: &Path,
    seed: u64,
    convention: &str,
    scale: f64,
    estimate: &ForceSpectrum,
    segments: usize,
    rse: f64,
) -> Result<()> {
    let mut table = Table::new(["omega_rad_s", "frequency_hz", "s_f"]);
    table.comment(format!("config: {}", config_path.display()));
    table.comment(format!("seed: {seed}"));
    table.comment(format!("convention: {convention}"));
    table.comment(format!(
        "segments: {segments}, relative standard error {rse:.6}"
    ));
    for (&w, &s) in estimate.omega.iter().zip(&estimate.total) {
        table.row(vec![fmt(w), fmt(w / TWO_PI), fmt(scale * s)]);
    }
    output::write_file(path, &table.to_csv())
}

fn write_analytic(
    path: &Path,
    config_path: &Path,
    convention: &str,
    scale: f64,
    model: &ForceSpectrum,
) -> Result<()> {
    let parts = model.channels.as_ref().expect("analytic spectra carry channels");
    let floor = model
        .sql_optimized
        .as_ref()
        .expect("analytic spectra carry the optimized floor");
    let mut table = Table::new([
        "omega_rad_s",
        "total",
        "csl",
        "thermal",
        "shot",
        "backaction",
        "floor",
    ]);
    table.comment(format!("config: {}", config_path.display()));
    table.comment(format!("convention: {convention}"));
    table.comment("total sums the simulated channels only".to_string());
    for (i, &w) in model.omega.iter().enumerate() {
        table.row(vec![
            fmt(w),
            fmt(scale * model.total[i]),
            fmt(scale * parts.csl[i]),
            fmt(scale * parts.thermal[i]),
            fmt(scale * parts.shot[i]),
            fmt(scale * parts.backaction[i]),
            fmt(scale * floor[i]),
        ]);
    }
    output::write_file(path, &table.to_csv())
}
