//! TOML configuration schema and its translation into model types.
//!
//! Unit conventions: plain `frequency`/`linewidth` fields are in Hz; fields
//! named `omega`/`gamma` are angular (rad/s). Every section rejects unknown
//! keys so typos surface as load errors, not silently ignored physics.

use crate::error::{CliError, Result};
use collapse_core::bounds::SusceptibilityMode;
use collapse_core::geometry::{
    alpha_asymptotic, alpha_exact, alpha_quadrature, AlphaResult,
};
use collapse_core::model::{
    validate_experiment, CollapseParams, ConsistencyReport, Geometry, Material, OpticalDrive,
    OpticalParams, Oscillator, Readout,
};
use collapse_core::sim::{ChannelSet, SinusoidalDrive};
use collapse_core::spectral::{WelchConfig, Window};
use serde::Deserialize;
use std::path::Path;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub material: MaterialSection,
    pub geometry: GeometrySection,
    pub oscillator: OscillatorSection,
    #[serde(default)]
    pub collapse: CollapseSection,
    pub readout: Option<ReadoutSection>,
    #[serde(default)]
    pub analysis: AnalysisSection,
    pub simulation: Option<SimulationSection>,
    pub welch: Option<WelchSection>,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    /// kg/m^3
    pub density: f64,
    /// m; together with nuclear_mass enables the DP (lattice) terms
    pub lattice_constant: Option<f64>,
    /// kg
    pub nuclear_mass: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    /// cuboid | disc | sphere | point
    pub shape: String,
    pub side_x: Option<f64>,
    pub side_y: Option<f64>,
    pub side_z: Option<f64>,
    pub radius: Option<f64>,
    pub thickness: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSection {
    /// kg
    pub mass: f64,
    /// Hz; exactly one of frequency/omega
    pub frequency: Option<f64>,
    /// rad/s
    pub omega: Option<f64>,
    /// exactly one of quality_factor/gamma/linewidth
    pub quality_factor: Option<f64>,
    /// rad/s
    pub gamma: Option<f64>,
    /// Hz
    pub linewidth: Option<f64>,
    /// K
    pub temperature: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollapseSection {
    /// 1/s
    #[serde(default)]
    pub lambda: f64,
    /// m
    #[serde(default = "default_r_csl")]
    pub r_csl: f64,
    /// m; mass-density resolution entering the DP noise term
    pub sigma_dp: Option<f64>,
}

fn default_r_csl() -> f64 {
    collapse_core::model::R_CSL_DEFAULT
}

impl Default for CollapseSection {
    fn default() -> Self {
        CollapseSection {
            lambda: 0.0,
            r_csl: default_r_csl(),
            sigma_dp: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutSection {
    /// Hz; exactly one of frequency/omega
    pub frequency: Option<f64>,
    /// rad/s
    pub omega: Option<f64>,
    /// transduction gain; exactly one of coupling/optics
    pub coupling: Option<f64>,
    pub optics: Option<OpticsSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticsSection {
    pub finesse: f64,
    /// m; exactly one of wavelength/omega_opt
    pub wavelength: Option<f64>,
    /// rad/s
    pub omega_opt: Option<f64>,
    /// W; exactly one of power/photon_flux
    pub power: Option<f64>,
    /// 1/s
    pub photon_flux: Option<f64>,
    /// 1/m; defaults to omega_opt/c
    pub wave_number: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    /// exact | asymptotic | quadrature
    #[serde(default = "default_alpha_method")]
    pub alpha_method: String,
    /// full_lorentzian | free_mass
    #[serde(default = "default_susceptibility")]
    pub susceptibility: String,
    /// require declared mass == density * volume (5%)
    #[serde(default)]
    pub assert_geometric_mass: bool,
    #[serde(default = "default_quadrature_rel_tol")]
    pub quadrature_rel_tol: f64,
}

fn default_alpha_method() -> String {
    "exact".into()
}

fn default_susceptibility() -> String {
    "full_lorentzian".into()
}

fn default_quadrature_rel_tol() -> f64 {
    1e-8
}

impl Default for AnalysisSection {
    fn default() -> Self {
        AnalysisSection {
            alpha_method: default_alpha_method(),
            susceptibility: default_susceptibility(),
            assert_geometric_mass: false,
            quadrature_rel_tol: default_quadrature_rel_tol(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    /// s
    pub dt: f64,
    /// s
    pub duration: f64,
    /// s
    #[serde(default)]
    pub settle: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// subset of ["thermal", "csl", "backaction", "shot"]; defaults to all
    pub channels: Option<Vec<String>>,
    /// N; with drive_frequency injects a sinusoidal force
    pub drive_amplitude: Option<f64>,
    /// Hz
    pub drive_frequency: Option<f64>,
    /// m
    #[serde(default)]
    pub initial_position: f64,
    /// kg m/s
    #[serde(default)]
    pub initial_momentum: f64,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WelchSection {
    pub segment_length: usize,
    #[serde(default = "default_overlap")]
    pub overlap: f64,
    /// hann | rectangular
    #[serde(default = "default_window")]
    pub window: String,
    /// Hz; analysis band for model comparison
    pub band_min: Option<f64>,
    pub band_max: Option<f64>,
}

fn default_overlap() -> f64 {
    0.5
}

fn default_window() -> String {
    "hann".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// lambda_thermal | lambda_sql | sigma_dp | alpha | force_psd_sql
    pub output: String,
    pub x: AxisSection,
    pub y: Option<AxisSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    /// mass | gamma | linewidth | temperature | omega_meas | frequency_meas
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    /// log | linear
    #[serde(default = "default_scale")]
    pub scale: String,
}

fn default_scale() -> String {
    "log".into()
}

pub fn load_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, &path.display().to_string())
}

pub fn parse_config(text: &str, origin: &str) -> Result<ConfigFile> {
    toml::from_str(text).map_err(|e| CliError::Config(format!("{origin}: {e}")))
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn exactly_one(
    section: &str,
    a_name: &str,
    a: Option<f64>,
    b_name: &str,
    b: Option<f64>,
) -> Result<(f64, bool)> {
    match (a, b) {
        (Some(v), None) => Ok((v, true)),
        (None, Some(v)) => Ok((v, false)),
        (Some(_), Some(_)) => Err(config_err(format!(
            "{section}: {a_name} and {b_name} are both set; they determine the same \
             quantity, specify exactly one"
        ))),
        (None, None) => Err(config_err(format!(
            "{section}: specify exactly one of {a_name} or {b_name}"
        ))),
    }
}

/// Everything the physics commands need, resolved to model types.
pub struct Experiment {
    pub geometry: Geometry,
    pub material: Material,
    pub oscillator: Oscillator,
    pub collapse: CollapseParams,
    /// Transduction channel; present only when the config gives a coupling
    /// or optical constituents.
    pub readout: Option<Readout>,
    /// Measurement frequency from the [readout] section (rad/s); available
    /// even without a coupling.
    pub analysis_omega: Option<f64>,
    pub alpha_method: ResolvedAlphaMethod,
    pub susceptibility: SusceptibilityMode,
    pub consistency: ConsistencyReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResolvedAlphaMethod {
    Exact,
    Asymptotic,
    Quadrature(f64),
}

impl Experiment {
    pub fn alpha(&self) -> collapse_core::Result<AlphaResult> {
        let m = self.oscillator.mass;
        let r = self.collapse.r_csl;
        match self.alpha_method {
            ResolvedAlphaMethod::Exact => alpha_exact(&self.geometry, m, r),
            ResolvedAlphaMethod::Asymptotic => alpha_asymptotic(&self.geometry, m, r),
            ResolvedAlphaMethod::Quadrature(tol) => alpha_quadrature(&self.geometry, m, r, tol),
        }
    }

    pub fn readout(&self) -> Result<&Readout> {
        self.readout.as_ref().ok_or_else(|| {
            config_err(
                "this command needs a transduction strength: set readout.coupling \
                 or a [readout.optics] section",
            )
        })
    }

    pub fn analysis_omega(&self) -> Result<f64> {
        self.analysis_omega.ok_or_else(|| {
            config_err("this command needs a [readout] section with a measurement frequency")
        })
    }
}

pub fn build_experiment(config: &ConfigFile) -> Result<Experiment> {
    let geometry = build_geometry(&config.geometry)?;
    let material = build_material(&config.material)?;
    let oscillator = build_oscillator(&config.oscillator)?;
    let collapse = build_collapse(&config.collapse)?;
    let resolved = config.readout.as_ref().map(build_readout).transpose()?;
    let (readout, analysis_omega) = match resolved {
        Some((readout, omega)) => (readout, Some(omega)),
        None => (None, None),
    };
    let alpha_method = build_alpha_method(&config.analysis)?;
    let susceptibility = match config.analysis.susceptibility.as_str() {
        "full_lorentzian" => SusceptibilityMode::FullLorentzian,
        "free_mass" => SusceptibilityMode::FreeMass,
        other => {
            return Err(config_err(format!(
                "analysis.susceptibility = {other:?}; expected \"full_lorentzian\" or \"free_mass\""
            )))
        }
    };

    let consistency = validate_experiment(
        &geometry,
        &material,
        &oscillator,
        config.analysis.assert_geometric_mass,
    )?;

    // the asymptotic guard is a load-time contract: a config asking for an
    // out-of-regime closed form is wrong, not merely unlucky
    if let ResolvedAlphaMethod::Asymptotic = alpha_method {
        if let Err(e) = alpha_asymptotic(&geometry, oscillator.mass, collapse.r_csl) {
            return Err(config_err(format!(
                "analysis.alpha_method = \"asymptotic\" is invalid here: {e}; \
                 set alpha_method = \"exact\" instead"
            )));
        }
    }

    Ok(Experiment {
        geometry,
        material,
        oscillator,
        collapse,
        readout,
        analysis_omega,
        alpha_method,
        susceptibility,
        consistency,
    })
}

fn build_geometry(section: &GeometrySection) -> Result<Geometry> {
    let reject = |fields: &[(&str, Option<f64>)], shape: &str| -> Result<()> {
        for (name, value) in fields {
            if value.is_some() {
                return Err(config_err(format!(
                    "geometry.{name} does not apply to shape = {shape:?}"
                )));
            }
        }
        Ok(())
    };
    let need = |name: &str, value: Option<f64>, shape: &str| -> Result<f64> {
        value.ok_or_else(|| config_err(format!("geometry.{name} is required for shape = {shape:?}")))
    };
    let g = match section.shape.as_str() {
        "cuboid" => {
            reject(
                &[("radius", section.radius), ("thickness", section.thickness)],
                "cuboid",
            )?;
            Geometry::cuboid(
                need("side_x", section.side_x, "cuboid")?,
                need("side_y", section.side_y, "cuboid")?,
                need("side_z", section.side_z, "cuboid")?,
            )?
        }
        "disc" => {
            reject(
                &[
                    ("side_x", section.side_x),
                    ("side_y", section.side_y),
                    ("side_z", section.side_z),
                ],
                "disc",
            )?;
            Geometry::disc(
                need("radius", section.radius, "disc")?,
                need("thickness", section.thickness, "disc")?,
            )?
        }
        "sphere" => {
            reject(
                &[
                    ("side_x", section.side_x),
                    ("side_y", section.side_y),
                    ("side_z", section.side_z),
                    ("thickness", section.thickness),
                ],
                "sphere",
            )?;
            Geometry::sphere(need("radius", section.radius, "sphere")?)?
        }
        "point" => {
            reject(
                &[
                    ("side_x", section.side_x),
                    ("side_y", section.side_y),
                    ("side_z", section.side_z),
                    ("radius", section.radius),
                    ("thickness", section.thickness),
                ],
                "point",
            )?;
            Geometry::Point
        }
        other => {
            return Err(config_err(format!(
                "geometry.shape = {other:?}; expected \"cuboid\", \"disc\", \"sphere\", or \"point\""
            )))
        }
    };
    Ok(g)
}

fn build_material(section: &MaterialSection) -> Result<Material> {
    match (section.lattice_constant, section.nuclear_mass) {
        (Some(a), Some(m_a)) => Ok(Material::with_lattice(section.density, a, m_a)?),
        (None, None) => Ok(Material::new(section.density)?),
        _ => Err(config_err(
            "material: lattice_constant and nuclear_mass must be given together",
        )),
    }
}

fn build_oscillator(section: &OscillatorSection) -> Result<Oscillator> {
    let (value, is_hz) = exactly_one(
        "oscillator",
        "frequency",
        section.frequency,
        "omega",
        section.omega,
    )?;
    let omega0 = if is_hz { TWO_PI * value } else { value };

    let given: Vec<&str> = [
        ("quality_factor", section.quality_factor),
        ("gamma", section.gamma),
        ("linewidth", section.linewidth),
    ]
    .iter()
    .filter(|(_, v)| v.is_some())
    .map(|(n, _)| *n)
    .collect();
    if given.len() != 1 {
        return Err(config_err(format!(
            "oscillator: exactly one of quality_factor, gamma, or linewidth must be set \
             (found: {})",
            if given.is_empty() {
                "none".to_string()
            } else {
                given.join(", ")
            }
        )));
    }
    let osc = if let Some(q) = section.quality_factor {
        Oscillator::from_quality_factor(section.mass, omega0, q, section.temperature)?
    } else {
        let gamma = section.gamma.unwrap_or_else(|| TWO_PI * section.linewidth.unwrap());
        Oscillator::new(section.mass, omega0, gamma, section.temperature)?
    };
    Ok(osc)
}

fn build_collapse(section: &CollapseSection) -> Result<CollapseParams> {
    let params = match section.sigma_dp {
        Some(sigma) => CollapseParams::with_dp_blur(section.lambda, section.r_csl, sigma)?,
        None => CollapseParams::new(section.lambda, section.r_csl)?,
    };
    Ok(params)
}

fn build_readout(section: &ReadoutSection) -> Result<(Option<Readout>, f64)> {
    let (value, is_hz) = exactly_one(
        "readout",
        "frequency",
        section.frequency,
        "omega",
        section.omega,
    )?;
    let omega_meas = if is_hz { TWO_PI * value } else { value };
    if !(omega_meas > 0.0 && omega_meas.is_finite()) {
        return Err(config_err(format!(
            "readout: measurement frequency must be positive and finite, got {omega_meas:e} rad/s"
        )));
    }

    let readout = match (section.coupling, &section.optics) {
        (Some(g), None) => Some(Readout::new(g, omega_meas)?),
        (None, Some(optics)) => Some(Readout::from_optics(build_optics(optics)?, omega_meas)?),
        (Some(g), Some(optics)) => {
            Some(Readout::with_optics(g, omega_meas, build_optics(optics)?)?)
        }
        // frequency alone still defines where bounds are evaluated
        (None, None) => None,
    };
    Ok((readout, omega_meas))
}

fn build_optics(section: &OpticsSection) -> Result<OpticalParams> {
    let (value, is_wavelength) = exactly_one(
        "readout.optics",
        "wavelength",
        section.wavelength,
        "omega_opt",
        section.omega_opt,
    )?;
    let omega_opt = if is_wavelength {
        TWO_PI * collapse_core::constants::C_LIGHT / value
    } else {
        value
    };
    let (value, is_power) = exactly_one(
        "readout.optics",
        "power",
        section.power,
        "photon_flux",
        section.photon_flux,
    )?;
    let drive = if is_power {
        OpticalDrive::Power(value)
    } else {
        OpticalDrive::PhotonFlux(value)
    };
    let optics = OpticalParams {
        wave_number: section.wave_number,
        finesse: section.finesse,
        omega_opt,
        drive,
    };
    optics.validate()?;
    Ok(optics)
}

fn build_alpha_method(section: &AnalysisSection) -> Result<ResolvedAlphaMethod> {
    match section.alpha_method.as_str() {
        "exact" => Ok(ResolvedAlphaMethod::Exact),
        "asymptotic" => Ok(ResolvedAlphaMethod::Asymptotic),
        "quadrature" => Ok(ResolvedAlphaMethod::Quadrature(section.quadrature_rel_tol)),
        other => Err(config_err(format!(
            "analysis.alpha_method = {other:?}; expected \"exact\", \"asymptotic\", or \"quadrature\""
        ))),
    }
}

pub fn build_channels(section: &SimulationSection) -> Result<ChannelSet> {
    let names = match &section.channels {
        None => return Ok(ChannelSet::all()),
        Some(names) => names,
    };
    let mut channels = ChannelSet::none();
    for name in names {
        match name.as_str() {
            "thermal" => channels.thermal = true,
            "csl" => channels.csl = true,
            "backaction" => channels.backaction = true,
            "shot" => channels.shot = true,
            other => {
                return Err(config_err(format!(
                    "simulation.channels: unknown channel {other:?}; expected \
                     \"thermal\", \"csl\", \"backaction\", or \"shot\""
                )))
            }
        }
    }
    Ok(channels)
}

pub fn build_drive(section: &SimulationSection) -> Result<Option<SinusoidalDrive>> {
    match (section.drive_amplitude, section.drive_frequency) {
        (None, None) => Ok(None),
        (Some(amplitude), Some(f)) => Ok(Some(SinusoidalDrive {
            amplitude,
            omega: TWO_PI * f,
        })),
        _ => Err(config_err(
            "simulation: drive_amplitude and drive_frequency must be given together",
        )),
    }
}

pub fn build_welch(section: &WelchSection) -> Result<WelchConfig> {
    let window = match section.window.as_str() {
        "hann" => Window::Hann,
        "rectangular" => Window::Rectangular,
        other => {
            return Err(config_err(format!(
                "welch.window = {other:?}; expected \"hann\" or \"rectangular\""
            )))
        }
    };
    Ok(WelchConfig {
        segment_length: section.segment_length,
        overlap: section.overlap,
        window,
    })
}

/// Analysis band in rad/s from the Hz fields.
pub fn welch_band(section: &WelchSection) -> Result<Option<(f64, f64)>> {
    match (section.band_min, section.band_max) {
        (None, None) => Ok(None),
        (Some(lo), Some(hi)) if lo >= 0.0 && hi > lo => Ok(Some((TWO_PI * lo, TWO_PI * hi))),
        (Some(_), Some(_)) => Err(config_err(
            "welch: band_min/band_max must satisfy 0 <= band_min < band_max",
        )),
        _ => Err(config_err(
            "welch: band_min and band_max must be given together",
        )),
    }
}
