//! Stochastic simulation of the continuously monitored oscillator and force
//! inference from its homodyne record.
//!
//! Dynamics: xdot = p/m, pdot = -m Omega^2 x - gamma p + f, where f collects
//! white force noises (thermal, collapse, measurement back-action) and an
//! optional deterministic drive. The record is the outgoing phase quadrature
//! p_out(t) = p_in(t) + g x(t); shot noise p_in enters only the record, while
//! back-action enters only the dynamics.
//!
//! Discretization: semi-implicit (symplectic) Euler with an exact exponential
//! damping factor per step. A white force of density D contributes a momentum
//! kick sqrt(D dt) xi per step; p_in contributes sqrt(1/(2 dt)) xi per sample,
//! matching a delta correlator of strength 1/2.

use crate::bounds::csl_diffusion;
use crate::constants::HBAR;
use crate::error::{require_non_negative, Error, Result};
use crate::model::{CollapseParams, OpticalParams, Oscillator, Readout};
use crate::spectral::{
    compare_to_analytic, welch_psd, ComparisonReport, PsdEstimate, WelchConfig,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// Lorentzian position response chi(omega) = 1/[m(Omega^2 - omega^2 + i omega gamma)].
pub fn susceptibility(oscillator: &Oscillator, omega: f64) -> Complex64 {
    oscillator.susceptibility(omega)
}

/// Which stochastic channels act during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelSet {
    pub thermal: bool,
    pub csl: bool,
    pub backaction: bool,
    pub shot: bool,
}

impl ChannelSet {
    pub fn all() -> Self {
        ChannelSet {
            thermal: true,
            csl: true,
            backaction: true,
            shot: true,
        }
    }

    pub fn none() -> Self {
        ChannelSet {
            thermal: false,
            csl: false,
            backaction: false,
            shot: false,
        }
    }
}

/// Deterministic force A sin(omega t) injected into the dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidalDrive {
    /// Amplitude (N).
    pub amplitude: f64,
    /// Angular frequency (rad/s).
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub oscillator: Oscillator,
    pub readout: Readout,
    pub collapse: CollapseParams,
    /// Geometry factor for the collapse channel, computed beforehand.
    pub alpha: f64,
    /// Time step (s).
    pub dt: f64,
    /// Recorded duration (s).
    pub duration: f64,
    /// Settling time integrated before recording starts (s).
    pub settle: f64,
    pub seed: u64,
    pub channels: ChannelSet,
    pub drive: Option<SinusoidalDrive>,
    pub initial_position: f64,
    pub initial_momentum: f64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        require_non_negative("alpha", self.alpha)?;
        require_non_negative("settle", self.settle)?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::NonPositive {
                name: "dt",
                value: self.dt,
            });
        }
        let fastest = self.oscillator.omega0.max(self.oscillator.gamma);
        let dt_max = 2.0 * std::f64::consts::PI / (50.0 * fastest);
        if self.dt > dt_max {
            return Err(Error::InvalidInput(format!(
                "dt = {:e} s under-resolves the dynamics; need dt <= 2 pi/(50 max(Omega, gamma)) = {:e} s",
                self.dt, dt_max
            )));
        }
        if self.duration < 100.0 * self.dt {
            return Err(Error::InvalidInput(format!(
                "duration = {:e} s too short; need at least 100 steps ({:e} s)",
                self.duration,
                100.0 * self.dt
            )));
        }
        if !self.initial_position.is_finite() || !self.initial_momentum.is_finite() {
            return Err(Error::InvalidInput(
                "initial conditions must be finite".into(),
            ));
        }
        if let Some(d) = self.drive {
            if !(d.amplitude.is_finite() && d.omega > 0.0 && d.omega.is_finite()) {
                return Err(Error::InvalidInput(
                    "drive needs finite amplitude and positive frequency".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn recorded_steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    pub fn settle_steps(&self) -> usize {
        (self.settle / self.dt).round() as usize
    }
}

/// Force-noise densities (N^2 s) acting in a run, plus the record's shot
/// noise level (quadrature units squared per Hz-equivalent). Disabled
/// channels are stored as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDiffusion {
    pub thermal: f64,
    pub csl: f64,
    pub backaction: f64,
    pub shot_psd: f64,
}

/// Uniformly sampled simulation output.
#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneRecord {
    /// Sample spacing (s).
    pub dt: f64,
    /// Oscillator position at each sample time (m).
    pub x: Vec<f64>,
    /// Outgoing phase quadrature p_in + g x.
    pub p_out: Vec<f64>,
    pub diffusion: ChannelDiffusion,
}

impl HomodyneRecord {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.x.len() as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.x.len()).map(|i| i as f64 * self.dt).collect()
    }
}

// Per-channel RNG streams derived from (seed, channel id): toggling one
// channel never shifts another channel's draws.
const CHANNEL_THERMAL: u64 = 1;
const CHANNEL_CSL: u64 = 2;
const CHANNEL_BACKACTION: u64 = 3;
const CHANNEL_SHOT: u64 = 4;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn channel_rng(seed: u64, channel: u64) -> ChaCha12Rng {
    let mut state = seed ^ channel.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// Integrate the Langevin dynamics and synthesize the homodyne record.
/// Deterministic: identical configs give bit-identical records.
pub fn simulate(config: &SimulationConfig) -> Result<HomodyneRecord> {
    config.validate()?;
    let osc = &config.oscillator;
    let g = config.readout.coupling;
    let dt = config.dt;

    let diffusion = ChannelDiffusion {
        thermal: if config.channels.thermal {
            osc.thermal_force_density()
        } else {
            0.0
        },
        csl: if config.channels.csl {
            csl_diffusion(
                config.collapse.lambda_csl,
                config.collapse.r_csl,
                config.alpha,
            )?
        } else {
            0.0
        },
        backaction: if config.channels.backaction {
            0.5 * HBAR * HBAR * g * g
        } else {
            0.0
        },
        shot_psd: if config.channels.shot { 0.5 } else { 0.0 },
    };

    let mut rng_thermal = channel_rng(config.seed, CHANNEL_THERMAL);
    let mut rng_csl = channel_rng(config.seed, CHANNEL_CSL);
    let mut rng_ba = channel_rng(config.seed, CHANNEL_BACKACTION);
    let mut rng_shot = channel_rng(config.seed, CHANNEL_SHOT);
    let normal = StandardNormal;

    let kick_thermal = (diffusion.thermal * dt).sqrt();
    let kick_csl = (diffusion.csl * dt).sqrt();
    let kick_ba = (diffusion.backaction * dt).sqrt();
    let shot_scale = (1.0 / (2.0 * dt)).sqrt();

    let damp = (-osc.gamma * dt).exp();
    let spring = osc.mass * osc.omega0 * osc.omega0;

    let settle_steps = config.settle_steps();
    let record_steps = config.recorded_steps();
    let total_steps = settle_steps + record_steps;

    let mut x = config.initial_position;
    let mut p = config.initial_momentum;
    let mut xs = Vec::with_capacity(record_steps);
    let mut p_outs = Vec::with_capacity(record_steps);

    for i in 0..total_steps {
        if i >= settle_steps {
            xs.push(x);
            let p_in = if config.channels.shot {
                let xi: f64 = normal.sample(&mut rng_shot);
                shot_scale * xi
            } else {
                0.0
            };
            p_outs.push(p_in + g * x);
        }

        let mut impulse = 0.0;
        if config.channels.thermal {
            let xi: f64 = normal.sample(&mut rng_thermal);
            impulse += kick_thermal * xi;
        }
        if config.channels.csl {
            let xi: f64 = normal.sample(&mut rng_csl);
            impulse += kick_csl * xi;
        }
        if config.channels.backaction {
            let xi: f64 = normal.sample(&mut rng_ba);
            impulse += kick_ba * xi;
        }
        if let Some(d) = config.drive {
            impulse += d.amplitude * (d.omega * (i as f64 * dt)).sin() * dt;
        }

        p = p * damp - spring * x * dt + impulse;
        x += p * dt / osc.mass;

        if !(x.is_finite() && p.is_finite()) {
            return Err(Error::NumericalInstability {
                step: i,
                time: i as f64 * dt,
            });
        }
    }

    Ok(HomodyneRecord {
        dt,
        x: xs,
        p_out: p_outs,
        diffusion,
    })
}

/// Per-channel force-noise terms of a spectrum (N^2 s each).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumChannels {
    pub csl: Vec<f64>,
    pub thermal: Vec<f64>,
    pub shot: Vec<f64>,
    pub backaction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumOrigin {
    Analytic,
    Estimated {
        segments: usize,
        relative_standard_error: f64,
    },
}

/// Force-noise spectral density over a frequency grid, double-sided
/// convention (a white force of delta-correlator strength D appears as a
/// flat level D).
#[derive(Debug, Clone, PartialEq)]
pub struct ForceSpectrum {
    /// Angular frequencies (rad/s).
    pub omega: Vec<f64>,
    /// Total S_f (N^2 s).
    pub total: Vec<f64>,
    /// Additive decomposition; present for analytic spectra.
    pub channels: Option<SpectrumChannels>,
    /// D_CSL + D_T + hbar/|chi|, the coupling-optimized floor; present for
    /// analytic spectra.
    pub sql_optimized: Option<Vec<f64>>,
    pub origin: SpectrumOrigin,
}

impl ForceSpectrum {
    /// View an estimated spectrum as a PSD estimate for statistical
    /// comparison. Analytic spectra have no segment statistics.
    pub fn as_psd_estimate(&self) -> Result<PsdEstimate> {
        match self.origin {
            SpectrumOrigin::Estimated {
                segments,
                relative_standard_error,
            } => Ok(PsdEstimate {
                omega: self.omega.clone(),
                values: self.total.clone(),
                segments,
                relative_standard_error,
            }),
            SpectrumOrigin::Analytic => Err(Error::InvalidInput(
                "analytic spectrum carries no estimation statistics".into(),
            )),
        }
    }
}

/// The four-term force-noise density at each frequency:
/// S_f = D_CSL + 2 gamma m k_B T + 1/(2 g^2 |chi|^2) + hbar^2 g^2 / 2,
/// plus the coupling-optimized floor D_CSL + D_T + hbar/|chi|.
pub fn analytic_force_psd(
    oscillator: &Oscillator,
    readout: &Readout,
    collapse: &CollapseParams,
    alpha: f64,
    omega: &[f64],
) -> Result<ForceSpectrum> {
    require_non_negative("alpha", alpha)?;
    if omega.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(Error::InvalidInput(
            "analytic spectrum needs strictly positive finite frequencies".into(),
        ));
    }
    let g = readout.coupling;
    let d_csl = csl_diffusion(collapse.lambda_csl, collapse.r_csl, alpha)?;
    let d_thermal = oscillator.thermal_force_density();
    let d_ba = 0.5 * HBAR * HBAR * g * g;

    let n = omega.len();
    let mut shot = Vec::with_capacity(n);
    let mut total = Vec::with_capacity(n);
    let mut floor = Vec::with_capacity(n);
    for &w in omega {
        let chi_inv = oscillator.inverse_susceptibility_magnitude(w);
        let s_shot = chi_inv * chi_inv / (2.0 * g * g);
        shot.push(s_shot);
        total.push(d_csl + d_thermal + s_shot + d_ba);
        floor.push(d_csl + d_thermal + HBAR * chi_inv);
    }
    Ok(ForceSpectrum {
        omega: omega.to_vec(),
        total,
        channels: Some(SpectrumChannels {
            csl: vec![d_csl; n],
            thermal: vec![d_thermal; n],
            shot,
            backaction: vec![d_ba; n],
        }),
        sql_optimized: Some(floor),
        origin: SpectrumOrigin::Analytic,
    })
}

/// Estimate the force-noise spectrum behind a homodyne record: Welch PSD of
/// p_out divided by g^2 |chi(omega)|^2, over the resolvable band from the
/// first Welch bin up to Nyquist.
pub fn infer_force_spectrum(
    record: &HomodyneRecord,
    readout: &Readout,
    oscillator: &Oscillator,
    welch: &WelchConfig,
) -> Result<ForceSpectrum> {
    const MIN_SAMPLES: usize = 1 << 12;
    if record.len() < MIN_SAMPLES {
        return Err(Error::RecordTooShort {
            len: record.len(),
            min: MIN_SAMPLES,
        });
    }
    let psd = welch_psd(&record.p_out, record.dt, welch)?;
    let g = readout.coupling;

    // drop the DC bin; transduction carries no static force information
    let mut omega = Vec::with_capacity(psd.omega.len() - 1);
    let mut total = Vec::with_capacity(psd.omega.len() - 1);
    for (&w, &s) in psd.omega.iter().zip(&psd.values).skip(1) {
        let chi_inv = oscillator.inverse_susceptibility_magnitude(w);
        omega.push(w);
        total.push(s * chi_inv * chi_inv / (g * g));
    }
    Ok(ForceSpectrum {
        omega,
        total,
        channels: None,
        sql_optimized: None,
        origin: SpectrumOrigin::Estimated {
            segments: psd.segments,
            relative_standard_error: psd.relative_standard_error,
        },
    })
}

/// Statistically compare an estimated force spectrum to an analytic one over
/// a band (rad/s). The analytic spectrum must be sampled on the estimate's
/// grid, e.g. by passing `estimate.omega` to [`analytic_force_psd`].
pub fn compare_force_spectra(
    estimate: &ForceSpectrum,
    analytic: &ForceSpectrum,
    band: (f64, f64),
) -> Result<ComparisonReport> {
    let psd = estimate.as_psd_estimate()?;
    compare_to_analytic(&psd, &analytic.omega, &analytic.total, band)
}

/// The coupling minimizing shot plus back-action noise, and the equivalent
/// injected laser power when the optical constituents are known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqlCoupling {
    /// g_SQL = 1/sqrt(hbar |chi(omega)|) (Hz^1/2 / m).
    pub g_sql: f64,
    /// Power reproducing g_SQL through g = k sqrt(finesse * P/(hbar omega_opt)) (W).
    pub p_sql: Option<f64>,
}

pub fn sql_coupling(
    oscillator: &Oscillator,
    omega: f64,
    optics: Option<&OpticalParams>,
) -> SqlCoupling {
    let chi_inv = oscillator.inverse_susceptibility_magnitude(omega);
    let g_sql = (chi_inv / HBAR).sqrt();
    let p_sql = optics.map(|o| {
        let k = o.wave_number();
        g_sql * g_sql * HBAR * o.omega_opt / (k * k * o.finesse)
    });
    SqlCoupling { g_sql, p_sql }
}
