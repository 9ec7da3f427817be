//! Detectability bounds: the collapse-rate levels at which CSL force noise
//! would emerge above the thermal and measurement noise of a given sensor,
//! and the gravity-induced (DP) analogues tied to a crystal's lattice.
//!
//! Every bound is the exact crossover of two noise densities: equating
//! D_CSL = lambda (hbar/r)^2 alpha with a competing density D and solving
//! for lambda. Curves below a bound are invisible to that noise channel.

use crate::constants::{G_NEWTON, HBAR, K_B};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::model::{Material, Oscillator};
use crate::quad;
use std::fmt;

/// Which mechanical response enters the measurement bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SusceptibilityMode {
    /// Full Lorentzian |chi|^-1 = m sqrt((Omega^2 - omega^2)^2 + omega^2 gamma^2).
    FullLorentzian,
    /// High-frequency limit |chi|^-1 = m omega^2; only meaningful well above
    /// resonance.
    FreeMass,
}

impl fmt::Display for SusceptibilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SusceptibilityMode::FullLorentzian => write!(f, "full_lorentzian"),
            SusceptibilityMode::FreeMass => write!(f, "free_mass"),
        }
    }
}

/// CSL force-noise density D_CSL = lambda (hbar/r)^2 alpha (N^2 s).
pub fn csl_diffusion(lambda_csl: f64, r_csl: f64, alpha: f64) -> Result<f64> {
    require_non_negative("lambda_csl", lambda_csl)?;
    require_positive("r_csl", r_csl)?;
    require_non_negative("alpha", alpha)?;
    let scale = HBAR / r_csl;
    Ok(lambda_csl * scale * scale * alpha)
}

/// Collapse rate whose force noise equals the thermal drive:
/// Lambda_T = 2 r^2 gamma k_B T m / (hbar^2 alpha).
pub fn thermal_bound(oscillator: &Oscillator, alpha: f64, r_csl: f64) -> Result<f64> {
    require_positive("alpha", alpha)?;
    require_positive("r_csl", r_csl)?;
    let d_thermal = oscillator.thermal_force_density();
    Ok(d_thermal * r_csl * r_csl / (HBAR * HBAR * alpha))
}

/// Collapse rate whose force noise equals the standard quantum limit at the
/// chosen measurement frequency: Lambda_SQL = r^2 |chi(omega)|^-1 / (hbar alpha).
pub fn measurement_bound(
    oscillator: &Oscillator,
    alpha: f64,
    r_csl: f64,
    omega: f64,
    mode: SusceptibilityMode,
) -> Result<f64> {
    require_positive("alpha", alpha)?;
    require_positive("r_csl", r_csl)?;
    require_positive("omega", omega)?;
    let chi_inv = match mode {
        SusceptibilityMode::FullLorentzian => oscillator.inverse_susceptibility_magnitude(omega),
        SusceptibilityMode::FreeMass => {
            let min = 10.0 * oscillator.omega0;
            if omega < min {
                return Err(Error::FreeMassRegime { omega, min });
            }
            oscillator.mass * omega * omega
        }
    };
    Ok(r_csl * r_csl * chi_inv / (HBAR * alpha))
}

// DP noise falls off as exp(-sigma^2 q^2) beyond the mass-density cutoff;
// the closed form below assumes the Gaussian resolves individual nuclei.
const DP_BLUR_MARGIN: f64 = 5.0;

fn dp_prefactor(material: &Material, mass: f64, sigma_dp: f64) -> Result<f64> {
    require_positive("mass", mass)?;
    require_positive("sigma_dp", sigma_dp)?;
    let lattice = material.lattice()?;
    let limit = lattice.constant / DP_BLUR_MARGIN;
    if sigma_dp > limit {
        return Err(Error::BlurTooCoarse {
            sigma: sigma_dp,
            limit,
        });
    }
    Ok(lattice.constant)
}

/// DP force-noise density for a crystal of lattice constant a, nuclei
/// resolved at blur sigma: D_DP = (G hbar / 6 sqrt(pi)) (a/sigma)^3 rho m.
pub fn dp_diffusion_lattice(material: &Material, mass: f64, sigma_dp: f64) -> Result<f64> {
    let a = dp_prefactor(material, mass, sigma_dp)?;
    let ratio = a / sigma_dp;
    Ok(G_NEWTON * HBAR / (6.0 * std::f64::consts::PI.sqrt())
        * ratio.powi(3)
        * material.density
        * mass)
}

/// Same density computed from the underlying momentum integral,
/// D_DP = (G hbar m_A^2 V / 6 pi^2 a^3) * 4 pi Int q^2 e^{-sigma^2 q^2} dq,
/// by adaptive quadrature. Agrees with the closed form to the requested
/// tolerance; kept as an independent cross-check of the lattice reduction.
pub fn dp_diffusion_quadrature(
    material: &Material,
    mass: f64,
    sigma_dp: f64,
    rel_tol: f64,
) -> Result<f64> {
    let a = dp_prefactor(material, mass, sigma_dp)?;
    let lattice = material.lattice()?;
    let volume = mass / material.density;
    let s2 = sigma_dp * sigma_dp;
    let radial = quad::integrate(
        |q| q * q * (-s2 * q * q).exp(),
        0.0,
        40.0 / sigma_dp,
        rel_tol,
        0.0,
        10_000,
    )?;
    let angular = 4.0 * std::f64::consts::PI * radial.value;
    Ok(G_NEWTON * HBAR * lattice.nuclear_mass * lattice.nuclear_mass * volume
        / (6.0 * std::f64::consts::PI.powi(2) * a.powi(3))
        * angular)
}

/// Blur scale below which DP noise would overtake both the zero-point
/// measurement noise and the thermal drive at frequency omega:
/// Sigma_DP = [G hbar rho / (6 sqrt(pi) (hbar omega^2 + 2 gamma k_B T))]^{1/3} a.
/// Independent of the oscillator mass.
pub fn dp_blur_bound(material: &Material, oscillator: &Oscillator, omega: f64) -> Result<f64> {
    require_positive("omega", omega)?;
    let lattice = material.lattice()?;
    let competing = HBAR * omega * omega
        + 2.0 * oscillator.gamma * K_B * oscillator.temperature;
    let bracket =
        G_NEWTON * HBAR * material.density / (6.0 * std::f64::consts::PI.sqrt() * competing);
    Ok(bracket.cbrt() * lattice.constant)
}

/// The white force-noise densities acting on a sensor (N^2 s).
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBudget {
    pub d_csl: f64,
    pub d_thermal: f64,
    /// Present when the material carries lattice data and a blur was given.
    pub d_dp: Option<f64>,
    pub notes: Vec<String>,
}

pub fn noise_budget(
    oscillator: &Oscillator,
    lambda_csl: f64,
    r_csl: f64,
    alpha: f64,
    dp: Option<(&Material, f64)>,
) -> Result<NoiseBudget> {
    let d_csl = csl_diffusion(lambda_csl, r_csl, alpha)?;
    let d_thermal = oscillator.thermal_force_density();
    let mut notes = Vec::new();
    let d_dp = match dp {
        Some((material, sigma)) => {
            let d = dp_diffusion_lattice(material, oscillator.mass, sigma)?;
            notes.push(format!(
                "DP term uses lattice constant {:e} m at blur {:e} m",
                material.lattice()?.constant,
                sigma
            ));
            Some(d)
        }
        None => None,
    };
    if !oscillator.high_temperature_valid() {
        notes.push("thermal term extrapolated below k_B T = 10 hbar Omega".into());
    }
    Ok(NoiseBudget {
        d_csl,
        d_thermal,
        d_dp,
        notes,
    })
}

/// Detectability summary of one sensor at one measurement frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub lambda_thermal: f64,
    pub lambda_sql: f64,
    /// DP blur bound; present when the material carries lattice data.
    pub sigma_dp: Option<f64>,
    pub omega: f64,
    pub mode: SusceptibilityMode,
}

impl BoundReport {
    /// Collapse rates above max(Lambda_T, Lambda_SQL) are visible.
    pub fn lambda_floor(&self) -> f64 {
        self.lambda_thermal.max(self.lambda_sql)
    }
}

pub fn bound_report(
    oscillator: &Oscillator,
    alpha: f64,
    r_csl: f64,
    omega: f64,
    mode: SusceptibilityMode,
    material: Option<&Material>,
) -> Result<BoundReport> {
    let lambda_thermal = thermal_bound(oscillator, alpha, r_csl)?;
    let lambda_sql = measurement_bound(oscillator, alpha, r_csl, omega, mode)?;
    let sigma_dp = match material {
        Some(m) if m.lattice().is_ok() => Some(dp_blur_bound(m, oscillator, omega)?),
        _ => None,
    };
    Ok(BoundReport {
        lambda_thermal,
        lambda_sql,
        sigma_dp,
        omega,
        mode,
    })
}
