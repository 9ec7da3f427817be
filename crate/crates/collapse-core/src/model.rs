//! Shared domain types: test-mass geometry, material, mechanical oscillator,
//! optical readout, collapse-model parameters. Everything is an immutable
//! value after construction; constructors enforce the physical invariants so
//! downstream code can assume them.
//!
//! Unit conventions: SI throughout, angular frequencies in rad/s. Quality
//! factor is always derived as Q = Omega/gamma, never stored.

use crate::constants::{C_LIGHT, HBAR, K_B};
use crate::error::{require_non_negative, require_positive, Error, Result};
use num_complex::Complex64;

/// Rigid test-mass shape. Motion is along the x-axis; for a disc that is the
/// symmetry axis, so `thickness` is the dimension along the motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Cuboid { b_x: f64, b_y: f64, b_z: f64 },
    Disc { radius: f64, thickness: f64 },
    Sphere { radius: f64 },
    Point,
}

impl Geometry {
    pub fn cuboid(b_x: f64, b_y: f64, b_z: f64) -> Result<Self> {
        let g = Geometry::Cuboid { b_x, b_y, b_z };
        g.validate()?;
        Ok(g)
    }

    pub fn cube(b: f64) -> Result<Self> {
        Self::cuboid(b, b, b)
    }

    pub fn disc(radius: f64, thickness: f64) -> Result<Self> {
        let g = Geometry::Disc { radius, thickness };
        g.validate()?;
        Ok(g)
    }

    pub fn sphere(radius: f64) -> Result<Self> {
        let g = Geometry::Sphere { radius };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::Cuboid { b_x, b_y, b_z } => {
                require_positive("b_x", b_x)?;
                require_positive("b_y", b_y)?;
                require_positive("b_z", b_z)?;
            }
            Geometry::Disc { radius, thickness } => {
                require_positive("radius", radius)?;
                require_positive("thickness", thickness)?;
            }
            Geometry::Sphere { radius } => {
                require_positive("radius", radius)?;
            }
            Geometry::Point => {}
        }
        Ok(())
    }

    /// None for a point mass.
    pub fn volume(&self) -> Option<f64> {
        match *self {
            Geometry::Cuboid { b_x, b_y, b_z } => Some(b_x * b_y * b_z),
            Geometry::Disc { radius, thickness } => {
                Some(std::f64::consts::PI * radius * radius * thickness)
            }
            Geometry::Sphere { radius } => {
                Some(4.0 / 3.0 * std::f64::consts::PI * radius.powi(3))
            }
            Geometry::Point => None,
        }
    }

    /// Rebuild the shape so that density * volume = mass, for mass sweeps.
    /// Cubes rescale the side, discs keep their thickness and resize the
    /// radius, spheres resize the radius. A general cuboid has no canonical
    /// rescaling and is rejected.
    pub fn with_mass(&self, mass: f64, density: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("density", density)?;
        let volume = mass / density;
        match *self {
            Geometry::Cuboid { b_x, b_y, b_z } => {
                if b_x != b_y || b_y != b_z {
                    return Err(Error::InvalidInput(
                        "mass sweep over a cuboid needs equal sides (a cube); \
                         a general cuboid has no unique rescaling"
                            .into(),
                    ));
                }
                Geometry::cube(volume.cbrt())
            }
            Geometry::Disc { thickness, .. } => {
                let radius = (volume / (std::f64::consts::PI * thickness)).sqrt();
                Geometry::disc(radius, thickness)
            }
            Geometry::Sphere { .. } => {
                Geometry::sphere((volume * 3.0 / (4.0 * std::f64::consts::PI)).cbrt())
            }
            Geometry::Point => Ok(Geometry::Point),
        }
    }
}

/// Monoatomic cubic lattice data, needed only for the gravitational
/// (mass-density blur) diffusion channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    /// Lattice constant a (m).
    pub constant: f64,
    /// Mass per lattice site (kg).
    pub nuclear_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// Bulk mass density (kg/m^3).
    pub density: f64,
    pub lattice: Option<Lattice>,
}

impl Material {
    pub fn new(density: f64) -> Result<Self> {
        require_positive("density", density)?;
        Ok(Material {
            density,
            lattice: None,
        })
    }

    /// Lattice data must reproduce the bulk density: nuclear_mass/a^3 within 1%.
    pub fn with_lattice(density: f64, constant: f64, nuclear_mass: f64) -> Result<Self> {
        require_positive("density", density)?;
        require_positive("lattice constant", constant)?;
        require_positive("nuclear mass", nuclear_mass)?;
        let lattice_density = nuclear_mass / constant.powi(3);
        let mismatch = (lattice_density - density).abs() / density;
        if mismatch > 0.01 {
            return Err(Error::LatticeMismatch {
                lattice: lattice_density,
                bulk: density,
                percent: 100.0 * mismatch,
            });
        }
        Ok(Material {
            density,
            lattice: Some(Lattice {
                constant,
                nuclear_mass,
            }),
        })
    }

    pub fn lattice(&self) -> Result<Lattice> {
        self.lattice.ok_or(Error::MissingLattice)
    }
}

/// Damped mechanical mode holding the test mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    /// Mode mass (kg).
    pub mass: f64,
    /// Resonance angular frequency Omega (rad/s).
    pub omega0: f64,
    /// Damping rate gamma (rad/s).
    pub gamma: f64,
    /// Bath temperature (K).
    pub temperature: f64,
}

impl Oscillator {
    pub fn new(mass: f64, omega0: f64, gamma: f64, temperature: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("omega0", omega0)?;
        require_positive("gamma", gamma)?;
        require_positive("temperature", temperature)?;
        Ok(Oscillator {
            mass,
            omega0,
            gamma,
            temperature,
        })
    }

    pub fn from_quality_factor(mass: f64, omega0: f64, q: f64, temperature: f64) -> Result<Self> {
        require_positive("quality factor", q)?;
        Self::new(mass, omega0, omega0 / q, temperature)
    }

    pub fn quality_factor(&self) -> f64 {
        self.omega0 / self.gamma
    }

    /// The white thermal-force density 2 gamma m k_B T assumes
    /// k_B T well above hbar Omega; threshold factor 10.
    pub fn high_temperature_valid(&self) -> bool {
        K_B * self.temperature >= 10.0 * HBAR * self.omega0
    }

    /// Lorentzian position response: chi(omega) = 1/[m(Omega^2 - omega^2 + i omega gamma)].
    pub fn susceptibility(&self, omega: f64) -> Complex64 {
        let d = Complex64::new(
            self.omega0 * self.omega0 - omega * omega,
            omega * self.gamma,
        );
        1.0 / (self.mass * d)
    }

    /// |chi(omega)|^-1 = m sqrt((Omega^2 - omega^2)^2 + omega^2 gamma^2),
    /// computed directly to avoid the complex round trip.
    pub fn inverse_susceptibility_magnitude(&self, omega: f64) -> f64 {
        let detune = self.omega0 * self.omega0 - omega * omega;
        self.mass * (detune * detune + omega * omega * self.gamma * self.gamma).sqrt()
    }

    /// White force-noise density of the thermal bath, 2 gamma m k_B T (N^2 s).
    pub fn thermal_force_density(&self) -> f64 {
        2.0 * self.gamma * self.mass * K_B * self.temperature
    }
}

/// How the light power driving the cavity is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalDrive {
    /// Injected power (W).
    Power(f64),
    /// Photon flux (1/s).
    PhotonFlux(f64),
}

/// Optical constituents of the transduction coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalParams {
    /// Light wave number (1/m); defaults to omega_opt/c when absent.
    pub wave_number: Option<f64>,
    pub finesse: f64,
    /// Optical angular frequency (rad/s).
    pub omega_opt: f64,
    pub drive: OpticalDrive,
}

impl OpticalParams {
    pub fn validate(&self) -> Result<()> {
        require_positive("finesse", self.finesse)?;
        require_positive("omega_opt", self.omega_opt)?;
        if let Some(k) = self.wave_number {
            require_positive("wave number", k)?;
        }
        match self.drive {
            OpticalDrive::Power(p) => require_positive("power", p)?,
            OpticalDrive::PhotonFlux(phi) => require_positive("photon flux", phi)?,
        };
        Ok(())
    }

    pub fn wave_number(&self) -> f64 {
        self.wave_number.unwrap_or(self.omega_opt / C_LIGHT)
    }

    /// Photon flux Phi = P/(hbar omega_opt) (1/s).
    pub fn photon_flux(&self) -> f64 {
        match self.drive {
            OpticalDrive::PhotonFlux(phi) => phi,
            OpticalDrive::Power(p) => p / (HBAR * self.omega_opt),
        }
    }

    /// Transduction coupling g = k sqrt(finesse * Phi) (Hz^1/2 / m).
    pub fn coupling(&self) -> f64 {
        self.wave_number() * (self.finesse * self.photon_flux()).sqrt()
    }
}

/// Continuous position measurement channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readout {
    /// Transduction strength g (Hz^1/2 / m).
    pub coupling: f64,
    /// Measurement (analysis) angular frequency (rad/s).
    pub omega_meas: f64,
    pub optics: Option<OpticalParams>,
}

impl Readout {
    pub fn new(coupling: f64, omega_meas: f64) -> Result<Self> {
        require_positive("coupling", coupling)?;
        require_positive("omega_meas", omega_meas)?;
        Ok(Readout {
            coupling,
            omega_meas,
            optics: None,
        })
    }

    /// Derive the coupling from optical constituents.
    pub fn from_optics(optics: OpticalParams, omega_meas: f64) -> Result<Self> {
        optics.validate()?;
        require_positive("omega_meas", omega_meas)?;
        Ok(Readout {
            coupling: optics.coupling(),
            omega_meas,
            optics: Some(optics),
        })
    }

    /// Declared coupling plus constituents; both must agree to 1e-12 relative.
    pub fn with_optics(coupling: f64, omega_meas: f64, optics: OpticalParams) -> Result<Self> {
        optics.validate()?;
        require_positive("coupling", coupling)?;
        require_positive("omega_meas", omega_meas)?;
        let derived = optics.coupling();
        if (coupling - derived).abs() > 1e-12 * derived {
            return Err(Error::CouplingMismatch {
                given: coupling,
                derived,
            });
        }
        Ok(Readout {
            coupling,
            omega_meas,
            optics: Some(optics),
        })
    }
}

/// Default localization length r_CSL (m).
pub const R_CSL_DEFAULT: f64 = 1e-7;

/// Collapse-model parameters. `sigma_dp` is the gravitational blur length,
/// present only when the gravitational channel is of interest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseParams {
    /// Localization rate lambda_CSL (1/s).
    pub lambda_csl: f64,
    /// Localization length r_CSL (m).
    pub r_csl: f64,
    /// Gravitational blur length sigma_DP (m).
    pub sigma_dp: Option<f64>,
}

impl CollapseParams {
    pub fn new(lambda_csl: f64, r_csl: f64) -> Result<Self> {
        require_non_negative("lambda_csl", lambda_csl)?;
        require_positive("r_csl", r_csl)?;
        Ok(CollapseParams {
            lambda_csl,
            r_csl,
            sigma_dp: None,
        })
    }

    pub fn csl_only(lambda_csl: f64) -> Result<Self> {
        Self::new(lambda_csl, R_CSL_DEFAULT)
    }

    pub fn with_dp_blur(lambda_csl: f64, r_csl: f64, sigma_dp: f64) -> Result<Self> {
        let mut p = Self::new(lambda_csl, r_csl)?;
        require_positive("sigma_dp", sigma_dp)?;
        p.sigma_dp = Some(sigma_dp);
        Ok(p)
    }
}

/// Derived quantities and advisories from cross-checking an experiment's
/// parts against each other.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub volume: Option<f64>,
    pub geometric_mass: Option<f64>,
    /// |density*volume - mass|/mass, when the geometry has a volume.
    pub mass_mismatch: Option<f64>,
    pub high_temperature_ok: bool,
    pub warnings: Vec<String>,
}

/// Cross-validate geometry, material, and oscillator.
///
/// The declared oscillator mass and the geometric mass density*volume must
/// agree within 5% when `assert_full_mass` is set (the geometry is claimed to
/// be the entire suspended mass); otherwise a disagreement is only a warning,
/// since a mode may carry an effective mass below the physical one.
pub fn validate_experiment(
    geometry: &Geometry,
    material: &Material,
    oscillator: &Oscillator,
    assert_full_mass: bool,
) -> Result<ConsistencyReport> {
    geometry.validate()?;
    require_positive("density", material.density)?;

    let volume = geometry.volume();
    let geometric_mass = volume.map(|v| material.density * v);
    let mass_mismatch =
        geometric_mass.map(|gm| (gm - oscillator.mass).abs() / oscillator.mass);

    let mut warnings = Vec::new();
    if let Some(mismatch) = mass_mismatch {
        if mismatch > 0.05 {
            if assert_full_mass {
                return Err(Error::MassMismatch {
                    geometric: geometric_mass.unwrap(),
                    declared: oscillator.mass,
                    percent: 100.0 * mismatch,
                });
            }
            warnings.push(format!(
                "geometric mass {:.3e} kg differs from declared mass {:.3e} kg by {:.1}%; \
                 treating the declared value as an effective mode mass",
                geometric_mass.unwrap(),
                oscillator.mass,
                100.0 * mismatch
            ));
        }
    }

    let high_temperature_ok = oscillator.high_temperature_valid();
    if !high_temperature_ok {
        warnings.push(format!(
            "k_B T = {:.3e} J is not well above hbar Omega = {:.3e} J; the white \
             thermal-force density 2 gamma m k_B T overestimates the bath noise",
            K_B * oscillator.temperature,
            HBAR * oscillator.omega0
        ));
    }

    Ok(ConsistencyReport {
        volume,
        geometric_mass,
        mass_mismatch,
        high_temperature_ok,
        warnings,
    })
}
