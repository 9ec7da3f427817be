//! Physical constants, SI units, CODATA 2018 values.

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant (J/K). Exact since the 2019 SI redefinition.
pub const K_B: f64 = 1.380_649e-23;

/// Newtonian constant of gravitation (m^3 kg^-1 s^-2).
pub const G_NEWTON: f64 = 6.674_30e-11;

/// Atomic mass unit (kg).
pub const AMU: f64 = 1.660_539_066_60e-27;

/// Speed of light in vacuum (m/s). Exact.
pub const C_LIGHT: f64 = 299_792_458.0;

/// The constants bundled as a value, for code that threads them explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub k_b: f64,
    pub g_newton: f64,
    pub amu: f64,
    pub c: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    k_b: K_B,
    g_newton: G_NEWTON,
    amu: AMU,
    c: C_LIGHT,
};
