//! The dimensionless geometry factor alpha that converts a localization rate
//! into a momentum-diffusion constant. alpha is a Gaussian-weighted second
//! moment of the body's mass-density Fourier transform,
//!
//!   alpha = (r^5 / (pi^{3/2} amu^2)) * Int d^3k k_x^2 e^{-r^2 k^2} |rho(k)|^2,
//!
//! with r the localization length and rho(0) = m. Three evaluation routes:
//! closed forms for cuboid/disc/sphere/point, large-body asymptotics, and
//! direct adaptive quadrature of the defining integral as an independent
//! cross-check.

use crate::constants::AMU;
use crate::error::{Error, Result};
use crate::model::Geometry;
use crate::quad;
use crate::special::{i0e, i1e, j1c, sinc, sphere_profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMethod {
    Exact,
    Asymptotic,
    Quadrature,
}

impl std::fmt::Display for AlphaMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AlphaMethod::Exact => "exact",
            AlphaMethod::Asymptotic => "asymptotic",
            AlphaMethod::Quadrature => "quadrature",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AlphaResult {
    pub alpha: f64,
    pub method: AlphaMethod,
    /// Populated by the quadrature route only.
    pub estimated_relative_error: Option<f64>,
}

/// Magnitude of the mass-density Fourier transform |rho(k)| in kg.
/// Motion is along x; the disc normal is x.
pub fn form_factor(geometry: &Geometry, mass: f64, k: [f64; 3]) -> Result<f64> {
    if k.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "wave vector components must be finite, got [{:e}, {:e}, {:e}]",
            k[0], k[1], k[2]
        )));
    }
    geometry.validate()?;
    let [kx, ky, kz] = k;
    let value = match *geometry {
        Geometry::Cuboid { b_x, b_y, b_z } => {
            mass * sinc(0.5 * kx * b_x) * sinc(0.5 * ky * b_y) * sinc(0.5 * kz * b_z)
        }
        Geometry::Disc { radius, thickness } => {
            let k_perp = ky.hypot(kz);
            mass * j1c(k_perp * radius) * sinc(0.5 * kx * thickness)
        }
        Geometry::Sphere { radius } => {
            let k_mag = (kx * kx + ky * ky + kz * kz).sqrt();
            mass * sphere_profile(k_mag * radius)
        }
        Geometry::Point => mass,
    };
    Ok(value.abs())
}

/// Transverse overlap factor for a slab side of scaled width xi:
/// (2/xi^2) [e^{-xi^2/2} - 1 + sqrt(pi/2) xi erf(xi/sqrt(2))].
/// Decreases from 1 at xi = 0 toward sqrt(2 pi)/xi.
pub fn gamma_one(xi: f64) -> f64 {
    assert!(xi >= 0.0, "gamma_one defined for xi >= 0, got {xi}");
    let u = xi * xi;
    if xi <= 1e-4 {
        // leading cancellation removed analytically
        return 1.0 - u / 12.0 + u * u / 120.0;
    }
    if xi > 1e150 {
        // u overflows; erf saturated long before this
        return (2.0 * std::f64::consts::PI).sqrt() / xi - 2.0 / (xi * xi);
    }
    let smooth = (-0.5 * u).exp_m1();
    let grown = (std::f64::consts::PI / 2.0).sqrt() * xi * libm::erf(xi / std::f64::consts::SQRT_2);
    (2.0 / u) * (smooth + grown)
}

/// Radial overlap factor for a disc face of scaled radius xi:
/// (2/xi^2) {1 - e^{-xi^2} [I0(xi^2) + I1(xi^2)]}.
/// Decreases from 1 at xi = 0 toward 2/xi^2.
pub fn gamma_perp(xi: f64) -> f64 {
    assert!(xi >= 0.0, "gamma_perp defined for xi >= 0, got {xi}");
    let u = xi * xi;
    if u <= 0.5 {
        gamma_perp_series(u)
    } else {
        (2.0 / u) * (1.0 - (i0e(u) + i1e(u)))
    }
}

// Maclaurin coefficients of [1 - e^{-u}(I0(u)+I1(u))]/u; 21 terms hold the
// truncation error below 1e-24 at u = 0.5, past the direct route's accuracy.
const GAMMA_PERP_SERIES: [f64; 21] = [
    1.0 / 2.0,
    -1.0 / 4.0,
    5.0 / 48.0,
    -7.0 / 192.0,
    7.0 / 640.0,
    -11.0 / 3840.0,
    143.0 / 215040.0,
    -143.0 / 1032192.0,
    2431.0 / 92897280.0,
    -4199.0 / 928972800.0,
    4199.0 / 5839257600.0,
    -7429.0 / 70071091200.0,
    7429.0 / 510117543936.0,
    -7429.0 / 3967580897280.0,
    215441.0 / 952219415347200.0,
    -392863.0 / 15235510645555200.0,
    392863.0 / 141274735076966400.0,
    -20677.0 / 72655578039582720.0,
    765049.0 / 27609119655041433600.0,
    -765049.0 / 297328980900446208000.0,
    31367009.0 / 137365989176006148096000.0,
];

fn gamma_perp_series(u: f64) -> f64 {
    let mut sum = 0.0;
    for &c in GAMMA_PERP_SERIES.iter().rev() {
        sum = sum * u + c;
    }
    2.0 * sum
}

// [1 - e^{-w}] / (2w) with w = (b/2r)^2: the overlap factor along the motion
// axis. exp_m1 keeps small w exact; w -> 0 gives the point-limit value 1/2.
fn axial_factor(b: f64, r: f64) -> f64 {
    let s = b / (2.0 * r);
    let w = s * s;
    -(-w).exp_m1() / (2.0 * w)
}

// 6 [e^{-v} - 1 + (v/2)(e^{-v} + 1)] / v^3 with v = (R/r)^2; series below
// v = 1 where the bracket cancels to O(v^3).
fn sphere_factor(v: f64) -> f64 {
    if v <= 1.0 {
        // coefficient of v^n in the bracket: (-1)^n/n! + (1/2)(-1)^{n-1}/(n-1)!
        let mut sum = 0.0;
        let mut factorial = 2.0; // (n-1)! at n = 3
        let mut sign = -1.0; // (-1)^n at n = 3
        let mut v_pow = 1.0;
        for n in 3..40 {
            let c = sign / (factorial * n as f64) - 0.5 * sign / factorial;
            let term = c * v_pow;
            sum += term;
            if term.abs() < f64::EPSILON * sum.abs() {
                break;
            }
            factorial *= n as f64;
            sign = -sign;
            v_pow *= v;
        }
        6.0 * sum
    } else {
        let e = (-v).exp();
        6.0 * (e - 1.0 + 0.5 * v * (e + 1.0)) / (v * v * v)
    }
}

fn validate_alpha_inputs(geometry: &Geometry, mass: f64, r_csl: f64) -> Result<()> {
    geometry.validate()?;
    crate::error::require_positive("mass", mass)?;
    crate::error::require_positive("r_csl", r_csl)?;
    Ok(())
}

/// Closed-form alpha for the supported shapes.
pub fn alpha_exact(geometry: &Geometry, mass: f64, r_csl: f64) -> Result<AlphaResult> {
    validate_alpha_inputs(geometry, mass, r_csl)?;
    let m_amu = mass / AMU;
    let root2r = std::f64::consts::SQRT_2 * r_csl;
    let alpha = match *geometry {
        Geometry::Cuboid { b_x, b_y, b_z } => {
            m_amu * m_amu
                * gamma_one(b_y / root2r)
                * gamma_one(b_z / root2r)
                * axial_factor(b_x, r_csl)
        }
        Geometry::Disc { radius, thickness } => {
            m_amu * m_amu * gamma_perp(radius / root2r) * axial_factor(thickness, r_csl)
        }
        Geometry::Sphere { radius } => {
            let ratio = radius / r_csl;
            m_amu * m_amu * sphere_factor(ratio * ratio)
        }
        Geometry::Point => 0.5 * m_amu * m_amu,
    };
    Ok(AlphaResult {
        alpha,
        method: AlphaMethod::Exact,
        estimated_relative_error: None,
    })
}

/// Large-body asymptotic alpha. Valid for cubes and spheres with side/radius
/// at least 5 r_csl and for thin wide discs (thickness <= r_csl/5, radius >=
/// 5 r_csl); out-of-regime inputs are refused rather than extrapolated.
pub fn alpha_asymptotic(geometry: &Geometry, mass: f64, r_csl: f64) -> Result<AlphaResult> {
    validate_alpha_inputs(geometry, mass, r_csl)?;
    let pi = std::f64::consts::PI;
    let amu2 = AMU * AMU;
    let alpha = match *geometry {
        Geometry::Cuboid { b_x, b_y, b_z } => {
            if b_x != b_y || b_y != b_z {
                return Err(Error::OutOfAsymptoticRegime {
                    shape: "cuboid",
                    detail: format!(
                        "the large-body form covers cubes only, got sides \
                         {b_x:e} x {b_y:e} x {b_z:e}"
                    ),
                });
            }
            if b_x < 5.0 * r_csl {
                return Err(Error::OutOfAsymptoticRegime {
                    shape: "cube",
                    detail: format!("side {b_x:e} m < 5 r_csl = {:e} m", 5.0 * r_csl),
                });
            }
            let density = mass / (b_x * b_y * b_z);
            8.0 * pi * density * density * r_csl.powi(4) * b_x * b_x / amu2
        }
        Geometry::Disc { radius, thickness } => {
            if thickness > r_csl / 5.0 || radius < 5.0 * r_csl {
                return Err(Error::OutOfAsymptoticRegime {
                    shape: "disc",
                    detail: format!(
                        "need thickness <= r_csl/5 and radius >= 5 r_csl, got \
                         thickness {thickness:e} m, radius {radius:e} m, r_csl {r_csl:e} m"
                    ),
                });
            }
            let density = mass / (pi * radius * radius * thickness);
            2.0 * pi * pi * density * density * r_csl * r_csl * thickness * thickness * radius
                * radius
                / amu2
        }
        Geometry::Sphere { radius } => {
            if radius < 5.0 * r_csl {
                return Err(Error::OutOfAsymptoticRegime {
                    shape: "sphere",
                    detail: format!("radius {radius:e} m < 5 r_csl = {:e} m", 5.0 * r_csl),
                });
            }
            let density = mass / (4.0 / 3.0 * pi * radius.powi(3));
            16.0 * pi * pi * density * density * r_csl.powi(4) * radius * radius / (3.0 * amu2)
        }
        Geometry::Point => {
            return Err(Error::OutOfAsymptoticRegime {
                shape: "point",
                detail: "a point mass has no large-body limit".into(),
            })
        }
    };
    Ok(AlphaResult {
        alpha,
        method: AlphaMethod::Asymptotic,
        estimated_relative_error: None,
    })
}

// Integration budget per 1-D factor. The integrands are non-negative with at
// most ~dimension/r_csl Gaussian-damped oscillations over the truncated
// domain; the budget covers dimension/r_csl ratios beyond ~2e4.
const MAX_PANELS: usize = 40_000;

/// Adaptive quadrature of the defining integral, the independent cross-check
/// for the closed forms. The k-space Gaussian is truncated at |k| = 40/r_csl
/// (weight e^{-1600}, far below any tolerance).
pub fn alpha_quadrature(
    geometry: &Geometry,
    mass: f64,
    r_csl: f64,
    rel_tol: f64,
) -> Result<AlphaResult> {
    validate_alpha_inputs(geometry, mass, r_csl)?;
    if !(1e-12..=1e-3).contains(&rel_tol) {
        return Err(Error::TolOutOfRange { value: rel_tol });
    }
    let k_max = 40.0 / r_csl;
    let r2 = r_csl * r_csl;
    // splitting the tolerance across factors keeps the product within rel_tol
    let factor_tol = rel_tol / 4.0;
    let pi = std::f64::consts::PI;
    let m_amu = mass / AMU;
    let prefactor = r_csl.powi(5) * m_amu * m_amu / pi.powf(1.5);

    // axial factor carries the k_x^2 moment; `width` is the dimension along x
    let axial = |width: f64| -> Result<quad::QuadResult> {
        quad::integrate(
            |k| {
                let s = sinc(0.5 * k * width);
                k * k * (-r2 * k * k).exp() * s * s
            },
            0.0,
            k_max,
            factor_tol,
            0.0,
            MAX_PANELS,
        )
    };

    let (value, rel_err) = match *geometry {
        Geometry::Cuboid { b_x, b_y, b_z } => {
            let ix = axial(b_x)?;
            let transverse = |width: f64| -> Result<quad::QuadResult> {
                quad::integrate(
                    |k| {
                        let s = sinc(0.5 * k * width);
                        (-r2 * k * k).exp() * s * s
                    },
                    0.0,
                    k_max,
                    factor_tol,
                    0.0,
                    MAX_PANELS,
                )
            };
            let iy = transverse(b_y)?;
            let iz = transverse(b_z)?;
            let value = prefactor * (2.0 * ix.value) * (2.0 * iy.value) * (2.0 * iz.value);
            let rel = ix.abs_error / ix.value + iy.abs_error / iy.value + iz.abs_error / iz.value;
            (value, rel)
        }
        Geometry::Disc { radius, thickness } => {
            let ix = axial(thickness)?;
            let iperp = quad::integrate(
                |k| {
                    let s = j1c(k * radius);
                    k * (-r2 * k * k).exp() * s * s
                },
                0.0,
                k_max,
                factor_tol,
                0.0,
                MAX_PANELS,
            )?;
            let value = prefactor * (2.0 * ix.value) * (2.0 * pi * iperp.value);
            let rel = ix.abs_error / ix.value + iperp.abs_error / iperp.value;
            (value, rel)
        }
        Geometry::Sphere { radius } => {
            let radial = quad::integrate(
                |k| {
                    let s = sphere_profile(k * radius);
                    k.powi(4) * (-r2 * k * k).exp() * s * s
                },
                0.0,
                k_max,
                factor_tol,
                0.0,
                MAX_PANELS,
            )?;
            let value = prefactor * (4.0 * pi / 3.0) * radial.value;
            (value, radial.abs_error / radial.value)
        }
        Geometry::Point => {
            let radial = quad::integrate(
                |k| k.powi(4) * (-r2 * k * k).exp(),
                0.0,
                k_max,
                factor_tol,
                0.0,
                MAX_PANELS,
            )?;
            let value = prefactor * (4.0 * pi / 3.0) * radial.value;
            (value, radial.abs_error / radial.value)
        }
    };

    Ok(AlphaResult {
        alpha: value,
        method: AlphaMethod::Quadrature,
        estimated_relative_error: Some(rel_err),
    })
}
