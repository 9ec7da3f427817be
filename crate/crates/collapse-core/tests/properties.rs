//! Structural invariants checked over randomized inputs, plus deterministic
//! scaling-law fits that pin the analytic behavior of the bounds.

use collapse_core::bounds::{
    csl_diffusion, measurement_bound, thermal_bound, SusceptibilityMode,
};
use collapse_core::constants::{AMU, HBAR};
use collapse_core::geometry::{alpha_asymptotic, alpha_exact, gamma_one, gamma_perp};
use collapse_core::model::{CollapseParams, Geometry, Oscillator, Readout};
use collapse_core::sim::analytic_force_psd;
use proptest::prelude::*;

const R: f64 = 1e-7;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn fit_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

proptest! {
    #[test]
    fn overlap_factors_stay_in_unit_interval_and_decrease(
        a in log_uniform(1e-6, 1e6),
        b in log_uniform(1e-6, 1e6),
    ) {
        for f in [gamma_one, gamma_perp] {
            let (fa, fb) = (f(a), f(b));
            prop_assert!(fa > 0.0 && fa <= 1.0);
            prop_assert!(fb > 0.0 && fb <= 1.0);
            if a < b {
                prop_assert!(fa >= fb);
            } else if b < a {
                prop_assert!(fb >= fa);
            }
        }
    }

    #[test]
    fn alpha_never_exceeds_the_point_mass_cap(
        mass in log_uniform(1e-20, 1e-3),
        bx in log_uniform(1e-3, 1e3),
        by in log_uniform(1e-3, 1e3),
        bz in log_uniform(1e-3, 1e3),
        sphere_r in log_uniform(1e-3, 1e3),
        thickness in log_uniform(1e-3, 1e3),
    ) {
        let cap = 0.5 * (mass / AMU) * (mass / AMU);
        let shapes = [
            Geometry::cuboid(bx * R, by * R, bz * R).unwrap(),
            Geometry::sphere(sphere_r * R).unwrap(),
            Geometry::disc(sphere_r * R, thickness * R).unwrap(),
        ];
        for geometry in shapes {
            let alpha = alpha_exact(&geometry, mass, R).unwrap().alpha;
            prop_assert!(alpha > 0.0);
            prop_assert!(alpha <= cap * (1.0 + 1e-12), "{geometry:?}: {alpha:e} > {cap:e}");
        }
        prop_assert_eq!(alpha_exact(&Geometry::Point, mass, R).unwrap().alpha, cap);
    }

    #[test]
    fn alpha_is_invariant_under_joint_rescaling(
        scale in log_uniform(1e-3, 1e3),
        bx in log_uniform(0.1, 10.0),
        by in log_uniform(0.1, 10.0),
        bz in log_uniform(0.1, 10.0),
    ) {
        let mass = 1e-15;
        let base = Geometry::cuboid(bx * R, by * R, bz * R).unwrap();
        let scaled = Geometry::cuboid(scale * bx * R, scale * by * R, scale * bz * R).unwrap();
        let a0 = alpha_exact(&base, mass, R).unwrap().alpha;
        let a1 = alpha_exact(&scaled, mass, scale * R).unwrap().alpha;
        prop_assert!((a0 - a1).abs() / a0 <= 1e-12);
    }

    #[test]
    fn total_noise_never_beats_the_optimized_floor(
        mass in log_uniform(1e-15, 1e-3),
        f0 in log_uniform(0.1, 1e6),
        quality in log_uniform(1.0, 1e6),
        temperature in log_uniform(1e-6, 300.0),
        omega_exp in -2.0..4.0f64,
        g_exp in -3.0..3.0f64,
        lambda in 0.0..1e-7f64,
        alpha in log_uniform(1.0, 1e35),
    ) {
        let osc = Oscillator::from_quality_factor(
            mass, 2.0 * std::f64::consts::PI * f0, quality, temperature).unwrap();
        let omega = osc.omega0 * 10f64.powf(omega_exp);
        let g_sql = (osc.inverse_susceptibility_magnitude(omega) / HBAR).sqrt();
        let collapse = CollapseParams::new(lambda, R).unwrap();

        let g = g_sql * 10f64.powf(g_exp);
        let readout = Readout::new(g, omega).unwrap();
        let s = analytic_force_psd(&osc, &readout, &collapse, alpha, &[omega]).unwrap();
        let floor = s.sql_optimized.as_ref().unwrap()[0];
        prop_assert!(s.total[0] >= floor * (1.0 - 1e-12));

        // at the optimum the bound is met exactly
        let readout = Readout::new(g_sql, omega).unwrap();
        let s = analytic_force_psd(&osc, &readout, &collapse, alpha, &[omega]).unwrap();
        let floor = s.sql_optimized.as_ref().unwrap()[0];
        prop_assert!((s.total[0] - floor).abs() <= 1e-12 * floor);
    }

    #[test]
    fn bounds_sit_exactly_at_their_noise_crossovers(
        mass in log_uniform(1e-15, 1.0),
        f0 in log_uniform(0.1, 1e6),
        quality in log_uniform(1.0, 1e8),
        temperature in log_uniform(1e-6, 300.0),
        omega_exp in -2.0..4.0f64,
        alpha in log_uniform(1.0, 1e35),
    ) {
        let osc = Oscillator::from_quality_factor(
            mass, 2.0 * std::f64::consts::PI * f0, quality, temperature).unwrap();
        let omega = osc.omega0 * 10f64.powf(omega_exp);

        let lam_t = thermal_bound(&osc, alpha, R).unwrap();
        let d = csl_diffusion(lam_t, R, alpha).unwrap();
        prop_assert!((d - osc.thermal_force_density()).abs()
            <= 1e-12 * osc.thermal_force_density());

        let lam_sql =
            measurement_bound(&osc, alpha, R, omega, SusceptibilityMode::FullLorentzian).unwrap();
        let d = csl_diffusion(lam_sql, R, alpha).unwrap();
        let sql = HBAR * osc.inverse_susceptibility_magnitude(omega);
        prop_assert!((d - sql).abs() <= 1e-12 * sql);
    }

    #[test]
    fn quality_factor_round_trips(
        mass in log_uniform(1e-15, 1.0),
        f0 in log_uniform(0.1, 1e7),
        quality in log_uniform(0.5, 1e9),
    ) {
        let osc = Oscillator::from_quality_factor(
            mass, 2.0 * std::f64::consts::PI * f0, quality, 1.0).unwrap();
        let back = osc.quality_factor();
        prop_assert!((back - quality).abs() <= 4.0 * f64::EPSILON * quality);
    }
}

#[test]
fn thermal_bound_grows_as_the_cube_root_of_mass() {
    // solid silicon cubes, everything else held fixed
    let density = 2330.0;
    let osc_at = |m: f64| {
        Oscillator::from_quality_factor(m, 2.0 * std::f64::consts::PI, 1e6, 1.0).unwrap()
    };
    let mut points = Vec::new();
    for i in 0..=12 {
        let mass = 1e-9 * 10f64.powf(0.5 * i as f64);
        let side = (mass / density).cbrt();
        let alpha = alpha_exact(&Geometry::cube(side).unwrap(), mass, R)
            .unwrap()
            .alpha;
        let lambda = thermal_bound(&osc_at(mass), alpha, R).unwrap();
        points.push((mass, lambda));
    }
    let slope = fit_log_slope(&points);
    assert!(
        (slope - 1.0 / 3.0).abs() <= 0.01,
        "thermal bound slope {slope:.4} should be 1/3"
    );
}

#[test]
fn alpha_scaling_laws_in_the_large_object_limit() {
    let density = 2330.0;
    // cubes: alpha ~ m^(2/3) once the side dwarfs the correlation length
    let mut cube_exact = Vec::new();
    let mut cube_asym = Vec::new();
    for i in 0..=8 {
        let mass = 1e-9 * 10f64.powf(0.75 * i as f64);
        let side = (mass / density).cbrt();
        let geometry = Geometry::cube(side).unwrap();
        cube_exact.push((mass, alpha_exact(&geometry, mass, R).unwrap().alpha));
        cube_asym.push((mass, alpha_asymptotic(&geometry, mass, R).unwrap().alpha));
    }
    let exact_slope = fit_log_slope(&cube_exact);
    let asym_slope = fit_log_slope(&cube_asym);
    assert!(
        (exact_slope - 2.0 / 3.0).abs() <= 0.01,
        "cube exact slope {exact_slope:.4}"
    );
    assert!(
        (asym_slope - 2.0 / 3.0).abs() <= 1e-12,
        "cube asymptotic slope {asym_slope:.4}"
    );

    // discs at fixed thickness: radius soaks up the mass, alpha ~ m
    let thickness = 1e-4;
    let mut disc_points = Vec::new();
    for i in 0..=8 {
        let mass = 1e-7 * 10f64.powf(0.5 * i as f64);
        let radius = (mass / (density * std::f64::consts::PI * thickness)).sqrt();
        let geometry = Geometry::disc(radius, thickness).unwrap();
        disc_points.push((mass, alpha_exact(&geometry, mass, R).unwrap().alpha));
    }
    let slope = fit_log_slope(&disc_points);
    assert!(
        (slope - 1.0).abs() <= 0.01,
        "fixed-thickness disc slope {slope:.4} should be 1"
    );
}
