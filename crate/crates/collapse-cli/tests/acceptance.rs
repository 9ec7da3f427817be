//! Acceptance suite: one test per release criterion, each printing a
//! single PASS/FAIL line (run with --nocapture to see the lines for
//! passing tests). Tolerances are pinned here, not in helper code.

use collapse_core::bounds::{
    csl_diffusion, dp_blur_bound, dp_diffusion_lattice, dp_diffusion_quadrature, thermal_bound,
};
use collapse_core::constants::{AMU, G_NEWTON, HBAR, K_B};
use collapse_core::geometry::{alpha_asymptotic, alpha_exact, alpha_quadrature};
use collapse_core::model::{CollapseParams, Geometry, Material, Oscillator, Readout};
use collapse_core::sim::{
    analytic_force_psd, compare_force_spectra, infer_force_spectrum, simulate, sql_coupling,
    ChannelSet, SimulationConfig,
};
use collapse_core::spectral::{WelchConfig, Window};
use std::time::Instant;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const R_CSL: f64 = 1e-7;
const SILICON_DENSITY: f64 = 2300.0;

fn verdict(number: u32, name: &str, pass: bool, details: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let line = format!("ACCEPTANCE {number} {name}: {tag} - {details}");
    println!("{line}");
    assert!(pass, "{line}");
}

fn silicon_cube(mass: f64) -> Geometry {
    let side = (mass / SILICON_DENSITY).powf(1.0 / 3.0);
    Geometry::cuboid(side, side, side).unwrap()
}

// 1. The bundled survey reproduces the published sensitivity table within a
//    factor of two per entry, and regresses against frozen values.
#[test]
fn acceptance_01_reference_survey() {
    let started = Instant::now();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_collapse-survey"))
        .args(["table1", "--format", "csv"])
        .output()
        .expect("binary should spawn");
    let elapsed = started.elapsed();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);

    // name -> (alpha, lambda_thermal, lambda_sql) regression values
    let frozen = [
        ("gw_detector", 3.236570430282e32, 0.23136464797706, 4.62655863820913e-4),
        ("gw_detector_sphere", 2.60866501837536e32, 0.28705409586146, 5.74017084482512e-4),
        ("suspended_disc", 9.11432042426883e28, 2.56748426993678e-6, 5.13415365372492e-8),
        ("hypothetical", 1.83209918677099e27, 1.71207067992508e-10, 2.0541587825165e-9),
        ("sin_membrane", 1.03239649187058e26, 0.366181668778532, 2.86921605943227e-6),
        ("aluminum_membrane", 2.58911883899532e23, 1.44610584685586e-5, 2.54474493702916e-7),
    ];
    // published bounds per named system (1/s)
    let published = [
        ("gw_detector", 2e-1, 3e-4),
        ("suspended_disc", 5e-6, 1e-7),
        ("hypothetical", 2e-10, 2e-9),
        ("sin_membrane", 4e-1, 3e-6),
        ("aluminum_membrane", 1e-5, 2e-7),
    ];

    let mut rows = std::collections::HashMap::new();
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() == 5 && cells[1].parse::<f64>().is_ok() {
            let parsed: Vec<f64> = cells[1..4].iter().map(|c| c.parse().unwrap()).collect();
            rows.insert(cells[0].to_string(), (parsed[0], parsed[1], parsed[2]));
        }
    }

    let mut worst_regression = 0.0_f64;
    for (name, alpha, lambda_t, lambda_sql) in frozen {
        let (a, lt, ls) = *rows.get(name).unwrap_or_else(|| panic!("missing row {name}"));
        for (got, want) in [(a, alpha), (lt, lambda_t), (ls, lambda_sql)] {
            worst_regression = worst_regression.max((got / want - 1.0).abs());
        }
    }
    let mut worst_factor = 1.0_f64;
    for (name, lambda_t, lambda_sql) in published {
        let (_, lt, ls) = rows[name];
        for (got, want) in [(lt, lambda_t), (ls, lambda_sql)] {
            let factor = (got / want).max(want / got);
            worst_factor = worst_factor.max(factor);
        }
    }
    let pass = worst_factor <= 2.0 && worst_regression <= 1e-6 && elapsed.as_secs_f64() < 1.0;
    verdict(
        1,
        "reference-survey",
        pass,
        &format!(
            "worst published-value factor {worst_factor:.3} (limit 2), regression drift \
             {worst_regression:.2e} (limit 1e-6), runtime {:.3} s (limit 1)",
            elapsed.as_secs_f64()
        ),
    );
}

// 2. Closed-form alpha agrees with adaptive quadrature of the defining
//    integral across six decades of dimension/r_csl.
#[test]
fn acceptance_02_form_factor_oracle() {
    let started = Instant::now();
    let mass = 1e-15;
    let mut geometries: Vec<Geometry> = Vec::new();
    for i in 0..17 {
        let ratio = 10f64.powf(-3.0 + 6.0 * i as f64 / 16.0);
        let d = ratio * R_CSL;
        geometries.push(Geometry::cuboid(d, d, d).unwrap());
        geometries.push(Geometry::sphere(d).unwrap());
    }
    for i in 0..16 {
        let ratio = 10f64.powf(-3.0 + 6.0 * i as f64 / 15.0);
        geometries.push(Geometry::disc(ratio * R_CSL, 0.3 * ratio * R_CSL).unwrap());
    }
    assert_eq!(geometries.len(), 50);

    let mut worst = 0.0_f64;
    for geometry in &geometries {
        let exact = alpha_exact(geometry, mass, R_CSL).unwrap().alpha;
        let quad = alpha_quadrature(geometry, mass, R_CSL, 1e-8).unwrap().alpha;
        worst = worst.max((quad / exact - 1.0).abs());
    }
    let elapsed = started.elapsed();
    let pass = worst <= 1e-6 && elapsed.as_secs() < 60;
    verdict(
        2,
        "form-factor-oracle",
        pass,
        &format!(
            "worst relative disagreement {worst:.2e} over 50 geometries (limit 1e-6), \
             runtime {:.2} s (limit 60)",
            elapsed.as_secs_f64()
        ),
    );
}

// 3. Asymptotic closed forms within 1% of exact at the declared regime
//    edges: cube/sphere dimension >= 20 r_csl, disc d <= r_csl/20 with
//    R >= 20 r_csl.
#[test]
fn acceptance_03_asymptotic_consistency() {
    let mass = 1e-12;
    let dev = |g: &Geometry| -> f64 {
        let exact = alpha_exact(g, mass, R_CSL).unwrap().alpha;
        let asym = alpha_asymptotic(g, mass, R_CSL).unwrap().alpha;
        (asym / exact - 1.0).abs()
    };

    // deviations shrink monotonically with size, so the regime edge is the
    // worst case; scan upward anyway and record where 1% is first met
    let mut cube_max = 0.0_f64;
    let mut sphere_max = 0.0_f64;
    let mut disc_max = 0.0_f64;
    let mut cube_threshold = f64::NAN;
    let mut disc_threshold = f64::NAN;
    for i in 0..40 {
        let ratio = 20.0 * 10f64.powf(1.5 * i as f64 / 39.0);
        let side = ratio * R_CSL;
        let cube_dev = dev(&Geometry::cuboid(side, side, side).unwrap());
        let sphere_dev = dev(&Geometry::sphere(side).unwrap());
        let disc_dev = dev(&Geometry::disc(side, R_CSL / 20.0).unwrap());
        cube_max = cube_max.max(cube_dev);
        sphere_max = sphere_max.max(sphere_dev);
        disc_max = disc_max.max(disc_dev);
        if cube_threshold.is_nan() && cube_dev <= 0.01 {
            cube_threshold = ratio;
        }
        if disc_threshold.is_nan() && disc_dev <= 0.01 {
            disc_threshold = ratio;
        }
    }
    let pass = cube_max <= 0.01 && sphere_max <= 0.01 && disc_max <= 0.01;
    verdict(
        3,
        "asymptotic-consistency",
        pass,
        &format!(
            "max deviation at the regime edge: cube {:.1}%, sphere {:.2}%, disc {:.1}% \
             (limit 1%); the cube form needs dimension >= {:.0} r_csl and the disc \
             R >= {:.0} r_csl to reach 1%",
            100.0 * cube_max,
            100.0 * sphere_max,
            100.0 * disc_max,
            cube_threshold,
            disc_threshold
        ),
    );
}

// 4. alpha approaches the coherent point value (m/amu)^2/2 as dimensions
//    shrink to r_csl/100.
#[test]
fn acceptance_04_point_mass_limit() {
    let mass = 1e-12;
    let point_value = {
        let m_amu = mass / AMU;
        0.5 * m_amu * m_amu
    };
    let tiny = R_CSL / 100.0;
    let mut worst = 0.0_f64;
    for geometry in [
        Geometry::cuboid(tiny, tiny, tiny).unwrap(),
        Geometry::sphere(tiny).unwrap(),
        Geometry::disc(tiny, tiny).unwrap(),
    ] {
        let alpha = alpha_exact(&geometry, mass, R_CSL).unwrap().alpha;
        worst = worst.max((alpha / point_value - 1.0).abs());
    }
    let pass = worst <= 1e-4;
    verdict(
        4,
        "point-mass-limit",
        pass,
        &format!("worst relative deviation {worst:.2e} at dimension r_csl/100 (limit 1e-4)"),
    );
}

// 5. A 1 ug silicon cube at 1 K with Q = 1e6 reaches nHz collapse rates
//    through its thermal bound. The mode frequency convention decides the
//    exact value, so both readings are computed; the claim holds for the
//    angular one (Omega = 1 rad/s).
#[test]
fn acceptance_05_microgram_thermal_bound() {
    let mass = 1e-9;
    let q = 1e6;
    let temperature = 1.0;
    let alpha = alpha_exact(&silicon_cube(mass), mass, R_CSL).unwrap().alpha;

    let angular = Oscillator::from_quality_factor(mass, 1.0, q, temperature).unwrap();
    let cyclic = Oscillator::from_quality_factor(mass, TWO_PI, q, temperature).unwrap();
    let lambda_angular = thermal_bound(&angular, alpha, R_CSL).unwrap();
    let lambda_cyclic = thermal_bound(&cyclic, alpha, R_CSL).unwrap();

    let pass = (0.5e-9..=2e-9).contains(&lambda_angular);
    verdict(
        5,
        "microgram-thermal-bound",
        pass,
        &format!(
            "Lambda_T = {lambda_angular:.3e} 1/s for Omega = 1 rad/s (claim window \
             [5e-10, 2e-9]); the Omega = 2 pi rad/s reading gives {lambda_cyclic:.3e}"
        ),
    );
}

// 6. Golden-section minimization of the g-dependent measurement noise
//    recovers g_SQL, where shot and back-action contributions are equal.
#[test]
fn acceptance_06_sql_coupling_identity() {
    let oscillator =
        Oscillator::from_quality_factor(1e-11, TWO_PI * 100.0, 1e3, 0.1).unwrap();

    let mut worst_argmin = 0.0_f64;
    let mut worst_balance = 0.0_f64;
    for i in 0..=25 {
        let omega = oscillator.omega0 * 10f64.powf(-1.0 + 5.0 * i as f64 / 25.0);
        let chi_inv = oscillator.inverse_susceptibility_magnitude(omega);
        let noise = |g: f64| chi_inv * chi_inv / (2.0 * g * g) + 0.5 * HBAR * HBAR * g * g;

        // golden-section search over four decades around the optimum
        let expected = sql_coupling(&oscillator, omega, None).g_sql;
        let (mut lo, mut hi) = (expected / 100.0, expected * 100.0);
        let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..120 {
            let a = hi - inv_phi * (hi - lo);
            let b = lo + inv_phi * (hi - lo);
            if noise(a) < noise(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let numeric = 0.5 * (lo + hi);
        worst_argmin = worst_argmin.max((numeric / expected - 1.0).abs());

        let shot = chi_inv * chi_inv / (2.0 * expected * expected);
        let backaction = 0.5 * HBAR * HBAR * expected * expected;
        worst_balance = worst_balance.max((shot / backaction - 1.0).abs());
    }
    let pass = worst_argmin <= 1e-3 && worst_balance <= 1e-9;
    verdict(
        6,
        "sql-coupling-identity",
        pass,
        &format!(
            "worst argmin offset {worst_argmin:.2e} (limit 1e-3), worst shot/back-action \
             imbalance {worst_balance:.2e} (limit 1e-9) over omega/Omega in [0.1, 1e4]"
        ),
    );
}

struct SpectrumCase {
    name: &'static str,
    sim: SimulationConfig,
    welch: WelchConfig,
    band: (f64, f64),
}

fn spectrum_cases() -> Vec<SpectrumCase> {
    let mut cases = Vec::new();

    // collapse rate a decade above the optimized floor, coupling near SQL
    {
        let mass = 1e-12;
        let oscillator =
            Oscillator::from_quality_factor(mass, TWO_PI * 1e3, 1e4, 1e-3).unwrap();
        let alpha = alpha_exact(&silicon_cube(mass), mass, R_CSL).unwrap().alpha;
        let readout = Readout::new(1.7306e15, TWO_PI * 3e3).unwrap();
        cases.push(SpectrumCase {
            name: "near-sql collapse excess",
            sim: SimulationConfig {
                oscillator,
                readout,
                collapse: CollapseParams::new(1.7e-6, R_CSL).unwrap(),
                alpha,
                dt: 1e-5,
                duration: 10.51,
                settle: 0.2,
                seed: 42,
                channels: ChannelSet::all(),
                drive: None,
                initial_position: 0.0,
                initial_momentum: 0.0,
            },
            welch: WelchConfig {
                segment_length: 4096,
                overlap: 0.5,
                window: Window::Hann,
            },
            band: (TWO_PI * 2000.0, TWO_PI * 4500.0),
        });
    }

    // warm, lossy sensor with under-coupled readout and no collapse noise
    {
        let mass = 5e-13;
        let oscillator =
            Oscillator::from_quality_factor(mass, TWO_PI * 800.0, 50.0, 0.1).unwrap();
        let alpha = alpha_exact(&silicon_cube(mass), mass, R_CSL).unwrap().alpha;
        let g = 0.3 * sql_coupling(&oscillator, TWO_PI * 1200.0, None).g_sql;
        let readout = Readout::new(g, TWO_PI * 1200.0).unwrap();
        cases.push(SpectrumCase {
            name: "thermal-dominated, under-coupled",
            sim: SimulationConfig {
                oscillator,
                readout,
                collapse: CollapseParams::new(0.0, R_CSL).unwrap(),
                alpha,
                dt: 2e-5,
                duration: 6.0,
                settle: 0.1,
                seed: 7,
                channels: ChannelSet::all(),
                drive: None,
                initial_position: 0.0,
                initial_momentum: 0.0,
            },
            welch: WelchConfig {
                segment_length: 8192,
                overlap: 0.5,
                window: Window::Hann,
            },
            band: (TWO_PI * 300.0, TWO_PI * 2000.0),
        });
    }

    // cold slow oscillator where collapse noise dwarfs the thermal bath
    {
        let mass = 2e-12;
        let oscillator =
            Oscillator::from_quality_factor(mass, TWO_PI * 200.0, 500.0, 1e-4).unwrap();
        let alpha = alpha_exact(&silicon_cube(mass), mass, R_CSL).unwrap().alpha;
        let g = sql_coupling(&oscillator, TWO_PI * 2000.0, None).g_sql;
        let readout = Readout::new(g, TWO_PI * 2000.0).unwrap();
        let d_thermal = oscillator.thermal_force_density();
        let lambda = 30.0 * d_thermal / csl_diffusion(1.0, R_CSL, alpha).unwrap();
        cases.push(SpectrumCase {
            name: "collapse-dominated",
            sim: SimulationConfig {
                oscillator,
                readout,
                collapse: CollapseParams::new(lambda, R_CSL).unwrap(),
                alpha,
                dt: 1e-5,
                duration: 10.0,
                settle: 0.2,
                seed: 3,
                channels: ChannelSet::all(),
                drive: None,
                initial_position: 0.0,
                initial_momentum: 0.0,
            },
            welch: WelchConfig {
                segment_length: 4096,
                overlap: 0.5,
                window: Window::Hann,
            },
            band: (TWO_PI * 1000.0, TWO_PI * 4000.0),
        });
    }
    cases
}

// 7. Welch-estimated force spectra from simulated records match the
//    analytic four-term model at the few-percent level.
#[test]
fn acceptance_07_spectrum_inference() {
    let mut details = Vec::new();
    let mut pass = true;
    for case in spectrum_cases() {
        let started = Instant::now();
        let record = simulate(&case.sim).unwrap();
        let estimate = infer_force_spectrum(
            &record,
            &case.sim.readout,
            &case.sim.oscillator,
            &case.welch,
        )
        .unwrap();
        let analytic = analytic_force_psd(
            &case.sim.oscillator,
            &case.sim.readout,
            &case.sim.collapse,
            case.sim.alpha,
            &estimate.omega,
        )
        .unwrap();
        let report = compare_force_spectra(&estimate, &analytic, case.band).unwrap();
        let segments = match estimate.origin {
            collapse_core::sim::SpectrumOrigin::Estimated { segments, .. } => segments,
            _ => unreachable!(),
        };
        let elapsed = started.elapsed();
        let ok = (0.95..=1.05).contains(&report.band_ratio)
            && segments >= 64
            && elapsed.as_secs_f64() < 120.0;
        pass &= ok;
        details.push(format!(
            "{}: ratio {:.4}, {} segments, {:.2} s",
            case.name,
            report.band_ratio,
            segments,
            elapsed.as_secs_f64()
        ));
    }
    verdict(
        7,
        "spectrum-inference",
        pass,
        &format!(
            "band ratio limit [0.95, 1.05], >= 64 segments, < 120 s per set; {}",
            details.join("; ")
        ),
    );
}

// 8. A thermal-only record reproduces the equipartition variance.
#[test]
fn acceptance_08_equipartition() {
    let mass = 1e-12;
    let temperature = 0.01;
    let oscillator =
        Oscillator::from_quality_factor(mass, TWO_PI * 100.0, 10.0, temperature).unwrap();
    let sim = SimulationConfig {
        oscillator,
        readout: Readout::new(1.0, TWO_PI * 100.0).unwrap(),
        collapse: CollapseParams::new(0.0, R_CSL).unwrap(),
        alpha: 0.0,
        dt: 1e-4,
        duration: 600.0,
        settle: 2.0,
        seed: 5,
        channels: ChannelSet {
            thermal: true,
            csl: false,
            backaction: false,
            shot: false,
        },
        drive: None,
        initial_position: 0.0,
        initial_momentum: 0.0,
    };
    let record = simulate(&sim).unwrap();
    let n = record.x.len() as f64;
    let mean = record.x.iter().sum::<f64>() / n;
    let var = record.x.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let expected = K_B * temperature / (mass * oscillator.omega0 * oscillator.omega0);
    let deviation = (var / expected - 1.0).abs();
    let pass = deviation <= 0.02;
    verdict(
        8,
        "equipartition",
        pass,
        &format!(
            "stationary <x^2> off by {:.2}% from k_B T / (m Omega^2) (limit 2%)",
            100.0 * deviation
        ),
    );
}

// 9. The gravitational-noise closed form matches direct quadrature, its
//    blur bound matches a root-finding oracle, and that bound ignores the
//    oscillator mass bit-for-bit.
#[test]
fn acceptance_09_dp_closed_form() {
    let lattice_constant = 5.43e-10;
    let material =
        Material::with_lattice(SILICON_DENSITY, lattice_constant, 3.682369161e-25).unwrap();

    let mut worst_quad = 0.0_f64;
    for (i, &mass) in [1e-15, 1e-9].iter().enumerate() {
        for j in 0..5 {
            let sigma = lattice_constant * (0.02 + 0.18 * (j as f64 + i as f64 / 2.0) / 5.0);
            let closed = dp_diffusion_lattice(&material, mass, sigma).unwrap();
            let quad = dp_diffusion_quadrature(&material, mass, sigma, 1e-9).unwrap();
            worst_quad = worst_quad.max((quad / closed - 1.0).abs());
        }
    }

    let oscillator = Oscillator::from_quality_factor(1e-9, TWO_PI * 10.0, 1e5, 1.0).unwrap();
    let omega = TWO_PI * 250.0;
    let bound = dp_blur_bound(&material, &oscillator, omega).unwrap();

    // bisect the defining balance G hbar rho a^3 / (6 sqrt(pi) sigma^3)
    // = hbar omega^2 + 2 gamma k_B T in log space
    let competing =
        HBAR * omega * omega + 2.0 * oscillator.gamma * K_B * oscillator.temperature;
    let excess = |sigma: f64| {
        G_NEWTON * HBAR * SILICON_DENSITY * lattice_constant.powi(3)
            / (6.0 * std::f64::consts::PI.sqrt() * sigma.powi(3))
            - competing
    };
    let (mut lo, mut hi) = ((1e-12 * lattice_constant).ln(), lattice_constant.ln());
    assert!(excess(lo.exp()) > 0.0 && excess(hi.exp()) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid.exp()) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = (0.5 * (lo + hi)).exp();
    let root_dev = (bound / oracle - 1.0).abs();

    let heavier = Oscillator::new(
        1e3 * oscillator.mass,
        oscillator.omega0,
        oscillator.gamma,
        oscillator.temperature,
    )
    .unwrap();
    let bit_identical = dp_blur_bound(&material, &heavier, omega).unwrap().to_bits()
        == bound.to_bits();

    let pass = worst_quad <= 1e-6 && root_dev <= 1e-9 && bit_identical;
    verdict(
        9,
        "dp-closed-form",
        pass,
        &format!(
            "closed form vs quadrature {worst_quad:.2e} (limit 1e-6), blur bound vs \
             root oracle {root_dev:.2e} (limit 1e-9), mass-independent bits: {bit_identical}"
        ),
    );
}

fn log_slope(masses: &[f64], alphas: &[f64]) -> f64 {
    let n = masses.len() as f64;
    let xs: Vec<f64> = masses.iter().map(|m| m.ln()).collect();
    let ys: Vec<f64> = alphas.iter().map(|a| a.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

// 10. Large-body scaling: alpha grows as m^(2/3) for compact shapes at
//     fixed density and linearly in m for thin discs at fixed thickness.
#[test]
fn acceptance_10_mass_scaling() {
    let masses: Vec<f64> = (0..7).map(|i| 1e-6 * 10f64.powf(i as f64 / 2.0)).collect();

    let cube_alphas: Vec<f64> = masses
        .iter()
        .map(|&m| alpha_asymptotic(&silicon_cube(m), m, R_CSL).unwrap().alpha)
        .collect();
    let sphere_alphas: Vec<f64> = masses
        .iter()
        .map(|&m| {
            let radius = (3.0 * m / (4.0 * std::f64::consts::PI * SILICON_DENSITY)).cbrt();
            alpha_asymptotic(&Geometry::sphere(radius).unwrap(), m, R_CSL)
                .unwrap()
                .alpha
        })
        .collect();

    let thickness = R_CSL / 10.0;
    let disc_masses: Vec<f64> = (0..7).map(|i| 1e-10 * 10f64.powf(i as f64 / 2.0)).collect();
    let disc_alphas: Vec<f64> = disc_masses
        .iter()
        .map(|&m| {
            let radius = (m / (SILICON_DENSITY * std::f64::consts::PI * thickness)).sqrt();
            alpha_asymptotic(&Geometry::disc(radius, thickness).unwrap(), m, R_CSL)
                .unwrap()
                .alpha
        })
        .collect();

    let cube_slope = log_slope(&masses, &cube_alphas);
    let sphere_slope = log_slope(&masses, &sphere_alphas);
    let disc_slope = log_slope(&disc_masses, &disc_alphas);

    let pass = (cube_slope - 2.0 / 3.0).abs() <= 0.01
        && (sphere_slope - 2.0 / 3.0).abs() <= 0.01
        && (disc_slope - 1.0).abs() <= 0.01;
    verdict(
        10,
        "mass-scaling",
        pass,
        &format!(
            "log-slopes: cube {cube_slope:.4}, sphere {sphere_slope:.4} (target 2/3), \
             disc {disc_slope:.4} (target 1), tolerance 0.01"
        ),
    );
}
