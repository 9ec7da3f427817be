//! Small special-function kit used by the geometry factors and their
//! quadrature cross-checks. Everything here is plain f64 with relative
//! accuracy near machine precision on the domains the library actually
//! visits (non-negative arguments spanning ~1e-9 to ~1e9).

/// sin(x)/x, continuous through x = 0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let u = x * x;
        1.0 - u / 6.0 + u * u / 120.0
    } else {
        x.sin() / x
    }
}

/// 2 J1(x)/x, the circular-aperture profile, continuous through x = 0.
pub fn j1c(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let u = x * x;
        1.0 - u / 8.0 + u * u / 192.0
    } else {
        2.0 * libm::j1(x) / x
    }
}

/// 3 (sin x - x cos x)/x^3, the uniform-ball profile, continuous through x = 0.
pub fn sphere_profile(x: f64) -> f64 {
    // sin x - x cos x cancels to x^3/3; the direct form loses ~3 eps/x^2,
    // so the series must carry the evaluation up to x = 0.1
    if x.abs() < 0.1 {
        let u = x * x;
        1.0 - u / 10.0 + u * u / 280.0 - u * u * u / 15_120.0 + u * u * u * u / 1_330_560.0
    } else {
        3.0 * (x.sin() - x * x.cos()) / (x * x * x)
    }
}

/// exp(-x) I0(x) for x >= 0. Stays O(1) for all x, unlike I0 itself.
pub fn i0e(x: f64) -> f64 {
    assert!(x >= 0.0, "i0e defined for x >= 0, got {x}");
    if x <= 50.0 {
        ie_series(0, x)
    } else {
        ie_asymptotic(0, x)
    }
}

/// exp(-x) I1(x) for x >= 0.
pub fn i1e(x: f64) -> f64 {
    assert!(x >= 0.0, "i1e defined for x >= 0, got {x}");
    if x <= 50.0 {
        ie_series(1, x)
    } else {
        ie_asymptotic(1, x)
    }
}

// Power series around zero. All terms are positive, so there is no
// cancellation; the only cost is the final exp(-x) rescale, safe for x <= 50
// where the unscaled sum stays below ~1e21.
fn ie_series(nu: u32, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = if nu == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for k in 1..400 {
        let k = k as f64;
        term *= q / (k * (k + nu as f64));
        sum += term;
        if term < f64::EPSILON * sum {
            break;
        }
    }
    sum * (-x).exp()
}

// Large-argument expansion: exp(-x) I_nu(x) ~ (2 pi x)^(-1/2) sum_k t_k with
// t_0 = 1 and t_k = -t_{k-1} (mu - (2k-1)^2) / (8 k x), mu = 4 nu^2.
// For x > 50 the terms reach machine epsilon before the series turns.
fn ie_asymptotic(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = 1.0f64;
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for k in 1..40 {
        let k = k as f64;
        term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        sum += term;
        if term.abs() < f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}
