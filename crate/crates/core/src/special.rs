//! Entire functions of `z = λ²t²` used by every propagator and photon-number
//! formula.
//!
//! `E_n(z) = Σ_k z^k / (2k+n)!`, so that
//!
//! * `E_0(z) = cosh √z`
//! * `E_1(z) = sinh √z / √z`
//! * `E_2(z) = (cosh √z − 1) / z`
//! * `E_3(z) = (sinh √z / √z − 1) / z`
//!
//! For `z < 0` the hyperbolic functions turn into their circular
//! counterparts. Writing everything in terms of the real variable `z` keeps
//! the PT-exact phase (`z < 0`), the broken phase (`z > 0`) and the
//! exceptional point (`z = 0`) on a single code path.

/// Below this `|z|` the power series is summed directly.
pub const SERIES_RADIUS: f64 = 4.0;

const MAX_TERMS: usize = 60;

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn series(n: usize, z: f64) -> f64 {
    let mut term = 1.0 / factorial(n);
    let mut sum = term;
    for k in 1..MAX_TERMS {
        term *= z / (((2 * k + n - 1) * (2 * k + n)) as f64);
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    sum
}

fn series_derivative(n: usize, z: f64) -> f64 {
    // Σ_{k≥1} k z^{k-1} / (2k+n)!
    let mut power_over_fact = 1.0 / factorial(n + 2); // z^0/(n+2)!
    let mut sum = power_over_fact;
    for k in 2..MAX_TERMS {
        power_over_fact *= z / (((2 * k + n - 1) * (2 * k + n)) as f64);
        let term = k as f64 * power_over_fact;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    sum
}

fn cosh_sqrt(z: f64) -> f64 {
    if z >= 0.0 {
        z.sqrt().cosh()
    } else {
        (-z).sqrt().cos()
    }
}

fn sinhc_sqrt(z: f64) -> f64 {
    if z >= 0.0 {
        let x = z.sqrt();
        x.sinh() / x
    } else {
        let x = (-z).sqrt();
        x.sin() / x
    }
}

/// `E_n(z)` for `n ≤ 5`.
pub fn entire(n: usize, z: f64) -> f64 {
    assert!(n <= 5, "E_n only tabulated up to n = 5");
    if z.abs() <= SERIES_RADIUS {
        return series(n, z);
    }
    closed(n, z)
}

fn closed(n: usize, z: f64) -> f64 {
    match n {
        0 => cosh_sqrt(z),
        1 => sinhc_sqrt(z),
        _ => (closed(n - 2, z) - 1.0 / factorial(n - 2)) / z,
    }
}

/// `dE_n/dz`.
pub fn entire_derivative(n: usize, z: f64) -> f64 {
    assert!(n <= 4, "dE_n/dz only tabulated up to n = 4");
    if z.abs() <= SERIES_RADIUS {
        return series_derivative(n, z);
    }
    closed_derivative(n, z)
}

fn closed_derivative(n: usize, z: f64) -> f64 {
    match n {
        0 => 0.5 * closed(1, z),
        _ => (closed(n - 1, z) - n as f64 * closed(n, z)) / (2.0 * z),
    }
}
