//! Bessel functions of half-integral order `J_{n+1/2}` on the positive axis.

use std::f64::consts::PI;

use super::gamma::ln_gamma_real;

fn check_order(two_nu: u32) {
    assert!(two_nu % 2 == 1, "order 2ν = {two_nu} must be odd");
}

/// `J_ν(x)` with `ν = two_nu / 2` half-integral, `x > 0`.
///
/// Power series below `x = ν`, upward recurrence from `J_{1/2}`, `J_{3/2}`
/// above it.
pub fn bessel_j_half(two_nu: u32, x: f64) -> f64 {
    check_order(two_nu);
    assert!(x > 0.0, "bessel_j_half needs x > 0, got {x}");
    let nu = 0.5 * two_nu as f64;
    if x < nu {
        bessel_j_series(nu, x)
    } else {
        bessel_j_recurrence(two_nu, x)
    }
}

/// Ascending series `Σ (-1)^m (x/2)^{2m+ν} / (m! Γ(m+ν+1))`.
pub fn bessel_j_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let lead = (nu * half.ln() - ln_gamma_real(nu + 1.0)).exp();
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..500 {
        let m = m as f64;
        term *= q / (m * (m + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Upward three-term recurrence `J_{ν+1} = (2ν/x) J_ν − J_{ν−1}`.
pub fn bessel_j_recurrence(two_nu: u32, x: f64) -> f64 {
    check_order(two_nu);
    let pref = (2.0 / (PI * x)).sqrt();
    let (s, c) = x.sin_cos();
    let mut prev = pref * s;
    if two_nu == 1 {
        return prev;
    }
    let mut cur = pref * (s / x - c);
    let mut nu = 1.5;
    let target = 0.5 * two_nu as f64;
    while nu < target {
        let next = 2.0 * nu / x * cur - prev;
        prev = cur;
        cur = next;
        nu += 1.0;
    }
    cur
}

/// `(x/2)^ν / Γ(ν+1)`, which dominates `|J_ν(x)|` for real `ν ≥ -1/2`.
pub fn bessel_tail_majorant(two_nu: u32, x: f64) -> f64 {
    check_order(two_nu);
    let nu = 0.5 * two_nu as f64;
    (nu * (0.5 * x).ln() - ln_gamma_real(nu + 1.0)).exp()
}
