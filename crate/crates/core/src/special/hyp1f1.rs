//! Kummer's confluent hypergeometric function `₁F₁(a; b; z)`.
//!
//! Small arguments use the power series. For `Re b > Re a > 0` and arguments
//! where the series would cancel catastrophically (purely imaginary `z` of
//! modulus beyond a few units), the Euler integral
//! `Γ(b)/(Γ(a)Γ(b-a)) ∫₀¹ e^{zt} t^{a-1} (1-t)^{b-a-1} dt`
//! is evaluated with double-exponential (tanh-sinh) quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{ln_beta, ln_gamma};
use crate::error::{Error, Result};

const SERIES_MAX_TERMS: usize = 100_000;
const SERIES_SMALL_RUN: usize = 20;
const SERIES_SMALL_REL: f64 = 1e-17;
/// Relative precision loss tolerated from the series before switching.
const SERIES_MAX_LOSS: f64 = 1e3;
/// Beyond this modulus the integral is used whenever it applies.
const SERIES_DIRECT_LIMIT: f64 = 6.0;
const SERIES_HARD_LIMIT: f64 = 200.0;

fn is_nonpositive_integer(b: Complex64) -> bool {
    b.im.abs() < 1e-12 && b.re <= 0.0 && (b.re - b.re.round()).abs() < 1e-12
}

fn integral_applies(a: Complex64, b: Complex64) -> bool {
    a.re > 0.0 && (b - a).re > 0.0
}

/// `₁F₁(a; b; z)`.
pub fn kummer_1f1(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(b) {
        return Err(Error::Precondition(format!(
            "1F1 lower parameter b = {b} is a non-positive integer"
        )));
    }
    if z == Complex64::new(0.0, 0.0) || a == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if a == b {
        return Ok(z.exp());
    }
    // Kummer's transformation moves the argument into Re z ≥ 0.
    if z.re < 0.0 && !is_nonpositive_integer(a) {
        return Ok(z.exp() * kummer_1f1(b - a, b, -z)?);
    }
    let use_integral = integral_applies(a, b);
    if use_integral && z.norm() > SERIES_DIRECT_LIMIT {
        return hyp1f1_integral(a, b, z);
    }
    if !use_integral && z.norm() > SERIES_HARD_LIMIT {
        return Err(Error::Precondition(format!(
            "|z| = {} exceeds the series regime and the integral needs Re b > Re a > 0",
            z.norm()
        )));
    }
    let (sum, max_term) = hyp1f1_series(a, b, z)?;
    let loss = max_term / sum.norm().max(f64::MIN_POSITIVE);
    if loss > SERIES_MAX_LOSS {
        if use_integral {
            return hyp1f1_integral(a, b, z);
        }
        if loss > 1e6 {
            return Err(Error::Cancellation {
                lost_digits: loss.log10(),
            });
        }
    }
    Ok(sum)
}

/// Power series; returns the sum and the largest term modulus.
pub fn hyp1f1_series(a: Complex64, b: Complex64, z: Complex64) -> Result<(Complex64, f64)> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut max_partial = 1.0f64;
    let mut max_term = 1.0f64;
    let mut small_run = 0;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        sum += term;
        let t = term.norm();
        max_term = max_term.max(t);
        max_partial = max_partial.max(sum.norm());
        if t < SERIES_SMALL_REL * max_partial {
            small_run += 1;
            if small_run >= SERIES_SMALL_RUN {
                return Ok((sum, max_term));
            }
        } else {
            small_run = 0;
        }
        if !t.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence {
        max_terms: SERIES_MAX_TERMS,
    })
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Euler integral by tanh-sinh quadrature. Needs `Re b > Re a > 0`.
///
/// With `t = 1/(1 + e^{-2v})`, `v = (π/2) sinh u`, one has
/// `dt = π cosh(u) t (1-t) du`, so the integrand in `u` is
/// `π cosh(u) · exp(log Γ-prefactor + z t + a ln t + (b-a) ln(1-t))`.
pub fn hyp1f1_integral(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if !integral_applies(a, b) {
        return Err(Error::Precondition(format!(
            "Euler integral for 1F1 needs Re b > Re a > 0 (a = {a}, b = {b})"
        )));
    }
    let c = b - a;
    let ln_pref = ln_gamma(b)? - ln_gamma(a)? - ln_gamma(c)?;
    // Scale of the integral of |integrand|, used for the stopping test.
    let ln_mass = ln_pref.re + ln_beta(a.re, c.re) + z.re.max(0.0);

    let integrand = |u: f64| -> Complex64 {
        let v = 0.5 * PI * u.sinh();
        let ln_t = -softplus(-2.0 * v);
        let ln_1mt = -softplus(2.0 * v);
        let t = ln_t.exp();
        let expo = ln_pref + z * t + a * ln_t + c * ln_1mt - ln_mass;
        if expo.re < -745.0 {
            return Complex64::new(0.0, 0.0);
        }
        expo.exp() * (PI * u.cosh())
    };

    // Integrand decays like exp(-min(Re a, Re c)·π sinh|u|) at the ends.
    let decay = a.re.min(c.re);
    let spread = 60.0 + (ln_pref.re - ln_mass).abs() + z.re.abs();
    let u_max = ((spread / (PI * decay)).asinh()).clamp(3.0, 9.0);

    let mut h = (1.0 / (1.0 + 0.8 * z.norm())).min(0.5);
    let n_half = (u_max / h).ceil() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for j in -n_half..=n_half {
        let f = integrand(j as f64 * h);
        sum += f;
        mass += f.norm();
    }
    let mut estimate = sum * h;
    let mut n_nodes = n_half;
    for _level in 0..12 {
        // add midpoints
        let mut extra = Complex64::new(0.0, 0.0);
        for j in -n_nodes..n_nodes {
            let f = integrand((j as f64 + 0.5) * h);
            extra += f;
            mass += f.norm();
        }
        sum += extra;
        h *= 0.5;
        n_nodes *= 2;
        let refined = sum * h;
        let diff = (refined - estimate).norm();
        estimate = refined;
        let mass_scaled = mass * h;
        if diff <= 4e-15 * mass_scaled + 1e-13 * estimate.norm() {
            return Ok(estimate * ln_mass.exp());
        }
    }
    Err(Error::NoConvergence {
        max_terms: (2 * n_nodes + 1) as usize,
    })
}

/// Upper bound for `|₁F₁(α; β; 2πi x)|`, any real `x`, from the Euler
/// integral: `|Γ(β)/(Γ(α)Γ(β-α))| · B(Re α, β - Re α)`.
/// Needs `Re α > 1` and `β - Re α > 1`.
pub fn one_f1_bound(alpha: Complex64, beta: f64, _x: f64) -> Result<f64> {
    Ok(ln_one_f1_bound(alpha, beta)?.exp())
}

/// Logarithm of [`one_f1_bound`].
pub fn ln_one_f1_bound(alpha: Complex64, beta: f64) -> Result<f64> {
    if !(alpha.re > 1.0 && beta - alpha.re > 1.0) {
        return Err(Error::Precondition(format!(
            "1F1 bound needs Re α > 1 and β - Re α > 1 (α = {alpha}, β = {beta})"
        )));
    }
    let b = Complex64::new(beta, 0.0);
    let lg = ln_gamma(b)?.re - ln_gamma(alpha)?.re - ln_gamma(b - alpha)?.re;
    Ok(lg + ln_beta(alpha.re, beta - alpha.re))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(kummer_1f1(c(1.3, 0.2), c(4.0, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let z = c(1.0, 1.0);
        assert!(rel(kummer_1f1(c(2.0, 0.0), c(2.0, 0.0), z).unwrap(), z.exp()) < 1e-10);
        assert!(kummer_1f1(c(1.0, 0.0), c(-2.0, 0.0), z).is_err());
    }

    // Reference values from a 40-digit evaluation.
    #[test]
    fn reference_values() {
        let cases = [
            (c(1.5, 2.0), 7.0, c(0.0, 3.0), c(0.320_758_578_463_791_4, 0.180_476_078_322_704)),
            (c(3.0, 0.5), 8.0, c(0.0, 40.0), c(-0.001_540_890_615_254_81, -0.000_266_406_527_027_685_93)),
            (c(2.2, 0.0), 6.0, c(0.0, -150.0), c(-0.000_401_120_348_900_183_7, 0.000_112_752_237_412_193_8)),
            (c(4.0, -1.0), 8.0, c(-5.0, 2.0), c(0.032_995_710_300_962_46, 0.135_091_369_101_683_58)),
            (c(1.2, 0.7), 3.5, c(0.0, 12.0), c(0.047_669_810_139_187_51, 0.018_797_389_385_880_98)),
        ];
        for (a, b, z, want) in cases {
            let got = kummer_1f1(a, c(b, 0.0), z).unwrap();
            assert!(rel(got, want) < 1e-10, "1F1({a};{b};{z}) = {got}, want {want}");
        }
    }

    #[test]
    fn kummer_transformation() {
        let (a, b, z) = (c(1.5, 2.0), c(7.0, 0.0), c(0.0, 3.0));
        let lhs = kummer_1f1(a, b, z).unwrap();
        let (rhs, _) = hyp1f1_series(b - a, b, -z).unwrap();
        let rhs = z.exp() * rhs;
        assert!(rel(lhs, rhs) < 1e-9);
    }

    #[test]
    fn series_and_integral_agree_on_overlap() {
        for &(a, b) in &[(c(1.5, 0.0), 4.0), (c(3.2, -1.1), 9.0), (c(0.7, 0.3), 2.5), (c(5.0, 0.0), 10.0)] {
            for k in 0..=12 {
                let z = Complex64::from_polar(0.5 + 0.5 * k as f64, 0.3 + 0.4 * k as f64);
                let (s, loss) = hyp1f1_series(a, c(b, 0.0), z).unwrap();
                let q = hyp1f1_integral(a, c(b, 0.0), z).unwrap();
                let tol = 1e-12 * (1.0 + loss) / s.norm().min(1.0);
                assert!(rel(q, s) < tol.max(1e-11), "a={a} b={b} z={z}: {q} vs {s}");
            }
        }
    }

    #[test]
    fn bound_is_one_for_real_alpha() {
        for &(a, b) in &[(1.5, 4.0), (3.0, 10.0), (2.2, 7.5)] {
            let bound = one_f1_bound(c(a, 0.0), b, 0.3).unwrap();
            assert!((bound - 1.0).abs() < 1e-12);
        }
        let b1 = one_f1_bound(c(3.0, 1.0), 10.0, 0.1).unwrap();
        let b2 = one_f1_bound(c(3.0, 1.0), 10.0, 17.0).unwrap();
        assert_eq!(b1, b2);
        assert!(one_f1_bound(c(0.9, 0.0), 10.0, 1.0).is_err());
        assert!(one_f1_bound(c(3.0, 0.0), 3.5, 1.0).is_err());
    }
}
