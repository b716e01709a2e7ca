use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

// Godfrey's coefficients for g = 607/128, n = 15.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_C: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn check_pole(z: Complex64) -> Result<()> {
    if z.re <= 0.5 && z.im.abs() < 1e-12 && (z.re - z.re.round()).abs() < 1e-12 && z.re.round() <= 0.0 {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(())
}

/// Lanczos series for `Re z ≥ 1/2`.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let w = z - 1.0;
    let t = w + LANCZOS_G + 0.5;
    let mut a = Complex64::new(LANCZOS_C[0], 0.0);
    for (k, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        a += c / (w + k as f64);
    }
    (w + 0.5) * t.ln() - t + LN_SQRT_2PI + a.ln()
}

/// A logarithm of `Γ(z)`: the real part is `ln|Γ(z)|`; the imaginary part is
/// an argument of `Γ(z)`, not necessarily the principal branch of `log Γ`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        let s = (z * PI).sin();
        Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - z))
    }
}

/// Complex Gamma function.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let g = if z.re >= 0.5 {
        ln_gamma_right(z).exp()
    } else {
        PI / ((z * PI).sin() * ln_gamma_right(1.0 - z).exp())
    };
    if !(g.re.is_finite() && g.im.is_finite()) {
        return Err(Error::Overflow("gamma"));
    }
    Ok(g)
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma_real needs x > 0, got {x}");
    ln_gamma_right(Complex64::new(x, 0.0)).re
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma_real(a) + ln_gamma_real(b) - ln_gamma_real(a + b)
}

pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
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

    // Reference values from a 40-digit evaluation.
    #[test]
    fn reference_values() {
        let cases = [
            (c(0.5, 0.0), c(1.772_453_850_905_516, 0.0)),
            (c(2.0, 0.25), c(0.974_547_323_033_855_3, 0.104_421_354_347_045_17)),
            (c(7.3, -4.1), c(-91.356_505_323_842_31, -384.427_862_417_805_2)),
            (c(30.0, 45.0), c(1.905_823_218_538_307e19, 3.901_691_030_288_735_5e18)),
            (c(0.6, 49.0), c(-1.223_463_512_447_497_6e-33, -6.452_962_089_341_807e-34)),
            (c(-2.5, 0.3), c(-0.613_822_997_437_741_5, -0.211_232_614_937_041_8)),
            (c(50.0, 10.0), c(4.054_747_221_071_086e61, 2.193_188_854_372_447e62)),
        ];
        for (z, want) in cases {
            let got = gamma(z).unwrap();
            assert!(rel(got, want) < 1e-12, "Γ({z}) = {got}, want {want}, rel {}", rel(got, want));
        }
        assert!((gamma(c(5.0, 0.0)).unwrap() - 24.0).norm() < 1e-12);
    }

    #[test]
    fn large_argument_log() {
        let l = ln_gamma(c(5000.0, 3.0)).unwrap();
        assert!((l.re - 37_582.625_415_595_4).abs() < 1e-8);
        let l = ln_gamma(c(120.0, -2.0)).unwrap();
        assert!((l.re - 453.008_160_715_702_5).abs() < 1e-10);
        // the imaginary part is an argument: compare modulo 2π
        let d = (l.im - (-9.566_731_937_805_037)).rem_euclid(2.0 * PI);
        assert!(d < 1e-9 || 2.0 * PI - d < 1e-9);
    }

    #[test]
    fn poles_are_rejected() {
        assert!(gamma(c(0.0, 0.0)).is_err());
        assert!(gamma(c(-3.0, 1e-14)).is_err());
        assert!(gamma(c(-3.0, 1e-6)).is_ok());
    }

    #[test]
    fn conjugation_and_recurrence() {
        for i in 0..40 {
            for j in -20..=20 {
                let z = c(0.5 + i as f64 * 1.2, j as f64 * 2.4);
                let g = gamma(z).unwrap();
                assert!(rel(gamma(z.conj()).unwrap(), g.conj()) < 1e-12);
                let g1 = gamma(z + 1.0).unwrap();
                assert!(rel(g1, z * g) < 1e-11, "z={z}");
            }
        }
    }

    #[test]
    fn duplication_formula() {
        // Γ(k)Γ(k + 1/2) = 2^{1-2k} √π Γ(2k)
        for k in 1..=20 {
            let k = k as f64;
            let lhs = gamma(c(k, 0.0)).unwrap() * gamma(c(k + 0.5, 0.0)).unwrap();
            let rhs = gamma(c(2.0 * k, 0.0)).unwrap() * 2f64.powf(1.0 - 2.0 * k) * PI.sqrt();
            assert!(rel(lhs, rhs) < 1e-11, "k={k}");
        }
    }

    #[test]
    fn beta_matches_gamma_quotient() {
        assert!((beta(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-15);
        assert!((beta(0.5, 0.5) - PI).abs() < 1e-13);
    }
}
