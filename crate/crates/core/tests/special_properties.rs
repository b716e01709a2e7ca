use std::f64::consts::PI;

use lkernel::special::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Finite Hankel form of `J_{n+1/2}`:
/// `√(2/πx) [P sin(x − nπ/2) + Q cos(x − nπ/2)]`, with
/// `a_k = (n+k)! / (2^k k! (n−k)!)`.
fn hankel_j(n: u32, x: f64) -> f64 {
    let a = |k: u32| -> f64 {
        let mut v = 1.0;
        for j in (n - k + 1)..=(n + k) {
            v *= j as f64;
        }
        for j in 1..=k {
            v /= 2.0 * j as f64;
        }
        v
    };
    let (mut p, mut q) = (0.0, 0.0);
    for k in 0..=n {
        let t = a(k) / x.powi(k as i32);
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
    }
    let phase = x - n as f64 * PI / 2.0;
    (2.0 / (PI * x)).sqrt() * (p * phase.sin() + q * phase.cos())
}

/// Plain ascending series with no shared code, summed in long form.
fn series_j(nu: f64, x: f64) -> f64 {
    let mut gamma_nu1 = if (nu.fract() - 0.5).abs() < 1e-12 { PI.sqrt() / 2.0 } else { 1.0 };
    let mut g = 1.5;
    while g < nu + 1.0 - 1e-9 {
        gamma_nu1 *= g;
        g += 1.0;
    }
    let mut sum = 0.0;
    let mut term = (x / 2.0).powf(nu) / gamma_nu1;
    for m in 0..200 {
        sum += term;
        let m = m as f64 + 1.0;
        term *= -(x * x / 4.0) / (m * (m + nu));
    }
    sum
}

#[test]
fn bessel_matches_closed_form() {
    for two_nu in (1..=21).step_by(2) {
        let nu = two_nu as f64 / 2.0;
        for i in 1..=500 {
            let x = 0.1 * i as f64;
            let got = bessel_j_half(two_nu, x);
            let want = if x >= nu { hankel_j((two_nu - 1) / 2, x) } else { series_j(nu, x) };
            let scale = want.abs().max(1e-3 * bessel_tail_majorant(two_nu, x).min(1.0));
            assert!(
                (got - want).abs() <= 1e-11 * scale.max(want.abs()),
                "J_{two_nu}/2({x}): {got} vs {want}"
            );
        }
    }
}

#[test]
fn bessel_series_and_recurrence_agree_where_both_are_stable() {
    for two_nu in (3..=21).step_by(2) {
        let nu = two_nu as f64 / 2.0;
        let mut x = nu.max(0.1);
        while x <= nu + 4.0 {
            let s = bessel_j_series(nu, x);
            let r = bessel_j_recurrence(two_nu, x);
            assert!((s - r).abs() < 1e-11 * s.abs().max(1e-2), "ν={nu} x={x}: {s} vs {r}");
            x += 0.25;
        }
    }
}

#[test]
fn bessel_majorant_dominates() {
    for two_nu in (1..=21).step_by(2) {
        for i in 1..=500 {
            let x = 0.1 * i as f64;
            assert!(bessel_tail_majorant(two_nu, x) >= bessel_j_half(two_nu, x).abs());
        }
    }
}

#[test]
fn hypergeometric_bessel_relation() {
    // ₁F₁(k, 2k; 2πiy) = Γ(k+1/2) e(y/2) (πy/2)^{1/2−k} J_{k−1/2}(πy)
    for k in 2..=8u32 {
        let kf = k as f64;
        for i in 1..=40 {
            let y = 0.25 * i as f64;
            let lhs = kummer_1f1(c(kf, 0.0), c(2.0 * kf, 0.0), c(0.0, 2.0 * PI * y)).unwrap();
            let e = Complex64::from_polar(1.0, PI * y);
            let rhs = e
                * gamma(c(kf + 0.5, 0.0)).unwrap().re
                * (PI * y / 2.0).powf(0.5 - kf)
                * bessel_j_half(2 * k - 1, PI * y);
            assert!((lhs - rhs).norm() < 1e-9, "k={k} y={y}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn hypergeometric_bessel_relation_at_large_argument() {
    // the regime of kernel coefficients: |z| in the hundreds
    for &(k, y) in &[(4u32, 40.3), (6, 97.0), (12, 150.5), (3, 211.7)] {
        let kf = k as f64;
        let lhs = kummer_1f1(c(kf, 0.0), c(2.0 * kf, 0.0), c(0.0, 2.0 * PI * y)).unwrap();
        let rhs = Complex64::from_polar(1.0, PI * y)
            * gamma(c(kf + 0.5, 0.0)).unwrap().re
            * (PI * y / 2.0).powf(0.5 - kf)
            * bessel_j_half(2 * k - 1, PI * y);
        // oscillatory quadrature: absolute error at the unit scale of the integrand
        assert!((lhs - rhs).norm() < 1e-9 * rhs.norm() + 1e-14, "k={k} y={y}: {lhs} vs {rhs}");
    }
}

/// `Σ_{m ≥ M+1} f(m) ≈ ∫_M^∞ f − f(M)/2 − f'(M)/12` (Euler–Maclaurin).
fn lipschitz_lhs(tau: Complex64, s: Complex64, cut: i64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for m in -cut..=cut {
        sum += (tau + m as f64).powc(-s);
    }
    let mf = cut as f64;
    let up = tau + mf;
    sum += up.powc(1.0 - s) / (s - 1.0) - up.powc(-s) / 2.0 + s * up.powc(-s - 1.0) / 12.0;
    let down = tau - mf;
    sum += down.powc(1.0 - s) / (1.0 - s) - down.powc(-s) / 2.0 - s * down.powc(-s - 1.0) / 12.0;
    sum
}

#[test]
fn lipschitz_summation() {
    // Σ_m (τ+m)^{-s} = (−2πi)^s/Γ(s) Σ_{r≥1} r^{s−1} e(rτ), τ = i
    let tau = c(0.0, 1.0);
    for s in [c(2.5, 0.0), c(3.5, 0.0), c(4.0, 1.0), c(4.0, -2.0)] {
        let lhs = lipschitz_lhs(tau, s, 2000);
        let pref = Complex64::from_polar(1.0, -PI * s.re / 2.0) * (c(0.0, -PI / 2.0) * c(0.0, s.im)).exp()
            * c(2.0 * PI, 0.0).powc(s)
            / gamma(s).unwrap();
        let mut rsum = Complex64::new(0.0, 0.0);
        for r in 1..200 {
            rsum += c(r as f64, 0.0).powc(s - 1.0) * (-2.0 * PI * r as f64).exp();
        }
        let rhs = pref * rsum;
        assert!((lhs - rhs).norm() < 1e-8, "s={s}: {lhs} vs {rhs}");
    }
}

#[test]
fn gamma_ratio_asymptotic() {
    for &delta in &[0.0, 0.1, 0.25, 0.5] {
        for &t0 in &[-2.0, -0.5, 0.0, 1.0, 2.0] {
            let w = c(delta, t0);
            let mut prev = f64::INFINITY;
            for k in [8.0, 16.0, 32.0, 64.0, 128.0] {
                let h = c(k / 2.0, 0.0);
                let ratio = (ln_gamma(h - w).unwrap() - ln_gamma(h + w).unwrap()).exp()
                    * h.powc(2.0 * w);
                let err = (ratio - 1.0).norm();
                assert!(err <= prev + 1e-15, "δ={delta} t0={t0} k={k}");
                prev = err;
            }
            assert!(prev < 0.05, "δ={delta} t0={t0}: {prev}");
        }
    }
}

proptest! {
    #[test]
    fn one_f1_bound_dominates(
        ar in 1.05f64..6.0, ai in -4.0f64..4.0, gap in 1.05f64..6.0, x in -30.0f64..30.0
    ) {
        let alpha = c(ar, ai);
        let beta = ar + gap;
        let bound = one_f1_bound(alpha, beta, x).unwrap();
        let v = kummer_1f1(alpha, c(beta, 0.0), c(0.0, 2.0 * PI * x)).unwrap();
        prop_assert!(v.norm() <= bound * (1.0 + 1e-10), "{} > {}", v.norm(), bound);
    }

    #[test]
    fn zeta_upper_dominates_partial_sums(s in 1.01f64..8.0, start in 1u64..5000, len in 1usize..20000) {
        let brute: f64 = (start..start + len as u64).map(|n| (n as f64).powf(-s)).sum();
        prop_assert!(zeta_upper(s, start) >= brute);
    }

    #[test]
    fn kummer_transformation_holds(
        ar in 0.5f64..5.0, ai in -3.0f64..3.0, gap in 0.5f64..5.0, zr in -8.0f64..8.0, zi in -60.0f64..60.0
    ) {
        let a = c(ar, ai);
        let b = c(ar + gap, 0.0);
        let z = c(zr, zi);
        let lhs = kummer_1f1(a, b, z).unwrap();
        let rhs = z.exp() * kummer_1f1(b - a, b, -z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(rhs.norm()).max(1e-300));
    }
}
