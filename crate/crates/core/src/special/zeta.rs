//! Rigorous upper bounds for tails of `Σ n^{-s}`.

const EXPLICIT_TERMS: u64 = 256;

/// Upper bound for `Σ_{n ≥ start} n^{-s}`, `s > 1`, `start ≥ 1`.
///
/// Sums the first 256 terms exactly and bounds the rest by
/// `∫_{M-1/2}^∞ x^{-s} dx`: since `x^{-s}` is convex, each term is at most
/// the integral over the unit interval centered on it.
pub fn zeta_upper(s: f64, start: u64) -> f64 {
    assert!(s > 1.0, "zeta_upper needs s > 1, got {s}");
    assert!(start >= 1, "zeta_upper needs start >= 1");
    let mut sum = 0.0;
    for n in start..start + EXPLICIT_TERMS {
        sum += (n as f64).powf(-s);
    }
    let m = (start + EXPLICIT_TERMS) as f64;
    // round up to keep the bound on the safe side of the last ulp
    (sum + (m - 0.5).powf(1.0 - s) / (s - 1.0)) * (1.0 + 1e-14)
}

/// Cheaper and looser bound for the same tail:
/// `start^{-s} + ∫_{start+1/2}^∞ x^{-s} dx`.
pub fn zeta_tail_bound(s: f64, start: u64) -> f64 {
    assert!(s > 1.0, "zeta_tail_bound needs s > 1, got {s}");
    let a = start.max(1) as f64;
    a.powf(-s) + (a + 0.5).powf(1.0 - s) / (s - 1.0)
}

/// `ln` of [`zeta_upper`], safe for huge `s` or `start`.
pub fn ln_zeta_upper(s: f64, start: u64) -> f64 {
    assert!(s > 1.0, "ln_zeta_upper needs s > 1, got {s}");
    // factor out the first term
    let a = start as f64;
    let mut rel = 0.0;
    for n in start..start + EXPLICIT_TERMS {
        rel += (-s * (n as f64 / a).ln()).exp();
    }
    let m = (start + EXPLICIT_TERMS) as f64;
    rel += ((1.0 - s) * ((m - 0.5) / a).ln()).exp() * a / (s - 1.0);
    -s * a.ln() + rel.ln() + 1e-14
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn basel() {
        let z = zeta_upper(2.0, 1);
        let exact = PI * PI / 6.0;
        assert!(z >= exact && z <= exact + 1e-6, "{z}");
    }

    #[test]
    fn far_tail() {
        assert!(zeta_upper(2.0, 1_000_000) <= 2e-6);
        assert!(zeta_upper(2.0, 1_000_000) >= 1e-6);
    }

    #[test]
    fn cheap_bound_dominates() {
        for &(s, start) in &[(1.5, 1), (2.0, 10), (3.5, 1000), (1.1, 7)] {
            assert!(zeta_tail_bound(s, start) >= zeta_upper(s, start) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn log_version_agrees() {
        for &(s, start) in &[(2.0, 1), (1.5, 7), (30.0, 3), (3.25, 100_000)] {
            let a = zeta_upper(s, start).ln();
            assert!((ln_zeta_upper(s, start) - a).abs() < 1e-12, "s={s} start={start}");
        }
        // no underflow for large exponents
        assert!(ln_zeta_upper(5000.0, 10).is_finite());
    }
}
