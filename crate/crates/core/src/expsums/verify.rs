//! Dual-path checks: `S = K` term by term, and the `S`–`H` divisor-sum lemma.

use num_complex::Complex64;

use super::sums::{h_value, k_sum, k_terms, s_sum, s_terms, s_terms_unchecked, KTerm};
use crate::error::{precondition, Result};
use crate::formal::root_of_unity;
use crate::ntheory::arith::{divisors, gcd};
use crate::ntheory::{is_fundamental, kronecker};

/// A `K`-term and the genus character of the `S`-term with the same `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermMatch {
    pub k_term: KTerm,
    /// `None` if no `S`-term has this `b`.
    pub s_genus: Option<i8>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SEqualsKReport {
    pub level: i64,
    pub n: i64,
    pub m: i64,
    pub d: i64,
    pub k_value: Complex64,
    pub s_value: Complex64,
    /// Equality in `Z[ζ_{2n}]`.
    pub exact_equal: bool,
    pub numeric_diff: f64,
    pub correspondence: Vec<TermMatch>,
    /// `b` of `S`-terms hit by no `K`-term.
    pub unmatched_s: Vec<i64>,
    /// The `K`-terms are a bijection onto the `S`-terms with matching signs.
    pub termwise: bool,
}

/// Compares `S_{N,n}(m, D)` and `K_{N,n}(m, D)` exactly, numerically and
/// term by term.
pub fn verify_s_equals_k(level: i64, n: i64, m: i64, d: i64) -> Result<SEqualsKReport> {
    let k = k_sum(level, n, m, d)?;
    let s = s_sum(level, n, m, d)?;
    let kt = k_terms(level, n, d)?;
    let st = s_terms(level, n, d)?;

    let mut hit = vec![0usize; st.len()];
    let correspondence: Vec<TermMatch> = kt
        .iter()
        .map(|t| {
            let pos = st.iter().position(|s| s.b == t.b);
            if let Some(p) = pos {
                hit[p] += 1;
            }
            let s_genus = pos.map(|p| st[p].genus);
            TermMatch {
                k_term: *t,
                s_genus,
                agrees: s_genus == Some(t.chi),
            }
        })
        .collect();
    let unmatched_s: Vec<i64> = st
        .iter()
        .zip(&hit)
        .filter(|(_, &h)| h == 0)
        .map(|(s, _)| s.b)
        .collect();
    let termwise = correspondence.iter().all(|c| c.agrees) && hit.iter().all(|&h| h <= 1) && unmatched_s.is_empty();

    Ok(SEqualsKReport {
        level,
        n,
        m,
        d,
        k_value: k.value,
        s_value: s.value,
        exact_equal: k.formal.equal_exact(&s.formal)?,
        numeric_diff: (k.value - s.value).norm(),
        correspondence,
        unmatched_s,
        termwise,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GkzReport {
    pub level: i64,
    pub nj: i64,
    pub m: i64,
    pub r: i64,
    pub d: i64,
    /// `S_{N,N·nJ}(m, D)`
    pub lhs: Complex64,
    /// `Σ_{d | (m, nJ)} (D/d) (nJ/d)^{1/2} H_{N,nJ/d}(D, r, m²D/d², mr/d)`
    pub rhs: Complex64,
    pub abs_diff: f64,
    /// `D` fundamental and coprime to `N`; the identity is only claimed then.
    pub applicable: bool,
}

/// Evaluates both sides of the identity between `S` and a divisor sum of
/// `H`-sums, for `D = r² − 4N·nJ < 0`.
pub fn verify_gkz_lemma(level: i64, nj: i64, m: i64, r: i64) -> Result<GkzReport> {
    precondition(level >= 1 && nj >= 0 && m >= 1, "need N >= 1, nJ >= 0, m >= 1")?;
    let d = r * r - 4 * level * nj;
    precondition(d < 0, format!("D = r^2 - 4N nJ = {d} must be negative"))?;

    let n = level * nj;
    let lhs: Complex64 = s_terms_unchecked(level, n, d)?
        .iter()
        .map(|t| root_of_unity(t.b * m % (2 * n), 2 * n as u64) * t.genus as f64)
        .sum();

    let mut rhs = Complex64::new(0.0, 0.0);
    for dv in divisors(gcd(m, nj) as u64) {
        let dv = dv as i64;
        let chi = kronecker(d, dv);
        if chi == 0 {
            continue;
        }
        let q = m / dv;
        let h = h_value(level, nj / dv, d, r, q * q * d, q * r)?;
        rhs += h * (chi as f64 * ((nj / dv) as f64).sqrt());
    }
    Ok(GkzReport {
        level,
        nj,
        m,
        r,
        d,
        lhs,
        rhs,
        abs_diff: (lhs - rhs).norm(),
        applicable: is_fundamental(d) && gcd(d, level) == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let rep = verify_s_equals_k(1, 1, 1, -3).unwrap();
        assert!(rep.exact_equal && rep.termwise);
        assert!((rep.k_value + 1.0).norm() < 1e-12);

        assert!(verify_s_equals_k(2, 2, 1, -7).unwrap().exact_equal);
    }

    #[test]
    fn gkz_small_cases() {
        let rep = verify_gkz_lemma(1, 1, 1, 1).unwrap();
        assert_eq!(rep.d, -3);
        assert!((rep.lhs + 1.0).norm() < 1e-12 && (rep.rhs + 1.0).norm() < 1e-12);
        let rep = verify_gkz_lemma(1, 1, 2, 1).unwrap();
        assert!((rep.lhs - 1.0).norm() < 1e-12 && (rep.rhs - 1.0).norm() < 1e-12);
        assert!(verify_gkz_lemma(1, 1, 1, 2).is_err());
    }
}
