//! The exponential sums `K_{N,n}(m, D)`, `S_{N,n}(m, D)` and `H_{N,n}`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::forms::{genus_char, genus_char_first, QuadraticForm};
use crate::error::{precondition, Result};
use crate::formal::{root_of_unity, FormalExpSum};
use crate::ntheory::arith::{divisors, factorize, gcd, mod_inv, rem};
use crate::ntheory::{is_fundamental, kronecker};

/// Exact and numeric value of an exponential sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSumValue {
    pub formal: FormalExpSum,
    pub value: Complex64,
}

/// One solution `(a, c, ℓ)` of `n = (|D|a + ℓc)c` contributing to `K_{N,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KTerm {
    pub c: i64,
    pub l: i64,
    pub a: i64,
    /// `(D / ℓ)`
    pub chi: i8,
    /// `|D| − 2qā mod 2n` with `q = n/c`
    pub b: i64,
}

fn check_level(level: i64, n: i64, d: i64) -> Result<()> {
    precondition(n >= 1, format!("n must be positive, got {n}"))?;
    precondition(level >= 1, format!("level must be positive, got {level}"))?;
    precondition(d < 0 && is_fundamental(d), format!("D = {d} must be a negative fundamental discriminant"))?;
    precondition(gcd(d, level) == 1, format!("gcd(D, N) = gcd({}, {level}) != 1", d))
}

/// All terms of `K_{N,n}(·, D)`, parametrized by divisors `c | n` with `N | c`.
pub fn k_terms(level: i64, n: i64, d: i64) -> Result<Vec<KTerm>> {
    check_level(level, n, d)?;
    Ok(k_terms_unchecked(level, n, d))
}

pub(crate) fn k_terms_unchecked(level: i64, n: i64, d: i64) -> Vec<KTerm> {
    let h = d.abs();
    let mut out = Vec::new();
    for c in divisors(n as u64) {
        let c = c as i64;
        if c % level != 0 {
            continue;
        }
        let q = n / c;
        for l in 0..h {
            if (q - l * c) % h != 0 {
                continue;
            }
            let a = (q - l * c) / h;
            if gcd(a, c) != 1 {
                continue;
            }
            // ℓ with (D/ℓ) = 0 still yield representatives; their terms vanish
            let chi = kronecker(d, l);
            let a_bar = mod_inv(a, c).expect("gcd(a, c) = 1");
            let b = k_residue(h, q, a_bar, n);
            debug_assert_eq!(b, k_residue(h, q, a_bar + c, n), "inverse choice changed b");
            out.push(KTerm { c, l, a, chi, b });
        }
    }
    out
}

/// `|D| − 2qā mod 2n`; independent of the inverse since `2qc = 2n`.
fn k_residue(h: i64, q: i64, a_bar: i64, n: i64) -> i64 {
    (h as i128 - 2 * q as i128 * a_bar as i128).rem_euclid(2 * n as i128) as i64
}

fn sum_terms(n: i64, m: i64, terms: impl Iterator<Item = (i64, i8)>) -> Result<ExpSumValue> {
    let modulus = 2 * n;
    let mut formal = FormalExpSum::zero(modulus as usize)?;
    let mut value = Complex64::new(0.0, 0.0);
    for (b, w) in terms {
        let j = (b as i128 * m as i128).rem_euclid(modulus as i128) as i64;
        formal.add_term(j, w as i64);
        value += root_of_unity(j, modulus as u64) * w as f64;
    }
    Ok(ExpSumValue { formal, value })
}

/// `K_{N,n}(m, D) = Σ (D/ℓ) e_{2n}(m(|D| − 2qā))`.
pub fn k_sum(level: i64, n: i64, m: i64, d: i64) -> Result<ExpSumValue> {
    let terms = k_terms(level, n, d)?;
    sum_terms(n, m, terms.iter().map(|t| (t.b, t.chi)))
}

/// Numeric `K_{N,n}(m, D)` without the exact representation; no modulus cap.
pub fn k_value(level: i64, n: i64, m: i64, d: i64) -> Result<Complex64> {
    check_level(level, n, d)?;
    Ok(k_value_unchecked(level, n, m, d))
}

pub(crate) fn k_value_unchecked(level: i64, n: i64, m: i64, d: i64) -> Complex64 {
    let modulus = 2 * n as i128;
    k_terms_unchecked(level, n, d)
        .iter()
        .filter(|t| t.chi != 0)
        .map(|t| {
            let j = (t.b as i128 * m as i128).rem_euclid(modulus) as i64;
            root_of_unity(j, modulus as u64) * t.chi as f64
        })
        .sum()
}

/// `b mod 2n` for each term of the `K`-parametrization.
pub fn representatives(level: i64, n: i64, d: i64) -> Result<Vec<i64>> {
    Ok(k_terms(level, n, d)?.into_iter().map(|t| t.b).collect())
}

/// One term of `S_{N,n}(m, D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct STerm {
    pub b: i64,
    pub form: QuadraticForm,
    pub genus: i8,
}

/// `b ∈ [0, 2n)` with `b² ≡ D² (mod 4n)` and `b ≡ D (mod 2N)`, with the
/// associated form `[n, b, (b² − D²)/4n]` and its genus character.
pub fn s_terms(level: i64, n: i64, d: i64) -> Result<Vec<STerm>> {
    check_level(level, n, d)?;
    s_terms_unchecked(level, n, d)
}

pub(crate) fn s_terms_unchecked(level: i64, n: i64, d: i64) -> Result<Vec<STerm>> {
    let d2 = d as i128 * d as i128;
    let n4 = 4 * n as i128;
    let mut out = Vec::new();
    for b in 0..2 * n {
        let bb = b as i128 * b as i128;
        if (bb - d2) % n4 != 0 || rem(b - d, 2 * level) != 0 {
            continue;
        }
        let form = QuadraticForm::new(n, b, ((bb - d2) / n4) as i64);
        let genus = genus_char(d, &form)?;
        out.push(STerm { b, form, genus });
    }
    Ok(out)
}

/// Roots of `x² ≡ D² (mod p^e)` in `[0, p^e)`.
fn roots_of_square(d: i64, p: u64, e: u32) -> Vec<i64> {
    let pe = (p as i64).pow(e);
    let target = |x: i64, modulus: i64| (x as i128 * x as i128 - d as i128 * d as i128).rem_euclid(modulus as i128) == 0;
    if p != 2 && d % p as i64 != 0 {
        let r = rem(d, pe);
        return if r == pe - r { vec![r] } else { vec![r.min(pe - r), r.max(pe - r)] };
    }
    // Hensel-style lifting by search; here p divides 2D, so p is small.
    let p = p as i64;
    let mut roots: Vec<i64> = (0..p).filter(|&x| target(x, p)).collect();
    let mut pk = p;
    for _ in 1..e {
        let next = pk * p;
        roots = roots
            .iter()
            .flat_map(|&x| (0..p).map(move |t| x + t * pk))
            .filter(|&x| target(x, next))
            .collect();
        pk = next;
    }
    roots
}

/// `b ∈ [0, 2n)` with `b² ≡ D² (mod 4n)` and `b ≡ D (mod 2N)`, found by
/// solving the congruence prime by prime and recombining with the CRT.
pub fn s_residues(level: i64, n: i64, d: i64) -> Result<Vec<i64>> {
    check_level(level, n, d)?;
    Ok(s_residues_factored(level, n, d, &factorize(4 * n as u64)))
}

pub(crate) fn s_residues_factored(level: i64, n: i64, d: i64, fac_4n: &[(u64, u32)]) -> Vec<i64> {
    let mut acc: Vec<i64> = vec![0];
    let mut modulus: i128 = 1;
    for &(p, e) in fac_4n {
        let pe = (p as i128).pow(e);
        let roots = roots_of_square(d, p, e);
        let inv = mod_inv((modulus % pe) as i64, pe as i64).expect("coprime moduli") as i128;
        acc = acc
            .iter()
            .flat_map(|&x| {
                roots.iter().map(move |&r| {
                    let t = ((r as i128 - x as i128) * inv).rem_euclid(pe);
                    (x as i128 + modulus * t) as i64
                })
            })
            .collect();
        modulus *= pe;
    }
    let two_n = 2 * n;
    let mut out: Vec<i64> = acc
        .into_iter()
        .map(|x| x % two_n)
        .filter(|&b| rem(b - d, 2 * level) == 0)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Numeric `S_{N,n}(m, D)` from [`s_residues`]; for long series.
pub(crate) fn s_value_factored(level: i64, n: i64, m: i64, d: i64, fac_4n: &[(u64, u32)]) -> Complex64 {
    let d2 = d as i128 * d as i128;
    let modulus = 2 * n as i128;
    s_residues_factored(level, n, d, fac_4n)
        .into_iter()
        .map(|b| {
            let bb = b as i128;
            let form = QuadraticForm::new(n, b, ((bb * bb - d2) / (4 * n as i128)) as i64);
            let g = genus_char_first(d, &form);
            root_of_unity((bb * m as i128).rem_euclid(modulus) as i64, modulus as u64) * g as f64
        })
        .sum()
}

/// `S_{N,n}(m, D) = Σ_b χ_D([n, b, (b²−D²)/4n]) e_{2n}(bm)`.
pub fn s_sum(level: i64, n: i64, m: i64, d: i64) -> Result<ExpSumValue> {
    let terms = s_terms(level, n, d)?;
    sum_terms(n, m, terms.iter().map(|t| (t.b, t.genus)))
}

/// `A(m) + (−1)^{k+1} A(−m)`.
pub fn plus_minus_combine(a_pos: Complex64, a_neg: Complex64, k: i64) -> Complex64 {
    if k.rem_euclid(2) == 1 {
        a_pos + a_neg
    } else {
        a_pos - a_neg
    }
}

fn check_h(level: i64, n: i64, d: i64, r: i64, dp: i64, rp: i64) -> Result<(i64, i64)> {
    precondition(n >= 1, format!("n must be positive, got {n}"))?;
    precondition(level >= 1, format!("level must be positive, got {level}"))?;
    let m4 = 4 * level as i128;
    let (r2, rp2) = (r as i128 * r as i128 - d as i128, rp as i128 * rp as i128 - dp as i128);
    precondition(r2 % m4 == 0, format!("r^2 != D mod 4N (r = {r}, D = {d}, N = {level})"))?;
    precondition(rp2 % m4 == 0, format!("r'^2 != D' mod 4N (r' = {rp}, D' = {dp}, N = {level})"))?;
    Ok(((r2 / m4 % n as i128) as i64, (rp2 / m4 % n as i128) as i64))
}

fn unit_phase(j: i128, modulus: i128) -> Complex64 {
    root_of_unity(j.rem_euclid(modulus) as i64, modulus as u64)
}

/// `H_{N,n}(D, r, D', r')` by the defining double sum over `ρ (n)*`, `λ (n)`.
pub fn h_sum(level: i64, n: i64, d: i64, r: i64, dp: i64, rp: i64) -> Result<Complex64> {
    let (b0, c0) = check_h(level, n, d, r, dp, rp)?;
    let nn = n as i128;
    let mut total = Complex64::new(0.0, 0.0);
    for rho in 0..n {
        let Some(rho_bar) = mod_inv(rho, n).filter(|_| gcd(rho, n) == 1) else {
            continue;
        };
        for lam in 0..n {
            let l = lam as i128;
            let quad = (level as i128 * l * l + r as i128 * l + b0 as i128) % nn;
            let j = quad * rho_bar as i128 + c0 as i128 * rho as i128 + rp as i128 * l;
            total += unit_phase(j % nn, nn);
        }
    }
    Ok(finish_h(total, level, n, r, rp))
}

fn finish_h(total: Complex64, level: i64, n: i64, r: i64, rp: i64) -> Complex64 {
    let tail = unit_phase(r as i128 * rp as i128, 2 * level as i128 * n as i128);
    total * tail * (n as f64).powf(-1.5)
}

/// Same as [`h_sum`] in `O(n log n)`: with `W(u) = Σ_{λ: A(λ) ≡ u} e_n(r'λ)`,
/// `A(λ) = Nλ² + rλ + (r² − D)/4N`, the double sum is
/// `Σ_{j (n)*} e_n(C j̄) Σ_u W(u) e_n(uj)`, an inverse DFT of `W`.
pub fn h_sum_fast(level: i64, n: i64, d: i64, r: i64, dp: i64, rp: i64) -> Result<Complex64> {
    h_fast_with(&mut FftPlanner::new(), level, n, d, r, dp, rp)
}

/// [`h_sum_fast`] reusing FFT plans across calls.
pub(crate) fn h_fast_with(
    planner: &mut FftPlanner<f64>,
    level: i64,
    n: i64,
    d: i64,
    r: i64,
    dp: i64,
    rp: i64,
) -> Result<Complex64> {
    let (b0, c0) = check_h(level, n, d, r, dp, rp)?;
    let nn = n as i128;
    let mut w = vec![Complex64::new(0.0, 0.0); n as usize];
    for lam in 0..n {
        let l = lam as i128;
        let u = (level as i128 * l * l + r as i128 * l + b0 as i128).rem_euclid(nn) as usize;
        w[u] += unit_phase(rp as i128 * l, nn);
    }
    planner.plan_fft_inverse(n as usize).process(&mut w);
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        if gcd(j, n) != 1 {
            continue;
        }
        let j_bar = mod_inv(j, n).expect("unit");
        total += unit_phase(c0 as i128 * j_bar as i128, nn) * w[j as usize];
    }
    Ok(finish_h(total, level, n, r, rp))
}

/// Chooses the direct loop for small `n` and the FFT path otherwise.
pub fn h_value(level: i64, n: i64, d: i64, r: i64, dp: i64, rp: i64) -> Result<Complex64> {
    if n <= 48 {
        h_sum(level, n, d, r, dp, rp)
    } else {
        h_sum_fast(level, n, d, r, dp, rp)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: f64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn k_examples() {
        assert!(close(k_sum(1, 1, 1, -3).unwrap().value, -1.0));
        assert!(close(k_sum(1, 1, 2, -3).unwrap().value, 1.0));
        // no divisor c of 1 is divisible by 2: empty sum
        for m in 0..4 {
            let v = k_sum(2, 1, m, -7).unwrap();
            assert!(v.formal.is_formally_zero());
        }
        for m in -5..5 {
            let v = k_sum(2, 2, m, -7).unwrap();
            assert_eq!(v.formal.eval(), v.value);
        }
    }

    #[test]
    fn s_examples() {
        assert!(close(s_sum(1, 1, 1, -3).unwrap().value, -1.0));
        assert!(close(s_sum(1, 1, 2, -3).unwrap().value, 1.0));
        let t = s_terms(1, 1, -3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].form, QuadraticForm::new(1, 1, -2));
        assert_eq!(t[0].genus, 1);
    }

    #[test]
    fn crt_residues_match_scan() {
        for &(level, d) in &[(1, -3), (1, -4), (2, -7), (3, -8), (1, -20), (5, -3), (1, -15)] {
            for j in 1..=120 {
                let n = level * j;
                let scan: Vec<i64> = s_terms(level, n, d).unwrap().iter().map(|t| t.b).collect();
                assert_eq!(s_residues(level, n, d).unwrap(), scan, "N={level} n={n} D={d}");
                for m in [1, 2, 5] {
                    let fast = s_value_factored(level, n, m, d, &factorize(4 * n as u64));
                    assert!((fast - s_sum(level, n, m, d).unwrap().value).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn representatives_example() {
        assert_eq!(representatives(1, 1, -3).unwrap(), vec![1]);
    }

    #[test]
    fn h_examples() {
        assert!(close(h_sum(1, 1, -3, 1, -3, 1).unwrap(), -1.0));
        assert!(close(h_sum(1, 1, -3, 1, -12, 2).unwrap(), 1.0));
        // n = 1 collapses to e_{2N}(rr')
        let v = h_sum(3, 1, -11, 1, -11 * 4, 2).unwrap();
        assert!((v - root_of_unity(2, 6)).norm() < 1e-12);
        assert!(h_sum(1, 1, -3, 0, -3, 1).is_err());
    }

    #[test]
    fn plus_minus() {
        let (a, b) = (Complex64::new(1.0, 2.0), Complex64::new(0.5, -1.0));
        assert_eq!(plus_minus_combine(a, b, 3), a + b);
        assert_eq!(plus_minus_combine(a, b, 2), a - b);
    }
}
