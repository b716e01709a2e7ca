//! Coefficients of the Jacobi Poincaré series `P^J_{k+1,N,(D,r)}` and of its
//! image under the `(D, r)`-th Shimura lift, computed two ways.
//!
//! Throughout, `k` is the Jacobi-side parameter: Jacobi weight `k + 1`,
//! elliptic weight `2k`, Bessel order `k − 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{precondition, Result};
use crate::expsums::{h_fast_with, h_sum, s_value_factored};
use crate::kernel::{critical_tail_bound, i_pow, pm_sign, sum_blocks, CoeffResult, TruncationConfig};
use crate::ntheory::arith::{divisors, factorize, factorize_range, gcd, merge_factorizations, rem};
use crate::ntheory::{kronecker, DiscriminantDatum};
use crate::special::{bessel_j_half, ln_gamma_real, zeta_upper};

/// Direct double sum below this size, FFT above.
const H_DIRECT_MAX: i64 = 48;

/// A coefficient index `(D', r')` of a Jacobi form of index `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiIndexPair {
    pub dp: i64,
    pub rp: i64,
    pub level: i64,
}

impl JacobiIndexPair {
    pub fn new(dp: i64, rp: i64, level: i64) -> Result<Self> {
        precondition(level >= 1, format!("level must be positive, got {level}"))?;
        precondition(dp < 0, format!("D' must be negative, got {dp}"))?;
        precondition(
            rem(rp * rp - dp, 4 * level) == 0,
            format!("r'^2 = {} is not congruent to D' = {dp} mod 4N = {}", rp * rp, 4 * level),
        )?;
        Ok(Self { dp, rp, level })
    }

    pub fn negated(&self) -> Self {
        Self { rp: -self.rp, ..*self }
    }
}

fn check_base(k: i64, level: i64, base: &DiscriminantDatum) -> Result<()> {
    precondition(k >= 2, format!("k must be >= 2, got {k}"))?;
    precondition(base.level == level, format!("datum level {} differs from N = {level}", base.level))?;
    precondition(base.d < 0, format!("D = {} must be negative", base.d))?;
    DiscriminantDatum::new(base.d, base.level, base.r).map(|_| ())
}

/// `δ_N(D, r, D', r')`.
pub fn delta_n(base: &DiscriminantDatum, target: &JacobiIndexPair) -> f64 {
    if target.dp == base.d && rem(target.rp - base.r, 2 * base.level) == 0 {
        1.0
    } else {
        0.0
    }
}

struct HEvaluator {
    planner: FftPlanner<f64>,
}

impl HEvaluator {
    fn new() -> Self {
        Self { planner: FftPlanner::new() }
    }

    fn eval(&mut self, n: i64, base: &DiscriminantDatum, target: &JacobiIndexPair) -> Result<Complex64> {
        let (level, d, r) = (base.level, base.d, base.r);
        if n <= H_DIRECT_MAX {
            h_sum(level, n, d, r, target.dp, target.rp)
        } else {
            h_fast_with(&mut self.planner, level, n, d, r, target.dp, target.rp)
        }
    }
}

/// `i^{k+1} π√2 N^{−1/2} (D'/D)^{k/2−1/4}`.
fn g_prefactor(k: i64, level: i64, d: i64, dp: i64) -> Complex64 {
    let ratio = dp as f64 / d as f64;
    let mag = PI * 2f64.sqrt() / (level as f64).sqrt() * ((k as f64 / 2.0 - 0.25) * ratio.ln()).exp();
    i_pow(k + 1) * mag
}

/// Bound for `Σ_{n > n0} |H_{N,n}| |J_{k−1/2}(x/n)|` with `x = π√(D'D)/N`,
/// from `|H_{N,n}| ≤ n^{1/2}` and `|J_ν(y)| ≤ (y/2)^ν/Γ(ν+1)`. Finite for `k ≥ 3`.
fn g_tail(k: i64, level: i64, d: i64, dp: i64, n0: u64) -> Option<f64> {
    if k < 3 {
        return None;
    }
    let nu = k as f64 - 0.5;
    let x = PI * ((d as f64) * (dp as f64)).sqrt() / level as f64;
    let ln_c = nu * (x / 2.0).ln() - ln_gamma_real(nu + 1.0);
    Some(ln_c.exp() * zeta_upper(k as f64 - 1.0, n0 + 1))
}

/// The Bessel–Kloosterman series of `g` over `targets`, combined with
/// `signs`: `Σ_n Σ_t sign_t H_{N,n}(D, r, t) J_{k−1/2}(π√(D'D)/(Nn))`.
fn g_series(
    k: i64,
    base: &DiscriminantDatum,
    targets: &[(JacobiIndexPair, f64)],
    trunc: &TruncationConfig,
) -> Result<(crate::kernel::SeriesOutcome, Option<f64>)> {
    let level = base.level;
    let dp = targets[0].0.dp;
    let two_nu = (2 * k - 1) as u32;
    let x = PI * ((base.d as f64) * (dp as f64)).sqrt() / level as f64;
    let mut hs = HEvaluator::new();
    let out = sum_blocks(trunc, k == 2, |lo, hi| {
        let (mut block, mut mass) = (Complex64::new(0.0, 0.0), 0.0);
        for n in lo..=hi {
            let jn = bessel_j_half(two_nu, x / n as f64);
            for (t, sign) in targets {
                let h = hs.eval(n as i64, base, t)?;
                block += h * (sign * jn);
                mass += h.norm() * jn.abs();
            }
        }
        Ok((block, mass))
    })?;
    let tail = g_tail(k, level, base.d, dp, out.j_max).map(|t| t * targets.len() as f64);
    Ok((out, tail))
}

fn scaled(mut r: CoeffResult, factor: Complex64) -> CoeffResult {
    let f = factor.norm();
    r.value *= factor;
    r.series *= factor;
    r.leading *= factor;
    r.error *= f;
    r.last_block *= f;
    r.tail_bound = r.tail_bound.map(|t| t * f);
    r
}

fn g_combination(
    k: i64,
    level: i64,
    base: &DiscriminantDatum,
    targets: &[(JacobiIndexPair, f64)],
    trunc: &TruncationConfig,
) -> Result<CoeffResult> {
    check_base(k, level, base)?;
    for (t, _) in targets {
        precondition(t.level == level, format!("target level {} differs from N = {level}", t.level))?;
    }
    let delta: f64 = targets.iter().map(|(t, sign)| sign * delta_n(base, t)).sum();
    let pref = g_prefactor(k, level, base.d, targets[0].0.dp);
    let (out, tail) = g_series(k, base, targets, trunc)?;
    let series = scaled(CoeffResult::assemble(Complex64::new(0.0, 0.0), out, tail, k == 2), pref);
    let mut r = series;
    r.leading = Complex64::new(delta, 0.0);
    r.value += r.leading;
    Ok(r)
}

/// `g_{k+1,N,(D,r)}(D', r') = δ_N + i^{k+1}π√2 N^{−1/2}(D'/D)^{k/2−1/4} Σ_n H_{N,n} J_{k−1/2}(π√(D'D)/(Nn))`.
pub fn g_coeff(
    k: i64,
    level: i64,
    base: &DiscriminantDatum,
    target: &JacobiIndexPair,
    trunc: &TruncationConfig,
) -> Result<CoeffResult> {
    g_combination(k, level, base, &[(*target, 1.0)], trunc)
}

/// `g^±(D', r') = g(D', r') ± g(D', −r')` with `± = (−1)^{k+1}`, summed termwise.
pub fn g_pm_coeff(
    k: i64,
    level: i64,
    base: &DiscriminantDatum,
    target: &JacobiIndexPair,
    trunc: &TruncationConfig,
) -> Result<CoeffResult> {
    g_combination(k, level, base, &[(*target, 1.0), (target.negated(), pm_sign(k))], trunc)
}

/// Targets `(m²D/d², m r/d)` of the lift, one per `d | m`.
fn lift_targets(base: &DiscriminantDatum, m: i64) -> Result<Vec<(i64, JacobiIndexPair)>> {
    divisors(m as u64)
        .into_iter()
        .map(|d| {
            let d = d as i64;
            let q = m / d;
            JacobiIndexPair::new(q * q * base.d, q * base.r, base.level).map(|t| (d, t))
        })
        .collect()
}

/// `m`-th coefficient of `S_{D,r}(P^J_{k+1,N,(D,r)})` as
/// `Σ_{d|m} (D/d) d^{k−1} g^±(m²D/d², m r/d)`.
///
/// The `d`-th series is indexed by `n'`; its Bessel argument is
/// `π m|D|/(N d n')`, so all of them are summed together over `j = d n'`.
pub fn lift_coeff_via_g(
    k: i64,
    level: i64,
    base: &DiscriminantDatum,
    m: i64,
    trunc: &TruncationConfig,
) -> Result<CoeffResult> {
    check_base(k, level, base)?;
    precondition(m >= 1, format!("m must be positive, got {m}"))?;
    let sign = pm_sign(k);
    let targets = lift_targets(base, m)?;
    let mut leading = Complex64::new(0.0, 0.0);
    // (d, weight·prefactor, target)
    let mut parts = Vec::new();
    for (d, t) in &targets {
        let w = kronecker(base.d, *d) as f64 * (*d as f64).powi(k as i32 - 1);
        if w == 0.0 {
            continue;
        }
        leading += w * (delta_n(base, t) + sign * delta_n(base, &t.negated()));
        parts.push((*d as u64, g_prefactor(k, level, base.d, t.dp) * w, *t));
    }
    let two_nu = (2 * k - 1) as u32;
    let x = PI * m as f64 * (-base.d) as f64 / level as f64;
    let mut hs = HEvaluator::new();
    let out = sum_blocks(trunc, k == 2, |lo, hi| {
        let (mut block, mut mass) = (Complex64::new(0.0, 0.0), 0.0);
        for j in lo..=hi {
            let jn = bessel_j_half(two_nu, x / j as f64);
            for (d, pref, t) in &parts {
                if j % d != 0 {
                    continue;
                }
                let n = (j / d) as i64;
                let h_pm = hs.eval(n, base, t)? + sign * hs.eval(n, base, &t.negated())?;
                block += pref * h_pm * jn;
                mass += pref.norm() * h_pm.norm() * jn.abs();
            }
        }
        Ok((block, mass))
    })?;
    let j0 = out.j_max;
    let tail = parts
        .iter()
        .map(|(d, pref, t)| g_tail(k, level, base.d, t.dp, j0 / d).map(|b| 2.0 * pref.norm() * b))
        .sum::<Option<f64>>();
    Ok(CoeffResult::assemble(leading, out, tail, k == 2))
}

/// `m`-th coefficient of `S_{D,r}(P^J_{k+1,N,(D,r)})` in closed form:
/// `(1 ± δ_{N,1})(D/m) m^{k−1} + i^{k+1}π√2 m^{k−1/2} Σ_{N|n} n^{−1/2} S±_{N,n}(m, D) J_{k−1/2}(π m|D|/n)`.
pub fn lift_coeff_closed(
    k: i64,
    level: i64,
    base: &DiscriminantDatum,
    m: i64,
    trunc: &TruncationConfig,
) -> Result<CoeffResult> {
    check_base(k, level, base)?;
    precondition(m >= 1, format!("m must be positive, got {m}"))?;
    precondition(gcd(base.d, level) == 1, format!("gcd(D, N) = gcd({}, {level}) != 1", base.d))?;
    let d = base.d;
    let h = -d;
    let sign = pm_sign(k);
    let delta = if level == 1 { 1.0 } else { 0.0 };
    let leading = Complex64::new((1.0 + sign * delta) * kronecker(d, m) as f64 * (m as f64).powi(k as i32 - 1), 0.0);
    let pref = i_pow(k + 1) * (PI * 2f64.sqrt() * (m as f64).powf(k as f64 - 0.5));
    let two_nu = (2 * k - 1) as u32;
    let fac_4n_base = factorize(4 * level as u64);
    let out = sum_blocks(trunc, k == 2, |lo, hi| {
        let facs = factorize_range(lo, hi);
        let (mut block, mut mass) = (Complex64::new(0.0, 0.0), 0.0);
        for (i, fac_j) in facs.iter().enumerate() {
            let n = level * (lo + i as u64) as i64;
            let fac = merge_factorizations(&fac_4n_base, fac_j);
            let s = s_value_factored(level, n, m, d, &fac);
            let s_pm = s + s.conj() * sign;
            let jn = bessel_j_half(two_nu, PI * m as f64 * h as f64 / n as f64) / (n as f64).sqrt();
            block += s_pm * jn;
            mass += 2.0 * s.norm() * jn.abs();
        }
        Ok((pref * block, pref.norm() * mass.max(f64::MIN_POSITIVE)))
    })?;
    let tail = critical_tail_bound(k, level, m, h, out.j_max);
    Ok(CoeffResult::assemble(leading, out, Some(tail), k == 2))
}

/// The averaged Waldspurger constant and the two Petersson prefactors it
/// comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaldspurgerConstant {
    /// `(k−1)! |D|^{k−1/2} / (2^{2k−1} π^k N^{k−1})`
    pub constant: f64,
    /// `Γ(2k−1)/(4π)^{2k−1}`, elliptic weight `2k`.
    pub elliptic_prefactor: f64,
    /// `N^{k−1} Γ(k−1/2) / (2 π^{k−1/2} |D|^{k−1/2})`, Jacobi weight `k+1`.
    pub jacobi_prefactor: f64,
    /// `elliptic_prefactor / jacobi_prefactor`, equal to `constant` by the
    /// duplication formula.
    pub quotient: f64,
}

pub fn waldspurger_constant(k: i64, level: i64, d: i64) -> Result<WaldspurgerConstant> {
    precondition(k >= 2, format!("k must be >= 2, got {k}"))?;
    precondition(level >= 1 && d < 0, "need N >= 1 and D < 0")?;
    let (kf, nf, hf) = (k as f64, level as f64, (-d) as f64);
    let ln_const = ln_gamma_real(kf) + (kf - 0.5) * hf.ln()
        - (2.0 * kf - 1.0) * 2f64.ln()
        - kf * PI.ln()
        - (kf - 1.0) * nf.ln();
    let ln_ell = ln_gamma_real(2.0 * kf - 1.0) - (2.0 * kf - 1.0) * (4.0 * PI).ln();
    let ln_jac = (kf - 1.0) * nf.ln() + ln_gamma_real(kf - 0.5) - 2f64.ln() - (kf - 0.5) * PI.ln() - (kf - 0.5) * hf.ln();
    let quotient = (ln_ell - ln_jac).exp();
    let constant = ln_const.exp();
    debug_assert!((quotient / constant - 1.0).abs() < 1e-11);
    Ok(WaldspurgerConstant {
        constant,
        elliptic_prefactor: ln_ell.exp(),
        jacobi_prefactor: ln_jac.exp(),
        quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::kernel_coeff_critical;

    fn trunc(rel_tol: f64, n_cap: u64) -> TruncationConfig {
        TruncationConfig { rel_tol, n_cap, ..Default::default() }
    }

    #[test]
    fn delta_cases() {
        let base = DiscriminantDatum::new(-7, 2, 1).unwrap();
        let same = JacobiIndexPair::new(-7, 1, 2).unwrap();
        let shifted = JacobiIndexPair::new(-7, 5, 2).unwrap();
        assert_eq!(delta_n(&base, &same), 1.0);
        assert_eq!(delta_n(&base, &shifted), 1.0);
        assert_eq!(delta_n(&base, &same.negated()), 0.0);
        let r = g_coeff(3, 2, &base, &same, &trunc(1e-10, 0)).unwrap();
        assert_eq!(r.value, Complex64::new(1.0, 0.0));
        let r = g_coeff(3, 2, &base, &same.negated(), &trunc(1e-10, 0)).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(JacobiIndexPair::new(-7, 2, 2).is_err());
        assert!(JacobiIndexPair::new(5, 1, 1).is_err());
    }

    #[test]
    fn via_g_for_m_one_is_g_pm() {
        let base = DiscriminantDatum::new(-3, 1, 1).unwrap();
        let t = trunc(1e-9, 1 << 12);
        let a = lift_coeff_via_g(4, 1, &base, 1, &t).unwrap();
        let b = g_pm_coeff(4, 1, &base, &JacobiIndexPair::new(-3, 1, 1).unwrap(), &t).unwrap();
        assert!((a.value - b.value).norm() < 1e-12 * (1.0 + a.value.norm()));
    }

    #[test]
    fn closed_form_matches_kernel() {
        let base = DiscriminantDatum::new(-3, 1, 1).unwrap();
        let t = trunc(1e-6, 1 << 16);
        let lift = lift_coeff_closed(3, 1, &base, 1, &t).unwrap();
        let kern = kernel_coeff_critical(6, 1, 1, -3, &t).unwrap();
        assert!((lift.value - kern.value).norm() < 1e-8 + lift.last_block + kern.last_block);
    }

    #[test]
    fn constant_examples() {
        let c = waldspurger_constant(2, 1, -3).unwrap();
        let want = 3f64.powf(1.5) / (8.0 * PI * PI);
        assert!((c.constant / want - 1.0).abs() < 1e-12);
        assert!((c.quotient / want - 1.0).abs() < 1e-12);
        for k in 2..=10 {
            let a = waldspurger_constant(k, 3, -7).unwrap();
            let b = waldspurger_constant(k, 6, -7).unwrap();
            assert!((b.constant / a.constant - 2f64.powi(1 - k as i32)).abs() < 1e-12);
            assert!((a.quotient / a.constant - 1.0).abs() < 1e-12);
        }
    }
}
