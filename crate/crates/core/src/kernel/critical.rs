//! The coefficient at the critical point `s = k` for weight `2k`, trivial
//! nebentypus and `χ = (D/·)`: a Bessel series over `K±_{N,n}(m, D)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{for_each_solution, sum_blocks, CoeffResult, TruncationConfig};
use crate::error::{precondition, Result};
use crate::formal::root_of_unity;
use crate::ntheory::arith::gcd;
use crate::ntheory::{is_fundamental, kronecker};
use crate::special::{bessel_j_half, ln_gamma_real, zeta_upper};

/// `i^e`.
pub(crate) fn i_pow(e: i64) -> Complex64 {
    match e.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `(−1)^{k+1}`.
pub(crate) fn pm_sign(k: i64) -> f64 {
    if k % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn check_critical(k2: i64, level: i64, m: i64, d: i64) -> Result<()> {
    precondition(k2 >= 4 && k2 % 2 == 0, format!("weight 2k must be even and >= 4, got {k2}"))?;
    precondition(level >= 1 && m >= 1, "level and m must be positive")?;
    precondition(d < 0 && is_fundamental(d), format!("D = {d} must be a negative fundamental discriminant"))?;
    precondition(gcd(d, level) == 1, format!("gcd(D, N) = gcd({d}, {level}) != 1"))
}

/// Rigorous bound for the terms `j > j0` of the Bessel series shared by the
/// critical kernel coefficient and the closed form of the lift. Uses
/// `|K±| ≤ 2h·d(j)`, `d(j) ≤ 2√j` and `|J_ν(x)| ≤ (x/2)^ν/Γ(ν+1)`.
pub(crate) fn critical_tail_bound(k: i64, level: i64, m: i64, h: i64, j0: u64) -> f64 {
    let nu = k as f64 - 0.5;
    let ln_c = (PI * 2f64.sqrt()).ln() + nu * (m as f64).ln() - 0.5 * (level as f64).ln()
        + (4.0 * h as f64).ln()
        + nu * (PI * m as f64 * h as f64 / (2.0 * level as f64)).ln()
        - ln_gamma_real(nu + 1.0);
    ln_c.exp() * zeta_upper(nu, j0 + 1)
}

/// `m`-th coefficient of `R_{2k,N}(τ, k, (D/·))`:
/// `(1 ± δ_{N,1})(D/m) m^{k−1} + i^{k+1} π√2 m^{k−1/2} Σ_{N|n} n^{−1/2} K±_{N,n}(m, D) J_{k−1/2}(π m|D|/n)`,
/// with `± = (−1)^{k+1}`.
pub fn kernel_coeff_critical(k2: i64, level: i64, m: i64, d: i64, trunc: &TruncationConfig) -> Result<CoeffResult> {
    check_critical(k2, level, m, d)?;
    let k = k2 / 2;
    let h = -d;
    let sign = pm_sign(k);
    let delta = if level == 1 { 1.0 } else { 0.0 };
    let leading = Complex64::new((1.0 + sign * delta) * kronecker(d, m) as f64 * (m as f64).powi(k as i32 - 1), 0.0);
    let pref = i_pow(k + 1) * (PI * 2f64.sqrt() * (m as f64).powf(k as f64 - 0.5));
    let two_nu = (2 * k - 1) as u32;

    let boundary = k == 2;
    let out = sum_blocks(trunc, boundary, |lo, hi| {
        let mut kv = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        let mut count = vec![0u32; (hi - lo + 1) as usize];
        for_each_solution(level, h, lo, hi, |j, _c, q, l, _a, a_bar| {
            let chi = kronecker(d, l);
            if chi == 0 {
                return;
            }
            let n = level as i128 * j as i128;
            let b = (h as i128 - 2 * q as i128 * a_bar as i128).rem_euclid(2 * n);
            let phase = (b * m as i128).rem_euclid(2 * n);
            kv[(j - lo) as usize] += root_of_unity(phase as i64, 2 * n as u64) * chi as f64;
            count[(j - lo) as usize] += 1;
        });
        let (mut block, mut mass) = (Complex64::new(0.0, 0.0), 0.0);
        for (i, kval) in kv.iter().enumerate() {
            if count[i] == 0 {
                continue;
            }
            let n = (level as u64 * (lo + i as u64)) as f64;
            let k_pm = kval + kval.conj() * sign;
            let jn = bessel_j_half(two_nu, PI * m as f64 * h as f64 / n) / n.sqrt();
            block += k_pm * jn;
            mass += 2.0 * count[i] as f64 * jn.abs();
        }
        Ok((pref * block, pref.norm() * mass))
    })?;
    let tail = critical_tail_bound(k, level, m, h, out.j_max);
    Ok(CoeffResult::assemble(leading, out, Some(tail), boundary))
}
