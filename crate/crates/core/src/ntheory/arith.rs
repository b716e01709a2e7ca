//! Integer helpers shared by the rest of the crate.

use crate::error::{Error, Result};

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd_u64(a, b))
        .checked_mul(b)
        .ok_or(Error::Overflow("lcm"))
}

/// Least nonnegative residue of `a` modulo `m` (m > 0).
#[inline]
pub fn rem(a: i64, m: i64) -> i64 {
    debug_assert!(m > 0);
    a.rem_euclid(m)
}

/// `a * b mod m` without overflow.
#[inline]
pub fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

pub fn pow_mod(base: i64, mut exp: u64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1i64;
    let mut b = rem(base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, in `[0, m)`. Returns `None` when gcd(a, m) > 1.
/// Modulo 1 every integer is invertible and the inverse is 0.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    assert!(m > 0, "modulus must be positive");
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (rem(a, m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as i64)
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Positive divisors in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Exact integer square root test.
pub fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i64;
    (r.saturating_sub(1)..=r + 1).any(|x| x >= 0 && x.checked_mul(x) == Some(n))
}

/// Factorizations of every integer in `[lo, hi]` (with `lo ≥ 1`) by a
/// segmented sieve; entry `i` belongs to `lo + i`.
pub fn factorize_range(lo: u64, hi: u64) -> Vec<Vec<(u64, u32)>> {
    assert!(lo >= 1 && lo <= hi);
    let len = (hi - lo + 1) as usize;
    let mut rest: Vec<u64> = (lo..=hi).collect();
    let mut out = vec![Vec::new(); len];
    let limit = (hi as f64).sqrt() as u64 + 1;
    let mut composite = vec![false; limit as usize + 1];
    for p in 2..=limit {
        if composite[p as usize] {
            continue;
        }
        let mut q = p * p;
        while q <= limit {
            composite[q as usize] = true;
            q += p;
        }
        let mut x = lo.div_ceil(p) * p;
        while x <= hi {
            let i = (x - lo) as usize;
            let mut e = 0;
            while rest[i].is_multiple_of(p) {
                rest[i] /= p;
                e += 1;
            }
            out[i].push((p, e));
            x += p;
        }
    }
    for (f, r) in out.iter_mut().zip(rest) {
        if r > 1 {
            f.push((r, 1));
        }
    }
    out
}

/// Factorization of `a·b` from those of `a` and `b`.
pub fn merge_factorizations(a: &[(u64, u32)], b: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = a.to_vec();
    for &(p, e) in b {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some(slot) => slot.1 += e,
            None => out.push((p, e)),
        }
    }
    out.sort_unstable();
    out
}

pub fn checked_mul(a: i64, b: i64, ctx: &'static str) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow(ctx))
}
