//! Kronecker symbol and discriminant data.

use super::arith::{gcd, is_squarefree, rem};
use crate::error::{precondition, Error, Result};

/// The Kronecker symbol `(d / m)`, defined for all integers.
pub fn kronecker(d: i64, m: i64) -> i8 {
    if m == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut res: i8 = 1;
    let mut m = m as i128;
    if m < 0 {
        m = -m;
        if d < 0 {
            res = -res;
        }
    }
    let tz = (m as u128).trailing_zeros();
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            res = -res;
        }
        m >>= tz;
    }
    // Jacobi symbol (d / m) for odd m > 0.
    let mut n = m as u64;
    let mut a = (d as i128).rem_euclid(m) as u64;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && matches!(n % 8, 3 | 5) {
            res = -res;
        }
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        let t = n % a;
        n = a;
        a = t;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

/// Whether `d` is the discriminant of a quadratic field: `d ≡ 1 (mod 4)`
/// squarefree, or `d = 4m` with `m ≡ 2, 3 (mod 4)` squarefree. Sign-agnostic;
/// `d = 1` is excluded.
pub fn is_fundamental(d: i64) -> bool {
    if d == 1 || d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// A negative fundamental discriminant `d` together with a level `n` and a
/// square root `r` of `d` modulo `4n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscriminantDatum {
    pub d: i64,
    pub level: i64,
    pub r: i64,
}

impl DiscriminantDatum {
    pub fn new(d: i64, level: i64, r: i64) -> Result<Self> {
        Self::check_disc_level(d, level)?;
        precondition(
            rem(r * r - d, 4 * level) == 0,
            format!("r^2 = {} is not congruent to D = {d} mod 4N = {}", r * r, 4 * level),
        )?;
        Ok(Self { d, level, r })
    }

    /// Like [`DiscriminantDatum::new`] but picks the least `r ≥ 0` with
    /// `r² ≡ d (mod 4N)`.
    pub fn with_least_root(d: i64, level: i64) -> Result<Self> {
        Self::check_disc_level(d, level)?;
        let r = least_root(d, level).ok_or_else(|| {
            Error::Precondition(format!(
                "no r with r^2 ≡ {d} (mod {}): D is not a square mod 4N",
                4 * level
            ))
        })?;
        Ok(Self { d, level, r })
    }

    fn check_disc_level(d: i64, level: i64) -> Result<()> {
        precondition(level >= 1, format!("level must be positive, got {level}"))?;
        precondition(d < 0, format!("discriminant must be negative, got {d}"))?;
        precondition(is_fundamental(d), format!("{d} is not a fundamental discriminant"))?;
        precondition(gcd(d, level) == 1, format!("gcd(D, N) = gcd({d}, {level}) != 1"))
    }

    pub fn abs_d(&self) -> i64 {
        -self.d
    }
}

/// Least `r` in `[0, 2N)` with `r² ≡ d (mod 4N)`.
pub fn least_root(d: i64, level: i64) -> Option<i64> {
    (0..2 * level).find(|&r| rem(r * r - d, 4 * level) == 0)
}

/// All `r` in `[0, 2N)` with `r² ≡ d (mod 4N)`.
pub fn roots_mod_2n(d: i64, level: i64) -> Vec<i64> {
    (0..2 * level).filter(|&r| rem(r * r - d, 4 * level) == 0).collect()
}
