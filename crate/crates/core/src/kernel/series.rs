use num_complex::Complex64;

use super::TruncationConfig;
use crate::error::{Error, Result};
use crate::ntheory::arith::{gcd, mod_inv};

const NOISE: f64 = 1e3 * f64::EPSILON;

pub(crate) struct SeriesOutcome {
    pub sum: Complex64,
    pub last_block: f64,
    pub j_max: u64,
    pub stabilized: bool,
}

/// Sums `block(lo, hi)` over `[1, n_start]` and then geometrically growing
/// blocks. Without stabilization before `n_cap` this is an error unless
/// `boundary` is set.
///
/// `block` returns the block sum and the sum of the moduli of its terms.
/// The relative test is against `max(|partial|, largest block)`, so series
/// that sum to (nearly) zero still terminate; a block that is rounding noise
/// relative to its own terms also counts as negligible.
pub(crate) fn sum_blocks<F>(trunc: &TruncationConfig, boundary: bool, mut block: F) -> Result<SeriesOutcome>
where
    F: FnMut(u64, u64) -> Result<(Complex64, f64)>,
{
    trunc.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    if trunc.n_cap == 0 {
        return Ok(SeriesOutcome {
            sum: zero,
            last_block: 0.0,
            j_max: 0,
            stabilized: false,
        });
    }
    let (mut lo, mut hi) = (1, trunc.n_start.min(trunc.n_cap));
    let mut sum = zero;
    let mut count = 0;
    let mut peak: f64 = 0.0;
    loop {
        let (b, mass) = block(lo, hi)?;
        sum += b;
        count += 1;
        let last = b.norm();
        let negligible = last <= trunc.rel_tol * sum.norm().max(peak) || last <= NOISE * mass;
        if count >= 2 && negligible {
            return Ok(SeriesOutcome {
                sum,
                last_block: last,
                j_max: hi,
                stabilized: true,
            });
        }
        peak = peak.max(last);
        if hi >= trunc.n_cap {
            if boundary {
                return Ok(SeriesOutcome {
                    sum,
                    last_block: last,
                    j_max: hi,
                    stabilized: false,
                });
            }
            return Err(Error::NotStabilized {
                n_cap: trunc.n_cap,
                last_block: last,
                partial: sum.norm(),
            });
        }
        lo = hi + 1;
        hi = ((hi as f64 * trunc.growth).ceil() as u64).max(lo).min(trunc.n_cap);
    }
}

/// Calls `f(j, c, q, ℓ, a, ā)` for every solution of `(ha + ℓc)c = N·j` with
/// `c > 0`, `N | c`, `ℓ ∈ [0, h)`, `gcd(a, c) = 1` and `j ∈ [lo, hi]`; here
/// `q = ha + ℓc` and `ā` is the least nonnegative inverse of `a` mod `c`.
/// Order: ascending `c`, then `q`, then `ℓ`, so each `j` sees its terms in
/// ascending `c`.
pub(crate) fn for_each_solution<F>(level: i64, h: i64, lo: u64, hi: u64, mut f: F)
where
    F: FnMut(u64, i64, i64, i64, i64, i64),
{
    for cp in 1..=hi {
        let c = level * cp as i64;
        let (t_lo, t_hi) = (lo.div_ceil(cp), hi / cp);
        if t_lo > t_hi {
            continue;
        }
        let c_inv_h = if gcd(c, h) == 1 { mod_inv(c, h) } else { None };
        for t in t_lo..=t_hi {
            let q = t as i64;
            let mut visit = |l: i64| {
                let num = q - l * c;
                if num % h != 0 {
                    return;
                }
                let a = num / h;
                if gcd(a, c) != 1 {
                    return;
                }
                let a_bar = mod_inv(a, c).expect("gcd(a, c) = 1");
                f(cp * t, c, q, l, a, a_bar);
            };
            match c_inv_h {
                Some(ci) => visit((q as i128 * ci as i128).rem_euclid(h as i128) as i64),
                None => (0..h).for_each(&mut visit),
            }
        }
    }
}
