//! Explicit nonvanishing certificates on the critical strip.
//!
//! If `R_{k,N,ψ}(·, s, χ)` vanished identically, its `m`-th coefficient
//! would vanish, so `|χ̄(m) m^{s−1}|` would be at most the modulus of the
//! other two terms. After division by `m^{k/2−1}` at `s₀ = k/2 − δ − it₀`
//! this reads `m^{−δ} ≤ summand1 + summand2`; any instance where it fails
//! certifies nonvanishing at `s₀`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{precondition, Error, Result};
use crate::kernel::{kernel_coeff_general, ln_pair_sum_bound, KernelSpec, TruncationConfig};
use crate::ntheory::arith::gcd;
use crate::ntheory::DirichletCharacter;
use crate::special::ln_gamma;

/// Largest weight or level searched by [`min_weight`] and [`min_level`].
pub const SEARCH_LIMIT: i64 = 10_000;
/// Intervals of the default `δ` grid on `[ε, 1/2]`.
pub const DELTA_GRID: usize = 512;

/// Both sides of the inequality at one point `s₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateBreakdown {
    pub k: i64,
    pub level: i64,
    pub h: i64,
    pub m: i64,
    pub delta: f64,
    pub t0: f64,
    /// `|m^{s₀−1}| / m^{k/2−1}`
    pub lhs: f64,
    /// The `δ_{N,1}` term, normalized the same way.
    pub summand1: f64,
    /// Explicit bound for the pair sum, normalized the same way.
    pub summand2_bound: f64,
    /// `lhs > summand1 + summand2_bound`: nonvanishing is certified.
    pub verdict: bool,
}

impl EstimateBreakdown {
    pub fn margin(&self) -> f64 {
        self.lhs - self.summand1 - self.summand2_bound
    }
}

fn check(k: i64, level: i64, h: i64, m: i64, delta: f64) -> Result<()> {
    precondition(k >= 3, format!("weight must be >= 3, got {k}"))?;
    precondition(level >= 1 && h >= 1 && m >= 1, "N, h and m must be positive")?;
    precondition(delta > 0.0 && delta <= 0.5, format!("delta must lie in (0, 1/2], got {delta}"))?;
    precondition(gcd(m, h) == 1, format!("gcd(m, h) = gcd({m}, {h}) != 1"))?;
    precondition(gcd(level, h) == 1, format!("gcd(N, h) = gcd({level}, {h}) != 1"))
}

fn check_strip(k: i64, sigma: f64) -> Result<()> {
    precondition(
        sigma > 1.0 && k as f64 - sigma > 1.0,
        format!("bound inapplicable: sigma = {sigma} needs 1 < sigma < k - 1 = {}", k - 1),
    )
}

/// `|Γ(a − it₀)| / |Γ(b + it₀)|`.
pub fn gamma_ratio(a: f64, b: f64, t0: f64) -> Result<f64> {
    Ok((ln_gamma(Complex64::new(a, -t0))?.re - ln_gamma(Complex64::new(b, t0))?.re).exp())
}

/// Breakdown at `s₀ = k/2 − δ − it₀`.
pub fn estimate_breakdown(k: i64, level: i64, h: i64, m: i64, delta: f64, t0: f64) -> Result<EstimateBreakdown> {
    check(k, level, h, m, delta)?;
    let kf = k as f64;
    let sigma = kf / 2.0 - delta;
    check_strip(k, sigma)?;
    let ln_m = (m as f64).ln();
    let lhs = (-delta * ln_m).exp();
    let summand1 = if level == 1 {
        ((2.0 * delta) * (2.0 * PI / h as f64).ln() + delta * ln_m).exp() * gamma_ratio(kf / 2.0 - delta, kf / 2.0 + delta, t0)?
    } else {
        0.0
    };
    let s0 = Complex64::new(sigma, -t0);
    let summand2_bound = (ln_pair_sum_bound(k, level, h, m, s0, 0)? - (kf / 2.0 - 1.0) * ln_m).exp();
    Ok(EstimateBreakdown {
        k,
        level,
        h,
        m,
        delta,
        t0,
        lhs,
        summand1,
        summand2_bound,
        verdict: lhs > summand1 + summand2_bound,
    })
}

/// Breakdown at `s₀ = k/2 + δ − it₀`. Only for `N ≥ 2`: at level one the
/// right half follows from the functional equation, which is not used here.
pub fn estimate_breakdown_right(k: i64, level: i64, h: i64, m: i64, delta: f64, t0: f64) -> Result<EstimateBreakdown> {
    check(k, level, h, m, delta)?;
    precondition(level >= 2, "uncertified: the right half at N = 1 needs the functional equation")?;
    let kf = k as f64;
    let sigma = kf / 2.0 + delta;
    check_strip(k, sigma)?;
    let ln_m = (m as f64).ln();
    let lhs = (delta * ln_m).exp();
    let s0 = Complex64::new(sigma, -t0);
    let summand2_bound = (ln_pair_sum_bound(k, level, h, m, s0, 0)? - (kf / 2.0 - 1.0) * ln_m).exp();
    Ok(EstimateBreakdown {
        k,
        level,
        h,
        m,
        delta,
        t0,
        lhs,
        summand1: 0.0,
        summand2_bound,
        verdict: lhs > summand2_bound,
    })
}

/// `ε + j (1/2 − ε)/intervals`, `j = 0..=intervals`.
pub fn delta_grid(eps: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals).map(|j| eps + j as f64 * (0.5 - eps) / intervals as f64).collect()
}

/// A certified threshold and the evidence for it.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCertificate {
    /// The weight (or level) found.
    pub value: i64,
    /// Grid point with the smallest margin at `value`.
    pub worst_delta: f64,
    pub worst_margin: f64,
    /// Largest admissible smaller value, with a grid `δ` where the verdict fails.
    pub refuted: Option<(i64, f64)>,
    /// Admissible values below `value` that were skipped because no
    /// character `ψ` of the right parity exists.
    pub skipped: Vec<i64>,
    pub grid_intervals: usize,
}

/// A character mod `N` with `ψ(−1) = (−1)^k` exists unless `k` is odd and `N ≤ 2`.
pub fn parity_admissible(k: i64, level: i64) -> bool {
    k % 2 == 0 || level >= 3
}

/// `Ok(None)` if certified on the whole grid, otherwise the first failing `δ`.
/// Grid points outside the region where the bound applies count as failures.
fn first_failure(grid: &[f64], eval: impl Fn(f64) -> Result<EstimateBreakdown>) -> Result<(Option<f64>, f64, f64)> {
    let (mut worst_delta, mut worst_margin) = (grid[0], f64::INFINITY);
    for &delta in grid {
        match eval(delta) {
            Ok(b) if b.verdict => {
                if b.margin() < worst_margin {
                    worst_margin = b.margin();
                    worst_delta = delta;
                }
            }
            Ok(_) | Err(Error::Precondition(_)) => return Ok((Some(delta), worst_delta, worst_margin)),
            Err(e) => return Err(e),
        }
    }
    Ok((None, worst_delta, worst_margin))
}

fn search(
    candidates: impl Iterator<Item = i64>,
    grid: &[f64],
    admissible: impl Fn(i64) -> bool,
    eval: impl Fn(i64, f64) -> Result<EstimateBreakdown>,
) -> Result<ThresholdCertificate> {
    let mut refuted = None;
    let mut skipped = Vec::new();
    for v in candidates {
        if !admissible(v) {
            skipped.push(v);
            continue;
        }
        let (fail, worst_delta, worst_margin) = first_failure(grid, |d| eval(v, d))?;
        match fail {
            None => {
                return Ok(ThresholdCertificate {
                    value: v,
                    worst_delta,
                    worst_margin,
                    refuted,
                    skipped,
                    grid_intervals: grid.len() - 1,
                })
            }
            Some(d) => refuted = Some((v, d)),
        }
    }
    Err(Error::NotFound(SEARCH_LIMIT as u64))
}

/// Smallest weight `k ≤ 10⁴` at which nonvanishing on `σ ∈ [k/2 − 1/2, k/2 − ε]`,
/// `t = t₀` is certified on the `δ` grid. Weights without a character of
/// matching parity are skipped.
pub fn min_weight(t0: f64, eps: f64, level: i64, m: i64, h: i64) -> Result<ThresholdCertificate> {
    min_weight_on_grid(t0, eps, level, m, h, DELTA_GRID)
}

pub fn min_weight_on_grid(t0: f64, eps: f64, level: i64, m: i64, h: i64, intervals: usize) -> Result<ThresholdCertificate> {
    precondition(eps > 0.0 && eps < 0.5, format!("eps must lie in (0, 1/2), got {eps}"))?;
    check(3, level, h, m, 0.5)?;
    let grid = delta_grid(eps, intervals);
    search(3..=SEARCH_LIMIT, &grid, |k| parity_admissible(k, level), |k, d| estimate_breakdown(k, level, h, m, d, t0))
}

/// Smallest level `N ≤ 10⁴` with `gcd(N, h) = 1` at which nonvanishing is
/// certified for weight `k`. Levels sharing a factor with `h` are outside
/// the hypotheses and are passed over.
pub fn min_level(t0: f64, eps: f64, k: i64, m: i64, h: i64) -> Result<ThresholdCertificate> {
    min_level_on_grid(t0, eps, k, m, h, DELTA_GRID)
}

pub fn min_level_on_grid(t0: f64, eps: f64, k: i64, m: i64, h: i64, intervals: usize) -> Result<ThresholdCertificate> {
    precondition(eps > 0.0 && eps < 0.5, format!("eps must lie in (0, 1/2), got {eps}"))?;
    check(k, 1, h, m, 0.5)?;
    let grid = delta_grid(eps, intervals);
    let mut cert = search(
        (1..=SEARCH_LIMIT).filter(|&n| gcd(n, h) == 1),
        &grid,
        |n| parity_admissible(k, n),
        |n, d| estimate_breakdown(k, n, h, m, d, t0),
    )?;
    cert.skipped.retain(|&n| gcd(n, h) == 1);
    Ok(cert)
}

/// One point of a [`zero_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub sigma: f64,
    pub value: Complex64,
    pub abs: f64,
    pub error: f64,
    /// `|coeff| < threshold + error`: a zero cannot be excluded here.
    pub flagged: bool,
}

/// Evaluates the `m`-th kernel coefficient at `s = σ + it₀` for `σ` from
/// `lo` to `hi` in steps of `step`, flagging points where it may vanish.
#[allow(clippy::too_many_arguments)]
pub fn zero_scan(
    k: i64,
    psi: &DirichletCharacter,
    chi: &DirichletCharacter,
    trunc: &TruncationConfig,
    m: i64,
    t0: f64,
    range: (f64, f64),
    step: f64,
    threshold: f64,
) -> Result<Vec<ScanPoint>> {
    let (lo, hi) = range;
    let kf = k as f64;
    precondition(step > 0.0 && threshold >= 0.0, "step must be positive and threshold nonnegative")?;
    precondition(
        lo <= hi && lo > (kf - 1.0) / 2.0 && hi < (kf + 1.0) / 2.0,
        format!("range [{lo}, {hi}] must lie inside the critical strip ({}, {})", (kf - 1.0) / 2.0, (kf + 1.0) / 2.0),
    )?;
    precondition(lo > 1.0 && hi < kf - 1.0, format!("range [{lo}, {hi}] must lie inside (1, {})", k - 1))?;
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    // rounded so grid points print as written
    let sigmas: Vec<f64> = (0..count).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect();
    sigmas
        .par_iter()
        .map(|&sigma| {
            let spec = KernelSpec::new(k, psi.clone(), chi.clone(), Complex64::new(sigma, t0), *trunc)?;
            let r = kernel_coeff_general(&spec, m)?.coeff;
            let abs = r.value.norm();
            Ok(ScanPoint {
                sigma,
                value: r.value,
                abs,
                error: r.error,
                flagged: abs < threshold + r.error,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_two_has_no_first_summand() {
        let b = estimate_breakdown(12, 2, 3, 1, 0.3, 0.5).unwrap();
        assert_eq!(b.summand1, 0.0);
        assert!(b.lhs > 0.0 && b.summand2_bound > 0.0);
        assert_eq!(b.verdict, b.lhs > b.summand2_bound);
    }

    #[test]
    fn inapplicable_region_is_reported() {
        assert!(matches!(estimate_breakdown(3, 1, 3, 1, 0.5, 0.0), Err(Error::Precondition(_))));
        assert!(estimate_breakdown(8, 1, 3, 3, 0.2, 0.0).is_err());
        assert!(estimate_breakdown_right(8, 1, 3, 1, 0.2, 0.0).is_err());
        assert!(estimate_breakdown_right(8, 2, 3, 1, 0.2, 0.0).is_ok());
    }

    #[test]
    fn gamma_ratio_matches_direct_quotient() {
        use crate::special::gamma;
        for &(k, delta, t0) in &[(6.0, 0.25, 0.0), (10.0, 0.4, 1.5), (20.0, 0.1, -3.0)] {
            let direct = gamma(Complex64::new(k / 2.0 - delta, -t0)).unwrap().norm()
                / gamma(Complex64::new(k / 2.0 + delta, t0)).unwrap().norm();
            let r = gamma_ratio(k / 2.0 - delta, k / 2.0 + delta, t0).unwrap();
            assert!((r / direct - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_endpoints() {
        let g = delta_grid(0.25, 512);
        assert_eq!(g.len(), 513);
        assert_eq!(g[0], 0.25);
        assert!((g[512] - 0.5).abs() < 1e-15);
    }
}
