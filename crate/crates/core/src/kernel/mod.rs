//! Fourier coefficients of the kernel function `R_{k,N,ψ}(τ, s, χ)`.
//!
//! The infinite sum over pairs `(a, c)` is ordered by `n = (ha + ℓc)c`, which
//! is always a multiple of `N`; series are summed over `j = n / N` in growing
//! blocks until the last block is negligible.

mod critical;
mod general;
mod series;

use num_complex::Complex64;

use crate::error::{precondition, Result};

pub use critical::kernel_coeff_critical;
pub use general::{kernel_coeff_general, GeneralCoeff, KernelSpec};
pub(crate) use critical::{critical_tail_bound, i_pow, pm_sign};
pub(crate) use general::ln_pair_sum_bound;
pub(crate) use series::{for_each_solution, sum_blocks, SeriesOutcome};

/// Block summation control. All counts refer to the series index `j`, the
/// `j`-th term belonging to `n = N·j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    /// Size of the first block.
    pub n_start: u64,
    /// Ratio between successive block ends.
    pub growth: f64,
    /// Stop once `|last block| ≤ rel_tol · max(|partial sum|, largest earlier block)`.
    pub rel_tol: f64,
    /// Hard cap on `j`; 0 keeps only the closed-form leading terms.
    pub n_cap: u64,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            n_start: 64,
            growth: 2.0,
            rel_tol: 1e-10,
            n_cap: 1 << 20,
        }
    }
}

impl TruncationConfig {
    pub fn validate(&self) -> Result<()> {
        precondition(self.n_start >= 1, "n_start must be positive")?;
        precondition(self.growth > 1.0, format!("growth must exceed 1, got {}", self.growth))?;
        precondition(
            self.rel_tol > 0.0 && self.rel_tol < 1.0,
            format!("rel_tol must lie in (0, 1), got {}", self.rel_tol),
        )
    }
}

/// A truncated coefficient with its error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffResult {
    pub value: Complex64,
    /// `|last block| + tail bound` (just `|last block|` when no tail bound).
    pub error: f64,
    /// Closed-form terms outside the series.
    pub leading: Complex64,
    pub series: Complex64,
    pub last_block: f64,
    /// Bound on the omitted series terms, when one is available.
    pub tail_bound: Option<f64>,
    /// Largest series index summed.
    pub terms: u64,
    pub stabilized: bool,
    /// The error estimate is an upper bound for the truncation error.
    pub rigorous: bool,
    /// Slowly convergent regime: hitting `n_cap` is reported, not an error.
    pub boundary: bool,
}

impl CoeffResult {
    pub(crate) fn assemble(leading: Complex64, out: SeriesOutcome, tail: Option<f64>, boundary: bool) -> Self {
        Self {
            value: leading + out.sum,
            error: out.last_block + tail.unwrap_or(0.0),
            leading,
            series: out.sum,
            last_block: out.last_block,
            tail_bound: tail,
            terms: out.j_max,
            stabilized: out.stabilized,
            rigorous: tail.is_some(),
            boundary,
        }
    }
}
