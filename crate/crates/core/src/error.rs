use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("argument {re}+{im}i is within 1e-12 of a pole")]
    Pole { re: f64, im: f64 },

    #[error("series did not converge within {max_terms} terms")]
    NoConvergence { max_terms: usize },

    #[error("power series loses too much precision ({lost_digits:.1} digits) and no stable method applies")]
    Cancellation { lost_digits: f64 },

    #[error("modulus {0} exceeds the exact-arithmetic cap")]
    ModulusTooLarge(usize),

    #[error("genus character is not well defined on form [{a}, {b}, {c}]: represented values give both signs")]
    GenusInconsistent { a: i64, b: i64, c: i64 },

    #[error("series not stabilized before n_cap = {n_cap} (last block {last_block:e}, partial {partial:e})")]
    NotStabilized {
        n_cap: u64,
        last_block: f64,
        partial: f64,
    },

    #[error("no admissible value found up to {0}")]
    NotFound(u64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<S: Into<String>>(ok: bool, msg: S) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(msg.into()))
    }
}
