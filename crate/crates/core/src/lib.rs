//! Fourier coefficients of the kernel function of twisted L-functions of
//! cusp forms, the exponential sums relating it to Jacobi Poincaré series,
//! and explicit nonvanishing bounds in the critical strip.

pub mod analysis;
pub mod error;
pub mod expsums;
pub mod formal;
pub mod jacobi;
pub mod kernel;
pub mod ntheory;
pub mod special;

pub use error::{Error, Result};
