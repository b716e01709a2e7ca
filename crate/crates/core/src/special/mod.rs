//! Complex special functions in double precision.

mod bessel;
mod gamma;
mod hyp1f1;
mod zeta;

pub use bessel::{bessel_j_half, bessel_j_recurrence, bessel_j_series, bessel_tail_majorant};
pub use gamma::{beta, gamma, ln_beta, ln_gamma, ln_gamma_real};
pub use hyp1f1::{hyp1f1_integral, hyp1f1_series, kummer_1f1, ln_one_f1_bound, one_f1_bound};
pub use zeta::{ln_zeta_upper, zeta_tail_bound, zeta_upper};
