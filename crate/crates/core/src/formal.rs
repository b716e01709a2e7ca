//! Exact integer combinations of roots of unity.
//!
//! A [`FormalExpSum`] with modulus `M` is an element of the group ring
//! `Z[Z/M]`: `coeffs[j]` is the multiplicity of `e(j/M) = exp(2πi j/M)`.
//! Two sums are equal as complex numbers iff their difference lies in the
//! kernel of `Z[Z/M] → Z[ζ_M]`, which is spanned by the full `p`-cycles
//! `Σ_t e_M(j + t·M/p)` for primes `p | M`. [`FormalExpSum::reduce`] cancels
//! those cycles to reach a canonical representative.

use std::f64::consts::TAU;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ntheory::arith::{factorize, lcm_u64};

/// Largest modulus handled exactly.
pub const MAX_MODULUS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalExpSum {
    modulus: usize,
    coeffs: Vec<i64>,
}

/// `e(j/M)` with `j` reduced first, so the angle stays in `[0, 2π)`.
pub fn root_of_unity(j: i64, modulus: u64) -> Complex64 {
    let j = j.rem_euclid(modulus as i64) as f64;
    let (s, c) = (TAU * j / modulus as f64).sin_cos();
    Complex64::new(c, s)
}

impl FormalExpSum {
    pub fn zero(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        if modulus > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(modulus));
        }
        Ok(Self {
            modulus,
            coeffs: vec![0; modulus],
        })
    }

    /// `c · e_M(j)`.
    pub fn exp_term(modulus: usize, j: i64, c: i64) -> Result<Self> {
        let mut s = Self::zero(modulus)?;
        s.add_term(j, c);
        s.coeffs_check();
        Ok(s)
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Result<Self> {
        let mut s = Self::zero(coeffs.len())?;
        s.coeffs = coeffs;
        Ok(s)
    }

    #[inline]
    pub fn add_term(&mut self, j: i64, c: i64) {
        let idx = j.rem_euclid(self.modulus as i64) as usize;
        self.coeffs[idx] += c;
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn coeffs_check(&self) {
        debug_assert_eq!(self.coeffs.len(), self.modulus);
    }

    pub fn is_formally_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Multiply by `e_M(shift)`.
    pub fn rotate(&self, shift: i64) -> Self {
        let m = self.modulus as i64;
        let mut out = vec![0; self.modulus];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[(j as i64 + shift).rem_euclid(m) as usize] = c;
        }
        Self {
            modulus: self.modulus,
            coeffs: out,
        }
    }

    /// Complex conjugate: `e_M(j) ↦ e_M(-j)`.
    pub fn conj(&self) -> Self {
        let m = self.modulus;
        let mut out = vec![0; m];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[(m - j) % m] = c;
        }
        Self {
            modulus: m,
            coeffs: out,
        }
    }

    /// Same element written over a modulus `target` with `M | target`.
    pub fn rescale_modulus(&self, target: usize) -> Result<Self> {
        if target == 0 || !target.is_multiple_of(self.modulus) {
            return Err(Error::InvalidParameter(format!(
                "cannot rescale modulus {} to {target}: not a multiple",
                self.modulus
            )));
        }
        let f = target / self.modulus;
        let mut out = Self::zero(target)?;
        for (j, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[j * f] = c;
        }
        Ok(out)
    }

    fn common_modulus(&self, other: &Self) -> Result<usize> {
        let l = lcm_u64(self.modulus as u64, other.modulus as u64)? as usize;
        if l > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(l));
        }
        Ok(l)
    }

    /// Convolution product (used for products of Gauss sums).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let m = self.common_modulus(other)?;
        let a = self.rescale_modulus(m)?;
        let b = other.rescale_modulus(m)?;
        let mut out = Self::zero(m)?;
        let nz: Vec<(usize, i64)> = b
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
            .collect();
        for (i, &ca) in a.coeffs.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for &(j, cb) in &nz {
                out.coeffs[(i + j) % m] += ca * cb;
            }
        }
        Ok(out)
    }

    pub fn eval(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| root_of_unity(j as i64, self.modulus as u64) * c as f64)
            .sum()
    }

    /// Canonical representative modulo the vanishing `p`-cycles.
    ///
    /// For each prime `p | M` with `p^e ∥ M`, write the `p`-component of an
    /// index as `u + p^{e-1}·t`. The cycle through `j` in direction `M/p`
    /// runs over all `t`, so every coefficient with `t = p - 1` is pushed
    /// onto the other `p - 1` members of its cycle. Reducing along `q`
    /// never changes `p`-digits, so after all primes the support lies in the
    /// `φ(M)` indices with no top digit equal to `p - 1`, which form a
    /// `Z`-basis of `Z[ζ_M]`.
    pub fn reduce(&self) -> Self {
        let m = self.modulus;
        let mut coeffs = self.coeffs.clone();
        for (p, e) in factorize(m as u64) {
            let p = p as usize;
            let pe = p.pow(e);
            let top = pe / p;
            let step = m / p;
            for j in 0..m {
                let c = coeffs[j];
                if c == 0 || (j % pe) / top != p - 1 {
                    continue;
                }
                coeffs[j] = 0;
                for t in 1..p {
                    coeffs[(j + t * step) % m] -= c;
                }
            }
        }
        Self { modulus: m, coeffs }
    }

    /// Exact equality in `Z[ζ]`.
    pub fn equal_exact(&self, other: &Self) -> Result<bool> {
        let m = self.common_modulus(other)?;
        let diff = self.rescale_modulus(m)? - other.rescale_modulus(m)?;
        Ok(diff.reduce().is_formally_zero())
    }
}

impl Add for FormalExpSum {
    type Output = FormalExpSum;

    fn add(mut self, rhs: FormalExpSum) -> FormalExpSum {
        assert_eq!(self.modulus, rhs.modulus, "moduli differ; rescale first");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for FormalExpSum {
    type Output = FormalExpSum;

    fn sub(self, rhs: FormalExpSum) -> FormalExpSum {
        self + (-rhs)
    }
}

impl Neg for FormalExpSum {
    type Output = FormalExpSum;

    fn neg(mut self) -> FormalExpSum {
        self.coeffs.iter_mut().for_each(|c| *c = -*c);
        self
    }
}
