//! Binary quadratic forms and the genus character.

use crate::error::{precondition, Error, Result};
use crate::ntheory::arith::gcd;
use crate::ntheory::{kronecker, DiscriminantDatum};

/// `Q(x, y) = a x² + b xy + c y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// A form of discriminant `D²` with `N | a`, for the datum's `D` and `N`.
    pub fn for_datum(a: i64, b: i64, c: i64, datum: &DiscriminantDatum) -> Result<Self> {
        let q = Self { a, b, c };
        precondition(
            q.discriminant() == datum.d as i128 * datum.d as i128,
            format!("[{a}, {b}, {c}] has discriminant {} != D^2", q.discriminant()),
        )?;
        precondition(a % datum.level == 0, format!("N = {} does not divide a = {a}", datum.level))?;
        Ok(q)
    }

    pub fn discriminant(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (a, b, c, x, y) = (self.a as i128, self.b as i128, self.c as i128, x as i128, y as i128);
        a * x * x + b * x * y + c * y * y
    }

    /// `Q ∘ M` for `M = [[p, q], [r, s]]`: `(x, y) ↦ Q(px + qy, rx + sy)`.
    pub fn act(&self, m: [[i64; 2]; 2]) -> Self {
        let [[p, q], [r, s]] = m;
        let (a, b, c) = (self.a, self.b, self.c);
        Self {
            a: a * p * p + b * p * r + c * r * r,
            b: 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            c: a * q * q + b * q * s + c * s * s,
        }
    }
}

/// `χ_D(Q)`: the Kronecker symbol `(D / v)` at any value `v` properly
/// represented by `Q` with `gcd(v, D) = 1`, or 0 if there is none.
///
/// Values are searched over primitive `(x, y) ∈ [0, |D|)²`. The whole box is
/// scanned and an inconsistent sign is reported as an error.
pub fn genus_char(d: i64, q: &QuadraticForm) -> Result<i8> {
    genus_char_in_box(d, q, d.abs())
}

/// [`genus_char`] with an explicit search box `[0, side)²`.
pub fn genus_char_in_box(d: i64, q: &QuadraticForm, side: i64) -> Result<i8> {
    let dd = d as i128;
    let mut found: Option<i8> = None;
    for x in 0..side {
        for y in 0..side {
            if gcd(x, y) != 1 {
                continue;
            }
            let v = q.eval(x, y);
            let red = (v.unsigned_abs() % dd.unsigned_abs()) as i64;
            if gcd(red, d) != 1 {
                continue;
            }
            // (D / ·) has period |D| on positive integers, and (D / -1) = sign D.
            let mut sym = kronecker(d, red);
            if v < 0 && d < 0 {
                sym = -sym;
            }
            match found {
                None => found = Some(sym),
                Some(s) if s != sym => {
                    return Err(Error::GenusInconsistent { a: q.a, b: q.b, c: q.c })
                }
                _ => {}
            }
        }
    }
    Ok(found.unwrap_or(0))
}

/// First-found variant of [`genus_char`] for hot loops: returns the symbol of
/// the first coprime value in the same scan order, without the consistency
/// scan. Well-definedness is checked by [`genus_char`] in the test suites.
pub(crate) fn genus_char_first(d: i64, q: &QuadraticForm) -> i8 {
    let h = d.abs();
    for x in 0..h {
        for y in 0..h {
            if gcd(x, y) != 1 {
                continue;
            }
            let v = q.eval(x, y);
            let red = (v.unsigned_abs() % h as u128) as i64;
            if gcd(red, d) != 1 {
                continue;
            }
            let sym = kronecker(d, red);
            return if v < 0 && d < 0 { -sym } else { sym };
        }
    }
    0
}
