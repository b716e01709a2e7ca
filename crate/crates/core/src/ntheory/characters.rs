//! Dirichlet characters with exact root-of-unity values.
//!
//! Characters modulo `h` are enumerated from the cyclic decomposition of the
//! unit group: `(Z/p^e)^*` is cyclic for odd `p` (smallest generator), and
//! `(Z/2^e)^* = <-1> × <5>` for `e ≥ 3`. A character is indexed by its tuple of
//! generator exponents; [`all_characters`] lists them in lexicographic order
//! of that tuple (components by ascending prime, `-1` before `5` at `p = 2`),
//! so index 0 is always the principal character.

use num_complex::Complex64;

use super::arith::{euler_phi, factorize, gcd_u64, lcm_u64, pow_mod};
use super::kronecker::{is_fundamental, kronecker};
use crate::error::{Error, Result};
use crate::formal::{root_of_unity, FormalExpSum};

/// An exact root of unity `exp(2πi·num/den)` with `gcd(num, den) = 1`,
/// `0 ≤ num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnity {
    pub num: u64,
    pub den: u64,
}

impl RootOfUnity {
    pub fn new(num: u64, den: u64) -> Self {
        let num = num % den;
        let g = gcd_u64(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        root_of_unity(self.num as i64, self.den)
    }
}

/// One cyclic factor of the unit group, as seen inside `Z/h`.
#[derive(Debug, Clone)]
struct Component {
    prime_power: u64,
    order: u64,
    /// Discrete log of each residue mod `prime_power` (None off the factor's
    /// units).
    dlog: Vec<Option<u64>>,
}

#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    /// Common denominator for all values.
    order: u64,
    /// `values[n] = Some(a)` means `χ(n) = e(a / order)`.
    values: Vec<Option<u64>>,
    conductor: u64,
    parity: i8,
    index: usize,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Position in [`all_characters`] order (0 for characters not built by it).
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn parity(&self) -> i8 {
        self.parity
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.values.iter().all(|v| matches!(v, None | Some(0)))
    }

    /// Common denominator `M` of the value fractions.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exact value at `n`, `None` when `gcd(n, h) > 1`.
    pub fn value(&self, n: i64) -> Option<RootOfUnity> {
        let idx = n.rem_euclid(self.modulus as i64) as usize;
        self.values[idx].map(|a| RootOfUnity::new(a, self.order))
    }

    /// Numerator of the value at `n` over [`order`](Self::order).
    pub fn value_numerator(&self, n: i64) -> Option<u64> {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn eval(&self, n: i64) -> Complex64 {
        match self.value_numerator(n) {
            Some(a) => root_of_unity(a as i64, self.order),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Complex conjugate character.
    pub fn conj(&self) -> DirichletCharacter {
        let values = self
            .values
            .iter()
            .map(|v| v.map(|a| (self.order - a) % self.order))
            .collect();
        DirichletCharacter {
            values,
            ..self.clone()
        }
    }

    /// Exact Gauss sum `Σ_{ℓ mod h} χ(ℓ) e(ℓ/h)`.
    pub fn gauss_sum_exact(&self) -> Result<FormalExpSum> {
        let m = lcm_u64(self.order, self.modulus)?;
        let (fo, fh) = (m / self.order, m / self.modulus);
        let mut g = FormalExpSum::zero(m as usize)?;
        for (l, v) in self.values.iter().enumerate() {
            if let Some(a) = v {
                g.add_term((a * fo + l as u64 * fh) as i64, 1);
            }
        }
        Ok(g)
    }

    /// Gauss sum evaluated numerically term by term.
    pub fn gauss_sum(&self) -> Complex64 {
        (0..self.modulus as i64)
            .map(|l| self.eval(l) * root_of_unity(l, self.modulus))
            .sum()
    }

    /// Conductor by brute force: least `d | h` such that `χ(n) = 1` for all
    /// units `n ≡ 1 (mod d)`.
    pub fn conductor_by_restriction(&self) -> u64 {
        let h = self.modulus;
        super::arith::divisors(h)
            .into_iter()
            .find(|&d| {
                (0..h)
                    .filter(|n| n % d == 1 % d)
                    .all(|n| matches!(self.values[n as usize], None | Some(0)))
            })
            .unwrap_or(h)
    }
}

fn smallest_generator(p: u64, pe: u64) -> u64 {
    let phi = euler_phi(pe);
    let prime_factors: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    (2..pe)
        .find(|&g| {
            g % p != 0
                && prime_factors
                    .iter()
                    .all(|&q| pow_mod(g as i64, phi / q, pe as i64) != 1)
        })
        .unwrap_or(1)
}

fn cyclic_component(pe: u64, generator: u64, order: u64) -> Component {
    let mut dlog = vec![None; pe as usize];
    let mut x = 1u64 % pe;
    for t in 0..order {
        dlog[x as usize] = Some(t);
        x = x * generator % pe;
    }
    Component {
        prime_power: pe,
        order,
        dlog,
    }
}

/// Cyclic factors of `(Z/h)^*` plus, for each factor, the function that maps
/// an exponent to the conductor exponent it forces.
fn unit_group_components(h: u64) -> Vec<(u64, u32, Vec<Component>)> {
    let mut out = Vec::new();
    for (p, e) in factorize(h) {
        let pe = p.pow(e);
        let comps = if p == 2 {
            match e {
                1 => vec![],
                2 => vec![cyclic_component(4, 3, 2)],
                _ => {
                    // <-1> × <5>: split a unit u as ±5^t.
                    let order5 = pe / 4;
                    let mut log5 = vec![None; pe as usize];
                    let mut logm1 = vec![None; pe as usize];
                    let mut x = 1u64;
                    for t in 0..order5 {
                        log5[x as usize] = Some(t);
                        log5[(pe - x) as usize] = Some(t);
                        logm1[x as usize] = Some(0);
                        logm1[(pe - x) as usize] = Some(1);
                        x = x * 5 % pe;
                    }
                    vec![
                        Component {
                            prime_power: pe,
                            order: 2,
                            dlog: logm1,
                        },
                        Component {
                            prime_power: pe,
                            order: order5,
                            dlog: log5,
                        },
                    ]
                }
            }
        } else {
            let g = smallest_generator(p, pe);
            vec![cyclic_component(pe, g, euler_phi(pe))]
        };
        out.push((p, e, comps));
    }
    out
}

/// Conductor exponent of one prime-power block, from the generator exponents.
fn block_conductor(p: u64, e: u32, exps: &[u64], comps: &[Component]) -> u64 {
    if exps.iter().all(|&j| j == 0) {
        return 1;
    }
    if p == 2 {
        if e == 2 {
            return 4;
        }
        let (a, b) = (exps[0], exps[1]);
        if b == 0 {
            debug_assert_eq!(a, 1);
            return 4;
        }
        let v = b.trailing_zeros();
        return 2u64.pow(e - v);
    }
    let j = exps[0];
    debug_assert_eq!(comps[0].order, (p - 1) * p.pow(e - 1));
    let mut v = 0;
    let mut jj = j;
    while jj.is_multiple_of(p) && v < e - 1 {
        jj /= p;
        v += 1;
    }
    p.pow(e - v)
}

/// All `φ(h)` Dirichlet characters modulo `h`, in canonical index order.
pub fn all_characters(h: u64) -> Result<Vec<DirichletCharacter>> {
    if h == 0 {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    let blocks = unit_group_components(h);
    let comps: Vec<&Component> = blocks.iter().flat_map(|(_, _, c)| c.iter()).collect();
    let orders: Vec<u64> = comps.iter().map(|c| c.order).collect();
    let big_order = orders.iter().try_fold(1u64, |acc, &o| lcm_u64(acc, o))?;

    // Per-residue discrete-log vectors.
    let logs: Vec<Option<Vec<u64>>> = (0..h)
        .map(|n| {
            if gcd_u64(n, h) != 1 && h != 1 {
                return None;
            }
            comps
                .iter()
                .map(|c| c.dlog[(n % c.prime_power) as usize])
                .collect()
        })
        .collect();

    let total: u64 = orders.iter().product();
    let mut chars = Vec::with_capacity(total as usize);
    for idx in 0..total {
        // Lexicographic: first component is most significant.
        let mut exps = vec![0u64; orders.len()];
        let mut rest = idx;
        for (slot, &o) in exps.iter_mut().zip(&orders).rev() {
            *slot = rest % o;
            rest /= o;
        }
        let values: Vec<Option<u64>> = logs
            .iter()
            .map(|l| {
                l.as_ref().map(|l| {
                    l.iter()
                        .zip(&exps)
                        .zip(&orders)
                        .map(|((&t, &j), &o)| (t * j % o) * (big_order / o))
                        .sum::<u64>()
                        % big_order
                })
            })
            .collect();

        let mut conductor = 1;
        let mut offset = 0;
        for (p, e, c) in &blocks {
            let n = c.len();
            conductor *= block_conductor(*p, *e, &exps[offset..offset + n], c);
            offset += n;
        }
        let parity = match values[((h as i64 - 1).rem_euclid(h as i64)) as usize] {
            Some(0) | None => 1,
            Some(a) if 2 * a == big_order => -1,
            Some(_) => unreachable!("χ(-1) is ±1"),
        };
        chars.push(DirichletCharacter {
            modulus: h,
            order: big_order,
            values,
            conductor,
            parity,
            index: idx as usize,
        });
    }
    Ok(chars)
}

/// The character `(D / ·)` modulo `|D|` for a negative fundamental discriminant.
pub fn kronecker_character(d: i64) -> Result<DirichletCharacter> {
    if d >= 0 || !is_fundamental(d) {
        return Err(Error::InvalidParameter(format!(
            "{d} is not a negative fundamental discriminant"
        )));
    }
    let h = d.unsigned_abs();
    let values = (0..h as i64)
        .map(|n| match kronecker(d, n) {
            0 => None,
            1 => Some(0),
            _ => Some(1),
        })
        .collect();
    let mut chi = DirichletCharacter {
        modulus: h,
        order: 2,
        values,
        conductor: h,
        parity: -1,
        index: 0,
    };
    chi.conductor = chi.conductor_by_restriction();
    chi.parity = if chi.value_numerator(-1) == Some(1) { -1 } else { 1 };
    Ok(chi)
}

/// Character at `index` in [`all_characters`] order.
pub fn character_by_index(h: u64, index: usize) -> Result<DirichletCharacter> {
    let mut all = all_characters(h)?;
    if index >= all.len() {
        return Err(Error::InvalidParameter(format!(
            "character index {index} out of range: there are {} characters mod {h}",
            all.len()
        )));
    }
    Ok(all.swap_remove(index))
}
