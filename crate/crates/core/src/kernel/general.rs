//! The general coefficient formula for arbitrary `s` in `1 < Re s < k − 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::critical::i_pow;
use super::{for_each_solution, sum_blocks, CoeffResult, TruncationConfig};
use crate::error::{precondition, Result};
use crate::formal::root_of_unity;
use crate::ntheory::arith::gcd;
use crate::ntheory::DirichletCharacter;
use crate::special::{gamma, kummer_1f1, ln_gamma, ln_gamma_real, ln_one_f1_bound, zeta_tail_bound};

/// Parameters of `R_{k,N,ψ}(τ, s, χ)`.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub k: i64,
    pub level: i64,
    /// Nebentypus, modulo `level`.
    pub psi: DirichletCharacter,
    /// Primitive twist character modulo `h`.
    pub chi: DirichletCharacter,
    pub s: Complex64,
    pub trunc: TruncationConfig,
}

impl KernelSpec {
    pub fn new(k: i64, psi: DirichletCharacter, chi: DirichletCharacter, s: Complex64, trunc: TruncationConfig) -> Result<Self> {
        let spec = Self {
            k,
            level: psi.modulus() as i64,
            psi,
            chi,
            s,
            trunc,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k;
        precondition(k >= 3, format!("weight must be >= 3, got {k}"))?;
        precondition(self.psi.modulus() as i64 == self.level, "psi must be a character modulo N")?;
        precondition(self.chi.is_primitive(), "chi must be primitive")?;
        precondition(
            gcd(self.level, self.h()) == 1,
            format!("gcd(N, h) = gcd({}, {}) != 1", self.level, self.h()),
        )?;
        let parity = if k % 2 == 0 { 1 } else { -1 };
        precondition(self.psi.parity() == parity, format!("psi(-1) must equal (-1)^k = {parity}"))?;
        precondition(
            self.s.re > 1.0 && self.s.re < k as f64 - 1.0,
            format!("Re s = {} outside the convergence strip (1, {})", self.s.re, k - 1),
        )?;
        self.trunc.validate()
    }

    pub fn h(&self) -> i64 {
        self.chi.modulus() as i64
    }

    /// Slow-convergence regime: the omitted terms decay like `n^{-1}` or slower.
    pub fn is_boundary(&self) -> bool {
        self.s.re.min(self.k as f64 - self.s.re) <= 2.0
    }
}

/// [`CoeffResult`] together with the separately evaluated closed-form terms.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralCoeff {
    pub coeff: CoeffResult,
    /// `χ̄(m) m^{s−1}`
    pub first_term: Complex64,
    /// The `δ_{N,1}` term (zero for `N ≥ 2`).
    pub delta_term: Complex64,
    /// Largest mismatch between the `c > 0` and `c < 0` halves of a single
    /// `n` (which agree exactly in theory), relative to the largest half.
    pub symmetry_defect: f64,
}

fn cpow_real(base: f64, e: Complex64) -> Complex64 {
    (e * base.ln()).exp()
}

/// `δ_{N,1} χ(−1) i^{−k} h^{2s−k} (2π)^{k−2s} Γ(s)/Γ(k−s) G(χ̄)/G(χ) χ(m) m^{k−s−1}`.
pub(crate) fn delta_term(spec: &KernelSpec, m: i64) -> Result<Complex64> {
    if spec.level != 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (s, kf, h) = (spec.s, spec.k as f64, spec.h() as f64);
    let g = spec.chi.gauss_sum();
    let g_bar = spec.chi.conj().gauss_sum();
    Ok(spec.chi.eval(-1)
        * i_pow(-spec.k)
        * cpow_real(h, 2.0 * s - kf)
        * cpow_real(2.0 * PI, kf - 2.0 * s)
        * (gamma(s)? / gamma(kf - s)?)
        * (g_bar / g)
        * spec.chi.eval(m)
        * cpow_real(m as f64, kf - s - 1.0))
}

/// `½ i^{−k} (2π)^{k−s} Γ(s)/Γ(k) m^{k−1} h^s / G(χ)`.
fn series_prefactor(spec: &KernelSpec, m: i64) -> Result<Complex64> {
    let (s, kf, h) = (spec.s, spec.k as f64, spec.h() as f64);
    let ln_mag = (kf - s) * (2.0 * PI).ln() + ln_gamma(s)? - ln_gamma_real(kf) + (kf - 1.0) * (m as f64).ln() + s * h.ln();
    Ok(0.5 * i_pow(-spec.k) * ln_mag.exp() / spec.chi.gauss_sum())
}

/// Bound for the part of the pair sum with `n > N·j0`: each `(c, q)` carries
/// at most `gcd(c, h)` values of `ℓ`, both signs of `c` contribute, and
/// `|₁F₁(s, k; ix)| ≤ |Γ(k)/(Γ(s)Γ(k−s))| B(σ, k−σ)`. With `j0 = 0` this
/// bounds the whole series.
pub(crate) fn pair_sum_bound(k: i64, level: i64, h: i64, m: i64, s: Complex64, j0: u64) -> Result<f64> {
    Ok(ln_pair_sum_bound(k, level, h, m, s, j0)?.exp())
}

pub(crate) fn ln_pair_sum_bound(k: i64, level: i64, h: i64, m: i64, s: Complex64, j0: u64) -> Result<f64> {
    let kf = k as f64;
    let (sigma, t) = (s.re, s.im);
    let ln_pref = (0.5f64).ln() + (kf - sigma) * (2.0 * PI).ln() + ln_gamma(s)?.re - ln_gamma_real(kf)
        + (kf - 1.0) * (m as f64).ln()
        + (sigma - 0.5) * (h as f64).ln();
    // ln(2 cosh(πt/2)) without overflow
    let a = PI * t.abs() / 2.0;
    let ln_rot = a + (-2.0 * a).exp().ln_1p();
    let ln_bracket = ln_rot + ln_one_f1_bound(s, kf)?;
    // c = N c' with c' ≤ j0: the q-sum starts above j0 / c'.
    let mut sum = 0.0;
    for cp in 1..=j0 {
        let c = level * cp as i64;
        sum += gcd(c, h) as f64 * (c as f64).powf(sigma - kf) * zeta_tail_bound(sigma, j0 / cp + 1);
    }
    // c' > j0: every q ≥ 1.
    let ln_far = (h as f64).ln() + (sigma - kf) * (level as f64).ln()
        + zeta_tail_bound(kf - sigma, j0 + 1).ln()
        + zeta_tail_bound(sigma, 1).ln();
    let ln_sum = if sum > 0.0 { ln_far.max(sum.ln()) + (-(ln_far - sum.ln()).abs()).exp().ln_1p() } else { ln_far };
    Ok(2f64.ln() + ln_pref + ln_bracket + ln_sum)
}

fn general_tail_bound(spec: &KernelSpec, m: i64, j0: u64) -> Result<f64> {
    pair_sum_bound(spec.k, spec.level, spec.h(), m, spec.s, j0)
}

/// `m`-th Fourier coefficient of `R_{k,N,ψ}(τ, s, χ)`.
pub fn kernel_coeff_general(spec: &KernelSpec, m: i64) -> Result<GeneralCoeff> {
    spec.validate()?;
    precondition(m >= 1, format!("m must be positive, got {m}"))?;
    let (s, kf, h, level) = (spec.s, spec.k as f64, spec.h(), spec.level);
    let first_term = spec.chi.eval(m).conj() * cpow_real(m as f64, s - 1.0);
    let delta = delta_term(spec, m)?;
    let pref = series_prefactor(spec, m)?;
    let eps_sign = spec.psi.eval(-1) * spec.chi.eval(-1);
    let rot_minus = (Complex64::i() * PI * s / 2.0).exp();
    let rot_plus = (-Complex64::i() * PI * s / 2.0).exp();
    let k_sign = if spec.k % 2 == 0 { 1.0 } else { -1.0 };
    let zero = Complex64::new(0.0, 0.0);

    let (mut max_diff, mut max_half): (f64, f64) = (0.0, 0.0);
    let boundary = spec.is_boundary();
    let out = sum_blocks(&spec.trunc, boundary, |lo, hi| {
        let len = (hi - lo + 1) as usize;
        // [c > 0 with F(−), c > 0 with F(+), c < 0 with F(−), c < 0 with F(+)]
        let mut acc = vec![[zero; 4]; len];
        let mut weight = vec![0.0f64; len];
        for_each_solution(level, h, lo, hi, |j, c, _q, l, a, a_bar| {
            let w = spec.chi.eval(l) * cpow_real(c as f64, 2.0 * s - kf);
            if w == zero {
                return;
            }
            weight[(j - lo) as usize] += 2.0 * w.norm();
            let slot = &mut acc[(j - lo) as usize];
            let e_pos = root_of_unity(m * a_bar % c, c as u64);
            let w_pos = w * spec.psi.eval(a);
            slot[0] += w_pos * e_pos;
            slot[1] += w_pos * eps_sign * e_pos.conj();
            // mirror term (−a, −c): c^{−k} picks up (−1)^k, ā becomes −ā mod |c|
            let neg_inv = crate::ntheory::arith::mod_inv(-a, c).expect("unit");
            let e_neg = root_of_unity(-(m * neg_inv % c), c as u64);
            let w_neg = w * spec.psi.eval(-a) * k_sign;
            slot[2] += w_neg * e_neg;
            slot[3] += w_neg * eps_sign * e_neg.conj();
        });
        let (mut block, mut mass) = (zero, 0.0);
        for (i, slot) in acc.iter().enumerate() {
            if weight[i] == 0.0 {
                continue;
            }
            let n = (level as u64 * (lo + i as u64)) as f64;
            let x = 2.0 * PI * m as f64 * h as f64 / n;
            let f_minus = kummer_1f1(s, Complex64::new(kf, 0.0), Complex64::new(0.0, -x))?;
            let f_plus = kummer_1f1(s, Complex64::new(kf, 0.0), Complex64::new(0.0, x))?;
            let pos = rot_minus * f_minus * slot[0] + rot_plus * f_plus * slot[1];
            let neg = rot_minus * f_minus * slot[2] + rot_plus * f_plus * slot[3];
            max_diff = max_diff.max((pos - neg).norm());
            max_half = max_half.max(pos.norm().max(neg.norm()));
            let n_s = cpow_real(n, -s);
            block += n_s * (pos + neg);
            mass += weight[i] * n_s.norm() * (f_minus.norm() * rot_minus.norm() + f_plus.norm() * rot_plus.norm());
        }
        Ok((pref * block, pref.norm() * mass))
    })?;
    let tail = general_tail_bound(spec, m, out.j_max)?;
    let coeff = CoeffResult::assemble(first_term + delta, out, Some(tail), boundary);
    Ok(GeneralCoeff {
        coeff,
        first_term,
        delta_term: delta,
        symmetry_defect: if max_half > 0.0 { max_diff / max_half } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::{character_by_index, kronecker_character};

    fn spec(k: i64, level: u64, d: i64, s: Complex64, n_cap: u64) -> KernelSpec {
        let psi = character_by_index(level, 0).unwrap();
        let chi = kronecker_character(d).unwrap();
        KernelSpec::new(k, psi, chi, s, TruncationConfig { n_cap, rel_tol: 1e-9, ..Default::default() }).unwrap()
    }

    #[test]
    fn first_term_only_for_higher_level() {
        let s = Complex64::new(2.5, 0.7);
        let sp = spec(6, 2, -7, s, 0);
        let r = kernel_coeff_general(&sp, 3).unwrap();
        let want = Complex64::new(crate::ntheory::kronecker(-7, 3) as f64, 0.0) * cpow_real(3.0, s - 1.0);
        assert!((r.coeff.value - want).norm() < 1e-14);
        assert_eq!(r.delta_term, Complex64::new(0.0, 0.0));
        assert!(r.coeff.error > 0.0);
    }

    #[test]
    fn delta_term_at_self_dual_point() {
        // At s = k/2 every power of h and 2π cancels and Γ(s)/Γ(k−s) = 1;
        // Gauss sums are summed inline.
        let k = 6;
        let psi = character_by_index(1, 0).unwrap();
        let mut chis: Vec<_> = [-3i64, -4, -7, -8].iter().map(|&d| kronecker_character(d).unwrap()).collect();
        chis.extend(crate::ntheory::all_characters(5).unwrap().into_iter().filter(|c| c.is_primitive()));
        for chi in chis {
            let h = chi.modulus() as i64;
            let gauss = |f: &dyn Fn(i64) -> Complex64| -> Complex64 {
                (0..h).map(|l| f(l) * Complex64::from_polar(1.0, 2.0 * PI * l as f64 / h as f64)).sum()
            };
            let g = gauss(&|l| chi.eval(l));
            let g_bar = gauss(&|l| chi.eval(l).conj());
            let trunc = TruncationConfig { n_cap: 0, ..Default::default() };
            let sp = KernelSpec::new(k, psi.clone(), chi.clone(), Complex64::new(3.0, 0.0), trunc).unwrap();
            for m in 1..=5 {
                let want = chi.eval(-1) * i_pow(-k) * g_bar / g * chi.eval(m) * (m as f64).powf(k as f64 / 2.0 - 1.0);
                let got = delta_term(&sp, m).unwrap();
                assert!((got - want).norm() < 1e-12, "h={h} m={m}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let psi = character_by_index(1, 0).unwrap();
        let chi = kronecker_character(-3).unwrap();
        let t = TruncationConfig::default();
        assert!(KernelSpec::new(6, psi.clone(), chi.clone(), Complex64::new(5.0, 0.0), t).is_err());
        assert!(KernelSpec::new(5, psi.clone(), chi.clone(), Complex64::new(2.0, 0.0), t).is_err());
        let psi3 = character_by_index(3, 0).unwrap();
        assert!(KernelSpec::new(6, psi3, chi, Complex64::new(3.0, 0.0), t).is_err());
    }

    #[test]
    fn halves_agree() {
        let mut sp = spec(8, 1, -3, Complex64::new(3.7, 1.3), 1 << 16);
        sp.trunc.rel_tol = 1e-8;
        let r = kernel_coeff_general(&sp, 2).unwrap();
        assert!(r.symmetry_defect < 1e-10, "{}", r.symmetry_defect);
    }
}
