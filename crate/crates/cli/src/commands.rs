use lkernel::analysis::{
    estimate_breakdown, estimate_breakdown_right, min_level_on_grid, min_weight_on_grid, zero_scan, ThresholdCertificate,
};
use lkernel::expsums::{k_sum, representatives, s_sum, verify_gkz_lemma, verify_s_equals_k, h_value, ExpSumValue};
use lkernel::formal::FormalExpSum;
use lkernel::jacobi::{lift_coeff_closed, lift_coeff_via_g, waldspurger_constant};
use lkernel::kernel::{kernel_coeff_critical, kernel_coeff_general, CoeffResult, KernelSpec, TruncationConfig};
use lkernel::ntheory::arith::gcd;
use lkernel::ntheory::{character_by_index, is_fundamental, DiscriminantDatum, DirichletCharacter};
use lkernel::Error;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{complex, estimate, RunReport};
use crate::{CharArgs, Cli, Command, ExpsumCmd, Failure, GlobalOpts, NonvanishingCmd, Output, SumArgs, VerifyCmd};

/// Failing instances listed in a grid report.
const MAX_LISTED: usize = 20;

type Res<T> = std::result::Result<T, Failure>;

/// Parameter errors become usage failures; anything else is a failed
/// computation and is reported as a failing verdict.
fn check<T>(rep: &RunReport, r: lkernel::Result<T>) -> Res<T> {
    r.map_err(|e| match e {
        Error::InvalidParameter(_) | Error::Precondition(_) | Error::Pole { .. } | Error::ModulusTooLarge(_) | Error::Overflow(_) => {
            Failure::Usage(e.to_string())
        }
        _ => {
            let mut rep = rep.clone();
            rep.verdict("computation", false, e.to_string());
            Failure::Verdict(rep)
        }
    })
}

fn truncation(g: &GlobalOpts, base: TruncationConfig) -> Res<TruncationConfig> {
    let t = TruncationConfig {
        rel_tol: g.rel_tol.unwrap_or(base.rel_tol),
        n_cap: g.n_cap.unwrap_or(base.n_cap),
        ..base
    };
    t.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(t)
}

fn trunc_json(t: &TruncationConfig) -> Value {
    json!({ "n_start": t.n_start, "growth": t.growth, "rel_tol": t.rel_tol, "n_cap": t.n_cap })
}

/// Reduced exact form: the modulus and the nonzero `(exponent, coefficient)` pairs.
fn formal_json(f: &FormalExpSum) -> Value {
    let r = f.reduce();
    let terms: Vec<(usize, i64)> = r.coeffs().iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect();
    json!({ "modulus": r.modulus(), "terms": terms })
}

fn coeff_json(r: &CoeffResult) -> Value {
    json!({
        "value": complex(r.value),
        "error": r.error,
        "leading": complex(r.leading),
        "series": complex(r.series),
        "last_block": r.last_block,
        "tail_bound": r.tail_bound,
        "terms": r.terms,
        "stabilized": r.stabilized,
        "rigorous": r.rigorous,
        "boundary": r.boundary,
    })
}

pub(crate) fn execute(cli: &Cli) -> Res<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::GaussSum { modulus, char_index } => gauss_sum(*modulus, *char_index),
        Command::Expsum(cmd) => expsum(cmd),
        Command::Verify(VerifyCmd::SEqualsK { max_level, max_j, max_m, discs }) => s_equals_k(*max_level, *max_j, *max_m, discs),
        Command::Verify(VerifyCmd::GkzLemma { max_level, max_nj, max_m, tol }) => gkz(*max_level, *max_nj, *max_m, *tol),
        Command::Verify(VerifyCmd::WaldspurgerKernel { k, level, d, r, m_max }) => waldspurger(g, *k, *level, *d, *r, *m_max),
        Command::KernelCoeff(a) => kernel_coeff(g, &a.chars, Complex64::new(a.s_re, a.s_im), a.m),
        Command::Nonvanishing(cmd) => nonvanishing(g, cmd),
    }
}

fn gauss_sum(h: u64, index: usize) -> Res<Output> {
    let mut rep = RunReport::new("gauss-sum");
    rep.input("modulus", h).input("char_index", index);
    let chi = check(&rep, character_by_index(h, index))?;
    let exact = check(&rep, chi.gauss_sum_exact())?;
    let value = chi.gauss_sum();
    let abs_sq = value.norm_sqr();
    rep.output("value", complex(value))
        .output("exact", formal_json(&exact))
        .output("abs_sq", abs_sq)
        .output("conductor", chi.conductor())
        .output("order", chi.order())
        .output("parity", chi.parity())
        .output("primitive", chi.is_primitive());
    if chi.is_primitive() {
        let hf = h as f64;
        rep.verdict(
            "abs_sq_equals_modulus",
            (abs_sq - hf).abs() <= 1e-10 * hf,
            format!("|G|^2 = {abs_sq:.12}, h = {h}"),
        );
        let norm = check(&rep, exact.mul(&exact.conj()))?;
        let target = check(&rep, FormalExpSum::exp_term(norm.modulus(), 0, h as i64))?;
        let equal = check(&rep, norm.equal_exact(&target))?;
        rep.verdict("exact_norm", equal, "G·conj(G) = h in the cyclotomic integers");
    }
    Ok(Output::Report(rep))
}

fn sum_inputs(rep: &mut RunReport, a: &SumArgs) {
    rep.input("N", a.level).input("n", a.n).input("m", a.m).input("D", a.d);
}

fn expsum(cmd: &ExpsumCmd) -> Res<Output> {
    let (mut rep, value): (RunReport, ExpSumValue) = match cmd {
        ExpsumCmd::K(a) => {
            let mut rep = RunReport::new("expsum k");
            sum_inputs(&mut rep, a);
            let v = check(&rep, k_sum(a.level, a.n, a.m, a.d))?;
            let reps = check(&rep, representatives(a.level, a.n, a.d))?;
            rep.output("representatives", reps);
            (rep, v)
        }
        ExpsumCmd::S(a) => {
            let mut rep = RunReport::new("expsum s");
            sum_inputs(&mut rep, a);
            let v = check(&rep, s_sum(a.level, a.n, a.m, a.d))?;
            (rep, v)
        }
        ExpsumCmd::H { level, n, d, r, dp, rp } => {
            let mut rep = RunReport::new("expsum h");
            rep.input("N", level).input("n", n).input("D", d).input("r", r).input("Dp", dp).input("rp", rp);
            let v = check(&rep, h_value(*level, *n, *d, *r, *dp, *rp))?;
            rep.output("value", complex(v));
            return Ok(Output::Report(rep));
        }
    };
    rep.output("value", complex(value.value)).output("exact", formal_json(&value.formal));
    Ok(Output::Report(rep))
}

fn s_equals_k(max_level: i64, max_j: i64, max_m: i64, discs: &[i64]) -> Res<Output> {
    let mut rep = RunReport::new("verify s-equals-k");
    rep.input("max_level", max_level).input("max_j", max_j).input("max_m", max_m).input("discs", discs);
    if let Some(d) = discs.iter().find(|&&d| !(d < 0 && is_fundamental(d))) {
        return Err(Failure::Usage(format!("{d} is not a negative fundamental discriminant")));
    }
    let mut grid = Vec::new();
    for level in 1..=max_level {
        for &d in discs.iter().filter(|&&d| gcd(d, level) == 1) {
            for j in 1..=max_j {
                for m in 1..=max_m {
                    grid.push((level, level * j, m, d));
                }
            }
        }
    }
    let reports = check(
        &rep,
        grid.par_iter().map(|&(level, n, m, d)| verify_s_equals_k(level, n, m, d)).collect::<lkernel::Result<Vec<_>>>(),
    )?;
    let failures: Vec<Value> = reports
        .iter()
        .filter(|r| !(r.exact_equal && r.termwise))
        .map(|r| json!({ "N": r.level, "n": r.n, "m": r.m, "D": r.d, "exact_equal": r.exact_equal, "termwise": r.termwise }))
        .collect();
    let exact_fail = reports.iter().filter(|r| !r.exact_equal).count();
    let termwise_fail = reports.iter().filter(|r| !r.termwise).count();
    let max_diff = reports.iter().map(|r| r.numeric_diff).fold(0.0, f64::max);
    rep.output("instances", reports.len())
        .output("exact_failures", exact_fail)
        .output("termwise_failures", termwise_fail)
        .output("max_numeric_diff", max_diff)
        .output("failures", &failures[..failures.len().min(MAX_LISTED)]);
    rep.verdict("exact_equality", exact_fail == 0, format!("{exact_fail} of {} instances differ", reports.len()));
    rep.verdict("termwise_correspondence", termwise_fail == 0, format!("{termwise_fail} instances without a term bijection"));
    Ok(Output::Report(rep))
}

fn gkz(max_level: i64, max_nj: i64, max_m: i64, tol: f64) -> Res<Output> {
    let mut rep = RunReport::new("verify gkz-lemma");
    rep.input("max_level", max_level).input("max_nj", max_nj).input("max_m", max_m).input("tol", tol);
    let mut grid = Vec::new();
    for level in 1..=max_level {
        for nj in 1..=max_nj {
            for r in 0..2 * level {
                let d = r * r - 4 * level * nj;
                if d < 0 && is_fundamental(d) && gcd(d, level) == 1 {
                    grid.extend((1..=max_m).map(|m| (level, nj, m, r)));
                }
            }
        }
    }
    let reports = check(
        &rep,
        grid.par_iter().map(|&(level, nj, m, r)| verify_gkz_lemma(level, nj, m, r)).collect::<lkernel::Result<Vec<_>>>(),
    )?;
    let rel = |r: &lkernel::expsums::GkzReport| r.abs_diff / (1.0 + r.lhs.norm());
    let failures: Vec<Value> = reports
        .iter()
        .filter(|r| rel(r) > tol)
        .map(|r| json!({ "N": r.level, "nJ": r.nj, "m": r.m, "r": r.r, "D": r.d, "lhs": complex(r.lhs), "rhs": complex(r.rhs) }))
        .collect();
    let worst = reports.iter().map(rel).fold(0.0, f64::max);
    rep.output("instances", reports.len())
        .output("max_scaled_diff", worst)
        .output("failures", &failures[..failures.len().min(MAX_LISTED)]);
    rep.verdict("identity", failures.is_empty(), format!("{} of {} instances exceed {tol:e}", failures.len(), reports.len()));
    Ok(Output::Report(rep))
}

fn waldspurger(g: &GlobalOpts, k: i64, level: i64, d: i64, r: Option<i64>, m_max: i64) -> Res<Output> {
    let mut rep = RunReport::new("verify waldspurger-kernel");
    // The Bessel series decays like n^{-k}; low k needs a looser default.
    let rel_tol = match k {
        ..=2 => 1e-3,
        3 => 3e-4,
        4 => 1e-6,
        _ => 1e-8,
    };
    let t = truncation(g, TruncationConfig { rel_tol, n_cap: 1 << 14, ..Default::default() })?;
    rep.input("k", k).input("N", level).input("D", d).input("r", r).input("m_max", m_max).input("truncation", trunc_json(&t));
    let base = check(&rep, r.map_or_else(|| DiscriminantDatum::with_least_root(d, level), |r| DiscriminantDatum::new(d, level, r)))?;
    if m_max < 1 {
        return Err(Failure::Usage("m-max must be positive".into()));
    }
    let constant = check(&rep, waldspurger_constant(k, level, d))?;
    let rows = check(
        &rep,
        (1..=m_max)
            .into_par_iter()
            .map(|m| {
                Ok((
                    m,
                    kernel_coeff_critical(2 * k, level, m, d, &t)?,
                    lift_coeff_closed(k, level, &base, m, &t)?,
                    lift_coeff_via_g(k, level, &base, m, &t)?,
                ))
            })
            .collect::<lkernel::Result<Vec<_>>>(),
    )?;
    let boundary = k == 2;
    let slack = if boundary { 1e-6 } else { 1e-8 };
    let agree = |a: &CoeffResult, b: &CoeffResult| (a.value - b.value).norm() <= a.error + b.error + slack;
    let mut table = Vec::new();
    let mut ok = [true; 3];
    for (m, crit, closed, via) in &rows {
        let pairs = [agree(crit, closed), agree(closed, via), agree(crit, via)];
        for (o, p) in ok.iter_mut().zip(pairs) {
            *o &= p;
        }
        table.push(json!({
            "m": m,
            "critical": estimate(crit.value, crit.error),
            "closed": estimate(closed.value, closed.error),
            "via_g": estimate(via.value, via.error),
            "terms": crit.terms,
            "max_diff": (crit.value - closed.value).norm().max((closed.value - via.value).norm()).max((crit.value - via.value).norm()),
            "agree": pairs.iter().all(|&p| p),
        }));
    }
    rep.output("r", base.r)
        .output("weight", 2 * k)
        .output("boundary", boundary)
        .output("rows", table)
        .output(
            "constant",
            json!({
                "constant": constant.constant,
                "elliptic_prefactor": constant.elliptic_prefactor,
                "jacobi_prefactor": constant.jacobi_prefactor,
                "quotient": constant.quotient,
            }),
        );
    let detail = format!("within summed error estimates + {slack:e}");
    rep.verdict("critical_vs_closed", ok[0], detail.clone());
    rep.verdict("closed_vs_via_g", ok[1], detail.clone());
    rep.verdict("critical_vs_via_g", ok[2], detail);
    let q = (constant.quotient / constant.constant - 1.0).abs();
    rep.verdict("constant_duplication", q <= 1e-12, format!("relative difference {q:e}"));
    Ok(Output::Report(rep))
}

fn characters(rep: &RunReport, c: &CharArgs) -> Res<(DirichletCharacter, DirichletCharacter)> {
    Ok((check(rep, character_by_index(c.level, c.psi_index))?, check(rep, character_by_index(c.chi_modulus, c.chi_index))?))
}

fn char_inputs(rep: &mut RunReport, c: &CharArgs) {
    rep.input("k", c.k)
        .input("N", c.level)
        .input("psi_index", c.psi_index)
        .input("chi_modulus", c.chi_modulus)
        .input("chi_index", c.chi_index);
}

/// Relative disagreement of the two sign halves tolerated before the
/// symmetry verdict fails.
const SYMMETRY_TOL: f64 = 1e-6;

fn kernel_coeff(g: &GlobalOpts, c: &CharArgs, s: Complex64, m: i64) -> Res<Output> {
    let mut rep = RunReport::new("kernel-coeff");
    let t = truncation(g, TruncationConfig::default())?;
    char_inputs(&mut rep, c);
    rep.input("s", complex(s)).input("m", m).input("truncation", trunc_json(&t));
    let (psi, chi) = characters(&rep, c)?;
    let spec = check(&rep, KernelSpec::new(c.k, psi, chi, s, t))?;
    let r = check(&rep, kernel_coeff_general(&spec, m))?;
    rep.output("coefficient", coeff_json(&r.coeff))
        .output("first_term", complex(r.first_term))
        .output("delta_term", complex(r.delta_term))
        .output("symmetry_defect", r.symmetry_defect);
    rep.verdict("stabilized", r.coeff.stabilized, format!("{} terms", r.coeff.terms));
    rep.verdict(
        "sign_symmetry",
        r.symmetry_defect <= SYMMETRY_TOL,
        format!("terms at (a, c) and (-a, -c) differ by {:e} relative", r.symmetry_defect),
    );
    Ok(Output::Report(rep))
}

fn certificate_json(c: &ThresholdCertificate) -> Value {
    json!({
        "value": c.value,
        "worst_delta": c.worst_delta,
        "worst_margin": c.worst_margin,
        "refuted": c.refuted.map(|(v, d)| json!({ "value": v, "delta": d })),
        "skipped": c.skipped,
        "grid_intervals": c.grid_intervals,
    })
}

fn nonvanishing(g: &GlobalOpts, cmd: &NonvanishingCmd) -> Res<Output> {
    match cmd {
        NonvanishingCmd::MinWeight { t0, eps, level, m, h, grid_intervals } => {
            let mut rep = RunReport::new("nonvanishing min-weight");
            rep.input("t0", t0).input("eps", eps).input("N", level).input("m", m).input("h", h).input("grid_intervals", grid_intervals);
            let c = check(&rep, min_weight_on_grid(*t0, *eps, *level, *m, *h, *grid_intervals))?;
            rep.output("certificate", certificate_json(&c));
            rep.verdict("certified", true, format!("weight {} certified on the whole grid", c.value));
            Ok(Output::Report(rep))
        }
        NonvanishingCmd::MinLevel { t0, eps, k, m, h, grid_intervals } => {
            let mut rep = RunReport::new("nonvanishing min-level");
            rep.input("t0", t0).input("eps", eps).input("k", k).input("m", m).input("h", h).input("grid_intervals", grid_intervals);
            let c = check(&rep, min_level_on_grid(*t0, *eps, *k, *m, *h, *grid_intervals))?;
            rep.output("certificate", certificate_json(&c));
            rep.verdict("certified", true, format!("level {} certified on the whole grid", c.value));
            Ok(Output::Report(rep))
        }
        NonvanishingCmd::Breakdown { k, level, h, m, delta, t0, right } => {
            let mut rep = RunReport::new("nonvanishing breakdown");
            rep.input("k", k).input("N", level).input("h", h).input("m", m).input("delta", delta).input("t0", t0).input("right", right);
            let f = if *right { estimate_breakdown_right } else { estimate_breakdown };
            let b = check(&rep, f(*k, *level, *h, *m, *delta, *t0))?;
            let sigma = *k as f64 / 2.0 + if *right { *delta } else { -*delta };
            rep.output("s0", complex(Complex64::new(sigma, -*t0)))
                .output("lhs", b.lhs)
                .output("summand1", b.summand1)
                .output("summand2_bound", b.summand2_bound)
                .output("margin", b.margin());
            rep.verdict("nonvanishing_certified", b.verdict, format!("lhs {:e} vs {:e}", b.lhs, b.summand1 + b.summand2_bound));
            Ok(Output::Report(rep))
        }
        NonvanishingCmd::Scan { chars, m, t0, lo, hi, step, threshold, csv } => {
            let mut rep = RunReport::new("nonvanishing scan");
            let t = truncation(g, TruncationConfig::default())?;
            char_inputs(&mut rep, chars);
            rep.input("m", m)
                .input("t0", t0)
                .input("lo", lo)
                .input("hi", hi)
                .input("step", step)
                .input("threshold", threshold)
                .input("truncation", trunc_json(&t));
            let (psi, chi) = characters(&rep, chars)?;
            let pts = check(&rep, zero_scan(chars.k, &psi, &chi, &t, *m, *t0, (*lo, *hi), *step, *threshold))?;
            let flagged = pts.iter().filter(|p| p.flagged).count();
            let rows: Vec<Value> = pts
                .iter()
                .map(|p| json!({ "sigma": p.sigma, "coeff": complex(p.value), "abs": p.abs, "error": p.error, "flagged": p.flagged }))
                .collect();
            rep.output("points", rows).output("flagged", flagged);
            rep.verdict("no_zero_flagged", flagged == 0, format!("{flagged} of {} points flagged", pts.len()));
            if *csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Failure::Usage(format!("csv: {e}"));
                w.write_record(["sigma", "coeff_re", "coeff_im", "abs", "err"]).map_err(io)?;
                for p in &pts {
                    w.serialize((p.sigma, p.value.re, p.value.im, p.abs, p.error)).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Failure::Usage(format!("csv: {e}")))?;
                return Ok(Output::Csv(String::from_utf8(bytes).expect("csv is utf-8"), rep));
            }
            Ok(Output::Report(rep))
        }
    }
}
