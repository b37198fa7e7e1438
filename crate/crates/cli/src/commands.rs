use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use vgit_check::acceptance::{run_all, run_criterion, CriterionReport};
use vgit_check::oracle;
use vgit_core::fiber::{
    build_family, normal_form, weighted_compare, ContainmentFamily, FiberError, WeightedPoint, AUTOMORPHISM_HYPOTHESIS,
};
use vgit_core::hm::{
    default_coordinate_changes, destabilizer_search, is_torus_semistable_with, limit_pair, mu, mu_pair,
    semistable_interval, wall_scan, wall_scan_default, Certificate, HmConfig, HmError, OnePs, Pair, PairConfig,
    StabilityVerdict, TorusStatus,
};
use vgit_core::jacobian::{
    classify_point, gorenstein_pairing_rank_with, graded_dim_report, hodge_primitive_with,
    intermediate_jacobian_dim_with, is_smooth_with, socle_degree, JacobianConfig, JacobianError, RankReport,
    SingularityClass,
};
use vgit_core::linalg::LinalgError;
use vgit_core::poly::{infer_nvars, parse_poly};
use vgit_core::scalar::{fmt_rational, parse_rational};
use vgit_core::{ExactMatrix, Field, Polynomial, Scalar};

use crate::report::Report;
use crate::{Cmd, Common, CliError, PairArgs};

type Done = Result<(Report, Option<bool>), CliError>;

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn hm_err(e: HmError) -> CliError {
    match e {
        HmError::Linalg(LinalgError::PivotBudget(_)) => CliError::Budget(e.to_string()),
        other => input(other),
    }
}

fn jac_err(e: JacobianError) -> CliError {
    match e {
        JacobianError::ExactBudget { .. } => CliError::Budget(e.to_string()),
        other => input(other),
    }
}

fn fib_err(e: FiberError) -> CliError {
    match e {
        FiberError::Linalg(LinalgError::PivotBudget(_)) => CliError::Budget(e.to_string()),
        other => input(other),
    }
}

struct Ctx<'a> {
    common: &'a Common,
    field: Field,
}

impl<'a> Ctx<'a> {
    fn new(common: &'a Common) -> Result<Self, CliError> {
        let field = match common.field.trim() {
            "Q" | "q" => Field::Rational,
            p => {
                let p: u64 = p.parse().map_err(|_| input(format!("field must be Q or a prime, got {p}")))?;
                Field::prime(p).map_err(input)?
            }
        };
        Ok(Ctx { common, field })
    }

    fn nvars(&self, texts: &[&str]) -> usize {
        self.common
            .nvars
            .unwrap_or_else(|| texts.iter().map(|t| infer_nvars(t)).max().unwrap_or(1))
    }

    fn poly(&self, text: &str, n: usize) -> Result<Polynomial, CliError> {
        parse_poly(text, n, self.field).map_err(input)
    }

    fn rational_poly(&self, text: &str, n: usize) -> Result<Polynomial, CliError> {
        if self.field != Field::Rational {
            return Err(input("fiber commands work over Q"));
        }
        self.poly(text, n)
    }

    fn hm(&self) -> HmConfig {
        let mut c = HmConfig::default();
        if let Some(b) = self.common.pivot_budget {
            c.pivot_budget = b;
        }
        c
    }

    fn jac(&self) -> JacobianConfig {
        let mut c = JacobianConfig::default();
        if let Some(p) = &self.common.primes {
            c.primes = p.clone();
        }
        if let Some(l) = self.common.exact_limit {
            c.exact_limit = l;
        }
        c
    }

    fn report(&self, command: &str, n: usize) -> Report {
        let mut r = Report::new(command);
        r.input("field", self.field.to_string());
        r.input("nvars", n);
        r
    }

    fn pair(&self, args: &PairArgs) -> Result<(Pair, usize), CliError> {
        let n = self.nvars(&[&args.y, &args.h]);
        let y = self.poly(&args.y, n)?;
        let h = self.poly(&args.h, n)?;
        Ok((Pair::new(y, h).map_err(hm_err)?, n))
    }
}

fn rational(text: &str, what: &str) -> Result<BigRational, CliError> {
    parse_rational(text).ok_or_else(|| input(format!("{what}: expected p or p/q, got {text:?}")))
}

fn weights(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| input(format!("bad weight {s:?} in {text:?}"))))
        .collect()
}

fn one_ps(text: &str, n: usize) -> Result<OnePs, CliError> {
    let w = weights(text)?;
    if w.len() != n {
        return Err(hm_err(HmError::Length { expected: n, got: w.len() }));
    }
    OnePs::new(w).map_err(hm_err)
}

fn rats(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(fmt_rational(q))).collect())
}

fn matrix_json(m: &ExactMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|s| Value::String(s.to_string())).collect()))
            .collect(),
    )
}

fn rank_json(r: &RankReport) -> Value {
    json!({ "rank": r.rank, "rows": r.rows, "cols": r.cols, "witness": r.witness.to_string() })
}

fn exponents(f: &Polynomial) -> Vec<Vec<i64>> {
    f.support().map(|m| m.exponents().iter().map(|&e| e as i64).collect()).collect()
}

fn barycenter(cfg: &PairConfig) -> Vec<BigRational> {
    let n = cfg.nvars();
    let c = (BigRational::from_integer(cfg.y().degree().into()) + cfg.t()) / BigRational::from_integer(n.into());
    vec![c; n]
}

/// Re-checks a torus verdict with the oracle's dot products.
fn oracle_verdict_ok(cfg: &PairConfig, v: &StabilityVerdict) -> bool {
    match (&v.certificate, v.status) {
        (Certificate::Destabilizer(l), TorusStatus::TorusUnstable) => {
            let pts = oracle::scaled_state_points(cfg.y(), cfg.h(), cfg.t());
            l.weights().iter().sum::<i64>() == 0 && !l.is_trivial() && oracle::max_pairing(&pts, l.weights()) < 0
        }
        (Certificate::Hull(c), status) if status != TorusStatus::TorusUnstable => {
            let pts = oracle::state_points(cfg.y(), cfg.h(), cfg.t());
            let stable = status == TorusStatus::TorusStable;
            oracle::verify_convex_combination(&pts, c, &barycenter(cfg), stable)
                && (!stable || oracle::affine_rank(&pts) == cfg.nvars() - 1)
        }
        _ => false,
    }
}

fn verdict_fields(r: &mut Report, v: &StabilityVerdict) {
    r.result("status", v.status.to_string());
    match &v.certificate {
        Certificate::Destabilizer(l) => r.cert("lambda", l.to_string()),
        Certificate::Hull(c) => r.cert("hull_coefficients", rats(c)),
    }
}

fn pair_inputs(r: &mut Report, pair: &Pair) {
    r.input("Y", pair.y().to_string());
    r.input("H", pair.h().to_string());
}

pub(crate) fn dispatch(cmd: &Cmd, common: &Common) -> Done {
    let ctx = Ctx::new(common)?;
    match cmd {
        Cmd::Mu { f, lambda } => cmd_mu(&ctx, f, lambda),
        Cmd::MuPair { pair, t, lambda } => cmd_mu_pair(&ctx, pair, t, lambda),
        Cmd::TorusStab { pair, t } => cmd_torus_stab(&ctx, pair, t),
        Cmd::Destab { pair, t } => cmd_destab(&ctx, pair, t),
        Cmd::Limit { pair, lambda, t } => cmd_limit(&ctx, pair, lambda, t),
        Cmd::WallScan {
            pair,
            t_lo,
            t_hi,
            bound,
            candidates,
        } => cmd_wall_scan(&ctx, pair, t_lo, t_hi, *bound, candidates.as_deref()),
        Cmd::Jring { f, k } => cmd_jring(&ctx, f, *k),
        Cmd::Smooth { f } => cmd_smooth(&ctx, f),
        Cmd::Hodge { f, p } => cmd_hodge(&ctx, f, *p),
        Cmd::IjDim { f } => cmd_ij_dim(&ctx, f),
        Cmd::Pairing { f, a } => cmd_pairing(&ctx, f, *a),
        Cmd::ClassifyPoint { f, point } => cmd_classify(&ctx, f, point),
        Cmd::FiberBuild { f3 } => cmd_fiber_build(&ctx, f3),
        Cmd::FiberNormalForm { f3, y } => cmd_fiber_normal_form(&ctx, f3, y),
        Cmd::FiberEqual { f3, y, z } => cmd_fiber_equal(&ctx, f3, y, z),
        Cmd::Selftest { seed, criteria } => cmd_selftest(*seed, criteria.as_deref()),
    }
}

fn finish(ctx: &Ctx, r: Report, check: impl FnOnce() -> bool) -> Done {
    let verified = ctx.common.verify.then(check);
    Ok((r, verified))
}

fn cmd_mu(ctx: &Ctx, f: &str, lambda: &str) -> Done {
    let n = ctx.nvars(&[f]);
    let f = ctx.poly(f, n)?;
    let l = one_ps(lambda, n)?;
    let value = mu(&f, &l).map_err(hm_err)?;
    let mut r = ctx.report("mu", n);
    r.input("f", f.to_string());
    r.input("lambda", l.to_string());
    r.result("mu", value);
    finish(ctx, r, || oracle::max_pairing(&exponents(&f), l.weights()) == value)
}

fn cmd_mu_pair(ctx: &Ctx, args: &PairArgs, t: &str, lambda: &str) -> Done {
    let (pair, n) = ctx.pair(args)?;
    let t = rational(t, "t")?;
    let l = one_ps(lambda, n)?;
    let cfg = pair.at(t.clone()).map_err(hm_err)?;
    let value = mu_pair(&cfg, &l).map_err(hm_err)?;
    let mut r = ctx.report("mu-pair", n);
    pair_inputs(&mut r, &pair);
    r.input("t", fmt_rational(&t));
    r.input("lambda", l.to_string());
    r.result("mu_pair", fmt_rational(&value));
    finish(ctx, r, || {
        let pts = oracle::scaled_state_points(cfg.y(), cfg.h(), cfg.t());
        let q = BigRational::from_integer(t.denom().clone());
        BigRational::from_integer(oracle::max_pairing(&pts, l.weights()).into()) == value * q
    })
}

fn cmd_torus_stab(ctx: &Ctx, args: &PairArgs, t: &str) -> Done {
    let (pair, n) = ctx.pair(args)?;
    let t = rational(t, "t")?;
    let cfg = pair.at(t.clone()).map_err(hm_err)?;
    let v = is_torus_semistable_with(&cfg, &ctx.hm()).map_err(hm_err)?;
    let mut r = ctx.report("torus-stab", n);
    pair_inputs(&mut r, &pair);
    r.input("t", fmt_rational(&t));
    verdict_fields(&mut r, &v);
    if let Certificate::Destabilizer(l) = &v.certificate {
        r.cert("mu_pair", fmt_rational(&mu_pair(&cfg, l).map_err(hm_err)?));
    } else {
        r.note("hull coefficients are indexed by state points: support of Y greatest first, then variables of H");
    }
    finish(ctx, r, || oracle_verdict_ok(&cfg, &v))
}

fn cmd_destab(ctx: &Ctx, args: &PairArgs, t: &str) -> Done {
    let (pair, n) = ctx.pair(args)?;
    let t = rational(t, "t")?;
    let cfg = pair.at(t.clone()).map_err(hm_err)?;
    let changes = default_coordinate_changes(&cfg).map_err(hm_err)?;
    let found = destabilizer_search(&cfg, &changes).map_err(hm_err)?;
    let mut r = ctx.report("destab", n);
    pair_inputs(&mut r, &pair);
    r.input("t", fmt_rational(&t));
    r.result("candidates_tried", changes.len());
    let Some((m, l)) = found else {
        r.result("found", false);
        r.note("torus-semistable in every default coordinate system");
        return finish(ctx, r, || true);
    };
    let moved = pair.transform(&m).map_err(hm_err)?.at(t).map_err(hm_err)?;
    r.result("found", true);
    r.result("Y_moved", moved.y().to_string());
    r.result("H_moved", moved.h().to_string());
    r.cert("matrix", matrix_json(&m));
    r.cert("lambda", l.to_string());
    r.cert("mu_pair", fmt_rational(&mu_pair(&moved, &l).map_err(hm_err)?));
    r.note("coordinate change acts by f(x) -> f(x M)");
    finish(ctx, r, || {
        let pts = oracle::scaled_state_points(moved.y(), moved.h(), moved.t());
        l.weights().iter().sum::<i64>() == 0 && oracle::max_pairing(&pts, l.weights()) < 0
    })
}

/// Terms of `f` of maximal `lambda`-weight, recomputed from the exponent list.
fn initial_form_ok(f: &Polynomial, f0: &Polynomial, l: &[i64]) -> bool {
    let top = oracle::max_pairing(&exponents(f), l);
    let mut count = 0;
    for (m, c) in f.terms() {
        let w: i64 = m.exponents().iter().zip(l).map(|(&e, &x)| e as i64 * x).sum();
        if w == top {
            count += 1;
            if f0.coeff(m) != *c {
                return false;
            }
        }
    }
    count == f0.num_terms()
}

fn cmd_limit(ctx: &Ctx, args: &PairArgs, lambda: &str, t: &str) -> Done {
    let (pair, n) = ctx.pair(args)?;
    let t = rational(t, "t")?;
    let l = one_ps(lambda, n)?;
    let cfg = pair.at(t.clone()).map_err(hm_err)?;
    let lim = limit_pair(&cfg, &l).map_err(hm_err)?;
    let mut r = ctx.report("limit", n);
    pair_inputs(&mut r, &pair);
    r.input("lambda", l.to_string());
    r.input("t", fmt_rational(&t));
    r.result("Y0", lim.y().to_string());
    r.result("H0", lim.h().to_string());
    r.result("mu_pair", fmt_rational(&mu_pair(&cfg, &l).map_err(hm_err)?));
    finish(ctx, r, || {
        initial_form_ok(cfg.y(), lim.y(), l.weights()) && initial_form_ok(cfg.h(), lim.h(), l.weights())
    })
}

fn cmd_wall_scan(ctx: &Ctx, args: &PairArgs, t_lo: &str, t_hi: &str, bound: i64, candidates: Option<&str>) -> Done {
    let (pair, n) = ctx.pair(args)?;
    let lo = rational(t_lo, "t-lo")?;
    let hi = rational(t_hi, "t-hi")?;
    let mut hm = ctx.hm();
    hm.candidate_bound = bound;
    let mut r = ctx.report("wall-scan", n);
    pair_inputs(&mut r, &pair);
    r.input("t_lo", fmt_rational(&lo));
    r.input("t_hi", fmt_rational(&hi));
    let walls = match candidates {
        Some(text) => {
            let cands = text.split(';').map(|c| one_ps(c, n)).collect::<Result<Vec<_>, _>>()?;
            r.input("candidates", cands.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";"));
            wall_scan(&pair, &lo, &hi, &cands, &hm)
        }
        None => {
            r.input("bound", bound);
            wall_scan_default(&pair, &lo, &hi, &hm)
        }
    }
    .map_err(hm_err)?;
    r.result(
        "walls",
        Value::Array(
            walls
                .iter()
                .map(|w| {
                    json!({
                        "slope": fmt_rational(&w.slope),
                        "left": w.left.to_string(),
                        "at_wall": w.at_wall.to_string(),
                        "right": w.right.to_string(),
                    })
                })
                .collect(),
        ),
    );
    let interval = semistable_interval(&pair, hm.pivot_budget).map_err(hm_err)?;
    match &interval {
        None => r.result("semistable_interval", "empty"),
        Some((a, b)) => r.result(
            "semistable_interval",
            json!({
                "lo": fmt_rational(a),
                "hi": b.as_ref().map_or("unbounded".to_string(), fmt_rational),
            }),
        ),
    }
    let check = || -> Result<bool, CliError> {
        for w in &walls {
            let cfg = pair.at(w.slope.clone()).map_err(hm_err)?;
            let v = is_torus_semistable_with(&cfg, &hm).map_err(hm_err)?;
            if v.status != w.at_wall || !oracle_verdict_ok(&cfg, &v) {
                return Ok(false);
            }
        }
        if let Some((a, b)) = &interval {
            for s in std::iter::once(a).chain(b.as_ref()) {
                let cfg = pair.at(s.clone()).map_err(hm_err)?;
                let v = is_torus_semistable_with(&cfg, &hm).map_err(hm_err)?;
                if !v.status.is_semistable() || !oracle_verdict_ok(&cfg, &v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    let verified = if ctx.common.verify { Some(check()?) } else { None };
    Ok((r, verified))
}

/// Oracle `dim R^k`, or `None` when the input is not over `Q`.
fn oracle_dim(f: &Polynomial, k: i64) -> Option<usize> {
    if f.field() != Field::Rational {
        return None;
    }
    if k < 0 {
        return Some(0);
    }
    Some(oracle::jacobian_graded_dim(f, k as u32))
}

fn no_oracle_note(r: &mut Report, f: &Polynomial, verify: bool) {
    if verify && f.field() != Field::Rational {
        r.note("the independent rank oracle works over Q; F_p input is reported unverified");
    }
}

fn jacobian_inputs(ctx: &Ctx, command: &str, f: &str) -> Result<(Polynomial, Report), CliError> {
    let n = ctx.nvars(&[f]);
    let f = ctx.poly(f, n)?;
    let mut r = ctx.report(command, n);
    r.input("f", f.to_string());
    Ok((f, r))
}

fn cmd_jring(ctx: &Ctx, f: &str, k: u32) -> Done {
    let (f, mut r) = jacobian_inputs(ctx, "jring", f)?;
    r.input("k", k);
    let (dim, rank) = graded_dim_report(&f, k, &ctx.jac()).map_err(jac_err)?;
    r.result("dim", dim);
    r.cert("rank", rank_json(&rank));
    no_oracle_note(&mut r, &f, ctx.common.verify);
    finish(ctx, r, || oracle_dim(&f, k as i64).is_none_or(|d| d == dim))
}

fn cmd_smooth(ctx: &Ctx, f: &str) -> Done {
    let (f, mut r) = jacobian_inputs(ctx, "smooth", f)?;
    let s = is_smooth_with(&f, &ctx.jac()).map_err(jac_err)?;
    r.result("smooth", s.smooth);
    r.result("socle_degree", s.socle_degree);
    r.cert("rank", rank_json(&s.rank));
    no_oracle_note(&mut r, &f, ctx.common.verify);
    finish(ctx, r, || {
        oracle_dim(&f, s.socle_degree as i64 + 1).is_none_or(|d| (d == 0) == s.smooth)
    })
}

fn hodge_degree(f: &Polynomial, p: u32) -> i64 {
    (p as i64 + 1) * f.degree() as i64 - f.nvars() as i64
}

/// Oracle `dim R^k` for smooth `f`, zero outside `[0, sigma]`.
fn oracle_smooth_dim(f: &Polynomial, k: i64) -> Option<usize> {
    if k > socle_degree(f) as i64 {
        return (f.field() == Field::Rational).then_some(0);
    }
    oracle_dim(f, k)
}

fn cmd_hodge(ctx: &Ctx, f: &str, p: u32) -> Done {
    let (f, mut r) = jacobian_inputs(ctx, "hodge", f)?;
    r.input("p", p);
    let h = hodge_primitive_with(&f, p, &ctx.jac()).map_err(jac_err)?;
    let k = hodge_degree(&f, p);
    r.result("hodge_primitive", h);
    r.result("jacobian_degree", k);
    no_oracle_note(&mut r, &f, ctx.common.verify);
    finish(ctx, r, || oracle_smooth_dim(&f, k).is_none_or(|d| d == h))
}

fn cmd_ij_dim(ctx: &Ctx, f: &str) -> Done {
    let (f, mut r) = jacobian_inputs(ctx, "ij-dim", f)?;
    let dim = intermediate_jacobian_dim_with(&f, &ctx.jac()).map_err(jac_err)?;
    r.result("dim", dim);
    no_oracle_note(&mut r, &f, ctx.common.verify);
    finish(ctx, r, || {
        let m = (f.nvars() as u32 - 1) / 2;
        let mut total = 0;
        for p in m..=2 * m - 1 {
            match oracle_smooth_dim(&f, hodge_degree(&f, p)) {
                Some(d) => total += d,
                None => return true,
            }
        }
        total == dim
    })
}

fn cmd_pairing(ctx: &Ctx, f: &str, a: u32) -> Done {
    let (f, mut r) = jacobian_inputs(ctx, "pairing", f)?;
    r.input("a", a);
    let cfg = ctx.jac();
    let rank = gorenstein_pairing_rank_with(&f, a, &cfg).map_err(jac_err)?;
    let sigma = socle_degree(&f);
    let left = graded_dim_report(&f, a, &cfg).map_err(jac_err)?.0;
    let right = graded_dim_report(&f, sigma - a, &cfg).map_err(jac_err)?.0;
    r.result("rank", rank);
    r.result("dim_left", left);
    r.result("dim_right", right);
    r.result("perfect", rank == left && rank == right);
    r.result("socle_degree", sigma);
    no_oracle_note(&mut r, &f, ctx.common.verify);
    finish(ctx, r, || match (oracle_dim(&f, a as i64), oracle_dim(&f, (sigma - a) as i64)) {
        (Some(l), Some(rr)) => l == left && rr == right && rank <= l.min(rr),
        _ => true,
    })
}

fn parse_point(text: &str, field: Field) -> Result<Vec<Scalar>, CliError> {
    text.split(',')
        .map(|s| {
            let q = rational(s, "point coordinate")?;
            Scalar::from_rational(&q, field).map_err(input)
        })
        .collect()
}

/// Rank of the Hessian at `pt` with row and column `j` removed, over `Q`.
fn oracle_hessian_rank(f: &Polynomial, pt: &[Scalar], j: usize) -> Option<usize> {
    let n = f.nvars();
    let mut rows = Vec::new();
    for a in (0..n).filter(|&a| a != j) {
        let mut row = BTreeMap::new();
        for (c, b) in (0..n).filter(|&b| b != j).enumerate() {
            let v = f.partial_derivative(a).ok()?.partial_derivative(b).ok()?.evaluate(pt).ok()?;
            let q = v.as_rational()?.clone();
            if !q.is_zero() {
                row.insert(c, q);
            }
        }
        rows.push(row);
    }
    Some(oracle::rank_rational(&rows))
}

fn cmd_classify(ctx: &Ctx, f: &str, point: &str) -> Done {
    let (f, mut r) = jacobian_inputs(ctx, "classify-point", f)?;
    let pt = parse_point(point, ctx.field)?;
    let class = classify_point(&f, &pt).map_err(jac_err)?;
    r.input("point", pt.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
    r.result("class", class.to_string());
    if class == SingularityClass::Node && f.nvars() == 7 && f.degree() == 3 {
        r.note("1-nodal cubic fivefold: the degenerate intermediate Jacobian has torus rank 1 over an abelian part of dim 20 (metadata, not computed)");
    }
    no_oracle_note(&mut r, &f, ctx.common.verify);
    finish(ctx, r, || {
        let Some(j) = pt.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        if f.field() != Field::Rational {
            return true;
        }
        let n = f.nvars();
        match class {
            SingularityClass::Node => oracle_hessian_rank(&f, &pt, j) == Some(n - 1),
            SingularityClass::Degenerate(k) => oracle_hessian_rank(&f, &pt, j) == Some(k),
            _ => true,
        }
    })
}

fn family(ctx: &Ctx, f3: &str, others: &[&str]) -> Result<(ContainmentFamily, usize), CliError> {
    let mut texts = vec![f3];
    texts.extend_from_slice(others);
    let n = ctx.nvars(&texts);
    let f3 = ctx.rational_poly(f3, n)?;
    Ok((build_family(&f3).map_err(fib_err)?, n))
}

fn point_json(p: &WeightedPoint) -> Value {
    json!({ "c1": rats(&p.c1), "c2": rats(&p.c2), "c3": fmt_rational(&p.c3), "point": p.to_string() })
}

fn fiber_notes(r: &mut Report) {
    r.note(AUTOMORPHISM_HYPOTHESIS);
}

fn cmd_fiber_build(ctx: &Ctx, f3: &str) -> Done {
    let (fam, n) = family(ctx, f3, &[])?;
    let (a, b, c) = fam.coordinate_ledger();
    let mut r = ctx.report("fiber-build", n);
    r.input("f3", fam.f3().to_string());
    r.result("w2_dim", fam.w2_basis().len());
    r.result("w2_monomials", fam.w2_monomials().iter().map(|m| m.to_string()).collect::<Vec<_>>());
    r.result("coordinate_ledger", format!("{a}+{b}+{c}"));
    let top = if c == 1 { "3".to_string() } else { format!("3^{c}") };
    r.result("weights", format!("(1^{a}, 2^{b}, {top})"));
    r.result("quotient_dim", fam.quotient_dim());
    fiber_notes(&mut r);
    finish(ctx, r, || {
        let rows: Vec<BTreeMap<usize, BigRational>> = (0..fam.partials_matrix().rows())
            .map(|i| {
                fam.partials_matrix()
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !s.is_zero())
                    .map(|(j, s)| (j, s.as_rational().unwrap().clone()))
                    .collect()
            })
            .collect();
        let m = n - 1;
        oracle::rank_rational(&rows) == m && a + m == fam.quadric_monomials().len() && b == m && c == 1
    })
}

/// Oracle comparison for the Fermat family; `None` for any other `f3`.
fn fermat_check(fam: &ContainmentFamily, y: &Polynomial, p: &WeightedPoint) -> Option<bool> {
    let n = fam.nvars();
    if *fam.f3() != Polynomial::fermat(n, 1..n, 3, Field::Rational) {
        return None;
    }
    let (c1, c2, c3) = oracle::fermat_normal_form(y);
    let ok1 = fam.w2_monomials().iter().zip(&p.c1).all(|(m, v)| {
        let idx: Vec<usize> = (1..n).filter(|&i| m.exponents()[i] == 1).collect();
        idx.len() == 2 && c1.get(&(idx[0], idx[1])) == Some(v)
    });
    Some(ok1 && c2 == p.c2 && c3 == p.c3)
}

fn no_fermat_note(r: &mut Report, fam: &ContainmentFamily, verify: bool) {
    let n = fam.nvars();
    if verify && *fam.f3() != Polynomial::fermat(n, 1..n, 3, Field::Rational) {
        r.note("the independent normal-form oracle covers the Fermat family only; reported unverified");
    }
}

fn cmd_fiber_normal_form(ctx: &Ctx, f3: &str, y: &str) -> Done {
    let (fam, n) = family(ctx, f3, &[y])?;
    let y = ctx.rational_poly(y, n)?;
    let p = normal_form(&fam, &y).map_err(fib_err)?;
    let mut r = ctx.report("fiber-normal-form", n);
    r.input("f3", fam.f3().to_string());
    r.input("Y", y.to_string());
    r.result("normal_form", point_json(&p));
    fiber_notes(&mut r);
    no_fermat_note(&mut r, &fam, ctx.common.verify);
    finish(ctx, r, || fermat_check(&fam, &y, &p).unwrap_or(true))
}

fn cmd_fiber_equal(ctx: &Ctx, f3: &str, y: &str, z: &str) -> Done {
    let (fam, n) = family(ctx, f3, &[y, z])?;
    let y = ctx.rational_poly(y, n)?;
    let z = ctx.rational_poly(z, n)?;
    let p = normal_form(&fam, &y).map_err(fib_err)?;
    let q = normal_form(&fam, &z).map_err(fib_err)?;
    let cmp = weighted_compare(&p, &q).map_err(fib_err)?;
    let mut r = ctx.report("fiber-equal", n);
    r.input("f3", fam.f3().to_string());
    r.input("Y", y.to_string());
    r.input("Z", z.to_string());
    r.result("equal", cmp.equal);
    r.result("twist_ambiguous", cmp.twist_ambiguous);
    r.result("normal_form_Y", point_json(&p));
    r.result("normal_form_Z", point_json(&q));
    fiber_notes(&mut r);
    if cmp.twist_ambiguous {
        r.note("equality is over the algebraic closure; all nonzero weights share a factor, so over Q the points may differ by a root-of-unity twist");
    }
    no_fermat_note(&mut r, &fam, ctx.common.verify);
    finish(ctx, r, || {
        fermat_check(&fam, &y, &p).unwrap_or(true) && fermat_check(&fam, &z, &q).unwrap_or(true)
    })
}

fn cmd_selftest(seed: u64, criteria: Option<&[u8]>) -> Done {
    let reports: Vec<CriterionReport> = match criteria {
        None => run_all(seed, |_| {}),
        Some(ids) => {
            if let Some(bad) = ids.iter().find(|&&i| !(1..=10).contains(&i)) {
                return Err(input(format!("criterion {bad} does not exist; use 1..10")));
            }
            ids.iter().map(|&i| run_criterion(i, seed)).collect()
        }
    };
    let passed = reports.iter().filter(|c| c.passed).count();
    let mut r = Report::new("selftest");
    r.input("seed", seed);
    r.result("criteria", reports.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    r.result("passed", format!("{passed}/{}", reports.len()));
    if passed != reports.len() {
        r.exit_code = 1;
    }
    r.note("criterion lines include wall-clock times");
    Ok((r, None))
}
