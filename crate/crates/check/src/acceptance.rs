//! The acceptance criteria, each returning one pass/fail line.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vgit_core::fiber::{build_family, group_act, normal_form, weighted_equal, FiberError, GroupElement};
use vgit_core::hm::{
    is_torus_semistable, limit_pair, mu, mu_pair, wall_scan_default, Certificate, HmConfig, OnePs, Pair,
    PairConfig, TorusStatus,
};
use vgit_core::jacobian::{
    classify_point, graded_dim, graded_dim_report, intermediate_jacobian_dim, is_smooth, multiplication_rows,
    sparse_rank, JacobianConfig, RankWitness, SingularityClass,
};
use vgit_core::poly::binomial;
use vgit_core::{parse_poly, Field, Polynomial, Scalar};

use crate::oracle;
use crate::random;

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {} ({:.3}s of {}s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs_f64(),
            self.detail
        )
    }
}

pub const TITLES: [&str; 10] = [
    "mu_pair at t = 1/2 - eps is -6 eps",
    "wall at t = 1/2",
    "one-parameter limit is the cone",
    "Jacobian ring dimensions",
    "binomial Hilbert series of smooth cubics",
    "intermediate Jacobian dimensions",
    "weighted projective normal form",
    "cone exclusion",
    "singularity classification",
    "torus verdicts match brute force",
];

const BUDGETS_SECS: [f64; 10] = [0.005, 10.0, 1.0, 300.0, 120.0, 10.0, 30.0, 1.0, 1.0, 300.0];

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn q7(text: &str) -> Polynomial {
    parse_poly(text, 7, Field::Rational).expect("fixed input parses")
}

fn cone() -> Polynomial {
    Polynomial::fermat(7, 1..7, 3, Field::Rational)
}

fn fermat(n: usize) -> Polynomial {
    Polynomial::fermat(n, 0..n, 3, Field::Rational)
}

fn sigma_inv() -> OnePs {
    OnePs::coordinate(7, 0)
}

fn c1() -> Outcome {
    let y = cone();
    let h = q7("x0");
    let l = sigma_inv();
    ensure!(mu(&y, &l).map_err(err)? == -3, "mu(Y) != -3");
    ensure!(mu(&h, &l).map_err(err)? == 6, "mu(H) != 6");
    let mut slowest = Duration::ZERO;
    for den in [10, 100, 1000] {
        let eps = rat(1, den);
        let pair = PairConfig::new(y.clone(), h.clone(), rat(1, 2) - &eps).map_err(err)?;
        let start = Instant::now();
        let v = mu_pair(&pair, &l).map_err(err)?;
        slowest = slowest.max(start.elapsed());
        ensure!(v == -rat(6, den), "mu_pair at eps = 1/{den} is {v}");
    }
    ensure!(slowest < Duration::from_millis(1), "slowest mu_pair took {slowest:?}");
    Ok(format!("-3/5, -3/50, -3/500 exactly; slowest call {slowest:?}"))
}

fn c2(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
    let h = q7("x0");
    let t = rat(51, 100);
    let axis = sigma_inv().negate();
    let mut axis_count = 0;
    for i in 0..20 {
        let y = random::dense_cubic(&mut rng, 7, Field::Rational);
        let pair = PairConfig::new(y.clone(), h.clone(), t.clone()).map_err(err)?;
        let v = is_torus_semistable(&pair).map_err(err)?;
        ensure!(v.status == TorusStatus::TorusUnstable, "cubic {i}: verdict {}", v.status);
        let Certificate::Destabilizer(l) = &v.certificate else {
            return Err(format!("cubic {i}: no destabilizer"));
        };
        let pts = oracle::scaled_state_points(&y, &h, &t);
        ensure!(l.weights().iter().sum::<i64>() == 0, "cubic {i}: weights not zero-sum");
        ensure!(oracle::max_pairing(&pts, l.weights()) < 0, "cubic {i}: certificate fails");
        if *l == axis {
            axis_count += 1;
        }
    }
    let cfg = HmConfig::default();
    let (lo, hi) = (rat(0, 1), rat(1, 1));
    let mut walls = Vec::new();
    for (name, y) in [("cone", cone()), ("Fermat", fermat(7))] {
        let pair = Pair::new(y, h.clone()).map_err(err)?;
        let w = wall_scan_default(&pair, &lo, &hi, &cfg).map_err(err)?;
        ensure!(w.len() == 1, "{name}: {} walls", w.len());
        ensure!(w[0].slope == rat(1, 2), "{name}: wall at {}", w[0].slope);
        walls.push(format!("{name} {}", w[0]));
    }
    Ok(format!(
        "20/20 unstable at 51/100 ({axis_count} with (-6,1,...,1)); walls: {}",
        walls.join("; ")
    ))
}

fn c3(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
    let f3 = cone();
    let h = q7("x0");
    let l = sigma_inv().negate();
    for i in 0..10 {
        let y = random::family_member(&mut rng, &f3);
        let pair = PairConfig::new(y, h.clone(), rat(1, 2)).map_err(err)?;
        let lim = limit_pair(&pair, &l).map_err(err)?;
        ensure!(*lim.y() == f3 && *lim.h() == h, "choice {i}: limit is ({}, {})", lim.y(), lim.h());
    }
    Ok("10/10 limits equal (f3, x0)".into())
}

fn c4(seed: u64) -> Outcome {
    let start = Instant::now();
    let four = fermat(6);
    let expected4 = [(0, 1), (2, 15), (3, 20), (6, 1), (7, 0)];
    for (k, want) in expected4 {
        let got = graded_dim(&four, k).map_err(err)?;
        ensure!(got == want, "fourfold R^{k} = {got}, expected {want}");
        if k <= 6 {
            let o = oracle::jacobian_graded_dim(&four, k);
            ensure!(o == want, "oracle fourfold R^{k} = {o}");
        }
    }
    let fourfold_time = start.elapsed();
    ensure!(fourfold_time < Duration::from_secs(5), "fourfold cases took {fourfold_time:?}");
    let five = fermat(7);
    for (k, want) in [(2, 21), (5, 21)] {
        let got = graded_dim(&five, k).map_err(err)?;
        ensure!(got == want, "fivefold R^{k} = {got}, expected {want}");
    }
    let cfg = JacobianConfig::default();
    let (dim8, report) = graded_dim_report(&five, 8, &cfg).map_err(err)?;
    ensure!(dim8 == 0, "fivefold R^8 = {dim8}");
    ensure!((report.rows, report.cols) == (6468, 3003), "R^8 matrix is {}x{}", report.rows, report.cols);
    let RankWitness::ModP(p) = report.witness else {
        return Err("R^8 rank not certified modulo a prime".into());
    };
    // exact spot check on 500 random generators
    let (cols, rows) = multiplication_rows(&five, 8).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
    let pick = sample(&mut rng, rows.len(), 500).into_vec();
    let sub: Vec<Vec<(usize, Scalar)>> = pick.iter().map(|&i| rows[i].clone()).collect();
    let q_rows: Vec<BTreeMap<usize, BigRational>> = sub
        .iter()
        .map(|r| r.iter().map(|(c, s)| (*c, s.as_rational().unwrap().clone())).collect())
        .collect();
    let exact = oracle::rank_rational(&q_rows);
    let dense: Vec<Vec<u64>> = q_rows
        .iter()
        .map(|r| {
            let mut v = vec![0u64; cols];
            for (c, x) in r {
                v[*c] = (x.numer() % BigInt::from(p)).to_i64().unwrap().rem_euclid(p as i64) as u64;
            }
            v
        })
        .collect();
    let modular = oracle::rank_mod_p(&dense, p as u64);
    let core = sparse_rank(&sub, cols, Field::Rational, &cfg).map_err(err)?.rank;
    ensure!(
        exact == modular && modular == core,
        "spot check ranks differ: Q {exact}, mod {p} {modular}, core {core}"
    );
    Ok(format!(
        "fourfold 1,15,20,1,0 in {:.2}s; fivefold 21,21,0 (6468x3003, full rank mod {p}); 500-row spot check rank {exact} over Q and mod {p}",
        fourfold_time.as_secs_f64()
    ))
}

fn c5(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
    let field = Field::Prime(32003);
    let mut checked = 0;
    let mut rejected = 0;
    for (n, count) in [(6usize, 16), (7usize, 4)] {
        let mut done = 0;
        while done < count {
            let f = random::dense_cubic(&mut rng, n, field);
            let s = is_smooth(&f).map_err(err)?;
            if !s.smooth {
                rejected += 1;
                ensure!(rejected < 10, "too many singular draws");
                continue;
            }
            let sigma = s.socle_degree as usize;
            let dims: Vec<usize> = (0..=n as u32).map(|k| graded_dim(&f, k)).collect::<Result<_, _>>().map_err(err)?;
            for k in 0..=n {
                ensure!(
                    dims[k] as u64 == binomial(n as u64, k as u64),
                    "{n} vars: R^{k} = {} != C({n},{k})",
                    dims[k]
                );
                ensure!(dims[k] == dims[sigma - k], "{n} vars: R^{k} != R^{}", sigma - k);
            }
            done += 1;
            checked += 1;
        }
    }
    Ok(format!("{checked} smooth cubics over F_32003 (16 in 6 vars, 4 in 7 vars), {rejected} singular draws skipped"))
}

fn c6() -> Outcome {
    let five = intermediate_jacobian_dim(&fermat(7)).map_err(err)?;
    ensure!(five == 21, "fivefold: {five}");
    let three = intermediate_jacobian_dim(&fermat(5)).map_err(err)?;
    let oracle_three = oracle::jacobian_graded_dim(&fermat(5), 4);
    ensure!(three == 5 && oracle_three == 5, "threefold: {three} (oracle R^4 = {oracle_three})");
    Ok("fivefold 21, threefold 5".into())
}

fn c7(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
    let f3 = cone();
    let fam = build_family(&f3).map_err(err)?;
    let w2 = fam.w2_monomials();
    ensure!(w2.len() == 15, "|W2| = {}", w2.len());
    ensure!(w2.iter().all(|m| m.is_square_free()), "W2 not the square-free quadrics");
    let (a, b, c) = fam.coordinate_ledger();
    ensure!((a, b, c) == (15, 6, 1) && a + b + c == 22 && fam.quotient_dim() == 21, "ledger {a}+{b}+{c}");

    for i in 0..100 {
        let y = random::family_member(&mut rng, &f3);
        let g = random::group_element(&mut rng, 6);
        let p = normal_form(&fam, &y).map_err(err)?;
        let gy = group_act(&g, &y).map_err(err)?;
        let q = normal_form(&fam, &gy).map_err(err)?;
        ensure!(weighted_equal(&p, &q).map_err(err)?, "pair {i}: normal forms differ");
    }
    for i in 0..5 {
        let y = random::family_member(&mut rng, &f3);
        let p = normal_form(&fam, &y).map_err(err)?;
        for t in [2, 3] {
            let g = GroupElement::new(vec![BigRational::zero(); 6], rat(t, 1)).map_err(err)?;
            let q = normal_form(&fam, &group_act(&g, &y).map_err(err)?).map_err(err)?;
            let ok = q.c1.iter().zip(&p.c1).all(|(x, y)| *x == y * rat(t, 1))
                && q.c2.iter().zip(&p.c2).all(|(x, y)| *x == y * rat(t * t, 1))
                && q.c3 == &p.c3 * rat(t * t * t, 1);
            ensure!(ok, "sample {i}: weight law fails at t = {t}");
        }
    }
    // pinned against the dense-substitution oracle
    let y = f3.add(&q7("x0*x1^2")).map_err(err)?;
    let p = normal_form(&fam, &y).map_err(err)?;
    let (oc1, oc2, oc3) = oracle::fermat_normal_form(&y);
    for (m, v) in w2.iter().zip(&p.c1) {
        let idx: Vec<usize> = (1..7).filter(|&i| m.exponents()[i] == 1).collect();
        ensure!(oc1[&(idx[0], idx[1])] == *v, "c1 mismatch at {m}");
    }
    ensure!(oc2 == p.c2 && oc3 == p.c3, "c2/c3 mismatch: {p}");
    Ok(format!("|W2| = 15, 15+6+1 = 22, 100/100 invariant, weights (t,t^2,t^3) at t = 2,3; f3 + x0*x1^2 -> {p}"))
}

fn c8() -> Outcome {
    let fam = build_family(&cone()).map_err(err)?;
    ensure!(
        normal_form(&fam, &cone()) == Err(FiberError::ConeOrbit),
        "normal_form(f3) did not report the cone orbit"
    );
    let e6: Vec<BigInt> = (0..6).map(|i| BigInt::from((i == 5) as i64)).collect();
    match build_family(&Polynomial::fermat(7, 1..6, 3, Field::Rational)) {
        Err(FiberError::ConeDirection { kernel }) if kernel == e6 => {}
        other => return Err(format!("x1^3+...+x5^3 gave {other:?}")),
    }
    Ok("ConeOrbit for f3; ConeDirection (0,0,0,0,0,1) for x1^3+...+x5^3".into())
}

fn c9() -> Outcome {
    let origin: Vec<Scalar> = (0..7).map(|i| Scalar::from_i64((i == 0) as i64, Field::Rational)).collect();
    let nodal = q7("x0*x1^2+x0*x2^2+x0*x3^2+x0*x4^2+x0*x5^2+x0*x6^2 + x1^3+x2^3+x3^3+x4^3+x5^3+x6^3");
    let a = classify_point(&nodal, &origin).map_err(err)?;
    ensure!(a == SingularityClass::Node, "nodal example: {a}");
    let degenerate = q7("x0*x1^2 + x2^3+x3^3+x4^3+x5^3+x6^3");
    let b = classify_point(&degenerate, &origin).map_err(err)?;
    ensure!(b == SingularityClass::Degenerate(1), "degenerate example: {b}");
    Ok("Node and Degenerate(1) at [1:0:...:0]".into())
}

fn c10(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 10);
    let mut counts = [0usize; 3];
    for i in 0..50 {
        let (y, h, t) = random::small_pair(&mut rng, 7);
        let pair = PairConfig::new(y.clone(), h.clone(), t.clone()).map_err(err)?;
        let v = is_torus_semistable(&pair).map_err(err)?;
        let scaled = oracle::scaled_state_points(&y, &h, &t);
        let brute = oracle::brute_force_destabilizer(&scaled, 20);
        match (&v.status, &v.certificate) {
            (TorusStatus::TorusUnstable, Certificate::Destabilizer(l)) => {
                ensure!(brute.is_some(), "pair {i} ({y}, {h}, {t}): core unstable, no destabilizer in the box");
                ensure!(
                    l.weights().iter().sum::<i64>() == 0 && oracle::max_pairing(&scaled, l.weights()) < 0,
                    "pair {i}: core certificate fails"
                );
                counts[2] += 1;
            }
            (status, Certificate::Hull(c)) => {
                ensure!(brute.is_none(), "pair {i} ({y}, {h}, {t}): core {status}, brute force found {:?}", brute);
                let pts = oracle::state_points(&y, &h, &t);
                let n = BigRational::from_integer(7.into());
                let bc = (BigRational::from_integer(3.into()) + &t) / n;
                let strict = *status == TorusStatus::TorusStable;
                ensure!(
                    oracle::verify_convex_combination(&pts, c, &vec![bc; 7], strict),
                    "pair {i}: hull certificate fails"
                );
                if strict {
                    ensure!(oracle::affine_rank(&pts) == 6, "pair {i}: stable but hull not full-dimensional");
                    counts[0] += 1;
                } else {
                    ensure!(
                        !c.iter().all(|x| x.is_positive()) || oracle::affine_rank(&pts) < 6,
                        "pair {i}: strictly semistable with an interior certificate"
                    );
                    counts[1] += 1;
                }
            }
            _ => return Err(format!("pair {i}: verdict and certificate disagree")),
        }
    }
    Ok(format!(
        "50/50 agree ({} stable, {} strictly semistable, {} unstable)",
        counts[0], counts[1], counts[2]
    ))
}

pub fn run_criterion(id: u8, seed: u64) -> CriterionReport {
    let start = Instant::now();
    let outcome = match id {
        1 => c1(),
        2 => c2(seed),
        3 => c3(seed),
        4 => c4(seed),
        5 => c5(seed),
        6 => c6(),
        7 => c7(seed),
        8 => c8(),
        9 => c9(),
        10 => c10(seed),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let idx = (id as usize).clamp(1, 10) - 1;
    let budget = Duration::from_secs_f64(BUDGETS_SECS[idx]);
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if passed && elapsed > budget {
        passed = false;
        detail = format!("over the time budget; {detail}");
    }
    CriterionReport {
        id,
        title: TITLES[idx],
        passed,
        detail,
        elapsed,
        budget,
    }
}

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Runs every criterion, printing each line as it finishes.
pub fn run_all(seed: u64, mut sink: impl FnMut(&CriterionReport)) -> Vec<CriterionReport> {
    (1..=10)
        .map(|id| {
            let r = run_criterion(id, seed);
            sink(&r);
            r
        })
        .collect()
}

