//! Hilbert-Mumford weights of diagonal one-parameter subgroups on
//! (hypersurface, hyperplane) pairs, torus stability with certificates,
//! one-parameter limits and wall scanning in the VGIT slope.
//!
//! Conventions: `mu(f, lambda)` is the maximum of `<lambda, m>` over the
//! support of `f`, and the limit under `lambda` keeps the monomials attaining
//! that maximum. With these, the cone `f3(x1..x6)` with `H = x0` has
//! `mu = -3` and `mu(H) = 6` under `(6,-1,...,-1)`, and `(-6,1,...,1)`
//! degenerates `f3 + x0*f2 + ...` to `f3`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::hull::{hull_membership_with_budget, max_min_coefficient};
use crate::linalg::simplex::{minimize, LpOutcome, DEFAULT_PIVOT_BUDGET};
use crate::linalg::{affine_rank, ExactMatrix, HullResult, LinalgError};
use crate::poly::{PolyError, Polynomial};
use crate::scalar::{fmt_rational, Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HmError {
    #[error("Hilbert-Mumford weight of the zero polynomial")]
    ZeroPolynomial,
    #[error("weight vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("weights of a one-parameter subgroup of SL must sum to zero (sum is {0})")]
    NotZeroSum(i64),
    #[error("invalid pair: {0}")]
    InvalidPair(String),
    #[error("no nontrivial candidate one-parameter subgroups")]
    EmptyCandidates,
    #[error("invalid slope range: need t_lo < t_hi")]
    InvalidRange,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Integer weights of a diagonal one-parameter subgroup of `SL_n`.
///
/// Weights are kept as given; `lambda` and `k*lambda` are distinct values.
/// Certificates produced by this module are always [`OnePs::primitive`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OnePs(Vec<i64>);

impl OnePs {
    pub fn new(weights: Vec<i64>) -> Result<Self, HmError> {
        let s: i64 = weights.iter().sum();
        if s != 0 {
            return Err(HmError::NotZeroSum(s));
        }
        Ok(OnePs(weights))
    }

    pub fn trivial(n: usize) -> Self {
        OnePs(vec![0; n])
    }

    /// `n*e_i - (1,...,1)`, the subgroup scaling one coordinate against the rest.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut w = vec![-1; n];
        w[i] = n as i64 - 1;
        OnePs(w)
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn primitive(&self) -> Self {
        let g = self.0.iter().fold(0i64, |g, &w| g.gcd(&w));
        if g <= 1 {
            return self.clone();
        }
        OnePs(self.0.iter().map(|w| w / g).collect())
    }

    pub fn negate(&self) -> Self {
        OnePs(self.0.iter().map(|w| -w).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        OnePs(self.0.iter().map(|w| w * k).collect())
    }

    /// Relabels coordinates: the weight of `x_i` moves to `x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut w = vec![0; self.0.len()];
        for (i, &j) in perm.iter().enumerate() {
            w[j] = self.0[i];
        }
        OnePs(w)
    }
}

impl fmt::Display for OnePs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// `max <lambda, m>` over the support of `f`.
pub fn mu(f: &Polynomial, lambda: &OnePs) -> Result<i64, HmError> {
    if lambda.len() != f.nvars() {
        return Err(HmError::Length {
            expected: f.nvars(),
            got: lambda.len(),
        });
    }
    f.support()
        .map(|m| m.weight(lambda.weights()))
        .max()
        .ok_or(HmError::ZeroPolynomial)
}

/// A hypersurface with a hyperplane, without a chosen slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    y: Polynomial,
    h: Polynomial,
}

impl Pair {
    pub fn new(y: Polynomial, h: Polynomial) -> Result<Self, HmError> {
        if y.is_zero() || h.is_zero() {
            return Err(HmError::InvalidPair("both forms must be nonzero".into()));
        }
        if h.degree() != 1 {
            return Err(HmError::InvalidPair(format!("H has degree {}, expected 1", h.degree())));
        }
        if y.degree() == 0 {
            return Err(HmError::InvalidPair("Y must have positive degree".into()));
        }
        if y.nvars() != h.nvars() {
            return Err(HmError::InvalidPair(format!(
                "Y has {} variables, H has {}",
                y.nvars(),
                h.nvars()
            )));
        }
        y.field()
            .ensure_same(h.field())
            .map_err(|e| HmError::InvalidPair(e.to_string()))?;
        Ok(Pair { y, h })
    }

    pub fn y(&self) -> &Polynomial {
        &self.y
    }

    pub fn h(&self) -> &Polynomial {
        &self.h
    }

    pub fn nvars(&self) -> usize {
        self.y.nvars()
    }

    pub fn at(&self, t: BigRational) -> Result<PairConfig, HmError> {
        if t.is_negative() {
            return Err(HmError::InvalidPair("slope must be non-negative".into()));
        }
        Ok(PairConfig { pair: self.clone(), t })
    }

    pub fn transform(&self, m: &ExactMatrix) -> Result<Pair, HmError> {
        Ok(Pair {
            y: self.y.substitute_linear(m)?,
            h: self.h.substitute_linear(m)?,
        })
    }
}

/// A pair `(Y, H)` with linearization slope `t = b/a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairConfig {
    pair: Pair,
    t: BigRational,
}

impl PairConfig {
    pub fn new(y: Polynomial, h: Polynomial, t: BigRational) -> Result<Self, HmError> {
        Pair::new(y, h)?.at(t)
    }

    pub fn y(&self) -> &Polynomial {
        &self.pair.y
    }

    pub fn h(&self) -> &Polynomial {
        &self.pair.h
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn pair(&self) -> &Pair {
        &self.pair
    }

    pub fn nvars(&self) -> usize {
        self.pair.nvars()
    }

    /// Points `m + t*e_i` over `m` in supp(Y) and `x_i` in supp(H), greatest first.
    pub fn state_points(&self) -> Vec<Vec<BigRational>> {
        let hvars: Vec<usize> = self
            .h()
            .support()
            .map(|m| m.exponents().iter().position(|&e| e == 1).unwrap())
            .collect();
        let mut out = Vec::new();
        for m in self.y().support() {
            for &i in &hvars {
                let mut p: Vec<BigRational> = m
                    .exponents()
                    .iter()
                    .map(|&e| BigRational::from_integer(e.into()))
                    .collect();
                p[i] += &self.t;
                out.push(p);
            }
        }
        out
    }

    /// `((deg Y + t)/n) * (1,...,1)`, the point every zero-sum weight kills.
    pub fn barycenter(&self) -> Vec<BigRational> {
        let n = self.nvars();
        let v = (BigRational::from_integer(self.y().degree().into()) + &self.t) / BigRational::from_integer(n.into());
        vec![v; n]
    }
}

/// `mu(Y, lambda) + t * mu(H, lambda)`.
pub fn mu_pair(pair: &PairConfig, lambda: &OnePs) -> Result<BigRational, HmError> {
    let my = mu(pair.y(), lambda)?;
    let mh = mu(pair.h(), lambda)?;
    Ok(BigRational::from_integer(my.into()) + pair.t() * BigRational::from_integer(mh.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TorusStatus {
    TorusStable,
    TorusStrictlySemistable,
    TorusUnstable,
}

impl TorusStatus {
    pub fn is_semistable(self) -> bool {
        self != TorusStatus::TorusUnstable
    }
}

impl fmt::Display for TorusStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorusStatus::TorusStable => "TorusStable",
            TorusStatus::TorusStrictlySemistable => "TorusStrictlySemistable",
            TorusStatus::TorusUnstable => "TorusUnstable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Convex coefficients on [`PairConfig::state_points`] reproducing the barycenter.
    Hull(Vec<BigRational>),
    /// A primitive zero-sum weight vector with `mu_pair < 0`.
    Destabilizer(OnePs),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: TorusStatus,
    pub certificate: Certificate,
}

#[derive(Clone, Copy, Debug)]
pub struct HmConfig {
    pub pivot_budget: usize,
    /// Box bound for default wall-scan candidates.
    pub candidate_bound: i64,
    /// Box bound for the brute-force agreement check.
    pub oracle_bound: i64,
}

impl Default for HmConfig {
    fn default() -> Self {
        HmConfig {
            pivot_budget: DEFAULT_PIVOT_BUDGET,
            candidate_bound: 12,
            oracle_bound: 20,
        }
    }
}

fn integer_zero_sum(functional: &[BigRational]) -> OnePs {
    let n = functional.len();
    let sum: BigRational = functional.iter().sum();
    let nn = BigRational::from_integer(n.into());
    let projected: Vec<BigRational> = functional.iter().map(|x| x * &nn - &sum).collect();
    let ints = crate::linalg::primitive_integer_vector(&projected);
    // primitive_integer_vector normalizes the sign; undo that to keep the direction
    let flip = projected
        .iter()
        .zip(&ints)
        .find(|(q, _)| !q.is_zero())
        .is_some_and(|(q, i)| q.is_negative() != i.is_negative());
    OnePs(
        ints.into_iter()
            .map(|x| {
                let v = x.to_i64().expect("weights fit in i64");
                if flip {
                    -v
                } else {
                    v
                }
            })
            .collect(),
    )
}

/// Torus (semi)stability of the pair with respect to the diagonal torus of `SL_n`.
///
/// Unstable iff the barycenter lies outside the convex hull of the state
/// points; stable iff it lies in the interior relative to the hyperplane of
/// coordinate sum `deg Y + t` (full-dimensional hull and a convex expression
/// with every coefficient positive).
pub fn is_torus_semistable(pair: &PairConfig) -> Result<StabilityVerdict, HmError> {
    is_torus_semistable_with(pair, &HmConfig::default())
}

pub fn is_torus_semistable_with(pair: &PairConfig, config: &HmConfig) -> Result<StabilityVerdict, HmError> {
    let n = pair.nvars();
    let points = pair.state_points();
    let target = pair.barycenter();
    match hull_membership_with_budget(&points, &target, config.pivot_budget)? {
        HullResult::Separated { functional } => {
            let simple = (0..n)
                .flat_map(|i| [OnePs::coordinate(n, i), OnePs::coordinate(n, i).negate()])
                .find(|l| mu_pair(pair, l).is_ok_and(|v| v.is_negative()));
            let lambda = match simple {
                Some(l) => l.primitive(),
                None => integer_zero_sum(&functional),
            };
            debug_assert!(mu_pair(pair, &lambda)?.is_negative());
            Ok(StabilityVerdict {
                status: TorusStatus::TorusUnstable,
                certificate: Certificate::Destabilizer(lambda),
            })
        }
        HullResult::InHull { coefficients } => {
            if affine_rank(&points) == n - 1 {
                if let Some((s, mu)) = max_min_coefficient(&points, &target, config.pivot_budget)? {
                    if s.is_positive() {
                        return Ok(StabilityVerdict {
                            status: TorusStatus::TorusStable,
                            certificate: Certificate::Hull(mu),
                        });
                    }
                }
            }
            Ok(StabilityVerdict {
                status: TorusStatus::TorusStrictlySemistable,
                certificate: Certificate::Hull(coefficients),
            })
        }
    }
}

/// Re-checks a verdict's certificate with dot products only.
pub fn verify_verdict(pair: &PairConfig, verdict: &StabilityVerdict) -> bool {
    match (&verdict.status, &verdict.certificate) {
        (TorusStatus::TorusUnstable, Certificate::Destabilizer(l)) => {
            l.weights().iter().sum::<i64>() == 0 && mu_pair(pair, l).is_ok_and(|v| v.is_negative())
        }
        (TorusStatus::TorusUnstable, _) | (_, Certificate::Destabilizer(_)) => false,
        (status, Certificate::Hull(c)) => {
            let points = pair.state_points();
            let ok = crate::linalg::verify_hull_result(
                &points,
                &pair.barycenter(),
                &HullResult::InHull { coefficients: c.clone() },
            );
            ok && (*status != TorusStatus::TorusStable || c.iter().all(|x| x.is_positive()))
        }
    }
}

/// Initial forms of `Y` and `H` under `lambda` (monomials of maximal weight).
pub fn limit_pair(pair: &PairConfig, lambda: &OnePs) -> Result<PairConfig, HmError> {
    let my = mu(pair.y(), lambda)?;
    let mh = mu(pair.h(), lambda)?;
    let w = lambda.weights();
    let y0 = pair.y().filter_terms(|m| m.weight(w) == my);
    let h0 = pair.h().filter_terms(|m| m.weight(w) == mh);
    PairConfig::new(y0, h0, pair.t().clone())
}

/// Tries each coordinate change `M` (acting by `f -> f(x M)`) and returns
/// the first one under which the transformed pair is torus-unstable,
/// together with the destabilizing weights.
pub fn destabilizer_search(
    pair: &PairConfig,
    changes: &[ExactMatrix],
) -> Result<Option<(ExactMatrix, OnePs)>, HmError> {
    for m in changes {
        let moved = pair.pair().transform(m)?.at(pair.t().clone())?;
        let v = is_torus_semistable(&moved)?;
        if let Certificate::Destabilizer(l) = v.certificate {
            return Ok(Some((m.clone(), l)));
        }
    }
    Ok(None)
}

pub fn transposition(n: usize, a: usize, b: usize, field: Field) -> ExactMatrix {
    let mut m = ExactMatrix::identity(n, field);
    if a != b {
        m.set(a, a, Scalar::zero(field));
        m.set(b, b, Scalar::zero(field));
        m.set(a, b, Scalar::one(field));
        m.set(b, a, Scalar::one(field));
    }
    m
}

/// A coordinate change `M` with `H(x M)` a nonzero multiple of `x0`.
pub fn hyperplane_to_x0(h: &Polynomial) -> Result<ExactMatrix, HmError> {
    let n = h.nvars();
    let field = h.field();
    let coeffs: Vec<Scalar> = (0..n)
        .map(|i| h.coeff(&crate::poly::Monomial::var(i, n)))
        .collect();
    let k = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(HmError::ZeroPolynomial)?;
    let swap = transposition(n, 0, k, field);
    let h1 = h.substitute_linear(&swap)?;
    let c: Vec<Scalar> = (0..n)
        .map(|i| h1.coeff(&crate::poly::Monomial::var(i, n)))
        .collect();
    let inv = c[0].inv().expect("pivot coefficient is nonzero");
    let mut g = ExactMatrix::identity(n, field);
    g.set(0, 0, inv.clone());
    for j in 1..n {
        g.set(j, 0, -&(&c[j] * &inv));
    }
    Ok(g.mul(&swap)?)
}

/// Identity, the transposition `x0 <-> x_k` when `H` is a multiple of `x_k`,
/// and the elimination move sending a general `H` to `x0`.
pub fn default_coordinate_changes(pair: &PairConfig) -> Result<Vec<ExactMatrix>, HmError> {
    let n = pair.nvars();
    let field = pair.h().field();
    let mut out = vec![ExactMatrix::identity(n, field)];
    if pair.h().num_terms() == 1 {
        let k = pair.h().support().next().unwrap().exponents().iter().position(|&e| e == 1).unwrap();
        if k != 0 {
            out.push(transposition(n, 0, k, field));
        }
    } else {
        out.push(hyperplane_to_x0(pair.h())?);
    }
    Ok(out)
}

/// Closed interval of slopes `t >= 0` at which the pair is torus-semistable,
/// as `(t_min, t_max)` with `None` for an unbounded right end; `None` when
/// no slope works.
///
/// The barycenter condition `c(t) in conv(supp Y) + t*conv(supp H)` is linear
/// in `(alpha, gamma, t)` after writing the second summand as `gamma` with
/// `sum gamma = t`, so both ends come from one exact LP each.
pub fn semistable_interval(
    pair: &Pair,
    budget: usize,
) -> Result<Option<(BigRational, Option<BigRational>)>, HmError> {
    let n = pair.nvars();
    let ymons: Vec<_> = pair.y().support().cloned().collect();
    let hvars: Vec<usize> = pair
        .h()
        .support()
        .map(|m| m.exponents().iter().position(|&e| e == 1).unwrap())
        .collect();
    let (na, ng) = (ymons.len(), hvars.len());
    let cols = na + ng + 1;
    let nn = BigRational::from_integer(n.into());
    let d = BigRational::from_integer(pair.y().degree().into());
    let mut a = Vec::with_capacity(n + 2);
    let mut b = Vec::with_capacity(n + 2);
    for k in 0..n {
        let mut row = vec![BigRational::zero(); cols];
        for (j, m) in ymons.iter().enumerate() {
            row[j] = BigRational::from_integer(m.exponents()[k].into());
        }
        for (j, &i) in hvars.iter().enumerate() {
            if i == k {
                row[na + j] = BigRational::one();
            }
        }
        row[cols - 1] = -BigRational::one() / &nn;
        a.push(row);
        b.push(&d / &nn);
    }
    let mut row = vec![BigRational::zero(); cols];
    row[..na].fill(BigRational::one());
    a.push(row);
    b.push(BigRational::one());
    let mut row = vec![BigRational::zero(); cols];
    row[na..na + ng].fill(BigRational::one());
    row[cols - 1] = -BigRational::one();
    a.push(row);
    b.push(BigRational::zero());

    let mut c = vec![BigRational::zero(); cols];
    c[cols - 1] = BigRational::one();
    let lo = match minimize(&a, &b, &c, budget)? {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible { .. } => return Ok(None),
        LpOutcome::Unbounded => unreachable!("t is bounded below by 0"),
    };
    c[cols - 1] = -BigRational::one();
    let hi = match minimize(&a, &b, &c, budget)? {
        LpOutcome::Optimal { value, .. } => Some(-value),
        LpOutcome::Unbounded => None,
        LpOutcome::Infeasible { .. } => unreachable!("feasible above"),
    };
    Ok(Some((lo, hi)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCrossing {
    pub slope: BigRational,
    pub left: TorusStatus,
    pub at_wall: TorusStatus,
    pub right: TorusStatus,
}

impl fmt::Display for WallCrossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} | {} | {}",
            fmt_rational(&self.slope),
            self.left,
            self.at_wall,
            self.right
        )
    }
}

/// Critical slope `-mu(Y)/mu(H)` of a candidate, when `mu(H) != 0`.
pub fn critical_slope(pair: &Pair, lambda: &OnePs) -> Result<Option<BigRational>, HmError> {
    let mh = mu(pair.h(), lambda)?;
    if mh == 0 {
        return Ok(None);
    }
    let my = mu(pair.y(), lambda)?;
    Ok(Some(BigRational::new((-my).into(), mh.into())))
}

/// Scans `(t_lo, t_hi]` for slopes where the torus verdict changes.
///
/// Candidate slopes are the critical slopes of `candidates` together with the
/// exact ends of [`semistable_interval`]; the verdict is evaluated exactly at
/// each candidate slope and at the midpoints between consecutive ones.
pub fn wall_scan(
    pair: &Pair,
    t_lo: &BigRational,
    t_hi: &BigRational,
    candidates: &[OnePs],
    config: &HmConfig,
) -> Result<Vec<WallCrossing>, HmError> {
    if candidates.iter().all(OnePs::is_trivial) {
        return Err(HmError::EmptyCandidates);
    }
    let mut slopes = BTreeSet::new();
    for l in candidates.iter().filter(|l| !l.is_trivial()) {
        if let Some(s) = critical_slope(pair, l)? {
            slopes.insert(s);
        }
    }
    scan_slopes(pair, t_lo, t_hi, slopes, config)
}

/// [`wall_scan`] over the box `[-B, B]^n` of zero-sum weights.
///
/// Every such weight has `|mu(Y)| <= deg(Y) * B` and `0 < |mu(H)| <= B`, so
/// the slopes `a/b` with `|a| <= deg(Y)*B`, `1 <= b <= B` contain all of
/// their critical slopes; scanning that set avoids enumerating the box.
pub fn wall_scan_default(
    pair: &Pair,
    t_lo: &BigRational,
    t_hi: &BigRational,
    config: &HmConfig,
) -> Result<Vec<WallCrossing>, HmError> {
    let bound = config.candidate_bound;
    if bound < 1 {
        return Err(HmError::EmptyCandidates);
    }
    let d = pair.y().degree() as i64;
    let mut slopes = BTreeSet::new();
    for den in 1..=bound {
        for num in -d * bound..=d * bound {
            slopes.insert(BigRational::new(num.into(), den.into()));
        }
    }
    scan_slopes(pair, t_lo, t_hi, slopes, config)
}

/// All zero-sum integer vectors in `[-bound, bound]^n` other than zero.
pub fn box_candidates(n: usize, bound: i64) -> Vec<OnePs> {
    fn rec(prefix: &mut Vec<i64>, n: usize, bound: i64, out: &mut Vec<OnePs>) {
        if prefix.len() == n - 1 {
            let last = -prefix.iter().sum::<i64>();
            if last.abs() <= bound {
                let mut w = prefix.clone();
                w.push(last);
                if w.iter().any(|&x| x != 0) {
                    out.push(OnePs(w));
                }
            }
            return;
        }
        for v in -bound..=bound {
            prefix.push(v);
            rec(prefix, n, bound, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 1 {
        rec(&mut Vec::with_capacity(n), n, bound, &mut out);
    }
    out
}

fn scan_slopes(
    pair: &Pair,
    t_lo: &BigRational,
    t_hi: &BigRational,
    mut slopes: BTreeSet<BigRational>,
    config: &HmConfig,
) -> Result<Vec<WallCrossing>, HmError> {
    if t_lo >= t_hi || t_lo.is_negative() {
        return Err(HmError::InvalidRange);
    }
    if let Some((lo, hi)) = semistable_interval(pair, config.pivot_budget)? {
        slopes.insert(lo);
        if let Some(hi) = hi {
            slopes.insert(hi);
        }
    }
    let slopes: Vec<BigRational> = slopes.into_iter().filter(|s| s > t_lo && s <= t_hi).collect();
    if slopes.is_empty() {
        return Ok(Vec::new());
    }
    let two = BigRational::from_integer(2.into());
    // samples: g_0 < s_1 < g_1 < s_2 < ... < s_k < g_k
    let mut gaps = Vec::with_capacity(slopes.len() + 1);
    gaps.push((t_lo + &slopes[0]) / &two);
    for w in slopes.windows(2) {
        gaps.push((&w[0] + &w[1]) / &two);
    }
    let last = slopes.last().unwrap();
    gaps.push(if last < t_hi {
        (last + t_hi) / &two
    } else {
        let prev = if slopes.len() > 1 { &slopes[slopes.len() - 2] } else { t_lo };
        last + (last - prev) / &two
    });
    let status = |t: &BigRational| -> Result<TorusStatus, HmError> {
        Ok(is_torus_semistable_with(&pair.at(t.clone())?, config)?.status)
    };
    let at: Vec<TorusStatus> = parallel_map(&slopes, status)?;
    let around: Vec<TorusStatus> = parallel_map(&gaps, status)?;
    Ok(slopes
        .into_iter()
        .enumerate()
        .filter_map(|(i, slope)| {
            let (left, here, right) = (around[i], at[i], around[i + 1]);
            (left != here || here != right).then_some(WallCrossing {
                slope,
                left,
                at_wall: here,
                right,
            })
        })
        .collect())
}

/// Order-preserving map over scoped worker threads.
fn parallel_map<T: Sync, U: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<U, HmError> + Sync,
) -> Result<Vec<U>, HmError> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let results: Vec<Result<Vec<U>, HmError>> = std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                s.spawn(move || c.iter().map(f).collect::<Result<Vec<U>, HmError>>())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(items.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Scales a rational weight vector to integers (used for reporting).
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    crate::linalg::primitive_integer_vector(v)
}
