//! Graded pieces of the Jacobian ring `R_f = K[x]/(df/dx_0, ..., df/dx_{n-1})`.
//!
//! `dim R^k` is `dim Sym^k` minus the rank of the multiplication map
//! `Sym^{k-d+1} (x) <partials> -> Sym^k`. For rational `f` the rank is first
//! computed modulo a few primes; a full-rank result mod `p` is exact, anything
//! else falls back to fraction-free elimination over `Q`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{rank_mod_p, Echelon};
use crate::poly::{basis_index, binomial, monomial_basis, Monomial, PolyError, Polynomial};
use crate::scalar::{bigint_mod, Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JacobianError {
    #[error("degree {0} is too small; need d >= 2")]
    DegreeTooSmall(u32),
    #[error("need at least 2 variables")]
    TooFewVariables,
    #[error("hypersurface is not smooth")]
    NotSmooth,
    #[error("hypersurface has even dimension {0}")]
    EvenDimension(usize),
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("degree {a} is outside 0..={sigma}")]
    OutOfRange { a: u32, sigma: u32 },
    #[error("exact elimination of a {rows}x{cols} matrix exceeds the configured limit")]
    ExactBudget { rows: usize, cols: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug)]
pub struct JacobianConfig {
    /// Primes for the modular fast path on rational input, tried in order.
    pub primes: Vec<u32>,
    /// Largest `rows * cols` eliminated exactly over `Q`.
    pub exact_limit: usize,
    /// Extra rows drawn beyond the column count in the random-subset full-rank attempt.
    pub subset_extra: usize,
    pub seed: u64,
}

pub const DEFAULT_PRIMES: [u32; 3] = [32003, 32009, 32027];

impl Default for JacobianConfig {
    fn default() -> Self {
        JacobianConfig {
            primes: DEFAULT_PRIMES.to_vec(),
            exact_limit: 40_000_000,
            subset_extra: 24,
            seed: 0x5eed,
        }
    }
}

/// How a rank was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankWitness {
    /// Full rank modulo this prime, hence full rank over `Q`.
    ModP(u32),
    /// Elimination over the polynomial's own field.
    Exact,
}

impl fmt::Display for RankWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankWitness::ModP(p) => write!(f, "full rank mod {p}"),
            RankWitness::Exact => f.write_str("exact elimination"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub witness: RankWitness,
}

/// Rows `x^a * df/dx_i` of the degree-`k` multiplication matrix, as sparse
/// rows over the monomial basis of degree `k` (greatest monomial first).
pub fn multiplication_rows(f: &Polynomial, k: u32) -> Result<(usize, Vec<Vec<(usize, Scalar)>>), JacobianError> {
    check_degree(f)?;
    let n = f.nvars();
    let cols = binomial(k as u64 + n as u64 - 1, n as u64 - 1) as usize;
    let d = f.degree();
    if k + 1 < d {
        return Ok((cols, Vec::new()));
    }
    let index = basis_index(&monomial_basis(n, k));
    let partials: Vec<Polynomial> = f.gradient().into_iter().filter(|p| !p.is_zero()).collect();
    let shifts = monomial_basis(n, k + 1 - d);
    let mut rows = Vec::with_capacity(shifts.len() * partials.len());
    for m in &shifts {
        for p in &partials {
            let mut row: Vec<(usize, Scalar)> = p.terms().map(|(t, c)| (index[&t.mul(m)], c.clone())).collect();
            row.sort_by_key(|e| e.0);
            rows.push(row);
        }
    }
    Ok((cols, rows))
}

fn check_degree(f: &Polynomial) -> Result<(), JacobianError> {
    if f.degree() < 2 {
        return Err(JacobianError::DegreeTooSmall(f.degree()));
    }
    Ok(())
}

fn integer_row(row: &[(usize, Scalar)]) -> Vec<(usize, BigInt)> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |l, (_, s)| l.lcm(s.as_rational().unwrap().denom()));
    row.iter()
        .map(|(c, s)| {
            let q = s.as_rational().unwrap();
            (*c, q.numer() * (&lcm / q.denom()))
        })
        .collect()
}

fn dense_mod_p(rows: &[&Vec<(usize, u32)>], cols: usize) -> Vec<u32> {
    let mut out = vec![0u32; rows.len() * cols];
    for (r, row) in rows.iter().enumerate() {
        for &(c, v) in row.iter() {
            out[r * cols + c] = v;
        }
    }
    out
}

/// Rank mod `p`, trying a random subset of `cols + extra` rows first when
/// that alone could already reach full column rank.
fn rank_fp(rows: &[Vec<(usize, u32)>], cols: usize, p: u32, cfg: &JacobianConfig) -> usize {
    let full = rows.len().min(cols);
    if rows.len() > cols + cfg.subset_extra {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ p as u64);
        let mut pick: Vec<usize> = sample(&mut rng, rows.len(), cols + cfg.subset_extra).into_vec();
        pick.sort_unstable();
        let sub: Vec<&Vec<(usize, u32)>> = pick.iter().map(|&i| &rows[i]).collect();
        let r = rank_mod_p(dense_mod_p(&sub, cols), sub.len(), cols, p);
        if r == full {
            return r;
        }
    }
    let all: Vec<&Vec<(usize, u32)>> = rows.iter().collect();
    rank_mod_p(dense_mod_p(&all, cols), rows.len(), cols, p)
}

/// Rank of a sparse matrix over `field`, with the modular shortcut over `Q`.
pub fn sparse_rank(
    rows: &[Vec<(usize, Scalar)>],
    cols: usize,
    field: Field,
    cfg: &JacobianConfig,
) -> Result<RankReport, JacobianError> {
    let nrows = rows.len();
    let report = |rank, witness| RankReport {
        rank,
        rows: nrows,
        cols,
        witness,
    };
    let full = nrows.min(cols);
    if full == 0 {
        return Ok(report(0, RankWitness::Exact));
    }
    match field {
        Field::Prime(p) => {
            let fp: Vec<Vec<(usize, u32)>> = rows
                .iter()
                .map(|r| r.iter().map(|(c, s)| (*c, s.residue().unwrap())).collect())
                .collect();
            Ok(report(rank_fp(&fp, cols, p, cfg), RankWitness::Exact))
        }
        Field::Rational => {
            let ints: Vec<Vec<(usize, BigInt)>> = rows.iter().map(|r| integer_row(r)).collect();
            for &p in &cfg.primes {
                let fp: Vec<Vec<(usize, u32)>> = ints
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|(c, v)| (*c, bigint_mod(v, p)))
                            .filter(|e| e.1 != 0)
                            .collect()
                    })
                    .collect();
                if rank_fp(&fp, cols, p, cfg) == full {
                    return Ok(report(full, RankWitness::ModP(p)));
                }
            }
            if nrows.saturating_mul(cols) > cfg.exact_limit {
                return Err(JacobianError::ExactBudget { rows: nrows, cols });
            }
            let mut ech = Echelon::new(cols, Field::Rational);
            for r in rows {
                ech.insert(r);
                if ech.rank() == full {
                    break;
                }
            }
            Ok(report(ech.rank(), RankWitness::Exact))
        }
    }
}

/// `dim R^k` with the rank certificate behind it.
pub fn graded_dim_report(f: &Polynomial, k: u32, cfg: &JacobianConfig) -> Result<(usize, RankReport), JacobianError> {
    let (cols, rows) = multiplication_rows(f, k)?;
    let r = sparse_rank(&rows, cols, f.field(), cfg)?;
    Ok((cols - r.rank, r))
}

pub fn graded_dim(f: &Polynomial, k: u32) -> Result<usize, JacobianError> {
    Ok(graded_dim_report(f, k, &JacobianConfig::default())?.0)
}

pub fn socle_degree(f: &Polynomial) -> u32 {
    f.nvars() as u32 * (f.degree() - 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothness {
    pub smooth: bool,
    pub socle_degree: u32,
    /// Rank of the degree `sigma + 1` multiplication matrix.
    pub rank: RankReport,
}

/// Smooth iff `R^{sigma+1} = 0`, which holds iff the partials have no common
/// projective zero.
pub fn is_smooth_with(f: &Polynomial, cfg: &JacobianConfig) -> Result<Smoothness, JacobianError> {
    check_degree(f)?;
    if f.nvars() < 2 {
        return Err(JacobianError::TooFewVariables);
    }
    let sigma = socle_degree(f);
    let (dim, rank) = graded_dim_report(f, sigma + 1, cfg)?;
    Ok(Smoothness {
        smooth: dim == 0,
        socle_degree: sigma,
        rank,
    })
}

pub fn is_smooth(f: &Polynomial) -> Result<Smoothness, JacobianError> {
    is_smooth_with(f, &JacobianConfig::default())
}

fn require_smooth(f: &Polynomial, cfg: &JacobianConfig) -> Result<u32, JacobianError> {
    let s = is_smooth_with(f, cfg)?;
    if !s.smooth {
        return Err(JacobianError::NotSmooth);
    }
    Ok(s.socle_degree)
}

/// `dim R^k` for a smooth `f` whose socle degree is known.
fn smooth_graded_dim(f: &Polynomial, k: i64, sigma: u32, cfg: &JacobianConfig) -> Result<usize, JacobianError> {
    if k < 0 || k > sigma as i64 {
        return Ok(0);
    }
    Ok(graded_dim_report(f, k as u32, cfg)?.0)
}

fn hodge_target(f: &Polynomial, p: u32) -> i64 {
    (p as i64 + 1) * f.degree() as i64 - f.nvars() as i64
}

/// `h^{n-p,p}_prim` of `V(f)`, `n = nvars - 2`, as `dim R^{(p+1)d - nvars}`.
pub fn hodge_primitive_with(f: &Polynomial, p: u32, cfg: &JacobianConfig) -> Result<usize, JacobianError> {
    let sigma = require_smooth(f, cfg)?;
    smooth_graded_dim(f, hodge_target(f, p), sigma, cfg)
}

pub fn hodge_primitive(f: &Polynomial, p: u32) -> Result<usize, JacobianError> {
    hodge_primitive_with(f, p, &JacobianConfig::default())
}

/// Dimension of the intermediate Jacobian of a smooth odd-dimensional
/// hypersurface of dimension `2m - 1`: `sum_{p=m}^{2m-1} h^{2m-1-p,p}`.
pub fn intermediate_jacobian_dim_with(f: &Polynomial, cfg: &JacobianConfig) -> Result<usize, JacobianError> {
    check_degree(f)?;
    if f.nvars() < 2 {
        return Err(JacobianError::TooFewVariables);
    }
    let dim = f.nvars() - 2;
    if dim.is_multiple_of(2) {
        return Err(JacobianError::EvenDimension(dim));
    }
    let sigma = require_smooth(f, cfg)?;
    let m = (dim as u32).div_ceil(2);
    let mut total = 0;
    for p in m..=2 * m - 1 {
        total += smooth_graded_dim(f, hodge_target(f, p), sigma, cfg)?;
    }
    Ok(total)
}

pub fn intermediate_jacobian_dim(f: &Polynomial) -> Result<usize, JacobianError> {
    intermediate_jacobian_dim_with(f, &JacobianConfig::default())
}

/// Echelon form of the degree-`k` piece of the Jacobian ideal over `f`'s field.
fn ideal_echelon(f: &Polynomial, k: u32) -> Result<Echelon, JacobianError> {
    let (cols, rows) = multiplication_rows(f, k)?;
    let mut ech = Echelon::new(cols, f.field());
    for r in &rows {
        ech.insert(r);
    }
    Ok(ech)
}

/// Monomial basis of `R^k`: the greedy complement of the ideal's degree-`k` span.
pub fn complement_monomials(f: &Polynomial, k: u32) -> Result<Vec<Monomial>, JacobianError> {
    let basis = monomial_basis(f.nvars(), k);
    let ech = ideal_echelon(f, k)?;
    Ok(ech.non_pivot_columns().into_iter().map(|i| basis[i].clone()).collect())
}

/// Rank of the multiplication pairing `R^a x R^{sigma-a} -> R^sigma = K`.
///
/// The socle functional is the coefficient of the single complement monomial
/// of degree `sigma` after reducing modulo the ideal's degree-`sigma` span.
pub fn gorenstein_pairing_rank_with(f: &Polynomial, a: u32, cfg: &JacobianConfig) -> Result<usize, JacobianError> {
    let sigma = require_smooth(f, cfg)?;
    if a > sigma {
        return Err(JacobianError::OutOfRange { a, sigma });
    }
    let field = f.field();
    let left = complement_monomials(f, a)?;
    let right = complement_monomials(f, sigma - a)?;
    let top_basis = monomial_basis(f.nvars(), sigma);
    let top_index: HashMap<Monomial, usize> = basis_index(&top_basis);
    let top = ideal_echelon(f, sigma)?;
    let socle = top.non_pivot_columns();
    debug_assert_eq!(socle.len(), 1);
    let s = socle[0];
    let mut rows = Vec::with_capacity(left.len());
    for b in &left {
        let mut row = Vec::new();
        for (j, c) in right.iter().enumerate() {
            let col = top_index[&b.mul(c)];
            let rem = top.reduce(&[(col, Scalar::one(field))]);
            if let Some((_, v)) = rem.into_iter().find(|e| e.0 == s) {
                row.push((j, v));
            }
        }
        rows.push(row);
    }
    let mut ech = Echelon::new(right.len(), field);
    for r in &rows {
        ech.insert(r);
    }
    Ok(ech.rank())
}

pub fn gorenstein_pairing_rank(f: &Polynomial, a: u32) -> Result<usize, JacobianError> {
    gorenstein_pairing_rank_with(f, a, &JacobianConfig::default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityClass {
    SmoothPoint,
    Node,
    Degenerate(usize),
    NotOnHypersurface,
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityClass::SmoothPoint => f.write_str("SmoothPoint"),
            SingularityClass::Node => f.write_str("Node"),
            SingularityClass::Degenerate(r) => write!(f, "Degenerate({r})"),
            SingularityClass::NotOnHypersurface => f.write_str("NotOnHypersurface"),
        }
    }
}

/// Classifies a projective point of `V(f)`.
///
/// At a singular point the affine Hessian in the chart `x_j != 0` is, up to
/// a nonzero scalar, the projective Hessian with row and column `j` removed.
pub fn classify_point(f: &Polynomial, pt: &[Scalar]) -> Result<SingularityClass, JacobianError> {
    if pt.len() != f.nvars() {
        return Err(PolyError::Shape(format!("point has {} coordinates, expected {}", pt.len(), f.nvars())).into());
    }
    let Some(j) = pt.iter().position(|c| !c.is_zero()) else {
        return Err(JacobianError::ZeroPoint);
    };
    if !f.evaluate(pt)?.is_zero() {
        return Ok(SingularityClass::NotOnHypersurface);
    }
    let grad = f.gradient();
    for g in &grad {
        if !g.evaluate(pt)?.is_zero() {
            return Ok(SingularityClass::SmoothPoint);
        }
    }
    let n = f.nvars();
    let idx: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let mut ech = Echelon::new(idx.len(), f.field());
    for &a in &idx {
        let mut row = Vec::new();
        for (c, &b) in idx.iter().enumerate() {
            let v = grad[a].partial_derivative(b)?.evaluate(pt)?;
            if !v.is_zero() {
                row.push((c, v));
            }
        }
        ech.insert(&row);
    }
    let rank = ech.rank();
    Ok(if rank == n - 1 {
        SingularityClass::Node
    } else {
        SingularityClass::Degenerate(rank)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianSummary {
    pub n_vars: usize,
    pub degree: u32,
    pub dims: Vec<(u32, usize)>,
    pub smoothness: Smoothness,
}

impl JacobianSummary {
    pub fn socle_degree(&self) -> Option<u32> {
        self.smoothness.smooth.then_some(self.smoothness.socle_degree)
    }
}

pub fn summary(
    f: &Polynomial,
    degrees: impl IntoIterator<Item = u32>,
    cfg: &JacobianConfig,
) -> Result<JacobianSummary, JacobianError> {
    let smoothness = is_smooth_with(f, cfg)?;
    let dims = degrees
        .into_iter()
        .map(|k| {
            if smoothness.smooth && k > smoothness.socle_degree {
                Ok((k, 0))
            } else {
                graded_dim_report(f, k, cfg).map(|(d, _)| (k, d))
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(JacobianSummary {
        n_vars: f.nvars(),
        degree: f.degree(),
        dims,
        smoothness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::scalar::is_prime;

    fn fermat(n: usize) -> Polynomial {
        Polynomial::fermat(n, 0..n, 3, Field::Rational)
    }

    #[test]
    fn default_primes_are_large_primes() {
        assert!(DEFAULT_PRIMES.iter().all(|&p| p >= 10007 && is_prime(p as u64)));
    }

    #[test]
    fn fermat_fourfold_dims() {
        let f = fermat(6);
        let dims: Vec<usize> = [0, 1, 2, 3, 6, 7].iter().map(|&k| graded_dim(&f, k).unwrap()).collect();
        assert_eq!(dims, vec![1, 6, 15, 20, 1, 0]);
    }

    #[test]
    fn small_degree_rejected() {
        let f = parse_poly("x0 + x1", 2, Field::Rational).unwrap();
        assert_eq!(graded_dim(&f, 0), Err(JacobianError::DegreeTooSmall(1)));
    }

    #[test]
    fn singular_examples() {
        let cone = Polynomial::fermat(6, 0..5, 3, Field::Rational);
        assert!(!is_smooth(&cone).unwrap().smooth);
        let triangle = parse_poly("x0*x1*x2", 3, Field::Rational).unwrap();
        assert!(!is_smooth(&triangle).unwrap().smooth);
        assert_eq!(hodge_primitive(&triangle, 0), Err(JacobianError::NotSmooth));
    }

    #[test]
    fn hodge_and_intermediate_jacobian() {
        assert_eq!(hodge_primitive(&fermat(6), 1).unwrap(), 1);
        assert_eq!(intermediate_jacobian_dim(&fermat(5)).unwrap(), 5);
        assert_eq!(intermediate_jacobian_dim(&fermat(6)), Err(JacobianError::EvenDimension(4)));
        let quadric = Polynomial::fermat(7, 0..7, 2, Field::Rational);
        assert_eq!(intermediate_jacobian_dim(&quadric).unwrap(), 0);
    }

    #[test]
    fn pairing_is_perfect_on_the_fourfold() {
        let f = fermat(6);
        assert_eq!(gorenstein_pairing_rank(&f, 0).unwrap(), 1);
        assert_eq!(gorenstein_pairing_rank(&f, 2).unwrap(), 15);
        assert!(matches!(gorenstein_pairing_rank(&f, 7), Err(JacobianError::OutOfRange { .. })));
    }

    #[test]
    fn pairing_over_a_prime_field() {
        let f = parse_poly("x0^3 + x1^3 + x2^3 + x0*x1*x2", 3, Field::Prime(32003)).unwrap();
        assert!(is_smooth(&f).unwrap().smooth);
        for a in 0..=3 {
            assert_eq!(gorenstein_pairing_rank(&f, a).unwrap(), graded_dim(&f, a).unwrap());
        }
    }

    #[test]
    fn classify_examples() {
        let q = |s: &str| parse_poly(s, 7, Field::Rational).unwrap();
        let origin: Vec<Scalar> = (0..7).map(|i| Scalar::from_i64((i == 0) as i64, Field::Rational)).collect();
        assert_eq!(classify_point(&fermat(7), &origin).unwrap(), SingularityClass::NotOnHypersurface);
        let nodal = q("x0*x1^2+x0*x2^2+x0*x3^2+x0*x4^2+x0*x5^2+x0*x6^2 + x1^3+x2^3+x3^3+x4^3+x5^3+x6^3");
        assert_eq!(classify_point(&nodal, &origin).unwrap(), SingularityClass::Node);
        let degenerate = q("x0*x1^2 + x2^3+x3^3+x4^3+x5^3+x6^3");
        assert_eq!(classify_point(&degenerate, &origin).unwrap(), SingularityClass::Degenerate(1));
        let zero = vec![Scalar::zero(Field::Rational); 7];
        assert_eq!(classify_point(&nodal, &zero), Err(JacobianError::ZeroPoint));
        let smooth_pt: Vec<Scalar> = [1, -1, 0, 0, 0, 0, 0].iter().map(|&v| Scalar::from_i64(v, Field::Rational)).collect();
        assert_eq!(classify_point(&fermat(7), &smooth_pt).unwrap(), SingularityClass::SmoothPoint);
    }
}
