//! Cubic hypersurfaces `Y` in `P^{m}` containing a fixed cubic `X = V(f3)` in
//! the hyperplane `x0 = 0`, written `Y = f3 + x0 f2 + x0^2 f1 + x0^3 f0`, and
//! their normal form under `G = Ga^m x| Gm`.
//!
//! `Ga^m` acts by `x_i -> x_i + a_i x0` (which moves `f2` by
//! `sum a_i df3/dx_i`), `Gm` by `x0 -> t x0`. After fixing `f2` in a
//! complement `W2` of the span of the partials, what remains is a point of a
//! weighted projective space with weights 1 on `W2`, 2 on `f1` and 3 on `f0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{complement_basis, kernel_basis, rank, solve, ExactMatrix, LinalgError};
use crate::poly::{basis_index, monomial_basis, Monomial, PolyError, Polynomial};
use crate::scalar::{fmt_rational, Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("invalid fixed cubic: {0}")]
    InvalidCubic(String),
    #[error("partials of f3 are dependent; cone direction {}", fmt_ints(.kernel))]
    ConeDirection { kernel: Vec<BigInt> },
    #[error("restriction to x0 = 0 is not proportional to f3")]
    NotInFamily,
    #[error("Y contains the hyperplane x0 = 0")]
    ContainsHyperplane,
    #[error("Y lies in the orbit of the cone over X")]
    ConeOrbit,
    #[error("the zero vector is not a weighted projective point")]
    ZeroPoint,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn fmt_ints(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// The family of cubics containing `V(f3)`, with the data needed to normalize.
#[derive(Clone, Debug)]
pub struct ContainmentFamily {
    f3: Polynomial,
    /// Degree-2 monomials in `x1..x_m`, greatest first.
    quadrics: Vec<Monomial>,
    partials: Vec<Polynomial>,
    /// `m x len(quadrics)`, row `i` the coordinates of `df3/dx_{i+1}`.
    partials_matrix: ExactMatrix,
    /// Positions in `quadrics` spanning `W2`.
    w2_basis: Vec<usize>,
    /// Positions in `quadrics` not in `W2`; the partials project isomorphically onto them.
    pivots: Vec<usize>,
}

/// Recorded, not checked: the fixed cubic is assumed to have trivial
/// automorphism group.
pub const AUTOMORPHISM_HYPOTHESIS: &str = "Aut(X) assumed trivial (not verified)";

impl ContainmentFamily {
    pub fn f3(&self) -> &Polynomial {
        &self.f3
    }

    /// Number of variables including `x0`.
    pub fn nvars(&self) -> usize {
        self.f3.nvars()
    }

    pub fn partials(&self) -> &[Polynomial] {
        &self.partials
    }

    pub fn partials_matrix(&self) -> &ExactMatrix {
        &self.partials_matrix
    }

    pub fn quadric_monomials(&self) -> &[Monomial] {
        &self.quadrics
    }

    pub fn w2_basis(&self) -> &[usize] {
        &self.w2_basis
    }

    pub fn w2_monomials(&self) -> Vec<Monomial> {
        self.w2_basis.iter().map(|&i| self.quadrics[i].clone()).collect()
    }

    /// `(dim W2, number of f1 coordinates, number of f0 coordinates)`.
    pub fn coordinate_ledger(&self) -> (usize, usize, usize) {
        (self.w2_basis.len(), self.nvars() - 1, 1)
    }

    /// Dimension of the weighted projective quotient.
    pub fn quotient_dim(&self) -> usize {
        let (a, b, c) = self.coordinate_ledger();
        a + b + c - 1
    }

    fn quadric_coords(&self, q: &Polynomial) -> Vec<BigRational> {
        let index = basis_index(&self.quadrics);
        q.coordinates(&index, self.quadrics.len())
            .into_iter()
            .map(|s| s.as_rational().unwrap().clone())
            .collect()
    }
}

/// Builds the family for a cubic `f3` in `x1..x_m` (no `x0`), over `Q`.
pub fn build_family(f3: &Polynomial) -> Result<ContainmentFamily, FiberError> {
    if f3.field() != Field::Rational {
        return Err(FiberError::InvalidCubic("the family is built over Q".into()));
    }
    if f3.degree() != 3 || f3.is_zero() {
        return Err(FiberError::InvalidCubic("f3 must be a nonzero cubic".into()));
    }
    let n = f3.nvars();
    if n < 2 {
        return Err(FiberError::InvalidCubic("need x0 and at least one more variable".into()));
    }
    if f3.support().any(|m| m.exponents()[0] > 0) {
        return Err(FiberError::InvalidCubic("f3 must not involve x0".into()));
    }
    let quadrics: Vec<Monomial> = monomial_basis(n, 2).into_iter().filter(|m| m.exponents()[0] == 0).collect();
    let index = basis_index(&quadrics);
    let partials: Vec<Polynomial> = (1..n).map(|i| f3.partial_derivative(i)).collect::<Result<_, _>>()?;
    let rows: Vec<Vec<Scalar>> = partials.iter().map(|p| p.coordinates(&index, quadrics.len())).collect();
    let partials_matrix = ExactMatrix::from_rows(rows.clone(), Field::Rational)?;
    if rank(&partials_matrix) < n - 1 {
        let kernel = kernel_basis(&partials_matrix.transpose())?
            .into_iter()
            .next()
            .expect("rank deficiency gives a kernel vector");
        return Err(FiberError::ConeDirection { kernel });
    }
    let w2_basis = complement_basis(&rows, quadrics.len(), Field::Rational)?;
    let pivots = (0..quadrics.len()).filter(|i| !w2_basis.contains(i)).collect();
    Ok(ContainmentFamily {
        f3: f3.clone(),
        quadrics,
        partials,
        partials_matrix,
        w2_basis,
        pivots,
    })
}

/// `(f2, f1, f0)` with `Y = c (f3 + x0 f2 + x0^2 f1 + x0^3 f0)`, stored as
/// polynomials in the full variable set that do not involve `x0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub f2: Polynomial,
    pub f1: Polynomial,
    pub f0: Scalar,
}

fn check_member_shape(family: &ContainmentFamily, y: &Polynomial) -> Result<(), FiberError> {
    if y.nvars() != family.nvars() || y.degree() != 3 || y.field() != Field::Rational {
        return Err(FiberError::Shape(format!(
            "expected a rational cubic in {} variables",
            family.nvars()
        )));
    }
    Ok(())
}

/// Splits `Y` by powers of `x0` after scaling its `x0`-free part to `f3`.
pub fn decompose(family: &ContainmentFamily, y: &Polynomial) -> Result<Decomposition, FiberError> {
    check_member_shape(family, y)?;
    let restricted = y.restrict_zero(0);
    if restricted.is_zero() {
        return Err(FiberError::ContainsHyperplane);
    }
    let (m, c) = restricted.leading_term().unwrap();
    let s = &c.inv().unwrap() * &family.f3.coeff(m);
    let y = y.scale(&s);
    if y.restrict_zero(0) != family.f3 {
        return Err(FiberError::NotInFamily);
    }
    Ok(Decomposition {
        f2: y.coefficient_of_power(0, 1),
        f1: y.coefficient_of_power(0, 2),
        f0: y.coefficient_of_power(0, 3).coeff(&Monomial::one(y.nvars())),
    })
}

/// The unique `a` with `f2 + sum a_i df3/dx_i` in `W2`, and that sum.
pub fn ga_normalize(family: &ContainmentFamily, f2: &Polynomial) -> Result<(Vec<BigRational>, Polynomial), FiberError> {
    if f2.nvars() != family.nvars() || (f2.degree() != 2 && !f2.is_zero()) {
        return Err(FiberError::Shape("f2 must be a quadric".into()));
    }
    if f2.support().any(|m| m.exponents()[0] > 0) {
        return Err(FiberError::Shape("f2 must not involve x0".into()));
    }
    let m = family.partials.len();
    let coords = family.quadric_coords(f2);
    let pm = &family.partials_matrix;
    let rows: Vec<Vec<Scalar>> = family
        .pivots
        .iter()
        .map(|&c| (0..m).map(|i| pm.get(i, c).clone()).collect())
        .collect();
    let a_mat = ExactMatrix::from_rows(rows, Field::Rational)?;
    let rhs: Vec<BigRational> = family.pivots.iter().map(|&c| -coords[c].clone()).collect();
    let a = solve(&a_mat, &rhs)?.expect("partials project isomorphically off W2");
    let mut out = f2.clone();
    if out.is_zero() {
        out = Polynomial::zero(f2.nvars(), 2, Field::Rational);
    }
    for (ai, p) in a.iter().zip(&family.partials) {
        if !ai.is_zero() {
            out = out.add(&p.scale(&Scalar::Rational(ai.clone())))?;
        }
    }
    Ok((a, out))
}

/// An element `(a, t)` of `Ga^m x| Gm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    a: Vec<BigRational>,
    t: BigRational,
}

impl GroupElement {
    pub fn new(a: Vec<BigRational>, t: BigRational) -> Result<Self, FiberError> {
        if t.is_zero() {
            return Err(FiberError::Shape("t must be nonzero".into()));
        }
        Ok(GroupElement { a, t })
    }

    pub fn identity(m: usize) -> Self {
        GroupElement {
            a: vec![BigRational::zero(); m],
            t: BigRational::from_integer(1.into()),
        }
    }

    pub fn a(&self) -> &[BigRational] {
        &self.a
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    /// Substitution matrix of `x_i -> x_i + a_i x0`.
    pub fn ga_matrix(a: &[BigRational]) -> ExactMatrix {
        let n = a.len() + 1;
        let mut m = ExactMatrix::identity(n, Field::Rational);
        for (i, ai) in a.iter().enumerate() {
            m.set(0, i + 1, Scalar::Rational(ai.clone()));
        }
        m
    }

    /// Substitution matrix of `x0 -> t x0`.
    pub fn gm_matrix(t: &BigRational, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::identity(n, Field::Rational);
        m.set(0, 0, Scalar::Rational(t.clone()));
        m
    }
}

/// `Y` after `x_i -> x_i + a_i x0`, then `x0 -> t x0`. Both substitutions fix
/// the `x0`-free part, so no renormalization is needed.
pub fn group_act(g: &GroupElement, y: &Polynomial) -> Result<Polynomial, FiberError> {
    if g.a.len() + 1 != y.nvars() {
        return Err(FiberError::Shape(format!(
            "group element for {} variables acting on {}",
            g.a.len() + 1,
            y.nvars()
        )));
    }
    let moved = y.substitute_linear(&GroupElement::ga_matrix(&g.a))?;
    Ok(moved.substitute_linear(&GroupElement::gm_matrix(&g.t, y.nvars()))?)
}

/// A point of `P(1^{dim W2}, 2^m, 3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPoint {
    pub c1: Vec<BigRational>,
    pub c2: Vec<BigRational>,
    pub c3: BigRational,
}

impl WeightedPoint {
    /// `(value, weight)` for every coordinate.
    pub fn weighted_coords(&self) -> impl Iterator<Item = (&BigRational, u32)> {
        self.c1
            .iter()
            .map(|v| (v, 1))
            .chain(self.c2.iter().map(|v| (v, 2)))
            .chain(std::iter::once((&self.c3, 3)))
    }

    pub fn is_zero(&self) -> bool {
        self.weighted_coords().all(|(v, _)| v.is_zero())
    }

    /// `t . p`, scaling each coordinate by `t^weight`.
    pub fn scaled(&self, t: &BigRational) -> WeightedPoint {
        let t2 = t * t;
        let t3 = &t2 * t;
        WeightedPoint {
            c1: self.c1.iter().map(|v| v * t).collect(),
            c2: self.c2.iter().map(|v| v * &t2).collect(),
            c3: &self.c3 * &t3,
        }
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[BigRational]| v.iter().map(fmt_rational).collect::<Vec<_>>().join(",");
        write!(f, "[{}; {}; {}]", j(&self.c1), j(&self.c2), fmt_rational(&self.c3))
    }
}

/// The `G`-normal form of `Y` as a weighted projective point.
pub fn normal_form(family: &ContainmentFamily, y: &Polynomial) -> Result<WeightedPoint, FiberError> {
    let d = decompose(family, y)?;
    let (a, _) = ga_normalize(family, &d.f2)?;
    let y = y.substitute_linear(&GroupElement::ga_matrix(&a))?;
    let d = decompose(family, &y)?;
    let coords = family.quadric_coords(&d.f2);
    debug_assert!(family.pivots.iter().all(|&c| coords[c].is_zero()));
    let p = WeightedPoint {
        c1: family.w2_basis.iter().map(|&i| coords[i].clone()).collect(),
        c2: (1..family.nvars())
            .map(|i| {
                d.f1.coeff(&Monomial::var(i, family.nvars()))
                    .as_rational()
                    .unwrap()
                    .clone()
            })
            .collect(),
        c3: d.f0.as_rational().unwrap().clone(),
    };
    if p.is_zero() {
        return Err(FiberError::ConeOrbit);
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedComparison {
    /// Equal in the weighted projective space over the algebraic closure.
    pub equal: bool,
    /// Every nonzero coordinate has weight divisible by some `g > 1`, so a
    /// `g`-th root of unity acts trivially and equality over `Q` may need it.
    /// Always `false` when `equal` is `false`.
    pub twist_ambiguous: bool,
}

/// Compares two weighted points with the invariants
/// `p_i^{w_j/g} q_j^{w_i/g} = q_i^{w_j/g} p_j^{w_i/g}`, `g = gcd(w_i, w_j)`,
/// over all pairs of nonzero coordinates.
pub fn weighted_compare(p: &WeightedPoint, q: &WeightedPoint) -> Result<WeightedComparison, FiberError> {
    if p.is_zero() || q.is_zero() {
        return Err(FiberError::ZeroPoint);
    }
    if p.c1.len() != q.c1.len() || p.c2.len() != q.c2.len() {
        return Err(FiberError::Shape("weighted points of different shapes".into()));
    }
    let pc: Vec<_> = p.weighted_coords().collect();
    let qc: Vec<_> = q.weighted_coords().collect();
    let g_all = pc.iter().filter(|(v, _)| !v.is_zero()).fold(0u32, |g, &(_, w)| g.gcd(&w));
    let twist_ambiguous = g_all > 1;
    if pc.iter().zip(&qc).any(|((a, _), (b, _))| a.is_zero() != b.is_zero()) {
        return Ok(WeightedComparison {
            equal: false,
            twist_ambiguous: false,
        });
    }
    let nz: Vec<usize> = (0..pc.len()).filter(|&i| !pc[i].0.is_zero()).collect();
    for (k, &i) in nz.iter().enumerate() {
        for &j in &nz[k + 1..] {
            let (wi, wj) = (pc[i].1, pc[j].1);
            let g = wi.gcd(&wj);
            let (ei, ej) = ((wj / g) as i32, (wi / g) as i32);
            let lhs = pc[i].0.pow(ei) * qc[j].0.pow(ej);
            let rhs = qc[i].0.pow(ei) * pc[j].0.pow(ej);
            if lhs != rhs {
                return Ok(WeightedComparison {
                    equal: false,
                    twist_ambiguous: false,
                });
            }
        }
    }
    Ok(WeightedComparison {
        equal: true,
        twist_ambiguous,
    })
}

pub fn weighted_equal(p: &WeightedPoint, q: &WeightedPoint) -> Result<bool, FiberError> {
    Ok(weighted_compare(p, q)?.equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::scalar::rat;

    fn q(s: &str) -> Polynomial {
        parse_poly(s, 7, Field::Rational).unwrap()
    }

    fn fermat_family() -> ContainmentFamily {
        build_family(&Polynomial::fermat(7, 1..7, 3, Field::Rational)).unwrap()
    }

    #[test]
    fn fermat_family_complement() {
        let fam = fermat_family();
        assert_eq!(fam.w2_basis().len(), 15);
        assert!(fam.w2_monomials().iter().all(|m| m.is_square_free()));
        assert_eq!(fam.coordinate_ledger(), (15, 6, 1));
        assert_eq!(fam.quotient_dim(), 21);
    }

    #[test]
    fn cone_direction() {
        let err = build_family(&Polynomial::fermat(7, 1..6, 3, Field::Rational)).unwrap_err();
        let e6: Vec<BigInt> = (0..6).map(|i| BigInt::from((i == 5) as i64)).collect();
        assert_eq!(err, FiberError::ConeDirection { kernel: e6 });
        assert!(build_family(&q("x0^3 + x1^3")).is_err());
    }

    #[test]
    fn decompose_examples() {
        let fam = fermat_family();
        let f3 = fam.f3().clone();
        let d = decompose(&fam, &f3).unwrap();
        assert!(d.f2.is_zero() && d.f1.is_zero() && d.f0.is_zero());
        let y = f3.add(&q("x0*x1*x2 + x0^3")).unwrap();
        let d = decompose(&fam, &y).unwrap();
        assert_eq!(d.f2, parse_poly("x1*x2", 7, Field::Rational).unwrap());
        assert!(d.f1.is_zero());
        assert!(d.f0.is_one());
        let y = f3.scale(&Scalar::from_i64(2, Field::Rational)).add(&q("x0*x1^2")).unwrap();
        assert_eq!(decompose(&fam, &y).unwrap().f2, q("1/2*x1^2"));
        assert_eq!(decompose(&fam, &q("x0*x1^2")), Err(FiberError::ContainsHyperplane));
        assert_eq!(decompose(&fam, &q("x1^3 + x0^3")), Err(FiberError::NotInFamily));
    }

    #[test]
    fn ga_normalize_examples() {
        let fam = fermat_family();
        let (a, f2n) = ga_normalize(&fam, &q("x1^2 + x1*x2")).unwrap();
        let mut expected = vec![rat(0, 1); 6];
        expected[0] = rat(-1, 3);
        assert_eq!(a, expected);
        assert_eq!(f2n, q("x1*x2"));
        let (a, f2n) = ga_normalize(&fam, &q("x1*x2")).unwrap();
        assert!(a.iter().all(Zero::is_zero));
        assert_eq!(f2n, q("x1*x2"));
        let sum = (1..7).fold(Polynomial::zero(7, 2, Field::Rational), |acc, i| {
            acc.add(&fam.partials()[i - 1]).unwrap()
        });
        let (a, f2n) = ga_normalize(&fam, &sum).unwrap();
        assert_eq!(a, vec![rat(-1, 1); 6]);
        assert!(f2n.is_zero());
        let (a2, _) = ga_normalize(&fam, &f2n).unwrap();
        assert!(a2.iter().all(Zero::is_zero));
    }

    #[test]
    fn normal_form_examples() {
        let fam = fermat_family();
        let f3 = fam.f3().clone();
        assert_eq!(normal_form(&fam, &f3), Err(FiberError::ConeOrbit));
        let p = normal_form(&fam, &f3.add(&q("x0*x1*x2")).unwrap()).unwrap();
        let pos = fam.w2_monomials().iter().position(|m| *m == q("x1*x2").leading_term().unwrap().0.clone()).unwrap();
        for (i, c) in p.c1.iter().enumerate() {
            assert_eq!(*c, rat((i == pos) as i64, 1));
        }
        assert!(p.c2.iter().all(Zero::is_zero) && p.c3.is_zero());
    }

    #[test]
    fn weight_law() {
        let fam = fermat_family();
        let y = fam.f3().add(&q("x0*x1*x2 + x0*x3^2 + 2*x0^2*x4 - x0^3")).unwrap();
        let p = normal_form(&fam, &y).unwrap();
        for t in [2, 3, -5] {
            let g = GroupElement::new(vec![rat(0, 1); 6], rat(t, 1)).unwrap();
            let pt = normal_form(&fam, &group_act(&g, &y).unwrap()).unwrap();
            assert_eq!(pt, p.scaled(&rat(t, 1)));
        }
        let g = GroupElement::new((1..7).map(|i| rat(i, 7)).collect(), rat(1, 1)).unwrap();
        assert_eq!(group_act(&g, fam.f3()).unwrap().restrict_zero(0), *fam.f3());
        assert_eq!(group_act(&GroupElement::identity(6), &y).unwrap(), y);
    }

    fn wp(c1: &[i64], c2: &[i64], c3: i64) -> WeightedPoint {
        WeightedPoint {
            c1: c1.iter().map(|&v| rat(v, 1)).collect(),
            c2: c2.iter().map(|&v| rat(v, 1)).collect(),
            c3: rat(c3, 1),
        }
    }

    #[test]
    fn weighted_equality_examples() {
        assert!(weighted_equal(&wp(&[1, 0], &[0], 0), &wp(&[2, 0], &[0], 0)).unwrap());
        assert!(weighted_equal(&wp(&[0, 0], &[0], 1), &wp(&[0, 0], &[0], 8)).unwrap());
        assert!(weighted_equal(&wp(&[1, 0], &[1], 0), &wp(&[2, 0], &[4], 0)).unwrap());
        assert!(!weighted_equal(&wp(&[1, 0], &[1], 0), &wp(&[2, 0], &[3], 0)).unwrap());
        // equal weights: a sign flip on one coordinate is not a rescaling
        assert!(!weighted_equal(&wp(&[0, 0], &[1, 1], 0), &wp(&[0, 0], &[1, -1], 0)).unwrap());
        assert!(weighted_equal(&wp(&[0, 0], &[1, 1], 0), &wp(&[0, 0], &[-1, -1], 0)).unwrap());
        assert!(!weighted_equal(&wp(&[1, 1], &[0], 0), &wp(&[1, 2], &[0], 0)).unwrap());
        let c = weighted_compare(&wp(&[0, 0], &[1, 2], 0), &wp(&[0, 0], &[3, 6], 0)).unwrap();
        assert!(c.equal && c.twist_ambiguous);
        assert_eq!(weighted_equal(&wp(&[0, 0], &[0], 0), &wp(&[1, 0], &[0], 0)), Err(FiberError::ZeroPoint));
    }
}
