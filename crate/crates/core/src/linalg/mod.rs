//! Exact linear algebra over `Q` and `F_p`.
//!
//! Ranks over `Q` use fraction-free integer row elimination (rows are kept
//! primitive after each step); ranks over `F_p` use dense elimination with
//! lazy modular reduction. Convex-hull membership is decided by an exact
//! rational simplex in [`simplex`].

mod echelon;
mod fp;
pub mod hull;
pub mod simplex;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{Field, FieldError, Scalar};

pub use echelon::Echelon;
pub use fp::rank_mod_p;
pub use hull::{hull_membership, verify_hull_result, HullResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("simplex exceeded its pivot budget of {0}")]
    PivotBudget(usize),
    #[error("operation requires rational entries")]
    NotRational,
}

/// Dense rectangular matrix with a single field tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        ExactMatrix {
            rows,
            cols,
            field,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, field: Field) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch("ragged rows".into()));
            }
            for s in row {
                field.ensure_same(s.field())?;
                entries.push(s);
            }
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols,
            field,
            entries,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], field: Field) -> Self {
        let scalars = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::from_i64(v, field)).collect())
            .collect();
        Self::from_rows(scalars, field).expect("rectangular input")
    }

    pub fn from_rational_rows(rows: &[Vec<BigRational>]) -> Result<Self, LinalgError> {
        let scalars = rows
            .iter()
            .map(|r| r.iter().cloned().map(Scalar::Rational).collect())
            .collect();
        Self::from_rows(scalars, Field::Rational)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "field mismatch");
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        self.field.ensure_same(other.field)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero(self.field);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = &acc + &(a * other.get(k, j));
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Rows as sparse `(column, value)` lists.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, Scalar)>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        f.write_str("]")
    }
}

/// Rank over the matrix's own field.
pub fn rank(a: &ExactMatrix) -> usize {
    match a.field {
        Field::Rational => {
            let mut ech = Echelon::new(a.cols, Field::Rational);
            for row in a.sparse_rows() {
                ech.insert(&row);
            }
            ech.rank()
        }
        Field::Prime(p) => {
            let dense: Vec<u32> = a.entries.iter().map(|s| s.residue().unwrap()).collect();
            rank_mod_p(dense, a.rows, a.cols, p)
        }
    }
}

/// Basis of the right kernel over `Q`: integer vectors with content 1 and
/// positive leading entry, one per free column of the reduced row echelon
/// form (free columns in increasing order).
pub fn kernel_basis(a: &ExactMatrix) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    if a.field != Field::Rational {
        return Err(LinalgError::NotRational);
    }
    let mut m: Vec<Vec<BigRational>> = (0..a.rows)
        .map(|r| a.row(r).iter().map(|s| s.as_rational().unwrap().clone()).collect())
        .collect();
    let pivots = rref(&mut m, a.cols);
    let mut basis = Vec::new();
    let mut pivot_of_col = vec![None; a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_of_col[c] = Some(r);
    }
    for free in 0..a.cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![BigRational::zero(); a.cols];
        v[free] = BigRational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        basis.push(primitive_integer_vector(&v));
    }
    Ok(basis)
}

/// Gauss-Jordan in place; returns pivot columns by row.
pub(crate) fn rref(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Clears denominators, divides out the content and makes the first
/// nonzero entry positive.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -&*x;
        }
    }
    ints
}

/// Indices of standard basis vectors spanning a complement of `span(vectors)`,
/// chosen greedily from index 0 upwards.
pub fn complement_basis(vectors: &[Vec<Scalar>], ambient_dim: usize, field: Field) -> Result<Vec<usize>, LinalgError> {
    let mut ech = Echelon::new(ambient_dim, field);
    for v in vectors {
        if v.len() != ambient_dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient_dim}",
                v.len()
            )));
        }
        for s in v {
            field.ensure_same(s.field())?;
        }
        let sparse: Vec<(usize, Scalar)> = v
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(i, s)| (i, s.clone()))
            .collect();
        ech.insert(&sparse);
    }
    Ok(ech.non_pivot_columns())
}

/// Solves `a x = b` exactly over `Q`; `None` when inconsistent. Free
/// variables are set to zero.
pub fn solve(a: &ExactMatrix, b: &[BigRational]) -> Result<Option<Vec<BigRational>>, LinalgError> {
    if a.field != Field::Rational {
        return Err(LinalgError::NotRational);
    }
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch("right-hand side length".into()));
    }
    let mut m: Vec<Vec<BigRational>> = (0..a.rows)
        .map(|r| {
            let mut row: Vec<BigRational> = a.row(r).iter().map(|s| s.as_rational().unwrap().clone()).collect();
            row.push(b[r].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, a.cols + 1);
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][a.cols].clone();
    }
    Ok(Some(x))
}

/// Dimension of the affine hull of a point set.
pub fn affine_rank(points: &[Vec<BigRational>]) -> usize {
    let Some(base) = points.first() else { return 0 };
    let rows: Vec<Vec<Scalar>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| Scalar::Rational(a - b)).collect())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    rank(&ExactMatrix::from_rows(rows, Field::Rational).expect("rectangular"))
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{monomial_basis, basis_index, Polynomial};

    fn q(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(rows, Field::Rational)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&q(&[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(rank(&ExactMatrix::identity(5, Field::Rational)), 5);
        assert_eq!(rank(&ExactMatrix::identity(5, Field::Prime(10007))), 5);
        assert_eq!(rank(&ExactMatrix::zeros(3, 4, Field::Rational)), 0);
        // full rank over Q, rank 1 mod 3
        let m = vec![vec![1, 1], vec![1, 4]];
        assert_eq!(rank(&q(&m)), 2);
        assert_eq!(rank(&ExactMatrix::from_i64_rows(&m, Field::Prime(3))), 1);
    }

    fn fermat_fourfold_partials() -> Vec<Vec<Scalar>> {
        let f = Polynomial::fermat(6, 0..6, 3, Field::Rational);
        let basis = monomial_basis(6, 2);
        let idx = basis_index(&basis);
        f.gradient().iter().map(|g| g.coordinates(&idx, basis.len())).collect()
    }

    #[test]
    fn fermat_partials_have_rank_six() {
        let rows = fermat_fourfold_partials();
        let m = ExactMatrix::from_rows(rows.clone(), Field::Rational).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 21));
        assert_eq!(rank(&m), 6);
        // inspection oracle: each row has exactly one nonzero entry, in distinct columns
        let mut cols: Vec<usize> = rows
            .iter()
            .map(|r| {
                let nz: Vec<usize> = (0..21).filter(|&c| !r[c].is_zero()).collect();
                assert_eq!(nz.len(), 1);
                nz[0]
            })
            .collect();
        cols.sort();
        cols.dedup();
        assert_eq!(cols.len(), 6);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&q(&[vec![1, 1]])).unwrap();
        assert_eq!(k, vec![vec![BigInt::from(1), BigInt::from(-1)]]);
        assert!(kernel_basis(&ExactMatrix::identity(3, Field::Rational)).unwrap().is_empty());
        let k = kernel_basis(&q(&[vec![1, 2], vec![2, 4]])).unwrap();
        assert_eq!(k, vec![vec![BigInt::from(2), BigInt::from(-1)]]);
        assert!(kernel_basis(&ExactMatrix::identity(2, Field::Prime(7))).is_err());
    }

    #[test]
    fn complement_examples() {
        let f = Field::Rational;
        let full = vec![
            vec![Scalar::from_i64(1, f), Scalar::from_i64(2, f)],
            vec![Scalar::from_i64(0, f), Scalar::from_i64(1, f)],
        ];
        assert!(complement_basis(&full, 2, f).unwrap().is_empty());
        assert_eq!(complement_basis(&[], 3, f).unwrap(), vec![0, 1, 2]);
        let one = vec![vec![Scalar::from_i64(1, f), Scalar::from_i64(1, f)]];
        assert_eq!(complement_basis(&one, 2, f).unwrap(), vec![0]);
    }

    #[test]
    fn fermat_complement_is_square_free() {
        let basis = monomial_basis(6, 2);
        let comp = complement_basis(&fermat_fourfold_partials(), 21, Field::Rational).unwrap();
        assert_eq!(comp.len(), 15);
        assert!(comp.iter().all(|&i| basis[i].is_square_free()));
    }

    #[test]
    fn solve_small_system() {
        let a = q(&[vec![2, 1], vec![1, 3]]);
        let x = solve(&a, &[BigRational::from_integer(3.into()), BigRational::from_integer(4.into())])
            .unwrap()
            .unwrap();
        assert_eq!(x, vec![BigRational::from_integer(1.into()), BigRational::from_integer(1.into())]);
        let inconsistent = q(&[vec![1, 1], vec![1, 1]]);
        let rhs = [BigRational::one(), BigRational::zero()];
        assert_eq!(solve(&inconsistent, &rhs).unwrap(), None);
    }
}
