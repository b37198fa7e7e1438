//! Two-phase dense tableau simplex over exact rationals with Bland's rule.
//!
//! Problems are in standard form: minimize `c.x` subject to `A x = b`,
//! `x >= 0`. Infeasibility is reported with a Farkas vector `y` satisfying
//! `y.A <= 0` columnwise and `y.b > 0`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::LinalgError;

pub const DEFAULT_PIVOT_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    Infeasible {
        farkas: Vec<BigRational>,
    },
    Unbounded,
}

struct Tableau {
    /// `m` rows of `n + m + 1` entries: original columns, artificials, rhs.
    t: Vec<Vec<BigRational>>,
    /// Reduced-cost row over the same columns; the last entry is `-objective`.
    obj: Vec<BigRational>,
    basis: Vec<usize>,
    n: usize,
    m: usize,
    pivots: usize,
    budget: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.n + self.m + 1
    }

    fn rhs(&self, r: usize) -> &BigRational {
        &self.t[r][self.n + self.m]
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<(), LinalgError> {
        self.pivots += 1;
        if self.pivots > self.budget {
            return Err(LinalgError::PivotBudget(self.budget));
        }
        let w = self.width();
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.t[r].clone();
        let nz: Vec<usize> = (0..w).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                self.obj[j] -= &f * &prow[j];
            }
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Runs Bland's rule over columns `< allowed`. Returns `false` on an
    /// unbounded direction.
    fn optimize(&mut self, allowed: usize) -> Result<bool, LinalgError> {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return Ok(true);
            };
            let mut best: Option<(usize, BigRational)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bq)) => ratio < *bq || (ratio == *bq && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, c)?,
            }
        }
    }
}

/// Minimizes `c.x` over `{x >= 0 : A x = b}`.
pub fn minimize(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
    pivot_budget: usize,
) -> Result<LpOutcome, LinalgError> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(LinalgError::DimensionMismatch("linear program shape".into()));
    }
    let w = n + m + 1;
    let mut sign = vec![false; m];
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i].is_negative();
        sign[i] = neg;
        let mut row = vec![BigRational::zero(); w];
        for j in 0..n {
            row[j] = if neg { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = BigRational::from_integer(1.into());
        row[w - 1] = if neg { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // phase 1: minimize the sum of artificials
    let mut obj = vec![BigRational::zero(); w];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[w - 1] -= &row[w - 1];
    }
    let mut tab = Tableau {
        t,
        obj,
        basis: (n..n + m).collect(),
        n,
        m,
        pivots: 0,
        budget: pivot_budget,
    };
    tab.optimize(n)?;
    let infeasibility = -tab.obj[w - 1].clone();
    if infeasibility.is_positive() {
        // y' = c_B B^-1 read off the artificial reduced costs (1 - r_j)
        let one = BigRational::from_integer(1.into());
        let farkas = (0..m)
            .map(|i| {
                let y = &one - &tab.obj[n + i];
                if sign[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        return Ok(LpOutcome::Infeasible { farkas });
    }
    // drive remaining artificials out of the basis; drop redundant rows
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| !tab.t[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j)?,
                None => {
                    tab.t.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    // phase 2
    let mut obj = vec![BigRational::zero(); w];
    obj[..n].clone_from_slice(c);
    for (r, row) in tab.t.iter().enumerate() {
        let cb = &c[tab.basis[r]];
        if cb.is_zero() {
            continue;
        }
        for j in 0..w {
            if !row[j].is_zero() {
                obj[j] -= cb * &row[j];
            }
        }
    }
    tab.obj = obj;
    if !tab.optimize(n)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &bv) in tab.basis.iter().enumerate() {
        x[bv] = tab.rhs(r).clone();
    }
    let value = -tab.obj[w - 1].clone();
    Ok(LpOutcome::Optimal { x, value })
}
