use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::{bigint_mod, inv_mod, mul_mod, Field, Scalar};

type QRow = Vec<(usize, BigInt)>;
type FpRow = Vec<(usize, u32)>;

/// Incremental sparse row echelon form whose pivot in each row is the row's
/// largest column. Its non-pivot columns are exactly the greedy
/// smallest-index-first complement of the row space.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Rows,
}

#[derive(Clone, Debug)]
enum Rows {
    Rational(BTreeMap<usize, QRow>),
    Prime(u32, BTreeMap<usize, FpRow>),
}

fn content_normalize(row: &mut QRow) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    let negative = row.last().is_some_and(|(_, v)| v.is_negative());
    if g.is_zero() {
        return;
    }
    let g = if negative { -g } else { g };
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `a*x - b*y` on sparse rows.
fn combine_q(a: &BigInt, x: &QRow, b: &BigInt, y: &QRow) -> QRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ci = x.get(i).map(|e| e.0);
        let cj = y.get(j).map(|e| e.0);
        match (ci, cj) {
            (Some(c), Some(d)) if c == d => {
                let v = a * &x[i].1 - b * &y[j].1;
                if !v.is_zero() {
                    out.push((c, v));
                }
                i += 1;
                j += 1;
            }
            (Some(c), Some(d)) if c < d => {
                out.push((c, a * &x[i].1));
                i += 1;
            }
            (Some(c), None) => {
                out.push((c, a * &x[i].1));
                i += 1;
            }
            (_, Some(d)) => {
                out.push((d, -(b * &y[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// `x - f*y` mod p on sparse rows.
fn combine_fp(x: &FpRow, f: u32, y: &FpRow, p: u32) -> FpRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let neg = |v: u32| (p - mul_mod(f, v, p)) % p;
    while i < x.len() || j < y.len() {
        let ci = x.get(i).map(|e| e.0);
        let cj = y.get(j).map(|e| e.0);
        match (ci, cj) {
            (Some(c), Some(d)) if c == d => {
                let v = ((x[i].1 as u64 + neg(y[j].1) as u64) % p as u64) as u32;
                if v != 0 {
                    out.push((c, v));
                }
                i += 1;
                j += 1;
            }
            (Some(c), Some(d)) if c < d => {
                out.push((c, x[i].1));
                i += 1;
            }
            (Some(c), None) => {
                out.push((c, x[i].1));
                i += 1;
            }
            (_, Some(d)) => {
                let v = neg(y[j].1);
                if v != 0 {
                    out.push((d, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn to_integer_row(row: &[(usize, Scalar)]) -> QRow {
    let mut lcm = BigInt::one();
    for (_, s) in row {
        lcm = lcm.lcm(s.as_rational().expect("rational row").denom());
    }
    let mut out: QRow = row
        .iter()
        .filter(|(_, s)| !s.is_zero())
        .map(|(c, s)| {
            let q = s.as_rational().unwrap() * BigRational::from_integer(lcm.clone());
            (*c, q.to_integer())
        })
        .collect();
    out.sort_by_key(|e| e.0);
    out
}

fn to_fp_row(row: &[(usize, Scalar)]) -> FpRow {
    let mut out: FpRow = row
        .iter()
        .map(|(c, s)| (*c, s.residue().expect("prime-field row")))
        .filter(|e| e.1 != 0)
        .collect();
    out.sort_by_key(|e| e.0);
    out
}

impl Echelon {
    pub fn new(ncols: usize, field: Field) -> Self {
        let rows = match field {
            Field::Rational => Rows::Rational(BTreeMap::new()),
            Field::Prime(p) => Rows::Prime(p, BTreeMap::new()),
        };
        Echelon { ncols, rows }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            Rows::Rational(r) => r.len(),
            Rows::Prime(_, r) => r.len(),
        }
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        match &self.rows {
            Rows::Rational(r) => r.contains_key(&col),
            Rows::Prime(_, r) => r.contains_key(&col),
        }
    }

    /// Adds a sparse row; returns its new pivot column, or `None` when the
    /// row was already in the span.
    pub fn insert(&mut self, row: &[(usize, Scalar)]) -> Option<usize> {
        match &mut self.rows {
            Rows::Rational(rows) => {
                let mut v = to_integer_row(row);
                content_normalize(&mut v);
                while let Some(&(c, ref lead)) = v.last() {
                    match rows.get(&c) {
                        Some(piv) => {
                            let pl = &piv.last().unwrap().1;
                            let g = pl.gcd(lead);
                            let (a, b) = (pl / &g, lead / &g);
                            v = combine_q(&a, &v, &b, piv);
                            content_normalize(&mut v);
                        }
                        None => {
                            rows.insert(c, v);
                            return Some(c);
                        }
                    }
                }
                None
            }
            Rows::Prime(p, rows) => {
                let p = *p;
                let mut v = to_fp_row(row);
                while let Some(&(c, lead)) = v.last() {
                    match rows.get(&c) {
                        Some(piv) => v = combine_fp(&v, lead, piv, p),
                        None => {
                            let inv = inv_mod(lead, p);
                            for e in v.iter_mut() {
                                e.1 = mul_mod(e.1, inv, p);
                            }
                            rows.insert(c, v);
                            return Some(c);
                        }
                    }
                }
                None
            }
        }
    }

    /// Remainder of `v` modulo the row space, supported on non-pivot columns.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
        match &self.rows {
            Rows::Rational(rows) => {
                let mut acc: BTreeMap<usize, BigRational> = v
                    .iter()
                    .filter(|(_, s)| !s.is_zero())
                    .map(|(c, s)| (*c, s.as_rational().expect("rational vector").clone()))
                    .collect();
                let mut cursor = usize::MAX;
                loop {
                    let Some((&c, val)) = acc.range(..cursor).next_back() else { break };
                    cursor = c;
                    let Some(piv) = rows.get(&c) else { continue };
                    let f = val / BigRational::from_integer(piv.last().unwrap().1.clone());
                    for (pc, pv) in piv {
                        let e = acc.entry(*pc).or_insert_with(BigRational::zero);
                        *e -= &f * BigRational::from_integer(pv.clone());
                        if e.is_zero() {
                            acc.remove(pc);
                        }
                    }
                }
                acc.into_iter().map(|(c, q)| (c, Scalar::Rational(q))).collect()
            }
            Rows::Prime(p, rows) => {
                let p = *p;
                let mut acc: BTreeMap<usize, u32> = to_fp_row(v).into_iter().collect();
                let mut cursor = usize::MAX;
                loop {
                    let Some((&c, &val)) = acc.range(..cursor).next_back() else { break };
                    cursor = c;
                    let Some(piv) = rows.get(&c) else { continue };
                    for (pc, pv) in piv {
                        let e = acc.entry(*pc).or_insert(0);
                        *e = ((*e as u64 + (p - mul_mod(val, *pv, p)) as u64) % p as u64) as u32;
                        if *e == 0 {
                            acc.remove(pc);
                        }
                    }
                }
                acc.into_iter()
                    .map(|(c, value)| (c, Scalar::Residue { value, modulus: p }))
                    .collect()
            }
        }
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn non_pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot(c)).collect()
    }
}

/// Rank of integer rows modulo `p` via the sparse echelon (small inputs).
#[allow(dead_code)]
pub(crate) fn sparse_rank_mod_p(rows: &[Vec<(usize, BigInt)>], ncols: usize, p: u32) -> usize {
    let mut ech = Echelon::new(ncols, Field::Prime(p));
    for r in rows {
        let s: Vec<(usize, Scalar)> = r
            .iter()
            .map(|(c, v)| (*c, Scalar::Residue { value: bigint_mod(v, p), modulus: p }))
            .collect();
        ech.insert(&s);
    }
    ech.rank()
}
