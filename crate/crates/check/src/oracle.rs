//! Reference computations written independently of the core algorithms.
//! They read polynomials through the public accessors only.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use vgit_core::{Monomial, Polynomial};

/// State points `m + t e_i` scaled by the denominator of `t`, as integers.
pub fn scaled_state_points(y: &Polynomial, h: &Polynomial, t: &BigRational) -> Vec<Vec<i64>> {
    let q = t.denom().to_i64().unwrap();
    let qt = t.numer().to_i64().unwrap();
    let hvars: Vec<usize> = h
        .support()
        .map(|m| m.exponents().iter().position(|&e| e == 1).unwrap())
        .collect();
    let mut pts = Vec::new();
    for m in y.support() {
        for &i in &hvars {
            let mut p: Vec<i64> = m.exponents().iter().map(|&e| q * e as i64).collect();
            p[i] += qt;
            pts.push(p);
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Minimum of `sum c_j l_j` over `l_j in [-b, b]` with `sum l_j = total`,
/// or `None` when that box slice is empty.
fn min_completion(c: &[i64], order: &[usize], total: i64, b: i64) -> Option<i64> {
    let r = c.len() as i64;
    let mut extra = total + b * r;
    if extra < 0 || extra > 2 * b * r {
        return None;
    }
    let mut value: i64 = -b * c.iter().sum::<i64>();
    for &j in order {
        let put = extra.min(2 * b);
        value += c[j] * put;
        extra -= put;
        if extra == 0 {
            break;
        }
    }
    Some(value)
}

/// Exhaustive search for a zero-sum integer `lambda` in `[-bound, bound]^n`
/// with `<lambda, p> < 0` for every point, pruning a prefix when some point
/// cannot be made negative by any completion.
pub fn brute_force_destabilizer(points: &[Vec<i64>], bound: i64) -> Option<Vec<i64>> {
    let n = points.first()?.len();
    // orders[k][p]: suffix indices (relative to k) sorted by increasing coefficient
    let orders: Vec<Vec<Vec<usize>>> = (0..=n)
        .map(|k| {
            points
                .iter()
                .map(|p| {
                    let mut idx: Vec<usize> = (0..n - k).collect();
                    idx.sort_by_key(|&j| p[k + j]);
                    idx
                })
                .collect()
        })
        .collect();
    let mut lambda = Vec::with_capacity(n);
    let mut partial = vec![0i64; points.len()];
    fn dfs(
        k: usize,
        n: usize,
        bound: i64,
        points: &[Vec<i64>],
        orders: &[Vec<Vec<usize>>],
        lambda: &mut Vec<i64>,
        partial: &mut Vec<i64>,
    ) -> bool {
        let total = -lambda.iter().sum::<i64>();
        if k == n - 1 {
            if total.abs() > bound {
                return false;
            }
            if points.iter().zip(partial.iter()).all(|(p, s)| s + p[k] * total < 0) {
                lambda.push(total);
                return true;
            }
            return false;
        }
        for (pi, p) in points.iter().enumerate() {
            match min_completion(&p[k..], &orders[k][pi], total, bound) {
                None => return false,
                Some(v) if partial[pi] + v >= 0 => return false,
                _ => {}
            }
        }
        for v in -bound..=bound {
            lambda.push(v);
            for (pi, p) in points.iter().enumerate() {
                partial[pi] += p[k] * v;
            }
            if dfs(k + 1, n, bound, points, orders, lambda, partial) {
                return true;
            }
            for (pi, p) in points.iter().enumerate() {
                partial[pi] -= p[k] * v;
            }
            lambda.pop();
        }
        false
    }
    dfs(0, n, bound, points, &orders, &mut lambda, &mut partial).then_some(lambda)
}

/// `max <lambda, p>` over the points.
pub fn max_pairing(points: &[Vec<i64>], lambda: &[i64]) -> i64 {
    points
        .iter()
        .map(|p| p.iter().zip(lambda).map(|(a, b)| a * b).sum())
        .max()
        .unwrap()
}

/// Checks `sum c_j p_j = target`, `sum c_j = 1`, `c >= 0` (and `c > 0`
/// when `strict`) with plain dot products.
pub fn verify_convex_combination(points: &[Vec<BigRational>], coeffs: &[BigRational], target: &[BigRational], strict: bool) -> bool {
    if points.len() != coeffs.len() {
        return false;
    }
    if coeffs.iter().any(|c| c.is_negative() || (strict && c.is_zero())) {
        return false;
    }
    if coeffs.iter().fold(BigRational::zero(), |a, c| a + c) != BigRational::one() {
        return false;
    }
    (0..target.len()).all(|k| {
        let s = points.iter().zip(coeffs).fold(BigRational::zero(), |a, (p, c)| a + &p[k] * c);
        s == target[k]
    })
}

/// Rank over `Q` by sparse elimination with pivots on the smallest column.
pub fn rank_rational(rows: &[BTreeMap<usize, BigRational>]) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
    for row in rows {
        let mut r = row.clone();
        r.retain(|_, v| !v.is_zero());
        while let Some((&c, lead)) = r.iter().next() {
            match pivots.get(&c) {
                None => {
                    let inv = lead.recip();
                    for v in r.values_mut() {
                        *v *= &inv;
                    }
                    pivots.insert(c, r);
                    break;
                }
                Some(p) => {
                    let f = lead.clone();
                    for (pc, pv) in p {
                        let e = r.entry(*pc).or_insert_with(BigRational::zero);
                        *e -= &f * pv;
                    }
                    r.retain(|_, v| !v.is_zero());
                }
            }
        }
    }
    pivots.len()
}

/// Rank modulo `p` by textbook dense elimination.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, pr);
        let inv = pow_mod(a[rank][c], p - 2, p);
        let prow: Vec<u64> = a[rank].iter().map(|v| v * inv % p).collect();
        for r in rank + 1..a.len() {
            let f = a[r][c];
            if f != 0 {
                for j in c..cols {
                    a[r][j] = (a[r][j] + (p - f) * prow[j]) % p;
                }
            }
        }
        a[rank] = prow;
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Affine rank of rational points through [`rank_rational`].
pub fn affine_rank(points: &[Vec<BigRational>]) -> usize {
    let base = &points[0];
    let rows: Vec<BTreeMap<usize, BigRational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).enumerate().map(|(i, (a, b))| (i, a - b)).collect())
        .collect();
    rank_rational(&rows)
}

fn binomial_big(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `y(x0, x1 + a1 x0, ..., x_m + a_m x0)` by binomial expansion of every
/// term, as a map from exponent vectors to coefficients.
pub fn dense_ga_substitute(y: &Polynomial, a: &[BigRational]) -> BTreeMap<Vec<u32>, BigRational> {
    let n = y.nvars();
    let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for (m, c) in y.terms() {
        let c = c.as_rational().unwrap().clone();
        let e = m.exponents();
        // iterate over k with 0 <= k_i <= e_i for i >= 1
        let mut k: Vec<u32> = vec![0; n];
        loop {
            let mut coeff = c.clone();
            let mut exps = vec![0u32; n];
            exps[0] = e[0];
            for i in 1..n {
                coeff *= BigRational::from_integer(binomial_big(e[i], k[i]));
                let rest = e[i] - k[i];
                if rest > 0 {
                    coeff *= num_traits::pow(a[i - 1].clone(), rest as usize);
                }
                exps[i] = k[i];
                exps[0] += rest;
            }
            if !coeff.is_zero() {
                let slot = out.entry(exps).or_insert_with(BigRational::zero);
                *slot += coeff;
            }
            let mut i = 1;
            while i < n {
                if k[i] < e[i] {
                    k[i] += 1;
                    break;
                }
                k[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Normal form for the Fermat family `f3 = x1^3 + ... + x_m^3`, where
/// `d f3/dx_i = 3 x_i^2` and `W2` is spanned by the square-free quadrics.
/// Returns `(c1 keyed by (i, j) with i < j, c2, c3)`.
pub type FermatNormalForm = (BTreeMap<(usize, usize), BigRational>, Vec<BigRational>, BigRational);

pub fn fermat_normal_form(y: &Polynomial) -> FermatNormalForm {
    let n = y.nvars();
    let mut cube = vec![0u32; n];
    cube[1] = 3;
    let s = y.coeff(&Monomial::new(cube.clone())).as_rational().unwrap().clone();
    let coeff = |map: &BTreeMap<Vec<u32>, BigRational>, e: Vec<u32>| map.get(&e).cloned().unwrap_or_else(BigRational::zero);
    let raw: BTreeMap<Vec<u32>, BigRational> = y
        .terms()
        .map(|(m, c)| (m.exponents().to_vec(), c.as_rational().unwrap() / &s))
        .collect();
    let three = BigRational::from_integer(3.into());
    let a: Vec<BigRational> = (1..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[0] = 1;
            e[i] = 2;
            -coeff(&raw, e) / &three
        })
        .collect();
    let ys = Polynomial::from_terms(
        n,
        3,
        vgit_core::Field::Rational,
        raw.iter()
            .map(|(e, c)| (Monomial::new(e.clone()), vgit_core::Scalar::Rational(c.clone()))),
    )
    .unwrap();
    let moved = dense_ga_substitute(&ys, &a);
    let mut c1 = BTreeMap::new();
    for i in 1..n {
        for j in i + 1..n {
            let mut e = vec![0u32; n];
            e[0] = 1;
            e[i] = 1;
            e[j] = 1;
            c1.insert((i, j), coeff(&moved, e));
        }
    }
    let c2 = (1..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[0] = 2;
            e[i] = 1;
            coeff(&moved, e)
        })
        .collect();
    let mut e = vec![0u32; n];
    e[0] = 3;
    (c1, c2, coeff(&moved, e))
}

/// State points `m + t e_i` in the documented order: support of `Y`
/// greatest first, then the variables of `H` in support order.
pub fn state_points(y: &Polynomial, h: &Polynomial, t: &BigRational) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    for m in y.support() {
        for hm in h.support() {
            let i = hm.exponents().iter().position(|&e| e == 1).unwrap();
            let mut p: Vec<BigRational> = m.exponents().iter().map(|&e| BigRational::from_integer(e.into())).collect();
            p[i] += t;
            out.push(p);
        }
    }
    out
}

fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for mut rest in exponent_vectors(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// `dim (K[x]/(partials))_k` for rational `f`, from its own multiplication
/// matrix and [`rank_rational`].
pub fn jacobian_graded_dim(f: &Polynomial, k: u32) -> usize {
    let n = f.nvars();
    let d = f.degree();
    let cols = exponent_vectors(n, k);
    if k + 1 < d {
        return cols.len();
    }
    let index: std::collections::HashMap<Vec<u32>, usize> = cols.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rows = Vec::new();
    for s in exponent_vectors(n, k + 1 - d) {
        for i in 0..n {
            let mut row = BTreeMap::new();
            for (m, c) in f.terms() {
                let e = m.exponents();
                if e[i] == 0 {
                    continue;
                }
                let mut t: Vec<u32> = e.iter().zip(&s).map(|(a, b)| a + b).collect();
                t[i] -= 1;
                let v = c.as_rational().unwrap() * BigRational::from_integer(e[i].into());
                *row.entry(index[&t]).or_insert_with(BigRational::zero) += v;
            }
            rows.push(row);
        }
    }
    cols.len() - rank_rational(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_finds_axis_destabilizer() {
        // cone points 3e_i + (1/2) e_0 scaled by 2: (1, 6e_i)
        let pts: Vec<Vec<i64>> = (1..7)
            .map(|i| {
                let mut p = vec![0; 7];
                p[0] = 1;
                p[i] = 6;
                p
            })
            .collect();
        // at t = 1/2 the cone pair is semistable: no strict destabilizer
        assert_eq!(brute_force_destabilizer(&pts, 3), None);
        let pts: Vec<Vec<i64>> = (1..7)
            .map(|i| {
                let mut p = vec![0; 7];
                p[0] = 49;
                p[i] = 300;
                p
            })
            .collect();
        let l = brute_force_destabilizer(&pts, 6).unwrap();
        assert!(max_pairing(&pts, &l) < 0);
        assert_eq!(l.iter().sum::<i64>(), 0);
    }

    #[test]
    fn rank_oracles_agree() {
        let rows = vec![vec![1u64, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod_p(&rows, 10007), 2);
        let q: Vec<BTreeMap<usize, BigRational>> = rows
            .iter()
            .map(|r| r.iter().enumerate().map(|(i, &v)| (i, BigRational::from_integer((v as i64).into()))).collect())
            .collect();
        assert_eq!(rank_rational(&q), 2);
    }

    #[test]
    fn hand_computed_fermat_normal_form() {
        let y = vgit_core::parse_poly("x1^3+x2^3+x3^3+x4^3+x5^3+x6^3 + x0*x1^2", 7, vgit_core::Field::Rational).unwrap();
        let (c1, c2, c3) = fermat_normal_form(&y);
        assert!(c1.values().all(Zero::is_zero));
        assert_eq!(c2[0], BigRational::new((-1).into(), 3.into()));
        assert!(c2[1..].iter().all(Zero::is_zero));
        assert_eq!(c3, BigRational::new(2.into(), 27.into()));
    }
}
