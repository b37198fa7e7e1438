//! Seeded generators for test instances.

use num_rational::BigRational;
use rand::Rng;
use vgit_core::fiber::GroupElement;
use vgit_core::{monomial_basis, Field, Monomial, Polynomial, Scalar};

fn nonzero(rng: &mut impl Rng, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// Cubic using every monomial, with nonzero coefficients in `[-9, 9]`.
pub fn dense_cubic(rng: &mut impl Rng, nvars: usize, field: Field) -> Polynomial {
    let terms = monomial_basis(nvars, 3).into_iter().map(|m| {
        let c = match field {
            Field::Rational => Scalar::from_i64(nonzero(rng, 9), field),
            Field::Prime(p) => Scalar::from_i64(rng.gen_range(1..p as i64), field),
        };
        (m, c)
    });
    Polynomial::from_terms(nvars, 3, field, terms).unwrap()
}

/// `f3 + x0 f2 + x0^2 f1 + x0^3 f0` with random small integer `f2, f1, f0`.
pub fn family_member(rng: &mut impl Rng, f3: &Polynomial) -> Polynomial {
    let n = f3.nvars();
    let terms: Vec<(Monomial, Scalar)> = monomial_basis(n, 3)
        .into_iter()
        .filter(|m| m.exponents()[0] > 0)
        .filter_map(|m| {
            let c = rng.gen_range(-4i64..=4);
            (c != 0).then(|| (m, Scalar::from_i64(c, Field::Rational)))
        })
        .collect();
    let tail = Polynomial::from_terms(n, 3, Field::Rational, terms).unwrap();
    f3.add(&tail).unwrap()
}

pub fn small_rational(rng: &mut impl Rng) -> BigRational {
    BigRational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=4).into())
}

pub fn group_element(rng: &mut impl Rng, m: usize) -> GroupElement {
    let a = (0..m).map(|_| small_rational(rng)).collect();
    let t = BigRational::new(nonzero(rng, 4).into(), rng.gen_range(1i64..=3).into());
    GroupElement::new(a, t).unwrap()
}

/// Exponent vectors of a support spreading degree evenly over all variables.
fn balanced_support(rng: &mut impl Rng, n: usize) -> Vec<Vec<u32>> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let pattern: &[(usize, u32)] = match rng.gen_range(0..4) {
        0 => &[(0, 3)],
        1 => &[(0, 1), (1, 1), (2, 1)],
        2 => &[(0, 2), (1, 1)],
        _ => &[(0, 1), (3, 2)],
    };
    (0..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            for &(shift, pow) in pattern {
                e[perm[(i + shift) % n]] += pow;
            }
            e
        })
        .collect()
}

/// A pair with few monomials: either a random handful, or a balanced
/// support with a couple of monomials dropped or added. The hyperplane uses
/// one or two coordinates and the slope comes from a short list.
pub fn small_pair(rng: &mut impl Rng, nvars: usize) -> (Polynomial, Polynomial, BigRational) {
    let basis = monomial_basis(nvars, 3);
    let mut exps: Vec<Vec<u32>> = if rng.gen_bool(0.5) {
        let mut e = balanced_support(rng, nvars);
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..e.len());
            e.swap_remove(i);
        }
        e
    } else {
        Vec::new()
    };
    for _ in 0..rng.gen_range(if exps.is_empty() { 1 } else { 0 }..=3) {
        exps.push(basis[rng.gen_range(0..basis.len())].exponents().to_vec());
    }
    let terms: Vec<(Monomial, Scalar)> = exps
        .into_iter()
        .map(|e| (Monomial::new(e), Scalar::from_i64(rng.gen_range(1..=3), Field::Rational)))
        .collect();
    let y = Polynomial::from_terms(nvars, 3, Field::Rational, terms).unwrap();
    let i = rng.gen_range(0..nvars);
    let mut hterms = vec![(Monomial::var(i, nvars), Scalar::one(Field::Rational))];
    if rng.gen_bool(0.3) {
        let j = (i + rng.gen_range(1..nvars)) % nvars;
        hterms.push((Monomial::var(j, nvars), Scalar::from_i64(2, Field::Rational)));
    }
    let h = Polynomial::from_terms(nvars, 1, Field::Rational, hterms).unwrap();
    let slopes = [(0, 1), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1), (3, 2)];
    let (a, b) = slopes[rng.gen_range(0..slopes.len())];
    (y, h, BigRational::new(a.into(), b.into()))
}
