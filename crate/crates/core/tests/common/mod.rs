#![allow(dead_code)]

use proptest::prelude::*;
use vgit_core::{monomial_basis, Field, Monomial, Polynomial, Scalar};

/// Random homogeneous polynomial with small integer coefficients on a random
/// subset of the monomials of `degree`.
pub fn poly_strategy(nvars: usize, degree: u32, field: Field) -> impl Strategy<Value = Polynomial> {
    let basis = monomial_basis(nvars, degree);
    let len = basis.len();
    proptest::collection::vec((0..len, -5i64..=5), 1..=len.min(8)).prop_map(move |terms| {
        let mut p = Polynomial::zero(nvars, degree, field);
        for (i, c) in terms {
            let t = Polynomial::from_terms(nvars, degree, field, [(basis[i].clone(), Scalar::from_i64(c, field))]).unwrap();
            p = p.add(&t).unwrap();
        }
        p
    })
}

pub fn var_monomial(i: usize, n: usize) -> Monomial {
    Monomial::var(i, n)
}
