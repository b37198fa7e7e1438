mod common;

use common::poly_strategy;
use proptest::prelude::*;
use vgit_core::poly::infer_nvars;
use vgit_core::{parse_poly, ExactMatrix, Field, Polynomial, Scalar};

fn matrix_strategy(n: usize) -> impl Strategy<Value = ExactMatrix> {
    proptest::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        let rows: Vec<Vec<i64>> = v.chunks(n).map(|c| c.to_vec()).collect();
        ExactMatrix::from_i64_rows(&rows, Field::Rational)
    })
}

proptest! {
    #[test]
    fn format_parse_round_trip(f in poly_strategy(4, 3, Field::Rational)) {
        let text = f.to_string();
        let g = parse_poly(&text, 4, Field::Rational).unwrap();
        prop_assert_eq!(g.to_string(), text);
        if !f.is_zero() {
            prop_assert_eq!(g, f);
        }
    }

    #[test]
    fn euler_identity(f in poly_strategy(4, 3, Field::Rational)) {
        prop_assume!(!f.is_zero());
        let mut acc = Polynomial::zero(4, 3, Field::Rational);
        for (i, d) in f.gradient().iter().enumerate() {
            if !d.is_zero() {
                acc = acc.add(&d.mul(&Polynomial::variable(i, 4, Field::Rational)).unwrap()).unwrap();
            }
        }
        prop_assert_eq!(acc, f.scale(&Scalar::from_i64(3, Field::Rational)));
    }

    #[test]
    fn reduction_mod_p_is_a_ring_map(
        f in poly_strategy(3, 2, Field::Rational),
        g in poly_strategy(3, 2, Field::Rational),
    ) {
        let p = 10007;
        let lhs = f.mul(&g).unwrap().reduce_mod_p(p).unwrap();
        let rhs = f.reduce_mod_p(p).unwrap().mul(&g.reduce_mod_p(p).unwrap()).unwrap();
        prop_assert_eq!(lhs.to_string(), rhs.to_string());
        let s = f.add(&g).unwrap().reduce_mod_p(p).unwrap();
        let t = f.reduce_mod_p(p).unwrap().add(&g.reduce_mod_p(p).unwrap()).unwrap();
        prop_assert_eq!(s.to_string(), t.to_string());
    }

    #[test]
    fn substitution_composes(f in poly_strategy(3, 3, Field::Rational), m in matrix_strategy(3), n in matrix_strategy(3)) {
        let mn = m.mul(&n).unwrap();
        if let (Ok(fn_), Ok(fmn)) = (f.substitute_linear(&n), f.substitute_linear(&mn)) {
            if let Ok(both) = fn_.substitute_linear(&m) {
                prop_assert_eq!(both, fmn);
            }
        }
    }

    #[test]
    fn derivatives_commute(f in poly_strategy(3, 4, Field::Rational), i in 0usize..3, j in 0usize..3) {
        let a = f.partial_derivative(i).unwrap().partial_derivative(j).unwrap();
        let b = f.partial_derivative(j).unwrap().partial_derivative(i).unwrap();
        prop_assert_eq!(a.to_string(), b.to_string());
    }
}

#[test]
fn inferred_variable_count() {
    assert_eq!(infer_nvars("x0*x6^2 + x3"), 7);
}
