mod common;

use common::poly_strategy;
use proptest::prelude::*;
use vgit_core::jacobian::*;
use vgit_core::linalg::Echelon;
use vgit_core::poly::binomial;
use vgit_core::{Field, Polynomial};

fn exact_rank(f: &Polynomial, k: u32) -> usize {
    let (cols, rows) = multiplication_rows(f, k).unwrap();
    let mut e = Echelon::new(cols, f.field());
    for r in &rows {
        e.insert(r);
    }
    e.rank()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn smooth_cubics_have_binomial_hilbert_series(f in poly_strategy(4, 3, Field::Prime(32003))) {
        prop_assume!(!f.is_zero());
        let s = is_smooth(&f).unwrap();
        if s.smooth {
            for k in 0..=4 {
                prop_assert_eq!(graded_dim(&f, k).unwrap() as u64, binomial(4, k as u64));
                prop_assert_eq!(graded_dim(&f, k).unwrap(), graded_dim(&f, 4 - k).unwrap());
            }
        }
    }

    #[test]
    fn modular_witness_agrees_with_exact_rank(f in poly_strategy(4, 3, Field::Rational), k in 2u32..6) {
        prop_assume!(!f.is_zero());
        let (dim, report) = graded_dim_report(&f, k, &JacobianConfig::default()).unwrap();
        let cols = report.cols;
        prop_assert_eq!(cols - exact_rank(&f, k), dim);
        let rp = exact_rank(&f.reduce_mod_p(32003).unwrap(), k);
        prop_assert!(rp <= exact_rank(&f, k));
    }
}

#[test]
fn pairing_ranks_match_dimensions_on_a_prime_field() {
    let f = vgit_core::parse_poly(
        "x0^3 + x1^3 + x2^3 + x3^3 + 2*x0*x1*x2 - x1*x2*x3 + 5*x0^2*x3",
        4,
        Field::Prime(32003),
    )
    .unwrap();
    assert!(is_smooth(&f).unwrap().smooth);
    for a in 0..=4 {
        assert_eq!(gorenstein_pairing_rank(&f, a).unwrap(), graded_dim(&f, a).unwrap());
    }
}

#[test]
fn classification_is_scale_and_permutation_invariant() {
    use vgit_core::Scalar;
    let f = vgit_core::parse_poly("x0*x1^2 + x0*x2^2 + x1^3 + x2^3 + x3^3", 4, Field::Rational).unwrap();
    let pt = |v: &[i64]| v.iter().map(|&x| Scalar::from_i64(x, Field::Rational)).collect::<Vec<_>>();
    assert_eq!(classify_point(&f, &pt(&[1, 0, 0, 0])).unwrap(), SingularityClass::Degenerate(2));
    assert_eq!(classify_point(&f, &pt(&[-3, 0, 0, 0])).unwrap(), SingularityClass::Degenerate(2));
    let perm = [3, 2, 1, 0];
    let g = f.remap_variables(4, &perm).unwrap();
    assert_eq!(classify_point(&g, &pt(&[0, 0, 0, 1])).unwrap(), SingularityClass::Degenerate(2));
    let nodal = vgit_core::parse_poly("x0*x1^2 + x0*x2^2 + x0*x3^2 + x1^3 + x2^3 + x3^3", 4, Field::Rational).unwrap();
    assert_eq!(classify_point(&nodal, &pt(&[2, 0, 0, 0])).unwrap(), SingularityClass::Node);
}
