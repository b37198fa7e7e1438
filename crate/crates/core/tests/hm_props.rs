mod common;

use common::poly_strategy;
use num_rational::BigRational;
use proptest::prelude::*;
use vgit_core::hm::*;
use vgit_core::{Field, Polynomial};

fn weights(n: usize) -> impl Strategy<Value = OnePs> {
    proptest::collection::vec(-6i64..=6, n - 1).prop_map(|mut w| {
        let s: i64 = w.iter().sum();
        w.push(-s);
        OnePs::new(w).unwrap()
    })
}

fn hyperplane(n: usize) -> impl Strategy<Value = Polynomial> {
    poly_strategy(n, 1, Field::Rational).prop_filter("nonzero", |h| !h.is_zero())
}

fn slope() -> impl Strategy<Value = BigRational> {
    (0i64..=12, 1i64..=6).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mu_is_homogeneous(f in poly_strategy(4, 3, Field::Rational), l in weights(4), k in 1i64..5) {
        prop_assume!(!f.is_zero());
        prop_assert_eq!(mu(&f, &l.scale(k)).unwrap(), k * mu(&f, &l).unwrap());
    }

    #[test]
    fn limit_keeps_the_weight(
        y in poly_strategy(4, 3, Field::Rational),
        h in hyperplane(4),
        l in weights(4),
        t in slope(),
    ) {
        prop_assume!(!y.is_zero());
        let pair = PairConfig::new(y, h, t).unwrap();
        let lim = limit_pair(&pair, &l).unwrap();
        prop_assert_eq!(mu_pair(&lim, &l).unwrap(), mu_pair(&pair, &l).unwrap());
        prop_assert_eq!(limit_pair(&lim, &l).unwrap(), lim.clone());
        // the limit is fixed by lambda, so mu(lim, -lambda) = -mu(lim, lambda)
        prop_assert_eq!(mu_pair(&lim, &l.negate()).unwrap(), -mu_pair(&lim, &l).unwrap());
    }

    #[test]
    fn verdicts_carry_valid_certificates(
        y in poly_strategy(4, 3, Field::Rational),
        h in hyperplane(4),
        t in slope(),
    ) {
        prop_assume!(!y.is_zero());
        let pair = PairConfig::new(y, h, t).unwrap();
        let v = is_torus_semistable(&pair).unwrap();
        prop_assert!(verify_verdict(&pair, &v));
        if let Certificate::Destabilizer(l) = &v.certificate {
            prop_assert_eq!(l.clone(), l.primitive());
        }
    }

    #[test]
    fn verdict_is_permutation_equivariant(
        y in poly_strategy(4, 3, Field::Rational),
        h in hyperplane(4),
        t in slope(),
        perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        prop_assume!(!y.is_zero());
        let pair = PairConfig::new(y.clone(), h.clone(), t.clone()).unwrap();
        let moved = PairConfig::new(
            y.remap_variables(4, &perm).unwrap(),
            h.remap_variables(4, &perm).unwrap(),
            t,
        ).unwrap();
        let a = is_torus_semistable(&pair).unwrap();
        let b = is_torus_semistable(&moved).unwrap();
        prop_assert_eq!(a.status, b.status);
        if let Certificate::Destabilizer(l) = &a.certificate {
            prop_assert!(mu_pair(&moved, &l.permute(&perm)).unwrap() < BigRational::from_integer(0.into()));
        }
    }
}

#[test]
fn semistable_interval_matches_pointwise_verdicts() {
    let y = vgit_core::parse_poly("x0^2*x1 + x1^3 + x2^3 + x0*x2*x3 + x3^3", 4, Field::Rational).unwrap();
    let h = vgit_core::parse_poly("x0", 4, Field::Rational).unwrap();
    let pair = Pair::new(y, h).unwrap();
    let interval = semistable_interval(&pair, 10_000).unwrap();
    for k in 0..=40 {
        let t = BigRational::new(k.into(), 10.into());
        let ss = is_torus_semistable(&pair.at(t.clone()).unwrap()).unwrap().status.is_semistable();
        let inside = match &interval {
            None => false,
            Some((lo, hi)) => &t >= lo && hi.as_ref().is_none_or(|hi| &t <= hi),
        };
        assert_eq!(ss, inside, "t = {t}");
    }
}
