use num_rational::BigRational;
use proptest::prelude::*;
use vgit_core::fiber::*;
use vgit_core::{monomial_basis, parse_poly, Field, Polynomial, Scalar};

fn member(f3: &Polynomial, coeffs: &[i64]) -> Polynomial {
    // coefficients on the monomials of degree 3 that involve x0
    let n = f3.nvars();
    let mons: Vec<_> = monomial_basis(n, 3).into_iter().filter(|m| m.exponents()[0] > 0).collect();
    let mut y = f3.clone();
    for (m, &c) in mons.iter().zip(coeffs) {
        if c != 0 {
            let t = Polynomial::from_terms(n, 3, Field::Rational, [(m.clone(), Scalar::from_i64(c, Field::Rational))]).unwrap();
            y = y.add(&t).unwrap();
        }
    }
    y
}

fn family() -> ContainmentFamily {
    build_family(&parse_poly("x1^3 + x2^3 + x3^3 + x1*x2*x3", 4, Field::Rational).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_is_invariant(
        coeffs in proptest::collection::vec(-3i64..=3, 10),
        a in proptest::collection::vec(-4i64..=4, 3),
        t in prop_oneof![-3i64..=-1, 1i64..=3],
        den in 1i64..4,
    ) {
        let fam = family();
        let y = member(fam.f3(), &coeffs);
        let g = GroupElement::new(
            a.iter().map(|&v| BigRational::new(v.into(), den.into())).collect(),
            BigRational::from_integer(t.into()),
        ).unwrap();
        let gy = group_act(&g, &y).unwrap();
        match normal_form(&fam, &y) {
            Ok(p) => {
                let q = normal_form(&fam, &gy).unwrap();
                prop_assert!(weighted_equal(&p, &q).unwrap());
                prop_assert_eq!(q, p.scaled(&BigRational::from_integer(t.into())));
            }
            Err(e) => {
                prop_assert_eq!(e.clone(), FiberError::ConeOrbit);
                prop_assert_eq!(normal_form(&fam, &gy).unwrap_err(), e);
            }
        }
    }

    #[test]
    fn ga_normalize_is_a_projection(coeffs in proptest::collection::vec(-5i64..=5, 6)) {
        let fam = family();
        let quad: Vec<_> = fam.quadric_monomials().to_vec();
        let mut f2 = Polynomial::zero(4, 2, Field::Rational);
        for (m, &c) in quad.iter().zip(&coeffs) {
            let t = Polynomial::from_terms(4, 2, Field::Rational, [(m.clone(), Scalar::from_i64(c, Field::Rational))]).unwrap();
            f2 = f2.add(&t).unwrap();
        }
        let (_, once) = ga_normalize(&fam, &f2).unwrap();
        let (a, twice) = ga_normalize(&fam, &once).unwrap();
        prop_assert!(a.iter().all(|v| *v == BigRational::from_integer(0.into())));
        prop_assert_eq!(twice, once);
    }
}

#[test]
fn family_ledger_in_lower_dimension() {
    let fam = family();
    assert_eq!(fam.coordinate_ledger(), (3, 3, 1));
    assert_eq!(fam.quotient_dim(), 6);
}

/// `1000` group elements from a fixed linear congruential stream.
fn group_elements(seed: u64) -> Vec<GroupElement> {
    let mut s = seed | 1;
    let mut next = move |m: i64| {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 33) % m as u64) as i64
    };
    (0..1000)
        .map(|_| {
            let den = 1 + next(3);
            let a = (0..3).map(|_| BigRational::new((next(9) - 4).into(), den.into())).collect();
            let t = [-3, -2, -1, 1, 2, 3][next(6) as usize];
            GroupElement::new(a, BigRational::from_integer(t.into())).unwrap()
        })
        .collect()
}

fn proportional(p: &Polynomial, q: &Polynomial) -> bool {
    let Some((m, c)) = p.leading_term() else {
        return q.is_zero();
    };
    let d = q.coeff(m);
    if d.is_zero() {
        return false;
    }
    p.scale(&d) == q.scale(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn distinct_normal_forms_are_not_related_by_the_group(
        c1 in proptest::collection::vec(-2i64..=2, 10),
        c2 in proptest::collection::vec(-2i64..=2, 10),
    ) {
        let fam = family();
        let y = member(fam.f3(), &c1);
        let z = member(fam.f3(), &c2);
        let (Ok(p), Ok(q)) = (normal_form(&fam, &y), normal_form(&fam, &z)) else {
            return Ok(());
        };
        prop_assume!(!weighted_equal(&p, &q).unwrap());
        let seed = c1.iter().chain(&c2).fold(17u64, |h, &c| h.wrapping_mul(31).wrapping_add(c as u64));
        for g in group_elements(seed) {
            prop_assert!(!proportional(&group_act(&g, &y).unwrap(), &z));
        }
    }
}
