//! Exact convex-hull membership with certificates.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::simplex::{minimize, LpOutcome, DEFAULT_PIVOT_BUDGET};
use super::{dot, LinalgError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HullResult {
    /// Convex coefficients reproducing the target exactly.
    InHull { coefficients: Vec<BigRational> },
    /// `lambda` with `<lambda, p - target> < 0` for every point `p`.
    Separated { functional: Vec<BigRational> },
}

fn check_shape(points: &[Vec<BigRational>], target: &[BigRational]) -> Result<(), LinalgError> {
    if points.is_empty() {
        return Err(LinalgError::DimensionMismatch("empty point set".into()));
    }
    if let Some(p) = points.iter().find(|p| p.len() != target.len()) {
        return Err(LinalgError::DimensionMismatch(format!(
            "point of length {} against target of length {}",
            p.len(),
            target.len()
        )));
    }
    Ok(())
}

/// Decides `target in conv(points)` by phase-1 feasibility of
/// `sum mu_j p_j = target, sum mu_j = 1, mu >= 0`.
pub fn hull_membership(points: &[Vec<BigRational>], target: &[BigRational]) -> Result<HullResult, LinalgError> {
    hull_membership_with_budget(points, target, DEFAULT_PIVOT_BUDGET)
}

pub fn hull_membership_with_budget(
    points: &[Vec<BigRational>],
    target: &[BigRational],
    budget: usize,
) -> Result<HullResult, LinalgError> {
    check_shape(points, target)?;
    let d = target.len();
    let mut a = Vec::with_capacity(d + 1);
    for k in 0..d {
        a.push(points.iter().map(|p| p[k].clone()).collect::<Vec<_>>());
    }
    a.push(vec![BigRational::one(); points.len()]);
    let mut b = target.to_vec();
    b.push(BigRational::one());
    let c = vec![BigRational::zero(); points.len()];
    match minimize(&a, &b, &c, budget)? {
        LpOutcome::Optimal { x, .. } => Ok(HullResult::InHull { coefficients: x }),
        LpOutcome::Infeasible { farkas } => {
            // (lambda, s) with <lambda,p> + s <= 0 < <lambda,target> + s
            let functional = farkas[..d].to_vec();
            Ok(HullResult::Separated { functional })
        }
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

/// Re-checks a certificate using dot products only.
pub fn verify_hull_result(points: &[Vec<BigRational>], target: &[BigRational], result: &HullResult) -> bool {
    match result {
        HullResult::InHull { coefficients } => {
            if coefficients.len() != points.len() || coefficients.iter().any(|c| c.is_negative()) {
                return false;
            }
            let total: BigRational = coefficients.iter().sum();
            if !total.is_one() {
                return false;
            }
            (0..target.len()).all(|k| {
                let s: BigRational = points.iter().zip(coefficients).map(|(p, c)| &p[k] * c).sum();
                s == target[k]
            })
        }
        HullResult::Separated { functional } => {
            let level = dot(functional, target);
            points.iter().all(|p| dot(functional, p) < level)
        }
    }
}

/// Largest `s` such that `target = sum mu_j p_j` with convex `mu` and every
/// `mu_j >= s`, together with such a `mu`. `None` when `target` is outside
/// the hull. `s > 0` exactly when `target` lies in the relative interior.
pub fn max_min_coefficient(
    points: &[Vec<BigRational>],
    target: &[BigRational],
    budget: usize,
) -> Result<Option<(BigRational, Vec<BigRational>)>, LinalgError> {
    check_shape(points, target)?;
    let d = target.len();
    let n = points.len();
    // mu_j = nu_j + s with nu >= 0, s >= 0; variables (nu_1..nu_n, s)
    let mut a = Vec::with_capacity(d + 1);
    for k in 0..d {
        let mut row: Vec<BigRational> = points.iter().map(|p| p[k].clone()).collect();
        row.push(points.iter().map(|p| p[k].clone()).sum());
        a.push(row);
    }
    let mut last = vec![BigRational::one(); n];
    last.push(BigRational::from_integer((n as i64).into()));
    a.push(last);
    let mut b = target.to_vec();
    b.push(BigRational::one());
    let mut c = vec![BigRational::zero(); n];
    c.push(-BigRational::one());
    match minimize(&a, &b, &c, budget)? {
        LpOutcome::Optimal { x, .. } => {
            let s = x[n].clone();
            let mu = x[..n].iter().map(|v| v + &s).collect();
            Ok(Some((s, mu)))
        }
        LpOutcome::Infeasible { .. } => Ok(None),
        LpOutcome::Unbounded => unreachable!("coefficients are bounded by 1/n"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn pts(xs: &[&[(i64, i64)]]) -> Vec<Vec<BigRational>> {
        xs.iter().map(|p| p.iter().map(|&(n, d)| rat(n, d)).collect()).collect()
    }

    #[test]
    fn midpoint_is_in_hull() {
        let p = pts(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        let t = vec![rat(1, 2), rat(1, 2)];
        let r = hull_membership(&p, &t).unwrap();
        assert_eq!(r, HullResult::InHull { coefficients: vec![rat(1, 2), rat(1, 2)] });
        assert!(verify_hull_result(&p, &t, &r));
    }

    #[test]
    fn outside_point_is_separated() {
        let p = pts(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        let t = vec![rat(2, 1), rat(-1, 1)];
        let r = hull_membership(&p, &t).unwrap();
        let HullResult::Separated { functional } = &r else { panic!("{r:?}") };
        assert!(dot(functional, &[rat(-1, 1), rat(1, 1)]).is_negative());
        assert!(dot(functional, &[rat(-2, 1), rat(2, 1)]).is_negative());
        assert!(verify_hull_result(&p, &t, &r));
    }

    #[test]
    fn singleton_hull() {
        let p = pts(&[&[(3, 7), (1, 2)]]);
        let r = hull_membership(&p, &p[0]).unwrap();
        assert_eq!(r, HullResult::InHull { coefficients: vec![rat(1, 1)] });
    }

    #[test]
    fn dimension_mismatch() {
        let p = pts(&[&[(1, 1)]]);
        assert!(matches!(
            hull_membership(&p, &[rat(1, 1), rat(0, 1)]),
            Err(LinalgError::DimensionMismatch(_))
        ));
        assert!(hull_membership(&[], &[rat(1, 1)]).is_err());
    }

    #[test]
    fn interior_versus_boundary() {
        let tri = pts(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]);
        let (s, mu) = max_min_coefficient(&tri, &[rat(1, 3), rat(1, 3)], 1000).unwrap().unwrap();
        assert_eq!(s, rat(1, 3));
        assert_eq!(mu, vec![rat(1, 3); 3]);
        let (s, _) = max_min_coefficient(&tri, &[rat(1, 2), rat(0, 1)], 1000).unwrap().unwrap();
        assert!(s.is_zero());
        assert!(max_min_coefficient(&tri, &[rat(1, 1), rat(1, 1)], 1000).unwrap().is_none());
    }
}
