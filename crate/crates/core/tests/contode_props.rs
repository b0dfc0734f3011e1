mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use stieltjes::contode::{
    continuous_kernel, lesky_ttrr, residues, shapiro_case_detect, ContinuousEquation, ShapiroCase, TtrrOutcome,
};
use stieltjes::ratpoly::Poly;
use stieltjes::Rational;

fn lambda_n(a: &Rational, d: &Rational, n: usize) -> Rational {
    let n = q(n as i64, 1);
    -(&n * (&n - q(1, 1)) * a) - &n * d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ttrr_matches_kernel(a in rational(), b in rational(), c in rational(), d in rational(), f in rational(), n in 0usize..8) {
        prop_assume!(!(a.is_zero() && b.is_zero() && c.is_zero()));
        let lambda = lambda_n(&a, &d, n);
        let ceq = ContinuousEquation::hypergeometric(&a, &b, &c, &d, &f, &lambda).unwrap();
        let kernel = continuous_kernel(&ceq, n);
        match lesky_ttrr(&a, &b, &c, &d, &f, n) {
            TtrrOutcome::Solution { poly, free } if free.is_empty() => {
                prop_assert_eq!(kernel.dimension, 1);
                prop_assert_eq!(&kernel.basis[0], &poly);
            }
            TtrrOutcome::Solution { poly, .. } => {
                prop_assert!(ceq.residual(&poly).is_zero());
            }
            TtrrOutcome::NoSolution { .. } => {
                prop_assert!(kernel.element_of_degree(n).is_none());
            }
        }
    }

    #[test]
    fn residues_reconstruct_b(r in distinct_rationals(3), lead in nonzero_rational(), b in poly(2)) {
        prop_assume!(r.len() >= 2);
        let a = Poly::from_roots(&r).scale(&lead);
        let table = residues(&a, &b).unwrap();
        prop_assert_eq!(table.reconstruct(&a), Some(b));
    }

    #[test]
    fn case2_collisions_give_two_solutions(a in nonzero_rational(), b in rational(), c in rational(), t in 1u64..4) {
        let k = 2 * t;
        let d = -(&a * q(k as i64, 1));
        let f = -(q(t as i64, 1) * &b);
        prop_assert_eq!(shapiro_case_detect(&a, &b, &c, &d, &f).unwrap(), ShapiroCase::LeskyCase2 { t });
        let ceq = ContinuousEquation::hypergeometric(&a, &b, &c, &d, &f, &lambda_n(&a, &d, 1)).unwrap();
        prop_assert_eq!(continuous_kernel(&ceq, k as usize).dimension, 2);
    }

    #[test]
    fn collision_only_dimension_follows_ttrr(a in nonzero_rational(), b in rational(), c in rational(), f in rational(), t in 1u64..4) {
        let k = 2 * t;
        let d = -(&a * q(k as i64, 1));
        prop_assume!(f != -(q(t as i64, 1) * &b));
        prop_assert_eq!(shapiro_case_detect(&a, &b, &c, &d, &f).unwrap(), ShapiroCase::CollisionOnly { k });
        let ceq = ContinuousEquation::hypergeometric(&a, &b, &c, &d, &f, &lambda_n(&a, &d, 1)).unwrap();
        let dim = continuous_kernel(&ceq, k as usize).dimension;
        let consistent = matches!(lesky_ttrr(&a, &b, &c, &d, &f, k as usize), TtrrOutcome::Solution { .. });
        prop_assert_eq!(dim, if consistent { 2 } else { 1 });
    }
}

/// A collision outside Lesky's second case that still carries two solutions:
/// the single consistency condition of the recurrence can hold by accident.
#[test]
fn accidental_collision_with_two_solutions() {
    let (a, b, c, d, f) = (q(-30, 1), q(-19, 1), q(11, 1), q(180, 1), q(16, 1));
    assert_eq!(shapiro_case_detect(&a, &b, &c, &d, &f).unwrap(), ShapiroCase::CollisionOnly { k: 6 });
    let ceq = ContinuousEquation::hypergeometric(&a, &b, &c, &d, &f, &lambda_n(&a, &d, 1)).unwrap();
    assert_eq!(continuous_kernel(&ceq, 6).dimension, 2);
    assert!(matches!(lesky_ttrr(&a, &b, &c, &d, &f, 6), TtrrOutcome::Solution { ref free, .. } if free == &vec![1]));
}
