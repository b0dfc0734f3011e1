mod common;

use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use stieltjes::ratpoly::{real_roots, RootValue};
use stieltjes::RatPoly;

proptest! {
    #[test]
    fn delta_is_linear(p in poly(6), r in poly(6), a in rational(), b in rational(), h in positive_rational()) {
        let lhs = (&p.scale(&a) + &r.scale(&b)).delta(&h).unwrap();
        let rhs = &p.delta(&h).unwrap().scale(&a) + &r.delta(&h).unwrap().scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn difference_leibniz_identity(y1 in poly(5), y2 in poly(5), h in positive_rational()) {
        let d = |p: &RatPoly| p.delta(&h).unwrap();
        let (y1h, y2h) = (y1.shift(&h), y2.shift(&h));
        let bracket = &(&y1h * &d(&y2)) - &(&d(&y1) * &y2h);
        let rhs = &(&y1h * &d(&d(&y2))) - &(&d(&d(&y1)) * &y2h);
        prop_assert_eq!(d(&bracket), rhs);
    }

    #[test]
    fn shift_round_trip(p in poly(7), s in rational()) {
        prop_assert_eq!(p.shift(&s).shift(&-s), p);
    }

    #[test]
    fn reported_roots_are_roots(p in poly(7), extra in distinct_rationals(3)) {
        let p = &p * &RatPoly::from_roots(&extra);
        prop_assume!(!p.is_zero());
        let roots = real_roots(&p, 64).unwrap();
        for r in roots.roots() {
            match &r.value {
                RootValue::Exact(x) => prop_assert!(p.eval(x).is_zero()),
                RootValue::Isolated(iv) => {
                    let f = iv.poly();
                    prop_assert!((f.eval(iv.lo()) * f.eval(iv.hi())).is_negative());
                    prop_assert!(p.eval(iv.lo()).signum() != p.eval(iv.hi()).signum() || r.multiplicity % 2 == 0);
                }
            }
        }
        for x in &extra {
            prop_assert!(roots.roots().iter().any(|r| r.value.exact() == Some(x)));
        }
    }
}
