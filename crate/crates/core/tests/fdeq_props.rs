mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use stieltjes::fdeq::{DifferenceEquation, HypergeometricData};
use stieltjes::solver::polynomial_kernel;

fn equation() -> impl Strategy<Value = DifferenceEquation> {
    (poly(3), poly(2), poly(1), positive_rational()).prop_filter_map("g nonzero", |(g, r, u, h)| {
        DifferenceEquation::new(g, r, u, h).ok()
    })
}

fn hypergeometric() -> impl Strategy<Value = HypergeometricData> {
    (rational(), rational(), rational(), rational(), rational(), positive_rational())
        .prop_map(|(a, b, c, d, f, h)| HypergeometricData { h, a, b, c, d, f })
        .prop_filter("g nonzero", |d| !d.g().is_zero())
}

proptest! {
    #[test]
    fn recurrence_and_absorbed_forms_agree(eq in equation(), y in poly(5)) {
        let h = eq.h().clone();
        let res = eq.residual(&y);
        prop_assert_eq!(eq.to_recurrence_form().apply(&y, &h), res.scale(&(&h * &h)));
        prop_assert_eq!(eq.to_absorbed_form().apply(&y, &h), res);
    }

    #[test]
    fn residual_zero_iff_vanishing_on_lattice(eq in equation(), y in poly(5), x0 in rational()) {
        let res = eq.residual(&y);
        let m = res.degree().unwrap_or(0) + 1;
        let on_lattice = (0..m).all(|k| res.eval(&(&x0 + eq.h() * q(k as i64, 1))).is_zero());
        prop_assert_eq!(on_lattice, res.is_zero());
    }

    #[test]
    fn cauchy_iteration_reproduces_polynomial_solution(hyp in hypergeometric(), n in 0u32..6, x0 in rational()) {
        let eq = hyp.equation(&hyp.lambda_n(n)).unwrap();
        let k = polynomial_kernel(&eq, n as usize);
        prop_assume!(k.dimension == 1);
        let y = &k.basis[0];
        let h = eq.h().clone();
        let at = |j: usize| &x0 + &h * q(j as i64, 1);
        match eq.cauchy_iterate(&x0, y.eval(&x0), y.eval(&at(1)), 12) {
            Ok(vals) => {
                for (j, v) in vals.iter().enumerate() {
                    prop_assert_eq!(v, &y.eval(&at(j)));
                }
            }
            Err(e) => {
                let pole = matches!(e, stieltjes::Error::Pole { .. });
                prop_assert!(pole);
            }
        }
    }

    #[test]
    fn theta_vanishes_at_eigenvalues(a in rational(), d in rational()) {
        let hyp = HypergeometricData { h: q(1, 1), a, b: q(0, 1), c: q(1, 1), d, f: q(0, 1) };
        for n in 0..=50u32 {
            prop_assert!(hyp.theta(&hyp.lambda_n(n), &q(n as i64, 1)).is_zero());
        }
    }
}

