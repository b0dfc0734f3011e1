use stieltjes::norlund::{principal_sum_numeric, Phi, RegularizationConfig};

fn families() -> Vec<(Phi, f64, f64)> {
    vec![
        (Phi::Constant { a: 1.5 }, 0.0, 1.0),
        (Phi::Constant { a: -2.0 }, -1.0, 0.5),
        (Phi::Exponential { coef: 1.0, rate: 1.0 }, 0.0, 1.0),
        (Phi::Exponential { coef: -0.5, rate: 0.3 }, 1.0, 0.25),
        (Phi::Logarithm, 0.0, 1.0),
        (Phi::Logarithm, 0.5, 0.5),
        (Phi::PolyExp { coeffs: vec![1.0, -2.0, 0.5], rate: 0.5 }, 0.0, 1.0),
    ]
}

#[test]
fn difference_property() {
    let cfg = RegularizationConfig::default();
    for (phi, c, h) in families() {
        for i in 0..10 {
            let x = 0.75 + 0.6 * i as f64;
            let f0 = principal_sum_numeric(&phi, c, x, h, &cfg).unwrap();
            let f1 = principal_sum_numeric(&phi, c, x + h, h, &cfg).unwrap();
            let gap = (f1.value - f0.value - h * phi.eval(x)).abs();
            assert!(gap <= f0.error_estimate + f1.error_estimate, "{phi:?} x = {x}: {gap:e}");
        }
    }
}

#[test]
fn halving_the_last_mu_is_consistent() {
    let cfg = RegularizationConfig::default();
    let mut longer = cfg.clone();
    longer.mu_schedule.push(cfg.mu_schedule.last().unwrap() / 2.0);
    for (phi, c, h) in families() {
        let a = principal_sum_numeric(&phi, c, 2.0, h, &cfg).unwrap();
        let b = principal_sum_numeric(&phi, c, 2.0, h, &longer).unwrap();
        assert!((a.value - b.value).abs() < 2.0 * a.error_estimate, "{phi:?}");
    }
}

#[test]
fn constant_case_is_independent_of_p() {
    let phi = Phi::Constant { a: 3.0 };
    for (c, x, h) in [(0.0, 3.0, 1.0), (1.0, -2.0, 0.5), (-0.5, 4.0, 2.0)] {
        let v1 = principal_sum_numeric(&phi, c, x, h, &RegularizationConfig::with_pq(1, 0)).unwrap();
        let v2 = principal_sum_numeric(&phi, c, x, h, &RegularizationConfig::with_pq(2, 0)).unwrap();
        assert!((v1.value - v2.value).abs() < v1.error_estimate + v2.error_estimate);
        assert!((v1.value - 3.0 * (x - c - h / 2.0)).abs() < 1e-6);
    }
}
