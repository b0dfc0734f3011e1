//! Polynomial solutions of bounded degree by exact nullspace computation.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdeq::{excess_degree, DifferenceEquation, HypergeometricData};
use crate::linalg;
use crate::ratpoly::Poly;
use crate::scalar::{serde_rational, Rational};
use crate::RatPoly;

/// All polynomial solutions of degree at most `degree_bound`.
///
/// The basis is in reduced echelon form ordered by leading degree: each
/// element is monic, leading degrees are distinct and decreasing, and no
/// element has a nonzero coefficient at another element's leading degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelBasis {
    pub degree_bound: usize,
    pub dimension: usize,
    pub basis: Vec<RatPoly>,
}

impl KernelBasis {
    /// Degrees of the basis elements.
    pub fn degrees(&self) -> Vec<usize> {
        self.basis.iter().filter_map(|p| p.degree()).collect()
    }

    /// The element of exact degree `n`, if any.
    pub fn element_of_degree(&self, n: usize) -> Option<&RatPoly> {
        self.basis.iter().find(|p| p.degree() == Some(n))
    }
}

/// Nullspace of `y ↦ residual(y)` on polynomials of degree `<= n`.
///
/// `excess` bounds `deg residual(x^j) - j`; extra zero rows are harmless.
pub(crate) fn kernel_of(n: usize, excess: i64, residual: impl Fn(&RatPoly) -> RatPoly) -> KernelBasis {
    let columns: Vec<RatPoly> = (0..=n)
        .map(|j| residual(&Poly::monomial(Rational::from_integer(1.into()), j)))
        .collect();
    let nrows = (n as i64 + excess.max(0) + 2) as usize;
    let nrows = nrows.max(columns.iter().map(|c| c.coeffs().len()).max().unwrap_or(0));
    let matrix: Vec<Vec<Rational>> = (0..nrows)
        .map(|i| columns.iter().map(|c| c.coeff(i)).collect())
        .collect();
    let null = linalg::nullspace(&matrix, n + 1);

    // Canonical form: RREF with columns ordered from x^n down to x^0.
    let reversed: Vec<Vec<Rational>> = null
        .iter()
        .map(|v| v.iter().rev().cloned().collect())
        .collect();
    let basis: Vec<RatPoly> = linalg::rref(&reversed, n + 1)
        .into_iter()
        .map(|row| Poly::new(row.into_iter().rev().collect()))
        .collect();
    for y in &basis {
        assert!(residual(y).is_zero(), "kernel element failed exact verification");
    }
    KernelBasis { degree_bound: n, dimension: basis.len(), basis }
}

pub fn polynomial_kernel(eq: &DifferenceEquation, n: usize) -> KernelBasis {
    kernel_of(n, excess_degree(eq), |y| eq.residual(y))
}

/// One row of an eigenvalue scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenScanEntry {
    pub n: u32,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
    pub kernel: KernelBasis,
}

/// For each `n <= n_max`, the kernel at `u = λ_n` with degree bound `n_max`.
pub fn eigen_scan(hyp: &HypergeometricData, n_max: u32) -> Result<Vec<EigenScanEntry>> {
    (0..=n_max)
        .map(|n| {
            let lambda = hyp.lambda_n(n);
            let eq = hyp.equation(&lambda)?;
            Ok(EigenScanEntry { n, kernel: polynomial_kernel(&eq, n_max as usize), lambda })
        })
        .collect()
}

/// Constants `(C1, C2)`, not both zero, with `C1 y1 + C2 y2 = 0`, or `None`
/// when the polynomials are linearly independent.
pub fn linear_dependence(y1: &RatPoly, y2: &RatPoly) -> Result<Option<(Rational, Rational)>> {
    let one = Rational::from_integer(1.into());
    match (y1.leading_coeff(), y2.leading_coeff()) {
        (None, None) => Err(Error::ZeroPolynomial("linear_dependence: both inputs")),
        (None, Some(_)) => Ok(Some((one, Rational::zero()))),
        (Some(_), None) => Ok(Some((Rational::zero(), one))),
        (Some(l1), Some(l2)) => {
            if y1.degree() == y2.degree() && y1.scale(l2) == y2.scale(l1) {
                Ok(Some((l2.clone(), -l1.clone())))
            } else {
                Ok(None)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn p(c: &[i64]) -> RatPoly {
        Poly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn hand_checked_kernel() {
        let eq = DifferenceEquation::new(p(&[0, 0, 1]), p(&[2, 1]), p(&[-1]), int(1)).unwrap();
        let k = polynomial_kernel(&eq, 1);
        assert_eq!(k.dimension, 1);
        assert_eq!(k.basis, vec![p(&[1, 1])]);
    }

    #[test]
    fn non_eigenvalue_has_trivial_kernel() {
        let hyp = HypergeometricData { h: int(1), a: int(1), b: int(0), c: int(1), d: int(2), f: int(0) };
        let eq = hyp.equation(&rat(1, 2)).unwrap();
        for n in 0..8 {
            assert_eq!(polynomial_kernel(&eq, n).dimension, 0);
        }
    }

    #[test]
    fn eigen_scan_is_one_dimensional() {
        let hyp = HypergeometricData { h: int(1), a: int(1), b: int(0), c: int(0), d: int(2), f: int(0) };
        for entry in eigen_scan(&hyp, 10).unwrap() {
            assert_eq!(entry.kernel.dimension, 1, "n = {}", entry.n);
            assert_eq!(entry.kernel.degrees(), vec![entry.n as usize]);
        }
    }

    #[test]
    fn constants_solve_at_zero_eigenvalue() {
        let hyp = HypergeometricData { h: int(2), a: rat(1, 3), b: int(1), c: int(-4), d: int(5), f: int(7) };
        let scan = eigen_scan(&hyp, 0).unwrap();
        assert_eq!(scan[0].kernel.basis, vec![p(&[1])]);
    }

    #[test]
    fn dependence_examples() {
        assert_eq!(linear_dependence(&p(&[0, 1]), &p(&[0, 3])).unwrap(), Some((int(3), int(-1))));
        assert_eq!(linear_dependence(&p(&[0, 1]), &p(&[1, 1])).unwrap(), None);
        assert!(linear_dependence(&p(&[]), &p(&[])).is_err());
    }

    #[test]
    fn kernel_json_shape() {
        let eq = DifferenceEquation::new(p(&[0, 0, 1]), p(&[2, 1]), p(&[-1]), int(1)).unwrap();
        let v: serde_json::Value = serde_json::to_value(polynomial_kernel(&eq, 3)).unwrap();
        assert_eq!(v["degree_bound"], 3);
        assert_eq!(v["dimension"], 1);
        assert_eq!(v["basis"][0], serde_json::json!(["1", "1"]));
    }
}
