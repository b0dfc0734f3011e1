//! Discrete Bethe-Ansatz equations for the zeros of a polynomial solution.
//!
//! If `y = Π (x - x_j)` solves the equation and its zeros are simple, then at
//! every zero
//!
//! ```text
//! Π_j (x_k - x_j + h) / (x_k - x_j - h) = [h r(x_k - h) - g(x_k - h)] / g(x_k - h)
//! ```
//!
//! where the product includes `j = k`, whose factor is `-1`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdeq::{excess_degree, DifferenceEquation};
use crate::ratpoly::{real_roots, Poly};
use crate::scalar::{rational_from_f64, rational_to_f64, serde_rational, Rational};
use crate::RatPoly;

pub const DEFAULT_BAE_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_ROOT_DIGITS: u32 = 50;

/// Pairwise distinct zeros, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RootSetRecord", into = "RootSetRecord")]
pub struct RootSet {
    roots: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RootSetRecord(#[serde(with = "serde_rational::vec")] Vec<Rational>);

impl TryFrom<RootSetRecord> for RootSet {
    type Error = Error;
    fn try_from(r: RootSetRecord) -> Result<Self> {
        RootSet::new(r.0)
    }
}

impl From<RootSet> for RootSetRecord {
    fn from(s: RootSet) -> Self {
        RootSetRecord(s.roots)
    }
}

impl RootSet {
    pub fn new(mut roots: Vec<Rational>) -> Result<Self> {
        roots.sort();
        if let Some(w) = roots.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Hypothesis(format!("repeated zero {}", w[0])));
        }
        Ok(RootSet { roots })
    }

    pub fn empty() -> Self {
        RootSet { roots: Vec::new() }
    }

    /// Zeros of `y` as rationals: exact where rational, otherwise the
    /// midpoint of an isolating interval narrower than `10^-digits`.
    ///
    /// Fails with a hypothesis error when `y` has repeated or non-real zeros.
    pub fn from_polynomial(y: &RatPoly, digits: u32) -> Result<Self> {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8;
        let mut list = real_roots(y, bits)?;
        if !list.all_simple() {
            return Err(Error::Hypothesis("repeated zeros".into()));
        }
        if list.total_multiplicity() != y.degree().unwrap_or(0) {
            return Err(Error::Hypothesis("non-real zeros".into()));
        }
        list.refine_to(bits);
        RootSet::new(list.roots().iter().map(|r| r.value.approx()).collect())
    }

    pub fn roots(&self) -> &[Rational] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `Π (x - x_k)`.
    pub fn polynomial(&self) -> RatPoly {
        Poly::from_roots(&self.roots)
    }

    /// Copy with root `k` moved by `delta`.
    pub fn perturbed(&self, k: usize, delta: &Rational) -> Result<Self> {
        let mut roots = self.roots.clone();
        roots[k] += delta;
        RootSet::new(roots)
    }
}

/// LHS - RHS of the Bethe-Ansatz equation at zero `k`, exactly.
pub fn bae_residual(eq: &DifferenceEquation, roots: &RootSet, k: usize) -> Result<Rational> {
    bae_residual_slice(eq, roots.roots(), k)
}

fn bae_residual_slice(eq: &DifferenceEquation, xs: &[Rational], k: usize) -> Result<Rational> {
    let h = eq.h();
    let xk = &xs[k];
    let mut num = Rational::from_integer(1.into());
    let mut den = Rational::from_integer(1.into());
    for (j, xj) in xs.iter().enumerate() {
        let d = xk - xj;
        let lo = &d - h;
        if lo.is_zero() {
            return Err(Error::DenominatorZero(format!("x_{k} - x_{j} - h = 0 at x_{k} = {xk}")));
        }
        num *= &d + h;
        den *= lo;
    }
    let z = xk - h;
    let gz = eq.g().eval(&z);
    if gz.is_zero() {
        return Err(Error::DenominatorZero(format!("g(x_{k} - h) = 0 at x_{k} = {xk}")));
    }
    let rhs = (h * eq.r().eval(&z) - &gz) / gz;
    Ok(num / den - rhs)
}

/// All `n` residuals in root order.
pub fn bae_residuals(eq: &DifferenceEquation, roots: &RootSet) -> Result<Vec<Rational>> {
    (0..roots.len()).map(|k| bae_residual(eq, roots, k)).collect()
}

/// Residuals for roots in caller order, without canonical sorting.
pub fn bae_residuals_unsorted(eq: &DifferenceEquation, xs: &[Rational]) -> Result<Vec<Rational>> {
    (0..xs.len()).map(|k| bae_residual_slice(eq, xs, k)).collect()
}

/// Whether the `x^n` coefficient of `residual(x^n + lower)` vanishes for every
/// choice of lower-order terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeadingDegreeCheck {
    pub n: usize,
    pub holds: bool,
    pub diagnostic: Option<String>,
}

pub fn leading_degree_condition(eq: &DifferenceEquation, n: usize) -> LeadingDegreeCheck {
    let excess = excess_degree(eq);
    if excess > 0 {
        return LeadingDegreeCheck {
            n,
            holds: false,
            diagnostic: Some(format!(
                "coefficient degrees raise the degree by {excess}; no fixed degree balances"
            )),
        };
    }
    let lead = eq.residual(&Poly::monomial(Rational::from_integer(1.into()), n)).coeff(n);
    LeadingDegreeCheck {
        n,
        holds: lead.is_zero(),
        diagnostic: (!lead.is_zero()).then(|| format!("degree-{n} coefficient of residual(x^{n}) is {lead}")),
    }
}

/// Result of checking a candidate zero set both ways.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaeReport {
    pub n: usize,
    pub tolerance: f64,
    #[serde(with = "serde_rational::vec")]
    pub roots: Vec<Rational>,
    pub residuals: Vec<f64>,
    pub bae_max: f64,
    /// Largest coefficient of `residual(y)` relative to the largest
    /// coefficient of `y = Π (x - x_k)`.
    pub equation_residual_max: f64,
    pub bae_pass: bool,
    pub equation_pass: bool,
    pub agree: bool,
    pub pass: bool,
}

/// Builds `y = Π (x - x_k)` and checks both the Bethe-Ansatz residuals and the
/// equation residual against `tol`. The two verdicts should coincide; `agree`
/// records whether they did.
pub fn verify_solution_via_bae(eq: &DifferenceEquation, roots: &RootSet, tol: f64) -> Result<BaeReport> {
    let n = roots.len();
    let lead = leading_degree_condition(eq, n);
    if !lead.holds {
        return Err(Error::Hypothesis(format!(
            "leading-degree condition fails for n = {n}: {}",
            lead.diagnostic.unwrap_or_default()
        )));
    }
    let tol_q = rational_from_f64(tol)?;
    let res = bae_residuals(eq, roots)?;
    let bae_max_q = res.iter().map(|r| r.abs()).max().unwrap_or_else(Rational::zero);

    let y = roots.polynomial();
    let scale = y.coeffs().iter().map(|c| c.abs()).max().expect("monic");
    let eq_max_q = eq.residual(&y).coeffs().iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero) / scale;

    let bae_pass = bae_max_q < tol_q;
    let equation_pass = eq_max_q < tol_q;
    Ok(BaeReport {
        n,
        tolerance: tol,
        roots: roots.roots().to_vec(),
        residuals: res.iter().map(rational_to_f64).collect(),
        bae_max: rational_to_f64(&bae_max_q),
        equation_residual_max: rational_to_f64(&eq_max_q),
        bae_pass,
        equation_pass,
        agree: bae_pass == equation_pass,
        pass: bae_pass && equation_pass,
    })
}

/// `verify_solution_via_bae` at the default tolerance on the zeros of `y`,
/// refined to `digits` decimal digits.
pub fn verify_polynomial(eq: &DifferenceEquation, y: &RatPoly, digits: u32) -> Result<BaeReport> {
    let roots = RootSet::from_polynomial(y, digits)?;
    verify_solution_via_bae(eq, &roots, DEFAULT_BAE_TOLERANCE)
}
