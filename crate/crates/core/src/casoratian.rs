//! The Casoratian `W_h = y1 Δy2 - Δy1 y2` of two solutions, its first-order
//! recurrence `W_h(x+h) g(x) = (g - h r)(x) W_h(x)`, and the closed form
//!
//! ```text
//! W_h(x) = C · κ^{(x - h/2)/h} · Π Γ_h(x - a_j) / Π Γ_h(x - b_l)
//! ```
//!
//! with `a_j` the roots of `g - h r`, `b_l` the roots of `g` and `κ` the ratio
//! of their leading coefficients. The exponent is divided by `h` so that one
//! lattice step contributes exactly one factor `κ`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdeq::DifferenceEquation;
use crate::gammah::ln_abs_gamma_h;
use crate::ratpoly::{real_roots, RootList, DEFAULT_ROOT_BITS};
use crate::scalar::{serde_rational, BigFloat, Precision, Rational, Real};
use crate::RatPoly;

/// `y1 Δy2 - Δy1 y2`, checked against `(y1(x) y2(x+h) - y1(x+h) y2(x)) / h`.
pub fn casoratian(y1: &RatPoly, y2: &RatPoly, h: &Rational) -> Result<RatPoly> {
    let d1 = y1.delta(h)?;
    let d2 = y2.delta(h)?;
    let w = &(y1 * &d2) - &(&d1 * y2);
    let det = (&(y1 * &y2.shift(h)) - &(&y1.shift(h) * y2)).scale(&(Rational::one() / h));
    assert_eq!(w, det, "the two Casoratian forms disagree");
    Ok(w)
}

/// `W_h` at `x0 + k h` from lattice values, `k = 0..len-1`.
pub fn casoratian_values(y1: &[Rational], y2: &[Rational], h: &Rational) -> Vec<Rational> {
    let n = y1.len().min(y2.len());
    (0..n.saturating_sub(1))
        .map(|k| (&y1[k] * &y2[k + 1] - &y1[k + 1] * &y2[k]) / h)
        .collect()
}

/// The data of `R(x) = (g - h r) / g = κ Π (x - a_j) / Π (x - b_l)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbelClosedForm {
    #[serde(with = "serde_rational")]
    pub kappa: Rational,
    pub a_roots: RootList,
    pub b_roots: RootList,
    #[serde(with = "serde_rational")]
    pub h: Rational,
}

pub fn r_of(eq: &DifferenceEquation) -> Result<AbelClosedForm> {
    let gmh = eq.g_minus_hr();
    if gmh.is_zero() {
        return Err(Error::Hypothesis("g - h r vanishes identically".into()));
    }
    let kappa = gmh.leading_coeff().expect("nonzero") / eq.g().leading_coeff().expect("g is nonzero");
    Ok(AbelClosedForm {
        kappa,
        a_roots: real_roots(&gmh, DEFAULT_ROOT_BITS)?,
        b_roots: real_roots(eq.g(), DEFAULT_ROOT_BITS)?,
        h: eq.h().clone(),
    })
}

impl AbelClosedForm {
    /// Whether every root of `g - h r` and `g` is real, so the Γ_h product
    /// accounts for the whole of `R`.
    pub fn is_complete(&self, eq: &DifferenceEquation) -> bool {
        self.a_roots.total_multiplicity() == eq.g_minus_hr().degree().unwrap_or(0)
            && self.b_roots.total_multiplicity() == eq.g().degree().unwrap_or(0)
    }

    /// Largest root of either list, as an upper bound.
    pub fn max_root(&self) -> Option<Rational> {
        self.a_roots
            .roots()
            .iter()
            .chain(self.b_roots.roots())
            .map(|r| r.value.upper().clone())
            .max()
    }

    /// `(ln |F(x)|, sign F(x))` for `F = |κ|^{(x-h/2)/h} Π Γ_h(x-a_j) / Π Γ_h(x-b_l)`,
    /// or `None` at a pole of a factor.
    pub fn ln_abs_eval(&self, x: &Rational, bits: usize) -> Option<(BigFloat, i8)> {
        let work = bits + 32;
        let mut a = self.a_roots.clone();
        let mut b = self.b_roots.clone();
        a.refine_to(work as u32 + 16);
        b.refine_to(work as u32 + 16);
        let hf = BigFloat::from_rational(&self.h, work);
        let half = Rational::new(1.into(), 2.into());
        let expo = (x - &self.h * &half) / &self.h;
        let mut total = BigFloat::from_rational(&expo, work) * BigFloat::from_rational(&self.kappa.abs(), work).ln();
        let mut sign = 1i8;
        for (list, plus) in [(&a, true), (&b, false)] {
            for root in list.roots() {
                let arg = BigFloat::from_rational(&(x - root.value.approx()), work);
                let (l, s) = ln_abs_gamma_h(&arg, &hf, work)?;
                for _ in 0..root.multiplicity {
                    if plus {
                        total += l.clone();
                    } else {
                        total -= l.clone();
                    }
                    sign *= s;
                }
            }
        }
        Some((total, sign))
    }
}

/// Outcome of comparing the direct Casoratian with its closed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbelReport {
    /// `W_h(x+h) g(x) = (g - h r)(x) W_h(x)` held exactly at every point.
    pub recurrence_exact: bool,
    pub recurrence_failures: Vec<usize>,
    pub identically_zero: bool,
    pub samples: usize,
    pub skipped: usize,
    pub kappa_negative: bool,
    /// Decimal rendering of the mean ratio direct / closed form.
    pub ratio_mean: Option<String>,
    pub ratio_rel_stddev: Option<f64>,
    pub digits: u32,
    pub notes: Vec<String>,
}

/// Checks the recurrence and the closed form on the lattice `x0 + k h`,
/// `k = 0..points`, from values `y1`, `y2` of two solutions there.
///
/// Lattice points at or below a root that lies on the sampling lattice are
/// skipped: there a Γ_h factor has a pole although `W_h` stays finite.
pub fn verify_abel(
    eq: &DifferenceEquation,
    y1: &[Rational],
    y2: &[Rational],
    x0: &Rational,
    points: usize,
    precision: Precision,
) -> Result<AbelReport> {
    if y1.len() < points + 2 || y2.len() < points + 2 {
        return Err(Error::Domain(format!("need at least {} lattice values per solution", points + 2)));
    }
    let h = eq.h();
    let gmh = eq.g_minus_hr();
    let w = casoratian_values(&y1[..points + 2], &y2[..points + 2], h);
    let xs: Vec<Rational> = (0..=points)
        .map(|k| x0 + h * Rational::from_integer(k.into()))
        .collect();

    let mut failures = Vec::new();
    for k in 0..points {
        if &w[k + 1] * eq.g().eval(&xs[k]) != gmh.eval(&xs[k]) * &w[k] {
            failures.push(k);
        }
    }
    let form = r_of(eq)?;
    let mut report = AbelReport {
        recurrence_exact: failures.is_empty(),
        recurrence_failures: failures,
        identically_zero: w.iter().all(|v| v.is_zero()),
        samples: 0,
        skipped: 0,
        kappa_negative: form.kappa.is_negative(),
        ratio_mean: None,
        ratio_rel_stddev: None,
        digits: precision.decimal_digits(),
        notes: Vec::new(),
    };
    if report.identically_zero {
        report.notes.push("identically zero: solutions are linearly dependent".into());
        return Ok(report);
    }
    if !form.is_complete(eq) {
        report.notes.push("g or g - h r has non-real roots; closed form not compared".into());
        return Ok(report);
    }

    let bits = precision.bits();
    let work = bits + 32;
    let mut ratios: Vec<BigFloat> = Vec::new();
    let first_valid = first_pole_free(&form, &xs[..points]);
    if first_valid > 0 {
        report.notes.push(format!(
            "sampling shifted up by {first_valid} lattice steps to avoid poles of Γ_h"
        ));
    }
    for k in first_valid..points {
        if w[k].is_zero() {
            report.skipped += 1;
            continue;
        }
        let Some((lf, sf)) = form.ln_abs_eval(&xs[k], bits) else {
            report.skipped += 1;
            continue;
        };
        let lw = BigFloat::from_rational(&w[k].abs(), work).ln();
        let mut ratio = (lw - lf).exp();
        let sw = if w[k].is_negative() { -1 } else { 1 };
        if !report.kappa_negative && sw * sf < 0 {
            ratio = -ratio;
        }
        ratios.push(ratio);
    }
    report.skipped += first_valid;
    report.samples = ratios.len();
    if ratios.is_empty() {
        report.notes.push("no pole-free sample points".into());
        return Ok(report);
    }
    let n = BigFloat::from_rational(&Rational::from_integer(ratios.len().into()), work);
    let mean = ratios.iter().fold(BigFloat::ZERO.with_precision(work).value(), |acc, r| acc + r) / n.clone();
    let var = ratios
        .iter()
        .map(|r| {
            let d = r.clone() - mean.clone();
            d.clone() * d
        })
        .fold(BigFloat::ZERO.with_precision(work).value(), |acc, v| acc + v)
        / n;
    let std = if var.is_zero() { BigFloat::ZERO } else { (var.ln() / BigFloat::from(2)).exp() };
    report.ratio_rel_stddev = Some(Real::to_f64(&std) / Real::to_f64(&mean.abs()));
    report.ratio_mean = Some(mean.to_decimal_string(precision.decimal_digits() as usize));
    Ok(report)
}

/// Index of the first lattice point strictly above every root lying on the
/// sampling lattice.
fn first_pole_free(form: &AbelClosedForm, xs: &[Rational]) -> usize {
    let Some(x0) = xs.first() else { return 0 };
    let mut first = 0;
    for root in form.a_roots.roots().iter().chain(form.b_roots.roots()) {
        let Some(c) = root.value.exact() else { continue };
        let steps = (c - x0) / &form.h;
        if steps.is_integer() && !steps.is_negative() {
            let k: usize = steps.to_integer().try_into().unwrap_or(usize::MAX);
            first = first.max(k.saturating_add(1));
        }
    }
    first.min(xs.len())
}
