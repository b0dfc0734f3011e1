//! Second-order difference equations with polynomial coefficients,
//!
//! ```text
//! g(x) Δ²y(x) + r(x) Δy(x) + u(x) y(x+h) = 0,   Δy(x) = (y(x+h) - y(x)) / h,
//! ```
//!
//! their equivalent recurrence forms, lattice Cauchy iteration and the
//! hypergeometric special case `g = ax² + bx + c`, `r = dx + f`, `u = λ`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ratpoly::Poly;
use crate::scalar::{serde_rational, Rational, Scalar};

/// The equation `g Δ²y + r Δy + u y(x+h) = 0` with step `h > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceEquation<T = Rational> {
    g: Poly<T>,
    r: Poly<T>,
    u: Poly<T>,
    h: T,
}

/// Coefficients of `c2 y(x+2h) + c1 y(x+h) + c0 y(x) = 0`; the equation
/// multiplied through by `h²`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceForm<T = Rational> {
    pub c2: Poly<T>,
    pub c1: Poly<T>,
    pub c0: Poly<T>,
}

/// The same equation written as `g Δ²y + (r + h u) Δy + u y(x) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsorbedForm<T = Rational> {
    pub g: Poly<T>,
    pub r: Poly<T>,
    pub u: Poly<T>,
}

impl<T: Scalar> DifferenceEquation<T> {
    pub fn new(g: Poly<T>, r: Poly<T>, u: Poly<T>, h: T) -> Result<Self> {
        if !(h > T::zero()) {
            return Err(Error::NonPositiveStep(h.to_string()));
        }
        if g.is_zero() {
            return Err(Error::ZeroPolynomial("g"));
        }
        Ok(DifferenceEquation { g, r, u, h })
    }

    pub fn g(&self) -> &Poly<T> {
        &self.g
    }

    pub fn r(&self) -> &Poly<T> {
        &self.r
    }

    pub fn u(&self) -> &Poly<T> {
        &self.u
    }

    pub fn h(&self) -> &T {
        &self.h
    }

    /// `g - h r`, the coefficient of `y(x)` in the recurrence form.
    pub fn g_minus_hr(&self) -> Poly<T> {
        &self.g - &self.r.scale(&self.h)
    }

    pub fn to_recurrence_form(&self) -> RecurrenceForm<T> {
        let h = &self.h;
        let h2 = h.clone() * h.clone();
        let two = T::from_int(2);
        RecurrenceForm {
            c2: self.g.clone(),
            c1: &(&self.r.scale(h) + &self.u.scale(&h2)) - &self.g.scale(&two),
            c0: self.g_minus_hr(),
        }
    }

    pub fn to_absorbed_form(&self) -> AbsorbedForm<T> {
        AbsorbedForm {
            g: self.g.clone(),
            r: &self.r + &self.u.scale(&self.h),
            u: self.u.clone(),
        }
    }

    /// Left-hand side applied to `y`, as an exact polynomial.
    pub fn residual(&self, y: &Poly<T>) -> Poly<T> {
        let d1 = y.delta(&self.h).expect("h > 0");
        let d2 = d1.delta(&self.h).expect("h > 0");
        &(&(&self.g * &d2) + &(&self.r * &d1)) + &(&self.u * &y.shift(&self.h))
    }

    /// The equation translated by `s`: coefficients `p(x + s)`.
    pub fn translate(&self, s: &T) -> Self {
        DifferenceEquation {
            g: self.g.shift(s),
            r: self.r.shift(s),
            u: self.u.shift(s),
            h: self.h.clone(),
        }
    }

    /// Values `y(x0 + k h)` for `k = 0..=steps+1` from two initial values.
    ///
    /// Refuses to continue through a lattice point where `g` vanishes.
    pub fn cauchy_iterate(&self, x0: &T, y0: T, y1: T, steps: usize) -> Result<Vec<T>> {
        let rec = self.to_recurrence_form();
        let mut values = Vec::with_capacity(steps + 2);
        values.push(y0);
        values.push(y1);
        let mut x = x0.clone();
        for k in 0..steps {
            let c2 = rec.c2.eval(&x);
            if c2.is_zero() {
                return Err(Error::Pole { point: x.to_string() });
            }
            let next = -(rec.c1.eval(&x) * values[k + 1].clone() + rec.c0.eval(&x) * values[k].clone()) / c2;
            values.push(next);
            x = x + self.h.clone();
        }
        Ok(values)
    }
}

impl<T: Scalar> RecurrenceForm<T> {
    /// `c2 y(x+2h) + c1 y(x+h) + c0 y(x)` for a polynomial `y`.
    pub fn apply(&self, y: &Poly<T>, h: &T) -> Poly<T> {
        let two_h = h.clone() + h.clone();
        &(&(&self.c2 * &y.shift(&two_h)) + &(&self.c1 * &y.shift(h))) + &(&self.c0 * y)
    }
}

impl<T: Scalar> AbsorbedForm<T> {
    pub fn apply(&self, y: &Poly<T>, h: &T) -> Poly<T> {
        let d1 = y.delta(h).expect("h > 0");
        let d2 = d1.delta(h).expect("h > 0");
        &(&(&self.g * &d2) + &(&self.r * &d1)) + &(&self.u * y)
    }
}

/// `max(deg g - 2, deg r - 1, deg u)`, ignoring zero coefficients: the
/// residual of a degree-`n` polynomial has degree at most `n` plus this.
pub fn excess_degree<T: Scalar>(eq: &DifferenceEquation<T>) -> i64 {
    let parts = [
        eq.g.degree().map(|d| d as i64 - 2),
        eq.r.degree().map(|d| d as i64 - 1),
        eq.u.degree().map(|d| d as i64),
    ];
    parts.into_iter().flatten().max().expect("g is nonzero")
}

#[derive(Serialize, Deserialize)]
struct EquationRecord {
    #[serde(with = "serde_rational")]
    h: Rational,
    g: Poly<Rational>,
    #[serde(default)]
    r: Poly<Rational>,
    #[serde(default)]
    u: Poly<Rational>,
}

impl Serialize for DifferenceEquation<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EquationRecord {
            h: self.h.clone(),
            g: self.g.clone(),
            r: self.r.clone(),
            u: self.u.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DifferenceEquation<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = EquationRecord::deserialize(d)?;
        DifferenceEquation::new(rec.g, rec.r, rec.u, rec.h).map_err(serde::de::Error::custom)
    }
}

/// Data of the hypergeometric equation
/// `(ax² + bx + c) Δ²y + (dx + f) Δy + λ y(x+h) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricData {
    #[serde(with = "serde_rational")]
    pub h: Rational,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    #[serde(with = "serde_rational")]
    pub d: Rational,
    #[serde(with = "serde_rational")]
    pub f: Rational,
}

impl HypergeometricData {
    pub fn g(&self) -> Poly<Rational> {
        Poly::new(vec![self.c.clone(), self.b.clone(), self.a.clone()])
    }

    pub fn r(&self) -> Poly<Rational> {
        Poly::new(vec![self.f.clone(), self.d.clone()])
    }

    /// The equation at eigenvalue `lambda`.
    pub fn equation(&self, lambda: &Rational) -> Result<DifferenceEquation> {
        DifferenceEquation::new(self.g(), self.r(), Poly::constant(lambda.clone()), self.h.clone())
    }

    /// `θ(z) = a z(z-1) + d z + λ`, the coefficient of `x^z` in the residual of `x^z`.
    pub fn theta(&self, lambda: &Rational, z: &Rational) -> Rational {
        &self.a * z * (z - Rational::from_integer(1.into())) + &self.d * z + lambda
    }

    /// `λ_n = -n(n-1)a - n d`.
    pub fn lambda_n(&self, n: u32) -> Rational {
        let n = Rational::from_integer(n.into());
        -(&n * (&n - Rational::from_integer(1.into())) * &self.a) - &n * &self.d
    }

    /// Pairs `n < l <= n_max` with `λ_n = λ_l`.
    pub fn regularity_check(&self, n_max: u32) -> Vec<(u32, u32)> {
        let lambdas: Vec<Rational> = (0..=n_max).map(|n| self.lambda_n(n)).collect();
        let mut out = Vec::new();
        for n in 0..=n_max {
            for l in n + 1..=n_max {
                if lambdas[n as usize] == lambdas[l as usize] {
                    out.push((n, l));
                }
            }
        }
        out
    }
}
