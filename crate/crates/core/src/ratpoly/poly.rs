use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and `degree() == len - 1` otherwise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// Monic polynomial with the given roots, `prod (x - r)`.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| {
            acc * Poly::new(vec![-r.clone(), T::one()])
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn degree_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading_coeff(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `q(x) = p(x + s)`, expanded with binomial coefficients.
    pub fn shift(&self, s: &T) -> Self {
        let n = self.coeffs.len();
        if n == 0 || s.is_zero() {
            return self.clone();
        }
        let mut powers = Vec::with_capacity(n);
        powers.push(T::one());
        for i in 1..n {
            powers.push(powers[i - 1].clone() * s.clone());
        }
        // Pascal row by row: binom[j][k]
        let mut row = vec![T::one()];
        let mut out = vec![T::zero(); n];
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                let mut next = vec![T::one(); j + 1];
                for k in 1..j {
                    next[k] = row[k - 1].clone() + row[k].clone();
                }
                row = next;
            }
            if a.is_zero() {
                continue;
            }
            for k in 0..=j {
                out[k] = out[k].clone() + a.clone() * row[k].clone() * powers[j - k].clone();
            }
        }
        Poly::new(out)
    }

    /// Forward difference quotient `(p(x + h) - p(x)) / h`.
    pub fn delta(&self, h: &T) -> Result<Self> {
        if h.is_zero() {
            return Err(Error::ZeroStep);
        }
        let diff = &self.shift(h) - self;
        Ok(Poly::new(
            diff.coeffs.into_iter().map(|c| c / h.clone()).collect(),
        ))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_int(k as i64))
                .collect(),
        )
    }

    /// Polynomial long division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact quotient, asserting the remainder is zero.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) => {
                let inv = T::one() / lc.clone();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroPolynomial("gcd of two zero polynomials"));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Scalar> Default for Poly<T> {
    fn default() -> Self {
        Poly::zero()
    }
}

/// Forward difference quotient; see [`Poly::delta`].
pub fn delta_h<T: Scalar>(p: &Poly<T>, h: &T) -> Result<Poly<T>> {
    p.delta(h)
}

fn add_coeffs<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.clone() + y.clone(),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

impl<T: Scalar> Add<&Poly<T>> for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        Poly::new(add_coeffs(&self.coeffs, &rhs.coeffs))
    }
}

impl<T: Scalar> Sub<&Poly<T>> for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<T: Scalar> Mul<&Poly<T>> for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr<Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Scalar> $tr<&Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: &Poly<T>) -> Poly<T> {
                (&self).$m(rhs)
            }
        }
        impl<T: Scalar> $tr<Poly<T>> for &Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < T::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// JSON form: array of rational strings in ascending degree.
impl Serialize for Poly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::scalar::serde_rational::vec::deserialize(d).map(Poly::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn p(c: &[Rational]) -> Poly<Rational> {
        Poly::new(c.to_vec())
    }

    #[test]
    fn eval_examples() {
        let q = p(&[rat(-1, 3), int(0), int(1)]);
        assert_eq!(q.eval(&int(1)), rat(2, 3));
        assert_eq!(q.eval(&int(0)), rat(-1, 3));
        assert_eq!(Poly::<Rational>::zero().eval(&int(7)), int(0));
    }

    #[test]
    fn shift_examples() {
        let x2 = Poly::monomial(int(1), 2);
        assert_eq!(x2.shift(&int(1)), p(&[int(1), int(2), int(1)]));
        let x3 = Poly::monomial(int(1), 3);
        assert_eq!(x3.shift(&int(2)), p(&[int(8), int(12), int(6), int(1)]));
        let any = p(&[rat(3, 7), int(-2), rat(1, 5)]);
        assert_eq!(any.shift(&int(0)), any);
    }

    #[test]
    fn delta_examples() {
        let x2 = Poly::monomial(int(1), 2);
        assert_eq!(x2.delta(&int(1)).unwrap(), p(&[int(1), int(2)]));
        let x3 = Poly::monomial(int(1), 3);
        assert_eq!(x3.delta(&int(2)).unwrap(), p(&[int(4), int(6), int(3)]));
        assert!(Poly::constant(rat(5, 2)).delta(&int(3)).unwrap().is_zero());
        assert_eq!(x2.delta(&int(0)), Err(Error::ZeroStep));
    }

    #[test]
    fn gcd_examples() {
        let a = p(&[int(-1), int(0), int(1)]);
        let b = p(&[int(-1), int(1)]);
        assert_eq!(a.gcd(&b).unwrap(), b);
        let c = p(&[int(1), int(1)]);
        let d = p(&[int(-2), int(1)]);
        assert_eq!(c.gcd(&d).unwrap(), Poly::one());
        let e = Poly::from_roots(&[int(2), int(3)]);
        let f = Poly::from_roots(&[int(3), int(5)]);
        assert_eq!(e.gcd(&f).unwrap(), p(&[int(-3), int(1)]));
        assert!(Poly::<Rational>::zero().gcd(&Poly::zero()).is_err());
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[rat(1, 2), int(3), int(-1), rat(2, 3)]);
        let b = p(&[int(1), rat(1, 4)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree_i() < b.degree_i());
    }

    #[test]
    fn display_is_readable() {
        let q = p(&[rat(-1, 3), int(0), int(1)]);
        assert_eq!(q.to_string(), "x^2 - 1/3");
        assert_eq!(p(&[int(1), int(-2)]).to_string(), "-2*x + 1");
    }

    #[test]
    fn json_roundtrip_and_normalization() {
        let q: Poly<Rational> = serde_json::from_str(r#"["-2/6","0","1"]"#).unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"["-1/3","0","1"]"#);
        let z: Poly<Rational> = serde_json::from_str(r#"["0","0"]"#).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn works_over_f64() {
        let q = Poly::new(vec![1.0, -3.0, 2.0]);
        assert_eq!(q.eval(&2.0), 3.0);
        assert_eq!(q.shift(&1.0).eval(&1.0), q.eval(&2.0));
    }
}
