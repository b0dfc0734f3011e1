//! The generalized gamma function `Γ_h`, defined by `Γ_h(x + h) = x Γ_h(x)`
//! and `Γ_h(h) = 1`, through `Γ_h(x) = Γ(x/h) · h^{(x-h)/h}`.
//!
//! The ordinary gamma kernel works in log space: the argument is shifted up
//! until Stirling's series converges to the requested precision, and the
//! shift is divided back out. Negative arguments need no reflection formula;
//! the shift product carries the sign.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{BigFloat, Precision, Rational, Real};

/// A value of `Γ_h`, or the flag that the argument is a pole.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaHValue<T> {
    /// Zero at poles.
    pub value: T,
    pub is_pole: bool,
    /// `k` when the argument is `-k h`.
    pub pole_index: Option<u64>,
}

/// `B_0, B_2, B_4, …` up to at least `B_{2m}`.
fn bernoulli_even(m: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut all = cache.lock().expect("bernoulli cache poisoned");
    let needed = 2 * m + 1;
    if all.len() < needed {
        // sum_{j=0}^{n} C(n+1, j) B_j = 0 for n >= 1.
        let mut b: Vec<Rational> = all.clone();
        if b.is_empty() {
            b.push(Rational::one());
        }
        for n in b.len()..needed {
            let mut binom = BigInt::one();
            let mut s = Rational::zero();
            for (j, bj) in b.iter().enumerate() {
                s += Rational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
            }
            b.push(-s / Rational::from_integer(BigInt::from(n + 1)));
        }
        *all = b;
    }
    all.iter().step_by(2).take(m + 1).cloned().collect()
}

/// `(ln |Γ(x)|, sign Γ(x))`, or `None` at the poles `0, -1, -2, …`.
pub fn ln_gamma<T: Real>(x: &T, bits: usize) -> Option<(T, i8)> {
    let work = bits + 32;
    let threshold = ((work as f64) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI)).ceil() + 2.0;
    let threshold = threshold.max(10.0);
    let xf = x.to_f64();
    let shift = if xf < threshold { (threshold - xf).ceil() as usize } else { 0 };

    let mut prod = T::from_rational(&Rational::one(), work);
    let mut z = x.clone();
    for _ in 0..shift {
        prod = prod * z.clone();
        z = z + T::one();
    }
    if prod.is_zero() {
        return None;
    }
    let sign: i8 = if prod.is_negative() { -1 } else { 1 };

    let half = T::from_rational(&Rational::new(1.into(), 2.into()), work);
    let two_pi = T::pi(work) * T::from_rational(&Rational::from_integer(2.into()), work);
    let ln_z = z.ln();
    let mut sum = (z.clone() - half.clone()) * ln_z - z.clone() + half * two_pi.ln();

    // Stirling tail: B_{2k} / (2k (2k - 1) z^{2k-1}).
    let eps = T::from_rational(&Rational::new(BigInt::one(), BigInt::one() << (work + 4)), work);
    let z2 = z.clone() * z.clone();
    let mut zpow = z.clone();
    let max_terms = (std::f64::consts::PI * z.to_f64()).floor().max(1.0) as usize;
    let bern = bernoulli_even(max_terms);
    for k in 1..=max_terms {
        let coef = &bern[k] / Rational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let term = T::from_rational(&coef, work) / zpow.clone();
        sum = sum + term.clone();
        if term.abs() < eps.clone() * (sum.abs() + T::one()) {
            break;
        }
        zpow = zpow * z2.clone();
    }
    Some((sum - prod.abs().ln(), sign))
}

/// `Γ(x)`, or `None` at a pole.
pub fn gamma<T: Real>(x: &T, bits: usize) -> Option<T> {
    ln_gamma(x, bits).map(|(l, s)| signed_exp(l, s))
}

fn signed_exp<T: Real>(l: T, sign: i8) -> T {
    let v = l.exp();
    if sign < 0 {
        -v
    } else {
        v
    }
}

/// `(ln |Γ_h(x)|, sign Γ_h(x))`, or `None` at a pole.
pub fn ln_abs_gamma_h<T: Real>(x: &T, h: &T, bits: usize) -> Option<(T, i8)> {
    let z = x.clone() / h.clone();
    let (l, s) = ln_gamma(&z, bits)?;
    let one = T::from_rational(&Rational::one(), bits);
    Some((l + (z - one) * h.ln(), s))
}

/// `Γ_h(x)` for real arguments; poles are detected when `x/h` is exactly a
/// nonpositive integer in the scalar type.
pub fn gamma_h_real<T: Real>(x: &T, h: &T, bits: usize) -> GammaHValue<T> {
    match ln_abs_gamma_h(x, h, bits) {
        Some((l, s)) => GammaHValue { value: signed_exp(l, s), is_pole: false, pole_index: None },
        None => {
            let k = (-(x.clone() / h.clone())).to_f64().round() as u64;
            GammaHValue { value: T::zero(), is_pole: true, pole_index: Some(k) }
        }
    }
}

/// Exact test `x = -k h` for an integer `k >= 0`.
pub fn gamma_h_pole(x: &Rational, h: &Rational) -> bool {
    pole_index(x, h).is_some()
}

fn pole_index(x: &Rational, h: &Rational) -> Option<u64> {
    let z = x / h;
    (z.is_integer() && !z.is_positive()).then(|| (-z.to_integer()).to_u64().unwrap_or(u64::MAX))
}

/// `Γ_h((n+1) h) = h^n n!` exactly when `x = (n+1) h` for an integer `n >= 0`.
pub fn gamma_h_exact(x: &Rational, h: &Rational) -> Option<Rational> {
    let z = x / h;
    if !z.is_integer() || !z.is_positive() {
        return None;
    }
    let n = (z.to_integer() - 1u32).to_u64()?;
    let mut acc = Rational::one();
    for i in 1..=n {
        acc *= h * Rational::from_integer(i.into());
    }
    Some(acc)
}

/// `Γ_h(x)` at rational arguments with exact pole detection.
pub fn gamma_h(x: &Rational, h: &Rational, precision: Precision) -> Result<GammaHValue<BigFloat>> {
    if !h.is_positive() {
        return Err(Error::NonPositiveStep(h.to_string()));
    }
    if let Some(k) = pole_index(x, h) {
        return Ok(GammaHValue { value: BigFloat::ZERO, is_pole: true, pole_index: Some(k) });
    }
    let bits = precision.bits();
    let xf = BigFloat::from_rational(x, bits + 32);
    let hf = BigFloat::from_rational(h, bits + 32);
    let (l, s) = ln_abs_gamma_h(&xf, &hf, bits).expect("pole excluded exactly above");
    Ok(GammaHValue { value: signed_exp(l, s).with_precision(bits).value(), is_pole: false, pole_index: None })
}

/// `Π Γ_h(x - a_j) / Π Γ_h(x - b_l)` for rational data.
///
/// Numerator and denominator factors whose arguments differ by a multiple of
/// `h` are first paired and reduced to finite products through the
/// recurrence, so poles that cancel never reach the numeric kernel.
pub fn gamma_h_ratio(
    x: &Rational,
    a_roots: &[Rational],
    b_roots: &[Rational],
    h: &Rational,
    precision: Precision,
) -> Result<BigFloat> {
    if !h.is_positive() {
        return Err(Error::NonPositiveStep(h.to_string()));
    }
    let bits = precision.bits();
    let work = bits + 32;
    let mut exact = Rational::one();
    let mut used = vec![false; b_roots.len()];
    let mut lone_a = Vec::new();
    for a in a_roots {
        let partner = (0..b_roots.len()).find(|&l| !used[l] && ((a - &b_roots[l]) / h).is_integer());
        let Some(l) = partner else {
            lone_a.push(a.clone());
            continue;
        };
        used[l] = true;
        let z = x - &b_roots[l];
        let m = ((a - &b_roots[l]) / h).to_integer();
        if !m.is_negative() {
            // Γ_h(z - m h) / Γ_h(z) = 1 / Π_{i=1}^{m} (z - i h)
            let mut den = Rational::one();
            let mut i = BigInt::one();
            while i <= m {
                den *= &z - h * Rational::from_integer(i.clone());
                i += 1;
            }
            if den.is_zero() {
                return Err(Error::UncancelledPole(format!("Γ_h(x - {a}) at x = {x}")));
            }
            exact /= den;
        } else {
            // Γ_h(z + M h) / Γ_h(z) = Π_{i=0}^{M-1} (z + i h)
            let mut i = BigInt::zero();
            while i < -&m {
                exact *= &z + h * Rational::from_integer(i.clone());
                i += 1;
            }
        }
    }
    if exact.is_zero() {
        return Ok(BigFloat::ZERO.with_precision(bits).value());
    }
    let hf = BigFloat::from_rational(h, work);
    let mut ln_total = BigFloat::from_rational(&exact.abs(), work).ln();
    let mut sign: i8 = if exact.is_negative() { -1 } else { 1 };
    for a in &lone_a {
        let arg = x - a;
        if gamma_h_pole(&arg, h) {
            return Err(Error::UncancelledPole(format!("Γ_h(x - {a}) at x = {x}")));
        }
        let (l, s) = ln_abs_gamma_h(&BigFloat::from_rational(&arg, work), &hf, work).expect("not a pole");
        ln_total += l;
        sign *= s;
    }
    for (b, _) in b_roots.iter().zip(&used).filter(|(_, &u)| !u) {
        let arg = x - b;
        if gamma_h_pole(&arg, h) {
            // 1 / Γ_h vanishes at its poles.
            return Ok(BigFloat::ZERO.with_precision(bits).value());
        }
        let (l, s) = ln_abs_gamma_h(&BigFloat::from_rational(&arg, work), &hf, work).expect("not a pole");
        ln_total -= l;
        sign *= s;
    }
    Ok(signed_exp(ln_total, sign).with_precision(bits).value())
}

/// Euler–Mascheroni constant to double precision.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Validation path: `1/Γ_h(x) = e^{(γ - ln h) x / h} x Π_{s=1}^{S} (1 + x/(s h)) e^{-x/(s h)}`.
///
/// Truncating after `S` factors changes `ln Γ_h(x)` by about `(x/h)² / (2S)`
/// when `S >> |x/h|`.
pub fn gamma_h_product(x: f64, h: f64, factors: usize) -> f64 {
    let z = x / h;
    let mut ln_inv = (EULER_GAMMA - h.ln()) * z + x.abs().ln();
    let mut sign = x.signum();
    for s in 1..=factors {
        let t = z / s as f64;
        let f = 1.0 + t;
        sign *= f.signum();
        ln_inv += f.abs().ln() - t;
    }
    sign * (-ln_inv).exp()
}

/// Relative truncation error estimate of [`gamma_h_product`].
pub fn gamma_h_product_error(x: f64, h: f64, factors: usize) -> f64 {
    let z = x / h;
    (z * z / (2.0 * factors as f64)).exp_m1().abs()
}
