//! Certified real-root isolation for rational polynomials.
//!
//! The pipeline is squarefree decomposition (Yun), Sturm-sequence isolation of
//! every squarefree factor, then an exact rational-root test inside each
//! isolating interval. A rational root `u/v` of a primitive integer polynomial
//! with leading coefficient `L` has `v <= |L|`; two such fractions differ by at
//! least `1/L^2`, so once an interval is narrower than that the simplest
//! fraction inside it is the only candidate and one exact evaluation decides.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, rational_to_f64, serde_rational, Rational};

type RatPoly = Poly<Rational>;

/// Default isolating-interval width, `2^-128`.
pub const DEFAULT_ROOT_BITS: u32 = 128;

/// Open interval `(lo, hi)` holding exactly one root of a squarefree polynomial.
///
/// The polynomial is nonzero at both endpoints and changes sign across the
/// interval.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatingInterval {
    lo: Rational,
    hi: Rational,
    poly: RatPoly,
    ints: IntPoly,
    sign_lo: i8,
}

impl IsolatingInterval {
    fn new(lo: Rational, hi: Rational, poly: RatPoly) -> Self {
        let ints = IntPoly::new(&poly);
        let sign_lo = ints.sign_at(&lo);
        IsolatingInterval { lo, hi, poly, ints, sign_lo }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    /// Squarefree polynomial whose unique root in the interval is represented.
    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// A real root, either exact or isolated.
#[derive(Clone, Debug, PartialEq)]
pub enum RootValue {
    Exact(Rational),
    Isolated(IsolatingInterval),
}

impl RootValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, RootValue::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            RootValue::Exact(q) => Some(q),
            RootValue::Isolated(_) => None,
        }
    }

    pub fn lower(&self) -> &Rational {
        match self {
            RootValue::Exact(q) => q,
            RootValue::Isolated(iv) => &iv.lo,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            RootValue::Exact(q) => q,
            RootValue::Isolated(iv) => &iv.hi,
        }
    }

    /// Exact value or interval midpoint.
    pub fn approx(&self) -> Rational {
        match self {
            RootValue::Exact(q) => q.clone(),
            RootValue::Isolated(iv) => (&iv.lo + &iv.hi) / Rational::from_integer(2.into()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.approx())
    }

    /// Halves an isolating interval; exact roots are left alone.
    pub fn bisect(&mut self) {
        let RootValue::Isolated(iv) = self else {
            return;
        };
        let mid = (&iv.lo + &iv.hi) / Rational::from_integer(2.into());
        let s_mid = iv.ints.sign_at(&mid);
        if s_mid == 0 {
            *self = RootValue::Exact(mid);
            return;
        }
        if s_mid == iv.sign_lo {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    }

    /// Refines until the width is at most `2^-bits`.
    pub fn refine_to(&mut self, bits: u32) {
        let target = pow2_neg(bits);
        while let RootValue::Isolated(iv) = self {
            if iv.width() <= target {
                break;
            }
            self.bisect();
        }
    }

    /// The root `value + s`.
    pub fn translate(&self, s: &Rational) -> RootValue {
        match self {
            RootValue::Exact(q) => RootValue::Exact(q + s),
            RootValue::Isolated(iv) => {
                RootValue::Isolated(IsolatingInterval::new(&iv.lo + s, &iv.hi + s, iv.poly.shift(&-s)))
            }
        }
    }

    /// `true` when `self` lies entirely at or below `other` (as sets).
    fn separated_below(&self, other: &RootValue) -> bool {
        self.upper() <= other.lower() && !(self.is_exact() && other.is_exact() && self.upper() == other.lower())
    }

    /// Whether the certified sets of the two roots could still coincide.
    pub fn may_overlap(&self, other: &RootValue) -> bool {
        match (self, other) {
            (RootValue::Exact(a), RootValue::Exact(b)) => a == b,
            _ => !(self.separated_below(other) || other.separated_below(self)),
        }
    }
}

/// Orders two roots known to be distinct, refining intervals as needed.
pub fn cmp_distinct(a: &mut RootValue, b: &mut RootValue) -> Ordering {
    loop {
        if a.separated_below(b) {
            return Ordering::Less;
        }
        if b.separated_below(a) {
            return Ordering::Greater;
        }
        if let (RootValue::Exact(x), RootValue::Exact(y)) = (&*a, &*b) {
            return x.cmp(y);
        }
        a.bisect();
        b.bisect();
    }
}

/// A real root with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: RootValue,
    pub multiplicity: usize,
}

/// Real roots sorted ascending, with pairwise disjoint isolating sets.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RootList {
    roots: Vec<Root>,
}

impl RootList {
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn all_simple(&self) -> bool {
        self.roots.iter().all(|r| r.multiplicity == 1)
    }

    pub fn all_exact(&self) -> bool {
        self.roots.iter().all(|r| r.value.is_exact())
    }

    /// Exact values when every root is rational.
    pub fn exact_values(&self) -> Option<Vec<Rational>> {
        self.roots.iter().map(|r| r.value.exact().cloned()).collect()
    }

    /// Approximations repeated by multiplicity.
    pub fn approx_with_multiplicity(&self) -> Vec<Rational> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value.approx(), r.multiplicity))
            .collect()
    }

    pub fn refine_to(&mut self, bits: u32) {
        for r in &mut self.roots {
            r.value.refine_to(bits);
        }
    }

    pub fn into_roots(self) -> Vec<Root> {
        self.roots
    }
}

/// All real roots of `p`; irrational roots are isolated to width `2^-precision_bits`.
pub fn real_roots(p: &RatPoly, precision_bits: u32) -> Result<RootList> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("real_roots"));
    }
    let mut roots = Vec::new();
    for (factor, multiplicity) in squarefree_decomposition(p) {
        for value in isolate_squarefree(&factor) {
            roots.push(Root { value, multiplicity });
        }
    }
    separate_and_sort(&mut roots);
    for r in &mut roots {
        r.value.refine_to(precision_bits);
    }
    Ok(RootList { roots })
}

fn separate_and_sort(roots: &mut [Root]) {
    loop {
        roots.sort_by(|a, b| {
            a.value
                .lower()
                .cmp(b.value.lower())
                .then_with(|| a.value.upper().cmp(b.value.upper()))
        });
        let mut clean = true;
        for i in 1..roots.len() {
            let (left, right) = roots.split_at_mut(i);
            let a = &mut left[i - 1].value;
            let b = &mut right[0].value;
            if !a.separated_below(b) {
                clean = false;
                a.bisect();
                b.bisect();
            }
        }
        if clean {
            return;
        }
    }
}

/// Yun's algorithm: pairs `(factor, multiplicity)` with monic squarefree,
/// pairwise coprime factors whose product (with multiplicities) is `p / lc(p)`.
pub fn squarefree_decomposition(p: &RatPoly) -> Vec<(RatPoly, usize)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df).expect("f is nonzero");
    let mut b = f.exact_div(&a0);
    let mut c = df.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d).expect("b is nonconstant");
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Positive integer multiple of a rational polynomial, for sign evaluation
/// without rational normalization.
#[derive(Clone, Debug, PartialEq)]
struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    fn new(p: &RatPoly) -> Self {
        let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let c = p.coeffs().iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
        IntPoly { c }
    }

    /// Sign of `p(n/d)`, via `Σ c_i n^i d^(deg-i)` with `d > 0`.
    fn sign_at(&self, x: &Rational) -> i8 {
        let Some((last, rest)) = self.c.split_last() else { return 0 };
        let (n, d) = (x.numer(), x.denom());
        let mut acc = last.clone();
        let mut dpow = BigInt::one();
        for ci in rest.iter().rev() {
            dpow *= d;
            acc = acc * n + ci * &dpow;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
}

fn pow2_neg(bits: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << bits)
}

fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![normalize_positive(p), normalize_positive(&p.derivative())];
    loop {
        let n = chain.len();
        if chain[n - 1].is_constant() {
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(normalize_positive(&-r));
    }
    chain
}

// Divides by |lc|, which keeps signs and shrinks coefficients.
fn normalize_positive(p: &RatPoly) -> RatPoly {
    match p.leading_coeff() {
        Some(lc) => p.scale(&(Rational::one() / lc.abs())),
        None => p.clone(),
    }
}

fn variations(chain: &[IntPoly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for q in chain {
        let s = q.sign_at(x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn cauchy_bound(p: &RatPoly) -> Rational {
    let coeffs = p.coeffs();
    let lc = coeffs.last().expect("nonzero").abs();
    let max = coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Rational::zero);
    let bound = (max + Rational::one()).ceil().to_integer();
    let mut pow = BigInt::one();
    while pow <= bound {
        pow <<= 1;
    }
    Rational::from_integer(pow)
}

/// Roots of a squarefree polynomial, exact when rational.
fn isolate_squarefree(p: &RatPoly) -> Vec<RootValue> {
    if p.is_constant() {
        return Vec::new();
    }
    let chain: Vec<IntPoly> = sturm_chain(p).iter().map(IntPoly::new).collect();
    let ip = IntPoly::new(p);
    let bound = cauchy_bound(p);
    let lo = -bound.clone();
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), bound.clone(), variations(&chain, &lo) - variations(&chain, &bound))];
    let two = Rational::from_integer(2.into());
    while let Some((a, b, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 {
            if ip.sign_at(&b) == 0 {
                out.push(RootValue::Exact(b));
                continue;
            }
            if ip.sign_at(&a) != 0 {
                out.push(classify_isolated(p, a, b));
                continue;
            }
        }
        let m = (&a + &b) / &two;
        let vm = variations(&chain, &m);
        let va = variations(&chain, &a);
        let vb = variations(&chain, &b);
        stack.push((a, m.clone(), va - vm));
        stack.push((m, b, vm - vb));
    }
    out
}

fn classify_isolated(p: &RatPoly, lo: Rational, hi: Rational) -> RootValue {
    let mut value = RootValue::Isolated(IsolatingInterval::new(lo, hi, p.clone()));
    let lead = primitive_leading_coefficient(p);
    let threshold = Rational::new(BigInt::one(), &lead * &lead);
    loop {
        match &value {
            RootValue::Exact(_) => return value,
            RootValue::Isolated(iv) if iv.width() < threshold => break,
            RootValue::Isolated(_) => value.bisect(),
        }
    }
    let RootValue::Isolated(iv) = &value else { unreachable!() };
    let candidate = simplest_between(&iv.lo, &iv.hi);
    if candidate.denom() <= &lead && p.eval(&candidate).is_zero() {
        return RootValue::Exact(candidate);
    }
    value
}

/// |leading coefficient| of the primitive integer multiple of `p`.
fn primitive_leading_coefficient(p: &RatPoly) -> BigInt {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    (ints.last().expect("nonzero") / content).abs()
}

/// Fraction with the smallest denominator strictly between `lo` and `hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !hi.is_positive() {
        return -simplest_above(&-hi, Some(&-lo));
    }
    simplest_above(lo, Some(hi))
}

// lo >= 0; upper bound `None` means +infinity.
fn simplest_above(lo: &Rational, hi: Option<&Rational>) -> Rational {
    let next = lo.floor() + Rational::one();
    if hi.is_none_or(|h| &next < h) {
        return next;
    }
    let hi = hi.expect("bounded here");
    let fl = lo.floor();
    let a = lo - &fl;
    let b = hi - &fl;
    let y_lo = Rational::one() / b;
    let y = if a.is_zero() {
        simplest_above(&y_lo, None)
    } else {
        let y_hi = Rational::one() / a;
        simplest_above(&y_lo, Some(&y_hi))
    };
    fl + Rational::one() / y
}

/// Closed-interval enclosure of `p` over `[lo, hi]`.
pub fn eval_interval(p: &RatPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut acc = (Rational::zero(), Rational::zero());
    for c in p.coeffs().iter().rev() {
        let prods = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let min = prods.iter().min().expect("four").clone();
        let max = prods.iter().max().expect("four").clone();
        acc = (min + c, max + c);
    }
    acc
}

#[derive(Serialize, Deserialize)]
struct RootRecord {
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_rational::option")]
    value: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interval: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly: Option<RatPoly>,
    approx: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplicity: Option<usize>,
}

impl RootRecord {
    fn from_value(v: &RootValue, multiplicity: Option<usize>) -> Self {
        match v {
            RootValue::Exact(q) => RootRecord {
                value: Some(q.clone()),
                interval: None,
                poly: None,
                approx: rational_to_f64(q),
                multiplicity,
            },
            RootValue::Isolated(iv) => RootRecord {
                value: None,
                interval: Some([format_rational(&iv.lo), format_rational(&iv.hi)]),
                poly: Some(iv.poly.clone()),
                approx: v.to_f64(),
                multiplicity,
            },
        }
    }

    fn into_value(self) -> std::result::Result<RootValue, String> {
        match (self.value, self.interval, self.poly) {
            (Some(q), _, _) => Ok(RootValue::Exact(q)),
            (None, Some([lo, hi]), Some(poly)) => {
                let lo = parse_rational(&lo).map_err(|e| e.to_string())?;
                let hi = parse_rational(&hi).map_err(|e| e.to_string())?;
                if lo >= hi {
                    return Err("isolating interval must have lo < hi".into());
                }
                Ok(RootValue::Isolated(IsolatingInterval::new(lo, hi, poly)))
            }
            _ => Err("root needs either `value` or `interval` with `poly`".into()),
        }
    }
}

impl Serialize for RootValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootRecord::from_value(self, None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RootRecord::deserialize(d)?
            .into_value()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for Root {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootRecord::from_value(&self.value, Some(self.multiplicity)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Root {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let record = RootRecord::deserialize(d)?;
        let multiplicity = record.multiplicity.unwrap_or(1);
        if multiplicity == 0 {
            return Err(D::Error::custom("multiplicity must be positive"));
        }
        let value = record.into_value().map_err(D::Error::custom)?;
        Ok(Root { value, multiplicity })
    }
}

impl Serialize for RootList {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.roots.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(RootList { roots: Vec::<Root>::deserialize(d)? })
    }
}
