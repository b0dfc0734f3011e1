#![allow(dead_code)]

use proptest::prelude::*;
use stieltjes::ratpoly::Poly;
use stieltjes::{RatPoly, Rational};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| q(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |v| *v != q(0, 1))
}

pub fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

pub fn poly(max_len: usize) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(rational(), 0..=max_len).prop_map(Poly::new)
}

pub fn distinct_rationals(max_len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set(rational(), 1..=max_len).prop_map(|s| s.into_iter().collect())
}
