//! Classical discrete families as test equations.
//!
//! Each family is given in the standard lattice form
//! `σ(x) Δ∇y(x) + τ(x) Δy(x) + λ y(x) = 0` on the unit lattice. Using
//! `Δ∇y(x) = Δ²y(x-1)`, shifting `x → x+1` and `Δy(x+1) = Δy(x) + Δ²y(x)`
//! gives
//!
//! ```text
//! (σ + τ)(x+1) Δ²y + τ(x+1) Δy + λ y(x+1) = 0,
//! ```
//!
//! so `g = (σ+τ)(x+1)`, `r = τ(x+1)`, `u = λ`, `h = 1`.
//!
//! Parameter values live in `fixtures/corpus.json`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdeq::{DifferenceEquation, HypergeometricData};
use crate::ratpoly::Poly;
use crate::scalar::{serde_rational, Rational};
use crate::RatPoly;

pub const BUILTIN_CORPUS: &str = include_str!("../fixtures/corpus.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Charlier,
    Meixner,
    Kravchuk,
    Hahn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub family: Family,
    #[serde(with = "serde_params")]
    pub parameters: BTreeMap<String, Rational>,
    pub max_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub version: u32,
    pub entries: Vec<CorpusEntry>,
}

/// How the equation was obtained from the standard form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    pub standard_form: String,
    pub sigma: RatPoly,
    pub tau: RatPoly,
    pub g: RatPoly,
    pub r: RatPoly,
    pub eigenvalues: String,
    pub domain: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuiltEntry {
    pub id: String,
    pub family: Family,
    pub data: HypergeometricData,
    pub derivation: Derivation,
    pub max_degree: u32,
}

impl BuiltEntry {
    pub fn lambda_n(&self, n: u32) -> Rational {
        self.data.lambda_n(n)
    }

    /// The equation whose polynomial solution has degree `n`.
    pub fn equation(&self, n: u32) -> Result<DifferenceEquation> {
        self.data.equation(&self.lambda_n(n))
    }
}

pub fn load_corpus(json: &str) -> Result<CorpusFile> {
    serde_json::from_str(json).map_err(|e| Error::Parse(format!("corpus: {e}")))
}

/// All entries of the bundled fixture, built.
pub fn builtin() -> Result<Vec<BuiltEntry>> {
    load_corpus(BUILTIN_CORPUS)?.entries.iter().map(build_entry).collect()
}

pub fn build_entry(entry: &CorpusEntry) -> Result<BuiltEntry> {
    let (data, derivation) = corpus_build(entry.family, &entry.parameters)?;
    Ok(BuiltEntry { id: entry.id.clone(), family: entry.family, data, derivation, max_degree: entry.max_degree })
}

fn param<'a>(params: &'a BTreeMap<String, Rational>, name: &str) -> Result<&'a Rational> {
    params.get(name).ok_or_else(|| Error::Domain(format!("missing parameter {name}")))
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg.into()))
    }
}

fn lin(c0: Rational, c1: Rational) -> RatPoly {
    Poly::new(vec![c0, c1])
}

/// Builds the `h = 1` equation data for a family.
pub fn corpus_build(family: Family, params: &BTreeMap<String, Rational>) -> Result<(HypergeometricData, Derivation)> {
    let one = Rational::one();
    let zero = Rational::zero();
    let x = || lin(zero.clone(), one.clone());
    let (sigma, tau, eigenvalues, domain) = match family {
        Family::Charlier => {
            let a = param(params, "a")?;
            require(a.is_positive(), "charlier: a > 0")?;
            (x(), lin(a.clone(), -one.clone()), "λ_n = n", "a > 0")
        }
        Family::Meixner => {
            let (beta, c) = (param(params, "beta")?, param(params, "c")?);
            require(beta.is_positive(), "meixner: beta > 0")?;
            require(c.is_positive() && c < &one, "meixner: 0 < c < 1")?;
            (x(), lin(c * beta, c - &one), "λ_n = (1 - c) n", "beta > 0, 0 < c < 1")
        }
        Family::Kravchuk => {
            let (p, n) = (param(params, "p")?, param(params, "N")?);
            require(p.is_positive() && p < &one, "kravchuk: 0 < p < 1")?;
            require(n.is_integer() && n.is_positive(), "kravchuk: N a positive integer")?;
            (lin(zero.clone(), &one - p), lin(p * n, -one.clone()), "λ_n = n", "0 < p < 1, N positive integer")
        }
        Family::Hahn => {
            let (al, be, n) = (param(params, "alpha")?, param(params, "beta")?, param(params, "N")?);
            require(al > &-one.clone() && be > &-one.clone(), "hahn: alpha, beta > -1")?;
            require(n.is_integer() && n.is_positive(), "hahn: N a positive integer")?;
            // B(x) = (x + α + 1)(x - N), D(x) = x(x - β - N - 1); σ = D, τ = B - D.
            let b = &lin(al + &one, one.clone()) * &lin(-n.clone(), one.clone());
            let d = &x() * &lin(-(be + n + &one), one.clone());
            let tau = &b - &d;
            (d, tau, "λ_n = -n (n + α + β + 1)", "alpha, beta > -1, N positive integer")
        }
    };
    let g = (&sigma + &tau).shift(&one);
    let r = tau.shift(&one);
    let data = HypergeometricData {
        h: one.clone(),
        a: g.coeff(2),
        b: g.coeff(1),
        c: g.coeff(0),
        d: r.coeff(1),
        f: r.coeff(0),
    };
    debug_assert!(g.degree().unwrap_or(0) <= 2 && r.degree().unwrap_or(0) <= 1);
    let derivation = Derivation {
        standard_form: "σ(x) Δ∇y + τ(x) Δy + λ y = 0; g = (σ+τ)(x+1), r = τ(x+1), u = λ, h = 1".into(),
        sigma,
        tau,
        g,
        r,
        eigenvalues: eigenvalues.into(),
        domain: domain.into(),
    };
    Ok((data, derivation))
}

mod serde_params {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Q(#[serde(with = "serde_rational")] Rational);

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<&String, Q> = m.iter().map(|(k, v)| (k, Q(v.clone()))).collect();
        m.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<String, Rational>, D::Error> {
        let m: BTreeMap<String, Q> = BTreeMap::deserialize(d)?;
        Ok(m.into_iter().map(|(k, v)| (k, v.0)).collect())
    }
}
