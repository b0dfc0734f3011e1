//! Uniqueness certificates for polynomial solutions of difference equations.
//!
//! With `a_j` the roots of `g - h r` and `b_l` the roots of `g`, the checks are
//!
//! * `T1`: some upward lattice `{a_j + k h : k >= 0}` contains no `b_l`;
//! * `T1_REMARK`: some downward lattice `{b_l - k h : k >= 0}` contains no `a_j`;
//! * `T2`: on some upward lattice from `a_j`, the `a` roots outnumber the `b` roots.
//!
//! Whether two roots lie on a common lattice is decided exactly: a root of `P`
//! and a root of `Q` differ by `k h` iff `gcd(P(x), Q(x + k h))` vanishes at the
//! first one. Only `k` up to the span of all roots divided by `h` can occur.

use std::collections::VecDeque;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fdeq::DifferenceEquation;
use crate::ratpoly::{real_roots, RootList, RootValue, DEFAULT_ROOT_BITS};
use crate::scalar::{serde_rational, Rational};
use crate::RatPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootSource {
    #[serde(rename = "G")]
    G,
    #[serde(rename = "G_MINUS_HR")]
    GMinusHr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeMember {
    pub root: RootValue,
    pub source: RootSource,
    /// Position above the anchor in multiples of `h`.
    pub offset: u64,
}

/// Roots that differ pairwise by integer multiples of `h`, sorted by offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeClass {
    pub anchor: RootValue,
    pub members: Vec<LatticeMember>,
}

impl LatticeClass {
    fn count(&self, source: RootSource, keep: impl Fn(u64) -> bool) -> usize {
        self.members
            .iter()
            .filter(|m| m.source == source && keep(m.offset))
            .count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    T1,
    #[serde(rename = "T1_REMARK")]
    T1Remark,
    T2,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Verdict {
    pub fn is_certified(self) -> bool {
        self != Verdict::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

/// The root and lattice on which a theorem's hypothesis holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub root: RootValue,
    pub source: RootSource,
    pub direction: Direction,
    /// Roots of `g - h r` on the witness lattice (in the witness direction).
    pub g_minus_hr_count: usize,
    /// Roots of `g` on the witness lattice (in the witness direction).
    pub g_count: usize,
    pub lattice: LatticeClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniquenessCertificate {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Leading coefficient of `g - h r` divided by that of `g`; the checks
    /// only use root positions and are unaffected by it.
    #[serde(with = "serde_rational")]
    pub kappa: Rational,
    pub roots_g: RootList,
    pub roots_g_minus_hr: RootList,
    /// Classes with more than one member.
    pub collisions: Vec<LatticeClass>,
}

/// Root data shared by all checks.
#[derive(Clone, Debug)]
pub struct LatticeAnalysis {
    pub kappa: Rational,
    pub roots_g: RootList,
    pub roots_g_minus_hr: RootList,
    pub classes: Vec<LatticeClass>,
}

fn simple_real_roots(p: &RatPoly, name: &str) -> Result<RootList> {
    let roots = real_roots(p, DEFAULT_ROOT_BITS)?;
    if roots.total_multiplicity() != p.degree().unwrap_or(0) {
        return Err(Error::Hypothesis(format!("{name} has non-real roots")));
    }
    if !roots.all_simple() {
        return Err(Error::Hypothesis(format!("{name} has repeated roots")));
    }
    Ok(roots)
}

/// Index of the unique candidate equal to the root `target` of a polynomial
/// whose roots are exactly the candidates.
fn locate(target: &RootValue, candidates: &[RootValue]) -> usize {
    let mut t = target.clone();
    loop {
        let hits: Vec<usize> = (0..candidates.len())
            .filter(|&i| t.may_overlap(&candidates[i]))
            .collect();
        match hits.len() {
            1 => return hits[0],
            0 => panic!("root is not among the candidates"),
            _ => t.bisect(),
        }
    }
}

/// Builds the lattice classes of the roots of `g` and `g - h r`.
pub fn analyze(eq: &DifferenceEquation) -> Result<LatticeAnalysis> {
    let g = eq.g().monic();
    let gmh_raw = eq.g_minus_hr();
    if gmh_raw.is_zero() {
        return Err(Error::Hypothesis("g - h r vanishes identically".into()));
    }
    let kappa = gmh_raw.leading_coeff().expect("nonzero") / eq.g().leading_coeff().expect("nonzero");
    let gmh = gmh_raw.monic();
    let roots_g = simple_real_roots(&g, "g")?;
    let roots_a = simple_real_roots(&gmh, "g - h r")?;
    let h = eq.h().clone();

    // Node list: roots of g - h r first, then roots of g.
    let mut values: Vec<RootValue> = roots_a.roots().iter().map(|r| r.value.clone()).collect();
    let n_a = values.len();
    values.extend(roots_g.roots().iter().map(|r| r.value.clone()));
    let sources: Vec<RootSource> = (0..values.len())
        .map(|i| if i < n_a { RootSource::GMinusHr } else { RootSource::G })
        .collect();

    let mut edges: Vec<(usize, usize, u64)> = Vec::new();
    if values.len() > 1 {
        let lo = values.iter().map(|v| v.lower()).min().expect("nonempty").clone();
        let hi = values.iter().map(|v| v.upper()).max().expect("nonempty").clone();
        let span = ((hi - lo) / &h).ceil().to_integer();
        let kmax: u64 = span.try_into().unwrap_or(u64::MAX);
        let polys = [(&gmh, 0usize, n_a), (&g, n_a, values.len())];
        for (p, p_start, p_end) in polys {
            for (q, q_start, q_end) in polys {
                let same = p_start == q_start;
                let kmin = if same { 1 } else { 0 };
                for k in kmin..=kmax {
                    // Cross pairs are scanned in both orders, so offset 0 once.
                    if k == 0 && p_start != 0 {
                        continue;
                    }
                    let step = Rational::from_integer(k.into()) * &h;
                    let shifted = q.shift(&step);
                    let d = p.gcd(&shifted)?;
                    if d.is_constant() {
                        continue;
                    }
                    for rho in real_roots(&d, 16)?.into_roots() {
                        let i = p_start + locate(&rho.value, &values[p_start..p_end]);
                        let up = rho.value.translate(&step);
                        let j = q_start + locate(&up, &values[q_start..q_end]);
                        edges.push((i, j, k));
                    }
                }
            }
        }
    }

    // Offsets by breadth-first search over difference edges.
    let n = values.len();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(i, j, k) in &edges {
        adj[i].push((j, k as i64));
        adj[j].push((i, -(k as i64)));
    }
    let mut offset: Vec<Option<i64>> = vec![None; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if offset[start].is_some() {
            continue;
        }
        offset[start] = Some(0);
        let mut component = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let oi = offset[i].expect("visited");
            for &(j, k) in &adj[i] {
                match offset[j] {
                    None => {
                        offset[j] = Some(oi + k);
                        component.push(j);
                        queue.push_back(j);
                    }
                    Some(oj) => debug_assert_eq!(oj, oi + k, "inconsistent lattice offsets"),
                }
            }
        }
        let min = component.iter().map(|&i| offset[i].expect("visited")).min().expect("nonempty");
        let mut members: Vec<LatticeMember> = component
            .iter()
            .map(|&i| LatticeMember {
                root: values[i].clone(),
                source: sources[i],
                offset: (offset[i].expect("visited") - min) as u64,
            })
            .collect();
        members.sort_by_key(|m| (m.offset, m.source == RootSource::G));
        classes.push(LatticeClass { anchor: members[0].root.clone(), members });
    }
    classes.sort_by(|a, b| a.anchor.lower().cmp(b.anchor.lower()));
    Ok(LatticeAnalysis { kappa, roots_g, roots_g_minus_hr: roots_a, classes })
}

pub fn lattice_classes(eq: &DifferenceEquation) -> Result<Vec<LatticeClass>> {
    Ok(analyze(eq)?.classes)
}

fn members_by_value(analysis: &LatticeAnalysis, source: RootSource) -> Vec<(&LatticeClass, &LatticeMember)> {
    let mut out: Vec<(&LatticeClass, &LatticeMember)> = analysis
        .classes
        .iter()
        .flat_map(|c| c.members.iter().map(move |m| (c, m)))
        .filter(|(_, m)| m.source == source)
        .collect();
    out.sort_by(|a, b| a.1.root.lower().cmp(b.1.root.lower()));
    out
}

fn theorem1(analysis: &LatticeAnalysis) -> Option<Witness> {
    members_by_value(analysis, RootSource::GMinusHr)
        .into_iter()
        .find(|(class, m)| class.count(RootSource::G, |o| o >= m.offset) == 0)
        .map(|(class, m)| Witness {
            root: m.root.clone(),
            source: m.source,
            direction: Direction::Up,
            g_minus_hr_count: class.count(RootSource::GMinusHr, |o| o >= m.offset),
            g_count: 0,
            lattice: class.clone(),
        })
}

fn theorem1_remark(analysis: &LatticeAnalysis) -> Option<Witness> {
    members_by_value(analysis, RootSource::G)
        .into_iter()
        .find(|(class, m)| class.count(RootSource::GMinusHr, |o| o <= m.offset) == 0)
        .map(|(class, m)| Witness {
            root: m.root.clone(),
            source: m.source,
            direction: Direction::Down,
            g_minus_hr_count: 0,
            g_count: class.count(RootSource::G, |o| o <= m.offset),
            lattice: class.clone(),
        })
}

fn theorem2(analysis: &LatticeAnalysis) -> Option<Witness> {
    members_by_value(analysis, RootSource::GMinusHr)
        .into_iter()
        .find_map(|(class, m)| {
            let a = class.count(RootSource::GMinusHr, |o| o >= m.offset);
            let b = class.count(RootSource::G, |o| o >= m.offset);
            (a > b).then(|| Witness {
                root: m.root.clone(),
                source: m.source,
                direction: Direction::Up,
                g_minus_hr_count: a,
                g_count: b,
                lattice: class.clone(),
            })
        })
}

fn certificate(analysis: LatticeAnalysis, verdict: Verdict, witness: Option<Witness>) -> UniquenessCertificate {
    let verdict = if witness.is_some() { verdict } else { Verdict::Inconclusive };
    UniquenessCertificate {
        verdict,
        witness,
        kappa: analysis.kappa,
        roots_g: analysis.roots_g,
        roots_g_minus_hr: analysis.roots_g_minus_hr,
        collisions: analysis.classes.into_iter().filter(|c| c.members.len() > 1).collect(),
    }
}

pub fn check_theorem1(eq: &DifferenceEquation) -> Result<UniquenessCertificate> {
    let analysis = analyze(eq)?;
    let w = theorem1(&analysis);
    Ok(certificate(analysis, Verdict::T1, w))
}

pub fn check_theorem1_remark(eq: &DifferenceEquation) -> Result<UniquenessCertificate> {
    let analysis = analyze(eq)?;
    let w = theorem1_remark(&analysis);
    Ok(certificate(analysis, Verdict::T1Remark, w))
}

pub fn check_theorem2(eq: &DifferenceEquation) -> Result<UniquenessCertificate> {
    let analysis = analyze(eq)?;
    let w = theorem2(&analysis);
    Ok(certificate(analysis, Verdict::T2, w))
}

/// First of `T1`, `T1_REMARK`, `T2` whose hypothesis holds.
///
/// `INCONCLUSIVE` means the checks are silent, not that two independent
/// solutions exist.
pub fn certify(eq: &DifferenceEquation) -> Result<UniquenessCertificate> {
    let analysis = analyze(eq)?;
    if let Some(w) = theorem1(&analysis) {
        return Ok(certificate(analysis, Verdict::T1, Some(w)));
    }
    if let Some(w) = theorem1_remark(&analysis) {
        return Ok(certificate(analysis, Verdict::T1Remark, Some(w)));
    }
    let w = theorem2(&analysis);
    Ok(certificate(analysis, Verdict::T2, w))
}

/// Builds an equation with prescribed roots of `g` and `g - h r` (both monic
/// up to `kappa`) and the given `u`.
pub fn equation_from_roots(
    b_roots: &[Rational],
    a_roots: &[Rational],
    kappa: &Rational,
    h: &Rational,
    u: RatPoly,
) -> Result<DifferenceEquation> {
    let g = RatPoly::from_roots(b_roots);
    let gmh = RatPoly::from_roots(a_roots).scale(kappa);
    let r = (&g - &gmh).scale(&(Rational::one() / h));
    DifferenceEquation::new(g, r, u, h.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn eq(b: &[Rational], a: &[Rational]) -> DifferenceEquation {
        equation_from_roots(b, a, &int(1), &int(1), RatPoly::zero()).unwrap()
    }

    fn class_values(classes: &[LatticeClass]) -> Vec<Vec<Rational>> {
        classes
            .iter()
            .map(|c| c.members.iter().map(|m| m.root.exact().unwrap().clone()).collect())
            .collect()
    }

    #[test]
    fn singleton_classes() {
        let e = eq(&[int(0), rat(11, 2)], &[rat(1, 4), rat(3, 4)]);
        let classes = lattice_classes(&e).unwrap();
        assert_eq!(classes.len(), 4);
        let c = check_theorem1(&e).unwrap();
        assert_eq!(c.verdict, Verdict::T1);
        assert_eq!(c.witness.unwrap().root, RootValue::Exact(rat(1, 4)));
    }

    #[test]
    fn paired_classes() {
        let e = eq(&[int(2), rat(5, 2)], &[int(0), rat(1, 2)]);
        let classes = lattice_classes(&e).unwrap();
        assert_eq!(class_values(&classes), vec![vec![int(0), int(2)], vec![rat(1, 2), rat(5, 2)]]);
        assert_eq!(classes[0].members[1].offset, 2);
        assert_eq!(check_theorem1(&e).unwrap().verdict, Verdict::Inconclusive);
        assert_eq!(check_theorem1_remark(&e).unwrap().verdict, Verdict::Inconclusive);
        assert_eq!(check_theorem2(&e).unwrap().verdict, Verdict::Inconclusive);
        let c = certify(&e).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.collisions.len(), 2);
    }

    #[test]
    fn theorem2_counting() {
        let e = eq(&[int(5), rat(1, 3), rat(2, 3)], &[int(0), int(1), int(2)]);
        let classes = lattice_classes(&e).unwrap();
        assert_eq!(classes.len(), 3);
        let big = classes.iter().find(|c| c.members.len() == 4).unwrap();
        assert_eq!(
            big.members.iter().map(|m| m.offset).collect::<Vec<_>>(),
            vec![0, 1, 2, 5]
        );
        assert_eq!(check_theorem1(&e).unwrap().verdict, Verdict::Inconclusive);
        let t2 = check_theorem2(&e).unwrap();
        assert_eq!(t2.verdict, Verdict::T2);
        let w = t2.witness.unwrap();
        assert_eq!((w.g_minus_hr_count, w.g_count), (3, 1));
        // The dispatcher tries the downward check before counting.
        assert_eq!(certify(&e).unwrap().verdict, Verdict::T1Remark);
    }

    #[test]
    fn remark_examples() {
        let e = eq(&[int(10)], &[rat(1, 2)]);
        assert_eq!(check_theorem1_remark(&e).unwrap().verdict, Verdict::T1Remark);
        let e = eq(&[int(10)], &[int(3)]);
        assert_eq!(check_theorem1_remark(&e).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn hypothesis_violations() {
        let e = eq(&[int(1), int(1)], &[int(0)]);
        assert!(certify(&e).unwrap_err().is_hypothesis());
        let g = RatPoly::new(vec![int(1), int(0), int(1)]);
        let e = DifferenceEquation::new(g, RatPoly::zero(), RatPoly::zero(), int(1)).unwrap();
        assert!(certify(&e).unwrap_err().is_hypothesis());
    }

    #[test]
    fn irrational_roots_collide_exactly() {
        // g - h r = x² - 2 and g = (x - 3)² - 2.
        let a = RatPoly::new(vec![int(-2), int(0), int(1)]);
        let g = a.shift(&int(-3));
        let r = &g - &a;
        let e = DifferenceEquation::new(g, r, RatPoly::zero(), int(1)).unwrap();
        let classes = lattice_classes(&e).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.members.len() == 2 && c.members[1].offset == 3));
        assert_eq!(certify(&e).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn certificate_json_roundtrip() {
        let e = eq(&[int(5), rat(1, 3), rat(2, 3)], &[int(0), int(1), int(2)]);
        let c = check_theorem2(&e).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["verdict"], "T2");
        let back: UniquenessCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }
}
