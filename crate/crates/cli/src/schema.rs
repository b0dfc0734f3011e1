//! Output records of the subcommands.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use stieltjes::bethe::BaeReport;
use stieltjes::casoratian::{AbelClosedForm, AbelReport};
use stieltjes::corpus::{Derivation, Family};
use stieltjes::norlund::NorlundReport;
use stieltjes::scalar::serde_rational;
use stieltjes::uniqueness::{UniquenessCertificate, Verdict};
use stieltjes::{DifferenceEquation, HypergeometricData, KernelBasis, RatPoly, Rational};

/// Plain-text rendering for `--output text`.
pub trait Render {
    fn text(&self) -> String;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub equation: DifferenceEquation,
    pub kernel: KernelBasis,
    pub degrees: Vec<usize>,
}

impl Render for SolveOutput {
    fn text(&self) -> String {
        let mut s = format!(
            "kernel dimension {} (degree bound {})\n",
            self.kernel.dimension, self.kernel.degree_bound
        );
        for p in &self.kernel.basis {
            let _ = writeln!(s, "  {p}");
        }
        s
    }
}

pub type CertifyOutput = UniquenessCertificate;

impl Render for UniquenessCertificate {
    fn text(&self) -> String {
        let verdict = serde_json::to_value(self.verdict).expect("verdict serializes");
        let mut s = format!("verdict {}\n", verdict.as_str().unwrap_or("?"));
        let _ = writeln!(s, "kappa {}", self.kappa);
        if let Some(w) = &self.witness {
            let _ = writeln!(
                s,
                "witness root {} of {:?}, direction {:?}, lattice counts g - h r: {}, g: {}",
                w.root.to_f64(),
                w.source,
                w.direction,
                w.g_minus_hr_count,
                w.g_count
            );
        }
        let _ = writeln!(s, "collision classes {}", self.collisions.len());
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    #[serde(with = "serde_rational")]
    pub x: Rational,
    /// Exact Casoratian value.
    #[serde(with = "serde_rational")]
    pub w: Rational,
    pub w_decimal: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CasoratianOutput {
    pub equation: DifferenceEquation,
    #[serde(with = "serde_rational")]
    pub x0: Rational,
    /// `y(x0), y(x0 + h)` of the first solution.
    #[serde(with = "serde_rational::vec")]
    pub y1_initial: Vec<Rational>,
    #[serde(with = "serde_rational::vec")]
    pub y2_initial: Vec<Rational>,
    pub precision_digits: u32,
    pub values: Vec<LatticePoint>,
    pub closed_form: AbelClosedForm,
    pub report: AbelReport,
}

impl Render for CasoratianOutput {
    fn text(&self) -> String {
        let r = &self.report;
        let mut s = format!(
            "recurrence exact at {} points: {}\n",
            self.values.len().saturating_sub(1),
            r.recurrence_exact
        );
        let _ = writeln!(s, "closed form kappa {} samples {} skipped {}", self.closed_form.kappa, r.samples, r.skipped);
        if let (Some(mean), Some(sd)) = (&r.ratio_mean, r.ratio_rel_stddev) {
            let _ = writeln!(s, "ratio W / closed form: mean {mean}, relative std {sd:e}");
        }
        for note in &r.notes {
            let _ = writeln!(s, "note: {note}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaeOutput {
    pub equation: DifferenceEquation,
    /// The kernel element whose zeros were checked; absent for given roots.
    pub polynomial: Option<RatPoly>,
    pub root_digits: u32,
    pub report: BaeReport,
}

impl Render for BaeOutput {
    fn text(&self) -> String {
        let r = &self.report;
        let mut s = format!("n = {} zeros, tolerance {:e}\n", r.n, r.tolerance);
        let _ = writeln!(s, "max BAE residual {:e}: {}", r.bae_max, if r.bae_pass { "pass" } else { "fail" });
        let _ = writeln!(
            s,
            "max equation residual {:e}: {}",
            r.equation_residual_max,
            if r.equation_pass { "pass" } else { "fail" }
        );
        let _ = writeln!(s, "verdict {}", if r.pass { "PASS" } else { "FAIL" });
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NorlundOutput {
    /// Significant digits carried by the binary64 values below.
    pub precision_digits: u32,
    pub report: NorlundReport,
}

impl Render for NorlundOutput {
    fn text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        match r.closed_form {
            Some(v) => {
                let _ = writeln!(s, "closed form     {v:.15e}");
            }
            None => s.push_str("closed form     unavailable\n"),
        }
        let _ = writeln!(s, "numeric         {:.15e}", r.numeric);
        let _ = writeln!(s, "error estimate  {:.3e}", r.error_estimate);
        if let Some(d) = r.direct {
            let _ = writeln!(s, "direct sum      {d:.15e}");
        }
        for d in &r.diagnostics {
            let _ = writeln!(s, "note: {d}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaHOutput {
    #[serde(with = "serde_rational")]
    pub x: Rational,
    #[serde(with = "serde_rational")]
    pub h: Rational,
    pub pole: bool,
    pub pole_index: Option<u64>,
    pub value: Option<String>,
    /// Exact value when `x` is a positive multiple of `h`.
    #[serde(with = "serde_rational::option")]
    pub exact: Option<Rational>,
    pub precision_digits: u32,
}

impl Render for GammaHOutput {
    fn text(&self) -> String {
        match (&self.value, &self.exact) {
            _ if self.pole => "pole\n".into(),
            (Some(v), Some(q)) => format!("{v}\nexact {q}\n"),
            (Some(v), None) => format!("{v}\n"),
            (None, _) => "pole\n".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusDegree {
    pub n: u32,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
    pub dimension: usize,
    pub solution_degrees: Vec<usize>,
    pub bae_max: Option<f64>,
    pub bae_pass: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub id: String,
    pub family: Family,
    pub data: HypergeometricData,
    pub derivation: Derivation,
    pub verdict: Verdict,
    pub degrees: Vec<CorpusDegree>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusOutput {
    pub entries: Vec<CorpusSummary>,
}

impl Render for CorpusOutput {
    fn text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let verdict = serde_json::to_value(e.verdict).expect("verdict serializes");
            let dims: Vec<String> = e.degrees.iter().map(|d| d.dimension.to_string()).collect();
            let bae = e.degrees.iter().filter_map(|d| d.bae_max).fold(0.0f64, f64::max);
            let all_pass = e.degrees.iter().all(|d| d.bae_pass != Some(false));
            let _ = writeln!(
                s,
                "{:<24} {:<13} dims [{}] max BAE {:.1e} {}",
                e.id,
                verdict.as_str().unwrap_or("?"),
                dims.join(","),
                bae,
                if all_pass { "pass" } else { "fail" }
            );
        }
        s
    }
}
