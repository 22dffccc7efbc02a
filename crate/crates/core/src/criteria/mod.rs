//! Nonexistence criteria for minimal surfaces spanning a contour, and the
//! report that collects their verdicts.

pub mod cone;
pub mod diameter_length;
pub mod tau;
pub mod white;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use cone::{cone_check, cone_membership_margin, ConeSeparator};
pub use diameter_length::{diameter_length_check, Mode};
pub use tau::{tau_root, TauRoot};
pub use white::{white_bruteforce_matrix, white_bruteforce_oracle, white_check, white_from_matrix, WhiteOptimum};

use crate::contour::{contour_diameter, contour_length, Contour};
use diameter_length::diameter_length_from;
use crate::error::ContourError;
use crate::format::sig;

/// Absolute margin a certificate must exceed.
pub const STRICT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    #[serde(rename = "nonexistence-certified")]
    Certified,
    NotTriggered,
    NoCertificateFound,
    Inapplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "nonexistence-certified",
            Verdict::NotTriggered => "not-triggered",
            Verdict::NoCertificateFound => "no-certificate-found",
            Verdict::Inapplicable => "inapplicable",
        }
    }

    pub fn fired(self) -> bool {
        self == Verdict::Certified
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Decomposition { first: Vec<usize>, second: Vec<usize> },
    Cone(ConeSeparator),
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: &'static str,
    pub rigorous: bool,
    pub verdict: Verdict,
    pub margin: Option<f64>,
    pub measured: Vec<(String, f64)>,
    pub certificate: Option<Certificate>,
    pub notes: Vec<String>,
}

impl Entry {
    pub(crate) fn new(name: &'static str, rigorous: bool) -> Self {
        Entry {
            name,
            rigorous,
            verdict: Verdict::Inapplicable,
            margin: None,
            measured: Vec::new(),
            certificate: None,
            notes: Vec::new(),
        }
    }

    pub(crate) fn measure(&mut self, key: &str, value: f64) {
        self.measured.push((key.to_string(), value));
    }

    pub(crate) fn note(&mut self, text: &str) {
        self.notes.push(text.to_string());
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.measured.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    pub fn to_json(&self) -> Value {
        let measured: serde_json::Map<String, Value> =
            self.measured.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
        let certificate = match &self.certificate {
            None => Value::Null,
            Some(Certificate::Decomposition { first, second }) => json!({
                "kind": "decomposition",
                "first": first,
                "second": second,
            }),
            Some(Certificate::Cone(s)) => json!({
                "kind": "cone",
                "apex": s.apex.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                "axis": s.axis.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                "tau": num(s.tau),
                "upper": s.upper,
                "lower": s.lower,
                "margin": num(s.margin),
            }),
        };
        json!({
            "criterion": self.name,
            "rigorous": self.rigorous,
            "verdict": self.verdict,
            "margin": self.margin.map(num),
            "measured": measured,
            "certificate": certificate,
            "notes": self.notes,
        })
    }
}

/// Round to the report precision before serialising.
fn num(x: f64) -> Value {
    let r: f64 = sig(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
}

/// Contour families with a known expected pattern of verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    AntipodalCircles,
    SphereNet,
    Stadium,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "antipodal-circles" => Some(Family::AntipodalCircles),
            "net-circles" | "sphere-net" => Some(Family::SphereNet),
            "stadium" => Some(Family::Stadium),
            _ => None,
        }
    }

    /// Expected firing of (diameter-length, white, cone); `None` = no claim.
    pub fn expected(self) -> [Option<bool>; 3] {
        match self {
            Family::AntipodalCircles => [Some(true), Some(true), Some(false)],
            Family::SphereNet => [Some(true), Some(false), None],
            Family::Stadium => [Some(false), Some(false), Some(false)],
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub cone_budget: usize,
    pub conjectural: bool,
    pub family: Option<Family>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { cone_budget: 1000, conjectural: true, family: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub criterion: &'static str,
    pub expected: bool,
    pub observed: bool,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub components: usize,
    pub points: usize,
    pub entries: Vec<Entry>,
    pub family: Option<Family>,
    pub disagreements: Vec<Disagreement>,
}

impl CriterionReport {
    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Some rigorous criterion certified nonexistence.
    pub fn nonexistence_certified(&self) -> bool {
        self.entries.iter().any(|e| e.rigorous && e.verdict.fired())
    }

    pub fn exit_code(&self) -> i32 {
        if self.nonexistence_certified() { 2 } else { 0 }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "components": self.components,
            "points": self.points,
            "family": self.family,
            "criteria": self.entries.iter().map(Entry::to_json).collect::<Vec<_>>(),
            "disagreements": self.disagreements,
            "nonexistence_certified": self.nonexistence_certified(),
        })
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:<28} {:<10} {:<24} {:>20}\n", "criterion", "rigorous", "verdict", "margin");
        for e in &self.entries {
            out.push_str(&format!(
                "{:<28} {:<10} {:<24} {:>20}\n",
                e.name,
                if e.rigorous { "yes" } else { "no" },
                e.verdict.as_str(),
                e.margin.map(sig).unwrap_or_else(|| "-".into())
            ));
            for (k, v) in &e.measured {
                out.push_str(&format!("    {k} = {}\n", sig(*v)));
            }
            for n in &e.notes {
                out.push_str(&format!("    note: {n}\n"));
            }
        }
        for d in &self.disagreements {
            out.push_str(&format!(
                "DISAGREEMENT {}: expected {} observed {}\n",
                d.criterion,
                if d.expected { "fires" } else { "silent" },
                if d.observed { "fires" } else { "silent" }
            ));
        }
        out
    }
}

/// Run every applicable criterion on `c`.
pub fn analyze(c: &Contour, options: &AnalyzeOptions) -> Result<CriterionReport, ContourError> {
    if options.cone_budget == 0 {
        return Err(ContourError::BadBudget);
    }
    let results: Vec<Result<Vec<Entry>, ContourError>> = [0u8, 1, 2]
        .par_iter()
        .map(|&job| match job {
            0 => {
                let (d, l) = (contour_diameter(c), contour_length(c));
                let mut v = vec![diameter_length_from(d, l, Mode::Proven)];
                if options.conjectural {
                    v.push(diameter_length_from(d, l, Mode::Conjectural));
                }
                Ok(v)
            }
            1 => white_check(c).map(|e| vec![e]),
            _ => cone_check(c, options.cone_budget).map(|e| vec![e]),
        })
        .collect();
    let mut entries = Vec::new();
    for r in results {
        entries.extend(r?);
    }
    let mut report = CriterionReport {
        components: c.len(),
        points: c.point_count(),
        entries,
        family: options.family,
        disagreements: Vec::new(),
    };
    if let Some(f) = options.family {
        let names = ["diameter-length", "white", "cone"];
        for (name, expected) in names.iter().zip(f.expected()) {
            let (Some(expected), Some(e)) = (expected, report.entry(name)) else { continue };
            let observed = e.verdict.fired();
            if observed != expected {
                report.disagreements.push(Disagreement { criterion: e.name, expected, observed });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::stadium;

    #[test]
    fn stadium_is_silent_everywhere() {
        let c = stadium(10.0, 1.0, 64).unwrap();
        let opts = AnalyzeOptions { family: Some(Family::Stadium), ..Default::default() };
        let r = analyze(&c, &opts).unwrap();
        assert!(r.entries.iter().all(|e| !e.verdict.fired()));
        assert_eq!(r.entry("white").unwrap().verdict, Verdict::Inapplicable);
        assert!(r.disagreements.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn certified_entries_have_positive_margin() {
        let x = crate::generators::SphericalPointSet::new(vec![crate::contour::P3::z(), -crate::contour::P3::z()]).unwrap();
        let c = crate::generators::sphere_circles(&x, 0.1, 64).unwrap();
        let r = analyze(&c, &AnalyzeOptions::default()).unwrap();
        for e in &r.entries {
            if e.verdict.fired() {
                assert!(e.margin.unwrap() > 0.0, "{}", e.name);
            }
        }
        assert_eq!(r.exit_code(), 2);
        let text = serde_json::to_string(&r.to_json()).unwrap();
        assert!(text.contains("nonexistence-certified"));
    }

    #[test]
    fn zero_budget_rejected() {
        let c = stadium(1.0, 1.0, 16).unwrap();
        let opts = AnalyzeOptions { cone_budget: 0, ..Default::default() };
        assert!(matches!(analyze(&c, &opts), Err(ContourError::BadBudget)));
    }
}
