//! Report types shared by the verifiers, the rough-isometry machinery and
//! the batch front end.
//!
//! Reports serialize to JSON with stable key order (struct declaration
//! order); witnesses additionally export as RFC-4180 CSV rows for plotting.

use serde::Serialize;

use crate::error::{GeomError, Result};

/// Outcome vocabulary. Sampling can only certify "no violation found" or
/// exhibit a concrete violation, so failures carry witnesses and
/// undecidable interval comparisons are reported as such.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Passed,
    VerificationFailed,
    HypothesisFailed,
    Indeterminate,
    IsSubmersion,
    NotSubmersion,
    Satisfied,
    ViolatedRi1,
    ViolatedRi2,
    Fitted,
    ViolationTrend,
    NotFound,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Passed => "passed",
            Verdict::VerificationFailed => "verification_failed",
            Verdict::HypothesisFailed => "hypothesis_failed",
            Verdict::Indeterminate => "indeterminate",
            Verdict::IsSubmersion => "is_submersion",
            Verdict::NotSubmersion => "not_submersion",
            Verdict::Satisfied => "satisfied",
            Verdict::ViolatedRi1 => "violated_ri1",
            Verdict::ViolatedRi2 => "violated_ri2",
            Verdict::Fitted => "fitted",
            Verdict::ViolationTrend => "violation_trend",
            Verdict::NotFound => "not_found",
        }
    }
}

/// The batch-runnable checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    S2,
    Lemma32,
    Prop34,
    Prop35,
    Ri1Fit,
    Ri1Search,
    Ri2,
    Thm421,
    Thm423,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::S2,
        CheckKind::Lemma32,
        CheckKind::Prop34,
        CheckKind::Prop35,
        CheckKind::Ri1Fit,
        CheckKind::Ri1Search,
        CheckKind::Ri2,
        CheckKind::Thm421,
        CheckKind::Thm423,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckKind::S2 => "s2",
            CheckKind::Lemma32 => "lemma32",
            CheckKind::Prop34 => "prop34",
            CheckKind::Prop35 => "prop35",
            CheckKind::Ri1Fit => "ri1-fit",
            CheckKind::Ri1Search => "ri1-search",
            CheckKind::Ri2 => "ri2",
            CheckKind::Thm421 => "thm421",
            CheckKind::Thm423 => "thm423",
        }
    }

    pub fn parse(s: &str) -> Option<CheckKind> {
        CheckKind::ALL.iter().copied().find(|k| k.as_str() == s)
    }
}

/// One beta grid point of a constants scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub beta: f64,
    pub alpha_min: f64,
}

/// Hypothesis constants, either supplied or fitted by the scan.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisInfo {
    pub alpha: f64,
    pub beta: f64,
    pub scan: Vec<ScanEntry>,
}

/// A concrete point(-pair) exhibiting or refuting an inequality.
#[derive(Debug, Clone, Serialize, Default)]
pub struct Witness {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_upper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

/// One verifier outcome.
#[derive(Debug, Clone, Serialize)]
pub struct VerifierReport {
    pub case: String,
    pub check: String,
    pub hypothesis: Option<HypothesisInfo>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl VerifierReport {
    pub fn new(case: impl Into<String>, check: impl Into<String>) -> Self {
        VerifierReport {
            case: case.into(),
            check: check.into(),
            hypothesis: None,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: 0.0,
            verdict: Verdict::Indeterminate,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }
}

fn coords_field(v: &Option<Vec<f64>>) -> String {
    match v {
        None => String::new(),
        Some(c) => c
            .iter()
            .map(|x| format!("{x:.12e}"))
            .collect::<Vec<_>>()
            .join(";"),
    }
}

fn float_field(v: &Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) => format!("{x:.12e}"),
    }
}

/// Write witness rows (one per witness, tagged with case and check) as
/// RFC-4180 CSV with a header row.
pub fn write_witness_csv<W: std::io::Write>(
    out: W,
    rows: &[(String, String, Witness)],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "case",
        "check",
        "kind",
        "p",
        "q",
        "delta_lower",
        "delta_upper",
        "d_lower",
        "d_upper",
        "bound",
        "margin",
        "param",
        "note",
    ])
    .map_err(|e| GeomError::Config(format!("csv: {e}")))?;
    for (case, check, wit) in rows {
        w.write_record([
            case.as_str(),
            check.as_str(),
            wit.kind.as_str(),
            &coords_field(&wit.p),
            &coords_field(&wit.q),
            &float_field(&wit.delta_lower),
            &float_field(&wit.delta_upper),
            &float_field(&wit.d_lower),
            &float_field(&wit.d_upper),
            &float_field(&wit.bound),
            &float_field(&wit.margin),
            &float_field(&wit.param),
            wit.note.as_str(),
        ])
        .map_err(|e| GeomError::Config(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| GeomError::Config(format!("csv: {e}")))?;
    Ok(())
}
