//! Machine-readable run reports. Reports are canonical JSON: identical
//! inputs, seed and tool version produce byte-identical output, so wall
//! time and host details never appear here (the binary prints timing to
//! stderr instead).

use serde::{Deserialize, Serialize};

use fuzzmeas::hahn::{HahnDecomposition, PositivityCertificate};
use fuzzmeas::{Check, ValidationReport, Witness};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Exit status contract: scripts distinguish a broken artifact (1) from an
/// interesting mathematical finding (3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// All checks passed.
    Pass,
    /// An axiom or theorem check failed where it must not.
    CheckFailed,
    /// The input could not be used.
    InputError,
    /// A reported mathematical deviation, expected for some fuzzy instances.
    Deviation,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::CheckFailed => 1,
            Outcome::InputError => 2,
            Outcome::Deviation => 3,
        }
    }

    /// Combine severities: input errors dominate, then failed checks,
    /// then deviations.
    pub fn worst(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (InputError, _) | (_, InputError) => InputError,
            (CheckFailed, _) | (_, CheckFailed) => CheckFailed,
            (Deviation, _) | (_, Deviation) => Deviation,
            _ => Pass,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "fuzzmeas".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportWitness {
    pub elements: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    pub note: String,
}

impl From<&Witness> for ReportWitness {
    fn from(w: &Witness) -> Self {
        ReportWitness {
            elements: w.elements.iter().map(|e| e.numerators().to_vec()).collect(),
            left: w.left.as_ref().map(|v| v.to_string()),
            right: w.right.as_ref().map(|v| v.to_string()),
            note: w.note.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportCheck {
    pub id: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<ReportWitness>,
}

impl From<&Check> for ReportCheck {
    fn from(c: &Check) -> Self {
        ReportCheck {
            id: c.id.clone(),
            passed: c.passed,
            witnesses: c.witnesses.iter().map(ReportWitness::from).collect(),
        }
    }
}

/// One validated subject (the algebra, a named measure, a theorem clause)
/// with its checks. `advisory` checks are reported but excluded from the
/// exit status; used for axioms known to fail on natural inputs where the
/// command's purpose is unaffected.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportSection {
    pub subject: String,
    pub passed: bool,
    pub checks: Vec<ReportCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub advisory: Vec<String>,
}

impl ReportSection {
    pub fn from_report(subject: impl Into<String>, report: &ValidationReport) -> Self {
        ReportSection {
            subject: subject.into(),
            passed: report.passed(),
            checks: report.checks.iter().map(ReportCheck::from).collect(),
            advisory: Vec::new(),
        }
    }

    /// Mark some check ids advisory: they no longer affect `passed`.
    pub fn with_advisory(mut self, ids: &[&str]) -> Self {
        self.advisory = ids.iter().map(|s| s.to_string()).collect();
        self.passed = self
            .checks
            .iter()
            .filter(|c| !self.advisory.iter().any(|a| a == &c.id))
            .all(|c| c.passed);
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificatePayload {
    pub set: Vec<u32>,
    pub verdict: String,
    pub all_nonnegative: bool,
    pub all_nonpositive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative_witness: Option<ReportWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_witness: Option<ReportWitness>,
}

impl From<&PositivityCertificate> for CertificatePayload {
    fn from(c: &PositivityCertificate) -> Self {
        let wit = |w: &Option<(fuzzmeas::FuzzySet, fuzzmeas::ExtendedValue)>, sense: &str| {
            w.as_ref().map(|(s, v)| ReportWitness {
                elements: vec![s.numerators().to_vec()],
                left: Some(v.to_string()),
                right: None,
                note: format!("{sense}-valued subset"),
            })
        };
        CertificatePayload {
            set: c.set.numerators().to_vec(),
            verdict: c.verdict.to_string(),
            all_nonnegative: c.all_nonnegative,
            all_nonpositive: c.all_nonpositive,
            negative_witness: wit(&c.negative_witness, "negative"),
            positive_witness: wit(&c.positive_witness, "positive"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HahnPayload {
    pub positive_part: Vec<u32>,
    pub negative_part: Vec<u32>,
    pub lambda: String,
    pub value_at_positive_part: String,
    pub overlap_value: String,
    pub partition_ok: bool,
    pub cert_positive: CertificatePayload,
    pub cert_negative: CertificatePayload,
}

impl From<&HahnDecomposition> for HahnPayload {
    fn from(d: &HahnDecomposition) -> Self {
        HahnPayload {
            positive_part: d.positive_part.numerators().to_vec(),
            negative_part: d.negative_part.numerators().to_vec(),
            lambda: d.lambda.to_string(),
            value_at_positive_part: d.value_at_positive_part.to_string(),
            overlap_value: d.overlap_value.to_string(),
            partition_ok: d.partition_ok,
            cert_positive: CertificatePayload::from(&d.cert_positive),
            cert_negative: CertificatePayload::from(&d.cert_negative),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExtensionPayload {
    pub criterion: String,
    pub class_size: usize,
    pub cube_size: usize,
    /// Class elements, canonical order, capped for readability.
    pub class_sample: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FuzzSummary {
    pub check: String,
    pub trials: u64,
    pub passes: u64,
    pub deviations: u64,
    pub max_points: usize,
    pub max_resolution: u32,
    pub algebra_mode: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunReport {
    pub schema: u32,
    pub tool: ToolInfo,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzz: Option<FuzzSummary>,
    pub sections: Vec<ReportSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hahn: Option<HahnPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionPayload>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<String>,
    pub exit_code: i32,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            schema: REPORT_SCHEMA_VERSION,
            tool: ToolInfo::current(),
            command: command.to_string(),
            instance_digest: None,
            criterion: None,
            seed: None,
            fuzz: None,
            sections: Vec::new(),
            hahn: None,
            extension: None,
            findings: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}
