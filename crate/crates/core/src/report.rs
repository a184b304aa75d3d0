//! Validation reports: per-axiom verdicts with re-verifiable witnesses.
//!
//! A failing check always carries at least one witness naming the offending
//! elements and the two values that were compared, so any consumer can replay
//! the arithmetic against the original tables.

use std::fmt;

use crate::grade::FuzzySet;
use crate::value::ExtendedValue;

// Check identifiers, named by what they test.
pub const CHECK_CONSTANTS_PRESENT: &str = "constants-present";
pub const CHECK_COMPLEMENT_CLOSED: &str = "complement-closed";
pub const CHECK_JOIN_CLOSED: &str = "join-closed";
pub const CHECK_ZERO_AT_BOTTOM: &str = "zero-at-bottom";
pub const CHECK_MONOTONE_NONNEGATIVE: &str = "monotone-nonnegative";
pub const CHECK_MONOTONE_NONPOSITIVE: &str = "monotone-nonpositive";
pub const CHECK_MODULAR: &str = "modular";
pub const CHECK_CONTINUOUS_FROM_BELOW: &str = "continuous-from-below";
pub const CHECK_SINGLE_INFINITY_SIGN: &str = "single-infinity-sign";
pub const CHECK_MONOTONE: &str = "monotone";
pub const CHECK_MAX_SUBADDITIVE: &str = "max-subadditive";
pub const CHECK_SIGMA_AGREEMENT: &str = "sigma-agreement";
pub const CHECK_SIGMA_MEASURABLE: &str = "sigma-measurable";
pub const CHECK_CANDIDATE_VALID: &str = "candidate-valid";
pub const CHECK_AGREES_ON_SIGMA: &str = "agrees-on-sigma";
pub const CHECK_AGREES_WITH_EXTENSION: &str = "agrees-with-extension";

/// The offending tuple of elements plus the left/right values whose
/// comparison failed (absent for purely structural witnesses such as a
/// missing complement).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub elements: Vec<FuzzySet>,
    pub left: Option<ExtendedValue>,
    pub right: Option<ExtendedValue>,
    pub note: String,
}

impl Witness {
    pub fn structural(elements: Vec<FuzzySet>, note: impl Into<String>) -> Self {
        Witness { elements, left: None, right: None, note: note.into() }
    }

    pub fn valued(
        elements: Vec<FuzzySet>,
        left: ExtendedValue,
        right: ExtendedValue,
        note: impl Into<String>,
    ) -> Self {
        Witness { elements, left: Some(left), right: Some(right), note: note.into() }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", elems.join(", "))?;
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            write!(f, " {} vs {}", l, r)?;
        }
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

/// One axiom-level verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

impl Check {
    pub fn pass(id: &str) -> Self {
        Check { id: id.to_string(), passed: true, witnesses: Vec::new() }
    }

    pub fn from_witnesses(id: &str, witnesses: Vec<Witness>) -> Self {
        Check { id: id.to_string(), passed: witnesses.is_empty(), witnesses }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new(checks: Vec<Check>) -> Self {
        ValidationReport { checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Convenience for tests: the named check exists and failed.
    pub fn failed(&self, id: &str) -> bool {
        self.check(id).map(|c| !c.passed).unwrap_or(false)
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}: {}", c.id, if c.passed { "pass" } else { "FAIL" })?;
            for w in &c.witnesses {
                writeln!(f, "  witness {}", w)?;
            }
        }
        Ok(())
    }
}
