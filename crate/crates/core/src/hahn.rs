//! Positive/negative classification of fuzzy sets under a signed measure,
//! extraction of positive subsets with a literal step trace, and the Hahn
//! decomposition with brute-force oracles.
//!
//! A set is positive (negative) when every algebra element below it has
//! nonnegative (nonpositive) value. The bottom element is both; its verdict
//! is positive by the tie rule, with both flags recorded.
//!
//! None of the constructions assert the classical decomposition facts they
//! mirror. The decomposition returns certificates and an overlap value and
//! lets the caller see whether the expected conclusions hold — on fuzzy
//! sets they can fail, and such instances are findings, not errors.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::grade::{FuzzySet, LatticeError};
use crate::measure::{MeasureError, SignedMeasure};
use crate::report::{Check, ValidationReport, Witness};
use crate::sigma::SigmaError;
use crate::value::ExtendedValue;

pub const CHECK_TRACE_STEPS_MINIMAL: &str = "trace-steps-minimal";
pub const CHECK_TRACE_STEPS_DISTINCT: &str = "trace-steps-distinct";
pub const CHECK_TRACE_FRONTIER: &str = "trace-frontier-constraints";
pub const CHECK_TRACE_CANDIDATE: &str = "trace-candidate-formula";
pub const CHECK_TRACE_TERMINATION: &str = "trace-termination";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HahnError {
    #[error("set {set} is not a member of the algebra")]
    NotAMember { set: String },
    #[error("extraction requires 0 < value < +inf, got {value}")]
    BadInput { value: ExtendedValue },
    #[error("decomposition requires a measure with no +inf values; negate the measure and decompose the mirror")]
    UnsupportedSign,
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignVerdict {
    Positive,
    Negative,
    Neither,
}

impl std::fmt::Display for SignVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SignVerdict::Positive => write!(f, "positive"),
            SignVerdict::Negative => write!(f, "negative"),
            SignVerdict::Neither => write!(f, "neither"),
        }
    }
}

/// Outcome of classifying one set: the verdict, both all-sign flags (the
/// bottom set and anything with identically zero subsets carry both), and
/// the canonically first strict witnesses in each direction when present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityCertificate {
    pub set: FuzzySet,
    pub verdict: SignVerdict,
    pub all_nonnegative: bool,
    pub all_nonpositive: bool,
    pub negative_witness: Option<(FuzzySet, ExtendedValue)>,
    pub positive_witness: Option<(FuzzySet, ExtendedValue)>,
}

impl PositivityCertificate {
    pub fn is_positive(&self) -> bool {
        self.all_nonnegative
    }

    pub fn is_negative(&self) -> bool {
        self.all_nonpositive
    }
}

/// Classify `set` by enumerating every algebra element below it.
pub fn classify(
    nu: &SignedMeasure,
    set: &FuzzySet,
) -> Result<PositivityCertificate, HahnError> {
    let sigma = nu.algebra();
    let idx = sigma
        .index_of(set)
        .ok_or_else(|| HahnError::NotAMember { set: set.to_string() })?;
    let mut negative_witness = None;
    let mut positive_witness = None;
    for j in sigma.subset_indices(idx) {
        let v = nu.value(j);
        if negative_witness.is_none() && v.is_negative() {
            negative_witness = Some((sigma.element(j).clone(), v.clone()));
        }
        if positive_witness.is_none() && v.is_positive() {
            positive_witness = Some((sigma.element(j).clone(), v.clone()));
        }
        if negative_witness.is_some() && positive_witness.is_some() {
            break;
        }
    }
    let all_nonnegative = negative_witness.is_none();
    let all_nonpositive = positive_witness.is_none();
    // ties go to positive for determinism; both flags stay visible
    let verdict = if all_nonnegative {
        SignVerdict::Positive
    } else if all_nonpositive {
        SignVerdict::Negative
    } else {
        SignVerdict::Neither
    };
    Ok(PositivityCertificate {
        set: set.clone(),
        verdict,
        all_nonnegative,
        all_nonpositive,
        negative_witness,
        positive_witness,
    })
}

/// Which constraint bounds step-k candidates in the extraction loop.
///
/// The sources describing this procedure give two incompatible bounds one
/// sentence apart: candidates below the frontier with previously chosen
/// sets stripped out (complement form), or candidates below the meet of
/// the chosen sets themselves (literal form). The complement form matches
/// the classical proof and is the default; the literal form is kept behind
/// this flag for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontierMode {
    Complement,
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionStep {
    /// Smallest positive integer admitting a candidate with value < -1/n.
    pub bound: BigUint,
    pub chosen: FuzzySet,
    pub value: ExtendedValue,
}

impl ExtractionStep {
    /// The bound as a `u64` when it fits; traces from desk-scale tables
    /// always do.
    pub fn bound_u64(&self) -> Option<u64> {
        self.bound.to_u64()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionTrace {
    pub start: FuzzySet,
    pub mode: FrontierMode,
    pub steps: Vec<ExtractionStep>,
    pub candidate: FuzzySet,
    pub certificate: PositivityCertificate,
}

/// Smallest positive integer `n` with `value < -1/n`, for strictly
/// negative `value`.
fn smallest_bound(value: &ExtendedValue) -> BigUint {
    match value {
        ExtendedValue::NegInfinity => BigUint::one(),
        ExtendedValue::Finite(r) => {
            debug_assert!(r.is_negative());
            // value = -p/q: need n > q/p, so n = floor(q/p) + 1
            let p = r.numer().magnitude();
            let q = r.denom().magnitude();
            q / p + BigUint::one()
        }
        ExtendedValue::PosInfinity => unreachable!("bounds are for negative values"),
    }
}

fn meets_bound(value: &ExtendedValue, n: &BigUint) -> bool {
    match value {
        ExtendedValue::NegInfinity => true,
        ExtendedValue::Finite(r) => {
            if !r.is_negative() {
                return false;
            }
            // -p/q < -1/n  iff  p*n > q
            let p = r.numer().magnitude();
            let q = r.denom().magnitude();
            &(p * n) > q
        }
        ExtendedValue::PosInfinity => false,
    }
}

/// The positive-subset extraction loop, traced step by step.
///
/// At step k, if the frontier `E ∧ ⋀ complement(E_j)` is not positive, the
/// smallest bound `n_k` admitting a not-previously-chosen algebra element
/// below the step constraint with value < -1/n_k is found, and the
/// canonically first such element is recorded. The loop stops when the
/// frontier is positive or no eligible candidate remains; never re-choosing
/// a set guarantees termination, because fuzzy meets with complements do
/// not strictly shrink the frontier.
///
/// The returned candidate is `E ∧ complement(join of chosen sets)` and its
/// certificate is attached as computed — it may fail to be positive, and
/// the trace reports that instead of hiding it.
pub fn extract_positive_subset(
    nu: &SignedMeasure,
    start: &FuzzySet,
) -> Result<ExtractionTrace, HahnError> {
    extract_positive_subset_with_mode(nu, start, FrontierMode::Complement)
}

pub fn extract_positive_subset_with_mode(
    nu: &SignedMeasure,
    start: &FuzzySet,
    mode: FrontierMode,
) -> Result<ExtractionTrace, HahnError> {
    let sigma = nu.algebra();
    let start_idx = sigma
        .index_of(start)
        .ok_or_else(|| HahnError::NotAMember { set: start.to_string() })?;
    let v0 = nu.value(start_idx);
    if !(v0.is_positive() && v0.is_finite()) {
        return Err(HahnError::BadInput { value: v0.clone() });
    }

    let mut chosen: Vec<usize> = Vec::new();
    let mut steps: Vec<ExtractionStep> = Vec::new();
    loop {
        let frontier = chosen
            .iter()
            .try_fold(start.clone(), |acc, &j| acc.meet(&sigma.element(j).complement()))?;
        if classify(nu, &frontier)?.is_positive() {
            break;
        }
        let constraint = match mode {
            FrontierMode::Complement => frontier,
            FrontierMode::Literal => chosen
                .iter()
                .try_fold(start.clone(), |acc, &j| acc.meet(sigma.element(j)))?,
        };
        let c_idx = sigma
            .index_of(&constraint)
            .expect("meets of algebra elements stay in the algebra");
        let eligible: Vec<usize> = sigma
            .subset_indices(c_idx)
            .into_iter()
            .filter(|j| !chosen.contains(j) && nu.value(*j).is_negative())
            .collect();
        let Some(min_value) = eligible.iter().map(|&j| nu.value(j)).min() else {
            break;
        };
        let bound = smallest_bound(min_value);
        let pick = eligible
            .iter()
            .copied()
            .find(|&j| meets_bound(nu.value(j), &bound))
            .expect("the minimum value meets its own bound");
        chosen.push(pick);
        steps.push(ExtractionStep {
            bound,
            chosen: sigma.element(pick).clone(),
            value: nu.value(pick).clone(),
        });
    }

    let stripped = chosen
        .iter()
        .try_fold(start.clone(), |acc, &j| acc.meet(&sigma.element(j).complement()))?;
    let certificate = classify(nu, &stripped)?;
    Ok(ExtractionTrace { start: start.clone(), mode, steps, candidate: stripped, certificate })
}

/// Independent re-derivation of a trace's bookkeeping: bound minimality at
/// every step, distinct choices, the step constraints, the candidate
/// formula, and termination. Used by fuzz campaigns and tests to confirm
/// traces without trusting the extraction loop.
pub fn verify_extraction_trace(
    nu: &SignedMeasure,
    trace: &ExtractionTrace,
) -> Result<ValidationReport, HahnError> {
    let sigma = nu.algebra();
    let start = &trace.start;
    let mut minimal = Vec::new();
    let mut distinct = Vec::new();
    let mut frontier_ok = Vec::new();
    let mut termination = Vec::new();

    let mut chosen: Vec<usize> = Vec::new();
    for (k, step) in trace.steps.iter().enumerate() {
        let step_idx = sigma
            .index_of(&step.chosen)
            .ok_or_else(|| HahnError::NotAMember { set: step.chosen.to_string() })?;
        if chosen.contains(&step_idx) {
            distinct.push(Witness::structural(
                vec![step.chosen.clone()],
                format!("step {} re-chooses a set", k + 1),
            ));
        }

        let frontier = chosen
            .iter()
            .try_fold(start.clone(), |acc, &j| acc.meet(&sigma.element(j).complement()))?;
        if classify(nu, &frontier)?.is_positive() {
            termination.push(Witness::structural(
                vec![frontier.clone()],
                format!("step {} taken although the frontier was already positive", k + 1),
            ));
        }
        let constraint = match trace.mode {
            FrontierMode::Complement => frontier,
            FrontierMode::Literal => chosen
                .iter()
                .try_fold(start.clone(), |acc, &j| acc.meet(sigma.element(j)))?,
        };
        if !step.chosen.leq(&constraint)? {
            frontier_ok.push(Witness::structural(
                vec![step.chosen.clone(), constraint.clone()],
                format!("step {} choice is not below its constraint", k + 1),
            ));
        }
        if !meets_bound(&step.value, &step.bound) {
            frontier_ok.push(Witness::valued(
                vec![step.chosen.clone()],
                step.value.clone(),
                ExtendedValue::zero(),
                format!("step {} value does not beat -1/{}", k + 1, step.bound),
            ));
        }
        if nu.value(step_idx) != &step.value {
            frontier_ok.push(Witness::valued(
                vec![step.chosen.clone()],
                step.value.clone(),
                nu.value(step_idx).clone(),
                format!("step {} recorded value disagrees with the table", k + 1),
            ));
        }

        // minimality: some eligible candidate beats -1/n_k, and none beats
        // -1/(n_k - 1); eligibility loosens as n grows, so these two facts
        // pin the same n as scanning n = 1, 2, ...
        let c_idx = sigma
            .index_of(&constraint)
            .expect("meets of algebra elements stay in the algebra");
        let eligible: Vec<usize> = sigma
            .subset_indices(c_idx)
            .into_iter()
            .filter(|j| !chosen.contains(j) && nu.value(*j).is_negative())
            .collect();
        let at_bound: Vec<usize> = eligible
            .iter()
            .copied()
            .filter(|&j| meets_bound(nu.value(j), &step.bound))
            .collect();
        if at_bound.is_empty() {
            minimal.push(Witness::structural(
                vec![step.chosen.clone()],
                format!("step {}: no candidate beats -1/{}", k + 1, step.bound),
            ));
        } else if at_bound[0] != step_idx {
            minimal.push(Witness::structural(
                vec![step.chosen.clone(), sigma.element(at_bound[0]).clone()],
                format!("step {}: not the canonically first candidate", k + 1),
            ));
        }
        if step.bound > BigUint::one() {
            let prev = &step.bound - BigUint::one();
            if eligible.iter().any(|&j| meets_bound(nu.value(j), &prev)) {
                minimal.push(Witness::structural(
                    vec![step.chosen.clone()],
                    format!("step {}: a candidate already beats -1/{}", k + 1, prev),
                ));
            }
        }
        chosen.push(step_idx);
    }

    // the recorded candidate must equal start ∧ complement(join of chosen)
    let stripped = chosen
        .iter()
        .try_fold(start.clone(), |acc, &j| acc.meet(&sigma.element(j).complement()))?;
    let mut candidate_ok = Vec::new();
    if stripped != trace.candidate {
        candidate_ok.push(Witness::structural(
            vec![trace.candidate.clone(), stripped.clone()],
            "candidate differs from start ∧ complement(join of chosen sets)",
        ));
    }
    let expected_cert = classify(nu, &trace.candidate)?;
    if expected_cert != trace.certificate {
        candidate_ok.push(Witness::structural(
            vec![trace.candidate.clone()],
            "attached certificate does not re-verify",
        ));
    }

    // after the last step, the loop must have had a reason to stop
    let final_frontier = stripped;
    if !classify(nu, &final_frontier)?.is_positive() {
        let constraint_idx = match trace.mode {
            FrontierMode::Complement => sigma
                .index_of(&final_frontier)
                .expect("meets of algebra elements stay in the algebra"),
            FrontierMode::Literal => {
                let lit = chosen
                    .iter()
                    .try_fold(start.clone(), |acc, &j| acc.meet(sigma.element(j)))?;
                sigma.index_of(&lit).expect("meet stays in the algebra")
            }
        };
        let leftover = sigma
            .subset_indices(constraint_idx)
            .into_iter()
            .any(|j| !chosen.contains(&j) && nu.value(j).is_negative());
        if leftover {
            termination.push(Witness::structural(
                vec![final_frontier.clone()],
                "loop stopped although an eligible candidate remained",
            ));
        }
    }

    Ok(ValidationReport::new(vec![
        Check::from_witnesses(CHECK_TRACE_STEPS_MINIMAL, minimal),
        Check::from_witnesses(CHECK_TRACE_STEPS_DISTINCT, distinct),
        Check::from_witnesses(CHECK_TRACE_FRONTIER, frontier_ok),
        Check::from_witnesses(CHECK_TRACE_CANDIDATE, candidate_ok),
        Check::from_witnesses(CHECK_TRACE_TERMINATION, termination),
    ]))
}

/// Brute-force counterpart of the extraction: the canonically first
/// algebra element below `start` that is positive with strictly positive
/// value, or `None` when no such subset exists.
pub fn oracle_positive_subset(
    nu: &SignedMeasure,
    start: &FuzzySet,
) -> Result<Option<PositivityCertificate>, HahnError> {
    let sigma = nu.algebra();
    let idx = sigma
        .index_of(start)
        .ok_or_else(|| HahnError::NotAMember { set: start.to_string() })?;
    for j in sigma.subset_indices(idx) {
        if !nu.value(j).is_positive() {
            continue;
        }
        let cert = classify(nu, sigma.element(j))?;
        if cert.is_positive() {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// A decomposition of the space into a candidate positive part and its
/// complement, with everything needed to re-check the expected conclusions:
/// certificates for both parts, the overlap value, and the coordinatewise
/// partition flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HahnDecomposition {
    pub positive_part: FuzzySet,
    pub negative_part: FuzzySet,
    pub lambda: ExtendedValue,
    pub value_at_positive_part: ExtendedValue,
    pub cert_positive: PositivityCertificate,
    pub cert_negative: PositivityCertificate,
    pub overlap_value: ExtendedValue,
    pub partition_ok: bool,
}

/// Decompose by joining all positive sets of the algebra. `lambda` is the
/// exact maximum of the measure over positive sets; the certificates and
/// the overlap value report whether the classical conclusions hold for
/// this instance.
pub fn hahn_decompose(nu: &SignedMeasure) -> Result<HahnDecomposition, HahnError> {
    if nu.attains_plus_infinity() {
        return Err(HahnError::UnsupportedSign);
    }
    let sigma = nu.algebra();
    let mut lambda: Option<ExtendedValue> = None;
    let mut positive_join: Option<FuzzySet> = None;
    for (j, e) in sigma.elements().iter().enumerate() {
        if !classify(nu, e)?.is_positive() {
            continue;
        }
        let v = nu.value(j).clone();
        lambda = Some(match lambda {
            None => v,
            Some(l) => l.max(v),
        });
        positive_join = Some(match positive_join {
            None => e.clone(),
            Some(p) => p.join(e)?,
        });
    }
    // the bottom element is always positive, so both are present
    let positive_part = positive_join.expect("bottom is positive");
    let lambda = lambda.expect("bottom is positive");

    let negative_part = positive_part.complement();
    let cert_positive = classify(nu, &positive_part)?;
    let cert_negative = classify(nu, &negative_part)?;
    let overlap = positive_part.meet(&negative_part)?;
    let overlap_value = nu.value_of(&overlap)?.clone();
    let value_at_positive_part = nu.value_of(&positive_part)?.clone();
    let q = positive_part.resolution();
    let partition_ok = positive_part
        .numerators()
        .iter()
        .zip(negative_part.numerators())
        .all(|(&a, &b)| a + b == q);

    Ok(HahnDecomposition {
        positive_part,
        negative_part,
        lambda,
        value_at_positive_part,
        cert_positive,
        cert_negative,
        overlap_value,
        partition_ok,
    })
}

/// Full-enumeration counterpart of the decomposition: classify every
/// algebra element, take the maximum value over the positive ones, and
/// return every attaining set in canonical order.
pub fn oracle_hahn(
    nu: &SignedMeasure,
) -> Result<(ExtendedValue, Vec<FuzzySet>), HahnError> {
    if nu.attains_plus_infinity() {
        return Err(HahnError::UnsupportedSign);
    }
    let sigma = nu.algebra();
    let mut positives: Vec<usize> = Vec::new();
    for (j, e) in sigma.elements().iter().enumerate() {
        if classify(nu, e)?.is_positive() {
            positives.push(j);
        }
    }
    let lambda = positives
        .iter()
        .map(|&j| nu.value(j).clone())
        .max()
        .expect("bottom is positive");
    let argmax = positives
        .into_iter()
        .filter(|&j| nu.value(j) == &lambda)
        .map(|j| sigma.element(j).clone())
        .collect();
    Ok((lambda, argmax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grade::Universe;
    use crate::measure::{coordinatewise_measure, FuzzyMeasure};
    use crate::sigma::FuzzySigmaAlgebra;
    use num_rational::BigRational;
    use std::sync::Arc;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cube(q: u32, labels: &[&str]) -> Arc<FuzzySigmaAlgebra> {
        let u = Universe::new(labels.iter().copied()).unwrap();
        Arc::new(FuzzySigmaAlgebra::full_cube(q, u).unwrap())
    }

    fn set(alg: &Arc<FuzzySigmaAlgebra>, grades: &[u32]) -> FuzzySet {
        FuzzySet::new(alg.universe().clone(), alg.resolution(), grades.to_vec()).unwrap()
    }

    /// nu(mu) = mu(a) - mu(b) on the full cube at q=2.
    fn updown() -> SignedMeasure {
        let alg = cube(2, &["a", "b"]);
        let up = vec![rat(0, 1), rat(1, 2), rat(1, 1)];
        let down = vec![rat(0, 1), rat(-1, 2), rat(-1, 1)];
        coordinatewise_measure(&alg, &[up, down]).unwrap().into_signed()
    }

    #[test]
    fn classify_matches_subset_enumeration() {
        let nu = updown();
        let alg = nu.algebra().clone();
        let pos = classify(&nu, &set(&alg, &[2, 0])).unwrap();
        assert_eq!(pos.verdict, SignVerdict::Positive);
        assert!(pos.negative_witness.is_none());

        let neg = classify(&nu, &set(&alg, &[0, 2])).unwrap();
        assert_eq!(neg.verdict, SignVerdict::Negative);
        assert!(neg.positive_witness.is_none());

        let both = classify(&nu, &set(&alg, &[0, 0])).unwrap();
        assert_eq!(both.verdict, SignVerdict::Positive);
        assert!(both.all_nonnegative && both.all_nonpositive);

        let neither = classify(&nu, &set(&alg, &[2, 2])).unwrap();
        assert_eq!(neither.verdict, SignVerdict::Neither);
        assert!(neither.negative_witness.is_some() && neither.positive_witness.is_some());
    }

    #[test]
    fn extraction_on_a_positive_start_is_empty() {
        let nu = updown();
        let alg = nu.algebra().clone();
        let e = set(&alg, &[2, 0]);
        let trace = extract_positive_subset(&nu, &e).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.candidate, e);
        assert_eq!(trace.certificate.verdict, SignVerdict::Positive);
        assert!(verify_extraction_trace(&nu, &trace).unwrap().passed());
    }

    #[test]
    fn extraction_documents_the_failure_pattern() {
        // start (1, 1/2): one step with bound 3 removing (0, 1/2), after
        // which the only negative candidate is exhausted; the candidate
        // keeps its negative subset and the certificate honestly says so
        let nu = updown();
        let alg = nu.algebra().clone();
        let e = set(&alg, &[2, 1]);
        let trace = extract_positive_subset(&nu, &e).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].bound_u64(), Some(3));
        assert_eq!(trace.steps[0].chosen, set(&alg, &[0, 1]));
        assert_eq!(trace.steps[0].value, ExtendedValue::from_ratio(-1, 2));
        assert_eq!(trace.candidate, e);
        assert_eq!(trace.certificate.verdict, SignVerdict::Neither);
        let (w, v) = trace.certificate.negative_witness.as_ref().unwrap();
        assert_eq!(w, &set(&alg, &[0, 1]));
        assert_eq!(v, &ExtendedValue::from_ratio(-1, 2));
        assert!(verify_extraction_trace(&nu, &trace).unwrap().passed());

        // the brute-force oracle still finds a genuine positive subset
        let found = oracle_positive_subset(&nu, &e).unwrap().unwrap();
        assert_eq!(found.set, set(&alg, &[1, 0]));
        assert_eq!(found.verdict, SignVerdict::Positive);
    }

    #[test]
    fn extraction_rejects_bad_starts() {
        let nu = updown();
        let alg = nu.algebra().clone();
        assert!(matches!(
            extract_positive_subset(&nu, &set(&alg, &[0, 2])),
            Err(HahnError::BadInput { .. })
        ));
        assert!(matches!(
            extract_positive_subset(&nu, &set(&alg, &[0, 0])),
            Err(HahnError::BadInput { .. })
        ));
    }

    #[test]
    fn oracle_subset_edge_cases() {
        let alg = cube(2, &["a", "b"]);
        let down = vec![rat(0, 1), rat(-1, 2), rat(-1, 1)];
        let nu = coordinatewise_measure(&alg, &[down.clone(), down])
            .unwrap()
            .into_signed();
        // everything nonpositive: no positive-valued subset anywhere
        assert!(oracle_positive_subset(&nu, &set(&alg, &[2, 2])).unwrap().is_none());

        let up = vec![rat(0, 1), rat(1, 2), rat(1, 1)];
        let zero = vec![rat(0, 1), rat(0, 1), rat(0, 1)];
        let nu = coordinatewise_measure(&alg, &[up, zero]).unwrap().into_signed();
        let e = set(&alg, &[2, 1]);
        let found = oracle_positive_subset(&nu, &e).unwrap().unwrap();
        assert_eq!(found.set, set(&alg, &[1, 0])); // canonically first
    }

    #[test]
    fn frontier_modes_can_choose_differently() {
        // hand-built table at q=3 where the second step differs: the
        // complement constraint admits (1,0) first, the literal meet
        // constraint admits (0,2) first
        let alg = cube(3, &["a", "b"]);
        let ga = vec![rat(0, 1), rat(-1, 1), rat(1, 1), rat(3, 1)];
        let gb = vec![rat(0, 1), rat(0, 1), rat(-1, 1), rat(3, 1)];
        let nu = coordinatewise_measure(&alg, &[ga, gb]).unwrap().into_signed();
        let e = set(&alg, &[3, 3]);
        assert_eq!(nu.value_of(&e).unwrap(), &ExtendedValue::from_int(6));

        let comp =
            extract_positive_subset_with_mode(&nu, &e, FrontierMode::Complement).unwrap();
        assert_eq!(comp.steps[0].chosen, set(&alg, &[1, 2])); // value -2
        assert_eq!(comp.steps[0].bound_u64(), Some(1));
        assert_eq!(comp.steps[1].chosen, set(&alg, &[1, 0]));
        assert_eq!(comp.steps[1].bound_u64(), Some(2));

        let lit = extract_positive_subset_with_mode(&nu, &e, FrontierMode::Literal).unwrap();
        assert_eq!(lit.steps[0].chosen, set(&alg, &[1, 2]));
        assert_eq!(lit.steps[1].chosen, set(&alg, &[0, 2]));
        assert_eq!(lit.steps[1].bound_u64(), Some(2));

        for trace in [&comp, &lit] {
            assert!(verify_extraction_trace(&nu, trace).unwrap().passed());
        }
    }

    #[test]
    fn decomposition_of_the_updown_measure() {
        let nu = updown();
        let alg = nu.algebra().clone();
        let d = hahn_decompose(&nu).unwrap();
        assert_eq!(d.positive_part, set(&alg, &[2, 0]));
        assert_eq!(d.negative_part, set(&alg, &[0, 2]));
        assert_eq!(d.lambda, ExtendedValue::from_int(1));
        assert_eq!(d.value_at_positive_part, d.lambda);
        assert_eq!(d.cert_positive.verdict, SignVerdict::Positive);
        assert_eq!(d.cert_negative.verdict, SignVerdict::Negative);
        assert_eq!(d.overlap_value, ExtendedValue::zero());
        assert!(d.partition_ok);

        let (lambda, argmax) = oracle_hahn(&nu).unwrap();
        assert_eq!(lambda, d.lambda);
        assert_eq!(argmax, vec![set(&alg, &[2, 0])]);
    }

    #[test]
    fn decomposition_of_nonnegative_and_zero_measures() {
        let alg = cube(2, &["a", "b"]);
        let up = vec![rat(0, 1), rat(1, 2), rat(1, 1)];
        let m = match coordinatewise_measure(&alg, &[up.clone(), up]).unwrap() {
            crate::measure::BuiltMeasure::Measure(m) => m,
            _ => unreachable!(),
        };
        let nu = m.as_signed();
        let d = hahn_decompose(&nu).unwrap();
        assert!(d.positive_part.is_top());
        assert!(d.negative_part.is_bottom());
        assert_eq!(d.lambda, ExtendedValue::from_int(2));
        assert_eq!(d.cert_negative.verdict, SignVerdict::Positive); // bottom tie
        assert!(d.cert_negative.all_nonpositive);

        let zero = FuzzyMeasure::zero(alg.clone()).as_signed();
        let d = hahn_decompose(&zero).unwrap();
        assert!(d.positive_part.is_top());
        assert_eq!(d.lambda, ExtendedValue::zero());
        assert_eq!(d.overlap_value, ExtendedValue::zero());
        let (lambda, argmax) = oracle_hahn(&zero).unwrap();
        assert_eq!(lambda, ExtendedValue::zero());
        assert_eq!(argmax.len(), alg.len()); // every element attains 0
    }

    #[test]
    fn flat_negative_coordinate_keeps_lambda_zero() {
        let alg = cube(2, &["a", "b"]);
        let zero = vec![rat(0, 1), rat(0, 1), rat(0, 1)];
        let down = vec![rat(0, 1), rat(-1, 2), rat(-1, 1)];
        let nu = coordinatewise_measure(&alg, &[zero, down]).unwrap().into_signed();
        let (lambda, argmax) = oracle_hahn(&nu).unwrap();
        assert_eq!(lambda, ExtendedValue::zero());
        let grades: Vec<&[u32]> = argmax.iter().map(|s| s.numerators()).collect();
        assert_eq!(grades, vec![&[0, 0][..], &[1, 0], &[2, 0]]);
        let d = hahn_decompose(&nu).unwrap();
        assert_eq!(d.positive_part, argmax[2]);
        assert_eq!(d.lambda, ExtendedValue::zero());
    }

    #[test]
    fn plus_infinity_is_refused_but_minus_infinity_works() {
        let alg = cube(1, &["a", "b"]);
        let mut values = vec![ExtendedValue::zero(); alg.len()];
        values[alg.top_index()] = ExtendedValue::PosInfinity;
        let nu = SignedMeasure::new(alg.clone(), values).unwrap();
        assert_eq!(hahn_decompose(&nu).unwrap_err(), HahnError::UnsupportedSign);
        assert_eq!(oracle_hahn(&nu).unwrap_err(), HahnError::UnsupportedSign);

        let mirrored = nu.negated();
        let d = hahn_decompose(&mirrored).unwrap();
        assert_eq!(d.lambda, ExtendedValue::zero());
        // every set except top is positive, so the join of positives IS the
        // top, which contains the -inf entry: an honestly reported failure
        // of the expected conclusion
        assert!(d.positive_part.is_top());
        assert!(!d.cert_positive.is_positive());
        assert!(d.cert_negative.is_negative()); // bottom, all values zero
    }

    #[test]
    fn joins_of_positive_sets_stay_positive_on_cubes() {
        // spot check of the union property for a mixed-sign coordinatewise
        // table; the randomized campaign lives in the fuzz command
        let alg = cube(2, &["a", "b", "c"]);
        let up = vec![rat(0, 1), rat(1, 2), rat(1, 1)];
        let dipneg = vec![rat(0, 1), rat(-1, 4), rat(-3, 4)];
        let nu = coordinatewise_measure(&alg, &[up.clone(), up, dipneg])
            .unwrap()
            .into_signed();
        let mut positives = Vec::new();
        for e in alg.elements() {
            if classify(&nu, e).unwrap().is_positive() {
                positives.push(e.clone());
            }
        }
        assert!(!positives.is_empty());
        for a in &positives {
            for b in &positives {
                let j = a.join(b).unwrap();
                assert!(classify(&nu, &j).unwrap().is_positive(), "{} v {}", a, b);
            }
        }
        // hereditary: subsets of positive sets are positive
        for p in &positives {
            for s in nu.algebra().subsets_of(p).unwrap() {
                assert!(classify(&nu, &s).unwrap().is_positive());
            }
        }
    }

    #[test]
    fn bound_arithmetic_is_exact() {
        assert_eq!(smallest_bound(&ExtendedValue::from_ratio(-1, 2)).to_u64(), Some(3));
        assert_eq!(smallest_bound(&ExtendedValue::from_int(-1)).to_u64(), Some(2));
        assert_eq!(smallest_bound(&ExtendedValue::from_int(-2)).to_u64(), Some(1));
        assert_eq!(smallest_bound(&ExtendedValue::from_ratio(-1, 3)).to_u64(), Some(4));
        assert_eq!(smallest_bound(&ExtendedValue::from_ratio(-3, 2)).to_u64(), Some(1));
        assert_eq!(smallest_bound(&ExtendedValue::NegInfinity).to_u64(), Some(1));

        let n = BigUint::from(3u32);
        assert!(meets_bound(&ExtendedValue::from_ratio(-1, 2), &n));
        assert!(!meets_bound(&ExtendedValue::from_ratio(-1, 3), &n));
        assert!(!meets_bound(&ExtendedValue::zero(), &n));
        assert!(meets_bound(&ExtendedValue::NegInfinity, &n));
    }
}
