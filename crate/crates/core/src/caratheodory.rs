//! Outer fuzzy measures and the extension pipeline.
//!
//! An outer measure here is a total nonnegative table on the full grade
//! cube that vanishes at bottom, is monotone, and is max-subadditive over
//! joins (the sup-form subadditivity, implemented exactly as defined — note
//! that this is a genuinely different axiom from the classical sum form,
//! and some classically safe constructions fail it; the validators report
//! such failures with witnesses instead of papering over them).
//!
//! Outer measures are built two ways: from a cover system (a family with a
//! nonnegative weight table on its join-closure) and from a fuzzy measure
//! on a sigma-algebra. In both cases the infimum over countable covers
//! collapses to an exact minimum over a finite join-closure.
//!
//! Measurability has no canonical definition on fuzzy sets, so two
//! criteria are provided: the classical additive split and a max split
//! matching the sup-flavored subadditivity. Neither is presented as "the"
//! definition; the extension pipeline reports which one makes the expected
//! closure and restriction claims hold per instance.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::grade::{FuzzySet, LatticeError};
use crate::measure::{validate_fuzzy_measure, FuzzyMeasure, MeasureError};
use crate::report::{
    Check, ValidationReport, Witness, CHECK_AGREES_ON_SIGMA, CHECK_AGREES_WITH_EXTENSION,
    CHECK_CANDIDATE_VALID, CHECK_CONSTANTS_PRESENT, CHECK_MAX_SUBADDITIVE, CHECK_MONOTONE,
    CHECK_SIGMA_AGREEMENT, CHECK_SIGMA_MEASURABLE, CHECK_ZERO_AT_BOTTOM,
};
use crate::sigma::{is_algebra, FuzzySigmaAlgebra, SigmaError};
use crate::value::ExtendedValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaratheodoryError {
    #[error("cover family must contain the bottom element")]
    MissingBottom,
    #[error("cover weight at the bottom element must be 0")]
    TauNonzeroAtBottom,
    #[error("cover weight at {set} is negative")]
    TauNegative { set: String },
    #[error("cover weight table is missing the join-closure element {set}")]
    TauIncomplete { set: String },
    #[error("cover family does not cover the space: its join is {join}, not the top constant")]
    NotCovering { join: String },
    #[error("no cover element dominates {set}")]
    NoCover { set: String },
    #[error("outer measures are defined on the full cube, got a smaller domain")]
    NotFullCube,
    #[error("-inf is not an outer measure value")]
    NegativeInfinityForbidden,
    #[error("domains differ (universe or resolution mismatch)")]
    DomainMismatch,
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// The smallest superset of `family` closed under pairwise join, in
/// canonical order.
pub fn join_closure(family: &[FuzzySet]) -> Result<Vec<FuzzySet>, LatticeError> {
    let mut members: BTreeMap<Vec<u32>, FuzzySet> = BTreeMap::new();
    let mut queue: Vec<FuzzySet> = Vec::new();
    for s in family {
        if members.insert(s.numerators().to_vec(), s.clone()).is_none() {
            queue.push(s.clone());
        }
    }
    while let Some(x) = queue.pop() {
        let snapshot: Vec<FuzzySet> = members.values().cloned().collect();
        for y in snapshot {
            let j = x.join(&y)?;
            if members.insert(j.numerators().to_vec(), j.clone()).is_none() {
                queue.push(j);
            }
        }
    }
    Ok(members.into_values().collect())
}

/// A cover family with a nonnegative weight table on its join-closure.
///
/// The weight is required on the whole join-closure, not just the family,
/// because the covering construction evaluates it at joins of family
/// members.
#[derive(Debug, Clone)]
pub struct CoverSystem {
    family: Vec<FuzzySet>,
    closure: Vec<FuzzySet>,
    index: BTreeMap<Vec<u32>, usize>,
    tau: Vec<ExtendedValue>,
}

impl CoverSystem {
    /// Build and validate a cover system from explicit weights. `weights`
    /// must assign a value to every element of the join-closure of
    /// `family`; entries outside the closure are rejected.
    pub fn new(
        family: Vec<FuzzySet>,
        weights: &[(FuzzySet, ExtendedValue)],
    ) -> Result<Self, CaratheodoryError> {
        let closure = join_closure(&family)?;
        let index: BTreeMap<Vec<u32>, usize> = closure
            .iter()
            .enumerate()
            .map(|(i, e)| (e.numerators().to_vec(), i))
            .collect();
        let mut tau: Vec<Option<ExtendedValue>> = vec![None; closure.len()];
        for (set, value) in weights {
            match index.get(set.numerators()) {
                Some(&i) => tau[i] = Some(value.clone()),
                None => {
                    return Err(CaratheodoryError::TauIncomplete { set: set.to_string() })
                }
            }
        }
        let tau: Vec<ExtendedValue> = tau
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| CaratheodoryError::TauIncomplete {
                    set: closure[i].to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Self::from_parts(family, closure, index, tau)
    }

    /// Build a cover system whose weight is the cheapest-representation
    /// extension of per-member base weights: the weight of a closure
    /// element is the minimum, over its representations as a join of
    /// family members, of the maximum base weight used. This extension is
    /// max-subadditive by construction, which is exactly the condition
    /// under which the covering construction yields a valid outer measure.
    pub fn with_max_extension(
        bases: &[(FuzzySet, ExtendedValue)],
    ) -> Result<Self, CaratheodoryError> {
        let family: Vec<FuzzySet> = bases.iter().map(|(s, _)| s.clone()).collect();
        let closure = join_closure(&family)?;
        let index: BTreeMap<Vec<u32>, usize> = closure
            .iter()
            .enumerate()
            .map(|(i, e)| (e.numerators().to_vec(), i))
            .collect();
        let mut tau: Vec<Option<ExtendedValue>> = vec![None; closure.len()];
        for (set, base) in bases {
            let i = index[set.numerators()];
            let better = match &tau[i] {
                None => true,
                Some(cur) => base < cur,
            };
            if better {
                tau[i] = Some(base.clone());
            }
        }
        // relax tau(c v f) <= max(tau(c), base(f)) until stable
        loop {
            let mut changed = false;
            for (set, base) in bases {
                for ci in 0..closure.len() {
                    let Some(cv) = tau[ci].clone() else { continue };
                    let j = closure[ci].join(set)?;
                    let ji = index[j.numerators()];
                    let candidate = cv.max(base.clone());
                    let better = match &tau[ji] {
                        None => true,
                        Some(cur) => &candidate < cur,
                    };
                    if better {
                        tau[ji] = Some(candidate);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let tau: Vec<ExtendedValue> = tau
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| CaratheodoryError::TauIncomplete {
                    set: closure[i].to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Self::from_parts(family, closure, index, tau)
    }

    /// The cover system whose family is a measure's whole algebra and
    /// whose weight is the measure itself (algebras are join-closed).
    pub fn from_measure(m: &FuzzyMeasure) -> Result<Self, CaratheodoryError> {
        let pairs: Vec<(FuzzySet, ExtendedValue)> = m
            .algebra()
            .elements()
            .iter()
            .cloned()
            .zip(m.values().iter().cloned())
            .collect();
        Self::new(m.algebra().elements().to_vec(), &pairs)
    }

    fn from_parts(
        family: Vec<FuzzySet>,
        closure: Vec<FuzzySet>,
        index: BTreeMap<Vec<u32>, usize>,
        tau: Vec<ExtendedValue>,
    ) -> Result<Self, CaratheodoryError> {
        let Some(first) = family.first() else {
            return Err(CaratheodoryError::MissingBottom);
        };
        if !family.iter().any(|s| s.is_bottom()) {
            return Err(CaratheodoryError::MissingBottom);
        }
        let bottom_idx = index[vec![0u32; first.universe().len()].as_slice()];
        if !tau[bottom_idx].is_zero() {
            return Err(CaratheodoryError::TauNonzeroAtBottom);
        }
        for (i, v) in tau.iter().enumerate() {
            if v.is_negative() {
                return Err(CaratheodoryError::TauNegative {
                    set: closure[i].to_string(),
                });
            }
        }
        let total = crate::grade::sup_of(family.iter())?;
        if !total.is_top() {
            return Err(CaratheodoryError::NotCovering { join: total.to_string() });
        }
        Ok(CoverSystem { family, closure, index, tau })
    }

    pub fn family(&self) -> &[FuzzySet] {
        &self.family
    }

    pub fn closure(&self) -> &[FuzzySet] {
        &self.closure
    }

    pub fn weight(&self, set: &FuzzySet) -> Option<&ExtendedValue> {
        self.index.get(set.numerators()).map(|&i| &self.tau[i])
    }

    pub fn universe(&self) -> &Arc<crate::grade::Universe> {
        self.family[0].universe()
    }

    pub fn resolution(&self) -> u32 {
        self.family[0].resolution()
    }
}

/// A total nonnegative table on the full cube at some resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterMeasure {
    cube: Arc<FuzzySigmaAlgebra>,
    values: Vec<ExtendedValue>,
}

impl OuterMeasure {
    pub fn new(
        cube: Arc<FuzzySigmaAlgebra>,
        values: Vec<ExtendedValue>,
    ) -> Result<Self, CaratheodoryError> {
        let expected = (cube.resolution() as u128 + 1)
            .checked_pow(cube.universe().len() as u32)
            .unwrap_or(u128::MAX);
        if cube.len() as u128 != expected {
            return Err(CaratheodoryError::NotFullCube);
        }
        if values.len() != cube.len() {
            return Err(MeasureError::WrongTableLength {
                expected: cube.len(),
                found: values.len(),
            }
            .into());
        }
        if values.iter().any(|v| *v == ExtendedValue::NegInfinity) {
            return Err(CaratheodoryError::NegativeInfinityForbidden);
        }
        Ok(OuterMeasure { cube, values })
    }

    pub fn cube(&self) -> &Arc<FuzzySigmaAlgebra> {
        &self.cube
    }

    pub fn values(&self) -> &[ExtendedValue] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &ExtendedValue {
        &self.values[index]
    }

    pub fn value_of(&self, set: &FuzzySet) -> Result<&ExtendedValue, CaratheodoryError> {
        self.cube
            .index_of(set)
            .map(|i| &self.values[i])
            .ok_or(CaratheodoryError::DomainMismatch)
    }
}

/// The covering construction: the value at each cube element is the exact
/// minimum of the cover weight over join-closure elements dominating it.
pub fn outer_from_covers(cover: &CoverSystem) -> Result<OuterMeasure, CaratheodoryError> {
    let cube = Arc::new(FuzzySigmaAlgebra::full_cube(
        cover.resolution(),
        cover.universe().clone(),
    )?);
    dominated_minimum(cube, &cover.closure, &cover.tau)
}

/// The measure-driven covering construction: minimum of `m` over algebra
/// elements dominating each cube element. Algebras are join-closed, so
/// joins of covers never leave the algebra.
pub fn outer_from_measure(m: &FuzzyMeasure) -> Result<OuterMeasure, CaratheodoryError> {
    let sigma = m.algebra();
    let cube = Arc::new(FuzzySigmaAlgebra::full_cube(
        sigma.resolution(),
        sigma.universe().clone(),
    )?);
    dominated_minimum(cube, sigma.elements(), m.values())
}

fn dominated_minimum(
    cube: Arc<FuzzySigmaAlgebra>,
    covers: &[FuzzySet],
    weights: &[ExtendedValue],
) -> Result<OuterMeasure, CaratheodoryError> {
    let mut values = Vec::with_capacity(cube.len());
    for e in cube.elements() {
        let mut best: Option<&ExtendedValue> = None;
        for (c, t) in covers.iter().zip(weights) {
            if e.leq(c)? {
                best = Some(match best {
                    None => t,
                    Some(b) if t < b => t,
                    Some(b) => b,
                });
            }
        }
        match best {
            Some(v) => values.push(v.clone()),
            None => return Err(CaratheodoryError::NoCover { set: e.to_string() }),
        }
    }
    OuterMeasure::new(cube, values)
}

/// Exhaustive check of the outer measure axioms: zero at bottom, monotone,
/// and max-subadditive over pairwise joins (the pairwise form implies the
/// finite form for max).
pub fn validate_outer(o: &OuterMeasure) -> ValidationReport {
    let cube = &o.cube;
    let mut zero = Vec::new();
    let b = cube.bottom_index();
    if !o.values[b].is_zero() {
        zero.push(Witness::valued(
            vec![cube.element(b).clone()],
            o.values[b].clone(),
            ExtendedValue::zero(),
            "value at the bottom element must be 0",
        ));
    }

    let mut monotone = Vec::new();
    'mono: for i in 0..cube.len() {
        for j in 0..cube.len() {
            if i != j && cube.leq_by_index(i, j) && o.values[i] > o.values[j] {
                monotone.push(Witness::valued(
                    vec![cube.element(i).clone(), cube.element(j).clone()],
                    o.values[i].clone(),
                    o.values[j].clone(),
                    "values decrease along the order",
                ));
                if monotone.len() >= 16 {
                    break 'mono;
                }
            }
        }
    }

    let mut subadd = Vec::new();
    'sub: for i in 0..cube.len() {
        for j in (i + 1)..cube.len() {
            let ji = cube.join_index(i, j).expect("cube is join-closed");
            let bound = o.values[i].clone().max(o.values[j].clone());
            if o.values[ji] > bound {
                subadd.push(Witness::valued(
                    vec![
                        cube.element(i).clone(),
                        cube.element(j).clone(),
                        cube.element(ji).clone(),
                    ],
                    o.values[ji].clone(),
                    bound,
                    "value at the join exceeds the max of the values",
                ));
                if subadd.len() >= 16 {
                    break 'sub;
                }
            }
        }
    }

    ValidationReport::new(vec![
        Check::from_witnesses(CHECK_ZERO_AT_BOTTOM, zero),
        Check::from_witnesses(CHECK_MONOTONE, monotone),
        Check::from_witnesses(CHECK_MAX_SUBADDITIVE, subadd),
    ])
}

/// A candidate reading of "measurable set" for an outer measure. The
/// additive split is the classical condition; the max split matches the
/// sup-form subadditivity axiom. Neither is canonical on fuzzy sets, and
/// reports always record which one was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurabilityCriterion {
    AdditiveSplit,
    MaxSplit,
}

impl fmt::Display for MeasurabilityCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurabilityCriterion::AdditiveSplit => write!(f, "additive"),
            MeasurabilityCriterion::MaxSplit => write!(f, "max"),
        }
    }
}

/// First test set (in canonical order) violating the split equation for
/// `candidate`, or `None` when `candidate` is measurable. The witness holds
/// `[candidate, test, test ∧ candidate, test ∧ complement]` with the two
/// sides of the failed equation.
pub fn split_witness(
    o: &OuterMeasure,
    candidate: &FuzzySet,
    criterion: MeasurabilityCriterion,
) -> Result<Option<Witness>, CaratheodoryError> {
    let cube = &o.cube;
    let e_idx = cube.index_of(candidate).ok_or(CaratheodoryError::DomainMismatch)?;
    let c_idx = cube.complement_index(e_idx).expect("cube is complement-closed");
    for a in 0..cube.len() {
        let inside = cube.meet_index(a, e_idx).expect("cube is meet-closed");
        let outside = cube.meet_index(a, c_idx).expect("cube is meet-closed");
        let left = o.values[a].clone();
        let right = match criterion {
            MeasurabilityCriterion::AdditiveSplit => o.values[inside]
                .checked_add(&o.values[outside])
                .expect("outer values never include -inf"),
            MeasurabilityCriterion::MaxSplit => {
                o.values[inside].clone().max(o.values[outside].clone())
            }
        };
        if left != right {
            return Ok(Some(Witness::valued(
                vec![
                    candidate.clone(),
                    cube.element(a).clone(),
                    cube.element(inside).clone(),
                    cube.element(outside).clone(),
                ],
                left,
                right,
                format!(
                    "{} split of {} fails at {}",
                    criterion,
                    candidate,
                    cube.element(a)
                ),
            )));
        }
    }
    Ok(None)
}

/// Whether `candidate` splits every cube element exactly under the chosen
/// criterion.
pub fn is_measurable(
    o: &OuterMeasure,
    candidate: &FuzzySet,
    criterion: MeasurabilityCriterion,
) -> Result<bool, CaratheodoryError> {
    Ok(split_witness(o, candidate, criterion)?.is_none())
}

/// The measurable class of an outer measure under one criterion, with the
/// two theorem-shaped reports: is the class a sigma-algebra, and is the
/// restriction of the outer measure to it a fuzzy measure. Both are checks
/// with witnesses, not assumptions — on fuzzy sets either can fail.
#[derive(Debug, Clone)]
pub struct MeasurableClass {
    pub criterion: MeasurabilityCriterion,
    pub class: Vec<FuzzySet>,
    pub closure_report: ValidationReport,
    pub restriction_report: ValidationReport,
}

pub fn measurable_class(
    o: &OuterMeasure,
    criterion: MeasurabilityCriterion,
) -> Result<MeasurableClass, CaratheodoryError> {
    let mut class = Vec::new();
    let mut values = Vec::new();
    for (i, e) in o.cube.elements().iter().enumerate() {
        if split_witness(o, e, criterion)?.is_none() {
            class.push(e.clone());
            values.push(o.values[i].clone());
        }
    }
    let closure_report = if class.is_empty() {
        ValidationReport::new(vec![Check::from_witnesses(
            CHECK_CONSTANTS_PRESENT,
            vec![Witness::structural(Vec::new(), "measurable class is empty")],
        )])
    } else {
        is_algebra(&class)?
    };
    let restriction_report =
        crate::measure::validate_fuzzy_measure_table(&class, &values)?;
    Ok(MeasurableClass { criterion, class, closure_report, restriction_report })
}

/// The full extension pipeline for one measure and one criterion.
#[derive(Debug, Clone)]
pub struct ExtensionResult {
    pub outer: OuterMeasure,
    pub criterion: MeasurabilityCriterion,
    pub measurable_class: Vec<FuzzySet>,
    /// Is the measurable class a sigma-algebra?
    pub closure_report: ValidationReport,
    /// Is the restriction of the outer measure to the class a fuzzy measure?
    pub restriction_report: ValidationReport,
    /// Does the outer measure agree with the measure on every algebra element?
    pub agreement_report: ValidationReport,
    /// Is every algebra element measurable?
    pub membership_report: ValidationReport,
}

impl ExtensionResult {
    /// The restriction table: class elements with their outer values.
    pub fn restriction(&self) -> Vec<(FuzzySet, ExtendedValue)> {
        self.measurable_class
            .iter()
            .map(|e| {
                let v = self
                    .outer
                    .value_of(e)
                    .expect("class elements live in the cube")
                    .clone();
                (e.clone(), v)
            })
            .collect()
    }
}

pub fn extend_measure(
    m: &FuzzyMeasure,
    criterion: MeasurabilityCriterion,
) -> Result<ExtensionResult, CaratheodoryError> {
    let outer = outer_from_measure(m)?;
    let mc = measurable_class(&outer, criterion)?;

    let mut agreement = Vec::new();
    for (e, v) in m.algebra().elements().iter().zip(m.values()) {
        let star = outer.value_of(e)?;
        if star != v {
            agreement.push(Witness::valued(
                vec![e.clone()],
                v.clone(),
                star.clone(),
                "measure and outer extension disagree on an algebra element",
            ));
        }
    }

    let mut membership = Vec::new();
    for e in m.algebra().elements() {
        if let Some(w) = split_witness(&outer, e, criterion)? {
            membership.push(w);
        }
    }

    Ok(ExtensionResult {
        outer,
        criterion,
        measurable_class: mc.class,
        closure_report: mc.closure_report,
        restriction_report: mc.restriction_report,
        agreement_report: ValidationReport::new(vec![Check::from_witnesses(
            CHECK_SIGMA_AGREEMENT,
            agreement,
        )]),
        membership_report: ValidationReport::new(vec![Check::from_witnesses(
            CHECK_SIGMA_MEASURABLE,
            membership,
        )]),
    })
}

/// Instance-level uniqueness spot check: the candidate must be a valid
/// fuzzy measure agreeing with `m` on the algebra, and it is compared
/// elementwise against the extension's restriction on the common domain.
pub fn uniqueness_spot_check(
    m: &FuzzyMeasure,
    criterion: MeasurabilityCriterion,
    candidate: &FuzzyMeasure,
) -> Result<ValidationReport, CaratheodoryError> {
    let sigma = m.algebra();
    let cand_alg = candidate.algebra();
    if sigma.universe().points() != cand_alg.universe().points()
        || sigma.resolution() != cand_alg.resolution()
    {
        return Err(CaratheodoryError::DomainMismatch);
    }

    let sub = validate_fuzzy_measure(candidate);
    let mut validity = Vec::new();
    for check in sub.checks.iter().filter(|c| !c.passed) {
        for w in check.witnesses.iter().take(4) {
            let mut w = w.clone();
            w.note = format!("candidate fails {}: {}", check.id, w.note);
            validity.push(w);
        }
    }

    let mut on_sigma = Vec::new();
    for (e, v) in sigma.elements().iter().zip(m.values()) {
        match candidate.value_of(e) {
            Ok(cv) if cv == v => {}
            Ok(cv) => on_sigma.push(Witness::valued(
                vec![e.clone()],
                v.clone(),
                cv.clone(),
                "candidate disagrees with the measure on an algebra element",
            )),
            Err(_) => on_sigma.push(Witness::structural(
                vec![e.clone()],
                "algebra element absent from the candidate's domain",
            )),
        }
    }

    let extension = extend_measure(m, criterion)?;
    let mut on_extension = Vec::new();
    for (e, v) in extension.restriction() {
        if let Ok(cv) = candidate.value_of(&e) {
            if cv != &v {
                on_extension.push(Witness::valued(
                    vec![e.clone()],
                    v.clone(),
                    cv.clone(),
                    "candidate disagrees with the extension's restriction",
                ));
            }
        }
    }

    Ok(ValidationReport::new(vec![
        Check::from_witnesses(CHECK_CANDIDATE_VALID, validity),
        Check::from_witnesses(CHECK_AGREES_ON_SIGMA, on_sigma),
        Check::from_witnesses(CHECK_AGREES_WITH_EXTENSION, on_extension),
    ]))
}
