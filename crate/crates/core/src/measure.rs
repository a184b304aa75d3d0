//! Value tables over algebra elements and the axiom validators for fuzzy
//! measures and fuzzy signed measures.
//!
//! Measures are stored as total extensional tables, not formulas: validators
//! and oracles need exact O(1) lookups, and finite algebras make this
//! affordable. Validation never mutates and never tolerates: every
//! comparison is exact rational arithmetic, and every failing check carries
//! a witness that re-verifies against the table.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::grade::FuzzySet;
use crate::report::{
    Check, ValidationReport, Witness, CHECK_CONTINUOUS_FROM_BELOW, CHECK_MODULAR,
    CHECK_MONOTONE_NONNEGATIVE, CHECK_MONOTONE_NONPOSITIVE, CHECK_SINGLE_INFINITY_SIGN,
    CHECK_ZERO_AT_BOTTOM,
};
use crate::sigma::FuzzySigmaAlgebra;
use crate::value::ExtendedValue;

pub const CHECK_NO_NEGATIVE_INFINITY: &str = "no-negative-infinity";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("value table has {found} entries, algebra has {expected} elements")]
    WrongTableLength { expected: usize, found: usize },
    #[error("-inf is not a fuzzy measure value")]
    NegativeInfinityForbidden,
    #[error("table mixes +inf and -inf values")]
    MixedInfinities,
    #[error("measures live on different algebras")]
    AlgebraMismatch,
    #[error("set {set} is not a member of the algebra")]
    NotAMember { set: String },
    #[error("incomplete generator for point {point:?}: expected {expected} grade values, found {found}")]
    IncompleteGenerator { point: String, expected: usize, found: usize },
    #[error("generator for point {point:?} must map grade 0 to 0")]
    NonzeroAtBottom { point: String },
    #[error("ill-defined difference: both measures attain +inf")]
    IllDefinedDifference,
}

/// Which sign of infinity a signed measure is allowed to attain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinitySign {
    Absent,
    PlusOnly,
    MinusOnly,
}

/// A fuzzy measure candidate: a total table over a sigma-algebra with values
/// in the finite rationals plus `+inf`.
///
/// Construction checks only representation (totality, no `-inf`); the
/// measure axioms are the business of [`validate_fuzzy_measure`], so that
/// deliberately broken tables can be built and reported on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyMeasure {
    algebra: Arc<FuzzySigmaAlgebra>,
    values: Vec<ExtendedValue>,
}

impl FuzzyMeasure {
    pub fn new(
        algebra: Arc<FuzzySigmaAlgebra>,
        values: Vec<ExtendedValue>,
    ) -> Result<Self, MeasureError> {
        if values.len() != algebra.len() {
            return Err(MeasureError::WrongTableLength {
                expected: algebra.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| *v == ExtendedValue::NegInfinity) {
            return Err(MeasureError::NegativeInfinityForbidden);
        }
        Ok(FuzzyMeasure { algebra, values })
    }

    pub fn zero(algebra: Arc<FuzzySigmaAlgebra>) -> Self {
        let values = vec![ExtendedValue::zero(); algebra.len()];
        FuzzyMeasure { algebra, values }
    }

    pub fn algebra(&self) -> &Arc<FuzzySigmaAlgebra> {
        &self.algebra
    }

    pub fn values(&self) -> &[ExtendedValue] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &ExtendedValue {
        &self.values[index]
    }

    pub fn value_of(&self, set: &FuzzySet) -> Result<&ExtendedValue, MeasureError> {
        self.algebra
            .index_of(set)
            .map(|i| &self.values[i])
            .ok_or_else(|| MeasureError::NotAMember { set: set.to_string() })
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// View this measure as a signed measure (always representable: a fuzzy
    /// measure attains at most `+inf`).
    pub fn as_signed(&self) -> SignedMeasure {
        SignedMeasure::new(self.algebra.clone(), self.values.clone())
            .expect("no -inf in a fuzzy measure table")
    }
}

/// A fuzzy signed measure candidate: a total table attaining at most one
/// sign of infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMeasure {
    algebra: Arc<FuzzySigmaAlgebra>,
    values: Vec<ExtendedValue>,
    infinity_sign: InfinitySign,
}

impl SignedMeasure {
    pub fn new(
        algebra: Arc<FuzzySigmaAlgebra>,
        values: Vec<ExtendedValue>,
    ) -> Result<Self, MeasureError> {
        if values.len() != algebra.len() {
            return Err(MeasureError::WrongTableLength {
                expected: algebra.len(),
                found: values.len(),
            });
        }
        let has_plus = values.iter().any(|v| *v == ExtendedValue::PosInfinity);
        let has_minus = values.iter().any(|v| *v == ExtendedValue::NegInfinity);
        let infinity_sign = match (has_plus, has_minus) {
            (true, true) => return Err(MeasureError::MixedInfinities),
            (true, false) => InfinitySign::PlusOnly,
            (false, true) => InfinitySign::MinusOnly,
            (false, false) => InfinitySign::Absent,
        };
        Ok(SignedMeasure { algebra, values, infinity_sign })
    }

    pub fn algebra(&self) -> &Arc<FuzzySigmaAlgebra> {
        &self.algebra
    }

    pub fn values(&self) -> &[ExtendedValue] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &ExtendedValue {
        &self.values[index]
    }

    pub fn value_of(&self, set: &FuzzySet) -> Result<&ExtendedValue, MeasureError> {
        self.algebra
            .index_of(set)
            .map(|i| &self.values[i])
            .ok_or_else(|| MeasureError::NotAMember { set: set.to_string() })
    }

    pub fn infinity_sign(&self) -> InfinitySign {
        self.infinity_sign
    }

    pub fn attains_plus_infinity(&self) -> bool {
        self.infinity_sign == InfinitySign::PlusOnly
    }

    /// `-self`, the mirror measure. Swaps the infinity sign.
    pub fn negated(&self) -> SignedMeasure {
        let values = self.values.iter().map(|v| v.clone().neg()).collect();
        SignedMeasure::new(self.algebra.clone(), values).expect("negation keeps a single sign")
    }
}

/// Exhaustive check of the fuzzy measure axioms: zero at bottom, monotone
/// among nonnegative-valued comparable pairs, modular over all pairs, and
/// continuous from below (stabilized-chain check; automatic on a finite
/// algebra, verified rather than assumed).
pub fn validate_fuzzy_measure(m: &FuzzyMeasure) -> ValidationReport {
    validate_fuzzy_measure_table(m.algebra.elements(), &m.values)
        .expect("table is total by construction")
}

/// As [`validate_fuzzy_measure`] but on a raw family/table pair, so that
/// tables never admitted by the constructors can still be reported on.
/// Pairs whose join or meet falls outside the family are skipped; on a
/// closed algebra every pair resolves.
pub fn validate_fuzzy_measure_table(
    elements: &[FuzzySet],
    values: &[ExtendedValue],
) -> Result<ValidationReport, MeasureError> {
    let fam = FamilyTable::new(elements, values)?;
    let mut checks = vec![fam.check_zero_at_bottom(), fam.check_monotone_nonnegative()];
    let mut neg_inf = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if *v == ExtendedValue::NegInfinity {
            neg_inf.push(Witness::valued(
                vec![elements[i].clone()],
                v.clone(),
                ExtendedValue::zero(),
                "-inf is outside the fuzzy measure codomain",
            ));
        }
    }
    checks.push(Check::from_witnesses(CHECK_NO_NEGATIVE_INFINITY, neg_inf));
    checks.push(fam.check_modular());
    checks.push(fam.check_continuous_from_below());
    Ok(ValidationReport::new(checks))
}

/// Exhaustive check of the fuzzy signed measure axioms: zero at bottom,
/// two-sided monotonicity, modularity, continuity from below, and the
/// single-infinity-sign rule.
pub fn validate_signed_measure(nu: &SignedMeasure) -> ValidationReport {
    validate_signed_measure_table(nu.algebra.elements(), &nu.values)
        .expect("table is total by construction")
}

/// Raw-table variant of [`validate_signed_measure`]; accepts tables mixing
/// both infinities so the sign rule itself can be reported.
pub fn validate_signed_measure_table(
    elements: &[FuzzySet],
    values: &[ExtendedValue],
) -> Result<ValidationReport, MeasureError> {
    let fam = FamilyTable::new(elements, values)?;
    Ok(ValidationReport::new(vec![
        fam.check_zero_at_bottom(),
        fam.check_monotone_nonnegative(),
        fam.check_monotone_nonpositive(),
        fam.check_modular(),
        fam.check_continuous_from_below(),
        fam.check_single_infinity_sign(),
    ]))
}

/// Shared machinery for the axiom checks: a family of sets with a parallel
/// value table and a content index for join/meet lookups.
struct FamilyTable<'a> {
    elements: &'a [FuzzySet],
    values: &'a [ExtendedValue],
    index: std::collections::BTreeMap<&'a [u32], usize>,
}

impl<'a> FamilyTable<'a> {
    fn new(
        elements: &'a [FuzzySet],
        values: &'a [ExtendedValue],
    ) -> Result<Self, MeasureError> {
        if elements.len() != values.len() {
            return Err(MeasureError::WrongTableLength {
                expected: elements.len(),
                found: values.len(),
            });
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.numerators(), i))
            .collect();
        Ok(FamilyTable { elements, values, index })
    }

    fn bottom(&self) -> Option<usize> {
        self.elements.iter().position(|e| e.is_bottom())
    }

    fn lookup(&self, grades: &[u32]) -> Option<usize> {
        self.index.get(grades).copied()
    }

    fn check_zero_at_bottom(&self) -> Check {
        let mut witnesses = Vec::new();
        match self.bottom() {
            None => witnesses.push(Witness::structural(
                Vec::new(),
                "family has no bottom element to anchor the zero axiom",
            )),
            Some(b) => {
                if !self.values[b].is_zero() {
                    witnesses.push(Witness::valued(
                        vec![self.elements[b].clone()],
                        self.values[b].clone(),
                        ExtendedValue::zero(),
                        "value at the bottom element must be 0",
                    ));
                }
            }
        }
        Check::from_witnesses(CHECK_ZERO_AT_BOTTOM, witnesses)
    }

    fn check_monotone(&self, nonneg: bool) -> Check {
        let id = if nonneg { CHECK_MONOTONE_NONNEGATIVE } else { CHECK_MONOTONE_NONPOSITIVE };
        let mut witnesses = Vec::new();
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                if i == j || !a.leq(b).unwrap_or(false) {
                    continue;
                }
                let (va, vb) = (&self.values[i], &self.values[j]);
                let violated = if nonneg {
                    va.is_nonnegative() && vb.is_nonnegative() && va > vb
                } else {
                    va.is_nonpositive() && vb.is_nonpositive() && vb > va
                };
                if violated {
                    let note = if nonneg {
                        format!("{} <= {} but values decrease", a, b)
                    } else {
                        format!("{} <= {} but nonpositive values increase", a, b)
                    };
                    witnesses.push(Witness::valued(
                        vec![a.clone(), b.clone()],
                        va.clone(),
                        vb.clone(),
                        note,
                    ));
                    if witnesses.len() >= 16 {
                        return Check::from_witnesses(id, witnesses);
                    }
                }
            }
        }
        Check::from_witnesses(id, witnesses)
    }

    fn check_monotone_nonnegative(&self) -> Check {
        self.check_monotone(true)
    }

    fn check_monotone_nonpositive(&self) -> Check {
        self.check_monotone(false)
    }

    fn check_modular(&self) -> Check {
        let mut witnesses = Vec::new();
        for i in 0..self.elements.len() {
            for j in (i + 1)..self.elements.len() {
                let a = &self.elements[i];
                let b = &self.elements[j];
                let join: Vec<u32> = a
                    .numerators()
                    .iter()
                    .zip(b.numerators())
                    .map(|(&x, &y)| x.max(y))
                    .collect();
                let meet: Vec<u32> = a
                    .numerators()
                    .iter()
                    .zip(b.numerators())
                    .map(|(&x, &y)| x.min(y))
                    .collect();
                let (Some(ji), Some(mi)) = (self.lookup(&join), self.lookup(&meet)) else {
                    continue; // closure gap; the algebra checks own this
                };
                let left = self.values[ji].checked_add(&self.values[mi]);
                let right = self.values[i].checked_add(&self.values[j]);
                let ok = match (&left, &right) {
                    (Ok(l), Ok(r)) => l == r,
                    _ => false,
                };
                if !ok {
                    let fmt = |v: &Result<ExtendedValue, _>| match v {
                        Ok(x) => x.clone(),
                        Err(_) => ExtendedValue::PosInfinity, // placeholder, note explains
                    };
                    let note = if left.is_err() || right.is_err() {
                        format!(
                            "modularity sum for {} and {} combines +inf with -inf",
                            a, b
                        )
                    } else {
                        format!(
                            "value(join) + value(meet) != value({}) + value({})",
                            a, b
                        )
                    };
                    witnesses.push(Witness::valued(
                        vec![
                            a.clone(),
                            b.clone(),
                            self.elements[ji].clone(),
                            self.elements[mi].clone(),
                        ],
                        fmt(&left),
                        fmt(&right),
                        note,
                    ));
                    if witnesses.len() >= 16 {
                        return Check::from_witnesses(CHECK_MODULAR, witnesses);
                    }
                }
            }
        }
        Check::from_witnesses(CHECK_MODULAR, witnesses)
    }

    /// Continuity from below degenerates on a finite algebra: every
    /// increasing chain stabilizes, so the limit equals the value at the
    /// stabilization point by arithmetic. The check still walks a greedy
    /// maximal chain up to every element and confirms the chain's supremum
    /// is the element it stabilized at.
    fn check_continuous_from_below(&self) -> Check {
        let mut witnesses = Vec::new();
        if let Some(bottom) = self.bottom() {
            for (target, e) in self.elements.iter().enumerate() {
                let mut current = bottom;
                let mut sup = self.elements[bottom].numerators().to_vec();
                loop {
                    if current == target {
                        break;
                    }
                    // canonically first element strictly above `current`
                    // and at most the target; strictness guarantees the
                    // walk terminates even on families with duplicates
                    let cur = &self.elements[current];
                    let next = self.elements.iter().position(|x| {
                        cur.leq(x).unwrap_or(false)
                            && !x.leq(cur).unwrap_or(true)
                            && x.leq(e).unwrap_or(false)
                    });
                    match next {
                        Some(n) => {
                            for (s, g) in sup.iter_mut().zip(self.elements[n].numerators())
                            {
                                *s = (*s).max(*g);
                            }
                            current = n;
                        }
                        None => break,
                    }
                }
                if current == target && sup != e.numerators() {
                    witnesses.push(Witness::structural(
                        vec![e.clone()],
                        "increasing chain failed to stabilize at its supremum",
                    ));
                }
            }
        }
        Check::from_witnesses(CHECK_CONTINUOUS_FROM_BELOW, witnesses)
    }

    fn check_single_infinity_sign(&self) -> Check {
        let plus = self
            .values
            .iter()
            .position(|v| *v == ExtendedValue::PosInfinity);
        let minus = self
            .values
            .iter()
            .position(|v| *v == ExtendedValue::NegInfinity);
        let mut witnesses = Vec::new();
        if let (Some(p), Some(m)) = (plus, minus) {
            witnesses.push(Witness::valued(
                vec![self.elements[p].clone(), self.elements[m].clone()],
                ExtendedValue::PosInfinity,
                ExtendedValue::NegInfinity,
                "table attains both signs of infinity",
            ));
        }
        Check::from_witnesses(CHECK_SINGLE_INFINITY_SIGN, witnesses)
    }
}

/// Result of [`coordinatewise_measure`]: a fuzzy measure when every
/// per-point table is nondecreasing and nonnegative, otherwise a signed
/// measure candidate together with its validation report.
#[derive(Debug, Clone)]
pub enum BuiltMeasure {
    Measure(FuzzyMeasure),
    Signed { measure: SignedMeasure, report: ValidationReport },
}

impl BuiltMeasure {
    pub fn into_signed(self) -> SignedMeasure {
        match self {
            BuiltMeasure::Measure(m) => m.as_signed(),
            BuiltMeasure::Signed { measure, .. } => measure,
        }
    }
}

/// Build the table `m(mu) = sum over points x of g_x(mu(x))` from per-point
/// grade tables `g_x` (one rational per grade numerator `0..=q`, with
/// `g_x(0) = 0`). Modularity holds by construction because
/// `min(s,t) + max(s,t) = s + t` in every coordinate.
pub fn coordinatewise_measure(
    algebra: &Arc<FuzzySigmaAlgebra>,
    tables: &[Vec<BigRational>],
) -> Result<BuiltMeasure, MeasureError> {
    let points = algebra.universe().points();
    if tables.len() != points.len() {
        return Err(MeasureError::IncompleteGenerator {
            point: points.get(tables.len()).cloned().unwrap_or_default(),
            expected: points.len(),
            found: tables.len(),
        });
    }
    let expected = algebra.resolution() as usize + 1;
    for (x, t) in tables.iter().enumerate() {
        if t.len() != expected {
            return Err(MeasureError::IncompleteGenerator {
                point: points[x].clone(),
                expected,
                found: t.len(),
            });
        }
        if !t[0].is_zero() {
            return Err(MeasureError::NonzeroAtBottom { point: points[x].clone() });
        }
    }

    let values: Vec<ExtendedValue> = algebra
        .elements()
        .iter()
        .map(|e| {
            let mut acc = BigRational::zero();
            for (x, &g) in e.numerators().iter().enumerate() {
                acc += &tables[x][g as usize];
            }
            ExtendedValue::Finite(acc)
        })
        .collect();

    let monotone_nonneg = tables.iter().all(|t| {
        t.windows(2).all(|w| w[0] <= w[1]) && t.iter().all(|v| !v.is_negative())
    });
    if monotone_nonneg {
        Ok(BuiltMeasure::Measure(FuzzyMeasure::new(algebra.clone(), values)?))
    } else {
        let measure = SignedMeasure::new(algebra.clone(), values)?;
        let report = validate_signed_measure(&measure);
        Ok(BuiltMeasure::Signed { measure, report })
    }
}

/// Pointwise difference `m1 - m2` of two fuzzy measures on the same algebra;
/// well defined when at least one of them is everywhere finite. The result
/// is validated and the report attached.
pub fn difference_measure(
    m1: &FuzzyMeasure,
    m2: &FuzzyMeasure,
) -> Result<(SignedMeasure, ValidationReport), MeasureError> {
    if m1.algebra.as_ref() != m2.algebra.as_ref() {
        return Err(MeasureError::AlgebraMismatch);
    }
    if !m1.is_finite() && !m2.is_finite() {
        return Err(MeasureError::IllDefinedDifference);
    }
    let values: Vec<ExtendedValue> = m1
        .values
        .iter()
        .zip(&m2.values)
        .map(|(a, b)| a.checked_sub(b).expect("one side is finite"))
        .collect();
    let measure = SignedMeasure::new(m1.algebra.clone(), values)?;
    let report = validate_signed_measure(&measure);
    Ok((measure, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grade::Universe;
    use crate::report::CHECK_MONOTONE_NONNEGATIVE;

    fn cube(q: u32, labels: &[&str]) -> Arc<FuzzySigmaAlgebra> {
        let u = Universe::new(labels.iter().copied()).unwrap();
        Arc::new(FuzzySigmaAlgebra::full_cube(q, u).unwrap())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// m(mu) = 1*mu(a) + 2*mu(b), exactly modular and monotone.
    fn linear_measure(alg: &Arc<FuzzySigmaAlgebra>) -> FuzzyMeasure {
        let q = alg.resolution() as i64;
        let g = |w: i64| (0..=q).map(|k| rat(w * k, q)).collect::<Vec<_>>();
        match coordinatewise_measure(alg, &[g(1), g(2)]).unwrap() {
            BuiltMeasure::Measure(m) => m,
            BuiltMeasure::Signed { .. } => panic!("linear weights are monotone"),
        }
    }

    #[test]
    fn linear_measure_passes_all_axioms() {
        let alg = cube(2, &["a", "b"]);
        let m = linear_measure(&alg);
        let report = validate_fuzzy_measure(&m);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn zero_one_table_fails_modularity_with_the_expected_witness() {
        // 0 at bottom, 1 everywhere else: an outer measure shape that is
        // not modular once the universe has two points
        let alg = cube(1, &["a", "b"]);
        let values: Vec<ExtendedValue> = alg
            .elements()
            .iter()
            .map(|e| if e.is_bottom() { ExtendedValue::zero() } else { ExtendedValue::from_int(1) })
            .collect();
        let m = FuzzyMeasure::new(alg, values).unwrap();
        let report = validate_fuzzy_measure(&m);
        assert!(report.failed(CHECK_MODULAR));
        let w = &report.check(CHECK_MODULAR).unwrap().witnesses[0];
        assert_eq!(w.elements[0].numerators(), &[0, 1]);
        assert_eq!(w.elements[1].numerators(), &[1, 0]);
        assert_eq!(w.left, Some(ExtendedValue::from_int(1))); // 1 + 0
        assert_eq!(w.right, Some(ExtendedValue::from_int(2))); // 1 + 1
    }

    #[test]
    fn identically_zero_table_passes() {
        let alg = cube(2, &["a", "b"]);
        let report = validate_fuzzy_measure(&FuzzyMeasure::zero(alg));
        assert!(report.passed());
    }

    #[test]
    fn signed_difference_of_coordinates_passes_structural_axioms() {
        // nu(mu) = mu(a) - mu(b): zero at bottom, modular, single sign
        let alg = cube(2, &["a", "b"]);
        let q = alg.resolution() as i64;
        let up: Vec<BigRational> = (0..=q).map(|k| rat(k, q)).collect();
        let down: Vec<BigRational> = (0..=q).map(|k| rat(-k, q)).collect();
        let built = coordinatewise_measure(&alg, &[up, down]).unwrap();
        let BuiltMeasure::Signed { measure, report } = built else {
            panic!("mixed-sign tables are signed candidates");
        };
        assert!(report.check(CHECK_ZERO_AT_BOTTOM).unwrap().passed);
        assert!(report.check(CHECK_MODULAR).unwrap().passed);
        assert!(report.check(CHECK_SINGLE_INFINITY_SIGN).unwrap().passed);
        let top = measure.algebra().element(measure.algebra().top_index()).clone();
        assert_eq!(measure.value_of(&top).unwrap(), &ExtendedValue::zero());
    }

    #[test]
    fn bottom_violation_is_witnessed() {
        let alg = cube(1, &["a", "b"]);
        let mut values = vec![ExtendedValue::zero(); alg.len()];
        values[alg.bottom_index()] = ExtendedValue::from_int(1);
        let nu = SignedMeasure::new(alg, values).unwrap();
        let report = validate_signed_measure(&nu);
        assert!(report.failed(CHECK_ZERO_AT_BOTTOM));
        let w = &report.check(CHECK_ZERO_AT_BOTTOM).unwrap().witnesses[0];
        assert!(w.elements[0].is_bottom());
    }

    #[test]
    fn mixed_infinities_fail_the_sign_rule() {
        let alg = cube(1, &["a", "b"]);
        let mut values = vec![ExtendedValue::zero(); alg.len()];
        values[1] = ExtendedValue::PosInfinity;
        values[2] = ExtendedValue::NegInfinity;
        // the constructor refuses such tables, so validate the raw table
        assert_eq!(
            SignedMeasure::new(alg.clone(), values.clone()).unwrap_err(),
            MeasureError::MixedInfinities
        );
        let report = validate_signed_measure_table(alg.elements(), &values).unwrap();
        assert!(report.failed(CHECK_SINGLE_INFINITY_SIGN));
    }

    #[test]
    fn coordinatewise_formula_examples() {
        let alg = cube(2, &["a", "b"]);
        // g_a(t) = t, g_b(t) = 2t at q=2: m((1/2,1)) = 1/2 + 2 = 5/2
        let m = linear_measure(&alg);
        let e = FuzzySet::new(alg.universe().clone(), 2, vec![1, 2]).unwrap();
        assert_eq!(m.value_of(&e).unwrap(), &ExtendedValue::from_ratio(5, 2));

        // g_a(t) = t^2, g_b(t) = -t: nu((1/2,1/2)) = 1/4 - 1/2 = -1/4
        let sq = vec![rat(0, 1), rat(1, 4), rat(1, 1)];
        let neg = vec![rat(0, 1), rat(-1, 2), rat(-1, 1)];
        let nu = coordinatewise_measure(&alg, &[sq, neg]).unwrap().into_signed();
        let e = FuzzySet::new(alg.universe().clone(), 2, vec![1, 1]).unwrap();
        assert_eq!(nu.value_of(&e).unwrap(), &ExtendedValue::from_ratio(-1, 4));
    }

    #[test]
    fn coordinatewise_rejects_bad_generators() {
        let alg = cube(2, &["a", "b"]);
        let short = vec![rat(0, 1), rat(1, 1)];
        let full = vec![rat(0, 1), rat(1, 1), rat(2, 1)];
        assert!(matches!(
            coordinatewise_measure(&alg, &[short, full.clone()]),
            Err(MeasureError::IncompleteGenerator { .. })
        ));
        let nonzero = vec![rat(1, 1), rat(1, 1), rat(2, 1)];
        assert!(matches!(
            coordinatewise_measure(&alg, &[nonzero, full.clone()]),
            Err(MeasureError::NonzeroAtBottom { .. })
        ));
        assert!(matches!(
            coordinatewise_measure(&alg, &[full]),
            Err(MeasureError::IncompleteGenerator { .. })
        ));
    }

    #[test]
    fn difference_reproduces_and_cancels() {
        let alg = cube(1, &["a", "b"]);
        let m1 = linear_measure(&alg);
        let zero = FuzzyMeasure::zero(alg.clone());
        let (d, _) = difference_measure(&m1, &zero).unwrap();
        assert_eq!(d.values(), m1.values());

        let (z, report) = difference_measure(&m1, &m1).unwrap();
        assert!(z.values().iter().all(|v| v.is_zero()));
        assert!(report.passed());
    }

    #[test]
    fn difference_example_table() {
        // m1 weights (1,0), m2 weights (0,1) at q=1:
        // nu((1,0)) = 1, nu((0,1)) = -1, nu((1,1)) = 0
        let alg = cube(1, &["a", "b"]);
        let g = |w: i64| vec![rat(0, 1), rat(w, 1)];
        let m1 = match coordinatewise_measure(&alg, &[g(1), g(0)]).unwrap() {
            BuiltMeasure::Measure(m) => m,
            _ => unreachable!(),
        };
        let m2 = match coordinatewise_measure(&alg, &[g(0), g(1)]).unwrap() {
            BuiltMeasure::Measure(m) => m,
            _ => unreachable!(),
        };
        let (nu, _) = difference_measure(&m1, &m2).unwrap();
        let u = alg.universe().clone();
        let at = |g: &[u32]| {
            nu.value_of(&FuzzySet::new(u.clone(), 1, g.to_vec()).unwrap())
                .unwrap()
                .clone()
        };
        assert_eq!(at(&[1, 0]), ExtendedValue::from_int(1));
        assert_eq!(at(&[0, 1]), ExtendedValue::from_int(-1));
        assert_eq!(at(&[1, 1]), ExtendedValue::zero());
    }

    #[test]
    fn difference_infinity_bookkeeping() {
        let alg = cube(1, &["a", "b"]);
        let mut values = vec![ExtendedValue::zero(); alg.len()];
        values[alg.top_index()] = ExtendedValue::PosInfinity;
        let m_inf = FuzzyMeasure::new(alg.clone(), values).unwrap();
        let m_fin = linear_measure(&alg);

        let (d, _) = difference_measure(&m_inf, &m_fin).unwrap();
        assert_eq!(d.infinity_sign(), InfinitySign::PlusOnly);
        let (d, _) = difference_measure(&m_fin, &m_inf).unwrap();
        assert_eq!(d.infinity_sign(), InfinitySign::MinusOnly);
        assert_eq!(
            difference_measure(&m_inf, &m_inf).unwrap_err(),
            MeasureError::IllDefinedDifference
        );
    }

    #[test]
    fn fuzzy_measure_rejects_negative_infinity() {
        let alg = cube(1, &["a", "b"]);
        let mut values = vec![ExtendedValue::zero(); alg.len()];
        values[1] = ExtendedValue::NegInfinity;
        assert_eq!(
            FuzzyMeasure::new(alg, values).unwrap_err(),
            MeasureError::NegativeInfinityForbidden
        );
    }

    #[test]
    fn monotonicity_is_checked_only_on_matching_signs() {
        // a valid fuzzy measure may dip negative; the nonneg clause is
        // enforced exactly as stated, only where both values are >= 0
        let u = Universe::new(["a"]).unwrap();
        let alg = Arc::new(FuzzySigmaAlgebra::generate(&[], 2, u).unwrap());
        let values = vec![
            ExtendedValue::zero(),
            ExtendedValue::from_int(-5),
            ExtendedValue::from_int(7),
        ];
        let m = FuzzyMeasure::new(alg.clone(), values).unwrap();
        let report = validate_fuzzy_measure(&m);
        assert!(report.passed(), "{report}");

        // but an actual nonnegative violation is caught
        let bad = vec![
            ExtendedValue::zero(),
            ExtendedValue::from_int(3),
            ExtendedValue::from_int(1),
        ];
        let m = FuzzyMeasure::new(alg, bad).unwrap();
        assert!(validate_fuzzy_measure(&m).failed(CHECK_MONOTONE_NONNEGATIVE));
    }

    #[test]
    fn two_sided_monotonicity_on_the_nonpositive_side() {
        let u = Universe::new(["a"]).unwrap();
        let alg = Arc::new(FuzzySigmaAlgebra::generate(&[], 2, u).unwrap());
        // values 0, -5, -1 on the chain: nonpositive pair (-5, -1) increases
        let values = vec![
            ExtendedValue::zero(),
            ExtendedValue::from_int(-5),
            ExtendedValue::from_int(-1),
        ];
        let nu = SignedMeasure::new(alg, values).unwrap();
        let report = validate_signed_measure(&nu);
        assert!(report.failed(CHECK_MONOTONE_NONPOSITIVE));
    }
}
