//! Grade arithmetic and the fuzzy-set lattice.
//!
//! Membership grades are exact rationals `k/q` on a fixed resolution chain
//! `{0, 1/q, ..., q/q}`; a fuzzy set is one grade per point of a finite
//! ordered universe. Meet, join, complement and order are all coordinatewise
//! and exact, so every downstream axiom check is decidable with no tolerance.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::value::ExtendedValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("resolution must be at least 1")]
    ZeroResolution,
    #[error("invalid grade: numerator {numerator} exceeds resolution {resolution}")]
    InvalidGrade { numerator: u32, resolution: u32 },
    #[error("resolution mismatch: expected {expected}, found {found}")]
    ResolutionMismatch { expected: u32, found: u32 },
    #[error("incompatible sets: universes differ")]
    UniverseMismatch,
    #[error("universe must be non-empty")]
    EmptyUniverse,
    #[error("duplicate point label {0:?}")]
    DuplicatePoint(String),
    #[error("grade vector has {found} entries, universe has {expected} points")]
    WrongArity { expected: usize, found: usize },
    #[error("supremum of an empty sequence; pass the bottom element explicitly")]
    EmptySupremum,
}

/// The chain of membership levels `{0, 1/q, ..., q/q}` at resolution `q`.
///
/// The chain is closed under `t -> 1 - t`, so it supports complementation
/// without leaving the grade set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradeLattice {
    resolution: u32,
}

impl GradeLattice {
    pub fn new(resolution: u32) -> Result<Self, LatticeError> {
        if resolution == 0 {
            return Err(LatticeError::ZeroResolution);
        }
        Ok(GradeLattice { resolution })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn bottom(&self) -> Grade {
        Grade { numerator: 0, resolution: self.resolution }
    }

    pub fn top(&self) -> Grade {
        Grade { numerator: self.resolution, resolution: self.resolution }
    }

    /// All grades in increasing order.
    pub fn grades(&self) -> impl Iterator<Item = Grade> + '_ {
        let q = self.resolution;
        (0..=q).map(move |k| Grade { numerator: k, resolution: q })
    }

    pub fn grade(&self, numerator: u32) -> Result<Grade, LatticeError> {
        Grade::new(numerator, self.resolution)
    }
}

/// A membership level `numerator/resolution`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grade {
    numerator: u32,
    resolution: u32,
}

impl Grade {
    pub fn new(numerator: u32, resolution: u32) -> Result<Self, LatticeError> {
        if resolution == 0 {
            return Err(LatticeError::ZeroResolution);
        }
        if numerator > resolution {
            return Err(LatticeError::InvalidGrade { numerator, resolution });
        }
        Ok(Grade { numerator, resolution })
    }

    pub fn numerator(&self) -> u32 {
        self.numerator
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// `1 - t`, exact on the chain.
    pub fn complement(&self) -> Grade {
        Grade {
            numerator: self.resolution - self.numerator,
            resolution: self.resolution,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numerator), BigInt::from(self.resolution))
    }

    pub fn to_value(&self) -> ExtendedValue {
        ExtendedValue::Finite(self.to_rational())
    }
}

impl PartialOrd for Grade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.resolution != other.resolution {
            return None;
        }
        Some(self.numerator.cmp(&other.numerator))
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator == 0 {
            write!(f, "0")
        } else if self.numerator == self.resolution {
            write!(f, "1")
        } else {
            write!(f, "{}/{}", self.numerator, self.resolution)
        }
    }
}

/// A finite ordered set of distinct point labels. The order is fixed at
/// construction and is the canonical enumeration order everywhere downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    points: Vec<String>,
}

impl Universe {
    pub fn new<I, S>(points: I) -> Result<Arc<Self>, LatticeError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(LatticeError::EmptyUniverse);
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(LatticeError::DuplicatePoint(p.clone()));
            }
        }
        Ok(Arc::new(Universe { points }))
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }
}

/// A fuzzy set: one grade per universe point, all at a shared resolution.
///
/// Equality, hashing and the canonical total order (lexicographic on the
/// grade-numerator vector in universe order) ignore the universe pointer and
/// compare content; two sets are interchangeable iff universe labels,
/// resolution and grades all agree.
#[derive(Debug, Clone)]
pub struct FuzzySet {
    universe: Arc<Universe>,
    resolution: u32,
    grades: Vec<u32>,
}

impl FuzzySet {
    pub fn new(
        universe: Arc<Universe>,
        resolution: u32,
        grades: Vec<u32>,
    ) -> Result<Self, LatticeError> {
        if resolution == 0 {
            return Err(LatticeError::ZeroResolution);
        }
        if grades.len() != universe.len() {
            return Err(LatticeError::WrongArity {
                expected: universe.len(),
                found: grades.len(),
            });
        }
        if let Some(&bad) = grades.iter().find(|&&g| g > resolution) {
            return Err(LatticeError::InvalidGrade { numerator: bad, resolution });
        }
        Ok(FuzzySet { universe, resolution, grades })
    }

    /// The constant fuzzy set with every coordinate equal to `level`.
    pub fn constant(
        universe: Arc<Universe>,
        level: Grade,
        resolution: u32,
    ) -> Result<Self, LatticeError> {
        if level.resolution() != resolution {
            return Err(LatticeError::ResolutionMismatch {
                expected: resolution,
                found: level.resolution(),
            });
        }
        let n = universe.len();
        FuzzySet::new(universe, resolution, vec![level.numerator(); n])
    }

    pub fn bottom(universe: Arc<Universe>, resolution: u32) -> Result<Self, LatticeError> {
        let lat = GradeLattice::new(resolution)?;
        FuzzySet::constant(universe, lat.bottom(), resolution)
    }

    pub fn top(universe: Arc<Universe>, resolution: u32) -> Result<Self, LatticeError> {
        let lat = GradeLattice::new(resolution)?;
        FuzzySet::constant(universe, lat.top(), resolution)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// Grade numerators in universe order.
    pub fn numerators(&self) -> &[u32] {
        &self.grades
    }

    pub fn grade_at(&self, point: usize) -> Grade {
        Grade { numerator: self.grades[point], resolution: self.resolution }
    }

    pub fn is_bottom(&self) -> bool {
        self.grades.iter().all(|&g| g == 0)
    }

    pub fn is_top(&self) -> bool {
        self.grades.iter().all(|&g| g == self.resolution)
    }

    pub fn is_constant(&self) -> bool {
        self.grades.windows(2).all(|w| w[0] == w[1])
    }

    fn check_compatible(&self, other: &FuzzySet) -> Result<(), LatticeError> {
        if self.resolution != other.resolution {
            return Err(LatticeError::ResolutionMismatch {
                expected: self.resolution,
                found: other.resolution,
            });
        }
        if self.universe.points() != other.universe.points() {
            return Err(LatticeError::UniverseMismatch);
        }
        Ok(())
    }

    /// Coordinatewise minimum.
    pub fn meet(&self, other: &FuzzySet) -> Result<FuzzySet, LatticeError> {
        self.check_compatible(other)?;
        let grades = self
            .grades
            .iter()
            .zip(&other.grades)
            .map(|(&a, &b)| a.min(b))
            .collect();
        Ok(FuzzySet { universe: self.universe.clone(), resolution: self.resolution, grades })
    }

    /// Coordinatewise maximum.
    pub fn join(&self, other: &FuzzySet) -> Result<FuzzySet, LatticeError> {
        self.check_compatible(other)?;
        let grades = self
            .grades
            .iter()
            .zip(&other.grades)
            .map(|(&a, &b)| a.max(b))
            .collect();
        Ok(FuzzySet { universe: self.universe.clone(), resolution: self.resolution, grades })
    }

    /// Coordinatewise `1 - t`; an involution.
    pub fn complement(&self) -> FuzzySet {
        let grades = self.grades.iter().map(|&g| self.resolution - g).collect();
        FuzzySet { universe: self.universe.clone(), resolution: self.resolution, grades }
    }

    /// `self <= other` in the pointwise order; equivalently `meet = self`.
    pub fn leq(&self, other: &FuzzySet) -> Result<bool, LatticeError> {
        self.check_compatible(other)?;
        Ok(self.grades.iter().zip(&other.grades).all(|(&a, &b)| a <= b))
    }
}

/// Coordinatewise maximum over a non-empty sequence.
///
/// An empty sequence is rejected: the supremum of nothing is the bottom
/// element, and the caller must say so explicitly.
pub fn sup_of<'a, I>(sets: I) -> Result<FuzzySet, LatticeError>
where
    I: IntoIterator<Item = &'a FuzzySet>,
{
    let mut iter = sets.into_iter();
    let first = iter.next().ok_or(LatticeError::EmptySupremum)?;
    let mut acc = first.clone();
    for s in iter {
        acc = acc.join(s)?;
    }
    Ok(acc)
}

impl PartialEq for FuzzySet {
    fn eq(&self, other: &Self) -> bool {
        self.resolution == other.resolution
            && self.grades == other.grades
            && self.universe.points() == other.universe.points()
    }
}

impl Eq for FuzzySet {}

impl std::hash::Hash for FuzzySet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.resolution.hash(state);
        self.grades.hash(state);
    }
}

impl PartialOrd for FuzzySet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: lexicographic on the grade-numerator vector.
/// This is an enumeration order, not the lattice order; use [`FuzzySet::leq`]
/// for the lattice order.
impl Ord for FuzzySet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.grades.cmp(&other.grades)
    }
}

impl fmt::Display for FuzzySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &g) in self.grades.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", Grade { numerator: g, resolution: self.resolution })?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv() -> Arc<Universe> {
        Universe::new(["a", "b"]).unwrap()
    }

    fn set(grades: &[u32], q: u32) -> FuzzySet {
        FuzzySet::new(uv(), q, grades.to_vec()).unwrap()
    }

    #[test]
    fn constants_fill_every_coordinate() {
        let u = uv();
        let zero = FuzzySet::constant(u.clone(), Grade::new(0, 2).unwrap(), 2).unwrap();
        assert_eq!(zero.numerators(), &[0, 0]);
        let half = FuzzySet::constant(u.clone(), Grade::new(1, 2).unwrap(), 2).unwrap();
        assert_eq!(half.numerators(), &[1, 1]);
        let one = FuzzySet::constant(Universe::new(["a"]).unwrap(), Grade::new(1, 1).unwrap(), 1)
            .unwrap();
        assert_eq!(one.numerators(), &[1]);
    }

    #[test]
    fn constant_rejects_resolution_mismatch() {
        let err = FuzzySet::constant(uv(), Grade::new(1, 3).unwrap(), 2).unwrap_err();
        assert!(matches!(err, LatticeError::ResolutionMismatch { .. }));
    }

    #[test]
    fn meet_join_are_coordinatewise() {
        let a = set(&[2, 0], 2);
        let b = set(&[1, 1], 2);
        assert_eq!(a.meet(&b).unwrap(), set(&[1, 0], 2));
        assert_eq!(set(&[1, 0], 1).join(&set(&[0, 1], 1)).unwrap(), set(&[1, 1], 1));
        let top = FuzzySet::top(uv(), 2).unwrap();
        assert_eq!(a.meet(&top).unwrap(), a);
    }

    #[test]
    fn mismatched_universes_are_rejected() {
        let other = FuzzySet::new(Universe::new(["x", "y"]).unwrap(), 2, vec![1, 1]).unwrap();
        assert_eq!(set(&[1, 0], 2).meet(&other).unwrap_err(), LatticeError::UniverseMismatch);
        assert!(matches!(
            set(&[1, 0], 2).join(&set(&[1, 0], 1)),
            Err(LatticeError::ResolutionMismatch { .. })
        ));
    }

    #[test]
    fn complement_is_involutive() {
        let s = set(&[2, 1], 2);
        assert_eq!(s.complement(), set(&[0, 1], 2));
        assert_eq!(s.complement().complement(), s);
        assert_eq!(set(&[0, 0], 2).complement(), set(&[2, 2], 2));
    }

    #[test]
    fn leq_is_the_pointwise_order() {
        assert!(set(&[1, 0], 2).leq(&set(&[2, 1], 2)).unwrap());
        assert!(!set(&[1, 0], 1).leq(&set(&[0, 1], 1)).unwrap());
        let s = set(&[1, 2], 2);
        assert!(s.leq(&s).unwrap());
        // leq(a, b) iff meet(a, b) = a
        let a = set(&[1, 0], 2);
        let b = set(&[2, 1], 2);
        assert_eq!(a.leq(&b).unwrap(), a.meet(&b).unwrap() == a);
    }

    #[test]
    fn sup_of_takes_pointwise_max() {
        let sets = [set(&[1, 0], 2), set(&[0, 1], 2)];
        assert_eq!(sup_of(&sets).unwrap(), set(&[1, 1], 2));
        assert_eq!(sup_of(std::iter::once(&sets[0])).unwrap(), sets[0]);
        assert_eq!(sup_of(&[set(&[0, 0], 2), set(&[0, 0], 2)]).unwrap(), set(&[0, 0], 2));
        assert_eq!(sup_of(std::iter::empty()).unwrap_err(), LatticeError::EmptySupremum);
    }

    #[test]
    fn grades_reject_out_of_range_numerators() {
        assert!(Grade::new(3, 2).is_err());
        assert!(Grade::new(0, 0).is_err());
        assert!(FuzzySet::new(uv(), 2, vec![3, 0]).is_err());
        assert!(FuzzySet::new(uv(), 2, vec![1]).is_err());
    }

    #[test]
    fn universe_rejects_duplicates_and_empty() {
        assert!(matches!(Universe::new(Vec::<String>::new()), Err(LatticeError::EmptyUniverse)));
        assert!(matches!(
            Universe::new(["a", "a"]),
            Err(LatticeError::DuplicatePoint(_))
        ));
    }

    #[test]
    fn canonical_order_is_lex_on_numerators() {
        let mut v = vec![set(&[1, 1], 1), set(&[0, 0], 1), set(&[1, 0], 1), set(&[0, 1], 1)];
        v.sort();
        let flat: Vec<&[u32]> = v.iter().map(|s| s.numerators()).collect();
        assert_eq!(flat, vec![&[0, 0][..], &[0, 1], &[1, 0], &[1, 1]]);
    }

    #[test]
    fn grade_display_uses_chain_form() {
        assert_eq!(Grade::new(0, 2).unwrap().to_string(), "0");
        assert_eq!(Grade::new(1, 2).unwrap().to_string(), "1/2");
        assert_eq!(Grade::new(2, 2).unwrap().to_string(), "1");
        assert_eq!(set(&[1, 2], 2).to_string(), "(1/2,1)");
    }
}
