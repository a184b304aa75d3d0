//! Exact-arithmetic fuzzy measure theory on finite universes with
//! discretized membership grades.
//!
//! The crate provides, in dependency order:
//!
//! - [`grade`]: exact grade arithmetic and the fuzzy-set lattice (meet,
//!   join, complement, order, constants);
//! - [`sigma`]: generation and validation of fuzzy sigma-algebras as finite
//!   families closed under constants, complement and suprema;
//! - [`measure`]: fuzzy measures and fuzzy signed measures as total value
//!   tables, with exhaustive axiom validators;
//! - [`caratheodory`]: outer measures from cover systems and from measures,
//!   measurability criteria, measurable-class computation and the extension
//!   pipeline;
//! - [`hahn`]: positive/negative set classification, positive-subset
//!   extraction with a literal step trace, and the Hahn decomposition with
//!   brute-force oracles.
//!
//! All arithmetic is exact (big rationals plus one-sided infinities); there
//! is no tolerance anywhere. Constructions never assert the classical
//! theorems they mirror — they check them and report witnesses where the
//! fuzzy analogue fails, because on fuzzy sets some of those analogues do
//! fail, and the counterexamples are the interesting output.

pub mod caratheodory;
pub mod grade;
pub mod hahn;
pub mod measure;
pub mod report;
pub mod sigma;
pub mod value;

pub use caratheodory::{
    extend_measure, is_measurable, measurable_class, outer_from_covers, outer_from_measure,
    uniqueness_spot_check, validate_outer, CaratheodoryError, CoverSystem, ExtensionResult,
    MeasurabilityCriterion, OuterMeasure,
};
pub use grade::{sup_of, FuzzySet, Grade, GradeLattice, LatticeError, Universe};
pub use hahn::{
    classify, extract_positive_subset, hahn_decompose, oracle_hahn, oracle_positive_subset,
    verify_extraction_trace, ExtractionTrace, HahnDecomposition, HahnError,
    PositivityCertificate, SignVerdict,
};
pub use measure::{
    coordinatewise_measure, difference_measure, validate_fuzzy_measure,
    validate_signed_measure, BuiltMeasure, FuzzyMeasure, InfinitySign, MeasureError,
    SignedMeasure,
};
pub use report::{Check, ValidationReport, Witness};
pub use sigma::{is_algebra, FuzzySigmaAlgebra, SigmaError, DEFAULT_SIZE_CAP};
pub use value::{ExtendedValue, ValueError};
