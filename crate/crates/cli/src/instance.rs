//! Instance files: the JSON wire format for universes, algebras and
//! measures, with exact rationals as `p/q` strings and infinities as
//! `inf` / `-inf`. Floats never appear on the wire.
//!
//! Parsing normalizes to a canonical form (sorted names, canonical entry
//! order, reduced rationals) so that parse → serialize → parse is the
//! identity and instance digests are stable.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use fuzzmeas::measure::{coordinatewise_measure, difference_measure, BuiltMeasure};
use fuzzmeas::value::ValueError;
use fuzzmeas::{
    ExtendedValue, FuzzyMeasure, FuzzySet, FuzzySigmaAlgebra, LatticeError, MeasureError,
    SigmaError, SignedMeasure, Universe,
};
use num_rational::BigRational;
use num_traits::Zero;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("json parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    Schema(u32),
    #[error("{context}: numerator {numerator} exceeds resolution {resolution}")]
    BadNumerator { context: String, numerator: u32, resolution: u32 },
    #[error("{context}: vector has {found} entries, universe has {expected} points")]
    BadArity { context: String, expected: usize, found: usize },
    #[error("duplicate measure name {0:?}")]
    DuplicateName(String),
    #[error("unknown measure name {0:?}")]
    UnknownName(String),
    #[error("measure {name:?}: missing table entry for {set}")]
    MissingEntry { name: String, set: String },
    #[error("measure {name:?}: entry {set} is not an element of the algebra")]
    ExtraEntry { name: String, set: String },
    #[error("measure {name:?}: element {set} listed twice")]
    DuplicateEntry { name: String, set: String },
    #[error("measure {name:?}: point {point:?} is not in the universe")]
    UnknownPoint { name: String, point: String },
    #[error("measure {name:?}: point {point:?} configured twice")]
    DuplicatePoint { name: String, point: String },
    #[error("measure {name:?}: coordinatewise values must be finite rationals")]
    NonFiniteGenerator { name: String },
    #[error("{context}: {source}")]
    Value { context: String, source: ValueError },
    #[error("measure {name:?} declares -inf, which fuzzy measures cannot take")]
    NegativeInfinityMeasure { name: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sigma(#[from] SigmaError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema: u32,
    pub universe: Vec<String>,
    pub resolution: u32,
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measures: Vec<NamedMeasure>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub signed_measures: Vec<NamedSignedMeasure>,
    /// Present on files emitted by fuzz campaigns: where the instance came
    /// from and what it witnesses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finding: Option<FindingMeta>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgebraSpec {
    FullCube,
    Generated {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        generators: Vec<Vec<u32>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct NamedMeasure {
    pub name: String,
    pub form: MeasureForm,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasureForm {
    Table { entries: Vec<TableEntry> },
    Coordinatewise { tables: Vec<PointTable> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct NamedSignedMeasure {
    pub name: String,
    pub form: SignedMeasureForm,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SignedMeasureForm {
    Table { entries: Vec<TableEntry> },
    Coordinatewise { tables: Vec<PointTable> },
    Difference { minuend: String, subtrahend: String },
}

/// One table row: the grade-numerator vector of an algebra element and its
/// value in canonical text form.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub set: Vec<u32>,
    pub value: String,
}

/// Per-point generator table: one value per grade numerator `0..=q`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PointTable {
    pub point: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FindingMeta {
    pub check: String,
    pub seed: u64,
    pub trial: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<Vec<u32>>,
    pub note: String,
}

/// A parsed, validated, normalized instance with its core-library objects.
#[derive(Debug, Clone)]
pub struct ResolvedInstance {
    pub canonical: InstanceFile,
    pub canonical_bytes: String,
    pub digest: String,
    pub algebra: Arc<FuzzySigmaAlgebra>,
    pub measures: Vec<(String, FuzzyMeasure)>,
    pub signed: Vec<(String, ResolvedSigned)>,
}

/// A signed measure table as declared. `measure` is absent exactly when
/// the table mixes both infinities, which the typed constructor refuses
/// but the validators still need to report on.
#[derive(Debug, Clone)]
pub struct ResolvedSigned {
    pub values: Vec<ExtendedValue>,
    pub measure: Option<SignedMeasure>,
}

impl ResolvedInstance {
    pub fn measure(&self, name: &str) -> Result<&FuzzyMeasure, InputError> {
        self.measures
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| InputError::UnknownName(name.to_string()))
    }

    pub fn signed(&self, name: &str) -> Result<&ResolvedSigned, InputError> {
        self.signed
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| InputError::UnknownName(name.to_string()))
    }
}

pub fn parse_instance(text: &str) -> Result<ResolvedInstance, InputError> {
    let raw: InstanceFile = serde_json::from_str(text)?;
    resolve_instance(raw)
}

/// Serialize in canonical form: pretty JSON with a trailing newline.
pub fn to_canonical_json(inst: &InstanceFile) -> String {
    let mut s = serde_json::to_string_pretty(inst).expect("instances always serialize");
    s.push('\n');
    s
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(2 * digest.len() + 7);
    out.push_str("sha256:");
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn parse_value(text: &str, context: &str) -> Result<ExtendedValue, InputError> {
    ExtendedValue::from_str(text).map_err(|source| InputError::Value {
        context: context.to_string(),
        source,
    })
}

fn check_vector(
    v: &[u32],
    universe: &Universe,
    resolution: u32,
    context: &str,
) -> Result<(), InputError> {
    if v.len() != universe.len() {
        return Err(InputError::BadArity {
            context: context.to_string(),
            expected: universe.len(),
            found: v.len(),
        });
    }
    if let Some(&bad) = v.iter().find(|&&g| g > resolution) {
        return Err(InputError::BadNumerator {
            context: context.to_string(),
            numerator: bad,
            resolution,
        });
    }
    Ok(())
}

fn resolve_table(
    name: &str,
    entries: &[TableEntry],
    algebra: &Arc<FuzzySigmaAlgebra>,
) -> Result<(Vec<ExtendedValue>, Vec<TableEntry>), InputError> {
    let universe = algebra.universe();
    let mut values: Vec<Option<ExtendedValue>> = vec![None; algebra.len()];
    for e in entries {
        check_vector(&e.set, universe, algebra.resolution(), &format!("measure {name:?}"))?;
        let set = FuzzySet::new(universe.clone(), algebra.resolution(), e.set.clone())?;
        let idx = algebra.index_of(&set).ok_or_else(|| InputError::ExtraEntry {
            name: name.to_string(),
            set: set.to_string(),
        })?;
        if values[idx].is_some() {
            return Err(InputError::DuplicateEntry {
                name: name.to_string(),
                set: set.to_string(),
            });
        }
        values[idx] = Some(parse_value(&e.value, &format!("measure {name:?} at {set}"))?);
    }
    let values: Vec<ExtendedValue> = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| InputError::MissingEntry {
                name: name.to_string(),
                set: algebra.element(i).to_string(),
            })
        })
        .collect::<Result<_, _>>()?;
    let canonical = algebra
        .elements()
        .iter()
        .zip(&values)
        .map(|(e, v)| TableEntry { set: e.numerators().to_vec(), value: v.to_string() })
        .collect();
    Ok((values, canonical))
}

fn resolve_point_tables(
    name: &str,
    tables: &[PointTable],
    algebra: &Arc<FuzzySigmaAlgebra>,
) -> Result<(Vec<Vec<BigRational>>, Vec<PointTable>), InputError> {
    let universe = algebra.universe();
    let q = algebra.resolution() as usize;
    let mut per_point: Vec<Option<Vec<BigRational>>> = vec![None; universe.len()];
    for t in tables {
        let Some(x) = universe.index_of(&t.point) else {
            return Err(InputError::UnknownPoint {
                name: name.to_string(),
                point: t.point.clone(),
            });
        };
        if per_point[x].is_some() {
            return Err(InputError::DuplicatePoint {
                name: name.to_string(),
                point: t.point.clone(),
            });
        }
        let mut parsed = Vec::with_capacity(t.values.len());
        for (k, v) in t.values.iter().enumerate() {
            let context = format!("measure {name:?}, point {:?}, grade {k}", t.point);
            match parse_value(v, &context)? {
                ExtendedValue::Finite(r) => parsed.push(r),
                _ => return Err(InputError::NonFiniteGenerator { name: name.to_string() }),
            }
        }
        if parsed.len() != q + 1 {
            return Err(InputError::Measure(MeasureError::IncompleteGenerator {
                point: t.point.clone(),
                expected: q + 1,
                found: parsed.len(),
            }));
        }
        per_point[x] = Some(parsed);
    }
    let tables: Vec<Vec<BigRational>> = per_point
        .into_iter()
        .enumerate()
        .map(|(x, t)| {
            t.ok_or_else(|| InputError::Measure(MeasureError::IncompleteGenerator {
                point: universe.points()[x].clone(),
                expected: q + 1,
                found: 0,
            }))
        })
        .collect::<Result<_, _>>()?;
    let canonical = universe
        .points()
        .iter()
        .zip(&tables)
        .map(|(p, t)| PointTable {
            point: p.clone(),
            values: t
                .iter()
                .map(|r| {
                    if r.is_zero() {
                        // normalize -0 style inputs
                        ExtendedValue::zero().to_string()
                    } else {
                        ExtendedValue::Finite(r.clone()).to_string()
                    }
                })
                .collect(),
        })
        .collect();
    Ok((tables, canonical))
}

pub fn resolve_instance(raw: InstanceFile) -> Result<ResolvedInstance, InputError> {
    if raw.schema != SCHEMA_VERSION {
        return Err(InputError::Schema(raw.schema));
    }
    let universe = Universe::new(raw.universe.iter().cloned())?;
    let resolution = raw.resolution;

    let (algebra, algebra_spec) = match &raw.algebra {
        AlgebraSpec::FullCube => (
            Arc::new(FuzzySigmaAlgebra::full_cube(resolution, universe.clone())?),
            AlgebraSpec::FullCube,
        ),
        AlgebraSpec::Generated { generators } => {
            let mut gens = Vec::with_capacity(generators.len());
            let mut canonical_gens = Vec::with_capacity(generators.len());
            for g in generators {
                check_vector(g, &universe, resolution, "algebra generator")?;
                gens.push(FuzzySet::new(universe.clone(), resolution, g.clone())?);
                canonical_gens.push(g.clone());
            }
            canonical_gens.sort();
            canonical_gens.dedup();
            (
                Arc::new(FuzzySigmaAlgebra::generate(&gens, resolution, universe.clone())?),
                AlgebraSpec::Generated { generators: canonical_gens },
            )
        }
    };

    let mut measures: Vec<(String, FuzzyMeasure)> = Vec::new();
    let mut canonical_measures: Vec<NamedMeasure> = Vec::new();
    let mut sorted = raw.measures.clone();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    for nm in &sorted {
        if measures.iter().any(|(n, _)| n == &nm.name) {
            return Err(InputError::DuplicateName(nm.name.clone()));
        }
        let (measure, canonical_form) = match &nm.form {
            MeasureForm::Table { entries } => {
                let (values, canonical) = resolve_table(&nm.name, entries, &algebra)?;
                if values.iter().any(|v| *v == ExtendedValue::NegInfinity) {
                    return Err(InputError::NegativeInfinityMeasure { name: nm.name.clone() });
                }
                (
                    FuzzyMeasure::new(algebra.clone(), values)?,
                    MeasureForm::Table { entries: canonical },
                )
            }
            MeasureForm::Coordinatewise { tables } => {
                let (parsed, canonical) = resolve_point_tables(&nm.name, tables, &algebra)?;
                let built = coordinatewise_measure(&algebra, &parsed)?;
                let measure = match built {
                    BuiltMeasure::Measure(m) => m,
                    BuiltMeasure::Signed { measure, .. } => {
                        // declared as a measure but the generator dips: keep
                        // the table so the validators can report the axioms
                        FuzzyMeasure::new(algebra.clone(), measure.values().to_vec())?
                    }
                };
                (measure, MeasureForm::Coordinatewise { tables: canonical })
            }
        };
        measures.push((nm.name.clone(), measure));
        canonical_measures.push(NamedMeasure { name: nm.name.clone(), form: canonical_form });
    }

    let mut signed: Vec<(String, ResolvedSigned)> = Vec::new();
    let mut canonical_signed: Vec<NamedSignedMeasure> = Vec::new();
    let mut sorted = raw.signed_measures.clone();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    for nm in &sorted {
        if signed.iter().any(|(n, _)| n == &nm.name)
            || measures.iter().any(|(n, _)| n == &nm.name)
        {
            return Err(InputError::DuplicateName(nm.name.clone()));
        }
        let (values, canonical_form) = match &nm.form {
            SignedMeasureForm::Table { entries } => {
                let (values, canonical) = resolve_table(&nm.name, entries, &algebra)?;
                (values, SignedMeasureForm::Table { entries: canonical })
            }
            SignedMeasureForm::Coordinatewise { tables } => {
                let (parsed, canonical) = resolve_point_tables(&nm.name, tables, &algebra)?;
                let built = coordinatewise_measure(&algebra, &parsed)?;
                let values = match built {
                    BuiltMeasure::Measure(m) => m.values().to_vec(),
                    BuiltMeasure::Signed { measure, .. } => measure.values().to_vec(),
                };
                (values, SignedMeasureForm::Coordinatewise { tables: canonical })
            }
            SignedMeasureForm::Difference { minuend, subtrahend } => {
                let m1 = measures
                    .iter()
                    .find(|(n, _)| n == minuend)
                    .map(|(_, m)| m)
                    .ok_or_else(|| InputError::UnknownName(minuend.clone()))?;
                let m2 = measures
                    .iter()
                    .find(|(n, _)| n == subtrahend)
                    .map(|(_, m)| m)
                    .ok_or_else(|| InputError::UnknownName(subtrahend.clone()))?;
                let (diff, _) = difference_measure(m1, m2)?;
                (
                    diff.values().to_vec(),
                    SignedMeasureForm::Difference {
                        minuend: minuend.clone(),
                        subtrahend: subtrahend.clone(),
                    },
                )
            }
        };
        let measure = SignedMeasure::new(algebra.clone(), values.clone()).ok();
        signed.push((nm.name.clone(), ResolvedSigned { values, measure }));
        canonical_signed.push(NamedSignedMeasure {
            name: nm.name.clone(),
            form: canonical_form,
        });
    }

    let canonical = InstanceFile {
        schema: SCHEMA_VERSION,
        universe: raw.universe,
        resolution,
        algebra: algebra_spec,
        measures: canonical_measures,
        signed_measures: canonical_signed,
        finding: raw.finding,
    };
    let canonical_bytes = to_canonical_json(&canonical);
    let digest = sha256_hex(canonical_bytes.as_bytes());
    Ok(ResolvedInstance { canonical, canonical_bytes, digest, algebra, measures, signed })
}

/// A full-cube instance skeleton for the given points and resolution.
pub fn cube_skeleton(points: &[String], resolution: u32) -> InstanceFile {
    InstanceFile {
        schema: SCHEMA_VERSION,
        universe: points.to_vec(),
        resolution,
        algebra: AlgebraSpec::FullCube,
        measures: Vec::new(),
        signed_measures: Vec::new(),
        finding: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_one_cube_text() -> String {
        r#"{
            "schema": 1,
            "universe": ["a", "b"],
            "resolution": 1,
            "algebra": {"mode": "full-cube"},
            "measures": [
                {"name": "m", "form": {"kind": "table", "entries": [
                    {"set": [1, 1], "value": "1"},
                    {"set": [0, 0], "value": "0"},
                    {"set": [0, 1], "value": "2/2"},
                    {"set": [1, 0], "value": "1"}
                ]}}
            ]
        }"#
        .to_string()
    }

    #[test]
    fn parsing_normalizes_and_round_trips() {
        let parsed = parse_instance(&zero_one_cube_text()).unwrap();
        // entries re-sorted canonically, value 2/2 reduced to 1
        let MeasureForm::Table { entries } = &parsed.canonical.measures[0].form else {
            panic!("table form");
        };
        assert_eq!(entries[0].set, vec![0, 0]);
        assert_eq!(entries[1].value, "1");

        let reparsed = parse_instance(&parsed.canonical_bytes).unwrap();
        assert_eq!(reparsed.canonical, parsed.canonical);
        assert_eq!(reparsed.canonical_bytes, parsed.canonical_bytes);
        assert_eq!(reparsed.digest, parsed.digest);
    }

    #[test]
    fn schema_violations_are_named() {
        let bad = zero_one_cube_text().replace("\"set\": [1, 0], \"value\": \"1\"", "\"set\": [5, 0], \"value\": \"1\"");
        let err = parse_instance(&bad).unwrap_err();
        assert!(matches!(err, InputError::BadNumerator { numerator: 5, .. }), "{err}");

        let bad = zero_one_cube_text().replace("{\"set\": [0, 1], \"value\": \"2/2\"},", "");
        assert!(matches!(parse_instance(&bad).unwrap_err(), InputError::MissingEntry { .. }));

        let bad = zero_one_cube_text().replace("\"schema\": 1", "\"schema\": 9");
        assert!(matches!(parse_instance(&bad).unwrap_err(), InputError::Schema(9)));

        let bad = zero_one_cube_text().replace("\"value\": \"0\"", "\"value\": \"0.5\"");
        assert!(matches!(parse_instance(&bad).unwrap_err(), InputError::Value { .. }));
    }

    #[test]
    fn coordinatewise_and_difference_forms_resolve() {
        let text = r#"{
            "schema": 1,
            "universe": ["a", "b"],
            "resolution": 2,
            "algebra": {"mode": "full-cube"},
            "measures": [
                {"name": "m1", "form": {"kind": "coordinatewise", "tables": [
                    {"point": "a", "values": ["0", "1/2", "1"]},
                    {"point": "b", "values": ["0", "0", "0"]}
                ]}},
                {"name": "m2", "form": {"kind": "coordinatewise", "tables": [
                    {"point": "b", "values": ["0", "1/2", "1"]},
                    {"point": "a", "values": ["0", "0", "0"]}
                ]}}
            ],
            "signed_measures": [
                {"name": "nu", "form": {"kind": "difference", "minuend": "m1", "subtrahend": "m2"}}
            ]
        }"#;
        let parsed = parse_instance(text).unwrap();
        let nu = parsed.signed("nu").unwrap().measure.as_ref().unwrap();
        let u = parsed.algebra.universe().clone();
        let top_a = FuzzySet::new(u.clone(), 2, vec![2, 0]).unwrap();
        assert_eq!(nu.value_of(&top_a).unwrap(), &ExtendedValue::from_int(1));
        // m2's point tables were reordered into universe order
        let MeasureForm::Coordinatewise { tables } = &parsed.canonical.measures[1].form
        else {
            panic!("coordinatewise form");
        };
        assert_eq!(tables[0].point, "a");

        let missing = text.replace("\"subtrahend\": \"m2\"", "\"subtrahend\": \"mX\"");
        assert!(matches!(
            parse_instance(&missing).unwrap_err(),
            InputError::UnknownName(_)
        ));
    }

    #[test]
    fn generated_algebras_and_infinities_parse() {
        let text = r#"{
            "schema": 1,
            "universe": ["a", "b"],
            "resolution": 1,
            "algebra": {"mode": "generated", "generators": [[1, 0]]},
            "signed_measures": [
                {"name": "nu", "form": {"kind": "table", "entries": [
                    {"set": [0, 0], "value": "0"},
                    {"set": [0, 1], "value": "-1/2"},
                    {"set": [1, 0], "value": "1/2"},
                    {"set": [1, 1], "value": "-inf"}
                ]}}
            ]
        }"#;
        let parsed = parse_instance(text).unwrap();
        assert_eq!(parsed.algebra.len(), 4);
        let nu = parsed.signed("nu").unwrap();
        assert!(nu.measure.is_some());
        assert_eq!(nu.values[3], ExtendedValue::NegInfinity);
    }

    #[test]
    fn mixed_infinities_resolve_without_a_typed_measure() {
        let text = r#"{
            "schema": 1,
            "universe": ["a"],
            "resolution": 1,
            "algebra": {"mode": "full-cube"},
            "signed_measures": [
                {"name": "nu", "form": {"kind": "table", "entries": [
                    {"set": [0], "value": "inf"},
                    {"set": [1], "value": "-inf"}
                ]}}
            ]
        }"#;
        let parsed = parse_instance(text).unwrap();
        let nu = parsed.signed("nu").unwrap();
        assert!(nu.measure.is_none());
        assert_eq!(nu.values.len(), 2);
    }
}
