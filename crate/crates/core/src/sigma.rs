//! Generation and validation of fuzzy sigma-algebras: finite families of
//! fuzzy sets containing every constant and closed under complement and
//! pairwise join.
//!
//! On a finite grade lattice over a finite universe, every supremum of a
//! sequence equals a finite join, so closure under pairwise join realizes
//! closure under countable suprema exactly. Meets come for free through
//! `meet(a, b) = complement(join(complement(a), complement(b)))`, so the
//! closure and the validator only ever look at complements and joins.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::grade::{FuzzySet, GradeLattice, LatticeError, Universe};
use crate::report::{
    Check, ValidationReport, Witness, CHECK_COMPLEMENT_CLOSED, CHECK_CONSTANTS_PRESENT,
    CHECK_JOIN_CLOSED,
};

/// Default ceiling on closure size; keeps quadratic pair scans tractable.
pub const DEFAULT_SIZE_CAP: usize = 200_000;

/// Order tables are precomputed as bitset rows only below this element
/// count; larger algebras answer order queries by direct comparison.
const LEQ_TABLE_MAX: usize = 4_096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigmaError {
    #[error("closure exceeds the size cap of {cap} elements")]
    SizeLimit { cap: usize },
    #[error("set {set} is not a member of the algebra")]
    NotAMember { set: String },
    #[error("family is empty")]
    EmptyFamily,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A finite fuzzy sigma-algebra: distinct elements in canonical order with a
/// precomputed order relation. Immutable after generation; concurrent reads
/// are safe.
#[derive(Debug, Clone)]
pub struct FuzzySigmaAlgebra {
    universe: Arc<Universe>,
    resolution: u32,
    elements: Vec<FuzzySet>,
    index: BTreeMap<Vec<u32>, usize>,
    // row i holds the set { j : elements[i] <= elements[j] }, bit-packed
    leq_rows: Option<Vec<Vec<u64>>>,
}

impl PartialEq for FuzzySigmaAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.resolution == other.resolution
            && self.universe.points() == other.universe.points()
            && self.elements == other.elements
    }
}

impl Eq for FuzzySigmaAlgebra {}

impl FuzzySigmaAlgebra {
    /// The smallest family containing all constants and the generators,
    /// closed under complement and pairwise join.
    pub fn generate(
        generators: &[FuzzySet],
        resolution: u32,
        universe: Arc<Universe>,
    ) -> Result<Self, SigmaError> {
        Self::generate_capped(generators, resolution, universe, DEFAULT_SIZE_CAP)
    }

    pub fn generate_capped(
        generators: &[FuzzySet],
        resolution: u32,
        universe: Arc<Universe>,
        cap: usize,
    ) -> Result<Self, SigmaError> {
        let lattice = GradeLattice::new(resolution)?;
        let n = universe.len();

        let mut members: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
        let push = |v: Vec<u32>,
                        members: &mut BTreeSet<Vec<u32>>,
                        queue: &mut VecDeque<Vec<u32>>|
         -> Result<(), SigmaError> {
            if members.insert(v.clone()) {
                if members.len() > cap {
                    return Err(SigmaError::SizeLimit { cap });
                }
                queue.push_back(v);
            }
            Ok(())
        };

        for g in lattice.grades() {
            push(vec![g.numerator(); n], &mut members, &mut queue)?;
        }
        for s in generators {
            if s.resolution() != resolution {
                return Err(LatticeError::ResolutionMismatch {
                    expected: resolution,
                    found: s.resolution(),
                }
                .into());
            }
            if s.universe().points() != universe.points() {
                return Err(LatticeError::UniverseMismatch.into());
            }
            push(s.numerators().to_vec(), &mut members, &mut queue)?;
        }

        // Fixpoint: each popped element contributes its complement and its
        // joins with everything currently present. A pair (x, y) with y
        // inserted after x is handled when y itself is popped.
        while let Some(x) = queue.pop_front() {
            let comp: Vec<u32> = x.iter().map(|&g| resolution - g).collect();
            push(comp, &mut members, &mut queue)?;
            let snapshot: Vec<Vec<u32>> = members.iter().cloned().collect();
            for y in snapshot {
                let join: Vec<u32> = x.iter().zip(&y).map(|(&a, &b)| a.max(b)).collect();
                push(join, &mut members, &mut queue)?;
            }
        }

        Self::from_sorted_vectors(members.into_iter().collect(), resolution, universe)
    }

    /// Every grade vector at the given resolution; trivially closed.
    pub fn full_cube(
        resolution: u32,
        universe: Arc<Universe>,
    ) -> Result<Self, SigmaError> {
        Self::full_cube_capped(resolution, universe, DEFAULT_SIZE_CAP)
    }

    pub fn full_cube_capped(
        resolution: u32,
        universe: Arc<Universe>,
        cap: usize,
    ) -> Result<Self, SigmaError> {
        GradeLattice::new(resolution)?;
        let n = universe.len();
        let mut projected: u128 = 1;
        for _ in 0..n {
            projected = projected.saturating_mul(resolution as u128 + 1);
            if projected > cap as u128 {
                return Err(SigmaError::SizeLimit { cap });
            }
        }
        let mut vectors = Vec::with_capacity(projected as usize);
        let mut current = vec![0u32; n];
        loop {
            vectors.push(current.clone());
            // mixed-radix increment, most significant digit first so the
            // output is already in canonical lexicographic order
            let mut i = n;
            loop {
                if i == 0 {
                    return Self::from_sorted_vectors(vectors, resolution, universe);
                }
                i -= 1;
                if current[i] < resolution {
                    current[i] += 1;
                    for d in &mut current[i + 1..] {
                        *d = 0;
                    }
                    break;
                }
            }
        }
    }

    fn from_sorted_vectors(
        vectors: Vec<Vec<u32>>,
        resolution: u32,
        universe: Arc<Universe>,
    ) -> Result<Self, SigmaError> {
        let mut elements = Vec::with_capacity(vectors.len());
        let mut index = BTreeMap::new();
        for (i, v) in vectors.into_iter().enumerate() {
            index.insert(v.clone(), i);
            elements.push(FuzzySet::new(universe.clone(), resolution, v)?);
        }
        let leq_rows = if elements.len() <= LEQ_TABLE_MAX {
            Some(build_leq_rows(&elements))
        } else {
            None
        };
        Ok(FuzzySigmaAlgebra { universe, resolution, elements, index, leq_rows })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> &[FuzzySet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, idx: usize) -> &FuzzySet {
        &self.elements[idx]
    }

    pub fn index_of(&self, set: &FuzzySet) -> Option<usize> {
        if set.resolution() != self.resolution
            || set.universe().points() != self.universe.points()
        {
            return None;
        }
        self.index.get(set.numerators()).copied()
    }

    pub fn contains(&self, set: &FuzzySet) -> bool {
        self.index_of(set).is_some()
    }

    /// Index of the bottom constant. Present in every generated algebra.
    pub fn bottom_index(&self) -> usize {
        0 // canonical order puts the all-zero vector first
    }

    pub fn top_index(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn leq_by_index(&self, i: usize, j: usize) -> bool {
        match &self.leq_rows {
            Some(rows) => rows[i][j / 64] & (1 << (j % 64)) != 0,
            None => self.elements[i].leq(&self.elements[j]).expect("same algebra"),
        }
    }

    /// Index of `elements[i] ∨ elements[j]`; total on a closed algebra.
    pub fn join_index(&self, i: usize, j: usize) -> Option<usize> {
        let v: Vec<u32> = self.elements[i]
            .numerators()
            .iter()
            .zip(self.elements[j].numerators())
            .map(|(&a, &b)| a.max(b))
            .collect();
        self.index.get(&v).copied()
    }

    /// Index of `elements[i] ∧ elements[j]`; total on a closed algebra.
    pub fn meet_index(&self, i: usize, j: usize) -> Option<usize> {
        let v: Vec<u32> = self.elements[i]
            .numerators()
            .iter()
            .zip(self.elements[j].numerators())
            .map(|(&a, &b)| a.min(b))
            .collect();
        self.index.get(&v).copied()
    }

    pub fn complement_index(&self, i: usize) -> Option<usize> {
        let v: Vec<u32> = self.elements[i]
            .numerators()
            .iter()
            .map(|&g| self.resolution - g)
            .collect();
        self.index.get(&v).copied()
    }

    /// Indices of all elements below `elements[idx]`, in canonical order.
    pub fn subset_indices(&self, idx: usize) -> Vec<usize> {
        (0..self.elements.len())
            .filter(|&j| self.leq_by_index(j, idx))
            .collect()
    }

    /// All algebra elements below `set`, in canonical order.
    pub fn subsets_of(&self, set: &FuzzySet) -> Result<Vec<FuzzySet>, SigmaError> {
        let idx = self
            .index_of(set)
            .ok_or_else(|| SigmaError::NotAMember { set: set.to_string() })?;
        Ok(self
            .subset_indices(idx)
            .into_iter()
            .map(|j| self.elements[j].clone())
            .collect())
    }
}

fn build_leq_rows(elements: &[FuzzySet]) -> Vec<Vec<u64>> {
    let n = elements.len();
    let words = n.div_ceil(64);
    let mut rows = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in 0..n {
            if elements[i].leq(&elements[j]).expect("same algebra") {
                rows[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    rows
}

/// Check a family against the sigma-algebra axioms: all constants present,
/// closed under complement, closed under pairwise join. Failures are report
/// content with concrete witnesses, not errors.
pub fn is_algebra(family: &[FuzzySet]) -> Result<ValidationReport, SigmaError> {
    let first = family.first().ok_or(SigmaError::EmptyFamily)?;
    let universe = first.universe().clone();
    let resolution = first.resolution();
    for s in family {
        if s.resolution() != resolution {
            return Err(LatticeError::ResolutionMismatch {
                expected: resolution,
                found: s.resolution(),
            }
            .into());
        }
        if s.universe().points() != universe.points() {
            return Err(LatticeError::UniverseMismatch.into());
        }
    }

    let present: BTreeSet<&[u32]> = family.iter().map(|s| s.numerators()).collect();
    let lattice = GradeLattice::new(resolution)?;

    let mut missing_constants = Vec::new();
    for g in lattice.grades() {
        let v = vec![g.numerator(); universe.len()];
        if !present.contains(v.as_slice()) {
            let c = FuzzySet::new(universe.clone(), resolution, v)?;
            missing_constants.push(Witness::structural(
                vec![c.clone()],
                format!("constant {} missing", c),
            ));
        }
    }

    let mut missing_complements = Vec::new();
    for s in family {
        let c = s.complement();
        if !present.contains(c.numerators()) {
            missing_complements.push(Witness::structural(
                vec![s.clone(), c.clone()],
                format!("complement {} of {} missing", c, s),
            ));
        }
    }

    let mut missing_joins = Vec::new();
    'outer: for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            let j = a.join(b)?;
            if !present.contains(j.numerators()) {
                missing_joins.push(Witness::structural(
                    vec![a.clone(), b.clone(), j.clone()],
                    format!("join {} of {} and {} missing", j, a, b),
                ));
                if missing_joins.len() >= 16 {
                    break 'outer; // enough witnesses to act on
                }
            }
        }
    }

    Ok(ValidationReport::new(vec![
        Check::from_witnesses(CHECK_CONSTANTS_PRESENT, missing_constants),
        Check::from_witnesses(CHECK_COMPLEMENT_CLOSED, missing_complements),
        Check::from_witnesses(CHECK_JOIN_CLOSED, missing_joins),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv() -> Arc<Universe> {
        Universe::new(["a", "b"]).unwrap()
    }

    fn set(u: &Arc<Universe>, q: u32, grades: &[u32]) -> FuzzySet {
        FuzzySet::new(u.clone(), q, grades.to_vec()).unwrap()
    }

    #[test]
    fn constants_only_generation() {
        let u = Universe::new(["a"]).unwrap();
        let alg = FuzzySigmaAlgebra::generate(&[], 1, u.clone()).unwrap();
        assert_eq!(alg.len(), 2);
        let alg = FuzzySigmaAlgebra::generate(&[], 2, u).unwrap();
        assert_eq!(alg.len(), 3); // the constant chain is already closed
    }

    #[test]
    fn single_generator_closure_matches_hand_computation() {
        // closure of {(1,0)} at q=1: constants (0,0),(1,1); complement (0,1);
        // join (1,0) v (0,1) = (1,1) already present
        let u = uv();
        let alg =
            FuzzySigmaAlgebra::generate(&[set(&u, 1, &[1, 0])], 1, u.clone()).unwrap();
        let got: Vec<&[u32]> = alg.elements().iter().map(|s| s.numerators()).collect();
        assert_eq!(got, vec![&[0, 0][..], &[0, 1], &[1, 0], &[1, 1]]);
    }

    #[test]
    fn full_cube_sizes() {
        let u = uv();
        assert_eq!(FuzzySigmaAlgebra::full_cube(1, u.clone()).unwrap().len(), 4);
        assert_eq!(FuzzySigmaAlgebra::full_cube(2, u).unwrap().len(), 9);
        let single = Universe::new(["a"]).unwrap();
        assert_eq!(FuzzySigmaAlgebra::full_cube(2, single).unwrap().len(), 3);
    }

    #[test]
    fn size_cap_is_enforced() {
        let u = uv();
        assert_eq!(
            FuzzySigmaAlgebra::full_cube_capped(2, u.clone(), 8).unwrap_err(),
            SigmaError::SizeLimit { cap: 8 }
        );
        assert!(matches!(
            FuzzySigmaAlgebra::generate_capped(&[], 9, u, 5),
            Err(SigmaError::SizeLimit { cap: 5 })
        ));
    }

    #[test]
    fn is_algebra_passes_on_closed_families_and_witnesses_gaps() {
        let u = uv();
        let full = vec![
            set(&u, 1, &[0, 0]),
            set(&u, 1, &[0, 1]),
            set(&u, 1, &[1, 0]),
            set(&u, 1, &[1, 1]),
        ];
        assert!(is_algebra(&full).unwrap().passed());

        let missing = vec![set(&u, 1, &[0, 0]), set(&u, 1, &[1, 1]), set(&u, 1, &[1, 0])];
        let report = is_algebra(&missing).unwrap();
        assert!(report.failed(CHECK_COMPLEMENT_CLOSED));
        let w = &report.check(CHECK_COMPLEMENT_CLOSED).unwrap().witnesses[0];
        assert_eq!(w.elements[1].numerators(), &[0, 1]);

        let constants: Vec<FuzzySet> =
            (0..=2).map(|k| set(&u, 2, &[k, k])).collect();
        assert!(is_algebra(&constants).unwrap().passed());
    }

    #[test]
    fn is_algebra_rejects_mixed_families() {
        let u = uv();
        let other = Universe::new(["x", "y"]).unwrap();
        let fam = vec![set(&u, 1, &[0, 0]), set(&other, 1, &[1, 1])];
        assert!(is_algebra(&fam).is_err());
        assert_eq!(is_algebra(&[]).unwrap_err(), SigmaError::EmptyFamily);
    }

    #[test]
    fn subsets_of_enumerates_the_down_set() {
        let u = uv();
        let cube = FuzzySigmaAlgebra::full_cube(1, u.clone()).unwrap();
        let below = cube.subsets_of(&set(&u, 1, &[1, 0])).unwrap();
        let got: Vec<&[u32]> = below.iter().map(|s| s.numerators()).collect();
        assert_eq!(got, vec![&[0, 0][..], &[1, 0]]);

        let bottom = set(&u, 1, &[0, 0]);
        assert_eq!(cube.subsets_of(&bottom).unwrap(), vec![bottom.clone()]);
        assert_eq!(cube.subsets_of(&set(&u, 1, &[1, 1])).unwrap().len(), cube.len());

        let outsider = set(&u, 2, &[1, 1]);
        assert!(matches!(
            cube.subsets_of(&outsider),
            Err(SigmaError::NotAMember { .. })
        ));
    }

    #[test]
    fn generation_is_idempotent_and_monotone() {
        let u = uv();
        let g1 = set(&u, 2, &[2, 0]);
        let g2 = set(&u, 2, &[1, 2]);
        let alg = FuzzySigmaAlgebra::generate(&[g1.clone()], 2, u.clone()).unwrap();
        let again =
            FuzzySigmaAlgebra::generate(alg.elements(), 2, u.clone()).unwrap();
        assert_eq!(alg, again);

        let bigger = FuzzySigmaAlgebra::generate(&[g1, g2], 2, u).unwrap();
        assert!(bigger.len() >= alg.len());
        for e in alg.elements() {
            assert!(bigger.contains(e));
        }
    }

    #[test]
    fn generated_algebras_pass_is_algebra() {
        let u = uv();
        for gens in [
            vec![],
            vec![set(&u, 2, &[1, 0])],
            vec![set(&u, 2, &[2, 1]), set(&u, 2, &[0, 1])],
        ] {
            let alg = FuzzySigmaAlgebra::generate(&gens, 2, u.clone()).unwrap();
            let report = is_algebra(alg.elements()).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn index_lookups_agree_with_set_operations() {
        let u = uv();
        let cube = FuzzySigmaAlgebra::full_cube(2, u).unwrap();
        for i in 0..cube.len() {
            assert_eq!(
                cube.complement_index(i).map(|k| cube.element(k).clone()),
                Some(cube.element(i).complement())
            );
            for j in 0..cube.len() {
                let join = cube.element(i).join(cube.element(j)).unwrap();
                assert_eq!(cube.join_index(i, j), cube.index_of(&join));
                let meet = cube.element(i).meet(cube.element(j)).unwrap();
                assert_eq!(cube.meet_index(i, j), cube.index_of(&meet));
                assert_eq!(
                    cube.leq_by_index(i, j),
                    cube.element(i).leq(cube.element(j)).unwrap()
                );
            }
        }
        assert!(cube.element(cube.bottom_index()).is_bottom());
        assert!(cube.element(cube.top_index()).is_top());
    }
}
