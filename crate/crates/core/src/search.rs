//! Exhaustive searches for minimal generating sets at desk scale.
//!
//! Subsets are enumerated in lexicographic order of their index sets, in
//! parallel batches; the reported witness is always the first generating
//! subset in that order. Two necessary conditions prune the enumeration
//! before any closure is computed. A product of transformations is a
//! permutation only when every factor is, so the units among the chosen
//! elements must generate the whole group of units. And an element whose
//! kernel merges one orbit `P` into one orbit `Q` (and nothing else) has
//! the same kernel as the first non-unit factor of any product equal to
//! it, up to a unit; so for each pair of orbit sizes `(|P|, |Q|)` some
//! chosen element must have a kernel of that shape.

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;

use crate::automaton::{universe_size, CellularAutomaton, Configuration, LocalRule, Params};
use crate::closure::{Closure, GeneratorSet, Transformation};
use crate::error::{Error, Result};
use crate::necklace::OrbitStructure;

/// Default bound on the number of elements of `CA(Z_n; A)` a search may
/// enumerate.
pub const DEFAULT_UNIVERSE_CAP: usize = 1 << 16;

const BATCH: usize = 4096;

/// Every element of `CA(Z_n; A)`, in lexicographic order of local rules.
pub fn all_automata(params: &Params, cap: usize) -> Result<Vec<CellularAutomaton>> {
    let total = universe_size(params)?;
    if total > cap as u64 {
        return Err(Error::CapExceeded { cap, partial: 0 });
    }
    Ok(LocalRule::all(*params)?
        .map(|rule| CellularAutomaton::from_local_rule(&rule))
        .collect())
}

/// The whole semigroup split into units and the `G`-double cosets of the
/// non-units.
#[derive(Debug, Clone)]
pub struct Universe {
    params: Params,
    elements: Vec<CellularAutomaton>,
    units: Vec<usize>,
    /// Double-coset class of each non-unit; `None` for units.
    class_of: Vec<Option<usize>>,
    /// Least member of each class.
    class_reps: Vec<usize>,
    /// Orbit sizes `(|P|, |Q|)` of the kernel shapes that occur.
    shapes: Vec<(usize, usize)>,
    shape_of: Vec<Option<usize>>,
}

impl Universe {
    pub fn new(params: &Params, cap: usize) -> Result<Self> {
        let elements = all_automata(params, cap)?;
        let index: HashMap<&CellularAutomaton, usize> =
            elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let units: Vec<usize> = (0..elements.len())
            .filter(|&i| elements[i].is_invertible())
            .collect();
        let non_units: Vec<usize> = (0..elements.len())
            .filter(|&i| !elements[i].is_invertible())
            .collect();

        let mut class_of = vec![None; elements.len()];
        let mut class_reps = Vec::new();
        for &a in &non_units {
            if class_of[a].is_some() {
                continue;
            }
            let class = class_reps.len();
            class_reps.push(a);
            for &g in &units {
                let ga = elements[g].then(&elements[a]);
                for &h in &units {
                    let gah = ga.then(&elements[h]);
                    class_of[index[&gah]] = Some(class);
                }
            }
        }

        let orbits = OrbitStructure::enumerate(*params);
        let raw_shapes: Vec<Option<(usize, usize)>> = elements
            .par_iter()
            .map(|e| collapse_shape(e, &orbits))
            .collect();
        let shapes: Vec<(usize, usize)> = raw_shapes
            .iter()
            .flatten()
            .copied()
            .sorted()
            .dedup()
            .collect();
        let shape_of = raw_shapes
            .iter()
            .map(|s| s.map(|s| shapes.binary_search(&s).unwrap()))
            .collect();

        Ok(Universe {
            params: *params,
            elements,
            units,
            class_of,
            class_reps,
            shapes,
            shape_of,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn elements(&self) -> &[CellularAutomaton] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn units(&self) -> impl Iterator<Item = &CellularAutomaton> {
        self.units.iter().map(|&i| &self.elements[i])
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    /// Orbit-size pairs `(|P|, |Q|)` for which some element collapses an
    /// orbit `P` onto an orbit `Q` and is injective elsewhere. Their number
    /// is a lower bound for the relative rank of the units.
    pub fn collapse_shapes(&self) -> &[(usize, usize)] {
        &self.shapes
    }

    fn covers_every_shape(&self, subset: &[usize]) -> bool {
        let mut hit = vec![false; self.shapes.len()];
        for &i in subset {
            if let Some(s) = self.shape_of[i] {
                hit[s] = true;
            }
        }
        hit.iter().all(|&h| h)
    }

    fn generates(&self, subset: &[usize]) -> bool {
        let gens: Vec<CellularAutomaton> =
            subset.iter().map(|&i| self.elements[i].clone()).collect();
        let closure = Closure::explore(&gens, self.elements.len() + 1);
        closure.len() == self.elements.len()
    }

    fn units_generate_group(&self, subset: &[usize]) -> bool {
        let units: Vec<CellularAutomaton> = subset
            .iter()
            .filter(|&&i| self.class_of[i].is_none())
            .map(|&i| self.elements[i].clone())
            .collect();
        !units.is_empty()
            && Closure::explore(&units, self.units.len() + 1).len() == self.units.len()
    }
}

/// `(|P|, |Q|)` when the kernel of `ca` merges the orbit `P` into a
/// distinct orbit `Q` and is trivial elsewhere.
fn collapse_shape(ca: &CellularAutomaton, orbits: &OrbitStructure) -> Option<(usize, usize)> {
    let states = ca.params().states();
    let mut seen = vec![u32::MAX; states];
    let mut merged = Vec::new();
    for c in 0..states {
        let image = ca.image(c);
        if seen[image] == u32::MAX {
            seen[image] = c as u32;
        } else {
            merged.push(seen[image] as usize);
            merged.push(c);
        }
    }
    let mut touched: Vec<usize> = merged
        .iter()
        .map(|&c| orbits.locate(Configuration(c as u32)).id)
        .sorted()
        .dedup()
        .collect();
    if touched.len() != 2 {
        return None;
    }
    let mut sizes: Vec<usize> = touched
        .drain(..)
        .map(|id| orbits.orbits()[id].size())
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let blocks = seen.iter().filter(|&&s| s != u32::MAX).count();
    (blocks == states - sizes[0]).then_some((sizes[0], sizes[1]))
}

/// A least generating set found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub size: usize,
    pub witness: Vec<CellularAutomaton>,
}

/// First `k`-subset of `pool` (lexicographic order of positions) passing
/// `accept`, searched in parallel.
fn first_subset<F>(pool: &[usize], k: usize, accept: F) -> Option<Vec<usize>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let mut combos = pool.iter().copied().combinations(k);
    loop {
        let batch: Vec<Vec<usize>> = combos.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return None;
        }
        if let Some(pos) = batch.par_iter().position_first(|s| accept(s)) {
            return Some(batch[pos].clone());
        }
    }
}

/// Rank of `CA(Z_n; A)`: the least `k <= max_size` such that some
/// `k`-subset of the semigroup generates it.
pub fn exhaustive_rank(params: &Params, max_size: usize, cap: usize) -> Result<SearchOutcome> {
    let universe = Universe::new(params, cap)?;
    exhaustive_rank_in(&universe, max_size)
}

pub fn exhaustive_rank_in(universe: &Universe, max_size: usize) -> Result<SearchOutcome> {
    let pool: Vec<usize> = (0..universe.len()).collect();
    let floor = universe.shapes.len() + 1;
    for k in floor..=max_size {
        let found = first_subset(&pool, k, |s| {
            universe.covers_every_shape(s)
                && universe.units_generate_group(s)
                && universe.generates(s)
        });
        if let Some(subset) = found {
            return Ok(SearchOutcome {
                size: k,
                witness: subset
                    .iter()
                    .map(|&i| universe.elements[i].clone())
                    .collect(),
            });
        }
    }
    Err(Error::NotFound { max: max_size })
}

/// Relative rank of the units: the least `k <= max_additions` such that
/// `unit_group` together with `k` further elements generates
/// `CA(Z_n; A)`. `unit_group` must consist of units; every unit not
/// generated by it is ignored, since no product of non-units is a unit.
///
/// Adding `a` or any `g a h` with `g, h` units gives the same closure, so
/// the search only picks one representative per double coset of the units.
pub fn exhaustive_relative_rank(
    params: &Params,
    unit_group: &[CellularAutomaton],
    max_additions: usize,
    cap: usize,
) -> Result<SearchOutcome> {
    let universe = Universe::new(params, cap)?;
    exhaustive_relative_rank_in(&universe, unit_group, max_additions)
}

pub fn exhaustive_relative_rank_in(
    universe: &Universe,
    unit_group: &[CellularAutomaton],
    max_additions: usize,
) -> Result<SearchOutcome> {
    for u in unit_group {
        universe.params.check_same(u.params())?;
        if !u.is_invertible() {
            return Err(Error::InvalidArgument(
                "unit_group contains a non-invertible element".into(),
            ));
        }
    }
    let group = Closure::explore(unit_group, universe.units.len() + 1);
    if group.len() != universe.units.len() {
        return Err(Error::InvalidArgument(format!(
            "unit_group generates {} of the {} units",
            group.len(),
            universe.units.len()
        )));
    }

    let generates_with = |extra: &[usize]| {
        if !universe.covers_every_shape(extra) {
            return false;
        }
        let mut gens: Vec<CellularAutomaton> = unit_group.to_vec();
        gens.extend(extra.iter().map(|&i| universe.elements[i].clone()));
        Closure::explore(&gens, universe.len() + 1).len() == universe.len()
    };
    for k in universe.shapes.len()..=max_additions {
        if let Some(extra) = first_subset(&universe.class_reps, k, generates_with) {
            let witness = extra
                .iter()
                .map(|&i| universe.elements[i].clone())
                .collect();
            return Ok(SearchOutcome { size: k, witness });
        }
    }
    Err(Error::NotFound { max: max_additions })
}

/// Positions `i` such that the set without its `i`-th element still
/// generates `CA(Z_n; A)`. Empty exactly when no proper subset of a
/// generating set generates.
pub fn redundant_generators(set: &GeneratorSet, cap: usize) -> Result<Vec<usize>> {
    let results: Vec<Result<bool>> = (0..set.len())
        .into_par_iter()
        .map(|i| set.without(i).is_generating(cap))
        .collect();
    let mut out = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        if r? {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::relative_rank_value;
    use crate::wreath::ica_generating_set;
    use crate::DEFAULT_CLOSURE_CAP;

    fn p(n: usize, q: usize) -> Params {
        Params::new(n, q).unwrap()
    }

    #[test]
    fn universe_structure() {
        let u = Universe::new(&p(2, 2), DEFAULT_UNIVERSE_CAP).unwrap();
        assert_eq!(u.len(), 16);
        assert_eq!(u.unit_count(), 4);
        assert_eq!(u.collapse_shapes(), &[(1, 1), (2, 1)]);
        let u = Universe::new(&p(3, 2), DEFAULT_UNIVERSE_CAP).unwrap();
        assert_eq!(u.len(), 256);
        assert_eq!(u.unit_count(), 36);
        assert_eq!(u.collapse_shapes(), &[(1, 1), (3, 1), (3, 3)]);
    }

    #[test]
    fn universe_cap() {
        assert!(matches!(
            all_automata(&p(2, 3), 1000),
            Err(Error::CapExceeded { cap: 1000, .. })
        ));
    }

    #[test]
    fn rank_n2_q2() {
        let outcome = exhaustive_rank(&p(2, 2), 4, DEFAULT_UNIVERSE_CAP).unwrap();
        assert_eq!(outcome.size, 4);
        let set = GeneratorSet::new(p(2, 2), outcome.witness).unwrap();
        assert!(set.is_generating(DEFAULT_CLOSURE_CAP).unwrap());
        assert_eq!(
            exhaustive_rank(&p(2, 2), 3, DEFAULT_UNIVERSE_CAP),
            Err(Error::NotFound { max: 3 })
        );
    }

    #[test]
    fn relative_ranks_match_formula() {
        for (n, q) in [(2, 2), (3, 2)] {
            let params = p(n, q);
            let units = ica_generating_set(&params).unwrap();
            let outcome =
                exhaustive_relative_rank(&params, &units, 5, DEFAULT_UNIVERSE_CAP).unwrap();
            assert_eq!(
                outcome.size as u64,
                relative_rank_value(n as u64, q as u64).unwrap()
            );
            let mut gens = units.clone();
            gens.extend(outcome.witness);
            assert!(GeneratorSet::new(params, gens)
                .unwrap()
                .is_generating(DEFAULT_CLOSURE_CAP)
                .unwrap());
            let below = outcome.size - 1;
            assert_eq!(
                exhaustive_relative_rank(&params, &units, below, DEFAULT_UNIVERSE_CAP),
                Err(Error::NotFound { max: below })
            );
        }
    }

    #[test]
    fn relative_rank_rejects_partial_groups() {
        let params = p(3, 2);
        let shift = CellularAutomaton::shift(params);
        assert!(matches!(
            exhaustive_relative_rank(&params, &[shift], 5, DEFAULT_UNIVERSE_CAP),
            Err(Error::InvalidArgument(_))
        ));
        let collapse = CellularAutomaton::constant(params, 0).unwrap();
        assert!(matches!(
            exhaustive_relative_rank(&params, &[collapse], 5, DEFAULT_UNIVERSE_CAP),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn witness_is_independent_of_thread_count() {
        let params = p(2, 2);
        let expected = exhaustive_rank(&params, 4, DEFAULT_UNIVERSE_CAP).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let single = pool
            .install(|| exhaustive_rank(&params, 4, DEFAULT_UNIVERSE_CAP))
            .unwrap();
        assert_eq!(single, expected);
    }
}
