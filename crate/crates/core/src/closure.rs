//! Breadth-first closure of a generating set under composition.
//!
//! The engine is generic over [`Transformation`]: cellular automata,
//! permutations, wreath elements and their direct products all use it.
//! Elements are discovered layer by layer (by word length); inside a layer
//! they are kept in lexicographic order of their words, so the first word
//! recorded for an element is its shortest word with ties broken towards
//! the lexicographically least sequence of generator indices.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use indexmap::map::Entry;
use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{universe_size, CellularAutomaton, Params};
use crate::error::{Error, Result};

/// Elements of a finite transformation semigroup, acting on the right.
pub trait Transformation: Clone + Eq + Hash + Send + Sync {
    /// `self` followed by `next`.
    fn then(&self, next: &Self) -> Self;
}

/// Default element cap for closures.
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 22;

/// Parent batches below this size are expanded on the calling thread.
const PARALLEL_THRESHOLD: usize = 64;
/// Parents expanded per batch; bounds the buffered products.
const BATCH: usize = 4096;

#[derive(Debug, Clone, Copy)]
struct Node {
    /// Element this one extends by one generator; `None` for generators.
    prefix: Option<u32>,
    last: u32,
    depth: u32,
}

/// A sequence of generator indices, composed left to right. The empty
/// word denotes the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// Composes the generators named by the word, starting from `identity`.
    pub fn evaluate<T: Transformation>(&self, gens: &[T], identity: &T) -> Result<T> {
        let mut acc = identity.clone();
        for &g in &self.0 {
            let gen = gens.get(g).ok_or(Error::IndexOutOfRange {
                index: g,
                size: gens.len(),
            })?;
            acc = acc.then(gen);
        }
        Ok(acc)
    }
}

impl fmt::Display for Word {
    /// Whitespace-separated generator indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|e| Error::Parse {
                    line: 1,
                    message: format!("bad generator index {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// The elements reachable from a generating set, with a shortest word for
/// each. May be truncated at a cap (see [`Closure::is_capped`]).
#[derive(Debug, Clone)]
pub struct Closure<T> {
    nodes: IndexMap<T, Node>,
    capped: bool,
}

impl<T: Transformation> Closure<T> {
    /// Explores until the closure is complete or holds `cap` elements.
    /// The identity is present only if some word evaluates to it.
    pub fn explore(gens: &[T], cap: usize) -> Self {
        let mut nodes: IndexMap<T, Node> = IndexMap::new();
        let mut capped = false;
        for (g, gen) in gens.iter().enumerate() {
            if nodes.contains_key(gen) {
                continue;
            }
            if nodes.len() >= cap {
                capped = true;
                break;
            }
            nodes.insert(
                gen.clone(),
                Node {
                    prefix: None,
                    last: g as u32,
                    depth: 1,
                },
            );
        }

        let mut depth = 1;
        let mut layer = 0..nodes.len();
        'layers: while !layer.is_empty() {
            let next_start = nodes.len();
            let mut batch_start = layer.start;
            while batch_start < layer.end {
                let batch_end = (batch_start + BATCH).min(layer.end);
                for (parent, g, product) in expand(&nodes, gens, batch_start..batch_end) {
                    if let Entry::Vacant(slot) = nodes.entry(product) {
                        if slot.index() >= cap {
                            capped = true;
                            break 'layers;
                        }
                        slot.insert(Node {
                            prefix: Some(parent as u32),
                            last: g as u32,
                            depth: depth + 1,
                        });
                    }
                }
                batch_start = batch_end;
            }
            depth += 1;
            layer = next_start..nodes.len();
        }
        Closure { nodes, capped }
    }

    /// Like [`Closure::explore`] but a truncated result is an error.
    pub fn complete(gens: &[T], cap: usize) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidArgument("empty generating set".into()));
        }
        let closure = Self::explore(gens, cap);
        if closure.capped {
            Err(Error::CapExceeded {
                cap,
                partial: closure.len(),
            })
        } else {
            Ok(closure)
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_capped(&self) -> bool {
        self.capped
    }

    pub fn contains(&self, x: &T) -> bool {
        self.nodes.contains_key(x)
    }

    /// Elements in discovery order (by word length, then word).
    pub fn elements(&self) -> impl ExactSizeIterator<Item = &T> {
        self.nodes.keys()
    }

    pub fn into_elements(self) -> Vec<T> {
        self.nodes.into_keys().collect()
    }

    /// Shortest, then lexicographically least, word for `x`.
    pub fn word_of(&self, x: &T) -> Option<Word> {
        let mut index = self.nodes.get_index_of(x)?;
        let mut letters = Vec::new();
        loop {
            let node = self.nodes[index];
            letters.push(node.last as usize);
            match node.prefix {
                Some(p) => index = p as usize,
                None => break,
            }
        }
        letters.reverse();
        Some(Word(letters))
    }

    pub fn word_length_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for node in self.nodes.values() {
            *hist.entry(node.depth as usize).or_insert(0) += 1;
        }
        hist
    }

    pub fn summary(&self) -> ClosureSummary {
        ClosureSummary {
            size: self.len(),
            capped: self.capped,
            word_length_histogram: self.word_length_histogram(),
        }
    }
}

fn expand<T: Transformation>(
    nodes: &IndexMap<T, Node>,
    gens: &[T],
    parents: std::ops::Range<usize>,
) -> Vec<(usize, usize, T)> {
    let one = |i: usize| {
        let (elem, _) = nodes.get_index(i).expect("parent index in range");
        gens.iter()
            .enumerate()
            .map(move |(g, gen)| (i, g, elem.then(gen)))
    };
    if parents.len() < PARALLEL_THRESHOLD {
        parents.flat_map(one).collect()
    } else {
        // indexed collect keeps the sequential order
        parents.into_par_iter().flat_map_iter(one).collect()
    }
}

/// JSON summary of a closure run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureSummary {
    pub size: usize,
    pub capped: bool,
    pub word_length_histogram: BTreeMap<usize, usize>,
}

/// The closure as a plain set, for when words are not needed.
pub fn semigroup_closure<T: Transformation>(gens: &[T], cap: usize) -> Result<Vec<T>> {
    Closure::complete(gens, cap).map(Closure::into_elements)
}

/// An ordered list of cellular automata with shared parameters; positions
/// are the symbols of [`Word`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    params: Params,
    elements: Vec<CellularAutomaton>,
}

impl GeneratorSet {
    pub fn new(params: Params, elements: Vec<CellularAutomaton>) -> Result<Self> {
        for e in &elements {
            params.check_same(e.params())?;
        }
        Ok(GeneratorSet { params, elements })
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

    /// The set without the element at `index`.
    pub fn without(&self, index: usize) -> GeneratorSet {
        let mut elements = self.elements.clone();
        elements.remove(index);
        GeneratorSet {
            params: self.params,
            elements,
        }
    }

    pub fn closure(&self, cap: usize) -> Result<Closure<CellularAutomaton>> {
        Closure::complete(&self.elements, cap)
    }

    /// True iff the generated semigroup is all of `CA(Z_n; A)`.
    pub fn is_generating(&self, cap: usize) -> Result<bool> {
        if self.elements.is_empty() {
            return Ok(false);
        }
        let total = universe_size(&self.params)?;
        let closure = self.closure(cap)?;
        Ok(closure.len() as u64 == total)
    }

    pub fn evaluate(&self, word: &Word) -> Result<CellularAutomaton> {
        word.evaluate(&self.elements, &CellularAutomaton::identity(self.params))
    }

    /// Shortest word for `target`, verified by re-composition. The identity
    /// always decomposes as the empty word.
    pub fn decompose_word(&self, target: &CellularAutomaton, cap: usize) -> Result<Word> {
        self.params.check_same(target.params())?;
        if target.is_identity() {
            return Ok(Word::default());
        }
        let closure = self.closure(cap)?;
        self.decompose_with(&closure, target)
    }

    /// Decomposition against a closure computed earlier from this set.
    pub fn decompose_with(
        &self,
        closure: &Closure<CellularAutomaton>,
        target: &CellularAutomaton,
    ) -> Result<Word> {
        if target.is_identity() {
            return Ok(Word::default());
        }
        let word = closure.word_of(target).ok_or(Error::NotInClosure)?;
        if &self.evaluate(&word)? != target {
            return Err(Error::InvalidArgument(
                "closure was not computed from this generating set".into(),
            ));
        }
        Ok(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::LocalRule;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::collections::HashSet;

    /// Integers mod m under addition.
    #[derive(Debug, Clone, PartialEq, Eq, Hash)]
    struct Mod(u32, u32);

    impl Transformation for Mod {
        fn then(&self, next: &Self) -> Self {
            Mod((self.0 + next.0) % self.1, self.1)
        }
    }

    /// Plain full transformations on a small set.
    #[derive(Debug, Clone, PartialEq, Eq, Hash)]
    struct Map(Vec<u8>);

    impl Transformation for Map {
        fn then(&self, next: &Self) -> Self {
            Map(self.0.iter().map(|&i| next.0[i as usize]).collect())
        }
    }

    /// Reference closure: fixpoint of pairwise products, no words.
    fn naive_closure<T: Transformation>(gens: &[T]) -> HashSet<T> {
        let mut set: HashSet<T> = gens.iter().cloned().collect();
        loop {
            let snapshot: Vec<T> = set.iter().cloned().collect();
            let mut grew = false;
            for a in &snapshot {
                for b in &snapshot {
                    grew |= set.insert(a.then(b));
                }
            }
            if !grew {
                return set;
            }
        }
    }

    #[test]
    fn cyclic_group_words() {
        let c = Closure::complete(&[Mod(1, 5)], 100).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.word_of(&Mod(0, 5)), Some(Word(vec![0; 5])));
        let hist = c.word_length_histogram();
        assert_eq!(
            hist,
            BTreeMap::from([(1, 1), (2, 1), (3, 1), (4, 1), (5, 1)])
        );
    }

    #[test]
    fn words_are_shortest_then_lex_least() {
        // Z_12 with generators 5 and 1: element 6 = 5+1 = 1+5, lex least is [0, 1]
        let gens = [Mod(5, 12), Mod(1, 12)];
        let c = Closure::complete(&gens, 100).unwrap();
        assert_eq!(c.word_of(&Mod(6, 12)), Some(Word(vec![0, 1])));
        assert_eq!(c.word_of(&Mod(2, 12)), Some(Word(vec![1, 1])));
        // brute force every word up to length 6 to confirm minimality
        let mut best: std::collections::HashMap<u32, Vec<usize>> = Default::default();
        for len in 1..=6usize {
            for code in 0..(1usize << len) {
                let word: Vec<usize> = (0..len).rev().map(|b| (code >> b) & 1).collect();
                let value = word.iter().map(|&g| gens[g].0).sum::<u32>() % 12;
                best.entry(value).or_insert(word);
            }
        }
        for (value, word) in best {
            assert_eq!(c.word_of(&Mod(value, 12)).unwrap().0, word, "value {value}");
        }
    }

    #[test]
    fn cap_is_reported() {
        let c = Closure::explore(&[Mod(1, 50)], 10);
        assert!(c.is_capped());
        assert_eq!(c.len(), 10);
        assert_eq!(
            Closure::complete(&[Mod(1, 50)], 10).unwrap_err(),
            Error::CapExceeded {
                cap: 10,
                partial: 10
            }
        );
        assert!(!Closure::explore(&[Mod(1, 50)], 50).is_capped());
        assert!(Closure::<Mod>::complete(&[], 10).is_err());
    }

    #[test]
    fn matches_naive_closure_on_random_maps() {
        let mut rng = StdRng::seed_from_u64(3);
        use rand::Rng;
        for _ in 0..30 {
            let k = rng.random_range(1..4);
            let gens: Vec<Map> = (0..k)
                .map(|_| Map((0..5).map(|_| rng.random_range(0..5)).collect()))
                .collect();
            let fast: HashSet<Map> = semigroup_closure(&gens, 10_000)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(fast, naive_closure(&gens));
            // order of generators does not matter
            let mut rev = gens.clone();
            rev.reverse();
            let other: HashSet<Map> = semigroup_closure(&rev, 10_000)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(fast, other);
        }
    }

    #[test]
    fn parallel_expansion_is_deterministic() {
        // large enough layers to take the rayon path
        let params = Params::new(2, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        let gens: Vec<CellularAutomaton> = (0..3)
            .map(|_| CellularAutomaton::from_local_rule(&LocalRule::random(params, &mut rng)))
            .collect();
        let a = Closure::complete(&gens, 1 << 20).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| Closure::complete(&gens, 1 << 20).unwrap());
        assert!(a.elements().eq(b.elements()));
        for x in a.elements() {
            assert_eq!(a.word_of(x), b.word_of(x));
        }
    }

    #[test]
    fn closure_is_monotone() {
        let params = Params::new(3, 2).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let gens: Vec<CellularAutomaton> = (0..3)
                .map(|_| CellularAutomaton::from_local_rule(&LocalRule::random(params, &mut rng)))
                .collect();
            let small: HashSet<_> = semigroup_closure(&gens[..2], 1000)
                .unwrap()
                .into_iter()
                .collect();
            let big: HashSet<_> = semigroup_closure(&gens, 1000)
                .unwrap()
                .into_iter()
                .collect();
            assert!(small.is_subset(&big));
        }
    }

    #[test]
    fn shift_alone_at_n2() {
        let params = Params::new(2, 2).unwrap();
        let set = GeneratorSet::new(params, vec![CellularAutomaton::shift(params)]).unwrap();
        let c = set.closure(100).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.contains(&CellularAutomaton::identity(params)));
        assert!(!set.is_generating(100).unwrap());
    }

    #[test]
    fn identity_alone_never_generates() {
        for (n, q) in [(2, 2), (3, 2), (2, 3)] {
            let params = Params::new(n, q).unwrap();
            let set = GeneratorSet::new(params, vec![CellularAutomaton::identity(params)]).unwrap();
            assert!(!set.is_generating(1000).unwrap());
        }
    }

    #[test]
    fn word_text_format() {
        let w: Word = "0 2  1\n3".parse().unwrap();
        assert_eq!(w, Word(vec![0, 2, 1, 3]));
        assert_eq!(w.to_string(), "0 2 1 3");
        assert_eq!("".parse::<Word>().unwrap(), Word::default());
        assert!("0 x".parse::<Word>().is_err());
    }

    #[test]
    fn summary_json() {
        let c = Closure::complete(&[Mod(1, 3)], 10).unwrap();
        let json = serde_json::to_string(&c.summary()).unwrap();
        assert_eq!(
            json,
            r#"{"size":3,"capped":false,"word_length_histogram":{"1":1,"2":1,"3":1}}"#
        );
        let back: ClosureSummary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c.summary());
    }
}
