//! Configurations of `A^n`, local rules, and cellular automata stored as
//! full image tables.
//!
//! Maps act on the right: `f.compose(&g)` is "apply `f`, then `g`". A
//! configuration `(x_1, ..., x_n)` is labelled by `sum x_i q^(i-1)`, and the
//! shift sends `(x_1, ..., x_n)` to `(x_n, x_1, ..., x_(n-1))`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::closure::Transformation;
use crate::error::{Error, Result};

/// Default bound on `q^n`.
pub const DEFAULT_STATE_CAP: usize = 1 << 24;

/// The group order `n` and alphabet size `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct Params {
    n: usize,
    q: usize,
    states: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    q: usize,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.n, raw.q)
    }
}

impl From<Params> for RawParams {
    fn from(p: Params) -> Self {
        RawParams { n: p.n, q: p.q }
    }
}

impl Params {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        Self::with_cap(n, q, DEFAULT_STATE_CAP)
    }

    /// Builds parameters, failing when `q^n` exceeds `cap`.
    pub fn with_cap(n: usize, q: usize, cap: usize) -> Result<Self> {
        if n < 2 || q < 2 {
            return Err(Error::InvalidParams { n, q });
        }
        // table entries are stored as u32
        let cap = cap.min(u32::MAX as usize);
        let mut states: u128 = 1;
        for _ in 0..n {
            states *= q as u128;
            if states > cap as u128 {
                let states = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
                return Err(Error::StateCapExceeded { states, cap });
            }
        }
        Ok(Params {
            n,
            q,
            states: states as usize,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `q^n`, the number of configurations.
    pub fn states(&self) -> usize {
        self.states
    }

    /// Label of `(x_1,...,x_n)σ`.
    #[inline]
    pub fn shift_index(&self, c: usize) -> usize {
        let top = self.states / self.q;
        (c % top) * self.q + c / top
    }

    /// Label of `(x_1,...,x_n)σ^-1 = (x_2,...,x_n,x_1)`.
    #[inline]
    pub fn unshift_index(&self, c: usize) -> usize {
        let top = self.states / self.q;
        c / self.q + (c % self.q) * top
    }

    /// Digits `(x_1, ..., x_n)` of a label, 0-based positions.
    pub fn decode(&self, mut c: usize) -> Vec<usize> {
        let mut digits = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            digits.push(c % self.q);
            c /= self.q;
        }
        digits
    }

    /// The `i`-th coordinate (1-based) of configuration `c`.
    #[inline]
    pub fn coordinate(&self, c: usize, i: usize) -> usize {
        (c / self.q.pow(i as u32 - 1)) % self.q
    }

    /// Label of the constant configuration `(a, a, ..., a)`.
    pub fn constant(&self, a: usize) -> usize {
        // a * (1 + q + ... + q^(n-1))
        a * ((self.states - 1) / (self.q - 1))
    }

    pub fn check_same(&self, other: &Params) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ParamsMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, q={}", self.n, self.q)
    }
}

/// A point of `A^n`, stored as its lexicographic label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(pub u32);

impl Configuration {
    /// Encodes `(x_1, ..., x_n)` as `sum x_i q^(i-1)`.
    pub fn encode(symbols: &[usize], params: &Params) -> Result<Self> {
        if symbols.len() != params.n() {
            return Err(Error::LengthMismatch {
                expected: params.n(),
                found: symbols.len(),
            });
        }
        let mut index = 0usize;
        for &x in symbols.iter().rev() {
            if x >= params.q() {
                return Err(Error::InvalidSymbol {
                    symbol: x,
                    q: params.q(),
                });
            }
            index = index * params.q() + x;
        }
        Ok(Configuration(index as u32))
    }

    pub fn decode(self, params: &Params) -> Vec<usize> {
        params.decode(self.index())
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A local map `μ : A^n → A` given by its value on every configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalRule {
    params: Params,
    table: Vec<u32>,
}

impl LocalRule {
    pub fn new(params: Params, table: Vec<u32>) -> Result<Self> {
        if table.len() != params.states() {
            return Err(Error::LengthMismatch {
                expected: params.states(),
                found: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&s| s as usize >= params.q()) {
            return Err(Error::InvalidSymbol {
                symbol: bad as usize,
                q: params.q(),
            });
        }
        Ok(LocalRule { params, table })
    }

    /// Tabulates `rule` over every configuration; the closure sees the
    /// digits `(x_1, ..., x_n)` at 0-based positions.
    pub fn from_fn(params: Params, mut rule: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        let table = (0..params.states())
            .map(|c| rule(&params.decode(c)) as u32)
            .collect();
        LocalRule::new(params, table)
    }

    /// The constant rule `μ ≡ a`.
    pub fn constant(params: Params, a: usize) -> Result<Self> {
        LocalRule::new(params, vec![a as u32; params.states()])
    }

    pub fn random<R: Rng + ?Sized>(params: Params, rng: &mut R) -> Self {
        let q = params.q() as u32;
        let table = (0..params.states())
            .map(|_| rng.random_range(0..q))
            .collect();
        LocalRule { params, table }
    }

    /// Every local rule in lexicographic order of their tables; fails when
    /// there are more than `2^32` of them.
    pub fn all(params: Params) -> Result<impl Iterator<Item = LocalRule>> {
        let total = universe_size(&params)?;
        let states = params.states();
        let q = params.q() as u32;
        let mut table = vec![0u32; states];
        let mut first = true;
        let mut produced = 0u64;
        Ok(std::iter::from_fn(move || {
            if produced == total {
                return None;
            }
            if !first {
                // odometer over the table, least significant entry first
                for slot in table.iter_mut() {
                    *slot += 1;
                    if *slot < q {
                        break;
                    }
                    *slot = 0;
                }
            }
            first = false;
            produced += 1;
            Some(LocalRule {
                params,
                table: table.clone(),
            })
        }))
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn value(&self, c: Configuration) -> usize {
        self.table[c.index()] as usize
    }
}

/// `q^(q^n)`, the number of cellular automata, when it fits in 32 bits.
pub fn universe_size(params: &Params) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..params.states() {
        total = total
            .checked_mul(params.q() as u64)
            .filter(|&t| t <= 1 << 32)
            .ok_or_else(|| Error::Overflow(format!("q^(q^n) for {params} exceeds 2^32")))?;
    }
    Ok(total)
}

/// A shift-commuting transformation of `A^n` given by its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellularAutomaton {
    params: Params,
    images: Vec<u32>,
}

impl CellularAutomaton {
    pub fn identity(params: Params) -> Self {
        let images = (0..params.states() as u32).collect();
        CellularAutomaton { params, images }
    }

    /// The shift `σ`.
    pub fn shift(params: Params) -> Self {
        let images = (0..params.states())
            .map(|c| params.shift_index(c) as u32)
            .collect();
        CellularAutomaton { params, images }
    }

    /// The map sending every configuration to `(a, ..., a)`.
    pub fn constant(params: Params, a: usize) -> Result<Self> {
        if a >= params.q() {
            return Err(Error::InvalidSymbol {
                symbol: a,
                q: params.q(),
            });
        }
        let target = params.constant(a) as u32;
        Ok(CellularAutomaton {
            params,
            images: vec![target; params.states()],
        })
    }

    /// Wraps a raw image table after checking length, range and commutation
    /// with the shift.
    pub fn from_table(params: Params, images: Vec<u32>) -> Result<Self> {
        if !commutes_with_shift(&images, &params)? {
            let at = (0..params.states())
                .find(|&c| {
                    images[params.shift_index(c)] as usize != params.shift_index(images[c] as usize)
                })
                .unwrap_or(0);
            return Err(Error::NotACellularAutomaton { at });
        }
        Ok(CellularAutomaton { params, images })
    }

    /// Callers guarantee the table is total, in range and shift-commuting.
    pub(crate) fn from_table_unchecked(params: Params, images: Vec<u32>) -> Self {
        debug_assert_eq!(images.len(), params.states());
        CellularAutomaton { params, images }
    }

    /// The automaton whose `i`-th coordinate is `μ` applied to the cyclic
    /// window `(x_(1+i), ..., x_(n+i))`.
    pub fn from_local_rule(rule: &LocalRule) -> Self {
        let params = rule.params;
        let q = params.q();
        let n = params.n();
        let mut images = Vec::with_capacity(params.states());
        for c in 0..params.states() {
            // window for coordinate i is x σ^-i
            let mut window = c;
            let mut image = 0usize;
            let mut weight = 1usize;
            for _ in 0..n {
                window = params.unshift_index(window);
                image += rule.table[window] as usize * weight;
                weight *= q;
            }
            images.push(image as u32);
        }
        CellularAutomaton { params, images }
    }

    /// The local rule `μ = f_n`, the last coordinate function.
    pub fn to_local_rule(&self) -> LocalRule {
        let n = self.params.n();
        let table = self
            .images
            .iter()
            .map(|&img| self.params.coordinate(img as usize, n) as u32)
            .collect();
        LocalRule {
            params: self.params,
            table,
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn into_images(self) -> Vec<u32> {
        self.images
    }

    pub fn apply(&self, c: Configuration) -> Result<Configuration> {
        self.images
            .get(c.index())
            .map(|&img| Configuration(img))
            .ok_or(Error::IndexOutOfRange {
                index: c.index(),
                size: self.params.states(),
            })
    }

    #[inline]
    pub fn image(&self, c: usize) -> usize {
        self.images[c] as usize
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &CellularAutomaton) -> Result<CellularAutomaton> {
        self.params.check_same(&next.params)?;
        Ok(self.compose_unchecked(next))
    }

    fn compose_unchecked(&self, next: &CellularAutomaton) -> CellularAutomaton {
        let images = self
            .images
            .iter()
            .map(|&c| next.images[c as usize])
            .collect();
        CellularAutomaton {
            params: self.params,
            images,
        }
    }

    pub fn pow(&self, mut exp: u64) -> CellularAutomaton {
        let mut base = self.clone();
        let mut acc = CellularAutomaton::identity(self.params);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(c, &i)| c == i as usize)
    }

    pub fn is_idempotent(&self) -> bool {
        self.images.iter().all(|&i| self.images[i as usize] == i)
    }

    pub fn is_invertible(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &i in &self.images {
            if std::mem::replace(&mut seen[i as usize], true) {
                return false;
            }
        }
        true
    }

    pub fn invert(&self) -> Result<CellularAutomaton> {
        let mut inverse = vec![u32::MAX; self.images.len()];
        for (c, &i) in self.images.iter().enumerate() {
            if inverse[i as usize] != u32::MAX {
                return Err(Error::NotInvertible);
            }
            inverse[i as usize] = c as u32;
        }
        Ok(CellularAutomaton {
            params: self.params,
            images: inverse,
        })
    }

    /// Number of distinct images.
    pub fn image_size(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        self.images
            .iter()
            .filter(|&&i| !std::mem::replace(&mut seen[i as usize], true))
            .count()
    }

    pub fn kernel(&self) -> KernelPartition {
        let mut fibers: BTreeMap<u32, Vec<Configuration>> = BTreeMap::new();
        for (c, &i) in self.images.iter().enumerate() {
            fibers.entry(i).or_default().push(Configuration(c as u32));
        }
        let mut blocks: Vec<Vec<Configuration>> = fibers.into_values().collect();
        blocks.sort();
        KernelPartition { blocks }
    }
}

impl Transformation for CellularAutomaton {
    fn then(&self, next: &Self) -> Self {
        debug_assert_eq!(self.params, next.params);
        self.compose_unchecked(next)
    }
}

impl fmt::Display for CellularAutomaton {
    /// Image table, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// True iff `table ∘ σ = σ ∘ table` pointwise.
pub fn commutes_with_shift(table: &[u32], params: &Params) -> Result<bool> {
    if table.len() != params.states() {
        return Err(Error::LengthMismatch {
            expected: params.states(),
            found: table.len(),
        });
    }
    if let Some(&bad) = table.iter().find(|&&i| i as usize >= params.states()) {
        return Err(Error::IndexOutOfRange {
            index: bad as usize,
            size: params.states(),
        });
    }
    Ok((0..params.states())
        .all(|c| table[params.shift_index(c)] as usize == params.shift_index(table[c] as usize)))
}

/// Fibers of a transformation: blocks sorted internally and by least member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelPartition {
    blocks: Vec<Vec<Configuration>>,
}

impl KernelPartition {
    pub fn blocks(&self) -> &[Vec<Configuration>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Non-singleton blocks only.
    pub fn merged_blocks(&self) -> impl Iterator<Item = &Vec<Configuration>> {
        self.blocks.iter().filter(|b| b.len() > 1)
    }
}
