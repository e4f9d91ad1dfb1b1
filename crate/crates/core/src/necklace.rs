//! Shift orbits (necklaces) of `A^n` and the counts of orbits by size.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize};
use crate::automaton::{Configuration, Params};
use crate::error::{Error, Result};

/// One shift orbit: `members[k] = representative · σ^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orbit {
    members: Vec<Configuration>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Least label in the orbit.
    pub fn representative(&self) -> Configuration {
        self.members[0]
    }

    pub fn members(&self) -> &[Configuration] {
        &self.members
    }

    pub fn contains(&self, c: Configuration) -> bool {
        self.members.contains(&c)
    }
}

/// Where a configuration sits: orbit `id` within the global ordering, and
/// `offset` such that it equals `rep · σ^offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitLocation {
    pub id: usize,
    pub offset: usize,
}

/// The partition of `A^n` into shift orbits. Orbits are ordered by size,
/// then by representative; within a size class that order gives the
/// coordinates `1..=α(d,q)` used by the wreath decomposition.
#[derive(Debug, Clone)]
pub struct OrbitStructure {
    params: Params,
    orbits: Vec<Orbit>,
    classes: BTreeMap<usize, Range<usize>>,
    orbit_of: Vec<u32>,
    offset_of: Vec<u8>,
}

impl OrbitStructure {
    /// Enumerates all orbits. The first unvisited label in ascending order
    /// is always the least member of its orbit.
    pub fn enumerate(params: Params) -> Self {
        let states = params.states();
        let mut visited = vec![false; states];
        let mut found: Vec<Orbit> = Vec::new();
        for c in 0..states {
            if visited[c] {
                continue;
            }
            let mut members = vec![Configuration(c as u32)];
            visited[c] = true;
            let mut next = params.shift_index(c);
            while next != c {
                visited[next] = true;
                members.push(Configuration(next as u32));
                next = params.shift_index(next);
            }
            found.push(Orbit { members });
        }
        // stable sort keeps representative order inside each size class
        found.sort_by_key(Orbit::size);

        let mut classes = BTreeMap::new();
        for d in divisors(params.n() as u64) {
            classes.insert(d as usize, 0..0);
        }
        let mut start = 0;
        while start < found.len() {
            let d = found[start].size();
            let end = start + found[start..].iter().take_while(|o| o.size() == d).count();
            classes.insert(d, start..end);
            start = end;
        }

        let mut orbit_of = vec![0u32; states];
        let mut offset_of = vec![0u8; states];
        for (id, orbit) in found.iter().enumerate() {
            for (k, m) in orbit.members.iter().enumerate() {
                orbit_of[m.index()] = id as u32;
                offset_of[m.index()] = k as u8;
            }
        }
        OrbitStructure {
            params,
            orbits: found,
            classes,
            orbit_of,
            offset_of,
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// All orbits, by size then representative.
    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    /// Divisors of `n`, ascending.
    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.keys().copied()
    }

    /// Orbits of exactly size `d`, in representative order.
    pub fn of_size(&self, d: usize) -> &[Orbit] {
        self.classes
            .get(&d)
            .map(|r| &self.orbits[r.clone()])
            .unwrap_or(&[])
    }

    /// Global id of the first orbit of size `d`.
    pub fn class_start(&self, d: usize) -> Option<usize> {
        self.classes.get(&d).map(|r| r.start)
    }

    /// Number of orbits of size `d`.
    pub fn alpha(&self, d: usize) -> usize {
        self.of_size(d).len()
    }

    pub fn alpha_map(&self) -> BTreeMap<usize, u64> {
        self.classes
            .iter()
            .map(|(&d, r)| (d, r.len() as u64))
            .collect()
    }

    pub fn locate(&self, c: Configuration) -> OrbitLocation {
        OrbitLocation {
            id: self.orbit_of[c.index()] as usize,
            offset: self.offset_of[c.index()] as usize,
        }
    }

    pub fn orbit_of(&self, c: Configuration) -> &Orbit {
        &self.orbits[self.orbit_of[c.index()] as usize]
    }

    pub fn listing(&self) -> OrbitListing {
        OrbitListing {
            n: self.params.n(),
            q: self.params.q(),
            orbits: self
                .orbits
                .iter()
                .map(|o| OrbitEntry {
                    size: o.size(),
                    rep: o.representative().0,
                    members: o.members.iter().map(|m| m.0).collect(),
                })
                .collect(),
            alpha: self.alpha_map(),
        }
    }
}

/// JSON form of an orbit structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitListing {
    pub n: usize,
    pub q: usize,
    pub orbits: Vec<OrbitEntry>,
    pub alpha: BTreeMap<usize, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub size: usize,
    pub rep: u32,
    pub members: Vec<u32>,
}

/// Least label among the rotations of `c`.
pub fn canonical_rotation(c: Configuration, params: &Params) -> Configuration {
    let start = c.index();
    let mut best = start;
    let mut next = params.shift_index(start);
    while next != start {
        best = best.min(next);
        next = params.shift_index(next);
    }
    Configuration(best as u32)
}

pub fn moebius(m: u64) -> Result<i64> {
    if m == 0 {
        return Err(Error::InvalidArgument("Möbius function of 0".into()));
    }
    let factors = factorize(m);
    if factors.iter().any(|&(_, a)| a > 1) {
        Ok(0)
    } else if factors.len().is_multiple_of(2) {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Number of shift orbits of size exactly `d` over `q` letters:
/// `(1/d) sum_{b | d} μ(d/b) q^b`.
pub fn moreau_alpha(d: u64, q: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("orbit size must be positive".into()));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("alphabet size {q} < 2")));
    }
    let overflow = || Error::Overflow(format!("{q}^{d} does not fit in 127 bits"));
    let mut sum: i128 = 0;
    for b in divisors(d) {
        let mu = moebius(d / b)?;
        if mu == 0 {
            continue;
        }
        let power = (q as i128)
            .checked_pow(u32::try_from(b).map_err(|_| overflow())?)
            .ok_or_else(overflow)?;
        sum += mu as i128 * power;
    }
    debug_assert_eq!(sum % d as i128, 0);
    u64::try_from(sum / d as i128).map_err(|_| Error::Overflow(format!("α({d},{q}) exceeds u64")))
}
