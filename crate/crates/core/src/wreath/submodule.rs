//! Exhaustive search for the `Sym_α`-invariant subgroups of `(Z_p)^α`.
//!
//! Every invariant subgroup is the sum of the cyclic submodules generated
//! by its own elements, so enumerating the submodule generated by each
//! vector and closing the result under sums finds all of them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// Default bound on `p^α`.
pub const DEFAULT_SUBMODULE_CAP: usize = 729;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubmoduleKind {
    /// Constant vectors `(a, ..., a)`.
    Diagonal,
    /// Vectors whose entries sum to zero.
    ZeroSum,
    /// Both at once, which happens only when `p = α = 2`.
    DiagonalAndZeroSum,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submodule {
    pub kind: SubmoduleKind,
    pub size: usize,
    pub basis: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmoduleReport {
    pub p: usize,
    pub alpha: usize,
    /// Proper nonzero invariant submodules, by size then basis.
    pub submodules: Vec<Submodule>,
    /// `p | α`, so the diagonal lies inside the zero-sum submodule.
    pub diagonal_in_zero_sum: bool,
}

impl SubmoduleReport {
    pub fn kinds(&self) -> Vec<SubmoduleKind> {
        self.submodules.iter().map(|s| s.kind).collect()
    }
}

struct Space {
    p: usize,
    alpha: usize,
    size: usize,
}

impl Space {
    fn digits(&self, mut x: usize) -> Vec<u32> {
        (0..self.alpha)
            .map(|_| {
                let d = (x % self.p) as u32;
                x /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u32]) -> usize {
        digits
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * self.p + d as usize)
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut weight = 1;
        for _ in 0..self.alpha {
            out += ((a % self.p + b % self.p) % self.p) * weight;
            a /= self.p;
            b /= self.p;
            weight *= self.p;
        }
        out
    }

    /// Images of `x` under the generators `(1,2)` and `(1,2,...,α)` of
    /// `Sym_α` acting on coordinates.
    fn neighbours(&self, x: usize) -> [usize; 2] {
        let mut t = self.digits(x);
        t.swap(0, 1);
        let mut c = self.digits(x);
        c.rotate_right(1);
        [self.encode(&t), self.encode(&c)]
    }

    /// Smallest subgroup containing `seeds` and closed under the action.
    fn span(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut member = vec![false; self.size];
        member[0] = true;
        let mut elements = vec![0usize];
        let mut pending: Vec<usize> = seeds.into_iter().collect();
        while let Some(x) = pending.pop() {
            if member[x] {
                continue;
            }
            // adjoin x: the subgroup grows to elements + <x>
            let mut added = Vec::new();
            let mut multiple = x;
            while multiple != 0 {
                for &e in &elements {
                    let s = self.add(e, multiple);
                    if !member[s] {
                        member[s] = true;
                        added.push(s);
                    }
                }
                multiple = self.add(multiple, x);
            }
            for &a in &added {
                pending.extend(self.neighbours(a));
            }
            elements.extend(added);
        }
        member
    }

    /// Greedy basis: least vectors not in the span of the earlier ones.
    fn basis(&self, member: &[bool]) -> Vec<Vec<u32>> {
        let mut basis = Vec::new();
        let mut spanned = vec![false; self.size];
        spanned[0] = true;
        let mut elements = vec![0usize];
        for x in 0..self.size {
            if !member[x] || spanned[x] {
                continue;
            }
            basis.push(self.digits(x));
            let mut added = Vec::new();
            let mut multiple = x;
            while multiple != 0 {
                for &e in &elements {
                    let s = self.add(e, multiple);
                    if !spanned[s] {
                        spanned[s] = true;
                        added.push(s);
                    }
                }
                multiple = self.add(multiple, x);
            }
            elements.extend(added);
        }
        basis
    }

    fn classify(&self, member: &[bool]) -> SubmoduleKind {
        let diagonal: Vec<bool> = {
            let mut d = vec![false; self.size];
            for a in 0..self.p as u32 {
                d[self.encode(&vec![a; self.alpha])] = true;
            }
            d
        };
        let zero_sum: Vec<bool> = (0..self.size)
            .map(|x| (self.digits(x).iter().sum::<u32>() as usize).is_multiple_of(self.p))
            .collect();
        match (member == diagonal.as_slice(), member == zero_sum.as_slice()) {
            (true, true) => SubmoduleKind::DiagonalAndZeroSum,
            (true, false) => SubmoduleKind::Diagonal,
            (false, true) => SubmoduleKind::ZeroSum,
            (false, false) => SubmoduleKind::Other,
        }
    }
}

/// All proper nonzero `Sym_α`-invariant subgroups of `(Z_p)^α`, found by
/// brute force. Requires `p` prime, `α >= 2` and `p^α <= cap`.
pub fn invariant_submodules(p: usize, alpha: usize, cap: usize) -> Result<SubmoduleReport> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if alpha < 2 {
        return Err(Error::InvalidArgument(format!(
            "alpha must be at least 2, got {alpha}"
        )));
    }
    let size = (p as u128)
        .checked_pow(alpha as u32)
        .filter(|&s| s <= cap as u128)
        .ok_or(Error::CapExceeded { cap, partial: 0 })? as usize;
    let space = Space { p, alpha, size };

    let mut found: BTreeSet<Vec<bool>> = (0..size).map(|x| space.span([x])).collect();
    loop {
        let current: Vec<Vec<bool>> = found.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                let seeds = (0..size).filter(|&x| a[x] || b[x]);
                grew |= found.insert(space.span(seeds));
            }
        }
        if !grew {
            break;
        }
    }

    let mut submodules: Vec<Submodule> = found
        .iter()
        .map(|member| (member, member.iter().filter(|&&m| m).count()))
        .filter(|&(_, count)| count > 1 && count < size)
        .map(|(member, count)| Submodule {
            kind: space.classify(member),
            size: count,
            basis: space.basis(member),
        })
        .collect();
    submodules.sort_by(|a, b| (a.size, &a.basis).cmp(&(b.size, &b.basis)));
    Ok(SubmoduleReport {
        p,
        alpha,
        submodules,
        diagonal_in_zero_sum: alpha.is_multiple_of(p),
    })
}
