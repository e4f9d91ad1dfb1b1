use std::fmt;

use serde::{Deserialize, Serialize};

use crate::closure::Transformation;
use crate::error::{Error, Result};

/// A permutation of `{0, ..., degree-1}` in image-table form, acting on the
/// right: `a.then(&b)` maps `i` to `b[a[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation"
                )));
            }
        }
        Ok(Perm(images))
    }

    /// The cycle `points[0] -> points[1] -> ... -> points[0]`.
    pub fn cycle(degree: usize, points: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for (k, &a) in points.iter().enumerate() {
            if a >= degree {
                return Err(Error::InvalidArgument(format!(
                    "point {a} out of range for degree {degree}"
                )));
            }
            images[a] = points[(k + 1) % points.len()];
        }
        Perm::from_images(images)
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Self> {
        Perm::cycle(degree, &[a, b])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn pow(&self, exp: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, each starting at its least
    /// point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.0[start];
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.0[next];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl Transformation for Perm {
    fn then(&self, next: &Self) -> Self {
        debug_assert_eq!(self.degree(), next.degree());
        Perm(self.0.iter().map(|&i| next.0[i]).collect())
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.0
    }
}

impl fmt::Display for Perm {
    /// Cycle notation on 0-based points; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(","))?;
        }
        Ok(())
    }
}
