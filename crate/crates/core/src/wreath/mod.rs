//! Generalized symmetric groups `Z_d ≀ Sym_α` and the decomposition of the
//! invertible cellular automata into a direct product of them.
//!
//! An element `(v; φ)` pairs a vector `v ∈ (Z_d)^α` with a permutation `φ`
//! of the `α` coordinates. With maps on the right the product is
//! `(v; φ)(w; ψ) = (v + w^φ; φψ)` where `(w^φ)_s = w_(φ(s))`. Coordinates
//! and permutation points are 0-based throughout, so the first basis vector
//! is index 0.

mod ica;
mod submodule;

pub use ica::{ica_generating_set, ica_generators, ica_order, ica_shape, IcaElement, IcaShape};
pub use submodule::{
    invariant_submodules, Submodule, SubmoduleKind, SubmoduleReport, DEFAULT_SUBMODULE_CAP,
};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::factorial;
use crate::closure::Transformation;
use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WreathWire", into = "WreathWire")]
pub struct WreathElement {
    d: usize,
    v: Vec<u32>,
    phi: Perm,
}

/// JSON form: `{"d", "alpha", "v", "phi"}` with `phi` as a 0-based image table.
#[derive(Serialize, Deserialize)]
struct WreathWire {
    d: usize,
    alpha: usize,
    v: Vec<u32>,
    phi: Vec<usize>,
}

impl TryFrom<WreathWire> for WreathElement {
    type Error = Error;

    fn try_from(w: WreathWire) -> Result<Self> {
        if w.v.len() != w.alpha {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for alpha {}",
                w.v.len(),
                w.alpha
            )));
        }
        WreathElement::new(w.d, w.v, Perm::from_images(w.phi)?)
    }
}

impl From<WreathElement> for WreathWire {
    fn from(e: WreathElement) -> Self {
        WreathWire {
            d: e.d,
            alpha: e.v.len(),
            v: e.v,
            phi: e.phi.into(),
        }
    }
}

impl WreathElement {
    pub fn new(d: usize, v: Vec<u32>, phi: Perm) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        if v.len() != phi.degree() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} with a permutation of degree {}",
                v.len(),
                phi.degree()
            )));
        }
        if let Some(&bad) = v.iter().find(|&&x| x as usize >= d) {
            return Err(Error::InvalidArgument(format!("entry {bad} not in Z_{d}")));
        }
        Ok(WreathElement { d, v, phi })
    }

    /// `(e^0; id)`.
    pub fn identity(d: usize, alpha: usize) -> Self {
        WreathElement {
            d,
            v: vec![0; alpha],
            phi: Perm::identity(alpha),
        }
    }

    /// `(e^i; φ)` with `e^i` the `i`-th (0-based) basis vector.
    pub fn basis(d: usize, i: usize, phi: Perm) -> Result<Self> {
        let mut v = vec![0; phi.degree()];
        *v.get_mut(i)
            .ok_or_else(|| Error::InvalidArgument(format!("basis index {i} out of range")))? =
            1 % d as u32;
        WreathElement::new(d, v, phi)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> usize {
        self.v.len()
    }

    pub fn v(&self) -> &[u32] {
        &self.v
    }

    pub fn phi(&self) -> &Perm {
        &self.phi
    }

    pub fn is_identity(&self) -> bool {
        self.v.iter().all(|&x| x == 0) && self.phi.is_identity()
    }

    pub fn multiply(&self, other: &WreathElement) -> Result<WreathElement> {
        if self.d != other.d || self.alpha() != other.alpha() {
            return Err(Error::ShapeMismatch(format!(
                "Z_{} wr Sym_{} times Z_{} wr Sym_{}",
                self.d,
                self.alpha(),
                other.d,
                other.alpha()
            )));
        }
        Ok(self.multiply_unchecked(other))
    }

    fn multiply_unchecked(&self, other: &WreathElement) -> WreathElement {
        let d = self.d as u32;
        let v = (0..self.alpha())
            .map(|s| (self.v[s] + other.v[self.phi.image(s)]) % d)
            .collect();
        WreathElement {
            d: self.d,
            v,
            phi: self.phi.then(&other.phi),
        }
    }

    pub fn inverse(&self) -> WreathElement {
        // w_(φ(s)) = -v_s
        let d = self.d as u32;
        let mut w = vec![0; self.alpha()];
        for s in 0..self.alpha() {
            w[self.phi.image(s)] = (d - self.v[s] % d) % d;
        }
        WreathElement {
            d: self.d,
            v: w,
            phi: self.phi.inverse(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> WreathElement {
        let mut acc = WreathElement::identity(self.d, self.alpha());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.multiply_unchecked(&base);
            }
            base = base.multiply_unchecked(&base);
            exp >>= 1;
        }
        acc
    }
}

impl Transformation for WreathElement {
    fn then(&self, next: &Self) -> Self {
        debug_assert_eq!((self.d, self.alpha()), (next.d, next.alpha()));
        self.multiply_unchecked(next)
    }
}

/// `|Z_d ≀ Sym_α| = d^α · α!`.
pub fn wreath_order(d: usize, alpha: usize) -> BigUint {
    BigUint::from(d).pow(alpha as u32) * factorial(alpha as u64)
}

/// The permutation `z_α`: the full cycle `(1,2,...,α)` for odd `α`, and
/// `(2,3,...,α)` fixing the first point for even `α` (written 1-based; the
/// returned table is 0-based). Its order is always odd.
pub fn z_alpha(alpha: usize) -> Result<Perm> {
    if alpha < 2 {
        return Err(Error::InvalidArgument(format!(
            "z_alpha needs alpha >= 2, got {alpha}"
        )));
    }
    let points: Vec<usize> = if alpha % 2 == 1 {
        (0..alpha).collect()
    } else {
        (1..alpha).collect()
    };
    Perm::cycle(alpha, &points)
}

/// `x = (e^1; z_α)` and `y = (e^1; (1,2))`, which generate `Z_d ≀ Sym_α`.
pub fn wreath_rank2_generators(d: usize, alpha: usize) -> Result<(WreathElement, WreathElement)> {
    if d < 2 || alpha < 2 {
        return Err(Error::InvalidArgument(format!(
            "two-generator form needs d, alpha >= 2 (got d={d}, alpha={alpha})"
        )));
    }
    let x = WreathElement::basis(d, 0, z_alpha(alpha)?)?;
    let y = WreathElement::basis(d, 0, Perm::transposition(alpha, 0, 1)?)?;
    Ok((x, y))
}
