use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{wreath_order, wreath_rank2_generators, z_alpha, WreathElement};
use crate::arith::{divisors, factorial, factorize};
use crate::automaton::{CellularAutomaton, Configuration, Params};
use crate::closure::Transformation;
use crate::error::{Error, Result};
use crate::necklace::{moreau_alpha, OrbitStructure};
use crate::perm::Perm;

/// Factor shapes `(d, α(d,q))` for the non-trivial divisors `d` of `n`,
/// ascending, plus the alphabet size for the `Sym_q` factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcaShape {
    pub factors: Vec<(usize, usize)>,
    pub q: usize,
}

impl IcaShape {
    pub fn of(orbits: &OrbitStructure) -> Self {
        IcaShape {
            factors: orbits
                .sizes()
                .filter(|&d| d > 1)
                .map(|d| (d, orbits.alpha(d)))
                .collect(),
            q: orbits.params().q(),
        }
    }

    fn position(&self, d: usize) -> Option<usize> {
        self.factors.iter().position(|&(size, _)| size == d)
    }
}

pub fn ica_shape(params: &Params) -> Result<IcaShape> {
    let factors = divisors(params.n() as u64)
        .into_iter()
        .skip(1)
        .map(|d| {
            let alpha = moreau_alpha(d, params.q() as u64)?;
            Ok((d as usize, alpha as usize))
        })
        .collect::<Result<_>>()?;
    Ok(IcaShape {
        factors,
        q: params.q(),
    })
}

/// Coordinates of an invertible automaton in
/// `(Z_d1 ≀ Sym_α1) × ... × (Z_dl ≀ Sym_αl) × Sym_q`.
///
/// For orbits of size `d` indexed by ascending representative, the factor
/// for `d` has `φ(s) = t` when orbit `s` is sent onto orbit `t`, and
/// `v_s = k` when the representative of `s` lands on `rep_t · σ^k`. The
/// `Sym_q` part permutes the constant configurations in symbol order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IcaElement {
    pub factors: Vec<WreathElement>,
    pub constant_perm: Perm,
}

impl IcaElement {
    pub fn identity(shape: &IcaShape) -> Self {
        IcaElement {
            factors: shape
                .factors
                .iter()
                .map(|&(d, alpha)| WreathElement::identity(d, alpha))
                .collect(),
            constant_perm: Perm::identity(shape.q),
        }
    }

    pub fn shape(&self) -> IcaShape {
        IcaShape {
            factors: self.factors.iter().map(|f| (f.d(), f.alpha())).collect(),
            q: self.constant_perm.degree(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(WreathElement::is_identity) && self.constant_perm.is_identity()
    }

    /// Factor-wise product.
    pub fn multiply(&self, other: &IcaElement) -> Result<IcaElement> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(
                "ICA elements of different shapes".into(),
            ));
        }
        Ok(self.then(other))
    }

    pub fn decompose(ca: &CellularAutomaton, orbits: &OrbitStructure) -> Result<IcaElement> {
        orbits.params().check_same(ca.params())?;
        if !ca.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let params = orbits.params();
        let mut factors = Vec::new();
        for d in orbits.sizes().filter(|&d| d > 1) {
            let class = orbits.of_size(d);
            let start = orbits.class_start(d).expect("size class exists");
            let mut v = Vec::with_capacity(class.len());
            let mut phi = Vec::with_capacity(class.len());
            for orbit in class {
                let image = Configuration(ca.image(orbit.representative().index()) as u32);
                let loc = orbits.locate(image);
                if orbits.orbits()[loc.id].size() != d {
                    return Err(Error::ShapeMismatch(format!(
                        "orbit of size {d} sent to an orbit of size {}",
                        orbits.orbits()[loc.id].size()
                    )));
                }
                phi.push(loc.id - start);
                v.push(loc.offset as u32);
            }
            factors.push(WreathElement::new(d, v, Perm::from_images(phi)?)?);
        }
        let unit = params.constant(1);
        let constant_perm = (0..params.q())
            .map(|a| ca.image(params.constant(a)) / unit)
            .collect();
        Ok(IcaElement {
            factors,
            constant_perm: Perm::from_images(constant_perm)?,
        })
    }

    /// The unique invertible automaton with these coordinates.
    pub fn compose(&self, orbits: &OrbitStructure) -> Result<CellularAutomaton> {
        let shape = IcaShape::of(orbits);
        if self.shape() != shape {
            return Err(Error::ShapeMismatch(format!(
                "element shape {:?} does not match orbit structure {:?}",
                self.shape(),
                shape
            )));
        }
        let params = *orbits.params();
        let mut table = vec![0u32; params.states()];
        for factor in &self.factors {
            let d = factor.d();
            let class = orbits.of_size(d);
            for (s, orbit) in class.iter().enumerate() {
                let target = &class[factor.phi().image(s)];
                let shift = factor.v()[s] as usize;
                for (m, member) in orbit.members().iter().enumerate() {
                    table[member.index()] = target.members()[(shift + m) % d].0;
                }
            }
        }
        for a in 0..params.q() {
            table[params.constant(a)] = params.constant(self.constant_perm.image(a)) as u32;
        }
        Ok(CellularAutomaton::from_table_unchecked(params, table))
    }
}

impl Transformation for IcaElement {
    fn then(&self, next: &Self) -> Self {
        IcaElement {
            factors: self
                .factors
                .iter()
                .zip(&next.factors)
                .map(|(a, b)| a.then(b))
                .collect(),
            constant_perm: self.constant_perm.then(&next.constant_perm),
        }
    }
}

/// `|ICA(Z_n; A)| = q! · Π d^α(d,q) · α(d,q)!` over non-trivial divisors.
pub fn ica_order(params: &Params) -> Result<BigUint> {
    let shape = ica_shape(params)?;
    Ok(shape
        .factors
        .iter()
        .fold(factorial(params.q() as u64), |acc, &(d, alpha)| {
            acc * wreath_order(d, alpha)
        }))
}

/// Abstract generators of `ICA(Z_n; A)`.
///
/// When `n` has an odd prime divisor `p` (the smallest is used), the factor
/// for `p` is paired with `Sym_q` through `((e^1; z_α), (1,2))` and
/// `((e^1; (1,2)), z_q)`. Otherwise `n = 2^k` and, unless `q = 2`, the
/// factor for 2 is paired with `Sym_q` through the three elements
/// `((e^1; z_α), id)`, `((e^1; (1,2)), z_q)`, `((e^0; id), (1,2))`.
/// Remaining factors get `(e^1; z_α)` and `(e^1; (1,2))`, except a factor
/// with `α = 1` (only `d = q = 2`), which is cyclic and gets `(e^1; id)`;
/// for `q = 2`, `n = 2^k` the `Sym_2` factor gets its own transposition.
pub fn ica_generators(params: &Params) -> Result<Vec<IcaElement>> {
    let shape = ica_shape(params)?;
    let q = params.q();
    let identity = IcaElement::identity(&shape);
    let swap_constants = Perm::transposition(q, 0, 1)?;
    let with = |slot: usize, factor: WreathElement, constants: Perm| {
        let mut e = identity.clone();
        e.factors[slot] = factor;
        e.constant_perm = constants;
        e
    };

    let odd_prime = factorize(params.n() as u64)
        .into_iter()
        .map(|(p, _)| p as usize)
        .find(|p| p % 2 == 1);
    let two_slot = shape.position(2);

    let mut gens = Vec::new();
    let paired = match (odd_prime, two_slot) {
        (Some(p), _) => {
            let slot = shape.position(p).expect("prime divisor has a factor");
            let alpha = shape.factors[slot].1;
            let z = z_alpha(alpha)?;
            let t = Perm::transposition(alpha, 0, 1)?;
            gens.push(with(
                slot,
                WreathElement::basis(p, 0, z)?,
                swap_constants.clone(),
            ));
            gens.push(with(slot, WreathElement::basis(p, 0, t)?, z_alpha(q)?));
            Some(slot)
        }
        (None, Some(slot)) if shape.factors[slot].1 >= 2 => {
            let alpha = shape.factors[slot].1;
            let z = z_alpha(alpha)?;
            let t = Perm::transposition(alpha, 0, 1)?;
            gens.push(with(
                slot,
                WreathElement::basis(2, 0, z)?,
                Perm::identity(q),
            ));
            gens.push(with(slot, WreathElement::basis(2, 0, t)?, z_alpha(q)?));
            let mut v3 = identity.clone();
            v3.constant_perm = swap_constants.clone();
            gens.push(v3);
            Some(slot)
        }
        (None, _) => {
            // q = 2 and n = 2^k: Sym_2 stands alone
            let mut e = identity.clone();
            e.constant_perm = swap_constants.clone();
            gens.push(e);
            None
        }
    };

    for (slot, &(d, alpha)) in shape.factors.iter().enumerate() {
        if Some(slot) == paired {
            continue;
        }
        if alpha == 1 {
            let mut e = identity.clone();
            e.factors[slot] = WreathElement::basis(d, 0, Perm::identity(1))?;
            gens.push(e);
        } else {
            let (x, y) = wreath_rank2_generators(d, alpha)?;
            let mut ex = identity.clone();
            ex.factors[slot] = x;
            let mut ey = identity.clone();
            ey.factors[slot] = y;
            gens.push(ex);
            gens.push(ey);
        }
    }
    Ok(gens)
}

/// [`ica_generators`] realized as automata.
pub fn ica_generating_set(params: &Params) -> Result<Vec<CellularAutomaton>> {
    let orbits = OrbitStructure::enumerate(*params);
    ica_generators(params)?
        .iter()
        .map(|g| g.compose(&orbits))
        .collect()
}
