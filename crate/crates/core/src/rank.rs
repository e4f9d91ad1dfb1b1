//! Divisor statistics, the divisibility digraph, the collapsing idempotents
//! and the rank bounds for `CA(Z_n; A)` and its group of units.

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, power_of_two_exponent};
use crate::automaton::{CellularAutomaton, Configuration, Params};
use crate::error::{Error, Result};
use crate::necklace::{Orbit, OrbitStructure};
use crate::wreath::ica_generating_set;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorStats {
    pub n: u64,
    pub divisors: Vec<u64>,
    /// Number of divisors, 1 and `n` included.
    pub di: u64,
    /// Number of even divisors.
    pub di_plus: u64,
}

pub fn divisor_stats(n: u64) -> Result<DivisorStats> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "n must be at least 2, got {n}"
        )));
    }
    let divisors = divisors(n);
    let di = divisors.len() as u64;
    let di_plus = divisors.iter().filter(|&&d| d % 2 == 0).count() as u64;
    Ok(DivisorStats {
        n,
        divisors,
        di,
        di_plus,
    })
}

/// Vertices are the divisors of `n`; `(s, t)` is an edge when `t | s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityDigraph {
    pub vertices: Vec<u64>,
    pub edges: Vec<(u64, u64)>,
}

impl DivisibilityDigraph {
    pub fn new(n: u64) -> Result<Self> {
        let vertices = divisor_stats(n)?.divisors;
        let edges = vertices
            .iter()
            .flat_map(|&s| {
                vertices
                    .iter()
                    .filter(move |&&t| s % t == 0)
                    .map(move |&t| (s, t))
            })
            .collect();
        Ok(DivisibilityDigraph { vertices, edges })
    }

    pub fn edge_count(&self) -> u64 {
        self.edges.len() as u64
    }
}

/// `E(n) = Π (a_i+1)(a_i+2)/2` over the prime factorization of `n`.
pub fn edge_count(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "n must be at least 2, got {n}"
        )));
    }
    Ok(factorize(n)
        .iter()
        .map(|&(_, a)| (a as u64 + 1) * (a as u64 + 2) / 2)
        .product())
}

/// The idempotent sending `source.rep · σ^k` to `target.rep · σ^k` for
/// every `k` and fixing everything else.
pub fn idempotent_tau(
    params: &Params,
    source: &Orbit,
    target: &Orbit,
) -> Result<CellularAutomaton> {
    idempotent_tau_anchored(params, source.representative(), target.representative())
}

/// The idempotent sending `from · σ^k` to `to · σ^k` for every `k` and
/// fixing everything else; `from` and `to` may be any members of their
/// orbits.
pub fn idempotent_tau_anchored(
    params: &Params,
    from: Configuration,
    to: Configuration,
) -> Result<CellularAutomaton> {
    for c in [from, to] {
        if c.index() >= params.states() {
            return Err(Error::IndexOutOfRange {
                index: c.index(),
                size: params.states(),
            });
        }
    }
    let rotations = |start: usize| {
        let mut members = vec![start];
        let mut c = params.shift_index(start);
        while c != start {
            members.push(c);
            c = params.shift_index(c);
        }
        members
    };
    let source = rotations(from.index());
    let target = rotations(to.index());
    if source.contains(&to.index()) {
        return Err(Error::SameOrbit);
    }
    if source.len() % target.len() != 0 {
        return Err(Error::NonDividingSizes {
            from: source.len(),
            target: target.len(),
        });
    }
    let mut table: Vec<u32> = (0..params.states() as u32).collect();
    for (k, &m) in source.iter().enumerate() {
        table[m] = target[k % target.len()] as u32;
    }
    CellularAutomaton::from_table(*params, table)
}

fn degenerate(n: u64, q: u64) -> bool {
    q == 2 && n.is_multiple_of(2)
}

/// Relative rank of the units in `CA(Z_n; A)`: `E(n) - 1` when `q = 2` and
/// `n` is even, `E(n)` otherwise.
pub fn relative_rank_value(n: u64, q: u64) -> Result<u64> {
    check(n, q)?;
    let e = edge_count(n)?;
    Ok(if degenerate(n, q) { e - 1 } else { e })
}

fn check(n: u64, q: u64) -> Result<()> {
    if n < 2 || q < 2 {
        return Err(Error::InvalidParams {
            n: n as usize,
            q: q as usize,
        });
    }
    Ok(())
}

/// Lower and upper bounds on the rank of `ICA(Z_n; A)`.
pub fn rank_ica_bounds(n: u64, q: u64) -> Result<(u64, u64)> {
    check(n, q)?;
    if let Some(k) = power_of_two_exponent(n) {
        let k = k as u64;
        let exact = if q == 2 { 2 * k } else { 2 * k + 1 };
        return Ok((exact, exact));
    }
    let stats = divisor_stats(n)?;
    let base = if degenerate(n, q) {
        stats.di + stats.di_plus - 1
    } else {
        stats.di + stats.di_plus
    };
    let slack = (stats.di).saturating_sub(stats.di_plus + 2);
    Ok((base, base + slack))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub n: u64,
    pub q: u64,
    pub ica_lower: u64,
    pub ica_upper: u64,
    pub relative_rank: u64,
    pub rank_lower: u64,
    pub rank_upper: u64,
    pub exact: bool,
    pub epsilon_max: u64,
    pub di: u64,
    pub di_plus: u64,
    #[serde(rename = "E")]
    pub e: u64,
}

impl RankReport {
    pub fn rank(&self) -> Option<u64> {
        self.exact.then_some(self.rank_lower)
    }
}

/// Rank bounds for `CA(Z_n; A)`: ICA bounds plus the relative rank. Only
/// the factorization of `n` is needed, so `n` may be large.
pub fn rank_ca_report(n: u64, q: u64) -> Result<RankReport> {
    let (ica_lower, ica_upper) = rank_ica_bounds(n, q)?;
    let relative_rank = relative_rank_value(n, q)?;
    let stats = divisor_stats(n)?;
    let rank_lower = ica_lower + relative_rank;
    let rank_upper = ica_upper + relative_rank;
    Ok(RankReport {
        n,
        q,
        ica_lower,
        ica_upper,
        relative_rank,
        rank_lower,
        rank_upper,
        exact: rank_lower == rank_upper,
        epsilon_max: ica_upper - ica_lower,
        di: stats.di,
        di_plus: stats.di_plus,
        e: edge_count(n)?,
    })
}

/// The closed forms for `n = p`, `n = 2^k` and `n = 2^k p` (`p` an odd
/// prime); `None` for other `n`.
pub fn closed_form_rank(n: u64, q: u64) -> Option<u64> {
    if n < 2 || q < 2 {
        return None;
    }
    let bonus = |small: u64, large: u64| if q == 2 { small } else { large };
    let factors = factorize(n);
    match factors.as_slice() {
        [(p, 1)] if *p > 2 => Some(5),
        [(2, k)] => {
            let k = *k as u64;
            Some(k * (k + 7) / 2 + bonus(0, 2))
        }
        [(2, k), (p, 1)] if *p > 2 => {
            let k = *k as u64;
            Some(k * (3 * k + 17) / 2 + bonus(3, 5))
        }
        _ => None,
    }
}

/// ICA rank for `n = 2^k p`: `4k + 1` when `q = 2`, `4k + 2` otherwise.
pub fn closed_form_ica_rank(n: u64, q: u64) -> Option<u64> {
    match factorize(n).as_slice() {
        [(2, k), (p, 1)] if *p > 2 && q >= 2 => Some(4 * *k as u64 + if q == 2 { 1 } else { 2 }),
        _ => None,
    }
}

/// One collapsing idempotent per edge `(d_i, d_j)` of the divisibility
/// digraph: the first orbit of size `d_i` onto the first orbit of size
/// `d_j`; for a loop `(d, d)`, the second orbit of size `d` onto the first.
/// The loop at 2 is skipped when `q = 2` since there is a single orbit of
/// size 2.
pub fn edge_idempotents(orbits: &OrbitStructure) -> Result<Vec<CellularAutomaton>> {
    let params = orbits.params();
    let digraph = DivisibilityDigraph::new(params.n() as u64)?;
    let mut out = Vec::new();
    for &(s, t) in &digraph.edges {
        let (s, t) = (s as usize, t as usize);
        let sources = orbits.of_size(s);
        let targets = orbits.of_size(t);
        let (source, target) = if s == t {
            if sources.len() < 2 {
                continue;
            }
            (&sources[1], &sources[0])
        } else {
            (&sources[0], &targets[0])
        };
        out.push(idempotent_tau(params, source, target)?);
    }
    Ok(out)
}

/// Generators of `ICA(Z_n; A)` followed by the edge idempotents; generates
/// all of `CA(Z_n; A)`.
pub fn standard_generating_set(params: &Params) -> Result<Vec<CellularAutomaton>> {
    let orbits = OrbitStructure::enumerate(*params);
    let mut gens = ica_generating_set(params)?;
    gens.extend(edge_idempotents(&orbits)?);
    Ok(gens)
}

/// CSV row for batch tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRow {
    pub n: u64,
    pub q: u64,
    pub di: u64,
    pub di_plus: u64,
    #[serde(rename = "E")]
    pub e: u64,
    pub ica_lower: u64,
    pub ica_upper: u64,
    pub relative_rank: u64,
    pub rank_lower: u64,
    pub rank_upper: u64,
    pub exact: bool,
}

impl From<&RankReport> for RankRow {
    fn from(r: &RankReport) -> Self {
        RankRow {
            n: r.n,
            q: r.q,
            di: r.di,
            di_plus: r.di_plus,
            e: r.e,
            ica_lower: r.ica_lower,
            ica_upper: r.ica_upper,
            relative_rank: r.relative_rank,
            rank_lower: r.rank_lower,
            rank_upper: r.rank_upper,
            exact: r.exact,
        }
    }
}

/// Rows as CSV with a header line.
pub fn rows_to_csv(rows: &[RankRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<RankRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .enumerate()
        .map(|(i, r)| {
            r.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect()
}
