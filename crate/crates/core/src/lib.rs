//! Exact computation in the semigroups `CA(Z_n; A)` of cellular automata
//! over a cyclic group: orbit structure, the wreath-product structure of the
//! invertible automata, explicit generating sets, rank formulas and the
//! closure engine that checks all of them.

pub mod arith;
pub mod automaton;
pub mod closure;
pub mod error;
pub mod io;
pub mod necklace;
pub mod perm;
pub mod rank;
pub mod search;
pub mod wreath;

pub use automaton::{
    commutes_with_shift, universe_size, CellularAutomaton, Configuration, KernelPartition,
    LocalRule, Params, DEFAULT_STATE_CAP,
};
pub use closure::{
    semigroup_closure, Closure, ClosureSummary, GeneratorSet, Transformation, Word,
    DEFAULT_CLOSURE_CAP,
};
pub use error::{Error, Result};
pub use io::{parse_generator, read_ca_table, read_generators, read_local_rule};
pub use necklace::{canonical_rotation, moebius, moreau_alpha, Orbit, OrbitStructure};
pub use perm::Perm;
pub use rank::{
    divisor_stats, edge_count, idempotent_tau, idempotent_tau_anchored, rank_ca_report,
    rank_ica_bounds, relative_rank_value, standard_generating_set, DivisibilityDigraph,
    DivisorStats, RankReport,
};
pub use search::{exhaustive_rank, exhaustive_relative_rank, redundant_generators, SearchOutcome};
pub use wreath::{
    ica_generating_set, ica_order, wreath_rank2_generators, z_alpha, IcaElement, WreathElement,
};
