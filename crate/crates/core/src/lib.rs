//! Combinatorial analysis of degree-2 Abel data on the dual graph of a
//! nodal curve: exact-rational quasistability of multidegrees, correction
//! tables, the stratification of degree-0 polarizations, per-edge-pair
//! resolution choices, the singular locus, and minimal symmetric blowup
//! sequences.
//!
//! All decision paths run in exact integer or rational arithmetic; floating
//! point is never consulted. Types are immutable after construction and all
//! operations are pure functions of their inputs.

pub mod blowup;
pub mod error;
pub mod graph;
pub mod quasistability;
pub mod resolution;
pub mod strata;

pub use blowup::{search_minimal_symmetric, verify, BlowupSequence, Verdict};
pub use error::{Error, Result};
pub use graph::{DualGraph, SubdividedGraph, VertexFlow, VertexSet, MAX_VERTICES};
pub use quasistability::{
    correction_table, is_quasistable, quasistable_representative, unit_multidegree, AbelData,
    CorrectionTable, Multidegree, Polarization, Rat,
};
pub use resolution::{
    admissible_at, build_s_functions, mirror, pair_candidates, quasistable_at, reduce,
    singular_locus, EpsilonMode, PairChoice, QTable, SingularLocusReport,
};
pub use strata::{
    enumerate_stratum_representatives, same_stratum_signature, signature, StratumSignature,
};
