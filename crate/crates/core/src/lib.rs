//! Generalized derangement graphs.
//!
//! A permutation `σ ∈ S_n` is a *k-derangement* when the induced map on
//! k-subsets of `{1, ..., n}` fixes no subset. `Γ_{k,n}` is the Cayley graph
//! of `S_n` whose connection set is the k-derangements. This crate counts
//! k-derangements, builds and searches `Γ_{k,n}`, and produces and checks
//! clique, independent-set and coloring certificates.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the command
//! line and wall-clock budgets live in the `derange` crate.

#![no_std]

extern crate alloc;

pub mod cayley;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod field;
pub mod math;
pub mod permutation;
pub mod search;

pub use cayley::{
    factor_adjacent_transposition, position_agreement_adjacent, rank, unrank, AdjacencyMode,
    CayleyGraph, Components, ConnectionSet, FactorCase, Factorization, VertexId,
};
pub use constructions::{
    affine_arrangement, build_clique, build_independent_set, coset_coloring, frankl_deza_check,
    theoretical_values, verify_clique, verify_coloring, verify_independent_set, AdjacencyCheck,
    CliqueCertificate, ColoringCertificate, IndependentSetCertificate, Provenance,
    TheoreticalValues, Violation,
};
pub use enumeration::{
    class_size, count_k_derangements, deranged_cycle_types, enumerate_k_derangements, partitions,
    predict_eulerian, CycleClassReport, PartitionOfN,
};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use permutation::{
    has_subpartition, CycleType, KSubset, KSubsets, LexPermutations, Permutation,
};
pub use search::{
    grow_clique_heuristic, max_clique, max_independent_set, Clock, NoClock, SearchBudget,
    SearchMode, SearchResult, Witness,
};
