//! Sparse QUBO formulations for equality and inequality cardinality
//! constraints.
//!
//! The conventional penalty `(Σx − K)²` couples every pair of variables and
//! yields a clique with `N(N−1)/2` quadratic terms. This crate instead
//! decomposes a constraint into a network of small local sub-constraints
//! over fresh auxiliary variables, cutting the edge count to `3N−5` for
//! one-hot constraints and to `O(N log N)` in the worst case for general
//! equalities, at the price of roughly doubling the variable count.
//! Inequalities ride along by placing independent binary slack variables in
//! the target sequence.
//!
//! The pipeline:
//! 1. [`constraint`]: validate an instance and build its target sequence.
//! 2. [`network`]: build a decomposition network (clique baseline, one-hot
//!    chain, or divide-and-conquer with a chosen halting depth).
//! 3. [`qubo`]: assemble the network into a QUBO model by expanding each
//!    sub-constraint's squared penalty.
//! 4. [`verify`]: prove exactness at desk scale (wiring, telescoping,
//!    routing witnesses, exhaustive sweeps).
//! 5. [`anneal`]: sample the model with deterministic simulated annealing.
//!
//! The crate is `no_std` (with `alloc`); everything is pure and immutable
//! after construction, so values can be shared freely across threads.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod anneal;
pub mod constraint;
pub mod network;
pub mod qubo;
pub mod rng;
pub mod verify;

pub use anneal::{
    anneal_reads, decode, energy_histogram, feasible_rate, simulated_anneal, AnnealParams, Sample,
    SampleSet,
};
pub use constraint::{ConstraintKind, ConstraintSpec, SpecError, TargetEntry, TargetSequence};
pub use network::{
    build_chain, build_clique_network, build_divide_and_conquer, enumerate_depths, select_network,
    BaseCaseError, CostModel, DepthLabel, DepthLimit, Network, Operand, SubConstraint, VarRef,
};
pub use qubo::{
    assemble, expand_sub_constraint, merge, model_stats, Assignment, FormulationStats, ModelError,
    PenaltyExpansion, QuboModel,
};
pub use verify::{
    brute_force_min, check_telescoping, check_wiring, exactness_scan, exhaustive_exactness,
    find_routing, ExactnessReport, Routing, TelescopingResidual, VerifyError, WiringViolation,
};
