//! Contextuality-by-Default analysis of content-context systems.
//!
//! Variables are indexed by content (what is measured) and context (the
//! conditions of measurement). A system is contextual when the contexts force
//! content-sharing variables further apart than they are in isolation: the
//! minimal total discrepancy over couplings of the whole system (Δ) exceeds
//! the sum of pairwise minimal discrepancies (Δ₀). All arithmetic is exact.

pub mod contextuality;
pub mod coupling;
pub mod cyclic;
pub mod epistemic;
pub mod error;
pub mod io;
pub mod lp;
pub mod rational;
pub mod system;

pub use contextuality::{
    analyze, analyze_deterministic, analyze_lp, is_deterministic, AnalysisReport, ConnectionReport,
    PairDelta,
};
pub use coupling::{isolated_delta, min_coupling_pair, transport_delta, JointTable};
pub use cyclic::{c2_criterion, detect_cyclic, C2Criterion, CycleLink, CyclicStructure};
pub use epistemic::{
    enumerate_variants, liar_mixture, liar_system, uniform_mixture, weighted_mixture,
    ContextConstraint, DeterministicVariant, EpistemicSpec, Relation,
};
pub use error::{Error, Result};
pub use lp::{
    build_coupling_lp, solve_lp, system_delta, LpInstance, LpSolution, LpStatus, Witness,
    DEFAULT_ATOM_CAP,
};
pub use rational::Rational;
pub use system::{
    connections, expectation, is_consistently_connected, marginal, validate_system, Cell,
    ConsistencyReport, Connection, ContentId, ContextBlock, ContextId, Marginal, OutcomeSet,
    Probability, SystemSpec, ValidatedSystem,
};
