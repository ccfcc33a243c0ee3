//! `oraclesim` — a simulator for oracle quantum algorithms in an extended
//! representation that carries the oracle's choice in a register of its own.
//!
//! A problem instance is a finite family of functions f_k together with a
//! solution map. The joint state of the choice register K, the argument
//! register X, and the result register V is stored block-by-block in K,
//! since every operation of interest is diagonal in K. On top of the state
//! machinery the crate provides:
//!
//! - the search, constant-vs-balanced, period-finding, and permutation-partition
//!   kernels with full state traces ([`algorithms`]);
//! - phase-averaged relational states for the two observer perspectives,
//!   entropy accounting, and backdated projections ([`relational`]);
//! - exhaustive optimal classical query strategies, with and without
//!   advance knowledge of half the solution information ([`classical`]);
//! - enumeration of the classical computation histories whose phased
//!   superposition reconstructs the oracle stage ([`histories`]);
//! - a verification suite tying these together ([`report`]).

pub mod algorithms;
pub mod bits;
pub mod classical;
pub mod families;
pub mod hilbert;
pub mod histories;
pub mod reference;
pub mod relational;
pub mod report;

pub use bits::BitString;
pub use hilbert::{BlockState, DensityEnsemble, DensityMatrix, Projector, Register, RegisterLayout};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("degenerate state")]
    DegenerateState,
    #[error("family/layout mismatch: {0}")]
    FamilyLayoutMismatch(String),
    #[error("layout mismatch")]
    LayoutMismatch,
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NonUnitary(f64),
    #[error("insufficient strings")]
    InsufficientStrings,
    #[error("history set incomplete: no transition covers {0}")]
    HistorySetIncomplete(String),
    #[error("indistinguishable oracle choices")]
    IndistinguishableOracleChoices,
    #[error("advice inconsistent with member {0}")]
    AdviceInconsistent(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Tolerance for state equality comparisons.
pub const TOL_STATE: f64 = 1e-10;
/// Tolerance for norm preservation checks.
pub const TOL_NORM: f64 = 1e-12;
/// Tolerance for entropy values in bits.
pub const TOL_ENTROPY: f64 = 1e-9;
