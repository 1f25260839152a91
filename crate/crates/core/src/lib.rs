//! Minimum SWAP insertion for nearest-neighbour compliance of quantum circuits.
//!
//! The solver builds the layered graph of qubit orders, quotients it by the
//! symmetry group generated by qubit relabellings that fix the circuit and by
//! coupling-graph automorphisms, and solves the resulting small linear program
//! (or a shortest path when every multiplier is one). An explicit SWAP schedule
//! is then lifted back from the reduced solution.

pub mod baseline;
pub mod circuit;
pub mod coupling;
pub mod dp;
pub mod lp;
pub mod perm;
pub mod random;
pub mod reconstruct;
pub mod symmetry;

mod bigmath;

pub use circuit::{Circuit, FixingPattern, RawGate, RawGateKind, TwoQubitGate};
pub use coupling::{AutGroup, Coupling, CouplingGraph, Family};
pub use perm::{compose, conjugate_transposition, inverse, Permutation, Transposition};
pub use reconstruct::{NncpSolution, VerifyReport};
pub use symmetry::QuotientGraph;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid coupling graph: {0}")]
    InvalidCoupling(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("reconstruction dead end after {} steps: {message}", partial.len())]
    DeadEnd { message: String, partial: Vec<Permutation> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
