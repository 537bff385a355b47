//! Lower-bound reductions: PER and its succinct version, the formula `φ_C`
//! of a circuit, alternating machines compiled to circuits, and the chain
//! from dependence QBF through inclusion QBF to Minc.

mod atm;
mod circuit;
mod dqbf;
mod ladner;
mod per;
mod phi_c;

use thiserror::Error;

use crate::eval::EvalError;
use crate::model::ModelError;
use crate::qbf::QbfError;

pub use atm::{atm_accepts, build_circuit_from_atm, Atm, Config, Move, StateType, Transition};
pub use circuit::{expand_succinct, sharp, unsharp, Circuit, CircuitBuilder, Gate, MAX_EXPAND_L};
pub use dqbf::{dqbf_to_iqbf, DepEncoding};
pub use ladner::{
    canonical_tree, canonical_tree_check, iqbf_to_minc, prenex, structure_formula, LadnerOutput,
    MAX_TREE_DEPTH,
};
pub use per::{per_check, persistent_gfp, PerInstance};
pub use phi_c::{build_phi_c, build_phi_c_witness, build_psi_c, gate_formula, gate_prop};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("circuit: {0}")]
    Circuit(String),
    #[error("machine: {0}")]
    Atm(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed prefix: {0}")]
    MalformedPrefix(String),
    #[error("prefix of length {len} exceeds the tree depth limit {max}")]
    PrefixTooLong { len: usize, max: usize },
    #[error(transparent)]
    Qbf(#[from] QbfError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
