//! Evaluators: team semantics, pointwise Kripke semantics, first-order
//! structures and the quantified propositional layer.

mod fo;
mod kripke;
mod quantified;
mod team;

use thiserror::Error;

use crate::fo::Var;
use crate::formula::FormulaError;
use crate::model::ModelError;

pub use fo::{eval_fo2c, eval_open};
pub use kripke::{eval_kripke, eval_l, kripke_truth_set, l_truth_set};
pub use quantified::{eval_dqbf, eval_iqbf, eval_quantified, MAX_CHOICE_TEAM};
pub use team::{eval_lax, eval_strict, eval_team, CompiledFormula, Semantics, TeamEvaluator};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("inclusion atoms have no pointwise semantics")]
    InclusionAtom,
    #[error("{0} is not supported by this evaluator")]
    Unsupported(String),
    #[error("team contains worlds outside the model")]
    TeamOutsideModel,
    #[error("world {0} is outside the model")]
    WorldOutsideModel(usize),
    #[error("variable {0} is free")]
    FreeVariable(Var),
    #[error("proposition {0:?} is not bound by a quantifier")]
    UnboundProposition(String),
    #[error("team of {0} worlds is too large for exhaustive choice")]
    TeamTooLarge(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}
