//! Satisfiability-preserving translations of Minc: lax semantics into the
//! multimodal language with converse and global modalities, strict semantics
//! into two-variable logic with counting. Each direction of the equivalence
//! is available as a witness transformer.

mod lax;
mod strict;

use thiserror::Error;

use crate::eval::EvalError;
use crate::formula::FormulaError;
use crate::model::ModelError;

pub use lax::{embed_lax_witness, extract_lax_witness, translate_lax, LaxTranslation};
pub use strict::{
    embed_strict_witness, extract_strict_witness, translate_strict, StrictTranslation,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("witness team is empty")]
    EmptyTeam,
    #[error("the team does not satisfy the formula")]
    NotSatisfied,
    #[error("conjunct {index} fails: {conjunct}")]
    ConjunctFails { index: usize, conjunct: String },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
