//! Modal inclusion logic (Minc) under strict and lax team semantics.
//!
//! The crate bundles exact evaluators, the satisfiability-preserving
//! translations into a multimodal language and into two-variable logic
//! with counting, the lower-bound reduction pipelines and a bounded model
//! finder used to cross-check all of them.

pub mod fo;
pub mod formula;
mod lexer;
pub mod modal;
pub mod model;

pub use fo::{parse_fo, standard_translation, FoFormula, Var};
pub use formula::{parse_minc, print_minc, subformulas, Formula, FormulaError, SubformulaTable};
pub use lexer::ParseError;
pub use modal::{parse_l, LFormula};
pub use model::{FoStructure, KripkeModel, ModelError, Relation, Team};
pub mod eval;
pub mod qbf;
pub mod reduce;
pub mod sat;
pub mod translate;

pub use eval::{eval_fo2c, eval_kripke, eval_l, eval_lax, eval_strict, EvalError, Semantics};
