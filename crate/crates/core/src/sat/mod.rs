//! Bounded satisfiability search.
//!
//! Models are enumerated canonically: world count ascending, then the
//! relation bits as an integer, then the valuation bits as an integer, then
//! nonempty teams (or evaluation worlds) in ascending order. Relation `j`
//! of a signature sorted by name occupies bits `j·n² + u·n + v`, proposition
//! `i` occupies bits `i·n + w`. Minc search enumerates directly; the
//! multimodal and first-order searches ground the formula into SAT and
//! extract the least model in the same order.

mod ground;
mod minc;

use thiserror::Error;

use crate::eval::EvalError;
use crate::formula::FormulaError;

pub use ground::{bounded_sat_fo2c, bounded_sat_l};
pub use minc::{
    bounded_sat_minc, canonical_model, differential_check, valuation_team_search, DiffReport,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("budget of {budget} evaluator calls exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("formula has free variables")]
    NotASentence,
    #[error("SAT solver failed: {0}")]
    Solver(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_size: usize,
    /// Only models with an empty accessibility relation.
    pub empty_relation: bool,
    /// Only models whose worlds have pairwise distinct valuations.
    pub distinct_valuations: bool,
    /// Limit on evaluator calls (Minc) or solver calls (grounded search).
    pub budget: Option<u64>,
    pub jobs: usize,
}

impl SearchOptions {
    pub fn new(max_size: usize) -> Self {
        SearchOptions {
            max_size,
            empty_relation: false,
            distinct_valuations: false,
            budget: None,
            jobs: 1,
        }
    }

    pub fn empty_relation(mut self, on: bool) -> Self {
        self.empty_relation = on;
        self
    }

    pub fn distinct_valuations(mut self, on: bool) -> Self {
        self.distinct_valuations = on;
        self
    }

    pub fn budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }
}

struct Budget {
    limit: Option<u64>,
    spent: u64,
}

impl Budget {
    fn new(limit: Option<u64>) -> Self {
        Budget { limit, spent: 0 }
    }

    fn charge(&mut self, calls: u64) -> Result<(), SatError> {
        self.spent += calls;
        match self.limit {
            Some(budget) if self.spent > budget => Err(SatError::BudgetExceeded { budget }),
            _ => Ok(()),
        }
    }
}
