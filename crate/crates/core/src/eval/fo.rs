//! First-order evaluation over finite structures.

use super::EvalError;
use crate::fo::{FoFormula, Var};
use crate::model::FoStructure;

/// Truth of a two-variable sentence; `exists1` demands exactly one witness.
pub fn eval_fo2c(a: &FoStructure, f: &FoFormula) -> Result<bool, EvalError> {
    if let Some(v) = f.free_variables().into_iter().next() {
        return Err(EvalError::FreeVariable(v));
    }
    eval_open(a, f, [None, None])
}

/// Truth under a partial assignment to `x` and `y`.
pub fn eval_open(
    a: &FoStructure,
    f: &FoFormula,
    env: [Option<usize>; 2],
) -> Result<bool, EvalError> {
    let get = |v: Var| env[v.index()].ok_or(EvalError::FreeVariable(v));
    Ok(match f {
        FoFormula::Unary(p, v) => a.unary(p).contains(get(*v)?),
        FoFormula::Binary(r, u, v) => match a.binary(r) {
            Some(rel) => rel.contains(get(*u)?, get(*v)?),
            None => {
                get(*u)?;
                get(*v)?;
                false
            }
        },
        FoFormula::Not(g) => !eval_open(a, g, env)?,
        FoFormula::And(l, r) => eval_open(a, l, env)? && eval_open(a, r, env)?,
        FoFormula::Or(l, r) => eval_open(a, l, env)? || eval_open(a, r, env)?,
        FoFormula::Implies(l, r) => !eval_open(a, l, env)? || eval_open(a, r, env)?,
        FoFormula::Iff(l, r) => eval_open(a, l, env)? == eval_open(a, r, env)?,
        FoFormula::Exists(v, g) | FoFormula::Forall(v, g) | FoFormula::ExistsOne(v, g) => {
            let mut count = 0;
            for d in 0..a.size() {
                let mut e = env;
                e[v.index()] = Some(d);
                if eval_open(a, g, e)? {
                    count += 1;
                }
            }
            match f {
                FoFormula::Exists(..) => count > 0,
                FoFormula::Forall(..) => count == a.size(),
                _ => count == 1,
            }
        }
    })
}
