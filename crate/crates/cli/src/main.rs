//! `minc`: evaluate, search, translate and reduce modal inclusion logic.
//!
//! Exit codes: 0 success / satisfiable / true, 1 unsatisfiable within the
//! bound / false / failed suite, 2 usage or input error, 3 budget exceeded.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use minc::eval::{eval_team, Semantics};
use minc::model::{load_model, parse_team, save_model, save_structure, team_to_json};
use minc::qbf::{DqbfInstance, IqbfInstance};
use minc::reduce::{
    build_circuit_from_atm, build_phi_c, build_phi_c_witness, canonical_tree_check, dqbf_to_iqbf,
    expand_succinct, iqbf_to_minc, per_check, persistent_gfp, Atm, Circuit, DepEncoding,
};
use minc::sat::{
    bounded_sat_fo2c, bounded_sat_l, bounded_sat_minc, differential_check, SatError, SearchOptions,
};
use minc::translate::{translate_lax, translate_strict};
use minc::{eval_kripke, parse_fo, parse_l, parse_minc, KripkeModel, Team};

#[derive(Parser)]
#[command(name = "minc", version, about = "Modal inclusion logic workbench")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Logic {
    Minc,
    L,
    Fo,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalSemantics {
    Lax,
    Strict,
    /// Pointwise truth at every world of the team.
    Kripke,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SatLogic {
    MincLax,
    MincStrict,
    #[value(name = "L", alias = "l")]
    L,
    Fo2c,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Lax,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum Encoding {
    Generalized,
    Outermost,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    /// Worker threads for Minc search.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Evaluator calls (Minc) or solver calls (L, fo2c) before giving up.
    #[arg(long)]
    budget: Option<u64>,
    /// Print the witness model.
    #[arg(long)]
    witness: bool,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions::new(self.max_size)
            .budget(self.budget)
            .jobs(self.jobs)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it back.
    Parse {
        #[arg(long, value_enum, default_value = "minc")]
        logic: Logic,
        formula: String,
    },
    /// Evaluate a formula on a team of a model file.
    Eval {
        #[arg(long, value_enum)]
        semantics: EvalSemantics,
        model: String,
        /// JSON array of world names, or a comma-separated list.
        team: String,
        formula: String,
    },
    /// Bounded satisfiability search.
    Sat {
        #[arg(long, value_enum)]
        logic: SatLogic,
        /// Only models with an empty accessibility relation.
        #[arg(long)]
        empty_relation: bool,
        /// Only models whose worlds have distinct valuations.
        #[arg(long)]
        distinct_valuations: bool,
        #[command(flatten)]
        search: SearchArgs,
        formula: String,
    },
    /// Translate Minc to the multimodal language (lax) or two-variable logic (strict).
    Translate {
        #[arg(value_enum)]
        direction: Direction,
        formula: String,
    },
    /// Run one of the reductions.
    #[command(subcommand)]
    Reduce(Reduce),
    /// Search for a model and team where lax and strict semantics disagree.
    Diff {
        #[command(flatten)]
        search: SearchArgs,
        formula: String,
    },
    /// Run an acceptance suite by name, or `all`.
    Suite { name: String },
}

#[derive(Subcommand)]
enum Reduce {
    /// Expand a circuit file into its explicit PER instance.
    Expand { circuit: String },
    /// The Minc formula of a circuit file; `--witness` adds the model built
    /// from the greatest persistent set.
    PhiC {
        circuit: String,
        #[arg(long)]
        witness: bool,
    },
    /// The circuit of a machine file on an input word such as `0110`.
    AtmCircuit {
        atm: String,
        #[arg(default_value = "")]
        word: String,
    },
    /// Replace dependence atoms of a quantified formula by inclusion atoms.
    DqbfIqbf {
        #[arg(long, value_enum, default_value = "generalized")]
        encoding: Encoding,
        formula: String,
    },
    /// Quantified formula with inclusion atoms to a modal formula;
    /// `--check` evaluates it on the canonical assignment tree.
    Ladner {
        #[arg(long)]
        check: bool,
        formula: String,
    },
}

/// Result of a command: text for humans, JSON for `--json`, and an exit code.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

impl Outcome {
    fn new(text: impl Into<String>, json: Value, code: u8) -> Self {
        Outcome {
            text: text.into(),
            json,
            code,
        }
    }
}

/// Reads `@path` arguments from files.
fn arg_text(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(s.to_string()),
    }
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

fn team_arg(m: &KripkeModel, s: &str) -> Result<Team> {
    let s = s.trim();
    let text = if s.starts_with('[') {
        s.to_string()
    } else {
        let names: Vec<&str> = s
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .collect();
        serde_json::to_string(&names)?
    };
    Ok(parse_team(m, &text)?)
}

fn count(n: usize, noun: &str) -> String {
    format!("{n} {noun}{}", if n == 1 { "" } else { "s" })
}

fn model_json(m: &KripkeModel) -> Value {
    serde_json::from_str(&save_model(m)).expect("saved models are JSON")
}

fn witness_text(m: &KripkeModel, t: Team) -> String {
    format!("{}\nteam: {}", save_model(m), team_to_json(m, t))
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Parse { logic, formula } => {
            let src = arg_text(&formula)?;
            let printed = match logic {
                Logic::Minc => {
                    let f = parse_minc(&src)?;
                    let j = json!({"formula": f.to_string(), "size": f.size(), "depth": f.depth(),
                                   "props": f.props()});
                    return Ok(Outcome::new(f.to_string(), j, 0));
                }
                Logic::L => parse_l(&src)?.to_string(),
                Logic::Fo => parse_fo(&src)?.to_string(),
            };
            Ok(Outcome::new(
                printed.clone(),
                json!({ "formula": printed }),
                0,
            ))
        }
        Command::Eval {
            semantics,
            model,
            team,
            formula,
        } => {
            let m = load_model(&read(&model)?)?;
            let t = team_arg(&m, &team)?;
            let f = parse_minc(&arg_text(&formula)?)?;
            let v = match semantics {
                EvalSemantics::Lax => eval_team(&m, t, &f, Semantics::Lax)?,
                EvalSemantics::Strict => eval_team(&m, t, &f, Semantics::Strict)?,
                EvalSemantics::Kripke => {
                    let mut all = true;
                    for w in t.iter() {
                        all &= eval_kripke(&m, w, &f)?;
                    }
                    all
                }
            };
            Ok(Outcome::new(
                v.to_string(),
                json!({ "value": v }),
                if v { 0 } else { 1 },
            ))
        }
        Command::Sat {
            logic,
            empty_relation,
            distinct_valuations,
            search,
            formula,
        } => {
            let src = arg_text(&formula)?;
            let opts = search
                .options()
                .empty_relation(empty_relation)
                .distinct_valuations(distinct_valuations);
            let bound = search.max_size;
            let (found, text, mut j) = match logic {
                SatLogic::MincLax | SatLogic::MincStrict => {
                    let sem = if logic == SatLogic::MincLax {
                        Semantics::Lax
                    } else {
                        Semantics::Strict
                    };
                    let f = parse_minc(&src)?;
                    match bounded_sat_minc(&f, sem, &opts)? {
                        Some((m, t)) => (
                            true,
                            format!("sat: {}", count(m.world_count(), "world"))
                                + &if search.witness {
                                    format!("\n{}", witness_text(&m, t))
                                } else {
                                    String::new()
                                },
                            json!({"model": model_json(&m), "team": team_to_json(&m, t)}),
                        ),
                        None => (false, String::new(), json!({})),
                    }
                }
                SatLogic::L => {
                    let f = parse_l(&src)?;
                    match bounded_sat_l(&f, &opts)? {
                        Some((m, w)) => (
                            true,
                            format!(
                                "sat: {}, at {}",
                                count(m.world_count(), "world"),
                                m.world_name(w)
                            ) + &if search.witness {
                                format!("\n{}", save_model(&m))
                            } else {
                                String::new()
                            },
                            json!({"model": model_json(&m), "world": m.world_name(w)}),
                        ),
                        None => (false, String::new(), json!({})),
                    }
                }
                SatLogic::Fo2c => {
                    let f = parse_fo(&src)?;
                    match bounded_sat_fo2c(&f, &opts)? {
                        Some(a) => (
                            true,
                            format!("sat: {}", count(a.size(), "element"))
                                + &if search.witness {
                                    format!("\n{}", save_structure(&a))
                                } else {
                                    String::new()
                                },
                            json!({"structure": serde_json::from_str::<Value>(&save_structure(&a))?}),
                        ),
                        None => (false, String::new(), json!({})),
                    }
                }
            };
            j["sat"] = json!(found);
            j["max_size"] = json!(bound);
            if !search.witness {
                j.as_object_mut()
                    .unwrap()
                    .retain(|k, _| k == "sat" || k == "max_size");
            }
            let text = if found {
                text
            } else {
                format!("no model with at most {}", count(bound, "world"))
            };
            Ok(Outcome::new(text, j, if found { 0 } else { 1 }))
        }
        Command::Translate { direction, formula } => {
            let f = parse_minc(&arg_text(&formula)?)?;
            let (text, pieces) = match direction {
                Direction::Lax => {
                    let tr = translate_lax(&f)?;
                    (
                        tr.formula.to_string(),
                        tr.pieces.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    )
                }
                Direction::Strict => {
                    let tr = translate_strict(&f)?;
                    (
                        tr.sentence.to_string(),
                        tr.pieces.iter().map(|p| p.to_string()).collect(),
                    )
                }
            };
            Ok(Outcome::new(
                text.clone(),
                json!({"formula": text, "pieces": pieces}),
                0,
            ))
        }
        Command::Reduce(r) => reduce(r),
        Command::Diff { search, formula } => {
            let f = parse_minc(&arg_text(&formula)?)?;
            let rep = differential_check(&f, &search.options())?;
            let mut text = format!(
                "lax: {}\nstrict: {}",
                if rep.lax.is_some() { "sat" } else { "no model" },
                if rep.strict.is_some() {
                    "sat"
                } else {
                    "no model"
                }
            );
            let mut j = json!({"lax": rep.lax.is_some(), "strict": rep.strict.is_some(), "divergence": null});
            match &rep.divergence {
                Some((m, t, lax, strict)) => {
                    text += &format!(
                        "\ndivergence: {}, team {}, lax {lax}, strict {strict}",
                        count(m.world_count(), "world"),
                        team_to_json(m, *t)
                    );
                    if search.witness {
                        text += &format!("\n{}", save_model(m));
                    }
                    j["divergence"] = json!({"model": model_json(m), "team": team_to_json(m, *t),
                                             "lax": lax, "strict": strict});
                }
                None => {
                    text += &format!(
                        "\nno divergence with at most {}",
                        count(search.max_size, "world")
                    )
                }
            }
            Ok(Outcome::new(text, j, 0))
        }
        Command::Suite { name } => {
            let names: Vec<&str> = if name == "all" {
                minc_suites::SUITES.to_vec()
            } else if minc_suites::SUITES.contains(&name.as_str()) {
                vec![name.as_str()]
            } else {
                bail!(
                    "unknown suite {name:?}; expected one of: all, {}",
                    minc_suites::SUITES.join(", ")
                )
            };
            let mut text = Vec::new();
            let mut reports = Vec::new();
            let mut ok = true;
            for n in names {
                let r = minc_suites::run_suite(n).expect("known suite");
                ok &= r.passed();
                text.push(r.to_string());
                reports.push(
                    json!({"id": r.id, "name": r.name, "passed": r.passed(), "checked": r.checked,
                                    "failed": r.failed, "failures": r.failures, "notes": r.notes}),
                );
            }
            Ok(Outcome::new(
                text.join("\n"),
                json!(reports),
                if ok { 0 } else { 1 },
            ))
        }
    }
}

fn reduce(r: Reduce) -> Result<Outcome> {
    match r {
        Reduce::Expand { circuit } => {
            let c = Circuit::parse(&read(&circuit)?)?;
            let inst = expand_succinct(&c)?;
            let gfp = persistent_gfp(&inst);
            let positive = per_check(&inst);
            let mut text = format!("n = {}\n", inst.n());
            for (i, j, k) in inst.triples() {
                text += &format!("{i} {j} {k}\n");
            }
            text += &format!("persistent: {gfp:?}\npositive: {positive}");
            let j = json!({"n": inst.n(), "triples": inst.triples(), "persistent": gfp, "positive": positive});
            Ok(Outcome::new(text, j, 0))
        }
        Reduce::PhiC { circuit, witness } => {
            let c = Circuit::parse(&read(&circuit)?)?;
            let phi = build_phi_c(&c);
            let mut text = phi.to_string();
            let mut j = json!({"formula": phi.to_string()});
            if witness {
                let gfp: BTreeSet<usize> = persistent_gfp(&expand_succinct(&c)?);
                let (m, t) = build_phi_c_witness(&c, &gfp)?;
                text += &format!("\n{}", witness_text(&m, t));
                j["model"] = model_json(&m);
                j["team"] = team_to_json(&m, t);
            }
            Ok(Outcome::new(text, j, 0))
        }
        Reduce::AtmCircuit { atm, word } => {
            let machine = Atm::from_json(&read(&atm)?)?;
            let w = word
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(anyhow!("input words are strings over 0 and 1")),
                })
                .collect::<Result<Vec<bool>>>()?;
            let c = build_circuit_from_atm(&machine, &w)?;
            Ok(Outcome::new(
                c.to_string(),
                json!({"l": c.l(), "gates": c.len(), "circuit": c.to_string()}),
                0,
            ))
        }
        Reduce::DqbfIqbf { encoding, formula } => {
            let d = DqbfInstance::from_formula(&parse_minc(&arg_text(&formula)?)?)?;
            let enc = match encoding {
                Encoding::Generalized => DepEncoding::Generalized,
                Encoding::Outermost => DepEncoding::OutermostUniversal,
            };
            let i = dqbf_to_iqbf(&d, enc)?;
            Ok(Outcome::new(
                i.to_string(),
                json!({"formula": i.to_string()}),
                0,
            ))
        }
        Reduce::Ladner { check, formula } => {
            let i = IqbfInstance::from_formula(&parse_minc(&arg_text(&formula)?)?)?;
            let out = iqbf_to_minc(&i)?;
            let mut text = out.formula.to_string();
            let mut j = json!({"formula": text});
            let mut code = 0;
            if check {
                let v = canonical_tree_check(&out)?;
                text += &format!("\ncanonical tree: {v}");
                j["canonical_tree"] = json!(v);
                code = if v { 0 } else { 1 };
            }
            Ok(Outcome::new(text, j, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("JSON values serialise")
            } else {
                out.text
            };
            // A closed pipe (`minc ... | head`) is not an error.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if matches!(e.downcast_ref(), Some(SatError::BudgetExceeded { .. })) {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
