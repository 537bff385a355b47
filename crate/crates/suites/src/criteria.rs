//! The acceptance criteria, each comparing the library against an oracle
//! over a seeded corpus.

use std::collections::BTreeSet;

use minc::eval::{eval_dqbf, eval_iqbf};
use minc::reduce::{
    atm_accepts, build_circuit_from_atm, build_phi_c, build_phi_c_witness, canonical_tree_check,
    dqbf_to_iqbf, expand_succinct, iqbf_to_minc, per_check, persistent_gfp, DepEncoding,
    PerInstance, MAX_TREE_DEPTH,
};
use minc::sat::{
    bounded_sat_fo2c, bounded_sat_l, bounded_sat_minc, valuation_team_search, SearchOptions,
};
use minc::translate::{
    embed_lax_witness, embed_strict_witness, extract_lax_witness, extract_strict_witness,
    translate_lax, translate_strict,
};
use minc::{
    eval_fo2c, eval_kripke, eval_l, eval_lax, eval_strict, Formula, KripkeModel, Semantics, Team,
};

use crate::corpus::{self, FormulaShape};
use crate::oracle::atm::Conditions;
use crate::oracle::team::{point_holds, team_holds, Plain};
use crate::oracle::{circuit, per, qbf};
use crate::Report;

fn members(t: Team) -> Vec<usize> {
    t.iter().collect()
}

/// Inclusion-free, height at most 3, over `p` and `q`.
pub fn flatness_corpus() -> Vec<Formula> {
    let shape = FormulaShape {
        depth: 3,
        max_inclusions: 0,
        inclusion_rate: 0.0,
        modal: true,
    };
    corpus::formula_corpus(0xF1A7, 600, &["p", "q"], shape)
}

/// Height at most 3 over `p` and `q`, with up to three inclusion atoms.
pub fn inclusion_corpus() -> Vec<Formula> {
    let shape = FormulaShape {
        depth: 3,
        max_inclusions: 3,
        inclusion_rate: 0.5,
        modal: true,
    };
    corpus::formula_corpus(0xE3F7, 600, &["p", "q"], shape)
}

/// Height at most 2 over `p`, `q`, `r`, with up to two inclusion atoms.
pub fn translation_corpus() -> Vec<Formula> {
    let shape = FormulaShape {
        depth: 2,
        max_inclusions: 2,
        inclusion_rate: 0.5,
        modal: true,
    };
    corpus::formula_corpus(0x7E5A, 220, &["p", "q", "r"], shape)
}

pub fn flatness() -> Report {
    let mut r = Report::new(
        1,
        "flatness",
        "inclusion-free formulas: lax = strict = pointwise",
    );
    let formulas = flatness_corpus();
    let mut rng = corpus::rng(1);
    let mut models = 0;
    for f in &formulas {
        let sample = corpus::model_sample(&mut rng, &["p", "q"], 64, 128);
        models += sample.len();
        for m in &sample {
            let plain = Plain::new(m);
            let n = m.world_count();
            let point: Vec<bool> = (0..n).map(|w| point_holds(&plain, w, f)).collect();
            for (w, &truth) in point.iter().enumerate() {
                r.check(eval_kripke(m, w, f) == Ok(truth), || {
                    format!("{f}: pointwise evaluation differs at world {w} of {m:?}")
                });
            }
            for t in m.all_worlds().subsets() {
                let flat = t.iter().all(|w| point[w]);
                let lax = eval_lax(m, t, f).unwrap();
                let strict = eval_strict(m, t, f).unwrap();
                r.check(lax == flat && strict == flat, || {
                    format!(
                        "{f} on team {t:?} of {m:?}: lax {lax}, strict {strict}, pointwise {flat}"
                    )
                });
            }
        }
    }
    r.note(format!("{} formulas, {models} models", formulas.len()));
    r
}

pub fn empty_team() -> Report {
    let mut r = Report::new(
        2,
        "empty-team",
        "empty team holds and strict implies lax, with inclusion atoms",
    );
    let formulas = inclusion_corpus();
    let mut rng = corpus::rng(2);
    let mut strict_only = 0u64;
    for f in &formulas {
        for m in corpus::model_sample(&mut rng, &["p", "q"], 64, 128) {
            let plain = Plain::new(&m);
            for t in m.all_worlds().subsets() {
                let lax = eval_lax(&m, t, f).unwrap();
                let strict = eval_strict(&m, t, f).unwrap();
                if t.is_empty() {
                    r.check(lax && strict, || {
                        format!("{f} fails on the empty team of {m:?}")
                    });
                }
                r.check(!strict || lax, || {
                    format!("{f}: strict without lax on {t:?} of {m:?}")
                });
                let ts = members(t);
                r.check(lax == team_holds(&plain, &ts, f, false), || {
                    format!("{f}: lax evaluator disagrees with the oracle on {t:?} of {m:?}")
                });
                r.check(strict == team_holds(&plain, &ts, f, true), || {
                    format!("{f}: strict evaluator disagrees with the oracle on {t:?} of {m:?}")
                });
                strict_only += (lax && !strict) as u64;
            }
        }
    }
    r.note(format!(
        "{} formulas; lax holds without strict on {strict_only} model/team pairs",
        formulas.len()
    ));
    r
}

pub fn lax_translation() -> Report {
    let mut r = Report::new(
        3,
        "lax-translation",
        "lax witnesses survive the multimodal translation both ways",
    );
    let (mut minc_sat, mut l_sat) = (0, 0);
    for theta in translation_corpus() {
        let tr = translate_lax(&theta).unwrap();
        let found = bounded_sat_minc(&theta, Semantics::Lax, &SearchOptions::new(3)).unwrap();
        if let Some((m, t)) = &found {
            minc_sat += 1;
            match embed_lax_witness(m, *t, &theta) {
                Ok((n, w)) => {
                    r.check(eval_l(&n, w, &tr.formula) == Ok(true), || {
                        format!("{theta}: embedded model fails the translation")
                    });
                    r.check(n.world_count() == m.world_count(), || {
                        format!("{theta}: embedding changed the model size")
                    });
                }
                Err(e) => r.fail(format!("{theta}: embedding refused: {e}")),
            }
        }
        let back = bounded_sat_l(&tr.formula, &SearchOptions::new(4)).unwrap();
        if let Some((n, w)) = &back {
            l_sat += 1;
            match extract_lax_witness(n, *w, &theta) {
                Ok((m, t)) => {
                    r.check(!t.is_empty(), || {
                        format!("{theta}: extracted team is empty")
                    });
                    r.check(
                        team_holds(&Plain::new(&m), &members(t), &theta, false),
                        || format!("{theta}: extracted team fails θ"),
                    );
                }
                Err(e) => r.fail(format!("{theta}: extraction refused: {e}")),
            }
        }
        // Both maps keep the model size, so the two searches must agree
        // below the smaller bound.
        let small = |k: Option<usize>| k.is_some_and(|k| k <= 3);
        r.check(
            small(found.as_ref().map(|(m, _)| m.world_count()))
                == small(back.as_ref().map(|(n, _)| n.world_count())),
            || format!("{theta}: searches disagree within three worlds"),
        );
    }
    r.note(format!(
        "{minc_sat} satisfiable within 3 worlds, {l_sat} translations satisfiable within 4"
    ));
    r
}

pub fn strict_translation() -> Report {
    let mut r = Report::new(
        4,
        "strict-translation",
        "strict witnesses survive the two-variable translation both ways",
    );
    let (mut minc_sat, mut fo_sat) = (0, 0);
    for theta in translation_corpus() {
        let tr = translate_strict(&theta).unwrap();
        let found = bounded_sat_minc(&theta, Semantics::Strict, &SearchOptions::new(3)).unwrap();
        if let Some((m, t)) = &found {
            minc_sat += 1;
            match embed_strict_witness(m, *t, &theta) {
                Ok(a) => r.check(eval_fo2c(&a, &tr.sentence) == Ok(true), || {
                    format!("{theta}: embedded structure fails the sentence")
                }),
                Err(e) => r.fail(format!("{theta}: embedding refused: {e}")),
            }
        }
        let back = bounded_sat_fo2c(&tr.sentence, &SearchOptions::new(4)).unwrap();
        if let Some(a) = &back {
            fo_sat += 1;
            match extract_strict_witness(a, &theta) {
                Ok((m, t)) => {
                    r.check(
                        !t.is_empty() && eval_strict(&m, t, &theta) == Ok(true),
                        || format!("{theta}: extracted team fails θ"),
                    );
                    r.check(
                        team_holds(&Plain::new(&m), &members(t), &theta, true),
                        || format!("{theta}: oracle rejects the extracted team"),
                    );
                }
                Err(e) => r.fail(format!("{theta}: extraction refused: {e}")),
            }
        }
        let small = |k: Option<usize>| k.is_some_and(|k| k <= 3);
        r.check(
            small(found.as_ref().map(|(m, _)| m.world_count()))
                == small(back.as_ref().map(|a| a.size())),
            || format!("{theta}: searches disagree within three elements"),
        );
    }
    r.note(format!(
        "{minc_sat} satisfiable within 3 worlds, {fo_sat} sentences satisfiable within 4"
    ));
    r
}

pub fn phi_c() -> Report {
    let mut r = Report::new(
        5,
        "phi-c",
        "circuits with l = 1: PER answer matches satisfiability of the formula",
    );
    let (mut positive, mut negative) = (0, 0);
    for c in corpus::small_circuits() {
        let inst = expand_succinct(&c).unwrap();
        let triples = circuit::triples(&c);
        r.check(inst.triples() == &triples, || {
            format!("expansion differs from the oracle for\n{c}")
        });
        let gfp = persistent_gfp(&inst);
        let answer = per_check(&inst);
        r.check(
            per::union_of_persistent(inst.n(), &triples).contains(&inst.n()) == answer,
            || format!("PER answer differs from subset enumeration for\n{c}"),
        );
        let phi = build_phi_c(&c);
        let search = valuation_team_search(&phi, Semantics::Lax, 24, None).unwrap();
        if answer {
            positive += 1;
            match build_phi_c_witness(&c, &gfp) {
                Ok((m, t)) => {
                    r.check(eval_lax(&m, t, &phi) == Ok(true), || {
                        format!("witness fails φ_C for\n{c}")
                    });
                    r.check(
                        team_holds(&Plain::new(&m), &members(t), &phi, false),
                        || format!("oracle rejects the witness for\n{c}"),
                    );
                }
                Err(e) => r.fail(format!("witness refused: {e} for\n{c}")),
            }
            r.check(search.is_some(), || {
                format!("restricted search misses a positive circuit\n{c}")
            });
        } else {
            negative += 1;
            r.check(search.is_none(), || {
                format!("restricted search satisfies φ_C for a negative circuit\n{c}")
            });
            r.check(build_phi_c_witness(&c, &gfp).is_err(), || {
                format!("witness built for a negative circuit\n{c}")
            });
        }
    }
    r.note(format!(
        "{positive} positive and {negative} negative circuits"
    ));
    r
}

pub fn atm_chain() -> Report {
    let mut r = Report::new(
        6,
        "atm-chain",
        "machine acceptance matches PER on the expanded machine circuit",
    );
    let mut inputs = 0u64;
    for (name, machine) in corpus::toy_machines() {
        for w in corpus::words(2) {
            let accepts = atm_accepts(&machine, &w).unwrap();
            let c = build_circuit_from_atm(&machine, &w).unwrap();
            let m = machine.space(w.len()).unwrap();
            let oracle = Conditions::new(&machine, &w, m);
            r.check(c.l() == oracle.l() && c.l() <= 7, || {
                format!("{name}: unexpected block width {}", c.l())
            });
            match circuit::accepted_by(&c, |bits| oracle.accepts(bits)) {
                Ok(n) => inputs += n,
                Err(bits) => r.fail(format!(
                    "{name} on {w:?}: circuit and conditions differ on {bits:?}"
                )),
            }
            let inst = expand_succinct(&c).unwrap();
            r.check(per_check(&inst) == accepts, || {
                format!("{name} on {w:?}: accepts = {accepts} but PER disagrees")
            });
        }
    }
    r.note(format!("{inputs} circuit inputs compared"));
    r
}

pub fn dqbf_chain() -> Report {
    let mut r = Report::new(
        7,
        "dqbf-chain",
        "dependence and inclusion quantified formulas agree through the modal reduction",
    );
    let (mut tree_checked, mut tree_skipped, mut truths) = (0, 0, 0);
    let mut outermost_failures = Vec::new();
    let instances = corpus::dqbf_corpus(0xD9BF, 20, 15);
    for d in &instances {
        let truth = qbf::skolem(d);
        truths += truth as usize;
        r.check(eval_dqbf(d) == Ok(truth), || {
            format!("{d}: team semantics disagrees with Skolem functions")
        });
        let iq = dqbf_to_iqbf(d, DepEncoding::Generalized).unwrap();
        r.check(eval_iqbf(&iq) == Ok(truth), || {
            format!("{d}: inclusion encoding {iq} changes the truth value")
        });
        let out = iqbf_to_minc(&iq).unwrap();
        if out.prefix.len() <= MAX_TREE_DEPTH {
            tree_checked += 1;
            r.check(canonical_tree_check(&out).ok() == Some(truth), || {
                format!("{d}: canonical tree disagrees with truth value {truth}")
            });
        } else {
            tree_skipped += 1;
        }
        let alt = dqbf_to_iqbf(d, DepEncoding::OutermostUniversal).unwrap();
        if eval_iqbf(&alt) != Ok(truth) {
            outermost_failures.push(d.to_string());
        }
    }
    r.note(format!(
        "{} instances ({truths} true); canonical tree checked on {tree_checked}, skipped on {tree_skipped} with prefixes longer than {MAX_TREE_DEPTH}",
        instances.len()
    ));
    r.note(format!(
        "finding: the outermost-universal dependence encoding changes the truth value of {} instances{}",
        outermost_failures.len(),
        outermost_failures.first().map(|d| format!(", e.g. {d}")).unwrap_or_default()
    ));
    r
}

/// The three-world fork: `w` sees `u` and `v`, `p` holds at `u`, `q` at `v`.
pub fn fork_model() -> KripkeModel {
    let mut m = KripkeModel::new(["w", "u", "v"]).unwrap();
    m.add_edge("R", 0, 1).unwrap();
    m.add_edge("R", 0, 2).unwrap();
    m.set_prop("p", Team::singleton(1)).unwrap();
    m.set_prop("q", Team::singleton(2)).unwrap();
    m
}

pub fn divergence() -> Report {
    let mut r = Report::new(
        8,
        "divergence",
        "fork model separates lax and strict on dia (q <= p)",
    );
    let m = fork_model();
    let f = minc::parse_minc("dia (q <= p)").unwrap();
    let t = Team::singleton(0);
    r.check(eval_lax(&m, t, &f) == Ok(true), || {
        "lax evaluation is not true".into()
    });
    r.check(eval_strict(&m, t, &f) == Ok(false), || {
        "strict evaluation is not false".into()
    });
    let plain = Plain::new(&m);
    r.check(
        team_holds(&plain, &[0], &f, false) && !team_holds(&plain, &[0], &f, true),
        || "oracle does not separate the semantics".into(),
    );
    r
}

pub fn gfp() -> Report {
    let mut r = Report::new(
        9,
        "gfp",
        "greatest persistent set equals the union of all persistent sets",
    );
    let corpus = corpus::per_corpus(0x9F9, 600, 8);
    let mut nonempty = 0;
    for (n, s) in &corpus {
        let inst = PerInstance::new(*n, s.iter().copied()).unwrap();
        let gfp = persistent_gfp(&inst);
        let union: BTreeSet<usize> = per::union_of_persistent(*n, s);
        nonempty += !gfp.is_empty() as usize;
        r.check(gfp == union, || {
            format!("n = {n}, S = {s:?}: gfp {gfp:?}, union {union:?}")
        });
        r.check(inst.is_persistent(&gfp), || {
            format!("n = {n}, S = {s:?}: gfp is not persistent")
        });
        r.check(per_check(&inst) == union.contains(n), || {
            format!("n = {n}, S = {s:?}: wrong PER answer")
        });
    }
    r.note(format!(
        "{} instances, {nonempty} with a nonempty persistent set",
        corpus.len()
    ));
    r
}
