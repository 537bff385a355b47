//! Team semantics straight from the definitions: every split, every legal
//! successor team, every selector function is enumerated explicitly.

use std::collections::BTreeSet;

use minc::{Formula, KripkeModel};

/// A model in plain vectors, read once from a [`KripkeModel`].
pub struct Plain {
    n: usize,
    succ: Vec<Vec<usize>>,
    props: Vec<(String, Vec<bool>)>,
}

impl Plain {
    pub fn new(m: &KripkeModel) -> Self {
        let n = m.world_count();
        let mut succ = vec![Vec::new(); n];
        if let Ok(r) = m.relation("R") {
            for (u, v) in r.pairs() {
                succ[u].push(v);
            }
        }
        let props = m
            .valuations()
            .iter()
            .map(|(p, t)| (p.clone(), (0..n).map(|w| t.contains(w)).collect()))
            .collect();
        Plain { n, succ, props }
    }

    fn holds(&self, p: &str, w: usize) -> bool {
        self.props
            .iter()
            .find(|(q, _)| q == p)
            .is_some_and(|(_, v)| v[w])
    }

    pub fn worlds(&self) -> usize {
        self.n
    }
}

fn subsets(xs: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u32..1 << xs.len()).map(move |mask| {
        xs.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, x)| *x)
            .collect()
    })
}

fn image(m: &Plain, t: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = t.iter().flat_map(|w| m.succ[*w].iter().copied()).collect();
    set.into_iter().collect()
}

/// Lax (`strict = false`) or strict team semantics.
pub fn team_holds(m: &Plain, t: &[usize], f: &Formula, strict: bool) -> bool {
    match f {
        Formula::Prop(p) => t.iter().all(|w| m.holds(p, *w)),
        Formula::NegProp(p) => t.iter().all(|w| !m.holds(p, *w)),
        Formula::And(a, b) => team_holds(m, t, a, strict) && team_holds(m, t, b, strict),
        Formula::Or(a, b) => {
            if strict {
                subsets(t).any(|s| {
                    let rest: Vec<usize> = t.iter().filter(|w| !s.contains(w)).copied().collect();
                    team_holds(m, &s, a, strict) && team_holds(m, &rest, b, strict)
                })
            } else {
                subsets(t).any(|s1| {
                    team_holds(m, &s1, a, strict)
                        && subsets(t).any(|s2| {
                            t.iter().all(|w| s1.contains(w) || s2.contains(w))
                                && team_holds(m, &s2, b, strict)
                        })
                })
            }
        }
        Formula::Inc(lhs, rhs) => {
            let tuple =
                |w: usize, ps: &[String]| ps.iter().map(|p| m.holds(p, w)).collect::<Vec<_>>();
            let have: BTreeSet<Vec<bool>> = t.iter().map(|w| tuple(*w, rhs)).collect();
            t.iter().all(|w| have.contains(&tuple(*w, lhs)))
        }
        Formula::Box(g) => team_holds(m, &image(m, t), g, strict),
        Formula::Diamond(g) => {
            if strict {
                // Every function picking one successor per world.
                let mut choice = vec![0usize; t.len()];
                if t.iter().any(|w| m.succ[*w].is_empty()) {
                    return false;
                }
                loop {
                    let img: BTreeSet<usize> =
                        t.iter().zip(&choice).map(|(w, c)| m.succ[*w][*c]).collect();
                    let img: Vec<usize> = img.into_iter().collect();
                    if team_holds(m, &img, g, strict) {
                        return true;
                    }
                    let mut i = 0;
                    loop {
                        if i == t.len() {
                            return false;
                        }
                        choice[i] += 1;
                        if choice[i] < m.succ[t[i]].len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                }
            } else {
                subsets(&image(m, t)).any(|s| {
                    t.iter().all(|w| m.succ[*w].iter().any(|v| s.contains(v)))
                        && s.iter().all(|v| t.iter().any(|w| m.succ[*w].contains(v)))
                        && team_holds(m, &s, g, strict)
                })
            }
        }
        _ => panic!("oracle handles plain Minc only"),
    }
}

/// Classical truth at a world of an inclusion-free formula.
pub fn point_holds(m: &Plain, w: usize, f: &Formula) -> bool {
    match f {
        Formula::Prop(p) => m.holds(p, w),
        Formula::NegProp(p) => !m.holds(p, w),
        Formula::And(a, b) => point_holds(m, w, a) && point_holds(m, w, b),
        Formula::Or(a, b) => point_holds(m, w, a) || point_holds(m, w, b),
        Formula::Box(g) => m.succ[w].iter().all(|v| point_holds(m, *v, g)),
        Formula::Diamond(g) => m.succ[w].iter().any(|v| point_holds(m, *v, g)),
        _ => panic!("pointwise oracle needs an inclusion-free formula"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use minc::{parse_minc, Team};

    #[test]
    fn fork_divergence() {
        let mut m = KripkeModel::new(["w", "u", "v"]).unwrap();
        m.add_edge("R", 0, 1).unwrap();
        m.add_edge("R", 0, 2).unwrap();
        m.set_prop("p", Team::singleton(1)).unwrap();
        m.set_prop("q", Team::singleton(2)).unwrap();
        let plain = Plain::new(&m);
        let f = parse_minc("dia (q <= p)").unwrap();
        assert!(team_holds(&plain, &[0], &f, false));
        assert!(!team_holds(&plain, &[0], &f, true));
    }
}
