//! JSON documents for models, structures and teams.
//!
//! ```json
//! { "worlds": ["w", "u"], "relations": {"R": [["w", "u"]]}, "valuation": {"p": ["u"]} }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FoStructure, KripkeModel, ModelError, Team};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    worlds: Vec<String>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureDoc {
    domain: Vec<String>,
    #[serde(default)]
    unary: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    binary: BTreeMap<String, Vec<(String, String)>>,
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ModelError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            ModelError::Syntax(inner.to_string())
        } else {
            ModelError::Syntax(format!("{path}: {inner}"))
        }
    })
}

fn index_of(
    worlds: &[String],
    name: &str,
    path: impl FnOnce() -> String,
) -> Result<usize, ModelError> {
    worlds
        .iter()
        .position(|w| w == name)
        .ok_or_else(|| ModelError::UnknownWorld {
            path: path(),
            name: name.to_string(),
        })
}

fn team_of(worlds: &[String], names: &[String], field: &str) -> Result<Team, ModelError> {
    let mut t = Team::EMPTY;
    for (i, w) in names.iter().enumerate() {
        t.insert(index_of(worlds, w, || format!("{field}[{i}]"))?);
    }
    Ok(t)
}

pub fn load_model(text: &str) -> Result<KripkeModel, ModelError> {
    let doc: ModelDoc = decode(text)?;
    let mut m = KripkeModel::new(doc.worlds.iter().cloned())?;
    for (r, pairs) in &doc.relations {
        m.declare_relation(r.clone());
        for (i, (a, b)) in pairs.iter().enumerate() {
            let u = index_of(&doc.worlds, a, || format!("relations.{r}[{i}][0]"))?;
            let v = index_of(&doc.worlds, b, || format!("relations.{r}[{i}][1]"))?;
            m.add_edge(r, u, v)?;
        }
    }
    for (p, names) in &doc.valuation {
        let t = team_of(&doc.worlds, names, &format!("valuation.{p}"))?;
        m.set_prop(p.clone(), t)?;
    }
    Ok(m)
}

fn names(worlds: &[String], t: Team) -> Vec<String> {
    t.iter().map(|i| worlds[i].clone()).collect()
}

/// Canonical document: pairs and sets sorted by world index.
pub fn save_model(m: &KripkeModel) -> String {
    let worlds = m.worlds();
    let doc = ModelDoc {
        worlds: worlds.to_vec(),
        relations: m
            .relations()
            .iter()
            .map(|(r, rel)| {
                let pairs = rel
                    .pairs()
                    .map(|(u, v)| (worlds[u].clone(), worlds[v].clone()))
                    .collect();
                (r.clone(), pairs)
            })
            .collect(),
        valuation: m
            .valuations()
            .iter()
            .map(|(p, t)| (p.clone(), names(worlds, *t)))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("model documents always serialise")
}

pub fn load_structure(text: &str) -> Result<FoStructure, ModelError> {
    let doc: StructureDoc = decode(text)?;
    let mut s = FoStructure::new(doc.domain.iter().cloned())?;
    for (p, names) in &doc.unary {
        let t = team_of(&doc.domain, names, &format!("unary.{p}"))?;
        s.unary.insert(p.clone(), t);
    }
    for (r, pairs) in &doc.binary {
        let mut rel = super::Relation::empty(doc.domain.len());
        for (i, (a, b)) in pairs.iter().enumerate() {
            let u = index_of(&doc.domain, a, || format!("binary.{r}[{i}][0]"))?;
            let v = index_of(&doc.domain, b, || format!("binary.{r}[{i}][1]"))?;
            rel.add(u, v);
        }
        s.binary.insert(r.clone(), rel);
    }
    Ok(s)
}

pub fn save_structure(s: &FoStructure) -> String {
    let d = &s.domain;
    let doc = StructureDoc {
        domain: d.clone(),
        unary: s
            .unary
            .iter()
            .map(|(p, t)| (p.clone(), names(d, *t)))
            .collect(),
        binary: s
            .binary
            .iter()
            .map(|(r, rel)| {
                let pairs = rel
                    .pairs()
                    .map(|(u, v)| (d[u].clone(), d[v].clone()))
                    .collect();
                (r.clone(), pairs)
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("structure documents always serialise")
}

/// A team given as a JSON array of world names.
pub fn parse_team(m: &KripkeModel, text: &str) -> Result<Team, ModelError> {
    let names: Vec<String> = decode(text)?;
    team_of(m.worlds(), &names, "team")
}

pub fn team_to_json(m: &KripkeModel, t: Team) -> serde_json::Value {
    serde_json::Value::from(names(m.worlds(), t))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FORK: &str = r#"{
        "worlds": ["w", "u", "v"],
        "relations": {"R": [["w", "v"], ["w", "u"]]},
        "valuation": {"p": ["u"], "q": ["v"]}
    }"#;

    #[test]
    fn minimal_document() {
        let m = load_model(r#"{"worlds": ["a"]}"#).unwrap();
        assert_eq!(m.world_count(), 1);
    }

    #[test]
    fn save_is_canonical_and_round_trips() {
        let m = load_model(FORK).unwrap();
        let text = save_model(&m);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            v["relations"]["R"],
            serde_json::json!([["w", "u"], ["w", "v"]])
        );
        assert_eq!(load_model(&text).unwrap(), m);
        assert_eq!(save_model(&load_model(&text).unwrap()), text);
    }

    #[test]
    fn undeclared_world_reports_path() {
        let err = load_model(r#"{"worlds": ["a"], "relations": {"R": [["a", "b"]]}}"#).unwrap_err();
        assert_eq!(
            err,
            ModelError::UnknownWorld {
                path: "relations.R[0][1]".into(),
                name: "b".into()
            }
        );
        let err = load_model(r#"{"worlds": ["a"], "valuation": {"p": ["a", "z"]}}"#).unwrap_err();
        assert!(err.to_string().starts_with("valuation.p[1]"));
    }

    #[test]
    fn schema_errors_carry_field_paths() {
        let err = load_model(r#"{"worlds": ["a"], "relations": {"R": [["a"]]}}"#).unwrap_err();
        assert!(err.to_string().contains("relations.R[0]"), "{err}");
        assert!(load_model(r#"{"worlds": ["a"], "colour": 1}"#).is_err());
        assert_eq!(
            load_model(r#"{"worlds": []}"#).unwrap_err(),
            ModelError::NoWorlds
        );
    }

    #[test]
    fn teams_by_name() {
        let m = load_model(FORK).unwrap();
        assert_eq!(parse_team(&m, r#"["w"]"#).unwrap(), Team::singleton(0));
        assert!(parse_team(&m, r#"["x"]"#).is_err());
    }

    #[test]
    fn structure_round_trip() {
        let s = load_structure(
            r#"{"domain": ["a", "b"], "unary": {"p": ["a"]}, "binary": {"R": [["b", "a"]]}}"#,
        )
        .unwrap();
        assert_eq!(load_structure(&save_structure(&s)).unwrap(), s);
    }
}
