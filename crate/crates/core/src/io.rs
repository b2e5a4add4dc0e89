//! File formats: poset JSON, relation JSON, and Graphviz DOT.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poset::{Poset, RelationMode};
use crate::set::ElementSet;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RelationJson {
    pub mode: RelationMode,
    pub pairs: Vec<[usize; 2]>,
}

/// `{"n": int, "labels": [str]?, "relation": {"mode": ..., "pairs": [[i,j],...]}}`
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PosetJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub relation: RelationJson,
}

/// `{"pairs": [[i,j],...]}`, read against a separately supplied poset.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PairsJson {
    pub pairs: Vec<[usize; 2]>,
}

impl PosetJson {
    pub fn into_poset(self) -> Result<Poset, Error> {
        let pairs: Vec<(usize, usize)> = self.relation.pairs.iter().map(|p| (p[0], p[1])).collect();
        let poset = Poset::validate(self.n, &pairs, self.relation.mode)?;
        match self.labels {
            Some(labels) => poset.with_labels(labels),
            None => Ok(poset),
        }
    }
}

impl From<&Poset> for PosetJson {
    /// Written in covers mode: the Hasse diagram is the shortest faithful form.
    fn from(p: &Poset) -> Self {
        PosetJson {
            n: p.len(),
            labels: p.labels().map(|l| l.to_vec()),
            relation: RelationJson {
                mode: RelationMode::Covers,
                pairs: p.covers().into_iter().map(|(i, j)| [i, j]).collect(),
            },
        }
    }
}

pub fn poset_from_json(text: &str) -> Result<Poset, Error> {
    let parsed: PosetJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    parsed.into_poset()
}

pub fn poset_to_json(p: &Poset) -> String {
    to_json(&PosetJson::from(p))
}

/// Indented JSON in which arrays holding no objects stay on one line, so index
/// lists and pair lists read as rows.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("value serializes");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out
}

fn has_object(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Object(_) => true,
        serde_json::Value::Array(items) => items.iter().any(has_object),
        _ => false,
    }
}

fn write_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    let pad = "  ".repeat(depth + 1);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String(key.clone()));
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", "  ".repeat(depth));
        }
        Value::Array(items) if has_object(v) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", "  ".repeat(depth));
        }
        other => out.push_str(&other.to_string()),
    }
}

pub fn pairs_from_json(text: &str) -> Result<Vec<(usize, usize)>, Error> {
    let parsed: PairsJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(parsed.pairs.into_iter().map(|p| (p[0], p[1])).collect())
}

pub fn pairs_to_json(pairs: &[(usize, usize)]) -> String {
    let doc = PairsJson {
        pairs: pairs.iter().map(|&(i, j)| [i, j]).collect(),
    };
    serde_json::to_string(&doc).expect("pairs JSON serializes")
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram as a DOT digraph drawn bottom-to-top. Members of `shade` are filled.
pub fn export_dot(p: &Poset, shade: Option<ElementSet>) -> String {
    let mut out = String::new();
    out.push_str("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
    for i in 0..p.len() {
        let _ = write!(out, "  n{i} [label=\"{}\"", escape(&p.label(i)));
        if shade.is_some_and(|s| s.contains(i)) {
            out.push_str(", style=filled, fillcolor=lightgray");
        }
        out.push_str("];\n");
    }
    for (i, j) in p.covers() {
        let _ = writeln!(out, "  n{i} -> n{j};");
    }
    out.push_str("}\n");
    out
}

/// Lattice of a set family under inclusion, e.g. the opens of a topology.
pub fn export_family_dot(name: &str, family: &[ElementSet]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {name} {{\n  rankdir=BT;\n  node [shape=box];");
    for (k, s) in family.iter().enumerate() {
        let _ = writeln!(out, "  s{k} [label=\"{{{s}}}\"];");
    }
    for (a, sa) in family.iter().enumerate() {
        for (b, sb) in family.iter().enumerate() {
            if a == b || !sa.is_subset(sb) || sa == sb {
                continue;
            }
            let between = family
                .iter()
                .any(|sc| sc != sa && sc != sb && sa.is_subset(sc) && sc.is_subset(sb));
            if !between {
                let _ = writeln!(out, "  s{a} -> s{b};");
            }
        }
    }
    out.push_str("}\n");
    out
}
