use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use orderlab::harness::Builtin;
use orderlab::io::{pairs_from_json, poset_from_json};
use orderlab::{AuxRelation, ElementSet, Poset};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| path.display().to_string())
}

pub fn poset(path: &Path) -> Result<Arc<Poset>> {
    let text = read(path)?;
    let p = poset_from_json(&text).with_context(|| path.display().to_string())?;
    Ok(Arc::new(p))
}

pub fn pairs(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = read(path)?;
    pairs_from_json(&text).with_context(|| path.display().to_string())
}

/// `builtin:NAME`, `file:PATH`, or a bare path.
pub fn relation(p: &Arc<Poset>, arg: &str) -> Result<AuxRelation> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        let builtin: Builtin = name.parse().with_context(|| format!("--rel {arg}"))?;
        return builtin.build(p).with_context(|| format!("--rel {arg}"));
    }
    let path = Path::new(arg.strip_prefix("file:").unwrap_or(arg));
    let pairs = pairs(path)?;
    AuxRelation::validate(p.clone(), &pairs).with_context(|| path.display().to_string())
}

pub fn set(p: &Poset, text: &str, flag: &str) -> Result<ElementSet> {
    ElementSet::parse(p.len(), text).with_context(|| format!("{flag} {text:?}"))
}

/// A family term such as `a(2,7)` or `omega`, checked against the family.
pub fn term(family: orderlab::Family, text: &str) -> Result<orderlab::FamilyElement> {
    let x: orderlab::FamilyElement = text.parse().with_context(|| format!("term {text:?}"))?;
    if !family.belongs(x) {
        bail!("term {text:?}: not an element of family {family}");
    }
    Ok(x)
}
