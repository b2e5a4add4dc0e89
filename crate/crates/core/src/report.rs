//! Verdicts produced by the law checkers.

use serde::Serialize;

use crate::set::ElementSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Element { x: usize },
    Pair { x: usize, y: usize },
    Set { set: ElementSet },
    /// Two sets, e.g. an argument and the value that disagrees.
    SetPair { a: ElementSet, b: ElementSet },
    /// A point and an open neighbourhood.
    Neighbourhood { x: usize, open: ElementSet },
    Note { text: String },
}

impl Witness {
    pub fn set(set: ElementSet) -> Self {
        Witness::Set { set }
    }

    pub fn note(text: impl Into<String>) -> Self {
        Witness::Note { text: text.into() }
    }

    /// The subset this witness is about, if it names one.
    pub fn subject_set(&self) -> Option<ElementSet> {
        match self {
            Witness::Set { set } => Some(*set),
            Witness::SetPair { a, .. } => Some(*a),
            _ => None,
        }
    }
}

/// Whether a claim can fail on the instances it runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    /// The hypotheses always hold on finite posets, so only the conclusion is exercised.
    FiniteTrivial,
    Discriminating,
}

/// One checked law: `{law, scope, pass, witnesses[], finding?}`.
///
/// A verdict with a `finding` records an instance where an expected implication
/// does not hold. It is reported, but does not count as a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub law: String,
    pub scope: String,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finding: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tier: Option<Tier>,
}

impl Verdict {
    pub fn pass(law: impl Into<String>, scope: impl Into<String>) -> Self {
        Verdict {
            law: law.into(),
            scope: scope.into(),
            pass: true,
            witnesses: Vec::new(),
            finding: None,
            tier: None,
        }
    }

    pub fn fail(law: impl Into<String>, scope: impl Into<String>, witnesses: Vec<Witness>) -> Self {
        Verdict {
            pass: false,
            witnesses,
            ..Verdict::pass(law, scope)
        }
    }

    /// Pass when `witness` is `None`, fail carrying it otherwise.
    pub fn from_witness(law: impl Into<String>, scope: impl Into<String>, witness: Option<Vec<Witness>>) -> Self {
        match witness {
            None => Verdict::pass(law, scope),
            Some(w) => Verdict::fail(law, scope, w),
        }
    }

    pub fn with_tier(mut self, tier: Tier) -> Self {
        self.tier = Some(tier);
        self
    }

    /// Turns a failed verdict into a passing one that carries a finding.
    pub fn into_finding(mut self, text: impl Into<String>) -> Self {
        if !self.pass {
            self.pass = true;
            self.finding = Some(text.into());
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub name: String,
    pub value: bool,
}

/// Result of one checker on one instance. `facts` are evaluated statements;
/// `verdicts` are the laws asserted about them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub subject: String,
    pub scope: String,
    pub facts: Vec<Fact>,
    pub verdicts: Vec<Verdict>,
}

/// Report of the approximation-operator checkers.
pub type ApproxReport = Report;
/// Report of the one-step closure and family checkers.
pub type ClosureReport = Report;

impl Report {
    pub fn new(subject: impl Into<String>, scope: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            scope: scope.into(),
            facts: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn fact(&mut self, name: impl Into<String>, value: bool) {
        self.facts.push(Fact {
            name: name.into(),
            value,
        });
    }

    pub fn fact_value(&self, name: &str) -> Option<bool> {
        self.facts.iter().find(|f| f.name == name).map(|f| f.value)
    }

    pub fn push(&mut self, verdict: Verdict) {
        self.verdicts.push(verdict);
    }

    pub fn verdict(&self, law: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.law == law)
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    pub fn findings(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.finding.is_some())
    }

    pub fn merge(&mut self, other: Report) {
        self.facts.extend(other.facts);
        self.verdicts.extend(other.verdicts);
    }
}

/// First set in `sets` (ascending bit order) for which `bad` holds, as a witness list.
pub(crate) fn first_bad<I, F>(sets: I, mut bad: F) -> Option<Vec<Witness>>
where
    I: IntoIterator<Item = ElementSet>,
    F: FnMut(ElementSet) -> Option<Witness>,
{
    sets.into_iter().find_map(|s| bad(s).map(|w| vec![w]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_json_shape() {
        let s = ElementSet::from_indices(3, [1, 2]).unwrap();
        let v = Verdict::fail("int-char.lap-idempotent", "upper sets", vec![Witness::set(s)]);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(
            json,
            r#"{"law":"int-char.lap-idempotent","scope":"upper sets","pass":false,"witnesses":[{"kind":"set","set":[1,2]}]}"#
        );
    }

    #[test]
    fn findings_pass() {
        let v = Verdict::fail("x", "y", vec![]).into_finding("disagrees");
        assert!(v.pass);
        assert_eq!(v.finding.as_deref(), Some("disagrees"));
        let v = Verdict::pass("x", "y").into_finding("unused");
        assert!(v.finding.is_none());
    }
}
