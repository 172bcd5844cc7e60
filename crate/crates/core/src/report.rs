//! Verdicts and witness-carrying check reports.

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{ElementId, R0Algebra};
use crate::grade::Grade;

/// A value bound to a quantified variable in a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Binding {
    Element(ElementId),
    Grade(Grade),
}

/// The instantiation of quantified variables at which a condition fails.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub bindings: Vec<(&'static str, Binding)>,
    pub note: Option<String>,
}

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn element(mut self, var: &'static str, e: ElementId) -> Self {
        self.bindings.push((var, Binding::Element(e)));
        self
    }

    pub fn grade(mut self, var: &'static str, g: Grade) -> Self {
        self.bindings.push((var, Binding::Grade(g)));
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn get_element(&self, var: &str) -> Option<ElementId> {
        self.bindings.iter().find_map(|(v, b)| match b {
            Binding::Element(e) if *v == var => Some(*e),
            _ => None,
        })
    }

    pub fn get_grade(&self, var: &str) -> Option<Grade> {
        self.bindings.iter().find_map(|(v, b)| match b {
            Binding::Grade(g) if *v == var => Some(*g),
            _ => None,
        })
    }

    pub fn elements(&self) -> Vec<ElementId> {
        self.bindings
            .iter()
            .filter_map(|(_, b)| match b {
                Binding::Element(e) => Some(*e),
                Binding::Grade(_) => None,
            })
            .collect()
    }

    pub fn render(&self, algebra: &R0Algebra) -> String {
        let mut parts: Vec<String> = self
            .bindings
            .iter()
            .map(|(var, b)| match b {
                Binding::Element(e) => format!("{var}={}", algebra.name(*e)),
                Binding::Grade(g) => format!("{var}={g}"),
            })
            .collect();
        if let Some(note) = &self.note {
            parts.push(format!("({note})"));
        }
        parts.join(", ")
    }

    pub fn to_json(&self, algebra: &R0Algebra) -> Value {
        let bindings: Vec<Value> = self
            .bindings
            .iter()
            .map(|(var, b)| {
                let value = match b {
                    Binding::Element(e) => algebra.name(*e).to_string(),
                    Binding::Grade(g) => g.to_string(),
                };
                json!({ "name": var, "value": value })
            })
            .collect();
        json!({ "bindings": bindings, "note": self.note })
    }
}

/// A failed condition together with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub condition: String,
    pub witness: Witness,
}

/// Pass/fail outcome of one notion, naming the first failing condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub notion: String,
    pub failure: Option<Failure>,
}

impl Verdict {
    pub fn pass(notion: impl Into<String>) -> Self {
        Verdict {
            notion: notion.into(),
            failure: None,
        }
    }

    pub fn fail(notion: impl Into<String>, condition: impl Into<String>, witness: Witness) -> Self {
        Verdict {
            notion: notion.into(),
            failure: Some(Failure {
                condition: condition.into(),
                witness,
            }),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn condition(&self) -> Option<&str> {
        self.failure.as_ref().map(|f| f.condition.as_str())
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.failure.as_ref().map(|f| &f.witness)
    }

    pub fn render(&self, algebra: &R0Algebra) -> String {
        match &self.failure {
            None => format!("{}: pass", self.notion),
            Some(f) => format!(
                "{}: FAIL [{}] {}",
                self.notion,
                f.condition,
                f.witness.render(algebra)
            ),
        }
    }

    pub fn to_json(&self, algebra: &R0Algebra) -> Value {
        match &self.failure {
            None => json!({ "notion": self.notion, "verdict": "pass" }),
            Some(f) => json!({
                "notion": self.notion,
                "verdict": "fail",
                "condition": f.condition,
                "witness": f.witness.to_json(algebra),
            }),
        }
    }
}

/// One checked condition inside a [`CheckReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub condition: String,
    /// `None` when the condition holds everywhere.
    pub witness: Option<Witness>,
}

/// Per-condition outcomes of an exhaustive check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub title: String,
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new(title: impl Into<String>) -> Self {
        CheckReport {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn record(&mut self, condition: impl Into<String>, witness: Option<Witness>) {
        self.entries.push(CheckEntry {
            condition: condition.into(),
            witness,
        });
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.witness.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.witness.is_some())
    }

    pub fn entry(&self, condition: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.condition == condition)
    }

    /// Collapses the report into a verdict naming the first failing entry.
    pub fn to_verdict(&self) -> Verdict {
        match self.failures().next() {
            None => Verdict::pass(self.title.clone()),
            Some(e) => Verdict::fail(
                self.title.clone(),
                e.condition.clone(),
                e.witness.clone().unwrap_or_default(),
            ),
        }
    }

    pub fn render(&self, algebra: &R0Algebra) -> String {
        let mut out = format!(
            "{}: {}\n",
            self.title,
            if self.passed() { "pass" } else { "FAIL" }
        );
        for e in &self.entries {
            match &e.witness {
                None => out.push_str(&format!("  pass  {}\n", e.condition)),
                Some(w) => out.push_str(&format!("  FAIL  {}  witness: {}\n", e.condition, w.render(algebra))),
            }
        }
        out
    }

    pub fn to_json(&self, algebra: &R0Algebra) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| match &e.witness {
                None => json!({ "condition": e.condition, "verdict": "pass" }),
                Some(w) => json!({
                    "condition": e.condition,
                    "verdict": "fail",
                    "witness": w.to_json(algebra),
                }),
            })
            .collect();
        json!({ "title": self.title, "verdict": if self.passed() { "pass" } else { "fail" }, "entries": entries })
    }
}

/// Summary row used by sweep reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimTally {
    pub claim: String,
    pub checked: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}
