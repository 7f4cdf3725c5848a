//! Residual reports shared by all verifiers.

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::{format_chain, Chain, GradedBasis};
use crate::novikov::Energy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    /// A relation fails to vanish.
    Residual,
    /// A structural condition is violated (declared energy loss, mismatched
    /// evaluation, failed rank test).
    Violation,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Residual => write!(f, "residual"),
            Severity::Violation => write!(f, "violation"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    pub arity: usize,
    pub energy: Energy,
    pub word: Vec<String>,
    pub residual: Chain,
    pub residual_text: String,
    pub severity: Severity,
    pub message: String,
}

impl ReportEntry {
    pub fn violation(arity: usize, energy: Energy, word: Vec<String>, message: impl Into<String>) -> Self {
        ReportEntry {
            arity,
            energy,
            word,
            residual: Chain::new(),
            residual_text: String::new(),
            severity: Severity::Violation,
            message: message.into(),
        }
    }
}

/// An ordered list of failures; empty means the check passed. `horizons`
/// records, per arity, the energy below which the relation was checked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub entries: Vec<ReportEntry>,
    pub horizons: BTreeMap<usize, Energy>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Report {
        Report {
            check: check.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.entries.is_empty()
    }

    /// Splits a residual chain by energy and records one entry per level.
    pub fn push_residual(&mut self, arity: usize, word: Vec<String>, residual: &Chain, basis: &GradedBasis) {
        let mut by_level: BTreeMap<Energy, Chain> = BTreeMap::new();
        for ((m, i), c) in residual.iter() {
            by_level.entry(m.lambda).or_default().add_term((*m, *i), c.clone());
        }
        for (energy, chain) in by_level {
            self.entries.push(ReportEntry {
                arity,
                energy,
                word: word.clone(),
                residual_text: format_chain(&chain, basis),
                residual: chain,
                severity: Severity::Residual,
                message: String::new(),
            });
        }
    }

    pub fn push(&mut self, e: ReportEntry) {
        self.entries.push(e);
    }

    pub fn merge(&mut self, other: Report) {
        self.entries.extend(other.entries);
        for (k, h) in other.horizons {
            self.horizons.entry(k).and_modify(|x| *x = (*x).min(h)).or_insert(h);
        }
    }

    /// Deterministic order: by energy, arity, word, then message.
    pub fn sort(&mut self) {
        self.entries.sort_by(|a, b| {
            (a.energy, a.arity, &a.word, a.severity, &a.message, &a.residual_text).cmp(&(
                b.energy,
                b.arity,
                &b.word,
                b.severity,
                &b.message,
                &b.residual_text,
            ))
        });
    }

    /// Lowest energy level with a failure.
    pub fn lowest_level(&self) -> Option<Energy> {
        self.entries.iter().map(|e| e.energy).min()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "check": self.check,
            "passed": self.passed(),
            "horizons": self.horizons.iter().map(|(k, h)| serde_json::json!({"arity": k, "below": h.to_string()})).collect::<Vec<_>>(),
            "entries": self.entries.iter().map(|e| serde_json::json!({
                "arity": e.arity,
                "energy": e.energy.to_string(),
                "word": e.word,
                "severity": e.severity.to_string(),
                "residual": e.residual_text,
                "message": e.message,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{}: pass", self.check)?;
        } else {
            write!(f, "{}: FAIL ({} entries)", self.check, self.entries.len())?;
        }
        if !self.horizons.is_empty() {
            let hs: Vec<String> = self.horizons.iter().map(|(k, h)| format!("k={k}: E<{h}")).collect();
            write!(f, " [checked {}]", hs.join(", "))?;
        }
        for e in &self.entries {
            write!(
                f,
                "\n  {} at arity {}, energy {}, word ({})",
                e.severity,
                e.arity,
                e.energy,
                e.word.join(", ")
            )?;
            if !e.residual_text.is_empty() {
                write!(f, ": {}", e.residual_text)?;
            }
            if !e.message.is_empty() {
                write!(f, ": {}", e.message)?;
            }
        }
        Ok(())
    }
}
