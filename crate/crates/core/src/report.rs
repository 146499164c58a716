//! Tri-state verdicts and mergeable check reports.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::group::Window;

/// How many witnesses a single check keeps; the violation count is exact.
pub const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Whether a verdict covers every tuple or only those inside a degree window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "scope", rename_all = "lowercase")]
pub enum Scope {
    #[default]
    Exhaustive,
    Window {
        radius: i64,
        norm: crate::group::Norm,
    },
}

impl From<Option<Window>> for Scope {
    fn from(w: Option<Window>) -> Self {
        match w {
            None => Scope::Exhaustive,
            Some(w) => Scope::Window { radius: w.radius, norm: w.norm },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(flatten)]
    pub scope: Scope,
    pub tested: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            verdict: Verdict::Pass,
            scope: Scope::Exhaustive,
            tested: 0,
            violations: 0,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name)
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        let mut c = Self::new(name);
        c.violation(witness);
        c
    }

    pub fn inconclusive(name: impl Into<String>, note: impl Into<String>) -> Self {
        let mut c = Self::new(name);
        c.verdict = Verdict::Inconclusive;
        c.note = Some(note.into());
        c
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        let mut c = Self::new(name);
        c.tested = 1;
        if !ok {
            c.violation(witness());
        }
        c
    }

    pub fn with_scope(mut self, scope: Scope) -> Self {
        self.scope = scope;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn violation(&mut self, witness: impl Into<String>) {
        self.verdict = Verdict::Fail;
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness.into());
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Folds another partial sweep of the same check into this one.
    pub fn absorb(&mut self, other: Check) {
        self.tested += other.tested;
        self.violations += other.violations;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        self.verdict = match (self.verdict, other.verdict) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        };
        if self.note.is_none() {
            self.note = other.note;
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "inconclusive",
        };
        write!(f, "{tag:>12}  {}", self.name)?;
        if let Scope::Window { radius, norm } = self.scope {
            write!(f, " (window {norm:?} {radius})")?;
        }
        if self.tested > 0 {
            write!(f, " [{} tested", self.tested)?;
            if self.violations > 0 {
                write!(f, ", {} violations", self.violations)?;
            }
            write!(f, "]")?;
        }
        if let Some(w) = self.witnesses.first() {
            write!(f, " witness: {w}")?;
        }
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Prefixes every check name, for nesting sub-reports.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.name = format!("{prefix}{}", c.name);
        }
        self
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn any_inconclusive(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Inconclusive)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict != Verdict::Pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absorb_keeps_worst_verdict() {
        let mut a = Check::pass("x");
        a.tested = 3;
        a.absorb(Check::inconclusive("x", "window"));
        assert_eq!(a.verdict, Verdict::Inconclusive);
        a.absorb(Check::fail("x", "w"));
        assert_eq!(a.verdict, Verdict::Fail);
        assert_eq!(a.violations, 1);
        assert_eq!(a.tested, 3);
    }

    #[test]
    fn witnesses_are_capped() {
        let mut c = Check::new("y");
        for i in 0..40 {
            c.violation(format!("{i}"));
        }
        assert_eq!(c.violations, 40);
        assert_eq!(c.witnesses.len(), MAX_WITNESSES);
    }
}
