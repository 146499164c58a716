//! Verification and classification runs over a build artifact.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::config::Artifact;
use crate::error::{Error, Result};
use crate::extract::{classify, extract_coordinates, lemma_checks, round_trip, s_plus_is_subgroup, seligman_suite, Branch, CoordinateBundle, SkewCase};
use crate::group::{Norm, Window};
use crate::report::{Check, Report};
use crate::sp::{check_jacobi, lie_center, GradedLie, SpLie, TableLie};
use crate::verify::verify_lie_g_torus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Jacobi,
    Identities,
    Lemmas,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "axioms" => Suite::Axioms,
            "jacobi" => Suite::Jacobi,
            "identities" => Suite::Identities,
            "lemmas" => Suite::Lemmas,
            "all" => Suite::All,
            _ => return Err(Error::Config(format!("unknown suite {s:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Axioms => "axioms",
            Suite::Jacobi => "jacobi",
            Suite::Identities => "identities",
            Suite::Lemmas => "lemmas",
            Suite::All => "all",
        })
    }
}

/// Parses `R`, `linf:R` or `l1:R`.
pub fn parse_window(s: &str) -> Result<Window> {
    let (norm, r) = match s.split_once(':') {
        None => (Norm::Linf, s),
        Some(("linf", r)) => (Norm::Linf, r),
        Some(("l1", r)) => (Norm::L1, r),
        Some((n, _)) => return Err(Error::Config(format!("unknown window norm {n:?}"))),
    };
    let radius: i64 = r.trim().parse().map_err(|_| Error::Config(format!("bad window radius {r:?}")))?;
    if radius < 0 {
        return Err(Error::Config("window radius must be non-negative".into()));
    }
    Ok(Window { radius, norm })
}

/// Degree windows for a run over an infinite group: `lie` bounds the
/// rebuilt `sp₂ᵣ`, `extract` the coordinate degrees (defaults to `lie`).
#[derive(Debug, Clone, Copy, Default)]
pub struct Windows {
    pub lie: Option<Window>,
    pub extract: Option<Window>,
}

enum Source {
    Table(TableLie),
    Built(Box<SpLie>),
}

impl Source {
    fn lie(&self) -> &dyn GradedLie {
        match self {
            Source::Table(t) => t,
            Source::Built(s) => s.as_ref(),
        }
    }
}

fn open(a: &Artifact, w: Windows) -> Result<Source> {
    a.rank()?;
    if let Some(t) = &a.lie {
        return Ok(Source::Table(t.clone()));
    }
    if !a.algebra.spec.is_finite() && w.lie.is_none() {
        return Err(Error::WindowRequired);
    }
    Ok(Source::Built(Box::new(a.rebuild_lie(w.lie)?)))
}

fn extract(src: &Source, w: Windows) -> Result<CoordinateBundle> {
    let dom = match src {
        Source::Table(_) => None,
        Source::Built(_) => w.extract.or(w.lie),
    };
    extract_coordinates(src.lie(), dom)
}

/// Branch identities for rank at least 3: the evidence gathered by
/// classification, minus the associator check whose failure singles out the
/// alternative branch.
fn rank_three_identities(bundle: &CoordinateBundle) -> Result<Report> {
    let mut rep = Report::new();
    match classify(bundle) {
        Ok(c) => {
            for ch in c.evidence.checks {
                if c.branch == Branch::Alternative && ch.name == "associator vanishes" {
                    continue;
                }
                rep.push(ch);
            }
            rep.push(Check::pass(format!("coordinates form a {}", c.branch)).with_scope(bundle.scope()));
        }
        Err(Error::TheoremViolation(msg)) => rep.push(Check::fail("coordinates belong to a branch", msg)),
        Err(e) => return Err(e),
    }
    Ok(rep)
}

/// Runs one suite (or all that apply) against an artifact.
pub fn verify_artifact(a: &Artifact, suite: Suite, w: Windows) -> Result<Report> {
    let mut rep = Report::new();
    let ranked = a.config.rank.is_some();
    if suite == Suite::All && !ranked {
        return a.algebra_checks();
    }
    if matches!(suite, Suite::Axioms | Suite::All) {
        rep.extend(a.algebra_checks()?);
        if !ranked {
            return Ok(rep);
        }
    }
    let src = open(a, w)?;
    let lie = src.lie();
    let r = lie.rank();
    if suite == Suite::Lemmas && r != 2 {
        return Err(Error::Config(format!("the lemma battery applies to rank 2, not {r}")));
    }
    if matches!(suite, Suite::Axioms | Suite::All) {
        rep.extend(verify_lie_g_torus(lie)?.prefixed("lie: "));
    }
    if matches!(suite, Suite::Jacobi | Suite::All) {
        let keys = lie.keys()?;
        rep.push(check_jacobi(lie, &keys)?);
        if lie.window().is_none() {
            let center = lie_center(lie)?;
            rep.push(Check::from_bool("center is zero", center.is_empty(), || format!("center has dimension {}", center.len())));
        }
    }
    if matches!(suite, Suite::Identities | Suite::Lemmas | Suite::All) {
        let bundle = extract(&src, w)?;
        if matches!(suite, Suite::Identities | Suite::All) {
            rep.extend(if r == 2 { seligman_suite(&bundle)? } else { rank_three_identities(&bundle)? });
        }
        if r == 2 && matches!(suite, Suite::Lemmas | Suite::All) {
            rep.extend(lemma_checks(&bundle)?.prefixed("lemma: "));
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyOutcome {
    pub branch: Branch,
    pub description: String,
    pub rank: usize,
    pub skew_case: SkewCase,
    pub s_plus_subgroup: bool,
    pub structure_hash: String,
    pub round_trip: Check,
    pub evidence: Report,
    pub verification: Report,
}

impl ClassifyOutcome {
    pub fn passed(&self) -> bool {
        self.round_trip.passed()
    }
}

/// Verifies the torus axioms, extracts and classifies the coordinates, and
/// maps them back onto the constructed algebra. Refuses with
/// `VerificationFailed` when an axiom fails.
pub fn classify_artifact(a: &Artifact, w: Windows) -> Result<ClassifyOutcome> {
    let src = open(a, w)?;
    let lie = src.lie();
    let verification = verify_lie_g_torus(lie)?;
    if verification.any_fail() {
        let names: Vec<&str> = verification.failures().map(|c| c.name.as_str()).collect();
        return Err(Error::VerificationFailed(format!("axioms failed: {}", names.join(", "))));
    }
    let bundle = extract(&src, w)?;
    let s_plus_subgroup = s_plus_is_subgroup(&bundle)?;
    let c = classify(&bundle)?;
    let rebuilt;
    let original: &SpLie = match &src {
        Source::Built(s) => s,
        Source::Table(_) => {
            rebuilt = a.rebuild_lie(None)?;
            &rebuilt
        }
    };
    let rt = round_trip(&c, original)?;
    Ok(ClassifyOutcome {
        branch: c.branch,
        description: c.branch.to_string(),
        rank: c.rank,
        skew_case: c.skew_case,
        s_plus_subgroup,
        structure_hash: c.structure_hash,
        round_trip: rt,
        evidence: c.evidence,
        verification,
    })
}

impl fmt::Display for ClassifyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "branch: {} (rank {})", self.description, self.rank)?;
        writeln!(f, "S+ is a subgroup: {}", self.s_plus_subgroup)?;
        writeln!(f, "skew product on B: {:?}", self.skew_case)?;
        writeln!(f, "structure hash: {}", self.structure_hash)?;
        writeln!(f, "{}", self.round_trip)?;
        write!(f, "{}", self.evidence)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    fn klein(rank: usize) -> Artifact {
        let c = Config::from_json(&format!(
            r#"{{"kind":"quantum","group":{{"free_rank":0,"torsion":[2,2]}},"q":[[1,-1],[-1,1]],"rank":{rank}}}"#
        ))
        .unwrap();
        Artifact::build(&c, None).unwrap()
    }

    #[test]
    fn window_syntax() {
        assert_eq!(parse_window("2").unwrap(), Window::linf(2));
        assert_eq!(parse_window("l1:1").unwrap(), Window::l1(1));
        assert!(parse_window("l2:1").is_err());
        assert!(parse_window("linf:-1").is_err());
    }

    #[test]
    fn all_suites_pass_on_quantum_rank_two() {
        let rep = verify_artifact(&klein(2), Suite::All, Windows::default()).unwrap();
        assert!(rep.all_pass(), "{rep}");
        assert!(rep.checks.iter().any(|c| c.name.starts_with("lemma: ")));
    }

    #[test]
    fn classification_of_quantum_artifact() {
        let out = classify_artifact(&klein(2), Windows::default()).unwrap();
        assert_eq!(out.branch, Branch::Associative);
        assert!(out.round_trip.passed(), "{}", out.round_trip);
        assert!(!out.s_plus_subgroup);
    }

    #[test]
    fn lemmas_are_rank_two_only() {
        assert!(matches!(verify_artifact(&klein(3), Suite::Lemmas, Windows::default()), Err(Error::Config(_))));
        let rep = verify_artifact(&klein(3), Suite::Identities, Windows::default()).unwrap();
        assert!(rep.all_pass(), "{rep}");
    }
}
