//! Multi-step arguments replayed against the solver.
//!
//! ```text
//! # comment
//! script <name>
//! given <v>=<c>[:<b>],...
//! step <label> on <gadget> <kind> <spec> ... [by <label>,...]
//! count <label> <sum> > <sum> [by <label>,...]
//! ```
//!
//! `<gadget>` is a gadget name known to the caller or a builtin family such
//! as `path:3`, optionally restricted: `S7[-w9]` deletes vertices,
//! `S7[w4,w9]` keeps only the listed ones. The property part uses the
//! manifest grammar. Every assumption of a step must be a `given` premise,
//! the conclusion of a `forced` step it cites, or be covered by some other
//! cited step (a counting step, say). Citing `cases` marks the assumptions
//! as the hypotheses of a case split.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::check::{verify_property, Outcome, VerifyError};
use super::manifest::{parse_property, ManifestError, Property};
use crate::graph::{families, valid_terminal_name, Graph, Vertex};
use crate::solver::{parse_assumptions, NamedAssumption, SolveOptions};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Restriction {
    Delete(Vec<String>),
    Keep(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetRef {
    pub name: String,
    pub restriction: Option<Restriction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    Check { on: GadgetRef, property: Property },
    Count { lhs: Vec<u64>, rhs: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub label: String,
    pub kind: StepKind,
    pub by: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplayScript {
    pub name: Option<String>,
    pub given: Vec<NamedAssumption>,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Property { line: usize, source: ManifestError },
    #[error("line {line}: step `{label}` cites unknown step `{cited}`")]
    UnknownCitation { line: usize, label: String, cited: String },
    #[error("line {line}: assumption `{assumption}` of step `{label}` is not justified")]
    Unjustified {
        line: usize,
        label: String,
        assumption: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReplayOutcome {
    Verified(Vec<(String, Outcome)>),
    /// First step that did not hold, 0-based.
    FailedStep {
        index: usize,
        label: String,
        evidence: String,
    },
}

impl ReplayOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, ReplayOutcome::Verified(_))
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ReplayParseError {
    ReplayParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_gadget_ref(tok: &str, line: usize) -> Result<GadgetRef, ReplayParseError> {
    let (name, restriction) = match tok.split_once('[') {
        None => (tok, None),
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, format!("unclosed `[` in `{tok}`")))?;
            let (delete, list) = match inner.strip_prefix('-') {
                Some(l) => (true, l),
                None => (false, inner),
            };
            let names: Vec<String> = list.split(',').map(str::to_string).collect();
            if names.iter().any(|n| !valid_terminal_name(n)) {
                return Err(syntax(line, format!("bad vertex list in `{tok}`")));
            }
            let r = if delete {
                Restriction::Delete(names)
            } else {
                Restriction::Keep(names)
            };
            (name, Some(r))
        }
    };
    if name.is_empty() || name.contains(']') || !name.chars().all(|c| c.is_ascii_alphanumeric() || "_':,.-".contains(c))
    {
        return Err(syntax(line, format!("bad gadget name `{name}`")));
    }
    Ok(GadgetRef {
        name: name.to_string(),
        restriction,
    })
}

fn parse_sum(s: &str, line: usize) -> Result<Vec<u64>, ReplayParseError> {
    s.split('+')
        .map(|t| {
            let t = t.trim();
            let (a, b) = t.split_once('*').unwrap_or((t, "1"));
            let num = |x: &str| {
                x.trim()
                    .parse::<u64>()
                    .map_err(|_| syntax(line, format!("bad number `{x}`")))
            };
            num(a)?.checked_mul(num(b)?).ok_or_else(|| syntax(line, "overflow"))
        })
        .collect()
}

fn split_by(rest: &str) -> (&str, Vec<String>) {
    match rest.rfind(" by ") {
        Some(i) => {
            let labels = rest[i + 4..]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            (&rest[..i], labels)
        }
        None => (rest, Vec::new()),
    }
}

pub fn parse_replay(text: &str) -> Result<ReplayScript, ReplayParseError> {
    let mut s = ReplayScript::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        match head {
            "script" => {
                if s.name.is_some() || rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(syntax(line, "expected one `script <name>` line"));
                }
                s.name = Some(rest.to_string());
            }
            "given" => {
                let g = parse_assumptions(rest).map_err(|e| syntax(line, e.to_string()))?;
                if g.is_empty() {
                    return Err(syntax(line, "empty premise"));
                }
                s.given.extend(g);
            }
            "step" | "count" => {
                let (rest, by) = split_by(rest);
                let (label, rest) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| syntax(line, format!("incomplete {head}")))?;
                if !valid_terminal_name(label) || label == "given" || label == "cases" {
                    return Err(syntax(line, format!("bad label `{label}`")));
                }
                if s.steps.iter().any(|st| st.label == label) {
                    return Err(syntax(line, format!("duplicate label `{label}`")));
                }
                let rest = rest.trim();
                let kind = if head == "count" {
                    let (l, r) = rest.split_once('>').ok_or_else(|| syntax(line, "count needs `>`"))?;
                    StepKind::Count {
                        lhs: parse_sum(l, line)?,
                        rhs: parse_sum(r, line)?,
                    }
                } else {
                    let rest = rest.strip_prefix("on").filter(|r| r.starts_with(char::is_whitespace));
                    let rest = rest.ok_or_else(|| syntax(line, "expected `on <gadget>`"))?.trim();
                    let (g, prop) = rest
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| syntax(line, "missing property"))?;
                    StepKind::Check {
                        on: parse_gadget_ref(g, line)?,
                        property: parse_property(prop, line)
                            .map_err(|source| ReplayParseError::Property { line, source })?,
                    }
                };
                for cited in &by {
                    if cited != "given" && cited != "cases" && !s.steps.iter().any(|st| &st.label == cited) {
                        return Err(ReplayParseError::UnknownCitation {
                            line,
                            label: label.to_string(),
                            cited: cited.clone(),
                        });
                    }
                }
                let step = Step {
                    label: label.to_string(),
                    kind,
                    by,
                    line,
                };
                s.justify(&step)?;
                s.steps.push(step);
            }
            other => return Err(syntax(line, format!("unknown line `{other}`"))),
        }
    }
    Ok(s)
}

impl ReplayScript {
    fn justify(&self, step: &Step) -> Result<(), ReplayParseError> {
        let StepKind::Check { property, .. } = &step.kind else {
            return Ok(());
        };
        if step.by.iter().any(|b| b == "cases") {
            return Ok(());
        }
        let cited: Vec<&Step> = self.steps.iter().filter(|s| step.by.contains(&s.label)).collect();
        for a in property.assumptions() {
            let premise = self.given.iter().any(|g| g.vertex == a.vertex && g.color == a.color);
            let mut forced_about_it = cited.iter().filter_map(|s| match &s.kind {
                StepKind::Check {
                    property: Property::Forced { at, states, .. },
                    ..
                } if *at == a.vertex => Some(states),
                _ => None,
            });
            let ok = premise
                || match forced_about_it.next() {
                    Some(states) => !states.is_empty() && states.iter().all(|&(c, _)| c == a.color),
                    // an enumeration or counting step carries the case
                    None => cited.iter().any(|s| {
                        !matches!(
                            &s.kind,
                            StepKind::Check {
                                property: Property::Forced { .. },
                                ..
                            }
                        )
                    }),
                };
            if !ok {
                return Err(ReplayParseError::Unjustified {
                    line: step.line,
                    label: step.label.clone(),
                    assumption: a.to_string(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReplayError {
    #[error("unknown gadget `{0}`")]
    UnknownGadget(String),
    #[error("step `{step}`: unknown vertex `{vertex}` in restriction")]
    UnknownVertex { step: String, vertex: String },
    #[error("step `{step}`: {source}")]
    Verify { step: String, source: VerifyError },
}

fn materialize(r: &GadgetRef, gadgets: &BTreeMap<String, Graph>, step: &str) -> Result<Graph, ReplayError> {
    let base = match gadgets.get(&r.name) {
        Some(g) => g.clone(),
        None => families::by_name(&r.name).ok_or_else(|| ReplayError::UnknownGadget(r.name.clone()))?,
    };
    let resolve = |names: &[String]| -> Result<BTreeSet<Vertex>, ReplayError> {
        names
            .iter()
            .map(|n| {
                base.resolve(n).map_err(|_| ReplayError::UnknownVertex {
                    step: step.to_string(),
                    vertex: n.clone(),
                })
            })
            .collect()
    };
    Ok(match &r.restriction {
        None => base,
        Some(Restriction::Keep(names)) => base.induced(&resolve(names)?),
        Some(Restriction::Delete(names)) => {
            let gone = resolve(names)?;
            base.induced(&base.vertices().filter(|v| !gone.contains(v)).collect())
        }
    })
}

/// Runs every step in order and stops at the first one that fails.
pub fn replay_proof(
    script: &ReplayScript,
    gadgets: &BTreeMap<String, Graph>,
    opts: &SolveOptions,
) -> Result<ReplayOutcome, ReplayError> {
    let mut done = Vec::new();
    for (index, step) in script.steps.iter().enumerate() {
        let outcome = match &step.kind {
            StepKind::Count { lhs, rhs } => {
                let (l, r): (u64, u64) = (lhs.iter().sum(), rhs.iter().sum());
                if l > r {
                    Outcome::Verified { witness: None }
                } else {
                    Outcome::Refuted {
                        reason: format!("{l} > {r} is false"),
                        counterexample: None,
                    }
                }
            }
            StepKind::Check { on, property } => {
                let g = materialize(on, gadgets, &step.label)?;
                verify_property(&g, property, opts).map_err(|source| ReplayError::Verify {
                    step: step.label.clone(),
                    source,
                })?
            }
        };
        if let Outcome::Refuted { reason, .. } = &outcome {
            return Ok(ReplayOutcome::FailedStep {
                index,
                label: step.label.clone(),
                evidence: reason.clone(),
            });
        }
        done.push((step.label.clone(), outcome));
    }
    Ok(ReplayOutcome::Verified(done))
}

impl fmt::Display for GadgetRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        match &self.restriction {
            None => Ok(()),
            Some(Restriction::Delete(v)) => write!(f, "[-{}]", v.join(",")),
            Some(Restriction::Keep(v)) => write!(f, "[{}]", v.join(",")),
        }
    }
}

impl fmt::Display for ReplayScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            writeln!(f, "script {n}")?;
        }
        if !self.given.is_empty() {
            let g: Vec<String> = self.given.iter().map(ToString::to_string).collect();
            writeln!(f, "given {}", g.join(","))?;
        }
        for s in &self.steps {
            match &s.kind {
                StepKind::Check { on, property } => {
                    let p = property.to_string();
                    write!(
                        f,
                        "step {} on {on} {}",
                        s.label,
                        p.strip_prefix("property ").unwrap_or(&p)
                    )?
                }
                StepKind::Count { lhs, rhs } => {
                    let j = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join("+");
                    write!(f, "count {} {} > {}", s.label, j(lhs), j(rhs))?
                }
            }
            if !s.by.is_empty() {
                write!(f, " by {}", s.by.join(","))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
