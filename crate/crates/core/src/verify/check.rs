use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::formula::{Atom, Formula};
use super::manifest::{Claim, Manifest, ManifestError, Property};
use crate::analysis::{degeneracy, girth, is_planar};
use crate::graph::{Graph, Vertex};
use crate::solver::{
    forced_states, requirements, solve, solve_requirements, Assumption, ColorSpec, Coloring, NamedAssumption,
    Requirement, SolveError, SolveOptions, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// `witness` is a coloring exhibiting an `exists` property.
    Verified { witness: Option<Coloring> },
    /// `counterexample` is a valid coloring that violates the claim, when the
    /// failure is witnessed by one.
    Refuted {
        reason: String,
        counterexample: Option<Coloring>,
    },
}

impl Outcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, Outcome::Verified { .. })
    }

    fn refuted(reason: impl Into<String>, counterexample: Option<Coloring>) -> Self {
        Outcome::Refuted {
            reason: reason.into(),
            counterexample,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Verified { .. } => f.write_str("verified"),
            Outcome::Refuted { reason, .. } => write!(f, "refuted: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

pub(crate) fn resolve_all(g: &Graph, assume: &[NamedAssumption]) -> Result<Vec<Assumption>, ManifestError> {
    assume
        .iter()
        .map(|a| {
            a.resolve(g)
                .map_err(|_| ManifestError::UnknownTerminal(a.vertex.clone()))
        })
        .collect()
}

fn resolve(g: &Graph, name: &str) -> Result<Vertex, ManifestError> {
    g.resolve(name)
        .map_err(|_| ManifestError::UnknownTerminal(name.to_string()))
}

/// Candidate `(color, defect)` pairs of one pattern vertex. Without defect
/// atoms the defect is left open (`None`).
fn candidate_states(
    g: &Graph,
    spec: &ColorSpec,
    v: Vertex,
    needs_defect: bool,
    fixed: Option<&Requirement>,
) -> Vec<(usize, Option<u32>)> {
    let mut out = Vec::new();
    for c in 0..spec.classes() {
        if fixed.is_some_and(|r| r.color != c) {
            continue;
        }
        if needs_defect {
            let cap = spec.defect(c).min(g.degree(v) as u32);
            let cap = fixed.map_or(cap, |r| cap.min(r.max_same));
            out.extend((0..=cap).map(|d| (c, Some(d))));
        } else {
            out.push((c, None));
        }
    }
    out
}

/// Searches for a coloring that extends `assume` and satisfies `pattern`.
/// Branches on the states of the pattern's vertices and asks the solver
/// about each partial choice.
pub(crate) fn find_matching(
    g: &Graph,
    spec: &ColorSpec,
    assume: &[Assumption],
    pattern: &Formula,
    opts: &SolveOptions,
) -> Result<Option<Coloring>, VerifyError> {
    let base = requirements(g, spec, assume)?;
    let names: Vec<&str> = pattern.vertices().into_iter().collect();
    let atoms = pattern.atoms();
    let mut verts: Vec<Vertex> = Vec::new();
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    // several names may denote one vertex
    for name in &names {
        let v = resolve(g, name)?;
        let i = verts.iter().position(|&u| u == v).unwrap_or_else(|| {
            verts.push(v);
            verts.len() - 1
        });
        index.insert(name, i);
    }
    let by_vertex: BTreeMap<Vertex, Requirement> = base.iter().map(|r| (r.vertex, *r)).collect();
    let choices: Vec<Vec<(usize, Option<u32>)>> = verts
        .iter()
        .map(|&v| {
            let needs = names
                .iter()
                .filter(|n| verts[index[*n]] == v)
                .any(|n| atoms.iter().any(|a| a.needs_defect(n)));
            candidate_states(g, spec, v, needs, by_vertex.get(&v))
        })
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut search = Search {
        g,
        spec,
        pattern,
        opts,
        verts: &verts,
        index: &index,
        choices: &choices,
        base: &by_vertex,
        pick: Vec::new(),
    };
    search.dfs()
}

struct Search<'a> {
    g: &'a Graph,
    spec: &'a ColorSpec,
    pattern: &'a Formula,
    opts: &'a SolveOptions,
    verts: &'a [Vertex],
    index: &'a BTreeMap<&'a str, usize>,
    choices: &'a [Vec<(usize, Option<u32>)>],
    base: &'a BTreeMap<Vertex, Requirement>,
    /// Chosen state index of each decided pattern vertex, in order.
    pick: Vec<usize>,
}

impl Search<'_> {
    fn state(&self, name: &str) -> Option<(usize, Option<u32>)> {
        let i = self.index[name];
        self.pick.get(i).map(|&p| self.choices[i][p])
    }

    fn value(&self) -> Option<bool> {
        let spec = self.spec;
        self.pattern.eval_partial(&mut |a: &Atom| match a {
            Atom::Color(v, c) => Some(self.state(v)?.0 == *c),
            Atom::Same(u, v) => Some(self.state(u)?.0 == self.state(v)?.0),
            Atom::Diff(u, v) => Some(self.state(u)?.0 != self.state(v)?.0),
            Atom::Sat(v) => {
                let (c, d) = self.state(v)?;
                Some(d == Some(spec.defect(c)))
            }
            Atom::Unsat(v) => {
                let (c, d) = self.state(v)?;
                Some(d != Some(spec.defect(c)))
            }
            Atom::Defect(v, want) => Some(self.state(v)?.1 == Some(*want)),
        })
    }

    /// Solves with the decided states imposed; `None` if they conflict.
    fn solve_prefix(&self) -> Result<Option<Coloring>, VerifyError> {
        let mut reqs = self.base.clone();
        for (i, &p) in self.pick.iter().enumerate() {
            let v = self.verts[i];
            let (c, d) = self.choices[i][p];
            let r = reqs.entry(v).or_insert(Requirement {
                vertex: v,
                color: c,
                max_same: self.spec.defect(c),
                min_same: 0,
            });
            if r.color != c {
                return Ok(None);
            }
            if let Some(d) = d {
                if d > r.max_same {
                    return Ok(None);
                }
                r.max_same = d;
                r.min_same = d;
            }
        }
        let reqs: Vec<Requirement> = reqs.into_values().collect();
        match solve_requirements(self.g, self.spec, &reqs, self.opts)? {
            (Verdict::Sat(c), _) => Ok(Some(c)),
            _ => Ok(None),
        }
    }

    /// Decides pattern vertices in order, pruning on a false pattern or an
    /// uncolorable prefix. Once the pattern is true any coloring will do.
    fn dfs(&mut self) -> Result<Option<Coloring>, VerifyError> {
        let value = self.value();
        if value == Some(false) {
            return Ok(None);
        }
        let found = self.solve_prefix()?;
        if found.is_none() || value == Some(true) {
            if let Some(c) = &found {
                debug_assert!(pattern_holds(self.g, self.spec, c, self.pattern).unwrap_or(false));
            }
            return Ok(found);
        }
        let i = self.pick.len();
        for p in 0..self.choices[i].len() {
            self.pick.push(p);
            let r = self.dfs()?;
            self.pick.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }
}

/// Evaluates `pattern` on a full coloring. Saturation is read off the
/// coloring's own defects.
pub fn pattern_holds(g: &Graph, spec: &ColorSpec, c: &Coloring, pattern: &Formula) -> Result<bool, ManifestError> {
    for name in pattern.vertices() {
        resolve(g, name)?;
    }
    let v = |name: &str| g.resolve(name).unwrap();
    Ok(pattern.eval(&mut |a: &Atom| match a {
        Atom::Color(x, col) => c.get(v(x)) == Some(*col),
        Atom::Same(x, y) => c.get(v(x)) == c.get(v(y)),
        Atom::Diff(x, y) => c.get(v(x)) != c.get(v(y)),
        Atom::Sat(x) => c.defect(g, v(x)) == spec.defect(c.0[&v(x)]),
        Atom::Unsat(x) => c.defect(g, v(x)) != spec.defect(c.0[&v(x)]),
        Atom::Defect(x, d) => c.defect(g, v(x)) == *d,
    }))
}

/// Decides one property on `g` with the solver.
pub fn verify_property(g: &Graph, p: &Property, opts: &SolveOptions) -> Result<Outcome, VerifyError> {
    p.bind(g)?;
    let spec = p.spec();
    let assume = resolve_all(g, p.assumptions())?;
    Ok(match p {
        Property::Noncolorable { .. } | Property::Unextendable { .. } => match solve(g, spec, &assume, opts)? {
            Verdict::Unsat => Outcome::Verified { witness: None },
            Verdict::Sat(c) => Outcome::refuted("a valid coloring exists", Some(c)),
        },
        Property::SameColor { u, v, .. } => {
            let (u, v) = (resolve(g, u)?, resolve(g, v)?);
            if u != v {
                for cu in 0..spec.classes() {
                    for cv in (0..spec.classes()).filter(|&c| c != cu) {
                        let a = [
                            Assumption {
                                vertex: u,
                                color: cu,
                                budget: None,
                            },
                            Assumption {
                                vertex: v,
                                color: cv,
                                budget: None,
                            },
                        ];
                        if let Verdict::Sat(c) = solve(g, spec, &a, opts)? {
                            return Ok(Outcome::refuted(
                                format!("colors {} and {} are possible", cu + 1, cv + 1),
                                Some(c),
                            ));
                        }
                    }
                }
            }
            Outcome::Verified { witness: None }
        }
        Property::Forced { at, states, .. } => {
            let v = resolve(g, at)?;
            let got = forced_states(g, spec, &assume, v, opts)?;
            if &got == states {
                Outcome::Verified { witness: None }
            } else {
                let fmt = |s: &BTreeSet<(usize, u32)>| {
                    s.iter()
                        .map(|(c, d)| format!("({},{d})", c + 1))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                // an unexpected state comes with a coloring that shows it
                let extra = got.difference(states).next().copied();
                let counterexample = match extra {
                    Some((c, d)) => {
                        let mut reqs = requirements(g, spec, &assume)?;
                        reqs.retain(|r| r.vertex != v);
                        reqs.push(Requirement {
                            vertex: v,
                            color: c,
                            max_same: d,
                            min_same: d,
                        });
                        solve_requirements(g, spec, &reqs, opts)?.0.certificate().cloned()
                    }
                    None => None,
                };
                Outcome::refuted(
                    format!("states are {{{}}}, expected {{{}}}", fmt(&got), fmt(states)),
                    counterexample,
                )
            }
        }
        Property::Exists { pattern, .. } => match find_matching(g, spec, &assume, pattern, opts)? {
            Some(c) => Outcome::Verified { witness: Some(c) },
            None => Outcome::refuted("no coloring matches the pattern", None),
        },
        Property::Forall { cond, then, .. } => {
            let bad = Formula::And(vec![cond.clone(), Formula::Not(Box::new(then.clone()))]);
            match find_matching(g, spec, &assume, &bad, opts)? {
                None => Outcome::Verified { witness: None },
                Some(c) => Outcome::refuted("a coloring meets the condition but not the consequence", Some(c)),
            }
        }
    })
}

/// Checks a structural claim. Notes always pass.
pub fn verify_claim(g: &Graph, claim: &Claim, opts: &SolveOptions) -> Result<Outcome, VerifyError> {
    let ok = Outcome::Verified { witness: None };
    Ok(match claim {
        Claim::Property(p) => return verify_property(g, p, opts),
        Claim::Girth(want) => {
            let got = girth(g).length();
            if got == *want {
                ok
            } else {
                Outcome::refuted(
                    format!("girth is {}", got.map_or("infinite".into(), |n| n.to_string())),
                    None,
                )
            }
        }
        Claim::Degeneracy(want) => {
            let got = degeneracy(g).value;
            if got == *want {
                ok
            } else {
                Outcome::refuted(format!("degeneracy is {got}"), None)
            }
        }
        Claim::Planar(want) => {
            if is_planar(g).is_planar() == *want {
                ok
            } else {
                Outcome::refuted(
                    if *want {
                        "graph is not planar"
                    } else {
                        "graph is planar"
                    },
                    None,
                )
            }
        }
        Claim::Note(_) => ok,
    })
}

/// Checks every claim in order and returns the outcomes.
pub fn verify_manifest(g: &Graph, m: &Manifest, opts: &SolveOptions) -> Result<Vec<(Claim, Outcome)>, VerifyError> {
    m.bind(g)?;
    m.claims
        .iter()
        .map(|c| Ok((c.clone(), verify_claim(g, c, opts)?)))
        .collect()
}
