//! Property manifests.
//!
//! ```text
//! # comment
//! gadget <name>
//! property noncolorable <spec>
//! property same-color <spec> <u> <v>
//! property forced <spec> [assume <v>=<c>[:<b>],...] at <v> states (c,d)...
//! property unextendable <spec> assume <v>=<c>[:<b>],...
//! property exists <spec> [assume ...] pattern <formula>
//! property forall <spec> [assume ...] pattern <formula> => <formula>
//! girth <n>|infinite
//! degeneracy <n>
//! planar | nonplanar
//! note <text>
//! ```
//!
//! Colors in text are 1-based.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::formula::{parse_formula, Formula};
use crate::graph::{valid_terminal_name, Graph};
use crate::solver::{parse_assumptions, ColorSpec, NamedAssumption, State};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Property {
    Noncolorable {
        spec: ColorSpec,
    },
    SameColor {
        spec: ColorSpec,
        u: String,
        v: String,
    },
    Forced {
        spec: ColorSpec,
        assume: Vec<NamedAssumption>,
        at: String,
        states: BTreeSet<State>,
    },
    Unextendable {
        spec: ColorSpec,
        assume: Vec<NamedAssumption>,
    },
    Exists {
        spec: ColorSpec,
        assume: Vec<NamedAssumption>,
        pattern: Formula,
    },
    Forall {
        spec: ColorSpec,
        assume: Vec<NamedAssumption>,
        cond: Formula,
        then: Formula,
    },
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    Property(Property),
    /// `None` is infinite girth.
    Girth(Option<usize>),
    Degeneracy(usize),
    Planar(bool),
    /// Recorded but not checked.
    Note(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub gadget: Option<String>,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifestError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown terminal `{0}`")]
    UnknownTerminal(String),
    #[error("color {color} out of range for spec {spec}")]
    ColorRange { color: usize, spec: String },
}

impl Property {
    pub fn spec(&self) -> &ColorSpec {
        match self {
            Property::Noncolorable { spec }
            | Property::SameColor { spec, .. }
            | Property::Forced { spec, .. }
            | Property::Unextendable { spec, .. }
            | Property::Exists { spec, .. }
            | Property::Forall { spec, .. } => spec,
        }
    }

    pub fn assumptions(&self) -> &[NamedAssumption] {
        match self {
            Property::Forced { assume, .. }
            | Property::Unextendable { assume, .. }
            | Property::Exists { assume, .. }
            | Property::Forall { assume, .. } => assume,
            _ => &[],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Property::Noncolorable { .. } => "noncolorable",
            Property::SameColor { .. } => "same-color",
            Property::Forced { .. } => "forced",
            Property::Unextendable { .. } => "unextendable",
            Property::Exists { .. } => "exists",
            Property::Forall { .. } => "forall",
        }
    }

    /// Every vertex name the property mentions.
    pub fn names(&self) -> BTreeSet<&str> {
        let mut out: BTreeSet<&str> = self.assumptions().iter().map(|a| a.vertex.as_str()).collect();
        match self {
            Property::SameColor { u, v, .. } => {
                out.insert(u);
                out.insert(v);
            }
            Property::Forced { at, .. } => {
                out.insert(at);
            }
            Property::Exists { pattern, .. } => out.extend(pattern.vertices()),
            Property::Forall { cond, then, .. } => {
                out.extend(cond.vertices());
                out.extend(then.vertices());
            }
            _ => {}
        }
        out
    }

    /// Checks that every name resolves in `g` and every color fits the spec.
    pub fn bind(&self, g: &Graph) -> Result<(), ManifestError> {
        for name in self.names() {
            g.resolve(name)
                .map_err(|_| ManifestError::UnknownTerminal(name.to_string()))?;
        }
        let l = self.spec().classes();
        let range = |color: usize| {
            if color >= l {
                Err(ManifestError::ColorRange {
                    color: color + 1,
                    spec: self.spec().to_string(),
                })
            } else {
                Ok(())
            }
        };
        for a in self.assumptions() {
            range(a.color)?;
        }
        match self {
            Property::Forced { states, .. } => states.iter().try_for_each(|&(c, _)| range(c)),
            Property::Exists { pattern, .. } => pattern.max_color().map_or(Ok(()), range),
            Property::Forall { cond, then, .. } => {
                cond.max_color().map_or(Ok(()), range)?;
                then.max_color().map_or(Ok(()), range)
            }
            _ => Ok(()),
        }
    }
}

impl Manifest {
    pub fn properties(&self) -> impl Iterator<Item = &Property> {
        self.claims.iter().filter_map(|c| match c {
            Claim::Property(p) => Some(p),
            _ => None,
        })
    }

    pub fn bind(&self, g: &Graph) -> Result<(), ManifestError> {
        self.properties().try_for_each(|p| p.bind(g))
    }
}

const KEYWORDS: [&str; 4] = ["assume", "at", "states", "pattern"];

fn err(line: usize, message: impl Into<String>) -> ManifestError {
    ManifestError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_state(tok: &str) -> Option<State> {
    let inner = tok.strip_prefix('(')?.strip_suffix(')')?;
    let (c, d) = inner.split_once(',')?;
    let c: usize = c.trim().parse().ok()?;
    let d: u32 = d.trim().parse().ok()?;
    (c >= 1).then(|| (c - 1, d))
}

fn check_name(line: usize, name: &str) -> Result<String, ManifestError> {
    if valid_terminal_name(name) {
        Ok(name.to_string())
    } else {
        Err(err(line, format!("bad vertex name `{name}`")))
    }
}

/// Parses the body of a property line, everything after `property`.
pub fn parse_property(body: &str, line: usize) -> Result<Property, ManifestError> {
    let mut toks = body.split_whitespace();
    let kind = toks.next().ok_or_else(|| err(line, "missing property kind"))?;
    let spec: ColorSpec = toks
        .next()
        .ok_or_else(|| err(line, "missing color spec"))?
        .parse()
        .map_err(|e| err(line, format!("{e}")))?;
    let rest: Vec<&str> = toks.collect();
    if kind == "noncolorable" {
        if let Some(t) = rest.first() {
            return Err(err(line, format!("unexpected `{t}`")));
        }
        return Ok(Property::Noncolorable { spec });
    }
    if kind == "same-color" {
        let [u, v] = rest[..] else {
            return Err(err(line, "same-color takes exactly two vertices"));
        };
        return Ok(Property::SameColor {
            spec,
            u: check_name(line, u)?,
            v: check_name(line, v)?,
        });
    }

    // keyword clauses, each at most once and in grammar order
    let mut clauses: Vec<(&str, Vec<&str>)> = Vec::new();
    for t in rest {
        if KEYWORDS.contains(&t) && clauses.last().is_none_or(|(k, _)| *k != "pattern") {
            let order = |k: &str| KEYWORDS.iter().position(|x| *x == k).unwrap();
            if let Some((prev, _)) = clauses.last() {
                if order(prev) >= order(t) {
                    return Err(err(line, format!("clause `{t}` out of order")));
                }
            }
            clauses.push((t, Vec::new()));
        } else {
            match clauses.last_mut() {
                Some((_, v)) => v.push(t),
                None => return Err(err(line, format!("unexpected `{t}`"))),
            }
        }
    }
    let take = |k: &str| clauses.iter().find(|(c, _)| *c == k).map(|(_, v)| v.clone());
    let allowed: &[&str] = match kind {
        "forced" => &["assume", "at", "states"],
        "unextendable" => &["assume"],
        "exists" | "forall" => &["assume", "pattern"],
        other => return Err(err(line, format!("unknown property kind `{other}`"))),
    };
    if let Some((k, _)) = clauses.iter().find(|(k, _)| !allowed.contains(k)) {
        return Err(err(line, format!("`{k}` not allowed in {kind}")));
    }
    let assume = match take("assume") {
        Some(v) if v.is_empty() => return Err(err(line, "empty assume clause")),
        Some(v) => parse_assumptions(&v.join(",")).map_err(|e| err(line, e.to_string()))?,
        None => Vec::new(),
    };
    let mut seen = BTreeSet::new();
    for a in &assume {
        if !seen.insert(a.vertex.as_str()) {
            return Err(err(line, format!("vertex `{}` assumed twice", a.vertex)));
        }
    }
    match kind {
        "forced" => {
            let at = match take("at").as_deref() {
                Some([v]) => check_name(line, v)?,
                _ => return Err(err(line, "forced needs `at <vertex>`")),
            };
            let toks = take("states").ok_or_else(|| err(line, "forced needs `states`"))?;
            let states = toks
                .iter()
                .map(|t| parse_state(t).ok_or_else(|| err(line, format!("bad state `{t}`"))))
                .collect::<Result<BTreeSet<_>, _>>()?;
            Ok(Property::Forced {
                spec,
                assume,
                at,
                states,
            })
        }
        "unextendable" => {
            if assume.is_empty() {
                return Err(err(line, "unextendable needs assumptions"));
            }
            Ok(Property::Unextendable { spec, assume })
        }
        _ => {
            let text = take("pattern")
                .ok_or_else(|| err(line, format!("{kind} needs `pattern`")))?
                .join(" ");
            let formula = |s: &str| parse_formula(s).map_err(|e| err(line, e.to_string()));
            if kind == "exists" {
                Ok(Property::Exists {
                    spec,
                    assume,
                    pattern: formula(&text)?,
                })
            } else {
                let (cond, then) = text
                    .split_once("=>")
                    .ok_or_else(|| err(line, "forall pattern needs `=>`"))?;
                Ok(Property::Forall {
                    spec,
                    assume,
                    cond: formula(cond)?,
                    then: formula(then)?,
                })
            }
        }
    }
}

/// Parses a manifest. Terminal names are checked later by [`Manifest::bind`].
pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let mut m = Manifest::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        let claim = match head {
            "gadget" => {
                if m.gadget.is_some() {
                    return Err(err(line, "second `gadget` line"));
                }
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(err(line, "gadget name must be one word"));
                }
                m.gadget = Some(rest.to_string());
                continue;
            }
            "property" => Claim::Property(parse_property(rest, line)?),
            "girth" => match rest {
                "infinite" => Claim::Girth(None),
                n => Claim::Girth(Some(n.parse().map_err(|_| err(line, format!("bad girth `{n}`")))?)),
            },
            "degeneracy" => Claim::Degeneracy(
                rest.parse()
                    .map_err(|_| err(line, format!("bad degeneracy `{rest}`")))?,
            ),
            "planar" | "nonplanar" if rest.is_empty() => Claim::Planar(head == "planar"),
            "note" if !rest.is_empty() => Claim::Note(rest.to_string()),
            other => return Err(err(line, format!("unknown line `{other}`"))),
        };
        m.claims.push(claim);
    }
    Ok(m)
}

fn write_assume(f: &mut fmt::Formatter<'_>, assume: &[NamedAssumption]) -> fmt::Result {
    if assume.is_empty() {
        return Ok(());
    }
    let parts: Vec<String> = assume.iter().map(ToString::to_string).collect();
    write!(f, " assume {}", parts.join(","))
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "property {} {}", self.kind(), self.spec())?;
        match self {
            Property::Noncolorable { .. } => Ok(()),
            Property::SameColor { u, v, .. } => write!(f, " {u} {v}"),
            Property::Forced { assume, at, states, .. } => {
                write_assume(f, assume)?;
                write!(f, " at {at} states")?;
                for (c, d) in states {
                    write!(f, " ({},{d})", c + 1)?;
                }
                Ok(())
            }
            Property::Unextendable { assume, .. } => write_assume(f, assume),
            Property::Exists { assume, pattern, .. } => {
                write_assume(f, assume)?;
                write!(f, " pattern {pattern}")
            }
            Property::Forall { assume, cond, then, .. } => {
                write_assume(f, assume)?;
                write!(f, " pattern {cond} => {then}")
            }
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Property(p) => write!(f, "{p}"),
            Claim::Girth(Some(n)) => write!(f, "girth {n}"),
            Claim::Girth(None) => write!(f, "girth infinite"),
            Claim::Degeneracy(d) => write!(f, "degeneracy {d}"),
            Claim::Planar(true) => write!(f, "planar"),
            Claim::Planar(false) => write!(f, "nonplanar"),
            Claim::Note(s) => write!(f, "note {s}"),
        }
    }
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = &self.gadget {
            writeln!(f, "gadget {g}")?;
        }
        for c in &self.claims {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
