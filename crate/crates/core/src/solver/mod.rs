//! Exact `(d1,…,dl)`-coloring: checking, solving with precolored vertices
//! and residual budgets, forced-state queries, an enumeration oracle, and
//! minimization of non-colorable graphs.
//!
//! Colors are 0-based in the API and 1-based in every text form.

mod brute;
mod engine;
mod forced;
mod minimize;

pub use brute::{brute_force_solutions, brute_force_solve, BRUTE_FORCE_LIMIT};
pub use engine::{solve, solve_requirements, SolveOptions, SolveStats};
pub use forced::{forced_states, State};
pub use minimize::{minimize_noncolorable, MinimizeError};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};

/// Maximum number of color classes.
pub const MAX_COLORS: usize = 16;

/// Per-class defect bounds `(d1,…,dl)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSpec {
    defects: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("a color spec needs at least one class")]
    Empty,
    #[error("at most {MAX_COLORS} classes are supported")]
    TooManyClasses,
    #[error("bad defect `{0}`")]
    BadDefect(String),
}

impl ColorSpec {
    pub fn new(defects: Vec<u32>) -> Result<Self, SpecError> {
        if defects.is_empty() {
            return Err(SpecError::Empty);
        }
        if defects.len() > MAX_COLORS {
            return Err(SpecError::TooManyClasses);
        }
        Ok(ColorSpec { defects })
    }

    pub fn classes(&self) -> usize {
        self.defects.len()
    }

    pub fn defect(&self, color: usize) -> u32 {
        self.defects[color]
    }

    pub fn defects(&self) -> &[u32] {
        &self.defects
    }

    /// Componentwise `self <= other` with the same number of classes.
    pub fn dominated_by(&self, other: &ColorSpec) -> bool {
        self.classes() == other.classes() && self.defects.iter().zip(&other.defects).all(|(a, b)| a <= b)
    }
}

impl FromStr for ColorSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        let defects = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(SpecError::BadDefect(t.to_string()));
                }
                t.parse::<u32>().map_err(|_| SpecError::BadDefect(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ColorSpec::new(defects)
    }
}

impl fmt::Display for ColorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.defects.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A precolored vertex. `budget` is the number of same-colored neighbors it
/// may still have among all its neighbors in the graph being solved; `0`
/// means "no neighbor of its color".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assumption {
    pub vertex: Vertex,
    pub color: usize,
    pub budget: Option<u32>,
}

/// Assumption with a symbolic vertex reference, as written in text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NamedAssumption {
    pub vertex: String,
    pub color: usize,
    pub budget: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssumptionParseError {
    #[error("expected `<vertex>=<color>[:<budget>]`, got `{0}`")]
    Shape(String),
    #[error("colors are 1-indexed, got `{0}`")]
    Color(String),
    #[error("bad budget `{0}`")]
    Budget(String),
}

impl FromStr for NamedAssumption {
    type Err = AssumptionParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (vertex, rest) = s
            .split_once('=')
            .ok_or_else(|| AssumptionParseError::Shape(s.to_string()))?;
        if vertex.is_empty() || !crate::graph::valid_terminal_name(vertex) {
            return Err(AssumptionParseError::Shape(s.to_string()));
        }
        let (color, budget) = match rest.split_once(':') {
            Some((c, b)) => (c, Some(b)),
            None => (rest, None),
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(color) {
            return Err(AssumptionParseError::Color(color.to_string()));
        }
        let color: usize = color
            .parse()
            .map_err(|_| AssumptionParseError::Color(color.to_string()))?;
        if color == 0 {
            return Err(AssumptionParseError::Color("0".into()));
        }
        let budget = match budget {
            Some(b) if digits(b) => Some(b.parse().map_err(|_| AssumptionParseError::Budget(b.to_string()))?),
            Some(b) => return Err(AssumptionParseError::Budget(b.to_string())),
            None => None,
        };
        Ok(NamedAssumption {
            vertex: vertex.to_string(),
            color: color - 1,
            budget,
        })
    }
}

impl fmt::Display for NamedAssumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.vertex, self.color + 1)?;
        if let Some(b) = self.budget {
            write!(f, ":{b}")?;
        }
        Ok(())
    }
}

/// Parses a comma- or whitespace-separated list such as `x=1:0,y=2`.
pub fn parse_assumptions(text: &str) -> Result<Vec<NamedAssumption>, AssumptionParseError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

impl NamedAssumption {
    pub fn resolve(&self, g: &Graph) -> Result<Assumption, GraphError> {
        Ok(Assumption {
            vertex: g.resolve(&self.vertex)?,
            color: self.color,
            budget: self.budget,
        })
    }
}

/// Internal form of a precolored vertex: fixed color plus bounds on the
/// number of same-colored neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Requirement {
    pub vertex: Vertex,
    pub color: usize,
    pub max_same: u32,
    pub min_same: u32,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("search timed out after {elapsed:?} and {nodes} nodes")]
    Timeout { elapsed: Duration, nodes: u64 },
    #[error("invalid assumption: {0}")]
    InvalidAssumption(String),
    #[error("instance too large for enumeration ({0} candidate colorings)")]
    TooLarge(f64),
}

pub(crate) fn requirements(
    g: &Graph,
    spec: &ColorSpec,
    assumptions: &[Assumption],
) -> Result<Vec<Requirement>, SolveError> {
    let mut seen = std::collections::HashSet::new();
    assumptions
        .iter()
        .map(|a| {
            if !g.contains(a.vertex) {
                return Err(SolveError::InvalidAssumption(format!("unknown vertex {}", a.vertex)));
            }
            if a.color >= spec.classes() {
                return Err(SolveError::InvalidAssumption(format!(
                    "color {} out of range for spec {spec}",
                    a.color + 1
                )));
            }
            let d = spec.defect(a.color);
            if a.budget.is_some_and(|b| b > d) {
                return Err(SolveError::InvalidAssumption(format!(
                    "budget {} exceeds bound {d} of color {}",
                    a.budget.unwrap(),
                    a.color + 1
                )));
            }
            if !seen.insert(a.vertex) {
                return Err(SolveError::InvalidAssumption(format!(
                    "vertex {} assumed twice",
                    a.vertex
                )));
            }
            Ok(Requirement {
                vertex: a.vertex,
                color: a.color,
                max_same: a.budget.unwrap_or(d),
                min_same: 0,
            })
        })
        .collect()
}

/// Vertex → color map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coloring(pub BTreeMap<Vertex, usize>);

impl Coloring {
    pub fn get(&self, v: Vertex) -> Option<usize> {
        self.0.get(&v).copied()
    }

    /// Number of neighbors of `v` sharing its color.
    pub fn defect(&self, g: &Graph, v: Vertex) -> u32 {
        let c = self.0[&v];
        g.neighbors(v).filter(|u| self.0.get(u) == Some(&c)).count() as u32
    }

    /// `v <id> <color> <defect>` lines, colors 1-based.
    pub fn certificate_lines(&self, g: &Graph) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        for (&v, &c) in &self.0 {
            let _ = writeln!(out, "v {v} {} {}", c + 1, self.defect(g, v));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Coloring),
    Unsat,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn certificate(&self) -> Option<&Coloring> {
        match self {
            Verdict::Sat(c) => Some(c),
            Verdict::Unsat => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `v` has more same-colored neighbors than its class (or budget) allows.
    Defect {
        vertex: Vertex,
        color: usize,
        defect: u32,
        bound: u32,
    },
    /// `v` is not colored as assumed.
    WrongColor {
        vertex: Vertex,
        expected: usize,
        actual: usize,
    },
    /// `v` has fewer same-colored neighbors than required.
    TooFew { vertex: Vertex, defect: u32, required: u32 },
}

impl Violation {
    pub fn vertex(&self) -> Vertex {
        match self {
            Violation::Defect { vertex, .. }
            | Violation::WrongColor { vertex, .. }
            | Violation::TooFew { vertex, .. } => *vertex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("coloring misses vertex {0}")]
    Partial(Vertex),
    #[error("coloring uses color {color} at vertex {vertex}, spec has {classes} classes")]
    ColorOutOfRange {
        vertex: Vertex,
        color: usize,
        classes: usize,
    },
}

/// `Ok(None)` if `c` is a valid coloring respecting every assumption,
/// `Ok(Some(v))` naming the first violation in vertex order.
pub fn check_coloring(
    g: &Graph,
    spec: &ColorSpec,
    c: &Coloring,
    assumptions: &[Assumption],
) -> Result<Option<Violation>, CheckError> {
    let reqs: Vec<Requirement> = assumptions
        .iter()
        .map(|a| Requirement {
            vertex: a.vertex,
            color: a.color,
            max_same: a.budget.unwrap_or(u32::MAX),
            min_same: 0,
        })
        .collect();
    check_requirements(g, spec, c, &reqs)
}

pub fn check_requirements(
    g: &Graph,
    spec: &ColorSpec,
    c: &Coloring,
    reqs: &[Requirement],
) -> Result<Option<Violation>, CheckError> {
    for v in g.vertices() {
        let col = c.get(v).ok_or(CheckError::Partial(v))?;
        if col >= spec.classes() {
            return Err(CheckError::ColorOutOfRange {
                vertex: v,
                color: col,
                classes: spec.classes(),
            });
        }
    }
    let by_vertex: BTreeMap<Vertex, &Requirement> = reqs.iter().map(|r| (r.vertex, r)).collect();
    for v in g.vertices() {
        let col = c.0[&v];
        let defect = c.defect(g, v);
        let mut bound = spec.defect(col);
        if let Some(r) = by_vertex.get(&v) {
            if r.color != col {
                return Ok(Some(Violation::WrongColor {
                    vertex: v,
                    expected: r.color,
                    actual: col,
                }));
            }
            bound = bound.min(r.max_same);
            if defect < r.min_same {
                return Ok(Some(Violation::TooFew {
                    vertex: v,
                    defect,
                    required: r.min_same,
                }));
            }
        }
        if defect > bound {
            return Ok(Some(Violation::Defect {
                vertex: v,
                color: col,
                defect,
                bound,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn spec(s: &str) -> ColorSpec {
        s.parse().unwrap()
    }

    fn coloring(pairs: &[(Vertex, usize)]) -> Coloring {
        Coloring(pairs.iter().copied().collect())
    }

    #[test]
    fn spec_text() {
        assert_eq!(spec("1,0").defects(), &[1, 0]);
        assert_eq!(spec("0,0,0").to_string(), "0,0,0");
        assert!("".parse::<ColorSpec>().is_err());
        assert!("1,,0".parse::<ColorSpec>().is_err());
        assert!("a".parse::<ColorSpec>().is_err());
        assert!(spec("1,0").dominated_by(&spec("2,0")));
        assert!(!spec("1,1").dominated_by(&spec("2,0")));
    }

    #[test]
    fn assumption_text() {
        let a: NamedAssumption = "x=2:0".parse().unwrap();
        assert_eq!(
            a,
            NamedAssumption {
                vertex: "x".into(),
                color: 1,
                budget: Some(0)
            }
        );
        assert_eq!(a.to_string(), "x=2:0");
        assert!("x=0".parse::<NamedAssumption>().is_err());
        assert!("x".parse::<NamedAssumption>().is_err());
        assert!("x=1:".parse::<NamedAssumption>().is_err());
        assert_eq!(parse_assumptions("a=1, b=2:1").unwrap().len(), 2);
    }

    #[test]
    fn check_examples() {
        let c4 = cycle(4);
        let alt = coloring(&[(0, 0), (1, 1), (2, 0), (3, 1)]);
        assert_eq!(check_coloring(&c4, &spec("0,0"), &alt, &[]).unwrap(), None);

        let k4 = complete(4);
        let mono = coloring(&[(0, 0), (1, 0), (2, 0), (3, 0)]);
        let v = check_coloring(&k4, &spec("2,2"), &mono, &[]).unwrap().unwrap();
        assert_eq!(
            v,
            Violation::Defect {
                vertex: 0,
                color: 0,
                defect: 3,
                bound: 2
            }
        );

        let split = coloring(&[(0, 0), (1, 0), (2, 1), (3, 1)]);
        assert_eq!(check_coloring(&k4, &spec("1,1"), &split, &[]).unwrap(), None);
    }

    #[test]
    fn check_respects_assumptions() {
        let p = path(3);
        let c = coloring(&[(0, 0), (1, 0), (2, 1)]);
        let s = spec("1,0");
        assert_eq!(check_coloring(&p, &s, &c, &[]).unwrap(), None);
        let a = Assumption {
            vertex: 0,
            color: 0,
            budget: Some(0),
        };
        assert!(matches!(
            check_coloring(&p, &s, &c, &[a]).unwrap(),
            Some(Violation::Defect { vertex: 0, .. })
        ));
        let a = Assumption {
            vertex: 2,
            color: 0,
            budget: None,
        };
        assert!(matches!(
            check_coloring(&p, &s, &c, &[a]).unwrap(),
            Some(Violation::WrongColor { vertex: 2, .. })
        ));
    }

    #[test]
    fn partial_coloring_is_an_error() {
        let c = coloring(&[(0, 0)]);
        assert_eq!(
            check_coloring(&path(2), &spec("0,0"), &c, &[]),
            Err(CheckError::Partial(1))
        );
    }
}
