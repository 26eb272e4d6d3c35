//! Sidecar trace lines:
//!
//! ```text
//! copy 0 for vertex 3 -> vertices 12-20
//! copy 0 for edge 1-4 -> vertices 21-101
//! copy 0 for edge 2-3 -> vertices none
//! ```

use std::fmt;

use thiserror::Error;

use crate::graph::Vertex;

/// Input element a gadget copy was added for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Element {
    Vertex(Vertex),
    Edge(Vertex, Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEntry {
    /// Index of the copy among those added for the same element.
    pub copy: usize,
    pub element: Element,
    /// Inclusive range of the fresh ids; `None` when every gadget vertex
    /// was identified with a host vertex.
    pub vertices: Option<(Vertex, Vertex)>,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "copy {} for ", self.copy)?;
        match self.element {
            Element::Vertex(v) => write!(f, "vertex {v}")?,
            Element::Edge(u, v) => write!(f, "edge {u}-{v}")?,
        }
        match self.vertices {
            Some((lo, hi)) => write!(f, " -> vertices {lo}-{hi}"),
            None => write!(f, " -> vertices none"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

fn pair(text: &str) -> Option<(Vertex, Vertex)> {
    let (a, b) = text.split_once('-')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// Parses a trace sidecar. Blank lines and `#` comments are skipped.
pub fn parse_trace(text: &str) -> Result<Vec<TraceEntry>, TraceParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let err = || TraceParseError {
            line: idx + 1,
            message: format!("cannot parse `{body}`"),
        };
        let toks: Vec<&str> = body.split_whitespace().collect();
        let ["copy", copy, "for", kind, what, "->", "vertices", range] = toks[..] else {
            return Err(err());
        };
        let copy = copy.parse().map_err(|_| err())?;
        let element = match kind {
            "vertex" => Element::Vertex(what.parse().map_err(|_| err())?),
            "edge" => {
                let (u, v) = pair(what).ok_or_else(err)?;
                Element::Edge(u, v)
            }
            _ => return Err(err()),
        };
        let vertices = match range {
            "none" => None,
            r => {
                let (lo, hi) = pair(r).ok_or_else(err)?;
                if lo > hi {
                    return Err(err());
                }
                Some((lo, hi))
            }
        };
        out.push(TraceEntry {
            copy,
            element,
            vertices,
        });
    }
    Ok(out)
}
