//! Line-oriented graph files:
//!
//! ```text
//! # comment
//! graph <name>
//! v <id>
//! e <id> <id>
//! t <name> <id>
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{valid_terminal_name, Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: input is not valid UTF-8")]
    Encoding { line: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Encoding { line } | ParseError::Syntax { line, .. } | ParseError::Graph { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<Vertex, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, "missing vertex id"))?;
    if !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(line, format!("bad vertex id `{tok}`")));
    }
    tok.parse()
        .map_err(|_| syntax(line, format!("vertex id `{tok}` out of range")))
}

/// Parses a graph file. Edges must reference previously declared vertices.
pub fn parse_graph(text: &[u8]) -> Result<Graph, ParseError> {
    let mut g = Graph::default();
    let mut named = false;
    for (idx, raw) in text.split(|&b| b == b'\n').enumerate() {
        let line = idx + 1;
        let raw = std::str::from_utf8(raw).map_err(|_| ParseError::Encoding { line })?;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut toks = body.split_whitespace();
        let directive = toks.next().unwrap();
        let graph_err = |source| ParseError::Graph { line, source };
        match directive {
            "graph" => {
                if named {
                    return Err(syntax(line, "second `graph` line"));
                }
                let name: Vec<&str> = toks.collect();
                if name.is_empty() {
                    return Err(syntax(line, "missing graph name"));
                }
                g.set_name(name.join(" "));
                named = true;
                continue;
            }
            "v" => {
                let v = parse_id(toks.next(), line)?;
                g.add_vertex(v).map_err(graph_err)?;
            }
            "e" => {
                let u = parse_id(toks.next(), line)?;
                let v = parse_id(toks.next(), line)?;
                if u == v {
                    return Err(graph_err(GraphError::SelfLoop(u)));
                }
                g.add_edge(u, v).map_err(graph_err)?;
            }
            "t" => {
                let name = toks.next().ok_or_else(|| syntax(line, "missing terminal name"))?;
                if !valid_terminal_name(name) {
                    return Err(graph_err(GraphError::InvalidTerminalName(name.to_string())));
                }
                let v = parse_id(toks.next(), line)?;
                g.set_terminal(name, v).map_err(graph_err)?;
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(syntax(line, format!("unexpected token `{extra}`")));
        }
    }
    Ok(g)
}

/// Canonical form: name, vertices ascending, edges ascending, terminals by
/// name. Comments are not preserved.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    if !g.name().is_empty() {
        let _ = writeln!(
            out,
            "graph {}",
            g.name().split_whitespace().collect::<Vec<_>>().join(" ")
        );
    }
    for v in g.vertices() {
        let _ = writeln!(out, "v {v}");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    for (name, v) in g.terminals() {
        let _ = writeln!(out, "t {name} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcribes_small_file() {
        let g = parse_graph(b"v 1\nv 2\ne 1 2\nt a 1").unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(g.terminal("a"), Some(1));
    }

    #[test]
    fn edgeless_graph() {
        let g = parse_graph(b"graph three\nv 0\nv 1\nv 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.name(), "three");
    }

    #[test]
    fn self_loop_is_an_error() {
        let err = parse_graph(b"e 1 1").unwrap_err();
        assert_eq!(
            err,
            ParseError::Graph {
                line: 1,
                source: GraphError::SelfLoop(1)
            }
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_graph(b"v 0\nv 1\ne 0 1\ne 1 0\n").unwrap_err();
        assert_eq!(err.line(), 4);
        assert!(matches!(
            err,
            ParseError::Graph {
                source: GraphError::DuplicateEdge(0, 1),
                ..
            }
        ));

        let err = parse_graph(b"v 0\n# fine\nt x 3\n").unwrap_err();
        assert_eq!(err.line(), 3);
        assert!(matches!(
            err,
            ParseError::Graph {
                source: GraphError::UnknownVertex(3),
                ..
            }
        ));

        assert_eq!(parse_graph(b"v 0\nq 1\n").unwrap_err().line(), 2);
        assert_eq!(parse_graph(b"v -1\n").unwrap_err().line(), 1);
        assert_eq!(parse_graph(b"v 0 0\n").unwrap_err().line(), 1);
    }

    #[test]
    fn canonical_output_is_sorted() {
        let g = parse_graph(b"graph g\nv 5\nv 2\nv 9\ne 9 2\ne 5 2\nt z 9\nt a 5\n").unwrap();
        assert_eq!(
            serialize_graph(&g),
            "graph g\nv 2\nv 5\nv 9\ne 2 5\ne 2 9\nt a 5\nt z 9\n"
        );
    }
}
