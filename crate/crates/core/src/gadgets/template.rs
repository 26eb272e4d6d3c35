//! Parameterized adjacency templates.
//!
//! ```text
//! vertex a
//! family x 0..=N
//! edge a x[i] for i in 0..=N
//! edge x[i] x[i+1] for i in 0..N
//! ```
//!
//! Indices are integer sums of constants and multiples of `N` and `i`, for
//! example `2N`, `N+1`, `i-1`. Family members are named `x0`, `x1`, … and
//! every vertex becomes a terminal. Ids follow declaration order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{valid_terminal_name, Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

/// Largest graph a template may expand to.
pub const MAX_TEMPLATE_VERTICES: i64 = 1 << 20;

fn syntax(line: usize, message: impl Into<String>) -> TemplateError {
    TemplateError::Syntax {
        line,
        message: message.into(),
    }
}

/// Evaluates an index expression.
fn eval(expr: &str, n: i64, i: Option<i64>, line: usize) -> Result<i64, TemplateError> {
    if expr.is_empty() {
        return Err(syntax(line, "empty index"));
    }
    let mut total: i64 = 0;
    let mut rest = expr;
    let mut sign = 1;
    loop {
        let end = rest[1.min(rest.len())..].find(['+', '-']).map_or(rest.len(), |p| p + 1);
        let term = &rest[..end];
        let (neg, term) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        if neg {
            sign = -sign;
        }
        let digits = term.bytes().take_while(u8::is_ascii_digit).count();
        let coef: i64 = if digits == 0 {
            1
        } else {
            term[..digits]
                .parse()
                .map_err(|_| syntax(line, format!("bad number in `{expr}`")))?
        };
        let value = match &term[digits..] {
            "" if digits > 0 => 1,
            "N" => n,
            "i" => i.ok_or_else(|| syntax(line, "`i` used outside a `for` clause"))?,
            _ => return Err(syntax(line, format!("bad index `{expr}`"))),
        };
        let v = coef
            .checked_mul(value)
            .and_then(|v| v.checked_mul(sign))
            .ok_or_else(|| syntax(line, "index overflow"))?;
        total = total.checked_add(v).ok_or_else(|| syntax(line, "index overflow"))?;
        sign = 1;
        if end == rest.len() {
            return Ok(total);
        }
        rest = &rest[end..];
    }
}

fn range(text: &str, n: i64, line: usize) -> Result<std::ops::RangeInclusive<i64>, TemplateError> {
    if let Some((lo, hi)) = text.split_once("..=") {
        Ok(eval(lo, n, None, line)?..=eval(hi, n, None, line)?)
    } else if let Some((lo, hi)) = text.split_once("..") {
        let hi = eval(hi, n, None, line)?;
        Ok(eval(lo, n, None, line)?..=hi - 1)
    } else {
        Err(syntax(line, format!("bad range `{text}`")))
    }
}

struct Names {
    plain: BTreeMap<String, Vertex>,
    families: BTreeMap<String, (i64, i64, Vertex)>,
}

impl Names {
    fn lookup(&self, r: &str, n: i64, i: Option<i64>, line: usize) -> Result<Vertex, TemplateError> {
        if let Some((fam, idx)) = r.split_once('[') {
            let idx = idx
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, format!("bad reference `{r}`")))?;
            let &(lo, hi, base) = self
                .families
                .get(fam)
                .ok_or_else(|| syntax(line, format!("unknown family `{fam}`")))?;
            let k = eval(idx, n, i, line)?;
            if k < lo || k > hi {
                return Err(syntax(line, format!("index {k} outside {fam}[{lo}..={hi}]")));
            }
            Ok(base + (k - lo) as Vertex)
        } else {
            self.plain
                .get(r)
                .copied()
                .ok_or_else(|| syntax(line, format!("unknown vertex `{r}`")))
        }
    }
}

/// Expands `text` with the parameter `N = n`.
pub fn parse_template(text: &str, n: i64) -> Result<Graph, TemplateError> {
    let mut g = Graph::new("template");
    let mut names = Names {
        plain: BTreeMap::new(),
        families: BTreeMap::new(),
    };
    let declare = |g: &mut Graph, name: String, line: usize| -> Result<Vertex, TemplateError> {
        let v = g.add_fresh_vertex();
        g.set_terminal(name, v)
            .map_err(|source| TemplateError::Graph { line, source })?;
        Ok(v)
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[..] {
            ["vertex", name] => {
                if !valid_terminal_name(name) || names.families.contains_key(name) {
                    return Err(syntax(line, format!("bad vertex name `{name}`")));
                }
                let v = declare(&mut g, name.to_string(), line)?;
                if names.plain.insert(name.to_string(), v).is_some() {
                    return Err(syntax(line, format!("duplicate vertex `{name}`")));
                }
            }
            ["family", name, r] => {
                if !name.chars().all(|c| c.is_ascii_alphabetic())
                    || names.families.contains_key(name)
                    || names.plain.contains_key(name)
                {
                    return Err(syntax(line, format!("bad family name `{name}`")));
                }
                let r = range(r, n, line)?;
                let (lo, hi) = (*r.start(), *r.end());
                if lo < 0 || hi < lo || hi - lo >= MAX_TEMPLATE_VERTICES - g.vertex_count() as i64 {
                    return Err(syntax(line, format!("bad family range {lo}..={hi}")));
                }
                let base = g.next_id();
                for k in lo..=hi {
                    declare(&mut g, format!("{name}{k}"), line)?;
                }
                names.families.insert(name.to_string(), (lo, hi, base));
            }
            ["edge", u, v] => {
                let (u, v) = (names.lookup(u, n, None, line)?, names.lookup(v, n, None, line)?);
                g.add_edge(u, v)
                    .map_err(|source| TemplateError::Graph { line, source })?;
            }
            ["edge", u, v, "for", "i", "in", r] => {
                for i in range(r, n, line)? {
                    let (a, b) = (names.lookup(u, n, Some(i), line)?, names.lookup(v, n, Some(i), line)?);
                    g.add_edge(a, b)
                        .map_err(|source| TemplateError::Graph { line, source })?;
                }
            }
            _ => return Err(syntax(line, format!("cannot parse `{body}`"))),
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        assert_eq!(eval("2N", 6, None, 1).unwrap(), 12);
        assert_eq!(eval("N+1", 6, None, 1).unwrap(), 7);
        assert_eq!(eval("i-1", 6, Some(3), 1).unwrap(), 2);
        assert_eq!(eval("-3+2N-i", 6, Some(1), 1).unwrap(), 8);
        for bad in ["", "N*2", "k", "2x", "i", "+", "1--"] {
            assert!(eval(bad, 6, None, 1).is_err(), "{bad}");
        }
    }

    #[test]
    fn fan() {
        let t = "vertex c\nfamily x 0..=N\nedge c x[i] for i in 0..=N\nedge x[i] x[i+1] for i in 0..N\n";
        let g = parse_template(t, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 7));
        assert_eq!(g.terminal("x3"), Some(4));
        assert!(parse_template("family x 0..=N\nedge x[0] x[N+1]\n", 3).is_err());
        assert!(parse_template("vertex a\nedge a a\n", 3).is_err());
        assert!(parse_template("vertex a\nvertex a\n", 3).is_err());
    }
}
