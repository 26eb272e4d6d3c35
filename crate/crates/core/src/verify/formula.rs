//! Boolean patterns over terminal states.
//!
//! ```text
//! formula := conj ('|' conj)*
//! conj    := unary ('&' unary)*
//! unary   := '!' unary | '(' formula ')' | atom
//! atom    := color(v,c) | same(u,v) | diff(u,v) | sat(v) | unsat(v)
//!          | defect(v,d) | true | false
//! ```
//!
//! Colors are 1-based. `sat(v)` holds when `v` has exactly as many
//! same-colored neighbors as its class allows.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::valid_terminal_name;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Color(String, usize),
    Same(String, String),
    Diff(String, String),
    Sat(String),
    Unsat(String),
    Defect(String, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pattern: {0}")]
pub struct FormulaError(pub String);

impl Atom {
    pub fn vertices(&self) -> Vec<&str> {
        match self {
            Atom::Color(v, _) | Atom::Sat(v) | Atom::Unsat(v) | Atom::Defect(v, _) => vec![v],
            Atom::Same(u, v) | Atom::Diff(u, v) => vec![u, v],
        }
    }

    /// Whether the atom looks at the defect of `v`, not only its color.
    pub fn needs_defect(&self, v: &str) -> bool {
        matches!(self, Atom::Sat(u) | Atom::Unsat(u) | Atom::Defect(u, _) if u == v)
    }
}

impl Formula {
    /// Evaluates with `atom` deciding each atom.
    pub fn eval(&self, atom: &mut impl FnMut(&Atom) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => atom(a),
            Formula::Not(f) => !f.eval(atom),
            Formula::And(fs) => fs.iter().all(|f| f.eval(atom)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(atom)),
        }
    }

    /// Three-valued evaluation: `None` for atoms, and formulas, whose value
    /// is not yet known.
    pub fn eval_partial(&self, atom: &mut impl FnMut(&Atom) -> Option<bool>) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Atom(a) => atom(a),
            Formula::Not(f) => f.eval_partial(atom).map(|b| !b),
            Formula::And(fs) => {
                let mut known = true;
                for f in fs {
                    match f.eval_partial(atom) {
                        Some(false) => return Some(false),
                        None => known = false,
                        Some(true) => {}
                    }
                }
                known.then_some(true)
            }
            Formula::Or(fs) => {
                let mut known = true;
                for f in fs {
                    match f.eval_partial(atom) {
                        Some(true) => return Some(true),
                        None => known = false,
                        Some(false) => {}
                    }
                }
                known.then_some(false)
            }
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.push(a),
            Formula::Not(f) => f.collect(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect(out)),
        }
    }

    pub fn vertices(&self) -> BTreeSet<&str> {
        self.atoms().into_iter().flat_map(Atom::vertices).collect()
    }

    /// Largest color index mentioned, 0-based.
    pub fn max_color(&self) -> Option<usize> {
        self.atoms()
            .into_iter()
            .filter_map(|a| match a {
                Atom::Color(_, c) => Some(*c),
                _ => None,
            })
            .max()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Comma,
    Not,
    And,
    Or,
    Word(&'a str),
}

fn is_name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b"_'/.:-".contains(&b)
}

fn lex(s: &str) -> Result<Vec<Tok<'_>>, FormulaError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' => i += 1,
            b'(' => {
                out.push(Tok::Open);
                i += 1
            }
            b')' => {
                out.push(Tok::Close);
                i += 1
            }
            b',' => {
                out.push(Tok::Comma);
                i += 1
            }
            b'!' => {
                out.push(Tok::Not);
                i += 1
            }
            b'&' => {
                out.push(Tok::And);
                i += 1
            }
            b'|' => {
                out.push(Tok::Or);
                i += 1
            }
            _ if is_name_byte(b) => {
                let start = i;
                while i < bytes.len() && is_name_byte(bytes[i]) {
                    i += 1;
                }
                out.push(Tok::Word(&s[start..i]));
            }
            _ => {
                let ch = s[i..].chars().next().unwrap();
                return Err(FormulaError(format!("unexpected `{ch}`")));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok<'a>> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok<'static>) -> Result<(), FormulaError> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(FormulaError(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn formula(&mut self, depth: usize) -> Result<Formula, FormulaError> {
        if depth > 64 {
            return Err(FormulaError("nesting too deep".into()));
        }
        let mut parts = vec![self.conj(depth)?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            parts.push(self.conj(depth)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conj(&mut self, depth: usize) -> Result<Formula, FormulaError> {
        let mut parts = vec![self.unary(depth)?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            parts.push(self.unary(depth)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self, depth: usize) -> Result<Formula, FormulaError> {
        match self.next() {
            Some(Tok::Not) => Ok(Formula::Not(Box::new(self.unary(depth + 1)?))),
            Some(Tok::Open) => {
                let f = self.formula(depth + 1)?;
                self.expect(Tok::Close)?;
                Ok(f)
            }
            Some(Tok::Word("true")) => Ok(Formula::True),
            Some(Tok::Word("false")) => Ok(Formula::False),
            Some(Tok::Word(head)) => self.atom(head),
            other => Err(FormulaError(format!("unexpected {other:?}"))),
        }
    }

    fn name(&mut self) -> Result<String, FormulaError> {
        match self.next() {
            Some(Tok::Word(w)) if valid_terminal_name(w) => Ok(w.to_string()),
            other => Err(FormulaError(format!("expected a vertex name, found {other:?}"))),
        }
    }

    fn number(&mut self) -> Result<u32, FormulaError> {
        match self.next() {
            Some(Tok::Word(w)) if !w.is_empty() && w.bytes().all(|b| b.is_ascii_digit()) => w
                .parse()
                .map_err(|_| FormulaError(format!("number `{w}` out of range"))),
            other => Err(FormulaError(format!("expected a number, found {other:?}"))),
        }
    }

    fn atom(&mut self, head: &str) -> Result<Formula, FormulaError> {
        self.expect(Tok::Open)?;
        let atom = match head {
            "color" => {
                let v = self.name()?;
                self.expect(Tok::Comma)?;
                let c = self.number()?;
                if c == 0 {
                    return Err(FormulaError("colors are 1-indexed".into()));
                }
                Atom::Color(v, c as usize - 1)
            }
            "same" | "diff" => {
                let u = self.name()?;
                self.expect(Tok::Comma)?;
                let v = self.name()?;
                if head == "same" {
                    Atom::Same(u, v)
                } else {
                    Atom::Diff(u, v)
                }
            }
            "sat" => Atom::Sat(self.name()?),
            "unsat" => Atom::Unsat(self.name()?),
            "defect" => {
                let v = self.name()?;
                self.expect(Tok::Comma)?;
                Atom::Defect(v, self.number()?)
            }
            other => return Err(FormulaError(format!("unknown atom `{other}`"))),
        };
        self.expect(Tok::Close)?;
        Ok(Formula::Atom(atom))
    }
}

pub fn parse_formula(s: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    if p.toks.is_empty() {
        return Err(FormulaError("empty pattern".into()));
    }
    let f = p.formula(0)?;
    if p.pos != p.toks.len() {
        return Err(FormulaError(format!("trailing input at token {}", p.pos)));
    }
    Ok(f)
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Color(v, c) => write!(f, "color({v},{})", c + 1),
            Atom::Same(u, v) => write!(f, "same({u},{v})"),
            Atom::Diff(u, v) => write!(f, "diff({u},{v})"),
            Atom::Sat(v) => write!(f, "sat({v})"),
            Atom::Unsat(v) => write!(f, "unsat({v})"),
            Atom::Defect(v, d) => write!(f, "defect({v},{d})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, fs: &[Formula], sep: &str) -> fmt::Result {
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                match g {
                    Formula::And(_) | Formula::Or(_) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
            }
            Ok(())
        }
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => match **g {
                Formula::And(_) | Formula::Or(_) => write!(f, "!({g})"),
                _ => write!(f, "!{g}"),
            },
            Formula::And(fs) => join(f, fs, " & "),
            Formula::Or(fs) => join(f, fs, " | "),
        }
    }
}
