//! Line-oriented `key = value` syntax of job files.
//!
//! ```text
//! # comment
//! [bracket]
//! family = kks, L = 2
//! [checks]
//! seed = 7
//! check = jacobi_ring, mode = exhaustive
//! ```
//!
//! A value is an atom (`kks`, `3`, `-1/2`) or a bracketed list of values.
//! Several pairs may share a line, separated by commas.

use crate::error::{Error, Result};
use crate::lincomb::parse_q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Atom(String),
    List(Vec<Value>),
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Atom(a) => a.clone(),
            Value::List(items) => {
                let inner: Vec<String> = items.iter().map(Value::render).collect();
                format!("[{}]", inner.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    pub key: String,
    pub value: Value,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    /// Pairs grouped by source line.
    pub lines: Vec<Vec<Pair>>,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

fn is_atom_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '+' | '-' | '/')
}

impl Cursor {
    fn col(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        matches!(self.peek(), None | Some('#'))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(err(self.line, self.col(), format!("expected `{c}`, found `{x}`"))),
            None => Err(err(self.line, self.col(), format!("expected `{c}` before end of line"))),
        }
    }

    fn key(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == '_') {
            return Err(err(self.line, self.col(), "expected a key"));
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn value(&mut self) -> Result<Value> {
        self.skip_ws();
        if self.peek() == Some('[') {
            self.pos += 1;
            let mut items = Vec::new();
            self.skip_ws();
            if self.peek() == Some(']') {
                self.pos += 1;
                return Ok(Value::List(items));
            }
            loop {
                items.push(self.value()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(']') => {
                        self.pos += 1;
                        return Ok(Value::List(items));
                    }
                    _ => return Err(err(self.line, self.col(), "expected `,` or `]` in list")),
                }
            }
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if is_atom_char(c)) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(self.line, self.col(), "expected a value"));
        }
        let atom: String = self.chars[start..self.pos].iter().collect();
        if atom.contains('/') {
            parse_q(&atom).map_err(|m| err(self.line, start + 1, format!("malformed rational: {m}")))?;
        }
        Ok(Value::Atom(atom))
    }
}

/// Splits a job file into sections of `key = value` pairs.
pub fn parse_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let mut cur = Cursor {
            chars: raw.chars().collect(),
            pos: 0,
            line,
        };
        cur.skip_ws();
        if cur.at_end() {
            continue;
        }
        if cur.peek() == Some('[') {
            cur.pos += 1;
            let name = cur.key()?;
            cur.expect(']')?;
            cur.skip_ws();
            if !cur.at_end() {
                return Err(err(line, cur.col(), "unexpected text after section header"));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(err(line, 1, format!("duplicate section [{name}]")));
            }
            sections.push(Section {
                name,
                line,
                lines: Vec::new(),
            });
            continue;
        }
        let Some(section) = sections.last_mut() else {
            return Err(err(line, cur.col(), "key outside of any section"));
        };
        let mut pairs = Vec::new();
        loop {
            cur.skip_ws();
            let column = cur.col();
            let key = cur.key()?;
            cur.expect('=')?;
            let value = cur.value()?;
            pairs.push(Pair {
                key,
                value,
                line,
                column,
            });
            cur.skip_ws();
            if cur.at_end() {
                break;
            }
            cur.expect(',')?;
        }
        section.lines.push(pairs);
    }
    Ok(sections)
}

/// Typed access to values, reporting errors against a field path.
pub fn atom<'v>(v: &'v Value, field: &str) -> Result<&'v str> {
    match v {
        Value::Atom(a) => Ok(a),
        Value::List(_) => Err(Error::validation(field, "expected a single value, found a list")),
    }
}

pub fn list<'v>(v: &'v Value, field: &str) -> Result<&'v [Value]> {
    match v {
        Value::List(items) => Ok(items),
        Value::Atom(a) => Err(Error::validation(field, format!("expected a list, found `{a}`"))),
    }
}

pub fn uint(v: &Value, field: &str) -> Result<usize> {
    let a = atom(v, field)?;
    a.parse()
        .map_err(|_| Error::validation(field, format!("expected a non-negative integer, found `{a}`")))
}

pub fn int(v: &Value, field: &str) -> Result<i64> {
    let a = atom(v, field)?;
    a.parse()
        .map_err(|_| Error::validation(field, format!("expected an integer, found `{a}`")))
}

pub fn rational(v: &Value, field: &str) -> Result<crate::lincomb::Q> {
    let a = atom(v, field)?;
    parse_q(a).map_err(|m| Error::validation(field, m))
}

pub fn boolean(v: &Value, field: &str) -> Result<bool> {
    match atom(v, field)? {
        "true" => Ok(true),
        "false" => Ok(false),
        a => Err(Error::validation(field, format!("expected true or false, found `{a}`"))),
    }
}
