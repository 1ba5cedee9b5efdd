//! The subset of GML used by the classic network datasets:
//! `graph [ node [ id N ... ] edge [ source A target B ... ] ]`.
//! Unknown keys and their values, nested lists included, are skipped.

use super::{utf8, LabelTable};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Key(&'a str),
    Scalar(&'a str),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(Token<'_>, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut line = 1;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'[' => {
                out.push((Token::Open, line));
                i += 1;
            }
            b']' => {
                out.push((Token::Close, line));
                i += 1;
            }
            b'"' => {
                let start_line = line;
                let start = i + 1;
                i += 1;
                while i < bytes.len() && bytes[i] != b'"' {
                    if bytes[i] == b'\n' {
                        line += 1;
                    }
                    i += 1;
                }
                if i >= bytes.len() {
                    return Err(Error::Parse { line: start_line, msg: "unterminated string".into() });
                }
                out.push((Token::Scalar(&text[start..i]), start_line));
                i += 1;
            }
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !matches!(bytes[i], b'[' | b']' | b'"') {
                    i += 1;
                }
                let word = &text[start..i];
                let is_key = word.as_bytes()[0].is_ascii_alphabetic() || word.as_bytes()[0] == b'_';
                out.push((if is_key { Token::Key(word) } else { Token::Scalar(word) }, line));
            }
        }
    }
    Ok(out)
}

#[derive(Debug)]
enum Value<'a> {
    Scalar(&'a str, usize),
    List(Vec<(&'a str, Value<'a>)>),
}

struct Parser<'a> {
    tokens: Vec<(Token<'a>, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn last_line(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.1)
    }

    /// Key/value pairs until a closing bracket (`nested`) or end of input.
    fn list(&mut self, nested: bool) -> Result<Vec<(&'a str, Value<'a>)>> {
        let mut items = Vec::new();
        loop {
            let Some((tok, line)) = self.tokens.get(self.pos).cloned() else {
                if nested {
                    return Err(Error::Parse {
                        line: self.last_line(),
                        msg: "unexpected end of file, missing ']'".into(),
                    });
                }
                return Ok(items);
            };
            self.pos += 1;
            match tok {
                Token::Close if nested => return Ok(items),
                Token::Key(key) => items.push((key, self.value(key, line)?)),
                other => return Err(Error::Parse { line, msg: format!("expected a key, found {other:?}") }),
            }
        }
    }

    fn value(&mut self, key: &str, key_line: usize) -> Result<Value<'a>> {
        let Some((tok, line)) = self.tokens.get(self.pos).cloned() else {
            return Err(Error::Parse { line: key_line, msg: format!("key '{key}' has no value") });
        };
        self.pos += 1;
        match tok {
            Token::Open => Ok(Value::List(self.list(true)?)),
            Token::Scalar(s) | Token::Key(s) => Ok(Value::Scalar(s, line)),
            Token::Close => Err(Error::Parse { line, msg: format!("key '{key}' has no value") }),
        }
    }
}

fn scalar<'a>(items: &[(&str, Value<'a>)], key: &str) -> Option<(&'a str, usize)> {
    items.iter().find_map(|(k, v)| match v {
        Value::Scalar(s, line) if *k == key => Some((*s, *line)),
        _ => None,
    })
}

/// Parses a GML graph. Node ids become the labels; edges must reference
/// declared ids. Parallel edges collapse.
pub fn load_gml(bytes: &[u8]) -> Result<(Graph, LabelTable)> {
    let text = utf8(bytes)?;
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0 };
    let top = parser.list(false)?;
    let graph = top
        .iter()
        .find_map(|(k, v)| match v {
            Value::List(items) if *k == "graph" => Some(items),
            _ => None,
        })
        .ok_or(Error::Parse { line: 1, msg: "no 'graph [ ... ]' block".into() })?;

    let mut labels = LabelTable::new();
    for (k, v) in graph {
        if let (&"node", Value::List(items)) = (k, v) {
            let (id, line) = scalar(items, "id").ok_or(Error::Parse { line: 0, msg: "node without id".into() })?;
            if labels.id(id).is_some() {
                return Err(Error::Parse { line, msg: format!("duplicate node id {id}") });
            }
            labels.intern(id);
        }
    }
    let mut edges = Vec::new();
    for (k, v) in graph {
        if let (&"edge", Value::List(items)) = (k, v) {
            let endpoint = |key: &str| -> Result<(usize, usize)> {
                let (raw, line) =
                    scalar(items, key).ok_or(Error::Parse { line: 0, msg: format!("edge without {key}") })?;
                let id = labels.id(raw).ok_or_else(|| Error::DanglingEdge(raw.to_string()))?;
                Ok((id, line))
            };
            let (s, line) = endpoint("source")?;
            let (t, _) = endpoint("target")?;
            if s == t {
                return Err(Error::SelfLoopLine(line));
            }
            edges.push((s, t));
        }
    }
    Ok((Graph::from_edges(labels.len(), edges)?, labels))
}
