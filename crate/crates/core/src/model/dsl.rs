//! Line-oriented text format for networks.
//!
//! ```text
//! # Table-style example
//! a1 <- b1 + b2
//! a2 <- b1 b2
//! a5
//! ```
//!
//! Each line either declares a dependency-free entity or gives one rule.
//! Minterms are separated by `+`, literals inside a minterm by whitespace.
//! `alive` is the literal of an auxiliary entity that never fails.

use std::fmt::Write as _;

use super::{EntityId, InterdependentNetwork, Literal, Minterm, NetworkBuilder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token<'a> {
    Arrow,
    Plus,
    Word(&'a str),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Splits one line into tokens with their 1-based columns.
fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Token<'_>, usize)>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let bytes = code.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'<' {
            if bytes.get(i + 1) == Some(&b'-') {
                out.push((Token::Arrow, i + 1));
                i += 2;
            } else {
                return Err(syntax(line_no, i + 1, "expected `<-`"));
            }
        } else if c == b'+' {
            out.push((Token::Plus, i + 1));
            i += 1;
        } else if c.is_ascii_alphanumeric() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Token::Word(&code[start..i]), start + 1));
        } else {
            let ch = code[i..].chars().next().unwrap_or('?');
            return Err(syntax(
                line_no,
                i + 1,
                format!("unexpected character `{ch}`"),
            ));
        }
    }
    Ok(out)
}

fn entity(word: &str, line: usize, column: usize) -> Result<EntityId> {
    word.parse()
        .map_err(|msg: String| syntax(line, column, msg))
}

fn literal(word: &str, line: usize, column: usize) -> Result<Literal> {
    if word == "alive" {
        Ok(Literal::AlwaysAlive)
    } else {
        entity(word, line, column).map(Literal::Entity)
    }
}

/// Parses a network document. Labels follow line order starting at 1.
pub fn parse_network(text: &str) -> Result<InterdependentNetwork> {
    let mut builder = NetworkBuilder::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = tokenize(raw, line_no)?;
        let mut it = tokens.into_iter().peekable();
        let Some((first, col)) = it.next() else {
            continue;
        };
        let Token::Word(word) = first else {
            return Err(syntax(line_no, col, "line must start with an entity"));
        };
        let target = entity(word, line_no, col)?;

        let mut minterms = Vec::new();
        match it.next() {
            None => {}
            Some((Token::Arrow, arrow_col)) => {
                let mut current: Vec<Literal> = Vec::new();
                let mut last_col = arrow_col + 1;
                loop {
                    match it.next() {
                        Some((Token::Word(w), c)) => {
                            let lit = literal(w, line_no, c)?;
                            if current.contains(&lit) {
                                return Err(Error::DuplicateLiteral {
                                    target,
                                    literal: lit.to_string(),
                                });
                            }
                            current.push(lit);
                            last_col = c;
                        }
                        Some((Token::Plus, c)) | Some((Token::Arrow, c)) if current.is_empty() => {
                            return Err(syntax(line_no, c, "expected an entity"));
                        }
                        Some((Token::Plus, c)) => {
                            minterms.push(Minterm::new(current.drain(..)).expect("non-empty"));
                            last_col = c;
                        }
                        Some((Token::Arrow, c)) => {
                            return Err(syntax(line_no, c, "unexpected `<-`"));
                        }
                        None if current.is_empty() => {
                            return Err(syntax(
                                line_no,
                                last_col + 1,
                                "expected an entity at end of line",
                            ));
                        }
                        None => {
                            minterms.push(Minterm::new(current.drain(..)).expect("non-empty"));
                            break;
                        }
                    }
                }
            }
            Some((_, c)) => return Err(syntax(line_no, c, "expected `<-` or end of line")),
        }
        builder.add_rule(target, minterms)?;
    }
    builder.finish()
}

/// Canonical document: one line per rule in label order, minterms ordered by
/// size then literals, single spaces around `<-` and `+`.
pub fn format_network(net: &InterdependentNetwork) -> String {
    let mut out = String::new();
    for idr in net.idrs() {
        writeln!(out, "{idr}").expect("writing to a String");
    }
    out
}
