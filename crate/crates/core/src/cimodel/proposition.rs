use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpusio::normalize_word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct PropositionError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A predicate with its ordered arguments, e.g. `carry(truck,food)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Proposition {
    pub predicate: String,
    pub args: Vec<String>,
    pub source_index: usize,
}

impl Proposition {
    pub fn new(predicate: &str, args: &[&str]) -> Self {
        Self {
            predicate: normalize_word(predicate),
            args: args.iter().map(|a| normalize_word(a)).collect(),
            source_index: 0,
        }
    }

    /// Predicate followed by the arguments.
    pub fn tokens(&self) -> Vec<String> {
        std::iter::once(self.predicate.clone()).chain(self.args.iter().cloned()).collect()
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        Ok(())
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '\'')
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> PropositionError {
        PropositionError {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, PropositionError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.peek() {
                Some(c) => self.err(format!("expected {what}, found `{c}`")),
                None => self.err(format!("expected {what}, found end of line")),
            });
        }
        Ok(normalize_word(&self.chars[start..self.pos].iter().collect::<String>()))
    }
}

fn parse_line(text: &str, line: usize) -> Result<Proposition, PropositionError> {
    let mut c = Cursor {
        chars: text.chars().collect(),
        pos: 0,
        line,
    };
    let predicate = c.ident("a predicate")?;
    let mut args = Vec::new();
    c.skip_ws();
    if c.peek() == Some('(') {
        let open = c.pos;
        c.pos += 1;
        let unclosed = |c: &Cursor| PropositionError {
            line,
            column: c.pos + 1,
            message: format!("unclosed argument list opened at column {}", open + 1),
        };
        loop {
            c.skip_ws();
            if c.peek().is_none() {
                return Err(unclosed(&c));
            }
            args.push(c.ident("an argument")?);
            c.skip_ws();
            match c.peek() {
                Some(',') => c.pos += 1,
                Some(')') => {
                    c.pos += 1;
                    break;
                }
                Some(ch) => return Err(c.err(format!("expected `,` or `)`, found `{ch}`"))),
                None => return Err(unclosed(&c)),
            }
        }
    }
    c.skip_ws();
    if let Some(ch) = c.peek() {
        return Err(c.err(format!("unexpected `{ch}` after proposition")));
    }
    Ok(Proposition {
        predicate,
        args,
        source_index: 0,
    })
}

/// One proposition per line; blank lines and `#` comments are skipped.
pub fn parse_propositions(text: &str) -> Result<Vec<Proposition>, PropositionError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut p = parse_line(line, i + 1)?;
        p.source_index = out.len();
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_example_propositions() {
        let ps = parse_propositions("grow(gardener,roses)\n  Meow ( cat )\n\n# digression\nthrow(man, flower)\n").unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps[0], Proposition::new("grow", &["gardener", "roses"]));
        assert_eq!(ps[1].predicate, "meow");
        assert_eq!(ps[1].args, ["cat"]);
        assert_eq!(ps[2].source_index, 2);
        assert_eq!(ps[2].to_string(), "throw(man,flower)");
    }

    #[test]
    fn bare_identifier() {
        let ps = parse_propositions("rain").unwrap();
        assert!(ps[0].args.is_empty());
        assert_eq!(ps[0].to_string(), "rain");
    }

    #[test]
    fn unclosed_argument_list() {
        let e = parse_propositions("grow(gardener,").unwrap_err();
        assert_eq!(e.line, 1);
        assert_eq!(e.column, 15);
        assert!(e.message.contains("unclosed"));
        let e = parse_propositions("ok\ngrow(gardener").unwrap_err();
        assert_eq!((e.line, e.column), (2, 14));
        assert!(e.message.contains("unclosed"));
    }

    #[test]
    fn syntax_errors() {
        assert!(parse_propositions("grow()").is_err());
        assert!(parse_propositions("grow(a,,b)").is_err());
        assert!(parse_propositions("grow(a) x").is_err());
        assert!(parse_propositions("(a)").is_err());
        let e = parse_propositions("grow(a;b)").unwrap_err();
        assert_eq!(e.column, 7);
    }

    proptest! {
        #[test]
        fn display_round_trips(pred in "[a-z]{1,8}", args in prop::collection::vec("[a-z][a-z0-9_]{0,6}", 0..4)) {
            let p = Proposition { predicate: pred, args, source_index: 0 };
            let back = parse_propositions(&p.to_string()).unwrap();
            prop_assert_eq!(&back[0], &p);
        }
    }
}
