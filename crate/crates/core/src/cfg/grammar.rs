//! Grammar file format.
//!
//! ```text
//! # comment
//! E -> T R
//! R -> '+' T R |
//! T -> '1' | 'a'
//! ```
//!
//! A rule line is `Lhs -> items`, with `|` separating alternatives. Items are
//! nonterminal names or quoted single characters with the escapes `\'`,
//! `\\`, `\n` and `\t`. An empty alternative derives the empty string.
//! Productions are numbered in file order.

use super::{GSymbol, Grammar, Nonterminal};
use crate::error::{Error, Result};

impl Grammar {
    pub fn parse(text: &str) -> Result<Grammar> {
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let tokens = tokenize(line).map_err(|msg| Error::GrammarSyntax { line: line_no, msg })?;
            if tokens.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::GrammarSyntax { line: line_no, msg: msg.to_owned() };
            let lhs = match &tokens[..] {
                [Token::Ident(name), Token::Arrow, ..] => Nonterminal(name.clone()),
                [Token::Ident(_), ..] => return Err(err("expected `->` after the rule name")),
                _ => return Err(err("a rule starts with a nonterminal name")),
            };
            let mut rhs = Vec::new();
            for tok in &tokens[2..] {
                match tok {
                    Token::Ident(name) => rhs.push(GSymbol::NonTerm(Nonterminal(name.clone()))),
                    Token::Term(c) => rhs.push(GSymbol::Term(*c)),
                    Token::Bar => rules.push((lhs.clone(), std::mem::take(&mut rhs))),
                    Token::Arrow => return Err(err("unexpected `->`")),
                }
            }
            rules.push((lhs, rhs));
        }
        Grammar::new(rules)
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Ident(String),
    Term(char),
    Arrow,
    Bar,
}

fn tokenize(line: &str) -> std::result::Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '#' => break,
            c if c.is_whitespace() => {}
            '|' => out.push(Token::Bar),
            '-' => match chars.next() {
                Some('>') => out.push(Token::Arrow),
                _ => return Err("expected `->`".into()),
            },
            '\'' => {
                let t = match chars.next() {
                    Some('\\') => match chars.next() {
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some(e) => return Err(format!("unknown escape `\\{e}`")),
                        None => return Err("unterminated terminal".into()),
                    },
                    Some('\'') => return Err("empty terminal `''`".into()),
                    Some(t) => t,
                    None => return Err("unterminated terminal".into()),
                };
                if chars.next() != Some('\'') {
                    return Err("a terminal is a single quoted character".into());
                }
                out.push(Token::Term(t));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::from(c);
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(name));
            }
            other => return Err(format!("unexpected `{other}`")),
        }
    }
    Ok(out)
}
