//! Concrete regex syntax.
//!
//! `|` is infix alternation with the lowest precedence, juxtaposition is
//! concatenation, `*` is postfix. `\0` is the empty language, `\e` the empty
//! string, and `\|`, `\*`, `\(`, `\)`, `\\` escape the metacharacters. Any
//! other character stands for itself, spaces included. An empty regex or
//! empty group is `\e`.
//!
//! The printer separates concatenated parts with a space for readability,
//! so its output is for display and does not parse back when it contains a
//! concatenation.

use std::iter::Peekable;
use std::str::CharIndices;

use super::Regex;
use crate::error::{Error, Result};

pub fn parse_regex(text: &str) -> Result<Regex> {
    let mut p = Parser { chars: text.char_indices().peekable(), len: text.len() };
    let r = p.alt()?;
    match p.chars.next() {
        None => Ok(r),
        Some((pos, ')')) => Err(Error::Syntax { pos, msg: "unmatched `)`".into() }),
        Some((pos, c)) => Err(Error::Syntax { pos, msg: format!("unexpected `{c}`") }),
    }
}

struct Parser<'a> {
    chars: Peekable<CharIndices<'a>>,
    len: usize,
}

impl Parser<'_> {
    fn alt(&mut self) -> Result<Regex> {
        let mut r = self.cat()?;
        while let Some(&(_, '|')) = self.chars.peek() {
            self.chars.next();
            r = Regex::alt(r, self.cat()?);
        }
        Ok(r)
    }

    fn cat(&mut self) -> Result<Regex> {
        let mut acc: Option<Regex> = None;
        while let Some(&(pos, c)) = self.chars.peek() {
            if c == '|' || c == ')' {
                break;
            }
            if c == '*' {
                return Err(Error::Syntax { pos, msg: "`*` has nothing to repeat".into() });
            }
            let mut r = self.atom()?;
            while let Some(&(_, '*')) = self.chars.peek() {
                self.chars.next();
                r = Regex::star(r);
            }
            acc = Some(match acc {
                None => r,
                Some(l) => Regex::cat(l, r),
            });
        }
        Ok(acc.unwrap_or(Regex::Epsilon))
    }

    fn atom(&mut self) -> Result<Regex> {
        let (pos, c) = self.chars.next().expect("atom called at end of input");
        match c {
            '(' => {
                let r = self.alt()?;
                match self.chars.next() {
                    Some((_, ')')) => Ok(r),
                    _ => Err(Error::Syntax { pos, msg: "unclosed `(`".into() }),
                }
            }
            '\\' => match self.chars.next() {
                Some((_, '0')) => Ok(Regex::Empty),
                Some((_, 'e')) => Ok(Regex::Epsilon),
                Some((_, e @ ('|' | '*' | '(' | ')' | '\\'))) => Ok(Regex::Singleton(e)),
                Some((at, e)) => Err(Error::Syntax { pos: at, msg: format!("unknown escape `\\{e}`") }),
                None => Err(Error::Syntax { pos: self.len, msg: "dangling `\\`".into() }),
            },
            c => Ok(Regex::Singleton(c)),
        }
    }
}

pub fn print_regex(r: &Regex) -> String {
    let mut out = String::new();
    print(r, 0, &mut out);
    out
}

// Levels: 0 alternation, 1 concatenation, 2 postfix and atoms.
fn print(r: &Regex, level: u8, out: &mut String) {
    let wrap = |own: u8, out: &mut String, body: &dyn Fn(&mut String)| {
        if level > own {
            out.push('(');
            body(out);
            out.push(')');
        } else {
            body(out);
        }
    };
    match r {
        Regex::Empty => out.push_str("\\0"),
        Regex::Epsilon => out.push_str("\\e"),
        Regex::Singleton(c) => {
            if matches!(c, '|' | '*' | '(' | ')' | '\\') {
                out.push('\\');
            }
            out.push(*c);
        }
        Regex::Alt(l, r) => wrap(0, out, &|out| {
            print(l, 0, out);
            out.push('|');
            print(r, 1, out);
        }),
        Regex::Cat(l, r) => wrap(1, out, &|out| {
            print(l, 1, out);
            out.push(' ');
            print(r, 2, out);
        }),
        Regex::Star(q) => {
            print(q, 2, out);
            out.push('*');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Regex {
        Regex::Singleton('a')
    }

    fn b() -> Regex {
        Regex::Singleton('b')
    }

    #[test]
    fn parses() {
        assert_eq!(parse_regex("a*").unwrap(), Regex::star(a()));
        assert_eq!(parse_regex("ab|b").unwrap(), Regex::alt(Regex::cat(a(), b()), b()));
        assert_eq!(parse_regex("a(b|\\e)*").unwrap(), Regex::cat(a(), Regex::star(Regex::alt(b(), Regex::Epsilon))));
        assert_eq!(parse_regex("").unwrap(), Regex::Epsilon);
        assert_eq!(parse_regex("\\0").unwrap(), Regex::Empty);
        assert_eq!(parse_regex("a|").unwrap(), Regex::alt(a(), Regex::Epsilon));
        assert_eq!(parse_regex("\\*\\\\").unwrap(), Regex::cat(Regex::Singleton('*'), Regex::Singleton('\\')));
        assert_eq!(parse_regex("abc").unwrap(), Regex::cat(Regex::cat(a(), b()), Regex::Singleton('c')));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_regex("("), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_regex("a)"), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_regex("*a"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_regex("a\\q"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_regex("a\\"), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn prints() {
        assert_eq!(print_regex(&Regex::cat(Regex::Epsilon, Regex::star(a()))), "\\e a*");
        assert_eq!(print_regex(&Regex::star(Regex::alt(a(), b()))), "(a|b)*");
        assert_eq!(print_regex(&Regex::cat(a(), Regex::alt(a(), b()))), "a (a|b)");
        assert_eq!(print_regex(&Regex::alt(a(), Regex::alt(a(), b()))), "a|(a|b)");
        assert_eq!(print_regex(&Regex::star(Regex::cat(a(), b()))), "(a b)*");
        assert_eq!(print_regex(&Regex::Singleton('|')), "\\|");
    }

    #[test]
    fn printing_without_concatenation_round_trips() {
        for r in Regex::all_up_to(4, &['a', 'b']) {
            let text = print_regex(&r);
            if !text.contains(' ') {
                assert_eq!(parse_regex(&text).unwrap(), r, "{text}");
            }
        }
    }
}
