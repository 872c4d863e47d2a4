//! Regular expressions, their parse trees and two effectful matchers.
//!
//! [`is_match`] decides the inductive matching relation and
//! [`enumerate_matches`] lists its trees; both serve as oracles for the
//! structural matcher in [`structural`] and the derivative-based matcher in
//! [`derivative`].

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::wp::result_set;

pub mod derivative;
pub mod structural;
pub mod syntax;

pub use derivative::{
    derivative, dmatch, dmatch_prime, dmatch_run, dmatch_run_with_fuel, integral_tree, nullable,
};
pub use structural::{all_splits, all_splits_at, match_spec_invariant, match_structural};
pub use syntax::parse_regex;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regex {
    Empty,
    Epsilon,
    Singleton(char),
    Alt(Box<Regex>, Box<Regex>),
    Cat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn alt(l: Regex, r: Regex) -> Regex {
        Regex::Alt(Box::new(l), Box::new(r))
    }

    pub fn cat(l: Regex, r: Regex) -> Regex {
        Regex::Cat(Box::new(l), Box::new(r))
    }

    pub fn star(r: Regex) -> Regex {
        Regex::Star(Box::new(r))
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Singleton(_) => 1,
            Regex::Alt(l, r) | Regex::Cat(l, r) => 1 + l.size() + r.size(),
            Regex::Star(r) => 1 + r.size(),
        }
    }

    /// Every regex of exactly `size` nodes over the given alphabet.
    pub fn all_of_size(size: usize, alphabet: &[char]) -> Vec<Regex> {
        let mut table: Vec<Vec<Regex>> = vec![Vec::new()];
        for n in 1..=size {
            let mut here = Vec::new();
            if n == 1 {
                here.push(Regex::Empty);
                here.push(Regex::Epsilon);
                here.extend(alphabet.iter().map(|&c| Regex::Singleton(c)));
            } else {
                here.extend(table[n - 1].iter().cloned().map(Regex::star));
                for k in 1..n - 1 {
                    for l in &table[k] {
                        for r in &table[n - 1 - k] {
                            here.push(Regex::alt(l.clone(), r.clone()));
                            here.push(Regex::cat(l.clone(), r.clone()));
                        }
                    }
                }
            }
            table.push(here);
        }
        table.swap_remove(size)
    }

    /// Every regex of at most `size` nodes over the given alphabet.
    pub fn all_up_to(size: usize, alphabet: &[char]) -> Vec<Regex> {
        (1..=size).flat_map(|n| Regex::all_of_size(n, alphabet)).collect()
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&syntax::print_regex(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParseTree {
    UnitT,
    CharT(char),
    LeftT(Box<ParseTree>),
    RightT(Box<ParseTree>),
    PairT(Box<ParseTree>, Box<ParseTree>),
    ListT(Vec<ParseTree>),
}

impl ParseTree {
    pub fn left(t: ParseTree) -> ParseTree {
        ParseTree::LeftT(Box::new(t))
    }

    pub fn right(t: ParseTree) -> ParseTree {
        ParseTree::RightT(Box::new(t))
    }

    pub fn pair(a: ParseTree, b: ParseTree) -> ParseTree {
        ParseTree::PairT(Box::new(a), Box::new(b))
    }

    /// The string a tree spells out, read off its characters.
    pub fn flatten(&self) -> String {
        let mut out = String::new();
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut String) {
        match self {
            ParseTree::UnitT => {}
            ParseTree::CharT(c) => out.push(*c),
            ParseTree::LeftT(t) | ParseTree::RightT(t) => t.flatten_into(out),
            ParseTree::PairT(a, b) => {
                a.flatten_into(out);
                b.flatten_into(out);
            }
            ParseTree::ListT(ts) => ts.iter().for_each(|t| t.flatten_into(out)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            ParseTree::UnitT => json!("unit"),
            ParseTree::CharT(c) => json!(["char", c.to_string()]),
            ParseTree::LeftT(t) => json!(["inl", t.to_json()]),
            ParseTree::RightT(t) => json!(["inr", t.to_json()]),
            ParseTree::PairT(a, b) => json!(["pair", a.to_json(), b.to_json()]),
            ParseTree::ListT(ts) => {
                let mut items = vec![json!("list")];
                items.extend(ts.iter().map(ParseTree::to_json));
                serde_json::Value::Array(items)
            }
        }
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseTree::UnitT => write!(f, "unit"),
            ParseTree::CharT(c) => write!(f, "(char {c})"),
            ParseTree::LeftT(t) => write!(f, "(inl {t})"),
            ParseTree::RightT(t) => write!(f, "(inr {t})"),
            ParseTree::PairT(a, b) => write!(f, "(pair {a} {b})"),
            ParseTree::ListT(ts) => {
                write!(f, "(list")?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Whether `t` has the shape of a tree for `r`. Characters are not compared.
pub fn tree_shape_ok(r: &Regex, t: &ParseTree) -> bool {
    use ParseTree::*;
    match (r, t) {
        (Regex::Empty, _) => false,
        (Regex::Epsilon, UnitT) => true,
        (Regex::Singleton(_), CharT(_)) => true,
        (Regex::Alt(l, _), LeftT(t)) => tree_shape_ok(l, t),
        (Regex::Alt(_, r), RightT(t)) => tree_shape_ok(r, t),
        (Regex::Cat(l, r), PairT(a, b)) => tree_shape_ok(l, a) && tree_shape_ok(r, b),
        (Regex::Star(q), ListT(ts)) => ts.iter().all(|t| tree_shape_ok(q, t)),
        _ => false,
    }
}

/// Decides whether `t` witnesses that `r` matches `s`.
pub fn is_match(r: &Regex, s: &str, t: &ParseTree) -> bool {
    let cs: Vec<char> = s.chars().collect();
    matches(r, &cs, t)
}

fn matches(r: &Regex, s: &[char], t: &ParseTree) -> bool {
    use ParseTree::*;
    match (r, t) {
        (Regex::Epsilon, UnitT) => s.is_empty(),
        (Regex::Singleton(c), CharT(x)) => c == x && s == [*c],
        (Regex::Alt(l, _), LeftT(t)) => matches(l, s, t),
        (Regex::Alt(_, r), RightT(t)) => matches(r, s, t),
        (Regex::Cat(l, r), PairT(a, b)) => {
            (0..=s.len()).any(|i| matches(l, &s[..i], a) && matches(r, &s[i..], b))
        }
        (Regex::Star(_), ListT(ts)) if ts.is_empty() => s.is_empty(),
        (Regex::Star(q), ListT(ts)) => {
            let rest = ListT(ts[1..].to_vec());
            (0..=s.len()).any(|i| matches(q, &s[..i], &ts[0]) && matches(r, &s[i..], &rest))
        }
        _ => false,
    }
}

/// How [`enumerate_matches`] restricts star iterations, which would otherwise
/// give infinitely many trees when a star body matches the empty string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarMode {
    /// Every iteration consumes at least one character.
    ConsumingStar,
    /// At most `k` empty iterations in each list.
    Bounded(usize),
}

impl StarMode {
    /// Whether every list in `t` respects the restriction. A tree is among
    /// [`enumerate_matches`] exactly when it is a match and this holds.
    pub fn admits(self, t: &ParseTree) -> bool {
        match t {
            ParseTree::UnitT | ParseTree::CharT(_) => true,
            ParseTree::LeftT(t) | ParseTree::RightT(t) => self.admits(t),
            ParseTree::PairT(a, b) => self.admits(a) && self.admits(b),
            ParseTree::ListT(ts) => {
                let empty = ts.iter().filter(|t| t.flatten().is_empty()).count();
                let limit = match self {
                    StarMode::ConsumingStar => 0,
                    StarMode::Bounded(k) => k,
                };
                empty <= limit && ts.iter().all(|t| self.admits(t))
            }
        }
    }
}

/// Every tree `t` with `is_match(r, s, t)`, under the star restriction.
pub fn enumerate_matches(r: &Regex, s: &str, mode: StarMode) -> Vec<ParseTree> {
    let cs: Vec<char> = s.chars().collect();
    let empties = match mode {
        StarMode::ConsumingStar => 0,
        StarMode::Bounded(k) => k,
    };
    let mut e = Enumerator { input: &cs, empties, memo: HashMap::new(), star_memo: HashMap::new() };
    result_set(&e.trees(r, 0, cs.len()))
}

type Trees = Rc<Vec<ParseTree>>;
// (star body, start, end, empty iterations left)
type StarKey = (*const Regex, usize, usize, usize);

/// Memoized on the address of each subexpression and the span it covers.
struct Enumerator<'a> {
    input: &'a [char],
    empties: usize,
    memo: HashMap<(*const Regex, usize, usize), Trees>,
    star_memo: HashMap<StarKey, Rc<Vec<Vec<ParseTree>>>>,
}

impl Enumerator<'_> {
    fn trees(&mut self, r: &Regex, i: usize, j: usize) -> Trees {
        let key = (r as *const Regex, i, j);
        if let Some(t) = self.memo.get(&key) {
            return t.clone();
        }
        let span = &self.input[i..j];
        let out = match r {
            Regex::Empty => vec![],
            Regex::Epsilon if span.is_empty() => vec![ParseTree::UnitT],
            Regex::Epsilon => vec![],
            Regex::Singleton(c) if span == [*c] => vec![ParseTree::CharT(*c)],
            Regex::Singleton(_) => vec![],
            Regex::Alt(l, r) => {
                let mut out: Vec<_> = self.trees(l, i, j).iter().cloned().map(ParseTree::left).collect();
                out.extend(self.trees(r, i, j).iter().cloned().map(ParseTree::right));
                out
            }
            Regex::Cat(l, r) => {
                let mut out = Vec::new();
                for k in i..=j {
                    let lefts = self.trees(l, i, k);
                    if lefts.is_empty() {
                        continue;
                    }
                    let rights = self.trees(r, k, j);
                    for a in lefts.iter() {
                        for b in rights.iter() {
                            out.push(ParseTree::pair(a.clone(), b.clone()));
                        }
                    }
                }
                out
            }
            Regex::Star(q) => {
                let empties = self.empties;
                self.lists(q, i, j, empties).iter().cloned().map(ParseTree::ListT).collect()
            }
        };
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    fn lists(&mut self, q: &Regex, i: usize, j: usize, empties: usize) -> Rc<Vec<Vec<ParseTree>>> {
        let key = (q as *const Regex, i, j, empties);
        if let Some(l) = self.star_memo.get(&key) {
            return l.clone();
        }
        let mut out = Vec::new();
        if i == j {
            out.push(Vec::new());
        }
        for k in i..=j {
            if k == i && empties == 0 {
                continue;
            }
            let heads = self.trees(q, i, k);
            if heads.is_empty() {
                continue;
            }
            let left = if k == i { empties - 1 } else { empties };
            let tails = self.lists(q, k, j, left);
            for h in heads.iter() {
                for t in tails.iter() {
                    let mut list = Vec::with_capacity(t.len() + 1);
                    list.push(h.clone());
                    list.extend(t.iter().cloned());
                    out.push(list);
                }
            }
        }
        let out = Rc::new(out);
        self.star_memo.insert(key, out.clone());
        out
    }
}

/// No `Star` node occurs anywhere in `r`.
pub fn has_no_star(r: &Regex) -> bool {
    match r {
        Regex::Empty | Regex::Epsilon | Regex::Singleton(_) => true,
        Regex::Alt(l, r) | Regex::Cat(l, r) => has_no_star(l) && has_no_star(r),
        Regex::Star(_) => false,
    }
}

/// Every string over `alphabet` of length at most `max_len`, shortest first.
pub fn strings_up_to(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| alphabet.iter().map(move |&c| format!("{s}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
