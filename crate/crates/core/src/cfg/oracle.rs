//! Derivations by direct search over the grammar, independent of the
//! effectful parser.
//!
//! `produce(A, s)` holds for a node built by some production of `A` whose
//! right-hand side derives a prefix of `s`. A right-hand side is derived
//! symbol by symbol: the empty sequence leaves the input as it is, a
//! terminal must match the next character, and a nonterminal is produced
//! and contributes a child.

use std::collections::HashMap;
use std::rc::Rc;

use super::analysis::chain_bound;
use super::parser::fuel_formula;
use super::{GSymbol, Grammar, Nonterminal, SemValue};
use crate::error::{Error, Result};

type Found = Rc<Vec<(SemValue, usize)>>;

/// Every `(node, remainder)` derivable from `a` on a prefix of `input`.
///
/// Nesting is capped at `(|input| + 1) * (bound + 1)`; reaching the cap is an
/// error rather than a silent cut.
pub fn spec_produce(g: &Grammar, a: &Nonterminal, input: &str) -> Result<Vec<(SemValue, String)>> {
    let report = chain_bound(g);
    let Some(bound) = report.bound else {
        return Err(Error::CyclicGrammar(
            report.cycle.unwrap_or_default().iter().map(|n| n.name().to_owned()).collect(),
        ));
    };
    let chars: Vec<char> = input.chars().collect();
    let cap = fuel_formula(chars.len(), bound);
    let mut search = Search { g, input: &chars, memo: HashMap::new() };
    let found = search.produce(a, 0, cap)?;
    Ok(found.iter().map(|(v, at)| (v.clone(), chars[*at..].iter().collect())).collect())
}

struct Search<'a> {
    g: &'a Grammar,
    input: &'a [char],
    memo: HashMap<(Nonterminal, usize, usize), Found>,
}

impl Search<'_> {
    fn produce(&mut self, a: &Nonterminal, at: usize, depth: usize) -> Result<Found> {
        if depth == 0 {
            return Err(Error::DepthExceeded(depth));
        }
        let key = (a.clone(), at, depth);
        if let Some(found) = self.memo.get(&key) {
            return Ok(found.clone());
        }
        let mut out = Vec::new();
        for p in self.g.productions().iter().filter(|p| &p.lhs == a) {
            for (children, end) in self.sequence(&p.rhs, at, depth)? {
                out.push((SemValue::node(a.clone(), p.index, children), end));
            }
        }
        let found = Rc::new(out);
        self.memo.insert(key, found.clone());
        Ok(found)
    }

    fn sequence(&mut self, rhs: &[GSymbol], at: usize, depth: usize) -> Result<Vec<(Vec<SemValue>, usize)>> {
        let Some((first, rest)) = rhs.split_first() else {
            return Ok(vec![(Vec::new(), at)]);
        };
        match first {
            GSymbol::Term(c) => {
                if self.input.get(at) == Some(c) {
                    self.sequence(rest, at + 1, depth)
                } else {
                    Ok(Vec::new())
                }
            }
            GSymbol::NonTerm(b) => {
                let mut out = Vec::new();
                let heads = self.produce(b, at, depth - 1).map_err(|e| match e {
                    Error::DepthExceeded(_) => Error::DepthExceeded(depth),
                    other => other,
                })?;
                for (v, mid) in heads.iter() {
                    for (mut tail, end) in self.sequence(rest, *mid, depth)? {
                        tail.insert(0, v.clone());
                        out.push((tail, end));
                    }
                }
                Ok(out)
            }
        }
    }
}
