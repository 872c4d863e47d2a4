//! Left-recursion links, chain bounds and the call-order variant.
//!
//! A link `B -> A` records that some production of `B` can call `A` before
//! reading any terminal: `A` is in the leading run of nonterminals of the
//! right-hand side. Whether the nonterminals before `A` can derive the
//! empty string is not consulted.

use std::collections::BTreeMap;
use std::fmt;

use super::parser::{fuel_bound, grammar_fn};
use super::{GSymbol, Grammar, Nonterminal};
use crate::error::{Error, Result};
use crate::handlers::{run_with_fuel_observed, FuelOutcome};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub from: Nonterminal,
    pub to: Nonterminal,
    pub production: usize,
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} (production {})", self.from, self.to, self.production)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub links: Vec<Link>,
    /// One more than the longest chain of links; `None` when links form a cycle.
    pub bound: Option<usize>,
    /// A cycle of links, first node repeated at the end.
    pub cycle: Option<Vec<Nonterminal>>,
}

impl ChainReport {
    pub fn is_cyclic(&self) -> bool {
        self.bound.is_none()
    }
}

/// Links in production order, without repeats.
pub fn left_rec_links(g: &Grammar) -> Vec<Link> {
    let mut out: Vec<Link> = Vec::new();
    for p in g.productions() {
        for s in &p.rhs {
            let GSymbol::NonTerm(a) = s else { break };
            let link = Link { from: p.lhs.clone(), to: a.clone(), production: p.index };
            if !out.contains(&link) {
                out.push(link);
            }
        }
    }
    out
}

pub fn chain_bound(g: &Grammar) -> ChainReport {
    let links = left_rec_links(g);
    let mut succ: BTreeMap<&Nonterminal, Vec<&Nonterminal>> = BTreeMap::new();
    for l in &links {
        let next = succ.entry(&l.from).or_default();
        if !next.contains(&&l.to) {
            next.push(&l.to);
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done(usize),
    }

    fn longest<'g>(
        n: &'g Nonterminal,
        succ: &BTreeMap<&'g Nonterminal, Vec<&'g Nonterminal>>,
        marks: &mut BTreeMap<&'g Nonterminal, Mark>,
        path: &mut Vec<&'g Nonterminal>,
    ) -> std::result::Result<usize, Vec<Nonterminal>> {
        match marks.get(n) {
            Some(Mark::Done(d)) => return Ok(*d),
            Some(Mark::Open) => {
                let start = path.iter().position(|m| *m == n).expect("open node is on the path");
                let mut cycle: Vec<Nonterminal> = path[start..].iter().map(|m| (*m).clone()).collect();
                cycle.push(n.clone());
                return Err(cycle);
            }
            None => {}
        }
        marks.insert(n, Mark::Open);
        path.push(n);
        let mut best = 0;
        for m in succ.get(n).map(Vec::as_slice).unwrap_or(&[]) {
            best = best.max(1 + longest(m, succ, marks, path)?);
        }
        path.pop();
        marks.insert(n, Mark::Done(best));
        Ok(best)
    }

    let mut marks = BTreeMap::new();
    let mut longest_path = 0;
    for n in g.nonterminals() {
        match longest(n, &succ, &mut marks, &mut Vec::new()) {
            Ok(d) => longest_path = longest_path.max(d),
            Err(cycle) => return ChainReport { links, bound: None, cycle: Some(cycle) },
        }
    }
    ChainReport { links, bound: Some(longest_path + 1), cycle: None }
}

/// Why a recursive call is smaller than the frame making it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecOrder {
    /// The callee starts on a strictly shorter input.
    Shorter,
    /// Same or shorter input, and the caller links to the callee.
    Linked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantEdge {
    pub caller: Nonterminal,
    pub caller_len: usize,
    pub callee: Nonterminal,
    pub callee_len: usize,
    /// `None` when neither order applies.
    pub order: Option<RecOrder>,
}

/// Every call edge of a parse of `input` from `a`, classified.
pub fn variant_edges(g: &Grammar, a: &Nonterminal, input: &str) -> Result<Vec<VariantEdge>> {
    let links = left_rec_links(g);
    let fuel = fuel_bound(g, a, input.chars().count())?;
    let mut edges = Vec::new();
    let mut bad_shape = None;
    let mut observe = |e: &crate::handlers::CallEdge<'_>| {
        let (Value::Str(caller), Value::Str(callee), Some(cs), Some(es)) =
            (e.caller, e.callee, e.caller_state, e.callee_state)
        else {
            bad_shape = Some(format!("{} -> {}", e.caller, e.callee));
            return;
        };
        let (caller_len, callee_len) = (cs.chars().count(), es.chars().count());
        let linked = links.iter().any(|l| l.from.name() == caller && l.to.name() == callee);
        let order = if callee_len < caller_len {
            Some(RecOrder::Shorter)
        } else if callee_len <= caller_len && linked {
            Some(RecOrder::Linked)
        } else {
            None
        };
        edges.push(VariantEdge {
            caller: Nonterminal(caller.clone()),
            caller_len,
            callee: Nonterminal(callee.clone()),
            callee_len,
            order,
        });
    };
    let outcome = run_with_fuel_observed(&grammar_fn(g), &Value::str(a.name()), fuel, Some(input), &mut observe)?;
    if let Some(edge) = bad_shape {
        return Err(Error::InvariantViolation(format!("call edge {edge} is not between nonterminals")));
    }
    if outcome == FuelOutcome::Exhausted {
        return Err(Error::InvariantViolation(format!("parser ran out of fuel from {a} on {input:?}")));
    }
    Ok(edges)
}

/// Whether every call edge of every sampled run decreases in the call order.
pub fn check_variant(g: &Grammar, samples: &[(Nonterminal, String)]) -> Result<bool> {
    for (a, input) in samples {
        if variant_edges(g, a, input)?.iter().any(|e| e.order.is_none()) {
            return Ok(false);
        }
    }
    Ok(true)
}
