//! The effectful CFG parser over `[Rec, Nondet, ParserStrict]`.
//!
//! A call's input is the nonterminal's name as `Str`; its result is a
//! `NodeV`.

use std::collections::HashMap;
use std::sync::Arc;

use super::analysis::chain_bound;
use super::{GSymbol, Grammar, Nonterminal, Production, SemValue};
use crate::effect::{Computation, EffectId, EffectRow, NondetAt, RecAt, SymbolAt};
use crate::error::{Error, Result};
use crate::handlers::{run_with_fuel, unfold_calls, FuelOutcome, RecursiveFn};
use crate::value::Value;
use crate::wp::in_language as wp_in_language;

pub fn cfg_row() -> EffectRow {
    EffectRow::new([EffectId::Rec, EffectId::Nondet, EffectId::ParserStrict]).expect("distinct effects")
}

#[derive(Clone, Copy)]
struct Handles {
    rec: RecAt,
    nd: NondetAt,
    sym: SymbolAt,
}

impl Handles {
    fn of(row: &EffectRow) -> Result<Handles> {
        Ok(Handles { rec: row.rec()?, nd: row.nondet()?, sym: row.parser_strict()? })
    }
}

/// Productions with left-hand side `a`, in grammar order.
pub fn filter_lhs<'g>(g: &'g Grammar, a: &Nonterminal) -> Vec<&'g Production> {
    g.productions().iter().filter(|p| &p.lhs == a).collect()
}

/// Reads one character and succeeds only if it is `c`.
pub fn exact(row: &EffectRow, c: char) -> Result<Computation> {
    Ok(exact_at(Handles::of(row)?, c))
}

fn exact_at(h: Handles, c: char) -> Computation {
    h.sym.symbol().bind(move |t| {
        if t == Value::Ch(c) {
            Computation::Pure(t)
        } else {
            h.nd.fail()
        }
    })
}

/// Parses `rhs` in sequence, calling the parser for every nonterminal, and
/// delivers `acc` extended with the children as a `ListV` of `NodeV`.
pub fn build_parser(row: &EffectRow, rhs: &[GSymbol], acc: Vec<SemValue>) -> Result<Computation> {
    Ok(build_at(Handles::of(row)?, Arc::new(rhs.to_vec()), 0, acc))
}

fn build_at(h: Handles, rhs: Arc<Vec<GSymbol>>, at: usize, acc: Vec<SemValue>) -> Computation {
    match rhs.get(at) {
        None => Computation::Pure(Value::ListV(acc.into_iter().map(Value::NodeV).collect())),
        Some(GSymbol::Term(c)) => {
            let rhs = rhs.clone();
            exact_at(h, *c).bind(move |_| build_at(h, rhs.clone(), at + 1, acc.clone()))
        }
        Some(GSymbol::NonTerm(b)) => {
            let rhs = rhs.clone();
            h.rec.call(Value::str(b.name())).bind(move |v| {
                let Value::NodeV(child) = v else { panic!("parser call returned {v}") };
                let mut acc = acc.clone();
                acc.push(child);
                build_at(h, rhs.clone(), at + 1, acc)
            })
        }
    }
}

/// Chooses among the productions of `a`, wrapping each parse in a node.
pub fn from_prods(row: &EffectRow, g: &Grammar, a: &Nonterminal) -> Result<Computation> {
    Ok(from_prods_at(Handles::of(row)?, g, a))
}

fn from_prods_at(h: Handles, g: &Grammar, a: &Nonterminal) -> Computation {
    let alternatives = filter_lhs(g, a)
        .into_iter()
        .map(|p| {
            let (nt, index) = (p.lhs.clone(), p.index);
            build_at(h, Arc::new(p.rhs.clone()), 0, Vec::new()).fmap(move |children| {
                let children = children
                    .as_list()
                    .expect("children list")
                    .iter()
                    .map(|c| c.as_node().expect("child node").clone())
                    .collect();
                SemValue::node(nt.clone(), index, children).into()
            })
        })
        .collect();
    h.nd.choices(alternatives)
}

/// The grammar's parser as a recursive definition from nonterminal names.
pub fn grammar_fn(g: &Grammar) -> RecursiveFn {
    let row = cfg_row();
    let h = Handles::of(&row).expect("cfg row");
    let g = Arc::new(g.clone());
    RecursiveFn::new(row, move |input| {
        let name = input.as_str().expect("parser input is a nonterminal name");
        let a = g.nonterminal(name).expect("parser called on a nonterminal of the grammar");
        from_prods_at(h, &g, &a)
    })
    .expect("row starts with Rec")
}

/// `(|input| + 1) * (bound + 1)`.
pub fn fuel_formula(input_len: usize, bound: usize) -> usize {
    (input_len + 1) * (bound + 1)
}

/// Fuel for parsing `input_len` characters from `a`: the larger of
/// [`fuel_formula`] and an upper bound on the calls made along any path.
///
/// The call bound charges a nonterminal entered with `n` characters left one
/// call plus, for its costliest production, the cost of every nonterminal in
/// it, where a symbol after a terminal sees one character fewer. Callees at
/// the same length are left-recursion links, so the recursion is
/// well-founded when the link graph is acyclic.
pub fn fuel_bound(g: &Grammar, a: &Nonterminal, input_len: usize) -> Result<usize> {
    let report = chain_bound(g);
    let Some(bound) = report.bound else {
        return Err(Error::CyclicGrammar(cycle_names(&report.cycle)));
    };
    let mut memo = HashMap::new();
    let calls = max_calls(g, a, input_len, &mut memo).saturating_sub(1);
    Ok(fuel_formula(input_len, bound).max(calls))
}

fn cycle_names(cycle: &Option<Vec<Nonterminal>>) -> Vec<String> {
    cycle.iter().flatten().map(|n| n.name().to_owned()).collect()
}

fn max_calls(g: &Grammar, a: &Nonterminal, n: usize, memo: &mut HashMap<(Nonterminal, usize), usize>) -> usize {
    if let Some(&c) = memo.get(&(a.clone(), n)) {
        return c;
    }
    let mut worst = 0usize;
    for p in filter_lhs(g, a) {
        let mut left = Some(n);
        let mut total = 0usize;
        for s in &p.rhs {
            let Some(m) = left else { break };
            match s {
                GSymbol::Term(_) => left = m.checked_sub(1),
                GSymbol::NonTerm(b) => total = total.saturating_add(max_calls(g, b, m, memo)),
            }
        }
        worst = worst.max(total);
    }
    let c = worst.saturating_add(1);
    memo.insert((a.clone(), n), c);
    c
}

/// Every parse of a prefix of `input` from `a`, with its remainder, in
/// depth-first order. Cyclic grammars are rejected up front.
pub fn parse(g: &Grammar, a: &Nonterminal, input: &str) -> Result<Vec<(SemValue, String)>> {
    let fuel = fuel_bound(g, a, input.chars().count())?;
    match parse_with_fuel(g, a, input, fuel)? {
        FuelOutcome::Done(rs) => Ok(decode(rs)),
        FuelOutcome::Exhausted => Err(Error::InvariantViolation(format!(
            "parser ran out of fuel {fuel} from {a} on {input:?}"
        ))),
    }
}

/// Runs the parser with explicit fuel, without checking the grammar.
pub fn parse_with_fuel(g: &Grammar, a: &Nonterminal, input: &str, fuel: usize) -> Result<FuelOutcome> {
    g.nonterminal(a.name())?;
    run_with_fuel(&grammar_fn(g), &Value::str(a.name()), fuel, Some(input))
}

fn decode(rs: Vec<(Value, String)>) -> Vec<(SemValue, String)> {
    rs.into_iter()
        .map(|(v, rest)| match v {
            Value::NodeV(n) => (n, rest),
            other => panic!("parser result {other} is not a node"),
        })
        .collect()
}

/// Whether every successful parse of `input` from `a` consumes all of it,
/// with calls unfolded inline up to the parser's fuel.
pub fn in_language(g: &Grammar, a: &Nonterminal, input: &str) -> Result<bool> {
    let fuel = fuel_bound(g, a, input.chars().count())?;
    let f = grammar_fn(g);
    let start = from_prods(&cfg_row(), g, a)?;
    let tail = cfg_row().without(0);
    let stuck = tail.nondet()?.fail();
    wp_in_language(&tail, &unfold_calls(&f, start, fuel, &stuck), input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfg::spec_produce;
    use crate::handlers::run_parser_partial;

    fn nt(s: &str) -> Nonterminal {
        Nonterminal::new(s).unwrap()
    }

    fn node(n: &str, i: usize, cs: Vec<SemValue>) -> SemValue {
        SemValue::node(nt(n), i, cs)
    }

    #[test]
    fn filter_keeps_order() {
        let g = Grammar::parse("E -> 'a' E | 'b'").unwrap();
        let idx: Vec<usize> = filter_lhs(&g, &nt("E")).iter().map(|p| p.index).collect();
        assert_eq!(idx, [0, 1]);
        assert!(filter_lhs(&g, &nt("Z")).is_empty());
    }

    #[test]
    fn exact_reads_one_char() {
        let row = EffectRow::new([EffectId::Nondet, EffectId::ParserStrict, EffectId::Rec]).unwrap();
        let m = exact(&row, 'a').unwrap();
        assert_eq!(run_parser_partial(&m, "ab").unwrap(), vec![(Value::Ch('a'), "b".into())]);
        assert!(run_parser_partial(&m, "b").unwrap().is_empty());
        assert!(run_parser_partial(&m, "").unwrap().is_empty());
    }

    #[test]
    fn build_parser_shapes() {
        let row = cfg_row();
        let empty = build_parser(&row, &[], vec![]).unwrap();
        assert!(empty.is_pure());
        let one = build_parser(&row, &[GSymbol::NonTerm(nt("B"))], vec![]).unwrap();
        let Computation::Op(op) = one else { panic!() };
        assert_eq!((op.index, op.command.payload()), (0, Value::str("B")));
    }

    #[test]
    fn parses_right_recursion() {
        let g = Grammar::parse("E -> 'a' E | 'b'").unwrap();
        let e = nt("E");
        assert_eq!(parse(&g, &e, "ab").unwrap(), vec![(node("E", 0, vec![node("E", 1, vec![])]), String::new())]);
        assert_eq!(parse(&g, &e, "ba").unwrap(), vec![(node("E", 1, vec![]), "a".into())]);
        assert_eq!(parse(&g, &e, "aab").unwrap(), spec_produce(&g, &e, "aab").unwrap());
        let b_only = Grammar::parse("E -> 'b'").unwrap();
        assert!(parse(&b_only, &e, "").unwrap().is_empty());
    }

    #[test]
    fn no_productions_fail() {
        let g = Grammar::parse("E -> 'b'").unwrap();
        let row = cfg_row();
        let m = from_prods(&row, &g, &nt("Q")).unwrap();
        assert!(crate::wp::results_demonic(&m, &crate::wp::DemonicCtx::new()).unwrap().is_empty());
    }

    #[test]
    fn cyclic_grammar_is_rejected() {
        let g = Grammar::parse("E -> E '+' E | '1'").unwrap();
        assert_eq!(parse(&g, &nt("E"), "1").unwrap_err(), Error::CyclicGrammar(vec!["E".into(), "E".into()]));
    }

    #[test]
    fn language_membership() {
        let g = Grammar::parse("E -> 'a' E | 'b'").unwrap();
        assert!(in_language(&g, &nt("E"), "ab").unwrap());
        assert!(!in_language(&g, &nt("E"), "ba").unwrap());
    }

    #[test]
    fn formula_undercounts_nested_empty_derivations() {
        let g = Grammar::parse("S -> A A A\nA -> B B\nB ->").unwrap();
        let s = nt("S");
        let formula = fuel_formula(0, chain_bound(&g).bound.unwrap());
        assert_eq!(formula, 4);
        assert_eq!(parse_with_fuel(&g, &s, "", formula).unwrap(), FuelOutcome::Exhausted);
        assert_eq!(fuel_bound(&g, &s, 0).unwrap(), 9);
        assert_eq!(parse(&g, &s, "").unwrap().len(), 1);
    }
}
