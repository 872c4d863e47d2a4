//! The structural matcher: recursion on the regex, with the star case going
//! through the `Rec` effect because it does not shrink the regex.

use super::{enumerate_matches, is_match, ParseTree, Regex, StarMode};
use crate::effect::{Computation, EffectId, EffectRow, NondetAt, RecAt};
use crate::handlers::RecursiveFn;
use crate::value::Value;
use crate::wp::Invariant;

/// Every way to split `xs` into a prefix and a suffix, `("", xs)` first.
/// The computation lives in the row `[Nondet]`.
pub fn all_splits(xs: &str) -> Computation {
    let row = EffectRow::new([EffectId::Nondet]).expect("single effect");
    all_splits_at(row.nondet().expect("row has Nondet"), xs)
}

/// [`all_splits`] in any row, given where `Nondet` sits.
pub fn all_splits_at(nd: NondetAt, xs: &str) -> Computation {
    let split = |prefix: &str, suffix: &str| Value::SplitV {
        prefix: prefix.to_owned(),
        suffix: suffix.to_owned(),
    };
    let mut it = xs.chars();
    match it.next() {
        None => Computation::Pure(split("", "")),
        Some(x) => {
            let rest = it.as_str();
            let later = all_splits_at(nd, rest).fmap(move |v| match v {
                Value::SplitV { prefix, suffix } => Value::SplitV { prefix: format!("{x}{prefix}"), suffix },
                other => other,
            });
            nd.choice(Computation::Pure(split("", xs)), later)
        }
    }
}

/// The row of [`match_structural`]: `[Rec, Nondet]`.
pub fn structural_row() -> EffectRow {
    EffectRow::new([EffectId::Rec, EffectId::Nondet]).expect("distinct effects")
}

/// The structural matcher as a recursive definition. Its input is the pair
/// `(Re r, Str xs)` and its results are `TreeV` parse trees.
pub fn match_structural() -> RecursiveFn {
    let row = structural_row();
    let rec = row.rec().expect("row has Rec");
    let nd = row.nondet().expect("row has Nondet");
    RecursiveFn::new(row, move |input| {
        let (r, xs) = decode_input(input);
        go(rec, nd, r, xs)
    })
    .expect("row starts with Rec")
}

fn decode_input(input: &Value) -> (Regex, String) {
    let (r, xs) = input.as_pair().expect("matcher input is (regex, string)");
    let r = r.as_regex().expect("matcher input is (regex, string)").clone();
    let xs = xs.as_str().expect("matcher input is (regex, string)").to_owned();
    (r, xs)
}

fn tree(v: Value) -> ParseTree {
    match v {
        Value::TreeV(t) => t,
        other => panic!("matcher result {other} is not a parse tree"),
    }
}

fn go(rec: RecAt, nd: NondetAt, r: Regex, xs: String) -> Computation {
    match r {
        Regex::Empty => nd.fail(),
        Regex::Epsilon if xs.is_empty() => Computation::Pure(ParseTree::UnitT.into()),
        Regex::Epsilon => nd.fail(),
        Regex::Singleton(c) => {
            let mut it = xs.chars();
            match (it.next(), it.next()) {
                (Some(x), None) if x == c => Computation::Pure(ParseTree::CharT(x).into()),
                _ => nd.fail(),
            }
        }
        Regex::Alt(l, r) => nd.choice(
            go(rec, nd, *l, xs.clone()).fmap(|t| ParseTree::left(tree(t)).into()),
            go(rec, nd, *r, xs).fmap(|t| ParseTree::right(tree(t)).into()),
        ),
        Regex::Cat(l, r) => all_splits_at(nd, &xs).bind(move |split| {
            let Value::SplitV { prefix, suffix } = split else {
                panic!("all_splits returned {split}")
            };
            let r = (*r).clone();
            go(rec, nd, (*l).clone(), prefix).bind(move |a| {
                let a = tree(a);
                go(rec, nd, r.clone(), suffix.clone())
                    .fmap(move |b| ParseTree::pair(a.clone(), tree(b)).into())
            })
        }),
        Regex::Star(_) if xs.is_empty() => Computation::Pure(ParseTree::ListT(vec![]).into()),
        Regex::Star(q) => {
            let unrolled = Regex::cat(*q.clone(), Regex::Star(q));
            rec.call(Value::pair(unrolled.into(), Value::Str(xs))).fmap(|v| match tree(v) {
                ParseTree::PairT(t, ts) => match *ts {
                    ParseTree::ListT(mut ts) => {
                        ts.insert(0, *t);
                        ParseTree::ListT(ts).into()
                    }
                    other => panic!("star iteration returned {other}"),
                },
                other => panic!("star iteration returned {other}"),
            })
        }
    }
}

/// The matching relation as an invariant for recursive calls of
/// [`match_structural`], enumerated with consuming star iterations.
pub fn match_spec_invariant() -> Invariant {
    Invariant::new(
        |input, output| {
            let (r, xs) = decode_input(input);
            matches!(output, Value::TreeV(t) if is_match(&r, &xs, t))
        },
        |input| {
            let (r, xs) = decode_input(input);
            enumerate_matches(&r, &xs, StarMode::ConsumingStar)
                .into_iter()
                .map(Value::TreeV)
                .collect()
        },
        100_000,
    )
}
