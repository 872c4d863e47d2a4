//! Brzozowski derivatives with parse-tree reconstruction, and the matcher
//! that reads one character, differentiates, and recurses.

use super::{ParseTree, Regex};
use crate::effect::{Computation, EffectId, EffectRow};
use crate::error::{Error, Result};
use crate::handlers::{h_parser, handle_rec, run_with_fuel, FuelOutcome, RecursiveFn};
use crate::value::Value;

/// A tree for `r` on the empty string, if there is one: the left
/// alternative when both match, and no iterations for a star.
pub fn nullable(r: &Regex) -> Option<ParseTree> {
    match r {
        Regex::Empty | Regex::Singleton(_) => None,
        Regex::Epsilon => Some(ParseTree::UnitT),
        Regex::Alt(l, r) => nullable(l)
            .map(ParseTree::left)
            .or_else(|| nullable(r).map(ParseTree::right)),
        Regex::Cat(l, r) => Some(ParseTree::pair(nullable(l)?, nullable(r)?)),
        Regex::Star(_) => Some(ParseTree::ListT(vec![])),
    }
}

/// The regex matching `xs` whenever `r` matches `c` followed by `xs`.
pub fn derivative(r: &Regex, c: char) -> Regex {
    match r {
        Regex::Empty | Regex::Epsilon => Regex::Empty,
        Regex::Singleton(x) if *x == c => Regex::Epsilon,
        Regex::Singleton(_) => Regex::Empty,
        Regex::Alt(l, r) => Regex::alt(derivative(l, c), derivative(r, c)),
        Regex::Cat(l, r) => {
            let first = Regex::cat(derivative(l, c), (**r).clone());
            match nullable(l) {
                Some(_) => Regex::alt(first, derivative(r, c)),
                None => first,
            }
        }
        Regex::Star(q) => Regex::cat(derivative(q, c), r.clone()),
    }
}

/// Maps a tree for `derivative(r, c)` back to a tree for `r` that spells
/// one more leading `c`.
pub fn integral_tree(r: &Regex, c: char, t: &ParseTree) -> Result<ParseTree> {
    let bad = || Error::Shape { expected: "a tree of the derivative", got: t.to_string() };
    match (r, t) {
        (Regex::Singleton(x), ParseTree::UnitT) if *x == c => Ok(ParseTree::CharT(c)),
        (Regex::Alt(l, _), ParseTree::LeftT(t)) => Ok(ParseTree::left(integral_tree(l, c, t)?)),
        (Regex::Alt(_, r), ParseTree::RightT(t)) => Ok(ParseTree::right(integral_tree(r, c, t)?)),
        (Regex::Cat(l, r), t) => match (nullable(l), t) {
            (None, ParseTree::PairT(a, b)) => Ok(ParseTree::pair(integral_tree(l, c, a)?, (**b).clone())),
            (Some(_), ParseTree::LeftT(inner)) => match &**inner {
                ParseTree::PairT(a, b) => Ok(ParseTree::pair(integral_tree(l, c, a)?, (**b).clone())),
                _ => Err(bad()),
            },
            (Some(w), ParseTree::RightT(b)) => Ok(ParseTree::pair(w, integral_tree(r, c, b)?)),
            _ => Err(bad()),
        },
        (Regex::Star(q), ParseTree::PairT(a, rest)) => match &**rest {
            ParseTree::ListT(ts) => {
                let mut out = Vec::with_capacity(ts.len() + 1);
                out.push(integral_tree(q, c, a)?);
                out.extend(ts.iter().cloned());
                Ok(ParseTree::ListT(out))
            }
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

/// The row of [`dmatch`]: `[Rec, ParserMaybe, Nondet]`.
pub fn dmatch_row() -> EffectRow {
    EffectRow::new([EffectId::Rec, EffectId::ParserMaybe, EffectId::Nondet]).expect("distinct effects")
}

/// The derivative matcher over the input held by the parser effect. Its
/// call input is `Re r`; results are `TreeV` parse trees.
pub fn dmatch() -> RecursiveFn {
    let row = dmatch_row();
    let rec = row.rec().expect("row has Rec");
    let sym = row.parser_maybe().expect("row has ParserMaybe");
    let nd = row.nondet().expect("row has Nondet");
    RecursiveFn::new(row, move |input| {
        let r = input.as_regex().expect("dmatch input is a regex").clone();
        sym.symbol().bind(move |head| match head.as_maybe_char().expect("optional char") {
            Some(x) => {
                let r = r.clone();
                rec.call(Value::Re(derivative(&r, x))).fmap(move |t| {
                    let t = t.as_tree().expect("dmatch result is a parse tree");
                    integral_tree(&r, x, t).expect("derivative tree integrates").into()
                })
            }
            None => match nullable(&r) {
                Some(t) => Computation::Pure(t.into()),
                None => nd.fail(),
            },
        })
    })
    .expect("row starts with Rec")
}

/// [`dmatch`] with the parser effect handled: input `(Re r, Str s)`, row
/// `[Rec, Nondet]`.
pub fn dmatch_prime() -> RecursiveFn {
    handle_rec(h_parser, &dmatch()).expect("dmatch row has a parser effect")
}

/// Runs [`dmatch_prime`] on `(r, s)` with the given fuel.
pub fn dmatch_run_with_fuel(r: &Regex, s: &str, fuel: usize) -> Result<FuelOutcome> {
    let input = Value::pair(r.clone().into(), Value::str(s));
    run_with_fuel(&dmatch_prime(), &input, fuel, None)
}

/// All parse trees the derivative matcher finds, with one unit of fuel per
/// input character. Running out of fuel would mean the matcher makes more
/// calls than it consumes characters, which is reported as an error.
pub fn dmatch_run(r: &Regex, s: &str) -> Result<Vec<ParseTree>> {
    match dmatch_run_with_fuel(r, s, s.chars().count())? {
        FuelOutcome::Done(rs) => rs
            .into_iter()
            .map(|(v, _)| match v {
                Value::TreeV(t) => Ok(t),
                other => Err(Error::Shape { expected: "TreeV", got: other.to_string() }),
            })
            .collect(),
        FuelOutcome::Exhausted => Err(Error::InvariantViolation(format!(
            "derivative matcher ran out of fuel on {r} and {s:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::{enumerate_matches, is_match, strings_up_to, tree_shape_ok, StarMode};
    use ParseTree::*;

    fn a() -> Regex {
        Regex::Singleton('a')
    }

    fn b() -> Regex {
        Regex::Singleton('b')
    }

    #[test]
    fn nullable_witnesses() {
        assert_eq!(nullable(&Regex::Epsilon), Some(UnitT));
        assert_eq!(nullable(&a()), None);
        let r = Regex::cat(Regex::star(a()), Regex::alt(Regex::Epsilon, b()));
        assert_eq!(nullable(&r), Some(ParseTree::pair(ListT(vec![]), ParseTree::left(UnitT))));
    }

    #[test]
    fn derivative_equations() {
        assert_eq!(derivative(&a(), 'a'), Regex::Epsilon);
        assert_eq!(derivative(&Regex::Epsilon, 'a'), Regex::Empty);
        assert_eq!(derivative(&Regex::star(a()), 'a'), Regex::cat(Regex::Epsilon, Regex::star(a())));
        let r = Regex::cat(Regex::Epsilon, a());
        assert_eq!(
            derivative(&r, 'a'),
            Regex::alt(Regex::cat(Regex::Empty, a()), Regex::Epsilon)
        );
    }

    #[test]
    fn integral_cases() {
        assert_eq!(integral_tree(&a(), 'a', &UnitT).unwrap(), CharT('a'));
        let star = Regex::star(a());
        let t = ParseTree::pair(UnitT, ListT(vec![CharT('a')]));
        assert_eq!(integral_tree(&star, 'a', &t).unwrap(), ListT(vec![CharT('a'), CharT('a')]));
        assert!(integral_tree(&Regex::Epsilon, 'a', &UnitT).is_err());
    }

    #[test]
    fn integral_inverts_derivative() {
        for r in Regex::all_up_to(4, &['a', 'b']) {
            for x in ['a', 'b'] {
                let d = derivative(&r, x);
                for xs in strings_up_to(&['a', 'b'], 2) {
                    for t in enumerate_matches(&d, &xs, StarMode::Bounded(1)) {
                        let back = integral_tree(&r, x, &t).unwrap();
                        assert!(tree_shape_ok(&r, &back));
                        assert!(is_match(&r, &format!("{x}{xs}"), &back), "{r} {x} {xs} {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn dmatch_examples() {
        assert!(dmatch_run(&Regex::Empty, "").unwrap().is_empty());
        assert_eq!(dmatch_run(&Regex::star(Regex::Epsilon), "").unwrap(), vec![ListT(vec![])]);
        assert_eq!(dmatch_run(&a(), "a").unwrap(), vec![CharT('a')]);
        assert!(dmatch_run(&Regex::Epsilon, "x").unwrap().is_empty());
        assert_eq!(dmatch_run_with_fuel(&a(), "a", 0).unwrap(), FuelOutcome::Exhausted);
    }

    #[test]
    fn dmatch_finds_star_iterations() {
        let r = Regex::star(Regex::alt(a(), b()));
        let got = dmatch_run(&r, "ab").unwrap();
        assert_eq!(
            got,
            vec![ListT(vec![ParseTree::left(CharT('a')), ParseTree::right(CharT('b'))])]
        );
    }
}
