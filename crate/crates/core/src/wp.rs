//! Predicate-transformer semantics, specifications and refinement.
//!
//! A [`SemanticsRow`] assigns one [`PredicateTransformer`] to each position of
//! an effect row. [`wp`] folds it over a computation: a leaf is judged by the
//! postcondition, an operation node by its effect's transformer applied to
//! "the rest of the program satisfies the postcondition". [`wp_stateful`]
//! does the same with predicates that also see a text state.
//!
//! Propositions are booleans. Universal quantification over recursive-call
//! outputs goes through a bounded, explicit enumeration ([`Invariant`]), and
//! refinement is decided by comparing finite result sets
//! ([`results_demonic`]), which agrees with the predicate-level definition
//! for the demonic and angelic nondeterminism semantics.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::effect::{Command, Computation, EffectId, EffectRow};
use crate::error::{Error, Result};
use crate::value::Value;

type Relation = Arc<dyn Fn(&Value, &Value) -> bool + Send + Sync>;
type Enumerator = Arc<dyn Fn(&Value) -> Vec<Value> + Send + Sync>;

/// A loop-invariant-like relation between call inputs and call outputs,
/// paired with a finite enumeration of the outputs it allows.
#[derive(Clone)]
pub struct Invariant {
    relation: Relation,
    enumerator: Enumerator,
    bound: usize,
}

impl fmt::Debug for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Invariant").field("bound", &self.bound).finish_non_exhaustive()
    }
}

impl Invariant {
    pub fn new(
        relation: impl Fn(&Value, &Value) -> bool + Send + Sync + 'static,
        enumerator: impl Fn(&Value) -> Vec<Value> + Send + Sync + 'static,
        bound: usize,
    ) -> Self {
        Invariant { relation: Arc::new(relation), enumerator: Arc::new(enumerator), bound }
    }

    pub fn holds(&self, input: &Value, output: &Value) -> bool {
        (self.relation)(input, output)
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// All outputs related to `input`. Fails rather than truncating when the
    /// enumeration is larger than the bound, and rejects enumerated outputs
    /// that the relation does not accept.
    pub fn outputs(&self, input: &Value) -> Result<Vec<Value>> {
        let outs = (self.enumerator)(input);
        if outs.len() > self.bound {
            return Err(Error::EnumerationOverflow { bound: self.bound, input: input.to_string() });
        }
        if let Some(bad) = outs.iter().find(|o| !self.holds(input, o)) {
            return Err(Error::InvariantViolation(format!(
                "enumerated output {bad} for {input} is not in the relation"
            )));
        }
        Ok(outs)
    }
}

/// The semantics of one effect.
#[derive(Clone, Debug)]
pub enum PredicateTransformer {
    /// Demonic nondeterminism: the postcondition must hold on every branch.
    All,
    /// Angelic nondeterminism: some branch must satisfy the postcondition.
    Any,
    /// Recursive calls satisfy the invariant.
    Rec(Invariant),
    /// Strict-char parser; stateful. Exhausted input is vacuously fine.
    ParseStrict,
    /// Optional-char parser; stateful.
    ParserMaybe,
}

pub fn pt_all() -> PredicateTransformer {
    PredicateTransformer::All
}

pub fn pt_any() -> PredicateTransformer {
    PredicateTransformer::Any
}

pub fn pt_rec(inv: Invariant) -> PredicateTransformer {
    PredicateTransformer::Rec(inv)
}

pub fn pt_parse_strict() -> PredicateTransformer {
    PredicateTransformer::ParseStrict
}

pub fn pt_parser_maybe() -> PredicateTransformer {
    PredicateTransformer::ParserMaybe
}

impl PredicateTransformer {
    pub fn effect(&self) -> EffectId {
        match self {
            PredicateTransformer::All | PredicateTransformer::Any => EffectId::Nondet,
            PredicateTransformer::Rec(_) => EffectId::Rec,
            PredicateTransformer::ParseStrict => EffectId::ParserStrict,
            PredicateTransformer::ParserMaybe => EffectId::ParserMaybe,
        }
    }

    pub fn is_stateful(&self) -> bool {
        matches!(self, PredicateTransformer::ParseStrict | PredicateTransformer::ParserMaybe)
    }

    /// Precondition of `command` for a postcondition over its responses.
    pub fn transform(
        &self,
        command: &Command,
        post: &mut dyn FnMut(&Value) -> Result<bool>,
    ) -> Result<bool> {
        self.check_command(command)?;
        match (self, command) {
            (PredicateTransformer::All, Command::Fail) => Ok(true),
            (PredicateTransformer::Any, Command::Fail) => Ok(false),
            (PredicateTransformer::All, Command::Choice) => {
                Ok(post(&Value::Bool(true))? && post(&Value::Bool(false))?)
            }
            (PredicateTransformer::Any, Command::Choice) => {
                Ok(post(&Value::Bool(true))? || post(&Value::Bool(false))?)
            }
            (PredicateTransformer::Rec(inv), Command::Call(input)) => {
                for o in inv.outputs(input)? {
                    if !post(&o)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(Error::NeedsState(self.effect())),
        }
    }

    /// Stateful precondition. Stateless transformers are lifted pointwise:
    /// the state is passed through unchanged.
    pub fn transform_stateful(
        &self,
        command: &Command,
        post: &mut dyn FnMut(&Value, &str) -> Result<bool>,
        state: &str,
    ) -> Result<bool> {
        self.check_command(command)?;
        match self {
            PredicateTransformer::ParseStrict => match split_head(state) {
                None => Ok(true),
                Some((x, xs)) => post(&Value::Ch(x), xs),
            },
            PredicateTransformer::ParserMaybe => match split_head(state) {
                None => post(&Value::nothing(), ""),
                Some((x, xs)) => post(&Value::just(x), xs),
            },
            _ => self.transform(command, &mut |v| post(v, state)),
        }
    }

    fn check_command(&self, command: &Command) -> Result<()> {
        if command.effect() == self.effect() {
            Ok(())
        } else {
            Err(Error::Unhandled(command.effect()))
        }
    }
}

pub(crate) fn split_head(s: &str) -> Option<(char, &str)> {
    let mut chars = s.chars();
    chars.next().map(|c| (c, chars.as_str()))
}

/// Transformers aligned with an effect row: the i-th handles the i-th effect.
#[derive(Clone, Debug)]
pub struct SemanticsRow(Vec<PredicateTransformer>);

impl SemanticsRow {
    pub fn new(pts: Vec<PredicateTransformer>) -> Self {
        SemanticsRow(pts)
    }

    /// Builds a row aligned with `row`, choosing a transformer per effect.
    pub fn for_row(
        row: &EffectRow,
        mut choose: impl FnMut(EffectId) -> Option<PredicateTransformer>,
    ) -> Result<Self> {
        row.effects()
            .iter()
            .map(|e| choose(*e).ok_or(Error::Unhandled(*e)))
            .collect::<Result<Vec<_>>>()
            .map(SemanticsRow)
    }

    pub fn transformers(&self) -> &[PredicateTransformer] {
        &self.0
    }

    pub fn lookup(&self, index: usize, command: &Command) -> Result<&PredicateTransformer> {
        match self.0.get(index) {
            Some(pt) if pt.effect() == command.effect() => Ok(pt),
            _ => Err(Error::IndexMismatch { index, effect: command.effect() }),
        }
    }

    pub fn aligned_with(&self, row: &EffectRow) -> bool {
        self.0.len() == row.len()
            && self.0.iter().zip(row.effects()).all(|(pt, e)| pt.effect() == *e)
    }
}

/// Weakest precondition of `m` for `post`.
pub fn wp(row: &SemanticsRow, m: &Computation, post: &dyn Fn(&Value) -> bool) -> Result<bool> {
    wp_with(row, m, &mut |v| Ok(post(v)))
}

pub(crate) fn wp_with(
    row: &SemanticsRow,
    m: &Computation,
    post: &mut dyn FnMut(&Value) -> Result<bool>,
) -> Result<bool> {
    match m {
        Computation::Pure(v) => post(v),
        Computation::Op(op) => {
            let pt = row.lookup(op.index, &op.command)?;
            pt.transform(&op.command, &mut |r| {
                op.command.check_response(r)?;
                wp_with(row, &op.resume(r.clone()), post)
            })
        }
    }
}

/// Weakest precondition over a text state threaded through the parser effects.
pub fn wp_stateful(
    row: &SemanticsRow,
    m: &Computation,
    post: &dyn Fn(&Value, &str) -> bool,
    state: &str,
) -> Result<bool> {
    wp_stateful_with(row, m, &mut |v, s| Ok(post(v, s)), state)
}

fn wp_stateful_with(
    row: &SemanticsRow,
    m: &Computation,
    post: &mut dyn FnMut(&Value, &str) -> Result<bool>,
    state: &str,
) -> Result<bool> {
    match m {
        Computation::Pure(v) => post(v, state),
        Computation::Op(op) => {
            let pt = row.lookup(op.index, &op.command)?;
            pt.transform_stateful(
                &op.command,
                &mut |r, s| {
                    op.command.check_response(r)?;
                    wp_stateful_with(row, &op.resume(r.clone()), post, s)
                },
                state,
            )
        }
    }
}

/// A pre/postcondition pair.
#[derive(Clone)]
pub struct Spec {
    pub pre: bool,
    pub post: Arc<dyn Fn(&Value) -> bool + Send + Sync>,
}

impl Spec {
    pub fn new(pre: bool, post: impl Fn(&Value) -> bool + Send + Sync + 'static) -> Self {
        Spec { pre, post: Arc::new(post) }
    }
}

/// Weakest precondition of a specification: its precondition holds and every
/// candidate allowed by its postcondition satisfies `post`. The candidate
/// universe stands in for "all values" and must be supplied by the caller.
pub fn wp_spec(spec: &Spec, post: &dyn Fn(&Value) -> bool, candidates: &[Value]) -> bool {
    spec.pre && candidates.iter().filter(|o| (spec.post)(o)).all(post)
}

/// How [`results_demonic`] answers recursive calls and parser commands.
#[derive(Clone, Debug, Default)]
pub struct DemonicCtx {
    pub rec_inv: Option<Invariant>,
    pub state: Option<String>,
}

impl DemonicCtx {
    pub fn new() -> Self {
        DemonicCtx::default()
    }

    pub fn with_invariant(mut self, inv: Invariant) -> Self {
        self.rec_inv = Some(inv);
        self
    }

    pub fn with_state(mut self, state: impl Into<String>) -> Self {
        self.state = Some(state.into());
        self
    }
}

/// Every reachable leaf, depth-first and left to right, with its final state.
///
/// Choice explores `true` first. Calls are answered with every output the
/// invariant enumerates. Without a state in `ctx`, parser commands are an
/// error and the reported final state is empty.
pub fn results_demonic(m: &Computation, ctx: &DemonicCtx) -> Result<Vec<(Value, String)>> {
    let mut out = Vec::new();
    collect(m, ctx, ctx.state.as_deref(), &mut out)?;
    Ok(out)
}

fn collect(
    m: &Computation,
    ctx: &DemonicCtx,
    state: Option<&str>,
    out: &mut Vec<(Value, String)>,
) -> Result<()> {
    let op = match m {
        Computation::Pure(v) => {
            out.push((v.clone(), state.unwrap_or_default().to_owned()));
            return Ok(());
        }
        Computation::Op(op) => op,
    };
    match &op.command {
        Command::Fail => Ok(()),
        Command::Choice => {
            collect(&op.resume(Value::Bool(true)), ctx, state, out)?;
            collect(&op.resume(Value::Bool(false)), ctx, state, out)
        }
        Command::Call(input) => {
            let inv = ctx.rec_inv.as_ref().ok_or(Error::MissingInvariant)?;
            for o in inv.outputs(input)? {
                collect(&op.resume(o), ctx, state, out)?;
            }
            Ok(())
        }
        Command::SymbolStrict => {
            let s = state.ok_or(Error::MissingState)?;
            match split_head(s) {
                None => Ok(()),
                Some((x, xs)) => collect(&op.resume(Value::Ch(x)), ctx, Some(xs), out),
            }
        }
        Command::SymbolMaybe => {
            let s = state.ok_or(Error::MissingState)?;
            match split_head(s) {
                None => collect(&op.resume(Value::nothing()), ctx, Some(""), out),
                Some((x, xs)) => collect(&op.resume(Value::just(x)), ctx, Some(xs), out),
            }
        }
    }
}

/// The result sequence with duplicates removed, first occurrence kept.
pub fn result_set<T: Clone + Eq + std::hash::Hash>(results: &[T]) -> Vec<T> {
    let mut seen = HashSet::new();
    results.iter().filter(|r| seen.insert((*r).clone())).cloned().collect()
}

/// Demonic refinement `s ⊑ t`: every result of `t` is a result of `s`.
pub fn refines_all(s: &Computation, t: &Computation, ctx: &DemonicCtx) -> Result<bool> {
    let allowed: HashSet<_> = results_demonic(s, ctx)?.into_iter().collect();
    Ok(results_demonic(t, ctx)?.iter().all(|r| allowed.contains(r)))
}

/// Angelic refinement `s ⊑ t`: every result of `s` is a result of `t`.
pub fn refines_any(s: &Computation, t: &Computation, ctx: &DemonicCtx) -> Result<bool> {
    refines_all(t, s, ctx)
}

/// Whether every parse of `input` by `m` consumes the whole input, under the
/// demonic reading of choice and the strict parser semantics.
pub fn in_language(row: &EffectRow, m: &Computation, input: &str) -> Result<bool> {
    let sem = SemanticsRow::for_row(row, |e| match e {
        EffectId::Nondet => Some(pt_all()),
        EffectId::ParserStrict => Some(pt_parse_strict()),
        _ => None,
    })?;
    wp_stateful(&sem, m, &|_, rest| rest.is_empty(), input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effect::{call, choice, choices, fail, pure, symbol_maybe, symbol_strict};
    use EffectId::*;

    fn nd() -> EffectRow {
        EffectRow::new([Nondet]).unwrap()
    }

    fn all() -> SemanticsRow {
        SemanticsRow::new(vec![pt_all()])
    }

    fn any() -> SemanticsRow {
        SemanticsRow::new(vec![pt_any()])
    }

    fn ch(c: char) -> Value {
        Value::Ch(c)
    }

    #[test]
    fn pure_is_judged_by_the_postcondition() {
        assert!(wp(&all(), &pure('x'), &|v| *v == ch('x')).unwrap());
        assert!(!wp(&all(), &pure('x'), &|v| *v == ch('y')).unwrap());
    }

    #[test]
    fn fail_is_vacuous_demonically_and_false_angelically() {
        let f = fail(&nd()).unwrap();
        assert!(wp(&all(), &f, &|_| false).unwrap());
        assert!(!wp(&any(), &f, &|_| true).unwrap());
        assert!(!wp(&any(), &choices(&nd(), vec![]).unwrap(), &|_| true).unwrap());
    }

    #[test]
    fn choice_conjoins_or_disjoins() {
        let m = choice(&nd(), pure('1'), pure('2')).unwrap();
        assert!(!wp(&all(), &m, &|v| *v == ch('1')).unwrap());
        assert!(wp(&any(), &m, &|v| *v == ch('1')).unwrap());
        let half = choice(&nd(), pure('x'), fail(&nd()).unwrap()).unwrap();
        assert!(wp(&all(), &half, &|v| *v == ch('x')).unwrap());
        assert!(wp(&any(), &half, &|_| true).unwrap());
    }

    #[test]
    fn rec_quantifies_over_enumerated_outputs() {
        let row = EffectRow::new([Rec]).unwrap();
        let empty = Invariant::new(|_, _| false, |_| vec![], 4);
        let m = call(&row, 'i').unwrap();
        assert!(wp(&SemanticsRow::new(vec![pt_rec(empty)]), &m, &|_| false).unwrap());

        let two = Invariant::new(|_, o| matches!(o, Value::Ch('p' | 'q')), |_| vec![ch('p'), ch('q')], 4);
        let sem = SemanticsRow::new(vec![pt_rec(two)]);
        assert!(wp(&sem, &m, &|o| matches!(o, Value::Ch('p' | 'q'))).unwrap());
        assert!(!wp(&sem, &m, &|o| *o == ch('p')).unwrap());
    }

    #[test]
    fn rec_enumeration_overflow_is_an_error() {
        let row = EffectRow::new([Rec]).unwrap();
        let inv = Invariant::new(|_, _| true, |_| vec![Value::Unit; 3], 2);
        let err = wp(&SemanticsRow::new(vec![pt_rec(inv)]), &call(&row, 'i').unwrap(), &|_| true);
        assert!(matches!(err, Err(Error::EnumerationOverflow { bound: 2, .. })));
    }

    #[test]
    fn enumerator_must_agree_with_relation() {
        let inv = Invariant::new(|_, _| false, |_| vec![Value::Unit], 2);
        assert!(matches!(inv.outputs(&Value::Unit), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn stateful_parse_strict() {
        let row = EffectRow::new([Nondet, ParserStrict]).unwrap();
        let sem = SemanticsRow::new(vec![pt_all(), pt_parse_strict()]);
        let sym = symbol_strict(&row).unwrap();
        assert!(wp_stateful(&sem, &sym, &|_, _| false, "").unwrap());
        assert!(wp_stateful(&sem, &sym, &|r, s| *r == ch('a') && s == "b", "ab").unwrap());
        assert!(wp_stateful(&sem, &sym, &|_, s| s.is_empty(), "a").unwrap());
        assert!(wp_stateful(&sem, &pure('v'), &|v, s| *v == ch('v') && s == "zz", "zz").unwrap());
    }

    #[test]
    fn stateful_parser_maybe() {
        let row = EffectRow::new([ParserMaybe]).unwrap();
        let sem = SemanticsRow::new(vec![pt_parser_maybe()]);
        let sym = symbol_maybe(&row).unwrap();
        assert!(wp_stateful(&sem, &sym, &|r, s| *r == Value::nothing() && s.is_empty(), "").unwrap());
        assert!(wp_stateful(&sem, &sym, &|r, s| *r == Value::just('a') && s == "b", "ab").unwrap());
    }

    #[test]
    fn stateful_transformer_in_plain_wp_is_rejected() {
        let row = EffectRow::new([ParserStrict]).unwrap();
        let sem = SemanticsRow::new(vec![pt_parse_strict()]);
        let err = wp(&sem, &symbol_strict(&row).unwrap(), &|_| true).unwrap_err();
        assert_eq!(err, Error::NeedsState(ParserStrict));
    }

    #[test]
    fn misaligned_rows_are_rejected() {
        let m = fail(&nd()).unwrap();
        let sem = SemanticsRow::new(vec![pt_parse_strict()]);
        assert!(matches!(wp(&sem, &m, &|_| true), Err(Error::IndexMismatch { .. })));
    }

    #[test]
    fn spec_wp() {
        let digits: Vec<Value> = ('0'..='9').map(Value::Ch).collect();
        let is3 = Spec::new(true, |o| *o == ch('3'));
        assert!(wp_spec(&is3, &|o| o.as_char().unwrap() < '5', &digits));
        assert!(!wp_spec(&Spec::new(false, |_| true), &|_| true, &digits));
    }

    #[test]
    fn demonic_results_and_refinement() {
        let ab = choice(&nd(), pure('a'), pure('b')).unwrap();
        let ctx = DemonicCtx::new();
        let rs: Vec<Value> = results_demonic(&ab, &ctx).unwrap().into_iter().map(|r| r.0).collect();
        assert_eq!(rs, vec![ch('a'), ch('b')]);
        assert!(results_demonic(&fail(&nd()).unwrap(), &ctx).unwrap().is_empty());
        assert!(refines_all(&ab, &pure('a'), &ctx).unwrap());
        assert!(refines_all(&pure('a'), &fail(&nd()).unwrap(), &ctx).unwrap());
        assert!(!refines_all(&pure('a'), &pure('b'), &ctx).unwrap());
        assert!(refines_any(&pure('a'), &ab, &ctx).unwrap());
    }

    #[test]
    fn demonic_results_need_invariant_and_state() {
        let rec = EffectRow::new([Rec]).unwrap();
        let err = results_demonic(&call(&rec, 'i').unwrap(), &DemonicCtx::new()).unwrap_err();
        assert_eq!(err, Error::MissingInvariant);
        let p = EffectRow::new([ParserStrict]).unwrap();
        let err = results_demonic(&symbol_strict(&p).unwrap(), &DemonicCtx::new()).unwrap_err();
        assert_eq!(err, Error::MissingState);
    }

    #[test]
    fn result_set_keeps_first_occurrence() {
        assert_eq!(result_set(&[3, 1, 3, 2, 1]), vec![3, 1, 2]);
    }

    #[test]
    fn language_membership() {
        let row = EffectRow::new([Nondet, ParserStrict]).unwrap();
        assert!(in_language(&row, &pure(Value::Unit), "").unwrap());
        assert!(!in_language(&row, &pure(Value::Unit), "x").unwrap());
        assert!(in_language(&row, &symbol_strict(&row).unwrap(), "a").unwrap());
        assert!(!in_language(&row, &symbol_strict(&row).unwrap(), "ab").unwrap());
    }
}
