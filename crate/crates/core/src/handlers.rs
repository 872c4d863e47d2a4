//! Handlers, recursion unfolding and fuel.
//!
//! [`run_parser`] is the list-of-successes reading of a strict-char parser.
//! [`handle_rec`] folds a state handler for one effect through a recursive
//! definition, turning it into a definition over `(input, state)` pairs.
//! [`terminates_in`] is the fuel-indexed termination predicate and
//! [`run_with_fuel`] its executable counterpart: both charge one unit of fuel
//! per unfolded call, shared along a path and independent across branches.

use std::fmt;
use std::sync::Arc;

use crate::effect::{Command, Computation, EffectId, EffectRow};
use crate::error::{Error, Result};
use crate::value::Value;
use crate::wp::{split_head, SemanticsRow};

type Body = Arc<dyn Fn(&Value) -> Computation + Send + Sync>;

/// A generally recursive definition: its body may `call` itself through the
/// `Rec` effect at the head of its row.
#[derive(Clone)]
pub struct RecursiveFn {
    row: EffectRow,
    body: Body,
}

impl fmt::Debug for RecursiveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecursiveFn").field("row", &self.row).finish_non_exhaustive()
    }
}

impl RecursiveFn {
    pub fn new(
        row: EffectRow,
        body: impl Fn(&Value) -> Computation + Send + Sync + 'static,
    ) -> Result<Self> {
        if row.get(0) != Some(EffectId::Rec) {
            return Err(Error::MissingEffect(EffectId::Rec));
        }
        Ok(RecursiveFn { row, body: Arc::new(body) })
    }

    pub fn row(&self) -> &EffectRow {
        &self.row
    }

    pub fn apply(&self, input: &Value) -> Computation {
        (self.body)(input)
    }
}

/// Result of [`run_with_fuel`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FuelOutcome {
    /// Some path needed more fuel than was given.
    Exhausted,
    /// Every path finished; leaves in depth-first order with final states.
    Done(Vec<(Value, String)>),
}

impl FuelOutcome {
    pub fn is_done(&self) -> bool {
        matches!(self, FuelOutcome::Done(_))
    }

    pub fn results(&self) -> Option<&[(Value, String)]> {
        match self {
            FuelOutcome::Done(rs) => Some(rs),
            FuelOutcome::Exhausted => None,
        }
    }

    pub fn values(&self) -> Option<Vec<Value>> {
        self.results().map(|rs| rs.iter().map(|(v, _)| v.clone()).collect())
    }
}

/// List-of-successes semantics of a parser over `Nondet` and the strict
/// parser effect. A leaf counts only if the whole input was consumed.
pub fn run_parser(m: &Computation, input: &str) -> Result<Vec<(Value, String)>> {
    let mut out = Vec::new();
    successes(m, input, true, &mut out)?;
    Ok(out)
}

/// Like [`run_parser`] but every leaf is kept together with its remainder,
/// for composing with further parsing.
pub fn run_parser_partial(m: &Computation, input: &str) -> Result<Vec<(Value, String)>> {
    let mut out = Vec::new();
    successes(m, input, false, &mut out)?;
    Ok(out)
}

fn successes(
    m: &Computation,
    input: &str,
    whole: bool,
    out: &mut Vec<(Value, String)>,
) -> Result<()> {
    let op = match m {
        Computation::Pure(v) => {
            if !whole || input.is_empty() {
                out.push((v.clone(), input.to_owned()));
            }
            return Ok(());
        }
        Computation::Op(op) => op,
    };
    match op.command {
        Command::Fail => Ok(()),
        Command::Choice => {
            successes(&op.resume(Value::Bool(true)), input, whole, out)?;
            successes(&op.resume(Value::Bool(false)), input, whole, out)
        }
        Command::SymbolStrict => match split_head(input) {
            None => Ok(()),
            Some((x, xs)) => successes(&op.resume(Value::Ch(x)), xs, whole, out),
        },
        ref other => Err(Error::Unhandled(other.effect())),
    }
}

/// A state handler for one command: response and new state.
pub type Handler = Arc<dyn Fn(&Command, &str) -> (Value, String) + Send + Sync>;

/// Handler for the optional-char parser: the head of the state, or `nothing`.
pub fn h_parser(command: &Command, state: &str) -> (Value, String) {
    debug_assert_eq!(*command, Command::SymbolMaybe);
    match split_head(state) {
        None => (Value::nothing(), String::new()),
        Some((x, xs)) => (Value::just(x), xs.to_owned()),
    }
}

/// Folds `handler` over `f`, whose row is `[Rec, E, rest..]`, giving a
/// definition over `[Rec, rest..]` whose inputs are `(input, state)` pairs.
///
/// `E` nodes are answered by the handler, threading the state. A recursive
/// call is made with the state current at the call; the callee returns only
/// its result, so the caller resumes with that same state.
pub fn handle_rec(
    handler: impl Fn(&Command, &str) -> (Value, String) + Send + Sync + 'static,
    f: &RecursiveFn,
) -> Result<RecursiveFn> {
    if f.row().len() < 2 {
        return Err(Error::InvariantViolation("handle_rec needs a row [Rec, E, ..]".into()));
    }
    let handler: Handler = Arc::new(handler);
    let inner = f.clone();
    RecursiveFn::new(f.row().without(1), move |input| {
        let (i, s) = input.as_pair().expect("handle_rec input is an (input, state) pair");
        let s = s.as_str().expect("handle_rec state is a string");
        fold_handler(inner.apply(i), s.to_owned(), handler.clone())
    })
}

fn fold_handler(m: Computation, state: String, handler: Handler) -> Computation {
    let op = match m {
        Computation::Pure(v) => return Computation::Pure(v),
        Computation::Op(op) => op,
    };
    match op.index {
        0 => {
            let input = Value::pair(op.command.payload(), Value::Str(state.clone()));
            Computation::op_unchecked(
                0,
                Command::Call(input),
                Arc::new(move |o| fold_handler(op.resume(o), state.clone(), handler.clone())),
            )
        }
        1 => {
            let (response, next) = handler(&op.command, &state);
            fold_handler(op.resume(response), next, handler)
        }
        i => {
            let command = op.command.clone();
            Computation::op_unchecked(
                i - 1,
                command,
                Arc::new(move |x| fold_handler(op.resume(x), state.clone(), handler.clone())),
            )
        }
    }
}

/// Whether `m` finishes within `fuel` unfoldings of `f`. `tail` gives the
/// semantics of the effects after `Rec` (position `i` of the row is
/// `tail[i - 1]`).
pub fn terminates_in(
    tail: &SemanticsRow,
    f: &RecursiveFn,
    m: &Computation,
    fuel: usize,
) -> Result<bool> {
    match m {
        Computation::Pure(_) => Ok(true),
        Computation::Op(op) if op.index == 0 => {
            if fuel == 0 {
                return Ok(false);
            }
            let unfolded = f.apply(&op.command.payload()).bind_arc(op.resumption().clone());
            terminates_in(tail, f, &unfolded, fuel - 1)
        }
        Computation::Op(op) => {
            let pt = tail.lookup(op.index - 1, &op.command)?;
            pt.transform(&op.command, &mut |x| terminates_in(tail, f, &op.resume(x.clone()), fuel))
        }
    }
}

/// `terminates_in` is preserved by mapping over the result.
pub fn terminates_fmap_law(
    tail: &SemanticsRow,
    f: &RecursiveFn,
    g: impl Fn(Value) -> Value + Send + Sync + 'static,
    m: &Computation,
    fuel: usize,
) -> Result<bool> {
    if !terminates_in(tail, f, m, fuel)? {
        return Ok(true);
    }
    terminates_in(tail, f, &m.clone().fmap(g), fuel)
}

/// Replaces every call in `m` by the body of `f`, up to `depth` nested
/// unfoldings, giving a computation over the row of `f` without `Rec`.
/// Calls still pending at depth zero become `stuck`.
pub fn unfold_calls(f: &RecursiveFn, m: Computation, depth: usize, stuck: &Computation) -> Computation {
    let op = match m {
        Computation::Pure(v) => return Computation::Pure(v),
        Computation::Op(op) => op,
    };
    if op.index == 0 {
        if depth == 0 {
            return stuck.clone();
        }
        let body = f.apply(&op.command.payload()).bind_arc(op.resumption().clone());
        return unfold_calls(f, body, depth - 1, stuck);
    }
    let (f, stuck) = (f.clone(), stuck.clone());
    Computation::op_unchecked(
        op.index - 1,
        op.command.clone(),
        Arc::new(move |x| unfold_calls(&f, op.resume(x), depth, &stuck)),
    )
}

/// One recursive call observed by [`run_with_fuel_observed`]: the frame that
/// makes it (its input and the state when it was entered) and the callee.
#[derive(Debug)]
pub struct CallEdge<'a> {
    pub caller: &'a Value,
    pub caller_state: Option<&'a str>,
    pub callee: &'a Value,
    pub callee_state: Option<&'a str>,
}

/// Evaluates `f(input)` exploring every nondeterministic branch, unfolding
/// each call at the cost of one unit of fuel on the current path.
pub fn run_with_fuel(
    f: &RecursiveFn,
    input: &Value,
    fuel: usize,
    state0: Option<&str>,
) -> Result<FuelOutcome> {
    run_with_fuel_observed(f, input, fuel, state0, &mut |_| {})
}

pub fn run_with_fuel_observed(
    f: &RecursiveFn,
    input: &Value,
    fuel: usize,
    state0: Option<&str>,
    observer: &mut dyn FnMut(&CallEdge<'_>),
) -> Result<FuelOutcome> {
    let mut runner = Runner { f, observer, least_left: fuel };
    let mut leaves = Vec::new();
    let state = state0.map(str::to_owned);
    match runner.explore(f.apply(input), input, state0, state, fuel, &mut leaves) {
        Ok(()) => Ok(FuelOutcome::Done(
            leaves.into_iter().map(|(v, s, _)| (v, s.unwrap_or_default())).collect(),
        )),
        Err(Stop::Exhausted) => Ok(FuelOutcome::Exhausted),
        Err(Stop::Failed(e)) => Err(e),
    }
}

/// The least fuel for which [`run_with_fuel`] is `Done`, searching up to
/// `limit`. This is the largest number of calls unfolded along any path.
pub fn least_sufficient_fuel(
    f: &RecursiveFn,
    input: &Value,
    state0: Option<&str>,
    limit: usize,
) -> Result<Option<usize>> {
    let mut observer = |_: &CallEdge<'_>| {};
    let mut runner = Runner { f, observer: &mut observer, least_left: limit };
    let mut leaves = Vec::new();
    let state = state0.map(str::to_owned);
    match runner.explore(f.apply(input), input, state0, state, limit, &mut leaves) {
        Ok(()) => Ok(Some(limit - runner.least_left)),
        Err(Stop::Exhausted) => Ok(None),
        Err(Stop::Failed(e)) => Err(e),
    }
}

enum Stop {
    Exhausted,
    Failed(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Failed(e)
    }
}

type Leaf = (Value, Option<String>, usize);

struct Runner<'r> {
    f: &'r RecursiveFn,
    observer: &'r mut dyn FnMut(&CallEdge<'_>),
    least_left: usize,
}

impl Runner<'_> {
    fn explore(
        &mut self,
        m: Computation,
        frame: &Value,
        frame_state: Option<&str>,
        state: Option<String>,
        fuel: usize,
        out: &mut Vec<Leaf>,
    ) -> Result<(), Stop> {
        let op = match m {
            Computation::Pure(v) => {
                out.push((v, state, fuel));
                return Ok(());
            }
            Computation::Op(op) => op,
        };
        match &op.command {
            Command::Fail => Ok(()),
            Command::Choice => {
                self.explore(op.resume(Value::Bool(true)), frame, frame_state, state.clone(), fuel, out)?;
                self.explore(op.resume(Value::Bool(false)), frame, frame_state, state, fuel, out)
            }
            Command::SymbolStrict => {
                let s = state.ok_or(Error::MissingState)?;
                match split_head(&s) {
                    None => Ok(()),
                    Some((x, xs)) => {
                        let rest = Some(xs.to_owned());
                        self.explore(op.resume(Value::Ch(x)), frame, frame_state, rest, fuel, out)
                    }
                }
            }
            Command::SymbolMaybe => {
                let s = state.ok_or(Error::MissingState)?;
                let (r, rest) = match split_head(&s) {
                    None => (Value::nothing(), String::new()),
                    Some((x, xs)) => (Value::just(x), xs.to_owned()),
                };
                self.explore(op.resume(r), frame, frame_state, Some(rest), fuel, out)
            }
            Command::Call(callee) if op.index == 0 => {
                if fuel == 0 {
                    return Err(Stop::Exhausted);
                }
                (self.observer)(&CallEdge {
                    caller: frame,
                    caller_state: frame_state,
                    callee,
                    callee_state: state.as_deref(),
                });
                self.least_left = self.least_left.min(fuel - 1);
                let mut returns = Vec::new();
                let body = self.f.apply(callee);
                self.explore(body, callee, state.as_deref(), state.clone(), fuel - 1, &mut returns)?;
                for (v, s, left) in returns {
                    self.explore(op.resume(v), frame, frame_state, s, left, out)?;
                }
                Ok(())
            }
            other => Err(Error::IndexMismatch { index: op.index, effect: other.effect() }.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effect::{choice, pure, symbol_strict};
    use crate::wp::pt_all;
    use EffectId::*;

    fn strict_row() -> EffectRow {
        EffectRow::new([Nondet, ParserStrict]).unwrap()
    }

    #[test]
    fn run_parser_on_leaves() {
        assert_eq!(run_parser(&pure(Value::Unit), "").unwrap(), vec![(Value::Unit, String::new())]);
        assert!(run_parser(&pure(Value::Unit), "a").unwrap().is_empty());
        assert_eq!(run_parser_partial(&pure(Value::Unit), "a").unwrap(), vec![(Value::Unit, "a".into())]);
    }

    #[test]
    fn run_parser_symbols() {
        let row = strict_row();
        let sym = symbol_strict(&row).unwrap();
        assert_eq!(run_parser(&sym, "x").unwrap(), vec![(Value::Ch('x'), String::new())]);
        assert!(run_parser(&sym, "").unwrap().is_empty());
        let row2 = row.clone();
        let two = sym.clone().bind(move |_| symbol_strict(&row2).unwrap());
        assert_eq!(run_parser(&two, "ab").unwrap(), vec![(Value::Ch('b'), String::new())]);
        let alt = choice(&row, sym, pure('z')).unwrap();
        assert_eq!(run_parser(&alt, "a").unwrap(), vec![(Value::Ch('a'), String::new())]);
    }

    #[test]
    fn run_parser_rejects_foreign_effects() {
        let row = EffectRow::new([Rec]).unwrap();
        let m = crate::effect::call(&row, Value::Unit).unwrap();
        assert_eq!(run_parser(&m, "").unwrap_err(), Error::Unhandled(Rec));
    }

    #[test]
    fn h_parser_cases() {
        assert_eq!(h_parser(&Command::SymbolMaybe, ""), (Value::nothing(), String::new()));
        assert_eq!(h_parser(&Command::SymbolMaybe, "ab"), (Value::just('a'), "b".into()));
        let (_, s) = h_parser(&Command::SymbolMaybe, "");
        assert_eq!(h_parser(&Command::SymbolMaybe, &s), (Value::nothing(), String::new()));
    }

    /// Reads two symbols then returns them; no recursion.
    fn two_symbols() -> RecursiveFn {
        let row = EffectRow::new([Rec, ParserMaybe, Nondet]).unwrap();
        let p = row.parser_maybe().unwrap();
        RecursiveFn::new(row, move |_| {
            p.symbol().bind(move |a| p.symbol().fmap(move |b| Value::pair(a.clone(), b)))
        })
        .unwrap()
    }

    #[test]
    fn handle_rec_threads_state() {
        let g = handle_rec(h_parser, &two_symbols()).unwrap();
        assert_eq!(g.row().effects(), &[Rec, Nondet]);
        let out = run_with_fuel(&g, &Value::pair(Value::Unit, Value::str("ab")), 0, None).unwrap();
        assert_eq!(out.values().unwrap(), vec![Value::pair(Value::just('a'), Value::just('b'))]);
        let out = run_with_fuel(&g, &Value::pair(Value::Unit, Value::str("a")), 0, None).unwrap();
        assert_eq!(out.values().unwrap(), vec![Value::pair(Value::just('a'), Value::nothing())]);
    }

    #[test]
    fn handle_rec_pairs_call_inputs_and_reindexes() {
        let row = EffectRow::new([Rec, ParserMaybe, Nondet]).unwrap();
        let (rec, nd) = (row.rec().unwrap(), row.nondet().unwrap());
        let f = RecursiveFn::new(row, move |i| nd.choice(rec.call(i.clone()), nd.fail())).unwrap();
        let g = handle_rec(h_parser, &f).unwrap();
        let Computation::Op(op) = g.apply(&Value::pair('i'.into(), Value::str("xy"))) else { panic!() };
        assert_eq!((op.index, &op.command), (1, &Command::Choice));
        let Computation::Op(call) = op.resume(Value::Bool(true)) else { panic!() };
        assert_eq!(call.command, Command::Call(Value::pair('i'.into(), Value::str("xy"))));
    }

    /// countdown(n) calls countdown(n-1) until zero.
    fn countdown() -> RecursiveFn {
        let row = EffectRow::new([Rec, Nondet]).unwrap();
        let rec = row.rec().unwrap();
        RecursiveFn::new(row, move |v| {
            let n = v.as_list().unwrap().len();
            if n == 0 {
                pure(Value::Unit)
            } else {
                rec.call(Value::ListV(vec![Value::Unit; n - 1]))
            }
        })
        .unwrap()
    }

    #[test]
    fn fuel_counts_unfoldings() {
        let f = countdown();
        let three = Value::ListV(vec![Value::Unit; 3]);
        assert_eq!(run_with_fuel(&f, &three, 2, None).unwrap(), FuelOutcome::Exhausted);
        assert!(run_with_fuel(&f, &three, 3, None).unwrap().is_done());
        assert_eq!(least_sufficient_fuel(&f, &three, None, 50).unwrap(), Some(3));
        let tail = SemanticsRow::new(vec![pt_all()]);
        assert!(!terminates_in(&tail, &f, &f.apply(&three), 2).unwrap());
        assert!(terminates_in(&tail, &f, &f.apply(&three), 3).unwrap());
    }

    #[test]
    fn terminates_in_base_cases() {
        let f = countdown();
        let tail = SemanticsRow::new(vec![pt_all()]);
        assert!(terminates_in(&tail, &f, &pure(Value::Unit), 0).unwrap());
        let call = f.row().rec().unwrap().call(Value::ListV(vec![]));
        assert!(!terminates_in(&tail, &f, &call, 0).unwrap());
        assert!(terminates_in(&tail, &f, &call, 1).unwrap());
    }

    #[test]
    fn observer_sees_call_edges() {
        let f = countdown();
        let mut edges = Vec::new();
        let input = Value::ListV(vec![Value::Unit; 2]);
        run_with_fuel_observed(&f, &input, 5, None, &mut |e| {
            edges.push((e.caller.as_list().unwrap().len(), e.callee.as_list().unwrap().len()))
        })
        .unwrap();
        assert_eq!(edges, vec![(2, 1), (1, 0)]);
    }
}
