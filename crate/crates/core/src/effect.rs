//! Effect signatures, effect rows and the free computation tree.
//!
//! A [`Computation`] is either a pure leaf or an operation node that names an
//! effect by its position in an [`EffectRow`], carries a [`Command`] and a
//! resumption from responses to the rest of the program. Nothing here gives
//! the commands a meaning; that is the job of the predicate transformers in
//! [`crate::wp`] and the handlers in [`crate::handlers`].
//!
//! Rows are plain values and positions are explicit. Smart constructors look
//! the effect up once (see [`EffectRow::nondet`] and friends) and hand back a
//! small index type, so every operation node is built with an index that was
//! checked against the row.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EffectId {
    /// Binary choice and failure.
    Nondet,
    /// `Symbol` answers `nothing` on exhausted input, `just c` otherwise.
    ParserMaybe,
    /// `Symbol` answers the next character; no answer on exhausted input.
    ParserStrict,
    /// General recursion: a call carries its input, any value may come back.
    Rec,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Command {
    Choice,
    Fail,
    SymbolMaybe,
    SymbolStrict,
    Call(Value),
}

impl Command {
    pub fn effect(&self) -> EffectId {
        match self {
            Command::Choice | Command::Fail => EffectId::Nondet,
            Command::SymbolMaybe => EffectId::ParserMaybe,
            Command::SymbolStrict => EffectId::ParserStrict,
            Command::Call(_) => EffectId::Rec,
        }
    }

    /// The call input for `Rec`, `Unit` for every other command.
    pub fn payload(&self) -> Value {
        match self {
            Command::Call(v) => v.clone(),
            _ => Value::Unit,
        }
    }

    /// Whether `response` belongs to the command's response set.
    pub fn admits(&self, response: &Value) -> bool {
        match self {
            Command::Choice => matches!(response, Value::Bool(_)),
            Command::Fail => false,
            Command::SymbolMaybe => matches!(response, Value::Unit | Value::Ch(_)),
            Command::SymbolStrict => matches!(response, Value::Ch(_)),
            Command::Call(_) => true,
        }
    }

    pub(crate) fn check_response(&self, response: &Value) -> Result<()> {
        if self.admits(response) {
            Ok(())
        } else {
            Err(Error::BadResponse { effect: self.effect(), response: response.to_string() })
        }
    }
}

/// An ordered list of effects; each effect occurs at most once.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EffectRow(Vec<EffectId>);

impl EffectRow {
    pub fn new(effects: impl IntoIterator<Item = EffectId>) -> Result<Self> {
        let effects: Vec<EffectId> = effects.into_iter().collect();
        for (i, e) in effects.iter().enumerate() {
            if effects[..i].contains(e) {
                return Err(Error::DuplicateEffect(*e));
            }
        }
        Ok(EffectRow(effects))
    }

    pub fn effects(&self) -> &[EffectId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<EffectId> {
        self.0.get(index).copied()
    }

    pub fn position(&self, effect: EffectId) -> Option<usize> {
        self.0.iter().position(|e| *e == effect)
    }

    pub fn require(&self, effect: EffectId) -> Result<usize> {
        self.position(effect).ok_or(Error::MissingEffect(effect))
    }

    /// The row with position `index` removed; later positions shift down by one.
    pub fn without(&self, index: usize) -> EffectRow {
        let mut effects = self.0.clone();
        effects.remove(index);
        EffectRow(effects)
    }

    pub fn nondet(&self) -> Result<NondetAt> {
        self.require(EffectId::Nondet).map(NondetAt)
    }

    pub fn parser_maybe(&self) -> Result<SymbolAt> {
        self.require(EffectId::ParserMaybe).map(|index| SymbolAt { index, strict: false })
    }

    pub fn parser_strict(&self) -> Result<SymbolAt> {
        self.require(EffectId::ParserStrict).map(|index| SymbolAt { index, strict: true })
    }

    pub fn rec(&self) -> Result<RecAt> {
        self.require(EffectId::Rec).map(RecAt)
    }

    /// Checks that an operation node's index names its command's effect.
    pub fn check_op(&self, index: usize, command: &Command) -> Result<()> {
        if self.get(index) == Some(command.effect()) {
            Ok(())
        } else {
            Err(Error::IndexMismatch { index, effect: command.effect() })
        }
    }
}

pub type Resumption = Arc<dyn Fn(Value) -> Computation + Send + Sync>;

/// An operation node: effect position, command and resumption.
#[derive(Clone)]
pub struct Op {
    pub index: usize,
    pub command: Command,
    resume: Resumption,
}

impl Op {
    pub fn resume(&self, response: Value) -> Computation {
        (self.resume)(response)
    }

    pub fn resumption(&self) -> &Resumption {
        &self.resume
    }
}

/// A program over some effect row, as a lazily unfolded tree.
///
/// Resumptions are closures, so two computations can only be compared by
/// running them; see [`crate::wp::results_demonic`].
#[derive(Clone)]
pub enum Computation {
    Pure(Value),
    Op(Op),
}

impl fmt::Debug for Computation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Computation::Pure(v) => f.debug_tuple("Pure").field(v).finish(),
            Computation::Op(op) => f
                .debug_struct("Op")
                .field("index", &op.index)
                .field("command", &op.command)
                .finish_non_exhaustive(),
        }
    }
}

impl Computation {
    /// Builds an operation node after checking `index` against `row`.
    pub fn op(
        row: &EffectRow,
        index: usize,
        command: Command,
        resume: impl Fn(Value) -> Computation + Send + Sync + 'static,
    ) -> Result<Computation> {
        row.check_op(index, &command)?;
        Ok(Computation::op_unchecked(index, command, Arc::new(resume)))
    }

    pub(crate) fn op_unchecked(index: usize, command: Command, resume: Resumption) -> Computation {
        Computation::Op(Op { index, command, resume })
    }

    /// Grafts `k` onto every pure leaf.
    pub fn bind(self, k: impl Fn(Value) -> Computation + Send + Sync + 'static) -> Computation {
        self.bind_arc(Arc::new(k))
    }

    pub fn bind_arc(self, k: Resumption) -> Computation {
        match self {
            Computation::Pure(v) => k(v),
            Computation::Op(Op { index, command, resume }) => Computation::op_unchecked(
                index,
                command,
                Arc::new(move |r| resume(r).bind_arc(k.clone())),
            ),
        }
    }

    pub fn fmap(self, g: impl Fn(Value) -> Value + Send + Sync + 'static) -> Computation {
        self.bind(move |v| Computation::Pure(g(v)))
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, Computation::Pure(_))
    }
}

pub fn pure(v: impl Into<Value>) -> Computation {
    Computation::Pure(v.into())
}

pub fn bind(
    m: Computation,
    k: impl Fn(Value) -> Computation + Send + Sync + 'static,
) -> Computation {
    m.bind(k)
}

pub fn fmap(g: impl Fn(Value) -> Value + Send + Sync + 'static, m: Computation) -> Computation {
    m.fmap(g)
}

pub fn fail(row: &EffectRow) -> Result<Computation> {
    Ok(row.nondet()?.fail())
}

pub fn choice(row: &EffectRow, l: Computation, r: Computation) -> Result<Computation> {
    Ok(row.nondet()?.choice(l, r))
}

pub fn choices(row: &EffectRow, ms: Vec<Computation>) -> Result<Computation> {
    Ok(row.nondet()?.choices(ms))
}

pub fn symbol_maybe(row: &EffectRow) -> Result<Computation> {
    Ok(row.parser_maybe()?.symbol())
}

pub fn symbol_strict(row: &EffectRow) -> Result<Computation> {
    Ok(row.parser_strict()?.symbol())
}

pub fn call(row: &EffectRow, input: impl Into<Value>) -> Result<Computation> {
    Ok(row.rec()?.call(input))
}

/// Position of `Nondet` in a row, obtained from [`EffectRow::nondet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NondetAt(pub(crate) usize);

impl NondetAt {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn fail(self) -> Computation {
        Computation::op_unchecked(
            self.0,
            Command::Fail,
            Arc::new(|_| unreachable!("Fail has no responses")),
        )
    }

    /// `true` resumes with `l`, `false` with `r`.
    pub fn choice(self, l: Computation, r: Computation) -> Computation {
        Computation::op_unchecked(
            self.0,
            Command::Choice,
            Arc::new(move |b| match b {
                Value::Bool(true) => l.clone(),
                Value::Bool(false) => r.clone(),
                other => panic!("Choice resumed with {other}"),
            }),
        )
    }

    /// Right fold of [`NondetAt::choice`] with [`NondetAt::fail`] as unit.
    pub fn choices(self, ms: Vec<Computation>) -> Computation {
        ms.into_iter().rev().fold(self.fail(), |acc, m| self.choice(m, acc))
    }
}

/// Position of one of the two parser effects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolAt {
    pub(crate) index: usize,
    pub(crate) strict: bool,
}

impl SymbolAt {
    pub fn index(self) -> usize {
        self.index
    }

    pub fn symbol(self) -> Computation {
        let command = if self.strict { Command::SymbolStrict } else { Command::SymbolMaybe };
        Computation::op_unchecked(self.index, command, Arc::new(Computation::Pure))
    }
}

/// Position of `Rec` in a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecAt(pub(crate) usize);

impl RecAt {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn call(self, input: impl Into<Value>) -> Computation {
        Computation::op_unchecked(self.0, Command::Call(input.into()), Arc::new(Computation::Pure))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use EffectId::*;

    fn nd_row() -> EffectRow {
        EffectRow::new([Nondet]).unwrap()
    }

    #[test]
    fn rows_reject_duplicates() {
        assert_eq!(EffectRow::new([Nondet, Rec, Nondet]), Err(Error::DuplicateEffect(Nondet)));
    }

    #[test]
    fn constructors_need_their_effect() {
        let row = EffectRow::new([Rec]).unwrap();
        assert_eq!(fail(&row).unwrap_err(), Error::MissingEffect(Nondet));
        assert_eq!(symbol_maybe(&row).unwrap_err(), Error::MissingEffect(ParserMaybe));
        assert_eq!(symbol_strict(&row).unwrap_err(), Error::MissingEffect(ParserStrict));
        assert!(call(&row, Value::Unit).is_ok());
        assert_eq!(call(&nd_row(), Value::Unit).unwrap_err(), Error::MissingEffect(Rec));
    }

    #[test]
    fn op_indices_match_row_positions() {
        let row = EffectRow::new([Rec, ParserMaybe, Nondet]).unwrap();
        let Computation::Op(op) = fail(&row).unwrap() else { panic!() };
        assert_eq!(op.index, 2);
        let Computation::Op(op) = symbol_maybe(&row).unwrap() else { panic!() };
        assert_eq!(op.index, 1);
        assert!(Computation::op(&row, 0, Command::Choice, Computation::Pure).is_err());
        assert!(Computation::op(&row, 2, Command::Choice, Computation::Pure).is_ok());
    }

    #[test]
    fn bind_on_pure_applies_continuation() {
        let m = pure(true).bind(|v| pure(Value::pair(v, Value::Unit)));
        match m {
            Computation::Pure(v) => assert_eq!(v, Value::pair(Value::Bool(true), Value::Unit)),
            _ => panic!("expected a leaf"),
        }
    }

    #[test]
    fn bind_preserves_op_nodes() {
        let row = nd_row();
        let m = choice(&row, pure('a'), pure('b')).unwrap().fmap(|v| Value::ListV(vec![v]));
        let Computation::Op(op) = m else { panic!() };
        assert_eq!(op.command, Command::Choice);
        match op.resume(Value::Bool(false)) {
            Computation::Pure(v) => assert_eq!(v, Value::ListV(vec![Value::Ch('b')])),
            _ => panic!(),
        }
    }

    #[test]
    fn choices_of_nothing_is_fail() {
        let Computation::Op(op) = choices(&nd_row(), vec![]).unwrap() else { panic!() };
        assert_eq!(op.command, Command::Fail);
    }

    #[test]
    fn response_sets() {
        assert!(Command::Choice.admits(&Value::Bool(false)));
        assert!(!Command::Fail.admits(&Value::Unit));
        assert!(Command::SymbolMaybe.admits(&Value::nothing()));
        assert!(Command::SymbolMaybe.admits(&Value::just('x')));
        assert!(!Command::SymbolStrict.admits(&Value::nothing()));
        assert_eq!(Command::Call(Value::Ch('q')).payload(), Value::Ch('q'));
        assert_eq!(Command::Choice.payload(), Value::Unit);
    }
}
