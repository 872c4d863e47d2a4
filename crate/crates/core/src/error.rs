use thiserror::Error;

use crate::effect::EffectId;

/// Errors raised by the effect machinery, the semantics and the parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("effect row does not contain {0:?}")]
    MissingEffect(EffectId),
    #[error("effect {0:?} occurs more than once in the row")]
    DuplicateEffect(EffectId),
    #[error("operation index {index} does not name {effect:?} in this row")]
    IndexMismatch { index: usize, effect: EffectId },
    #[error("response {response} is not admissible for {effect:?}")]
    BadResponse { effect: EffectId, response: String },
    #[error("no handler or transformer for {0:?}")]
    Unhandled(EffectId),
    #[error("computation performs a recursive call but no invariant was supplied")]
    MissingInvariant,
    #[error("computation uses a parser effect but no input state was supplied")]
    MissingState,
    #[error("transformer for {0:?} needs a state; use the stateful evaluator")]
    NeedsState(EffectId),
    #[error("enumeration overflow: more than {bound} outputs for call input {input}")]
    EnumerationOverflow { bound: usize, input: String },
    #[error("value has the wrong shape: expected {expected}, got {got}")]
    Shape { expected: &'static str, got: String },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("line {line}: {msg}")]
    GrammarSyntax { line: usize, msg: String },
    #[error("undefined nonterminal `{0}`")]
    UndefinedNonterminal(String),
    #[error("left-recursive grammar, cycle: {}", .0.join(" -> "))]
    CyclicGrammar(Vec<String>),
    #[error("derivation depth exceeded {0}")]
    DepthExceeded(usize),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
