//! The universal result and response domain.
//!
//! Every pure leaf, every command response and every recursive-call input or
//! output is a [`Value`]. Shapes that a typed host language would enforce
//! statically are checked dynamically by the code that consumes them.

use std::fmt;

use crate::cfg::SemValue;
use crate::error::{Error, Result};
use crate::regex::{ParseTree, Regex};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Unit,
    Bool(bool),
    Ch(char),
    Str(String),
    PairV(Box<Value>, Box<Value>),
    ListV(Vec<Value>),
    TreeV(ParseTree),
    NodeV(SemValue),
    /// A split of some input into `prefix ++ suffix`.
    SplitV { prefix: String, suffix: String },
    /// A regular expression, used as the call input of the regex matchers.
    Re(Regex),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::PairV(Box::new(a), Box::new(b))
    }

    pub fn str(s: impl Into<String>) -> Value {
        Value::Str(s.into())
    }

    /// `nothing` response of the optional-char parser effect.
    pub fn nothing() -> Value {
        Value::Unit
    }

    /// `just c` response of the optional-char parser effect.
    pub fn just(c: char) -> Value {
        Value::Ch(c)
    }

    pub fn as_bool(&self) -> Result<bool> {
        match self {
            Value::Bool(b) => Ok(*b),
            other => Err(shape("Bool", other)),
        }
    }

    pub fn as_char(&self) -> Result<char> {
        match self {
            Value::Ch(c) => Ok(*c),
            other => Err(shape("Ch", other)),
        }
    }

    pub fn as_str(&self) -> Result<&str> {
        match self {
            Value::Str(s) => Ok(s),
            other => Err(shape("Str", other)),
        }
    }

    pub fn as_pair(&self) -> Result<(&Value, &Value)> {
        match self {
            Value::PairV(a, b) => Ok((a, b)),
            other => Err(shape("PairV", other)),
        }
    }

    pub fn as_list(&self) -> Result<&[Value]> {
        match self {
            Value::ListV(xs) => Ok(xs),
            other => Err(shape("ListV", other)),
        }
    }

    pub fn as_tree(&self) -> Result<&ParseTree> {
        match self {
            Value::TreeV(t) => Ok(t),
            other => Err(shape("TreeV", other)),
        }
    }

    pub fn as_node(&self) -> Result<&SemValue> {
        match self {
            Value::NodeV(n) => Ok(n),
            other => Err(shape("NodeV", other)),
        }
    }

    pub fn as_regex(&self) -> Result<&Regex> {
        match self {
            Value::Re(r) => Ok(r),
            other => Err(shape("Re", other)),
        }
    }

    /// Reads an optional-char response: `Unit` is `nothing`, `Ch c` is `just c`.
    pub fn as_maybe_char(&self) -> Result<Option<char>> {
        match self {
            Value::Unit => Ok(None),
            Value::Ch(c) => Ok(Some(*c)),
            other => Err(shape("Unit or Ch", other)),
        }
    }
}

fn shape(expected: &'static str, got: &Value) -> Error {
    Error::Shape { expected, got: got.to_string() }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => write!(f, "()"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Ch(c) => write!(f, "{c:?}"),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::PairV(a, b) => write!(f, "({a}, {b})"),
            Value::ListV(xs) => {
                write!(f, "[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            Value::TreeV(t) => write!(f, "{t}"),
            Value::NodeV(n) => write!(f, "{n}"),
            Value::SplitV { prefix, suffix } => write!(f, "({prefix:?} ++ {suffix:?})"),
            Value::Re(r) => write!(f, "/{r}/"),
        }
    }
}

impl From<ParseTree> for Value {
    fn from(t: ParseTree) -> Self {
        Value::TreeV(t)
    }
}

impl From<SemValue> for Value {
    fn from(n: SemValue) -> Self {
        Value::NodeV(n)
    }
}

impl From<Regex> for Value {
    fn from(r: Regex) -> Self {
        Value::Re(r)
    }
}

impl From<char> for Value {
    fn from(c: char) -> Self {
        Value::Ch(c)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_owned())
    }
}
