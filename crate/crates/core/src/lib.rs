//! Effectful programs as free computation trees, their predicate-transformer
//! semantics and handlers, and two parsers built on them: a regex matcher
//! producing parse trees and a context-free grammar parser with a
//! left-recursion check and a computed recursion budget.
//!
//! ```
//! use freeparse::regex::{dmatch_run, parse_regex};
//!
//! let r = parse_regex("(a|b)*").unwrap();
//! let trees = dmatch_run(&r, "ab").unwrap();
//! assert_eq!(trees[0].to_string(), "(list (inl (char a)) (inr (char b)))");
//! ```

pub mod cfg;
pub mod cli;
pub mod effect;
pub mod error;
pub mod handlers;
pub mod regex;
pub mod value;
pub mod wp;

pub use effect::{Command, Computation, EffectId, EffectRow};
pub use error::{Error, Result};
pub use handlers::{run_with_fuel, FuelOutcome, RecursiveFn};
pub use value::Value;
