//! Context-free grammars: an effectful parser built from the productions, a
//! brute-force derivation oracle, and left-recursion analysis that yields a
//! fuel budget for the parser.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub mod analysis;
pub mod grammar;
pub mod oracle;
pub mod parser;

pub use analysis::{chain_bound, check_variant, left_rec_links, variant_edges, ChainReport, Link, RecOrder, VariantEdge};
pub use oracle::spec_produce;
pub use parser::{
    build_parser, cfg_row, exact, filter_lhs, from_prods, fuel_bound, fuel_formula, grammar_fn, in_language,
    parse, parse_with_fuel,
};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nonterminal(String);

impl Nonterminal {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if ok {
            Ok(Nonterminal(name))
        } else {
            Err(Error::GrammarSyntax { line: 0, msg: format!("`{name}` is not a nonterminal name") })
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Nonterminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GSymbol {
    Term(char),
    NonTerm(Nonterminal),
}

impl fmt::Display for GSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSymbol::Term(c) => {
                let esc = match c {
                    '\'' => "\\'".to_owned(),
                    '\\' => "\\\\".to_owned(),
                    '\n' => "\\n".to_owned(),
                    '\t' => "\\t".to_owned(),
                    c => c.to_string(),
                };
                write!(f, "'{esc}'")
            }
            GSymbol::NonTerm(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: Nonterminal,
    pub rhs: Vec<GSymbol>,
    pub index: usize,
}

impl Production {
    /// Number of nonterminals on the right-hand side, which is the number of
    /// children of every node built with this production.
    pub fn arity(&self) -> usize {
        self.rhs.iter().filter(|s| matches!(s, GSymbol::NonTerm(_))).count()
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    productions: Vec<Production>,
    nonterminals: Vec<Nonterminal>,
}

impl Grammar {
    /// Builds a grammar from `(lhs, rhs)` rules, numbering productions in
    /// order. Every nonterminal used on a right-hand side must have a rule.
    pub fn new(rules: Vec<(Nonterminal, Vec<GSymbol>)>) -> Result<Self> {
        let productions: Vec<Production> = rules
            .into_iter()
            .enumerate()
            .map(|(index, (lhs, rhs))| Production { lhs, rhs, index })
            .collect();
        let mut nonterminals: Vec<Nonterminal> = Vec::new();
        for p in &productions {
            if !nonterminals.contains(&p.lhs) {
                nonterminals.push(p.lhs.clone());
            }
        }
        for p in &productions {
            for s in &p.rhs {
                if let GSymbol::NonTerm(n) = s {
                    if !nonterminals.contains(n) {
                        return Err(Error::UndefinedNonterminal(n.name().to_owned()));
                    }
                }
            }
        }
        Ok(Grammar { productions, nonterminals })
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Nonterminals with at least one production, in order of first rule.
    pub fn nonterminals(&self) -> &[Nonterminal] {
        &self.nonterminals
    }

    pub fn nonterminal(&self, name: &str) -> Result<Nonterminal> {
        self.nonterminals
            .iter()
            .find(|n| n.name() == name)
            .cloned()
            .ok_or_else(|| Error::UndefinedNonterminal(name.to_owned()))
    }

    /// Terminal characters occurring anywhere in the grammar.
    pub fn terminals(&self) -> BTreeSet<char> {
        self.productions
            .iter()
            .flat_map(|p| p.rhs.iter())
            .filter_map(|s| match s {
                GSymbol::Term(c) => Some(*c),
                GSymbol::NonTerm(_) => None,
            })
            .collect()
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.productions {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A parse result: the production used at the root and the results of its
/// nonterminals, left to right. Terminals leave no trace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SemValue {
    pub nt: Nonterminal,
    pub production: usize,
    pub children: Vec<SemValue>,
}

impl SemValue {
    pub fn node(nt: Nonterminal, production: usize, children: Vec<SemValue>) -> SemValue {
        SemValue { nt, production, children }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut items = vec![
            serde_json::json!("node"),
            serde_json::json!(self.nt.name()),
            serde_json::json!(self.production),
        ];
        items.extend(self.children.iter().map(SemValue::to_json));
        serde_json::Value::Array(items)
    }
}

impl fmt::Display for SemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(node {} {}", self.nt, self.production)?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nt(s: &str) -> Nonterminal {
        Nonterminal::new(s).unwrap()
    }

    #[test]
    fn names() {
        assert!(Nonterminal::new("Expr_1").is_ok());
        assert!(Nonterminal::new("").is_err());
        assert!(Nonterminal::new("1x").is_err());
    }

    #[test]
    fn undefined_nonterminal_is_rejected() {
        let rules = vec![(nt("X"), vec![GSymbol::NonTerm(nt("Y"))])];
        assert_eq!(Grammar::new(rules).unwrap_err(), Error::UndefinedNonterminal("Y".into()));
    }

    #[test]
    fn node_printing() {
        let v = SemValue::node(nt("E"), 0, vec![SemValue::node(nt("E"), 1, vec![])]);
        assert_eq!(v.to_string(), "(node E 0 (node E 1))");
        assert_eq!(v.to_json().to_string(), r#"["node","E",0,["node","E",1]]"#);
    }

    #[test]
    fn production_display() {
        let p = Production { lhs: nt("E"), rhs: vec![GSymbol::Term('\''), GSymbol::NonTerm(nt("E"))], index: 0 };
        assert_eq!(p.to_string(), "E -> '\\'' E");
        assert_eq!(p.arity(), 1);
    }
}
