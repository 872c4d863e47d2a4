//! Generators and sample families shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use freeparse::cfg::{chain_bound, GSymbol, Grammar, Nonterminal};
use freeparse::effect::{Computation, EffectId, EffectRow, NondetAt};
use freeparse::Value;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ALPHABET: [char; 2] = ['a', 'b'];
pub const CFG_ALPHABET: [char; 4] = ['a', 'b', '+', '1'];

/// Leaf values used by generated computations.
pub const LEAVES: [char; 4] = ['w', 'x', 'y', 'z'];

/// A first-order description of a computation over `[Nondet]`, so that the
/// same program can be built several times and printed on failure.
#[derive(Debug, Clone, PartialEq)]
pub enum Prog {
    Pure(char),
    Fail,
    Choice(Box<Prog>, Box<Prog>),
}

pub fn nondet_row() -> EffectRow {
    EffectRow::new([EffectId::Nondet]).unwrap()
}

impl Prog {
    pub fn build(&self, nd: NondetAt) -> Computation {
        match self {
            Prog::Pure(c) => Computation::Pure(Value::Ch(*c)),
            Prog::Fail => nd.fail(),
            Prog::Choice(l, r) => nd.choice(l.build(nd), r.build(nd)),
        }
    }

    pub fn random(rng: &mut impl Rng, depth: usize) -> Prog {
        let pick = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..5) };
        match pick {
            0 => Prog::Pure(*LEAVES.choose(rng).unwrap()),
            1 => Prog::Fail,
            _ => Prog::Choice(Box::new(Prog::random(rng, depth - 1)), Box::new(Prog::random(rng, depth - 1))),
        }
    }
}

/// A continuation given by a table from leaf values to programs.
#[derive(Debug, Clone)]
pub struct Cont(pub Vec<(char, Prog)>);

impl Cont {
    pub fn random(rng: &mut impl Rng, depth: usize) -> Cont {
        Cont(LEAVES.iter().map(|&c| (c, Prog::random(rng, depth))).collect())
    }

    pub fn to_fn(&self, nd: NondetAt) -> Arc<dyn Fn(Value) -> Computation + Send + Sync> {
        let table = self.0.clone();
        Arc::new(move |v| {
            let c = v.as_char().expect("generated leaves are chars");
            table.iter().find(|(k, _)| *k == c).expect("total table").1.build(nd)
        })
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn nt(name: &str) -> Nonterminal {
    Nonterminal::new(name).unwrap()
}

/// Grammars picked by hand to cover right recursion, left-recursion links,
/// empty productions and ambiguity.
pub fn handpicked_grammars() -> Vec<Grammar> {
    [
        "E -> 'a' E | 'b'",
        "S -> A 'x'\nA -> 'a'",
        "E -> T R\nR -> '+' T R |\nT -> '1' | 'a'",
        "E -> 'b'",
        "S -> A B\nA -> 'a' A |\nB -> 'b' B |",
        "S -> A A A\nA -> B B\nB -> | 'a'",
        "S -> A 'a' | 'a' A\nA -> 'a' |",
        "P -> '1' P '+' | '1'",
        "S -> A B '+'\nA -> B | 'a'\nB -> '1' |",
    ]
    .iter()
    .map(|text| Grammar::parse(text).unwrap())
    .collect()
}

/// Random acyclic grammars with at most four nonterminals, six productions
/// and three symbols per right-hand side, from a fixed seed.
pub fn random_grammars(count: usize, seed: u64) -> Vec<Grammar> {
    const NAMES: [&str; 4] = ["S", "A", "B", "C"];
    let mut rng = seeded(seed);
    let mut out: Vec<Grammar> = Vec::new();
    while out.len() < count {
        let n_nts = rng.gen_range(1..=4);
        let n_prods = rng.gen_range(n_nts..=6);
        let mut rules = Vec::new();
        for i in 0..n_prods {
            let lhs = if i < n_nts { i } else { rng.gen_range(0..n_nts) };
            let len = rng.gen_range(0..=3);
            let rhs = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        GSymbol::Term(*CFG_ALPHABET.choose(&mut rng).unwrap())
                    } else {
                        GSymbol::NonTerm(nt(NAMES[rng.gen_range(0..n_nts)]))
                    }
                })
                .collect();
            rules.push((nt(NAMES[lhs]), rhs));
        }
        rules.shuffle(&mut rng);
        let g = Grammar::new(rules).unwrap();
        if !chain_bound(&g).is_cyclic() && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// The grammar family used by the oracle and termination checks.
pub fn grammar_family() -> Vec<Grammar> {
    let mut gs: Vec<Grammar> = handpicked_grammars().into_iter().filter(|g| !chain_bound(g).is_cyclic()).collect();
    gs.extend(random_grammars(30, 0x5eed));
    gs
}

/// Inputs for a grammar: strings up to `max_len` over the common alphabet
/// together with the grammar's own terminals.
pub fn grammar_inputs(g: &Grammar, max_len: usize) -> Vec<String> {
    let mut alphabet: Vec<char> = CFG_ALPHABET.to_vec();
    for c in g.terminals() {
        if !alphabet.contains(&c) {
            alphabet.push(c);
        }
    }
    freeparse::regex::strings_up_to(&alphabet, max_len)
}
