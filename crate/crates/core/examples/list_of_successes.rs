//! A hand-written parser run for every way it can consume a prefix.

use freeparse::effect::{EffectId, EffectRow};
use freeparse::handlers::{run_parser, run_parser_partial};
use freeparse::{Computation, Value};

// Zero or more 'a's, returning how many were read.
fn many_a(row: &EffectRow, n: usize) -> Computation {
    let nd = row.nondet().unwrap();
    let sym = row.parser_strict().unwrap();
    let more = {
        let row = row.clone();
        sym.symbol().bind(move |c| if c == Value::Ch('a') { many_a(&row, n + 1) } else { nd.fail() })
    };
    nd.choice(Computation::Pure(Value::str(n.to_string())), more)
}

fn main() -> freeparse::Result<()> {
    let row = EffectRow::new([EffectId::Nondet, EffectId::ParserStrict])?;
    let p = many_a(&row, 0);
    for input in ["aaa", "aab"] {
        println!("{input:?}:");
        for (v, rest) in run_parser_partial(&p, input)? {
            println!("  read {v}, left {rest:?}");
        }
        println!("  whole-input results: {:?}", run_parser(&p, input)?);
    }
    Ok(())
}
