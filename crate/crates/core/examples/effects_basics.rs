//! Building computation trees over an effect row and collecting their results.

use freeparse::effect::{EffectId, EffectRow};
use freeparse::wp::{result_set, results_demonic, DemonicCtx};
use freeparse::{Computation, Value};

fn main() -> freeparse::Result<()> {
    let row = EffectRow::new([EffectId::Nondet, EffectId::ParserStrict])?;
    let nd = row.nondet()?;
    let sym = row.parser_strict()?;

    // Read one character, then either keep it or read a second one.
    let m = sym.symbol().bind(move |c| {
        let c2 = c.clone();
        nd.choice(
            Computation::Pure(Value::pair(c.clone(), Value::Unit)),
            sym.symbol().bind(move |d| Computation::Pure(Value::pair(c2.clone(), d))),
        )
    });

    for input in ["", "x", "xy"] {
        let ctx = DemonicCtx::new().with_state(input);
        println!("input {input:?}:");
        for (v, rest) in results_demonic(&m, &ctx)? {
            println!("  {v}  remainder {rest:?}");
        }
    }

    let dup = nd.choice(Computation::Pure('a'.into()), Computation::Pure('a'.into()));
    let leaves: Vec<Value> = results_demonic(&dup, &DemonicCtx::new())?.into_iter().map(|(v, _)| v).collect();
    println!("leaves {} / distinct {}", leaves.len(), result_set(&leaves).len());
    Ok(())
}
