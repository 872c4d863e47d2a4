//! Weakest preconditions under demonic and angelic choice, and refinement.

use freeparse::effect::{EffectId, EffectRow};
use freeparse::wp::{pt_all, pt_any, pt_parse_strict, refines_all, wp, wp_stateful, DemonicCtx, SemanticsRow};
use freeparse::{Computation, Value};

fn main() -> freeparse::Result<()> {
    let row = EffectRow::new([EffectId::Nondet])?;
    let nd = row.nondet()?;
    let coin = |a: char, b: char| nd.choice(Computation::Pure(a.into()), Computation::Pure(b.into()));
    let m = coin('x', 'y');
    let is_x = |v: &Value| v.as_char() == Ok('x');

    let all = SemanticsRow::new(vec![pt_all()]);
    let any = SemanticsRow::new(vec![pt_any()]);
    println!("every result is x: {}", wp(&all, &m, &is_x)?);
    println!("some result is x:  {}", wp(&any, &m, &is_x)?);
    println!("fail, every:       {}", wp(&all, &nd.fail(), &is_x)?);

    // refines_all(s, t) holds when every result of t is one of s.
    let just_x = Computation::Pure('x'.into());
    println!("x refines x|y:     {}", refines_all(&m, &just_x, &DemonicCtx::new())?);
    println!("x|y refines x:     {}", refines_all(&just_x, &m, &DemonicCtx::new())?);

    // Stateful: reading past the end vacuously satisfies anything.
    let prow = EffectRow::new([EffectId::ParserStrict])?;
    let read = prow.parser_strict()?.symbol();
    let sem = SemanticsRow::new(vec![pt_parse_strict()]);
    for s in ["", "a", "b"] {
        let ok = wp_stateful(&sem, &read, &|v, _| v.as_char() == Ok('a'), s)?;
        println!("symbol gives 'a' on {s:?}: {ok}");
    }
    Ok(())
}
