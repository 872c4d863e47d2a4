//! Brzozowski derivatives, nullability witnesses, and the derivative matcher
//! before and after handling its parser effect.

use freeparse::handlers::run_with_fuel;
use freeparse::regex::{derivative, dmatch, dmatch_prime, dmatch_run, nullable, parse_regex};
use freeparse::Value;

fn main() -> freeparse::Result<()> {
    let r = parse_regex("(a|b)*a")?;
    let mut d = r.clone();
    for c in "ba".chars() {
        d = derivative(&d, c);
        println!("after {c}: {d}");
    }
    match nullable(&d) {
        Some(t) => println!("nullable, witness {t}"),
        None => println!("not nullable"),
    }

    for s in ["a", "ba", "bb", "aba"] {
        let trees = dmatch_run(&r, s)?;
        let shown: Vec<String> = trees.iter().map(|t| t.to_string()).collect();
        println!("{s:?}: {}", if shown.is_empty() { "no match".to_owned() } else { shown.join(", ") });
    }

    // The same matcher with the input still an effect, driven by a state.
    let raw = dmatch();
    let out = run_with_fuel(&raw, &r.clone().into(), 3, Some("aa"))?;
    println!("effectful run on \"aa\": {:?}", out.values());

    // With the parser effect handled, the input is part of the call.
    let handled = dmatch_prime();
    let out = run_with_fuel(&handled, &Value::pair(r.into(), Value::str("aa")), 3, None)?;
    println!("handled run on \"aa\": {:?}", out.values());
    Ok(())
}
