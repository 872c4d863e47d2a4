//! The structural regex matcher, checked against its invariant and then run.

use freeparse::handlers::run_with_fuel;
use freeparse::regex::{match_spec_invariant, match_structural, parse_regex};
use freeparse::wp::{pt_all, pt_rec, wp, SemanticsRow};
use freeparse::Value;

fn main() -> freeparse::Result<()> {
    let f = match_structural();
    let inv = match_spec_invariant();
    let sem = SemanticsRow::new(vec![pt_rec(inv.clone()), pt_all()]);

    for (re, s) in [("a|ab", "ab"), ("(a|b)(a|b)", "ba"), ("a*", "aa"), ("(a|\\e)*", "a")] {
        let r = parse_regex(re)?;
        let input = Value::pair(r.into(), Value::str(s));
        let correct = wp(&sem, &f.apply(&input), &|out| inv.holds(&input, out))?;
        println!("{re} on {s:?}: body respects the invariant: {correct}");
        match run_with_fuel(&f, &input, 10, None)?.values() {
            Some(vs) => vs.iter().for_each(|v| println!("  {v}")),
            None => println!("  fuel exhausted"),
        }
    }
    Ok(())
}
