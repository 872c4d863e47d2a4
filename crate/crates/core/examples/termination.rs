//! Fuel, termination and the smallest budget a run needs.

use freeparse::handlers::{least_sufficient_fuel, run_with_fuel, terminates_in};
use freeparse::regex::{match_structural, parse_regex};
use freeparse::wp::{pt_all, SemanticsRow};
use freeparse::Value;

fn main() -> freeparse::Result<()> {
    let f = match_structural();
    let tail = SemanticsRow::new(vec![pt_all()]);
    for (re, s) in [("a*", "aaa"), ("(a*)*", "aa"), ("\\e*", ""), ("\\e*", "a")] {
        let input = Value::pair(parse_regex(re)?.into(), Value::str(s));
        let need = least_sufficient_fuel(&f, &input, None, 12)?;
        let within = terminates_in(&tail, &f, &f.apply(&input), 4)?;
        println!("{re} on {s:?}: least fuel {need:?}, terminates within 4: {within}");
        if let Some(n) = need {
            assert!(run_with_fuel(&f, &input, n, None)?.is_done());
        }
    }
    Ok(())
}
