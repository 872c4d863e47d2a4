//! Grammar analysis and parsing, cross-checked against the reference parser.

use freeparse::cfg::{chain_bound, fuel_bound, in_language, parse, spec_produce, variant_edges, Grammar};

fn main() -> freeparse::Result<()> {
    let g = Grammar::parse(
        "# sums of ones and a's\n\
         E -> T R\n\
         R -> '+' T R |\n\
         T -> '1' | 'a'",
    )?;
    println!("{g}");
    let report = chain_bound(&g);
    report.links.iter().for_each(|l| println!("link: {l}"));
    println!("chain bound: {:?}", report.bound);

    let e = g.nonterminal("E")?;
    for input in ["1+a", "1+", "a+1+1"] {
        // Demonic: every parse, partial ones included, must consume all input.
        println!("{input:?} in language: {}", in_language(&g, &e, input)?);
        println!("  fuel bound {}", fuel_bound(&g, &e, input.chars().count())?);
        for (tree, rest) in parse(&g, &e, input)? {
            println!("  {tree}  left {rest:?}");
        }
        assert_eq!(parse(&g, &e, input)?, spec_produce(&g, &e, input)?);
    }

    for edge in variant_edges(&g, &e, "1+a")?.iter().take(4) {
        println!("call {}@{} -> {}@{}: {:?}", edge.caller, edge.caller_len, edge.callee, edge.callee_len, edge.order);
    }

    let cyclic = Grammar::parse("E -> E '+' E | '1'")?;
    println!("cyclic witness: {:?}", chain_bound(&cyclic).cycle);
    Ok(())
}
