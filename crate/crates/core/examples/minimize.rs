//! Whitehead minimization, primitivity and Whitehead graphs.
//!
//! Usage: cargo run --example minimize -- [word...]

use relcensus::whitehead::{is_primitive, minimal_free_factor_rank, whitehead_graph, whitehead_minimize};
use relcensus::Word;

fn main() -> relcensus::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() { vec!["ababbabbbabbbb".into(), "abaabaaab".into(), "aabAB".into()] } else { args };
    for s in inputs {
        let w = Word::parse(&s)?;
        let (min, chain) = whitehead_minimize(&w);
        println!("{w}: minimal form {min} (length {}) via {} steps", min.len(), chain.len());
        if !chain.is_empty() {
            println!("  chain {chain}");
        }
        println!("  primitive {}, minimal free factor rank {}", is_primitive(&w), minimal_free_factor_rank(&w));
        if !min.is_empty() {
            let g = whitehead_graph(&min, false)?;
            let edges: Vec<String> = g.edges().iter().map(|(x, y, m)| format!("{x}-{y}x{m}")).collect();
            println!("  Whitehead graph {}", edges.join(" "));
        }
    }
    Ok(())
}
