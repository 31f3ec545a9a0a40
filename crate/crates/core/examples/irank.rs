//! Imprimitivity rank with witness graphs, and w-subgroups.
//!
//! Usage: cargo run --example irank -- [word...]

use relcensus::stallings::{imprimitivity_rank, w_subgroups};
use relcensus::Word;

fn main() -> relcensus::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() { vec!["abAB".into(), "aabbcc".into(), "aabAAB".into()] } else { args };
    for s in inputs {
        let w = Word::parse(&s)?;
        let report = imprimitivity_rank(&w, None);
        println!("{w}: imprimitivity rank {}, {} minimal witnesses", report.value, report.witnesses.len());
        for (g, image) in report.witnesses.iter().zip(&report.witness_basis_words).take(3) {
            println!("  witness with {} vertices, w = {image} in its basis", g.vertex_count());
        }
        match w_subgroups(&w) {
            Ok(subgroups) => {
                println!("  {} w-subgroup(s)", subgroups.len());
                for h in subgroups {
                    let basis: Vec<String> = h.graph.basis().iter().map(|b| b.to_string()).collect();
                    println!("    basis {}", basis.join(", "));
                }
            }
            Err(e) => println!("  no w-subgroup: {e}"),
        }
    }
    Ok(())
}
