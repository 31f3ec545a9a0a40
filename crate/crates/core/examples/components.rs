//! Components of the graph on SLPCI-minimal, Whitehead-minimal words.
//!
//! Usage: cargo run --release --example components -- [rank] [length]

use relcensus::census::{emit_histogram, histogram_csv};
use relcensus::enumeration::{component_of, explore_component, Exploration};
use relcensus::{CyclicWord, Rank};

fn main() -> relcensus::Result<()> {
    let mut args = std::env::args().skip(1);
    let rank: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let length: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);

    let w = CyclicWord::parse("BBABBAAbA")?;
    match explore_component(&w) {
        Exploration::Minimum(c) => println!("{w} is the least word of its component ({})", c.len()),
        Exploration::EarlyExit { predecessor } => println!("{w} is not least: its component contains {predecessor}"),
    }
    let comp = component_of(&w);
    let members: Vec<String> = comp.members.iter().map(|m| m.to_string()).collect();
    println!("component: {}", members.join(" "));

    println!("\ncomponent sizes, rank {rank}, length {length}:");
    print!("{}", histogram_csv(&emit_histogram(Rank::new(rank)?, length))?);
    Ok(())
}
