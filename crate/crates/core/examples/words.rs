//! Free reduction, cyclic reduction and roots.
//!
//! Usage: cargo run --example words -- [word...]

use relcensus::Word;

fn main() -> relcensus::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() { vec!["abBAbaab".into(), "bAaabaabA".into(), "abab".into()] } else { args };
    for s in inputs {
        let w = Word::parse(&s)?;
        let c = w.cyclic_reduce();
        let p = w.power_decompose()?;
        println!("{s}");
        println!("  reduced     {w}");
        println!("  core        {} (conjugated by {})", c.core, c.conjugator);
        println!("  cyclic word {}", c.cyclic());
        println!("  root        {} ^ {}", p.root, p.exponent);
    }
    Ok(())
}
