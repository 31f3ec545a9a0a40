//! The native hyperbolicity checks on a few one-relator presentations.
//!
//! Usage: cargo run --example hyperbolicity -- [word...]

use relcensus::hyperbolicity::{classify, run_all_checks};
use relcensus::CyclicWord;

fn main() -> relcensus::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() {
        ["aabb", "abAB", "abbbAB", "CCCCBCABA", "Abcaabbbc", "CCCBBBAACBaa"].map(String::from).to_vec()
    } else {
        args
    };
    let names = ["pinched", "ivanov_schupp", "small_cancellation", "blufstein_minian"];
    for s in inputs {
        let w = CyclicWord::parse(&s)?;
        println!("{w}");
        for (name, v) in names.iter().zip(run_all_checks(&w)?) {
            println!("  {name:<19}{v}");
        }
        match classify(&w, None) {
            Ok(v) => println!("  verdict            {v}"),
            Err(e) => println!("  verdict            not applicable: {e}"),
        }
    }
    Ok(())
}
