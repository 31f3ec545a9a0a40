//! Recompute a count table and compare it cell by cell.
//!
//! Usage: cargo run --release --example verify_tables -- [table.csv]

use std::path::PathBuf;

use relcensus::census::verify_tables;

fn main() -> relcensus::Result<()> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join("table2_f2.csv")
    });
    let report = verify_tables(&path)?;
    for c in &report.cells {
        let mark = if c.passed() { "ok" } else { "MISMATCH" };
        println!("L={:<3} {:<5} expected {:>8} found {:>8} {mark}", c.length, c.column, c.expected, c.actual);
    }
    println!("{}", if report.passed() { "all cells match" } else { "tables differ" });
    Ok(())
}
