//! Count Aut(F_r)-orbits of cyclic subgroups by minimal generator length.
//!
//! Usage: cargo run --release --example orbit_counts -- [max_rank] [max_length]

use std::time::Instant;

use relcensus::enumeration::enumerate_orbit_reps;
use relcensus::Rank;

fn main() {
    let mut args = std::env::args().skip(1);
    let max_rank: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let max_length: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);
    for r in 1..=max_rank {
        let rank = Rank::new(r).expect("rank in range");
        for length in 1..=max_length {
            let start = Instant::now();
            let n = enumerate_orbit_reps(rank, length, true).len();
            println!("r={r} L={length}: {n} ({:.2?})", start.elapsed());
        }
    }
}
