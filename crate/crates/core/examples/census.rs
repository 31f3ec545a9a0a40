//! A sharded, checkpointed census run, merged and summarized.
//!
//! Usage: cargo run --release --example census -- [rank] [length] [shards]

use std::io::stdout;

use relcensus::census::{run_census, CensusConfig, OutputFormat, RecordWriter, ShardSpec};
use relcensus::Rank;

fn main() -> relcensus::Result<()> {
    let mut args = std::env::args().skip(1);
    let rank: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let length: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(9);
    let shards: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);

    let dir = tempfile::tempdir()?;
    let mut all = Vec::new();
    for i in 0..shards {
        let mut cfg = CensusConfig::new(Rank::new(rank)?, length);
        cfg.shard = ShardSpec::new(shards, i, 3)?;
        cfg.checkpoint = Some(dir.path().join(format!("shard{i}.json")));
        let summary = run_census(&cfg, |r| {
            all.push(r.clone());
            Ok(())
        })?;
        eprintln!("shard {i}: {} records, by irank {:?}", summary.records, summary.by_irank);
    }
    all.sort_by(|a, b| a.representative.cmp(&b.representative));
    let mut out = RecordWriter::new(stdout().lock(), OutputFormat::Tsv);
    out.write_header()?;
    for r in &all {
        out.write(r)?;
    }
    out.flush()
}
