mod common;

use common::rank;
use relcensus::census::{
    checkpoint_is_complete, run_census, CensusConfig, CensusRecord, Mode, OutputFormat, ProverConfig, RecordWriter,
    ShardSpec, Strategy,
};
use relcensus::hyperbolicity::{DecidedBy, Status};
use relcensus::stallings::Irank;

fn records(cfg: &CensusConfig) -> Vec<CensusRecord> {
    let mut out = Vec::new();
    let summary = run_census(cfg, |r| {
        out.push(r.clone());
        Ok(())
    })
    .unwrap();
    assert!(summary.complete);
    assert_eq!(summary.records, out.len());
    out
}

#[test]
fn rank_three_length_nine() {
    let rs = records(&CensusConfig::new(rank(3), 9));
    assert_eq!(rs.len(), 98);
    assert!(rs.iter().all(|r| r.irank == Irank::Finite(3) && r.verdict == Status::Hyperbolic));
    assert!(rs.windows(2).all(|p| p[0].representative < p[1].representative));
}

#[test]
fn shards_partition_the_records() {
    let whole = records(&CensusConfig::new(rank(2), 10));
    assert_eq!(whole.len(), 217);
    for total in [1, 3, 7] {
        let mut merged = Vec::new();
        for i in 0..total {
            let mut cfg = CensusConfig::new(rank(2), 10);
            cfg.shard = ShardSpec::new(total, i, 3).unwrap();
            merged.extend(records(&cfg));
        }
        merged.sort_by(|a, b| a.representative.cmp(&b.representative));
        assert_eq!(merged, whole, "{total} shards");
    }
}

#[test]
fn strategies_agree() {
    for (r, l) in [(2, 10), (3, 9)] {
        let canonical = records(&CensusConfig::new(rank(r), l));
        let mut cfg = CensusConfig::new(rank(r), l);
        cfg.strategy = Strategy::Reordered;
        assert_eq!(records(&cfg), canonical);
    }
}

#[test]
fn resume_after_interruption() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("run.json");
    let whole = records(&CensusConfig::new(rank(3), 10));

    let mut cfg = CensusConfig::new(rank(3), 10);
    cfg.checkpoint = Some(ckpt.clone());
    cfg.blocks_per_step = 16;
    cfg.stop_after_steps = Some(3);
    let mut first = Vec::new();
    let partial = run_census(&cfg, |r| {
        first.push(r.clone());
        Ok(())
    })
    .unwrap();
    assert!(!partial.complete);
    assert!(!checkpoint_is_complete(&ckpt).unwrap());

    cfg.stop_after_steps = None;
    let mut rest = Vec::new();
    let summary = run_census(&cfg, |r| {
        rest.push(r.clone());
        Ok(())
    })
    .unwrap();
    assert!(summary.complete && checkpoint_is_complete(&ckpt).unwrap());
    assert_eq!(summary.records, whole.len());
    first.extend(rest);
    assert_eq!(first, whole);

    let mut other = CensusConfig::new(rank(3), 11);
    other.checkpoint = Some(ckpt);
    assert!(run_census(&other, |_| Ok(())).is_err());
}

#[test]
fn counts_only_matches_full() {
    let full = records(&CensusConfig::new(rank(3), 10));
    let mut cfg = CensusConfig::new(rank(3), 10);
    cfg.mode = Mode::CountsOnly;
    let mut calls = 0;
    let summary = run_census(&cfg, |_| {
        calls += 1;
        Ok(())
    })
    .unwrap();
    assert_eq!(calls, 0);
    assert_eq!(summary.records, full.len());
    assert_eq!(summary.irank_count(Irank::Finite(2)), full.iter().filter(|r| r.irank == Irank::Finite(2)).count());
}

#[test]
fn tsv_round_trip() {
    let rs = records(&CensusConfig::new(rank(2), 8));
    let mut buf = Vec::new();
    {
        let mut w = RecordWriter::new(&mut buf, OutputFormat::Tsv);
        w.write_header().unwrap();
        for r in &rs {
            w.write(r).unwrap();
        }
        w.flush().unwrap();
    }
    let text = String::from_utf8(buf).unwrap();
    let parsed: Vec<CensusRecord> =
        text.lines().filter(|l| !l.starts_with('#')).map(|l| CensusRecord::parse_tsv(l).unwrap()).collect();
    assert_eq!(parsed, rs);
}

#[cfg(unix)]
#[test]
fn prover_settles_the_leftovers() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("prover.sh");
    std::fs::write(&script, "#!/bin/sh\necho HYPERBOLIC\n").unwrap();
    let native = records(&CensusConfig::new(rank(3), 12));
    let leftovers = native.iter().filter(|r| r.verdict == Status::Inconclusive).count();
    assert!(leftovers > 0);

    let mut cfg = CensusConfig::new(rank(3), 12);
    cfg.prover =
        Some(ProverConfig::new(format!("sh {} {{file}}", script.display()), std::time::Duration::from_secs(10), 0).unwrap());
    let proved = records(&cfg);
    assert_eq!(proved.len(), native.len());
    assert!(proved.iter().all(|r| r.verdict != Status::Inconclusive));
    let external = proved.iter().filter(|r| r.decided_by == DecidedBy::External).count();
    assert_eq!(external, leftovers);
}
