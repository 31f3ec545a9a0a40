//! The census pipeline: orbit representatives of one rank and length,
//! each with its imprimitivity rank and hyperbolicity verdict.

mod tables;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::{explore_component, CandidateBlocks, Exploration};
use crate::error::{invalid, Error, Result};
use crate::hyperbolicity::{classify, DecidedBy, Status};
use crate::stallings::{irank_value, Irank};
use crate::word::{CyclicWord, Rank};

pub use crate::enumeration::ShardSpec;
pub use crate::hyperbolicity::ProverConfig;
pub use tables::{
    emit_histogram, histogram_csv, largest_component_formula, verify_tables, CellCheck, HistogramRow, TableKind, TableReport,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub rank: usize,
    pub length: usize,
    pub representative: CyclicWord,
    pub irank: Irank,
    pub component_size: Option<usize>,
    pub verdict: Status,
    pub decided_by: DecidedBy,
}

pub const RECORD_FIELDS: [&str; 7] =
    ["rank", "length", "representative", "irank", "component_size", "verdict", "decided_by"];

impl CensusRecord {
    fn fields(&self) -> [String; 7] {
        [
            self.rank.to_string(),
            self.length.to_string(),
            self.representative.to_string(),
            self.irank.to_string(),
            self.component_size.map_or("-".to_string(), |s| s.to_string()),
            self.verdict.to_string(),
            self.decided_by.to_string(),
        ]
    }

    /// Parse one tab-separated line.
    pub fn parse_tsv(line: &str) -> Result<CensusRecord> {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != RECORD_FIELDS.len() {
            return Err(invalid(format!("expected {} fields in {line:?}", RECORD_FIELDS.len())));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| invalid(format!("bad integer {s:?}")));
        Ok(CensusRecord {
            rank: int(f[0])?,
            length: int(f[1])?,
            representative: CyclicWord::parse(f[2])?,
            irank: f[3].parse()?,
            component_size: if f[4] == "-" { None } else { Some(int(f[4])?) },
            verdict: f[5].parse()?,
            decided_by: f[6].parse()?,
        })
    }
}

impl fmt::Display for CensusRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fields().join("\t"))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Tsv,
    Csv,
}

/// Writes records with a `#`-prefixed header line.
pub struct RecordWriter<W: Write> {
    out: W,
    format: OutputFormat,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, format: OutputFormat) -> RecordWriter<W> {
        RecordWriter { out, format }
    }

    pub fn write_header(&mut self) -> Result<()> {
        let sep = if self.format == OutputFormat::Tsv { "\t" } else { "," };
        writeln!(self.out, "#{}", RECORD_FIELDS.join(sep))?;
        Ok(())
    }

    pub fn write(&mut self, r: &CensusRecord) -> Result<()> {
        match self.format {
            OutputFormat::Tsv => writeln!(self.out, "{r}")?,
            OutputFormat::Csv => {
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(vec![]);
                w.write_record(r.fields())?;
                let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                self.out.write_all(&bytes)?;
            }
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    CountsOnly,
    Full,
}

/// Order of the per-candidate work. Both give the same records.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Orbit minimality first, then imprimitivity rank and hyperbolicity.
    Canonical,
    /// Hyperbolicity first, then whether the imprimitivity rank exceeds 2,
    /// and orbit minimality last.
    Reordered,
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub rank: Rank,
    pub length: usize,
    pub shard: ShardSpec,
    pub mode: Mode,
    pub strategy: Strategy,
    pub prover: Option<ProverConfig>,
    pub checkpoint: Option<PathBuf>,
    /// Number of candidate blocks processed between checkpoints.
    pub blocks_per_step: usize,
    /// Stop (with a checkpoint) after this many steps; for testing resume.
    pub stop_after_steps: Option<usize>,
}

impl CensusConfig {
    pub fn new(rank: Rank, length: usize) -> CensusConfig {
        CensusConfig {
            rank,
            length,
            shard: ShardSpec::single(),
            mode: Mode::Full,
            strategy: Strategy::Canonical,
            prover: None,
            checkpoint: None,
            blocks_per_step: 256,
            stop_after_steps: None,
        }
    }
}

/// Tallies over the records produced so far.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub records: usize,
    /// Keyed by the printed imprimitivity rank.
    pub by_irank: BTreeMap<String, usize>,
    /// Keyed by `irank/verdict`.
    pub by_irank_verdict: BTreeMap<String, usize>,
    pub by_check: BTreeMap<String, usize>,
    /// Representatives left inconclusive.
    pub inconclusive: Vec<String>,
    /// False when the run stopped early.
    pub complete: bool,
}

impl CensusSummary {
    fn add(&mut self, r: &CensusRecord) {
        self.records += 1;
        *self.by_irank.entry(r.irank.to_string()).or_insert(0) += 1;
        *self.by_irank_verdict.entry(format!("{}/{}", r.irank, r.verdict)).or_insert(0) += 1;
        *self.by_check.entry(r.decided_by.to_string()).or_insert(0) += 1;
        if r.verdict == Status::Inconclusive {
            self.inconclusive.push(r.representative.to_string());
        }
    }

    pub fn irank_count(&self, irank: Irank) -> usize {
        self.by_irank.get(&irank.to_string()).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Checkpoint {
    rank: usize,
    length: usize,
    shard: ShardSpec,
    mode: Mode,
    strategy: Strategy,
    blocks_per_step: usize,
    next_block: usize,
    summary: CensusSummary,
}

impl Checkpoint {
    fn load(path: &Path) -> Result<Option<Checkpoint>> {
        match std::fs::read_to_string(path) {
            Ok(s) => Ok(Some(serde_json::from_str(&s)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Record for a candidate known to be its orbit's representative.
fn record_for(cfg: &CensusConfig, w: CyclicWord, component_size: Option<usize>) -> Result<CensusRecord> {
    let irank = irank_value(&w.to_word(), Some(cfg.rank.get()));
    let verdict = classify(&w, cfg.prover.as_ref())?;
    Ok(CensusRecord {
        rank: cfg.rank.get(),
        length: cfg.length,
        representative: w,
        irank,
        component_size,
        verdict: verdict.status,
        decided_by: verdict.decided_by,
    })
}

fn process_block(cfg: &CensusConfig, blocks: &CandidateBlocks, i: usize) -> Result<Vec<CensusRecord>> {
    let mut out = Vec::new();
    for w in blocks.candidates(i) {
        match cfg.strategy {
            Strategy::Canonical => {
                if let Exploration::Minimum(comp) = explore_component(&w) {
                    out.push(record_for(cfg, w, Some(comp.len()))?);
                }
            }
            Strategy::Reordered => {
                let verdict = classify(&w, cfg.prover.as_ref())?;
                let above_two = irank_value(&w.to_word(), Some(2)) == Irank::GreaterThan(2);
                let irank = if above_two {
                    irank_value(&w.to_word(), Some(cfg.rank.get()))
                } else {
                    irank_value(&w.to_word(), Some(2))
                };
                if let Exploration::Minimum(comp) = explore_component(&w) {
                    out.push(CensusRecord {
                        rank: cfg.rank.get(),
                        length: cfg.length,
                        representative: w,
                        irank,
                        component_size: Some(comp.len()),
                        verdict: verdict.status,
                        decided_by: verdict.decided_by,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Run (or resume) a census, passing each record to `sink` in shortlex
/// order. In counts-only mode `sink` is never called.
pub fn run_census(cfg: &CensusConfig, mut sink: impl FnMut(&CensusRecord) -> Result<()>) -> Result<CensusSummary> {
    if cfg.blocks_per_step == 0 {
        return Err(invalid("blocks per step must be positive"));
    }
    let blocks = CandidateBlocks::new(cfg.rank, cfg.length, Some(&cfg.shard));
    let mut state = Checkpoint {
        rank: cfg.rank.get(),
        length: cfg.length,
        shard: cfg.shard,
        mode: cfg.mode,
        strategy: cfg.strategy,
        blocks_per_step: cfg.blocks_per_step,
        next_block: 0,
        summary: CensusSummary::default(),
    };
    if let Some(path) = &cfg.checkpoint {
        if let Some(saved) = Checkpoint::load(path)? {
            let same_run = Checkpoint { next_block: 0, summary: CensusSummary::default(), ..saved.clone() } == state;
            if !same_run {
                return Err(invalid(format!("checkpoint {} belongs to a different run", path.display())));
            }
            log::info!("resuming at block {} of {}", saved.next_block, blocks.len());
            state = saved;
        }
    }
    let mut steps = 0;
    while state.next_block < blocks.len() {
        if cfg.stop_after_steps == Some(steps) {
            state.summary.complete = false;
            return Ok(state.summary);
        }
        let end = (state.next_block + cfg.blocks_per_step).min(blocks.len());
        let results: Vec<Result<Vec<CensusRecord>>> =
            (state.next_block..end).into_par_iter().map(|i| process_block(cfg, &blocks, i)).collect();
        for block in results {
            for r in block? {
                state.summary.add(&r);
                if cfg.mode == Mode::Full {
                    sink(&r)?;
                }
            }
        }
        state.next_block = end;
        steps += 1;
        if let Some(path) = &cfg.checkpoint {
            state.store(path)?;
        }
        log::debug!("census {}/{} blocks, {} records", end, blocks.len(), state.summary.records);
    }
    state.summary.complete = true;
    if let Some(path) = &cfg.checkpoint {
        state.store(path)?;
    }
    Ok(state.summary)
}

/// Whether a checkpoint file records a finished run.
pub fn checkpoint_is_complete(path: &Path) -> Result<bool> {
    Ok(Checkpoint::load(path)?.is_some_and(|c| c.summary.complete))
}

/// Whether a checkpoint file exists for a run in progress.
pub fn checkpoint_exists(path: &Path) -> bool {
    path.exists()
}
