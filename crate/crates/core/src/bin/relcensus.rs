use std::fs::OpenOptions;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use relcensus::census::{
    checkpoint_exists, emit_histogram, histogram_csv, run_census, verify_tables, CensusConfig, Mode, OutputFormat,
    ProverConfig, RecordWriter, ShardSpec, Strategy,
};
use relcensus::enumeration::{enumerate_orbit_reps, explore_component, slpci_minimal_rep, Exploration, PciClassSpec};
use relcensus::hyperbolicity::{cascade, run_all_checks};
use relcensus::stallings::imprimitivity_rank;
use relcensus::whitehead::{is_whitehead_minimal, whitehead_minimize};
use relcensus::{Error, Rank, Word};

#[derive(Parser)]
#[command(name = "relcensus", version, about = "Orbit census of cyclic subgroups of free groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[arg(long, global = true, default_value_t = 2)]
    rank: usize,
    #[arg(long, global = true, default_value_t = 8)]
    length: usize,
    #[arg(long, global = true, default_value_t = 1)]
    shards: usize,
    #[arg(long, global = true, default_value_t = 0)]
    shard_index: usize,
    /// Letters of prefix used to assign candidates to shards.
    #[arg(long, global = true, default_value_t = 3)]
    prefix_depth: usize,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Tsv)]
    format: FormatArg,
    #[arg(long, global = true, value_enum, default_value_t = StrategyArg::Canonical)]
    strategy: StrategyArg,
    /// Command for inconclusive words; `{file}` is the presentation path.
    #[arg(long, global = true)]
    prover_cmd: Option<String>,
    /// Seconds per prover call.
    #[arg(long, global = true, default_value_t = 60.0)]
    prover_timeout: f64,
    #[arg(long, global = true, default_value_t = 0)]
    prover_retries: usize,
    /// Worker threads while a prover is configured.
    #[arg(long, global = true)]
    prover_jobs: Option<usize>,
    #[arg(long, global = true)]
    checkpoint_file: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Tsv,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum StrategyArg {
    Canonical,
    Reordered,
}

#[derive(Subcommand)]
enum Cmd {
    /// Free and cyclic reduction of a word.
    Reduce { word: String },
    /// Whitehead-minimal form and the automorphisms used.
    Minimize { word: String },
    /// Imprimitivity rank, with witness graphs.
    Irank {
        word: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run every hyperbolicity check and the cascade.
    Check { word: String },
    /// The SLPCI graph component of a word.
    Component { word: String },
    /// Orbit representatives of the given rank and length.
    Enumerate {
        /// Include orbits inside proper free factors.
        #[arg(long)]
        all_supports: bool,
    },
    /// Representatives with imprimitivity rank and verdict.
    Census {
        #[arg(long)]
        counts_only: bool,
    },
    /// Recompute count tables and compare.
    VerifyTables { files: Vec<PathBuf> },
    /// Component sizes of the SLPCI graph.
    Histogram,
}

fn output(cli: &Cli, append: bool) -> Result<Box<dyn Write>, Error> {
    Ok(match &cli.output {
        Some(p) => {
            let f = OpenOptions::new().create(true).write(true).append(append).truncate(!append).open(p)?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn prover(cli: &Cli) -> Result<Option<ProverConfig>, Error> {
    cli.prover_cmd
        .as_ref()
        .map(|c| {
            if cli.prover_timeout.is_nan() || cli.prover_timeout <= 0.0 {
                return Err(Error::InvalidInput("prover timeout must be positive".into()));
            }
            ProverConfig::new(c.clone(), Duration::from_secs_f64(cli.prover_timeout), cli.prover_retries)
        })
        .transpose()
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let rank = Rank::new(cli.rank)?;
    match &cli.command {
        Cmd::Reduce { word } => {
            let w = Word::parse(word)?;
            let c = w.cyclic_reduce();
            let mut out = output(cli, false)?;
            writeln!(out, "reduced\t{w}")?;
            writeln!(out, "core\t{}", c.core)?;
            writeln!(out, "conjugator\t{}", c.conjugator)?;
            writeln!(out, "cyclic\t{}", c.cyclic())?;
            out.flush()?;
        }
        Cmd::Minimize { word } => {
            let w = Word::parse(word)?;
            let (min, chain) = whitehead_minimize(&w);
            let mut out = output(cli, false)?;
            writeln!(out, "minimal\t{min}")?;
            writeln!(out, "length\t{}", min.len())?;
            writeln!(out, "chain\t{chain}")?;
            out.flush()?;
        }
        Cmd::Irank { word, cap } => {
            let w = Word::parse(word)?;
            let report = imprimitivity_rank(&w, *cap);
            let mut out = output(cli, false)?;
            writeln!(out, "irank\t{}", report.value)?;
            for (g, image) in report.witnesses.iter().zip(&report.witness_basis_words) {
                writeln!(out, "# witness of rank {}, w = {image}", g.graph_rank())?;
                write!(out, "{}", g.to_text())?;
            }
            out.flush()?;
        }
        Cmd::Check { word } => {
            let w = Word::parse(word)?.to_cyclic();
            let mut out = output(cli, false)?;
            writeln!(out, "word\t{w}")?;
            let names = ["pinched", "ivanov_schupp", "small_cancellation", "blufstein_minian"];
            for (name, v) in names.iter().zip(run_all_checks(&w)?) {
                writeln!(out, "{name}\t{v}")?;
            }
            if is_whitehead_minimal(&w) && w.len() > 1 {
                writeln!(out, "cascade\t{}", cascade(&w, prover(cli)?.as_ref())?)?;
            } else {
                writeln!(out, "cascade\tnot applicable: word is not Whitehead minimal and imprimitive")?;
            }
            out.flush()?;
        }
        Cmd::Component { word } => {
            let w = Word::parse(word)?.to_cyclic();
            if !is_whitehead_minimal(&w) {
                return Err(Error::Precondition(format!("{w} is not Whitehead minimal")));
            }
            let start = slpci_minimal_rep(&w, PciClassSpec::PCI_PM);
            let mut out = output(cli, false)?;
            match explore_component(&start) {
                Exploration::Minimum(c) => {
                    writeln!(out, "# global minimum {}, component size {}", c.minimum, c.len())?;
                    for m in &c.members {
                        writeln!(out, "{m}")?;
                    }
                }
                Exploration::EarlyExit { predecessor } => {
                    writeln!(out, "# {start} is not minimal: reached {predecessor}")?;
                    let c = relcensus::enumeration::component_of(&start);
                    writeln!(out, "# global minimum {}, component size {}", c.minimum, c.len())?;
                    for m in &c.members {
                        writeln!(out, "{m}")?;
                    }
                }
            }
            out.flush()?;
        }
        Cmd::Enumerate { all_supports } => {
            let mut out = output(cli, false)?;
            for w in enumerate_orbit_reps(rank, cli.length, !all_supports) {
                writeln!(out, "{w}")?;
            }
            out.flush()?;
        }
        Cmd::Census { counts_only } => {
            let prover = prover(cli)?;
            if prover.is_some() {
                if let Some(jobs) = cli.prover_jobs {
                    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global().ok();
                }
            }
            let mut cfg = CensusConfig::new(rank, cli.length);
            cfg.shard = ShardSpec::new(cli.shards, cli.shard_index, cli.prefix_depth)?;
            cfg.mode = if *counts_only { Mode::CountsOnly } else { Mode::Full };
            cfg.strategy = match cli.strategy {
                StrategyArg::Canonical => Strategy::Canonical,
                StrategyArg::Reordered => Strategy::Reordered,
            };
            cfg.prover = prover;
            cfg.checkpoint = cli.checkpoint_file.clone();
            let resuming = cli.checkpoint_file.as_deref().is_some_and(checkpoint_exists);
            let format = match cli.format {
                FormatArg::Tsv => OutputFormat::Tsv,
                FormatArg::Csv => OutputFormat::Csv,
            };
            let mut writer = RecordWriter::new(output(cli, resuming && cli.output.is_some())?, format);
            if !resuming && !counts_only {
                writer.write_header()?;
            }
            let summary = run_census(&cfg, |r| {
                writer.write(r)?;
                Ok(())
            })?;
            writer.flush()?;
            eprintln!("records\t{}", summary.records);
            for (k, n) in &summary.by_irank {
                eprintln!("irank {k}\t{n}");
            }
            for (k, n) in &summary.by_irank_verdict {
                eprintln!("irank/verdict {k}\t{n}");
            }
            for (k, n) in &summary.by_check {
                eprintln!("decided_by {k}\t{n}");
            }
            if !summary.inconclusive.is_empty() {
                eprintln!("inconclusive\t{}", summary.inconclusive.join(" "));
            }
        }
        Cmd::VerifyTables { files } => {
            if files.is_empty() {
                return Err(Error::InvalidInput("no table files given".into()));
            }
            let mut ok = true;
            for f in files {
                let report = verify_tables(f)?;
                match report.first_mismatch() {
                    None => println!("PASS {} ({} cells)", f.display(), report.cells.len()),
                    Some(c) => {
                        ok = false;
                        let sample = c.sample.as_ref().map_or(String::new(), |w| format!(", e.g. {w}"));
                        println!(
                            "FAIL {} L={} column {}: expected {}, found {}{sample}",
                            f.display(),
                            c.length,
                            c.column,
                            c.expected,
                            c.actual
                        );
                    }
                }
            }
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Histogram => {
            let rows = emit_histogram(rank, cli.length);
            let mut out = output(cli, false)?;
            out.write_all(histogram_csv(&rows)?.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidInput(_) | Error::Parse { .. } | Error::Precondition(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
