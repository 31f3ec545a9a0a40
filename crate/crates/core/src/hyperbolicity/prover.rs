//! Adapter for an external hyperbolicity prover.
//!
//! The presentation is written to a temporary file as two lines,
//! `rank r` and the relator, and the configured command is run with the
//! file path substituted for `{file}`. The first token of its standard
//! output is the answer.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::{DecidedBy, Status, Verdict};
use crate::error::{invalid, Error, Result};
use crate::word::CyclicWord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverConfig {
    /// Command line; `{file}` is replaced by the presentation path.
    pub command: String,
    pub timeout: Duration,
    /// Extra attempts after a failed or timed-out run.
    pub retries: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ProverOutcome {
    Hyperbolic,
    NonHyperbolic,
    Inconclusive,
    Timeout,
}

impl ProverConfig {
    pub fn new(command: impl Into<String>, timeout: Duration, retries: usize) -> Result<ProverConfig> {
        let command = command.into();
        if timeout.is_zero() {
            return Err(invalid("prover timeout must be positive"));
        }
        if command.split_whitespace().next().is_none() {
            return Err(invalid("empty prover command"));
        }
        Ok(ProverConfig { command, timeout, retries })
    }

    /// Run the prover, retrying on failure or timeout.
    pub fn run(&self, w: &CyclicWord) -> Result<ProverOutcome> {
        let mut last = Err(Error::Prover("not run".into()));
        for attempt in 0..=self.retries {
            last = self.run_once(w);
            match &last {
                Ok(ProverOutcome::Timeout) | Err(_) => {
                    log::debug!("prover attempt {} on {w}: {:?}", attempt + 1, last);
                }
                Ok(_) => return last,
            }
        }
        last
    }

    fn run_once(&self, w: &CyclicWord) -> Result<ProverOutcome> {
        let dir = tempfile::tempdir()?;
        let path = dir.path().join("presentation.txt");
        {
            let mut f = std::fs::File::create(&path)?;
            writeln!(f, "rank {}", w.max_generator().max(1))?;
            writeln!(f, "{w}")?;
        }
        let path_str = path.to_string_lossy();
        let mut parts = self.command.split_whitespace().map(|t| t.replace("{file}", &path_str));
        let program = parts.next().ok_or_else(|| invalid("empty prover command"))?;
        let mut child = Command::new(program)
            .args(parts)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()?;
        let start = Instant::now();
        loop {
            if child.try_wait()?.is_some() {
                break;
            }
            if start.elapsed() >= self.timeout {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(ProverOutcome::Timeout);
            }
            std::thread::sleep(Duration::from_millis(5));
        }
        let mut out = String::new();
        if let Some(mut stdout) = child.stdout.take() {
            stdout.read_to_string(&mut out)?;
        }
        match out.split_whitespace().next() {
            Some("HYPERBOLIC") => Ok(ProverOutcome::Hyperbolic),
            Some("NONHYPERBOLIC") => Ok(ProverOutcome::NonHyperbolic),
            Some("INCONCLUSIVE") => Ok(ProverOutcome::Inconclusive),
            Some("TIMEOUT") => Ok(ProverOutcome::Timeout),
            other => Err(Error::Prover(format!("unrecognized prover output {other:?}"))),
        }
    }

    /// Map the outcome to a verdict. Failures never propagate; external
    /// claims of nonhyperbolicity are not trusted.
    pub fn decide(&self, w: &CyclicWord) -> Verdict {
        match self.run(w) {
            Ok(ProverOutcome::Hyperbolic) => Verdict {
                status: Status::Hyperbolic,
                decided_by: DecidedBy::External,
                certificate: self.command.clone(),
            },
            Ok(ProverOutcome::NonHyperbolic) => {
                Verdict::inconclusive("external prover reported nonhyperbolic; not accepted as a certificate")
            }
            Ok(ProverOutcome::Inconclusive) => Verdict::inconclusive("external prover inconclusive"),
            Ok(ProverOutcome::Timeout) => Verdict::inconclusive("external prover timed out"),
            Err(e) => {
                log::warn!("prover failed on {w}: {e}");
                Verdict::inconclusive(format!("external prover failed: {e}"))
            }
        }
    }
}
