//! Hand the words the native checks leave open to an external program.
//!
//! The stand-in prover here is a shell script that prints the rank line
//! it was given and answers HYPERBOLIC; substitute a real one via
//! `relcensus census --prover-cmd`.

use std::time::Duration;

use relcensus::census::{run_census, CensusConfig, ProverConfig};
use relcensus::hyperbolicity::Status;
use relcensus::Rank;

fn main() -> relcensus::Result<()> {
    let dir = tempfile::tempdir()?;
    let script = dir.path().join("prover.sh");
    std::fs::write(&script, "#!/bin/sh\nhead -n 1 \"$1\" >&2\necho HYPERBOLIC\n")?;

    let mut cfg = CensusConfig::new(Rank::new(3)?, 12);
    let native = run_census(&cfg, |_| Ok(()))?;
    println!("native checks leave {} words open: {}", native.inconclusive.len(), native.inconclusive.join(" "));

    cfg.prover = Some(ProverConfig::new(format!("sh {} {{file}}", script.display()), Duration::from_secs(10), 1)?);
    let mut external = 0;
    let summary = run_census(&cfg, |r| {
        if r.verdict != Status::Inconclusive && r.decided_by.as_str() == "external" {
            external += 1;
        }
        Ok(())
    })?;
    println!("with the prover: {external} decided externally, {} still open", summary.inconclusive.len());
    Ok(())
}
