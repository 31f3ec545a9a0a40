//! Count tables and component-size histograms.
//!
//! A table file is CSV with a header row. The first column, `L`, holds the
//! word length. Every other column is either `r` (number of orbits in rank
//! `r` not contained in a proper free factor) or `r:k` (those of them with
//! imprimitivity rank `k`). Empty cells are not checked.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use rayon::prelude::*;

use crate::enumeration::{component_size_histogram, enumerate_orbit_reps};
use crate::error::{Error, Result};
use crate::stallings::{irank_value, Irank};
use crate::word::{CyclicWord, Rank};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableKind {
    Orbits { rank: usize },
    ByIrank { rank: usize, irank: Irank },
}

impl TableKind {
    fn parse(header: &str) -> Option<TableKind> {
        match header.split_once(':') {
            None => Some(TableKind::Orbits { rank: header.trim().parse().ok()? }),
            Some((r, k)) => Some(TableKind::ByIrank { rank: r.trim().parse().ok()?, irank: k.trim().parse().ok()? }),
        }
    }

    fn rank(&self) -> usize {
        match *self {
            TableKind::Orbits { rank } | TableKind::ByIrank { rank, .. } => rank,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCheck {
    pub length: usize,
    pub column: String,
    pub expected: usize,
    pub actual: usize,
    /// A representative counted in the cell, to start investigating a mismatch.
    pub sample: Option<CyclicWord>,
}

impl CellCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableReport {
    pub cells: Vec<CellCheck>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(CellCheck::passed)
    }

    pub fn first_mismatch(&self) -> Option<&CellCheck> {
        self.cells.iter().find(|c| !c.passed())
    }
}

/// Recompute every cell of a table file and compare.
pub fn verify_tables(path: &Path) -> Result<TableReport> {
    let text = std::fs::read_to_string(path)?;
    verify_table_text(&text, &path.display().to_string())
}

pub(crate) fn verify_table_text(text: &str, name: &str) -> Result<TableReport> {
    let parse_error = |row: usize, m: String| Error::Parse { location: format!("{name}:{row}"), message: m };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.get(0) != Some("L") {
        return Err(parse_error(1, "first column must be L".into()));
    }
    let kinds: Vec<TableKind> = headers
        .iter()
        .skip(1)
        .map(|h| TableKind::parse(h).ok_or_else(|| parse_error(1, format!("bad column {h:?}"))))
        .collect::<Result<_>>()?;
    for k in &kinds {
        Rank::new(k.rank()).map_err(|_| parse_error(1, format!("rank {} out of range", k.rank())))?;
    }

    let mut wanted: Vec<(usize, usize, usize, String, usize)> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 2;
        let rec = rec?;
        let length: usize =
            rec.get(0).unwrap_or("").parse().map_err(|_| parse_error(row, "bad length".into()))?;
        for j in 0..kinds.len() {
            let cell = rec.get(j + 1).unwrap_or("");
            if cell.is_empty() {
                continue;
            }
            let expected: usize = cell.parse().map_err(|_| parse_error(row, format!("bad cell {cell:?}")))?;
            wanted.push((row, length, j, headers[j + 1].to_string(), expected));
        }
    }

    let mut keys: Vec<(usize, usize)> = wanted.iter().map(|&(_, l, j, _, _)| (kinds[j].rank(), l)).collect();
    keys.sort_unstable();
    keys.dedup();
    let reps: HashMap<(usize, usize), Vec<(CyclicWord, Irank)>> = keys
        .par_iter()
        .map(|&(r, l)| {
            let rank = Rank::new(r).expect("checked above");
            let words = enumerate_orbit_reps(rank, l, true);
            let need_irank = kinds.iter().any(|k| matches!(k, TableKind::ByIrank { rank, .. } if *rank == r));
            let tagged = words
                .into_par_iter()
                .map(|w| {
                    let k = if need_irank { irank_value(&w.to_word(), Some(r)) } else { Irank::Infinite };
                    (w, k)
                })
                .collect();
            ((r, l), tagged)
        })
        .collect();

    let cells = wanted
        .into_iter()
        .map(|(_, length, j, column, expected)| {
            let all = &reps[&(kinds[j].rank(), length)];
            let hits: Vec<&CyclicWord> = match kinds[j] {
                TableKind::Orbits { .. } => all.iter().map(|(w, _)| w).collect(),
                TableKind::ByIrank { irank, .. } => all.iter().filter(|(_, k)| *k == irank).map(|(w, _)| w).collect(),
            };
            CellCheck { length, column, expected, actual: hits.len(), sample: hits.last().map(|w| (*w).clone()) }
        })
        .collect();
    Ok(TableReport { cells })
}

/// Size of the largest rank-3 component at length `length`, as predicted
/// by the closed formula (defined for `length >= 8`).
pub fn largest_component_formula(length: usize) -> Option<usize> {
    let k = length.checked_sub(7)?;
    if k == 0 {
        return None;
    }
    Some(k * (k * k + 11 * k + 30) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistogramRow {
    pub component_size: usize,
    pub count: usize,
    /// This size equals the largest-component formula (rank 3 only).
    pub formula_largest: bool,
}

/// Number of components of each size, with the formula column.
pub fn emit_histogram(rank: Rank, length: usize) -> Vec<HistogramRow> {
    let hist: BTreeMap<usize, usize> = component_size_histogram(rank, length);
    let formula = if rank.get() == 3 { largest_component_formula(length) } else { None };
    hist.into_iter()
        .map(|(component_size, count)| HistogramRow {
            component_size,
            count,
            formula_largest: Some(component_size) == formula,
        })
        .collect()
}

/// CSV text for [`emit_histogram`].
pub fn histogram_csv(rows: &[HistogramRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["component_size", "count", "formula_largest"])?;
    for r in rows {
        w.write_record([r.component_size.to_string(), r.count.to_string(), r.formula_largest.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
