//! Benchmark harness: solve every instance file in a directory and tabulate
//! lower bound, cost before and after local search, and gap.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::cost::format_decimal;
use crate::instance::DistanceMatrix;
use crate::localsearch::solve;

/// Published figures for one challenge instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Reference {
    pub name: &'static str,
    pub n: usize,
    pub ilb: i64,
    pub previous: i64,
    pub before: i64,
    pub after: i64,
}

const fn r(name: &'static str, n: usize, ilb: i64, previous: i64, before: i64, after: i64) -> Reference {
    Reference {
        name,
        n,
        ilb,
        previous,
        before,
        after,
    }
}

/// The 17 challenge instances with `n ≡ 0 (mod 4)` and `n >= 12`.
/// The data files themselves are not distributed with this crate.
pub const REFERENCES: [Reference; 17] = [
    r("Galaxy40", 40, 298484, 307469, 306230, 305714),
    r("Galaxy36", 36, 205280, 212821, 211382, 210845),
    r("Galaxy32", 32, 139922, 145445, 144173, 144050),
    r("Galaxy28", 28, 89242, 93235, 92408, 92291),
    r("Galaxy24", 24, 53282, 55883, 55486, 55418),
    r("Galaxy20", 20, 30508, 32530, 32082, 32067),
    r("Galaxy16", 16, 17562, 19040, 18614, 18599),
    r("Galaxy12", 12, 8374, 9490, 9108, 9045),
    r("NFL32", 32, 1162798, 1211239, 1199619, 1198091),
    r("NFL28", 28, 771442, 810310, 798208, 798168),
    r("NFL24", 24, 573618, 611441, 598437, 596872),
    r("NFL20", 20, 423958, 456563, 444426, 442950),
    r("NFL16", 16, 294866, 321357, 310416, 309580),
    r("NL16", 16, 334940, 359720, 351647, 350727),
    r("NL12", 12, 132720, 144744, 140686, 140686),
    r("Super12", 12, 551580, 612583, 590773, 587387),
    r("Brazil24", 24, 620574, 655235, 643783, 642530),
];

/// Case-insensitive lookup by instance name.
pub fn reference(name: &str) -> Option<&'static Reference> {
    REFERENCES.iter().find(|r| r.name.eq_ignore_ascii_case(name))
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub ilb: i64,
    pub before: i64,
    pub after: i64,
    #[serde(skip)]
    pub runtime: Duration,
    #[serde(skip)]
    pub reference: Option<&'static Reference>,
}

impl BenchRow {
    pub fn gap(&self) -> Option<Ratio<i64>> {
        (self.ilb > 0).then(|| Ratio::new(self.after - self.ilb, self.ilb))
    }

    pub fn gap_percent(&self) -> String {
        self.gap()
            .map(|g| format_decimal(g * 100, 2))
            .unwrap_or_else(|| "-".into())
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Files that could not be solved, with the reason.
    pub errors: Vec<(PathBuf, String)>,
}

/// Regular, non-hidden files in `dir`, sorted by name.
pub fn instance_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        let hidden = path
            .file_name()
            .and_then(|f| f.to_str())
            .is_some_and(|f| f.starts_with('.'));
        if path.is_file() && !hidden {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Solves one file with and without local search.
pub fn bench_file(path: &Path) -> Result<BenchRow, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let dm = DistanceMatrix::parse(&text).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let outcome = solve(&dm, true).map_err(|e| e.to_string())?;
    let runtime = start.elapsed();
    let instance = instance_name(path);
    Ok(BenchRow {
        reference: reference(&instance),
        instance,
        n: dm.n(),
        ilb: outcome.report.lb,
        before: outcome.before,
        after: outcome.report.total,
        runtime,
    })
}

/// Solves every file in `dir`, in parallel. Rows keep file-name order.
pub fn run_bench(dir: &Path) -> std::io::Result<BenchReport> {
    let files = instance_files(dir)?;
    let results: Vec<(PathBuf, Result<BenchRow, String>)> =
        files.into_par_iter().map(|p| { let r = bench_file(&p); (p, r) }).collect();
    let mut report = BenchReport::default();
    for (path, result) in results {
        match result {
            Ok(row) => report.rows.push(row),
            Err(e) => report.errors.push((path, e)),
        }
    }
    Ok(report)
}

pub const CSV_HEADER: &str = "instance,n,ilb,before_swapping,after_swapping,gap_pct,runtime_ms";

fn runtime_cell(row: &BenchRow, timing: bool) -> String {
    if timing {
        format!("{:.1}", row.runtime.as_secs_f64() * 1000.0)
    } else {
        "-".into()
    }
}

pub fn to_csv(rows: &[BenchRow], timing: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.instance,
            row.n,
            row.ilb,
            row.before,
            row.after,
            row.gap_percent(),
            runtime_cell(row, timing)
        );
    }
    out
}

/// Aligned table; instances with published figures get a second line
/// comparing against them.
pub fn to_human(rows: &[BenchRow], timing: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:>4} {:>10} {:>10} {:>10} {:>7} {:>11}",
        "instance", "n", "ILB", "before", "after", "gap%", "runtime_ms"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:<12} {:>4} {:>10} {:>10} {:>10} {:>7} {:>11}",
            row.instance,
            row.n,
            row.ilb,
            row.before,
            row.after,
            row.gap_percent(),
            runtime_cell(row, timing)
        );
        if let Some(r) = row.reference {
            let ilb = if r.ilb == row.ilb { "ok" } else { "MISMATCH" };
            let _ = writeln!(
                out,
                "{:<12} {:>4} {:>10} {:>10} {:>10}   ILB {ilb}, previous best {}",
                "  published", "", r.ilb, r.before, r.after, r.previous
            );
        }
    }
    out
}
