//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criteria 7 to 9 need the 17 benchmark instance files, which are not
//! distributed. Point `TTP2_BENCH_DIR` at a directory holding them (file
//! stems must match the instance names, case-insensitively). Without it
//! those criteria print NOT RUN; set `TTP2_REQUIRE_BENCH=1` to turn that
//! into a failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ttp2::bench::{bench_file, instance_files, instance_name, BenchRow, REFERENCES};
use ttp2::cost::{independent_lower_bound, itinerary_cost, ratio_bound, within_ratio_bound};
use ttp2::{
    brute_force_matching, build_schedule_with_layout, build_timetable, improve, min_perfect_matching,
    validate_schedule, DistanceMatrix, Schedule, SuperLayout,
};

const SIZES: [usize; 9] = [8, 12, 16, 20, 24, 28, 32, 36, 40];
const SEEDS_PER_SIZE: u64 = 25;
const FEASIBILITY_BUDGET: Duration = Duration::from_secs(10);
const MATCHING_TABLES: usize = 200;
const MATCHING_SEED: u64 = 0x7770_2000;
/// Criterion 8 tolerance: 1.0%, as the fraction 1/100.
const TOLERANCE_DENOM: i64 = 100;
const BENCH_BUDGET: Duration = Duration::from_secs(60);

const TABLE1: &str = include_str!("fixtures/table1.txt");

enum Verdict {
    Pass(String),
    Fail(String),
    NotRun(String),
}

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

/// Construction and local-search data for one random instance.
struct Solved {
    n: usize,
    seed: u64,
    dm: DistanceMatrix,
    /// Schedules in the order they were produced: construction, every
    /// accepted local-search move, final.
    schedules: Vec<Schedule>,
    final_total: i64,
    final_lb: i64,
    identities: Vec<(i64, i64, i64)>,
}

fn solve_random(n: usize, seed: u64) -> Solved {
    let dm = DistanceMatrix::random_metric(n, seed).expect("generator accepts n");
    let constructed = ttp2::Solution::construct(&dm).expect("construction");
    let (improved, trace) = improve(&dm, &constructed).expect("local search");
    let mut schedules = vec![constructed.schedule.clone()];
    let mut teams = constructed.layout.teams().to_vec();
    for mv in &trace.moves {
        mv.apply(&mut teams);
        let layout = SuperLayout::from_teams(&dm, teams.clone()).expect("relabeled layout");
        schedules.push(build_schedule_with_layout(&layout, &constructed.timetable).expect("expansion"));
    }
    schedules.push(improved.schedule.clone());
    let identities = [&constructed.report, &improved.report]
        .iter()
        .map(|r| (r.total, r.lb, r.extra_total()))
        .collect();
    Solved {
        n,
        seed,
        dm,
        schedules,
        final_total: improved.report.total,
        final_lb: improved.report.lb,
        identities,
    }
}

fn criterion_1() -> Verdict {
    let dm = DistanceMatrix::worst_case(8).unwrap();
    let layout = SuperLayout::identity(&dm).unwrap();
    let timetable = build_timetable(4).unwrap();
    let built = build_schedule_with_layout(&layout, &timetable).unwrap();
    let fixture = Schedule::from_text(TABLE1).unwrap();
    let mismatches = (0..8)
        .flat_map(|t| (0..14).map(move |d| (t, d)))
        .filter(|&(t, d)| built.entry(t, d) != fixture.entry(t, d))
        .count();
    verdict(mismatches == 0, format!("{mismatches} of 112 entries differ from Table 1"))
}

fn criterion_2(solved: &[Solved], elapsed: Duration) -> Verdict {
    let bad: Vec<String> = solved
        .iter()
        .filter(|s| s.schedules.iter().any(|x| !validate_schedule(x).is_empty()))
        .map(|s| format!("n={} seed={}", s.n, s.seed))
        .collect();
    let fast = elapsed < FEASIBILITY_BUDGET;
    verdict(
        bad.is_empty() && fast,
        format!(
            "{} instances, {} infeasible{}, {:.2}s (limit {}s)",
            solved.len(),
            bad.len(),
            if bad.is_empty() { String::new() } else { format!(" ({})", bad.join(", ")) },
            elapsed.as_secs_f64(),
            FEASIBILITY_BUDGET.as_secs()
        ),
    )
}

fn criterion_3() -> Verdict {
    let mut failures = Vec::new();
    for n in SIZES {
        let dm = DistanceMatrix::worst_case(n).unwrap();
        let constructed = ttp2::Solution::construct(&dm).unwrap();
        let (improved, _) = improve(&dm, &constructed).unwrap();
        let ni = n as i64;
        let want_lb = ni * (ni - 2);
        let want_total = want_lb + 3 * ni - 12;
        let want_ratio = Ratio::from_integer(1) + Ratio::new(3, ni) - Ratio::new(6, ni * (ni - 2));
        for (what, r) in [("construction", &constructed.report), ("local search", &improved.report)] {
            let ok = r.lb == want_lb && r.total == want_total && r.ratio() == Some(want_ratio);
            if !ok {
                failures.push(format!("n={n} {what}: lb {} total {} (want {want_lb}/{want_total})", r.lb, r.total));
            }
        }
        if ratio_bound(n) != want_ratio {
            failures.push(format!("n={n}: ratio_bound disagrees"));
        }
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("n in {SIZES:?}: total = n(n-2)+3n-12, ratio exact")
        } else {
            failures.join("; ")
        },
    )
}

fn criterion_4(solved: &[Solved]) -> Verdict {
    let bad: Vec<String> = solved
        .iter()
        .filter(|s| !within_ratio_bound(s.n, s.final_total, s.final_lb))
        .map(|s| format!("n={} seed={}", s.n, s.seed))
        .collect();
    let worst = solved
        .iter()
        .map(|s| Ratio::new(s.final_total, s.final_lb) / ratio_bound(s.n))
        .max()
        .unwrap_or_default();
    verdict(
        bad.is_empty(),
        format!(
            "{} over the bound{}; largest ratio/bound {:.6}",
            bad.len(),
            if bad.is_empty() { String::new() } else { format!(" ({})", bad.join(", ")) },
            *worst.numer() as f64 / *worst.denom() as f64
        ),
    )
}

fn criterion_5(solved: &[Solved]) -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    for s in solved {
        for &(total, lb, extras) in &s.identities {
            checked += 1;
            if total != lb + extras {
                bad.push(format!("n={} seed={}: {total} != {lb} + {extras}", s.n, s.seed));
            }
        }
        let last = s.schedules.last().unwrap();
        if itinerary_cost(last, &s.dm).total != s.final_total {
            bad.push(format!("n={} seed={}: simulated cost differs from report", s.n, s.seed));
        }
    }
    for n in SIZES {
        let dm = DistanceMatrix::worst_case(n).unwrap();
        let r = ttp2::Solution::construct(&dm).unwrap().report;
        checked += 1;
        if r.total != r.lb + r.extra_total() {
            bad.push(format!("worst case n={n}"));
        }
    }
    verdict(bad.is_empty(), format!("{checked} reports checked, {} mismatches {}", bad.len(), bad.join("; ")))
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(MATCHING_SEED);
    let sizes = [4usize, 6, 8, 10];
    // Small ranges force ties, large ones exercise magnitude.
    let ranges = [3i64, 20, 1000, 1_000_000];
    let mut bad = Vec::new();
    for t in 0..MATCHING_TABLES {
        let k = sizes[t % sizes.len()];
        let hi = ranges[(t / sizes.len()) % ranges.len()];
        let mut w = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let v = rng.random_range(0..=hi);
                w[i][j] = v;
                w[j][i] = v;
            }
        }
        let w = DistanceMatrix::new(w).unwrap();
        let fast = min_perfect_matching(&w).unwrap().weight();
        let slow = brute_force_matching(&w).unwrap().weight();
        if fast != slow {
            bad.push(format!("table {t} (k={k}): {fast} vs {slow}"));
        }
    }
    verdict(
        bad.is_empty(),
        format!("{MATCHING_TABLES} tables, k in {sizes:?}, {} mismatches {}", bad.len(), bad.join("; ")),
    )
}

fn criterion_10(solved: &[Solved]) -> Verdict {
    let mut count = 0;
    let mut bad = Vec::new();
    for s in solved {
        assert!(s.dm.is_metric());
        let lb = independent_lower_bound(&s.dm).unwrap().lb;
        for (i, x) in s.schedules.iter().enumerate() {
            count += 1;
            let cost = itinerary_cost(x, &s.dm).total;
            if cost > 2 * lb {
                bad.push(format!("n={} seed={} schedule {i}: {cost} > 2*{lb}", s.n, s.seed));
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!("{count} schedules (incl. local-search intermediates), {} over 2*LB {}", bad.len(), bad.join("; ")),
    )
}

/// Finds the 17 benchmark files in `dir` by case-insensitive stem.
fn locate_bench(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let files = instance_files(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut found = Vec::new();
    let mut missing = Vec::new();
    for r in &REFERENCES {
        match files.iter().find(|f| instance_name(f).eq_ignore_ascii_case(r.name)) {
            Some(f) => found.push(f.clone()),
            None => missing.push(r.name),
        }
    }
    if missing.is_empty() {
        Ok(found)
    } else {
        Err(format!("missing in {}: {}", dir.display(), missing.join(", ")))
    }
}

fn within_tolerance(value: i64, published: i64) -> bool {
    (value - published).abs() * TOLERANCE_DENOM <= published
}

fn bench_criteria() -> [Verdict; 3] {
    let require = std::env::var("TTP2_REQUIRE_BENCH").is_ok_and(|v| v == "1");
    let unavailable = |why: String| -> [Verdict; 3] {
        std::array::from_fn(|_| if require { Verdict::Fail(why.clone()) } else { Verdict::NotRun(why.clone()) })
    };
    let Some(dir) = std::env::var_os("TTP2_BENCH_DIR") else {
        return unavailable("benchmark files not supplied (set TTP2_BENCH_DIR)".into());
    };
    let paths = match locate_bench(Path::new(&dir)) {
        Ok(p) => p,
        Err(e) => return unavailable(e),
    };
    let start = Instant::now();
    let rows: Vec<Result<BenchRow, String>> = paths.iter().map(|p| bench_file(p)).collect();
    let elapsed = start.elapsed();

    let mut ilb_bad = Vec::new();
    let mut quality_bad = Vec::new();
    for (r, row) in REFERENCES.iter().zip(&rows) {
        match row {
            Err(e) => {
                ilb_bad.push(format!("{}: {e}", r.name));
                quality_bad.push(format!("{}: {e}", r.name));
            }
            Ok(row) => {
                if row.ilb != r.ilb {
                    ilb_bad.push(format!("{} {} (want {})", r.name, row.ilb, r.ilb));
                }
                let ok = row.after <= r.previous
                    && within_tolerance(row.after, r.after)
                    && within_tolerance(row.before, r.before);
                if !ok {
                    quality_bad.push(format!(
                        "{} before {} (paper {}) after {} (paper {}, previous {})",
                        r.name, row.before, r.before, row.after, r.after, r.previous
                    ));
                }
            }
        }
    }
    [
        verdict(ilb_bad.is_empty(), format!("17 instances, {} mismatches {}", ilb_bad.len(), ilb_bad.join("; "))),
        verdict(
            quality_bad.is_empty(),
            format!("17 instances, {} outside tolerance {}", quality_bad.len(), quality_bad.join("; ")),
        ),
        verdict(
            elapsed < BENCH_BUDGET,
            format!("{:.2}s (limit {}s)", elapsed.as_secs_f64(), BENCH_BUDGET.as_secs()),
        ),
    ]
}

fn main() -> ExitCode {
    let start = Instant::now();
    let solved: Vec<Solved> = SIZES
        .iter()
        .flat_map(|&n| (0..SEEDS_PER_SIZE).map(move |seed| (n, seed)))
        .map(|(n, seed)| solve_random(n, seed))
        .collect();
    let elapsed = start.elapsed();

    let [c7, c8, c9] = bench_criteria();
    let results = [
        ("golden schedule (Table 1)", criterion_1()),
        ("feasibility on random metric instances", criterion_2(&solved, elapsed)),
        ("worst-case family exact cost and ratio", criterion_3()),
        ("ratio bound on random instances", criterion_4(&solved)),
        ("cost identity total = LB + extras", criterion_5(&solved)),
        ("matching vs brute force", criterion_6()),
        ("benchmark ILB values", c7),
        ("benchmark solution quality", c8),
        ("benchmark runtime", c9),
        ("cost <= 2*LB on metric instances", criterion_10(&solved)),
    ];

    let mut failed = 0;
    for (i, (name, v)) in results.iter().enumerate() {
        let (tag, detail) = match v {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::NotRun(d) => ("NOT RUN", d),
        };
        println!("criterion {:>2}: {tag:<7} {name}: {}", i + 1, detail.trim_end());
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
