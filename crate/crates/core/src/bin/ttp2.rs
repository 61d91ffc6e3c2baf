use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ttp2::bench::{run_bench, to_csv, to_human};
use ttp2::cost::{format_decimal, independent_lower_bound, itinerary_cost, ratio_bound};
use ttp2::{solve, validate_schedule, DistanceMatrix, Error, Schedule};

macro_rules! say {
    ($o:expr) => {
        $o.push('\n')
    };
    ($o:expr, $($t:tt)*) => {{
        let _ = writeln!($o, $($t)*);
    }};
}

/// Feasible TTP-2 schedules from minimum perfect matchings.
#[derive(Parser)]
#[command(name = "ttp2", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Worstcase,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Build a schedule for an instance file and report its cost.
    Solve {
        instance: PathBuf,
        /// Report the construction without local search.
        #[arg(long)]
        no_local_search: bool,
        /// Write schedule.txt, schedule.json and report.json here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Print the super-game timetable to stderr.
        #[arg(long)]
        debug: bool,
    },
    /// Check a schedule (text or JSON form) for feasibility.
    Validate {
        schedule: PathBuf,
        /// Also report the travel distance on this instance.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Solve every instance file in a directory.
    Bench {
        dir: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Leave the runtime column empty so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Print the independent lower bound of an instance.
    Lowerbound {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Write a synthetic instance in sized-header form.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        n: usize,
        #[arg(default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    /// Bad input: exit code 2.
    Input(String),
    /// Infeasible schedule or failed internal check: exit code 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<DistanceMatrix, Failure> {
    let dm = DistanceMatrix::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if let Some((i, h, j)) = dm.triangle_violation() {
        eprintln!(
            "warning: triangle inequality fails for d({},{}) > d({},{}) + d({},{}); the ratio guarantee does not apply",
            i + 1,
            j + 1,
            i + 1,
            h + 1,
            h + 1,
            j + 1
        );
    }
    Ok(dm)
}

fn solve_cmd(
    instance: &Path,
    no_local_search: bool,
    out: Option<&Path>,
    format: Format,
    debug: bool,
    o: &mut String,
) -> Result<ExitCode, Failure> {
    let dm = load_instance(instance)?;
    if dm.n() % 4 != 0 {
        return Err(Failure::Input(format!(
            "n={} is not supported: this solver requires n ≡ 0 (mod 4)",
            dm.n()
        )));
    }
    let outcome = solve(&dm, !no_local_search)?;
    if debug {
        if let Some(sol) = &outcome.solution {
            eprint!("{}", sol.timetable);
            for (k, t) in sol.layout.teams().iter().enumerate() {
                eprintln!("u{} = (t{}, t{})", k + 1, t.first + 1, t.second + 1);
            }
        }
    }
    let violations = validate_schedule(&outcome.schedule);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("{v}");
        }
        return Err(Failure::Check("constructed schedule failed validation".into()));
    }

    let r = &outcome.report;
    let name = instance.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let gap = r.gap().map(|g| format_decimal(g * 100, 2)).unwrap_or_else(|| "-".into());
    let ratio = r.ratio().map(|x| format_decimal(x, 4)).unwrap_or_else(|| "-".into());
    let bound = (dm.n() >= 8).then(|| ratio_bound(dm.n()));
    let bound_text = bound.map(|b| format_decimal(b, 4)).unwrap_or_else(|| "-".into());
    let within = bound.map(|_| r.within_ratio_bound());

    let structured = json!({
        "instance": name,
        "n": dm.n(),
        "metric": dm.is_metric(),
        "lb": r.lb,
        "before_local_search": outcome.before,
        "total": r.total,
        "gap_pct": gap,
        "ratio": ratio,
        "ratio_bound": bound_text,
        "within_bound": within,
        "e1": r.e1,
        "e2": r.e2,
        "extra_total": r.extra_total(),
        "blocks": r.blocks,
        "per_team_lb": r.per_team_lb,
        "per_team_total": r.per_team_total,
    });

    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        write(&dir.join("schedule.txt"), &outcome.schedule.to_text())?;
        write(&dir.join("schedule.json"), &outcome.schedule.to_json())?;
        write(&dir.join("report.json"), &format!("{structured:#}\n"))?;
    }

    match format {
        Format::Human => {
            say!(o, "instance      {name} (n={})", dm.n());
            say!(o, "lower bound   {}", r.lb);
            say!(o, "construction  {}", outcome.before);
            say!(o, "total         {}", r.total);
            say!(o, "gap           {gap}%");
            match within {
                Some(ok) => say!(o, "ratio         {ratio} (bound {bound_text}, {})", if ok { "ok" } else { "EXCEEDED" }),
                None => say!(o, "ratio         {ratio}"),
            }
            if !r.blocks.is_empty() {
                say!(o, "extra cost    {} (left-game bound {}, last-game bound {})", r.extra_total(), r.e1, r.e2);
            }
            if out.is_none() {
                say!(o);
                o.push_str(&outcome.schedule.to_text());
            }
        }
        Format::Csv => {
            say!(o, "instance,n,ilb,before_swapping,total,gap_pct,ratio,ratio_bound");
            say!(o, "{name},{},{},{},{},{gap},{ratio},{bound_text}", dm.n(), r.lb, outcome.before, r.total);
        }
        Format::Structured => {
            let mut doc = structured;
            doc["schedule"] = serde_json::from_str(&outcome.schedule.to_json()).expect("valid json");
            say!(o, "{doc:#}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn validate_cmd(path: &Path, instance: Option<&Path>, o: &mut String) -> Result<ExitCode, Failure> {
    let schedule = Schedule::parse_any(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let violations = validate_schedule(&schedule);
    if let Some(inst) = instance {
        let dm = load_instance(inst)?;
        if dm.n() != schedule.n() {
            return Err(Failure::Input(format!(
                "schedule has {} teams, instance has {}",
                schedule.n(),
                dm.n()
            )));
        }
        say!(o, "travel distance {}", itinerary_cost(&schedule, &dm).total);
    }
    if violations.is_empty() {
        say!(o, "feasible");
        return Ok(ExitCode::SUCCESS);
    }
    for v in &violations {
        say!(o, "{v}");
    }
    say!(o, "{} violation(s)", violations.len());
    Ok(ExitCode::from(1))
}

fn bench_cmd(dir: &Path, format: Format, no_timing: bool, o: &mut String) -> Result<ExitCode, Failure> {
    let report = run_bench(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    for (path, err) in &report.errors {
        eprintln!("{}: {err}", path.display());
    }
    match format {
        Format::Csv => o.push_str(&to_csv(&report.rows, !no_timing)),
        Format::Human => o.push_str(&to_human(&report.rows, !no_timing)),
        Format::Structured => {
            let rows: Vec<_> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "instance": r.instance,
                        "n": r.n,
                        "ilb": r.ilb,
                        "before_swapping": r.before,
                        "after_swapping": r.after,
                        "gap_pct": r.gap_percent(),
                        "runtime_ms": (!no_timing).then_some(r.runtime.as_secs_f64() * 1000.0),
                        "published": r.reference,
                    })
                })
                .collect();
            say!(o, "{:#}", json!(rows));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn lowerbound_cmd(path: &Path, format: Format, o: &mut String) -> Result<ExitCode, Failure> {
    let dm = load_instance(path)?;
    let lb = independent_lower_bound(&dm)?;
    let pairs: Vec<[usize; 2]> = lb.matching.pairs().iter().map(|&(a, b)| [a + 1, b + 1]).collect();
    match format {
        Format::Human => {
            say!(o, "lower bound  {}", lb.lb);
            say!(o, "D_G          {}", lb.d_g);
            say!(o, "D_M          {}", lb.d_m());
            let shown: Vec<String> = pairs.iter().map(|[a, b]| format!("(t{a},t{b})")).collect();
            say!(o, "matching     {}", shown.join(" "));
            for (i, v) in lb.per_team.iter().enumerate() {
                say!(o, "LB_t{:<3}     {v}", i + 1);
            }
        }
        Format::Csv => {
            say!(o, "n,lb,d_g,d_m");
            say!(o, "{},{},{},{}", dm.n(), lb.lb, lb.d_g, lb.d_m());
        }
        Format::Structured => {
            let doc = json!({
                "n": dm.n(),
                "lb": lb.lb,
                "d_g": lb.d_g,
                "d_m": lb.d_m(),
                "matching": pairs,
                "per_team_lb": lb.per_team,
            });
            say!(o, "{doc:#}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn gen_cmd(kind: GenKind, n: usize, seed: u64, output: Option<&Path>, o: &mut String) -> Result<ExitCode, Failure> {
    let dm = match kind {
        GenKind::Worstcase => DistanceMatrix::worst_case(n),
        GenKind::Random => DistanceMatrix::random_metric(n, seed),
    }?;
    match output {
        Some(path) => write(path, &dm.to_text())?,
        None => o.push_str(&dm.to_text()),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut o = String::new();
    let result = match &cli.command {
        Command::Solve {
            instance,
            no_local_search,
            out,
            format,
            debug,
        } => solve_cmd(instance, *no_local_search, out.as_deref(), *format, *debug, &mut o),
        Command::Validate { schedule, instance } => validate_cmd(schedule, instance.as_deref(), &mut o),
        Command::Bench { dir, format, no_timing } => bench_cmd(dir, *format, *no_timing, &mut o),
        Command::Lowerbound { instance, format } => lowerbound_cmd(instance, *format, &mut o),
        Command::Gen { kind, n, seed, output } => gen_cmd(*kind, *n, *seed, output.as_deref(), &mut o),
    };
    // A closed pipe (`ttp2 ... | head`) is not an error.
    let _ = std::io::stdout().lock().write_all(o.as_bytes());
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
