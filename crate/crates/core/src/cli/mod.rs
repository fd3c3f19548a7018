//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on invalid input or a failed check, 2 when a
//! guard refuses (oracle too large, degenerate reduction), 3 when `bench`
//! observes a violated guarantee.

pub mod bench;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounded_paths::apsp_b;
use crate::clustering::greedy_centers;
use crate::format::{parse_instance, parse_solution, write_instance, write_solution};
use crate::fpt::{fpt_solve, PhaseTimings};
use crate::graph::{Augmentation, VertexId, WeightedInstance};
use crate::oracle::{exact_optimum, OracleError, OracleLimits};
use crate::reductions::{
    gen_random, reduce_setcover, reduce_setcover_multicopy, RandomParams, ReductionError, SetCoverInstance,
};
use crate::unit_cost::{cluster_spanning_mst, pairwise_centers, star_centers, UnitCostInstance};

use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "bcmd", version, about = "Bounded-cost minimum-diameter edge addition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an approximation algorithm (or the exact oracle) on an instance.
    Solve(SolveArgs),
    /// Exact optimum by exhaustive enumeration (small instances only).
    Exact(ExactArgs),
    /// Recompute the cost and diameter claimed by a solution file.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Bounded-cost distances, one `beta u v dist` row per entry.
    Apsp {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        source: Option<VertexId>,
        #[arg(long)]
        beta: Option<usize>,
    },
    /// Greedy farthest-point centers and their clusters.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        first: VertexId,
    },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Quality table against the exact oracle, or a runtime sweep.
    Bench {
        #[arg(long, value_enum, default_value_t = Suite::Small)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
    },
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Set Cover gadget; the family file holds one subset per line.
    Setcover {
        #[arg(long)]
        sets: PathBuf,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Size of the base set (defaults to the largest element + 1).
        #[arg(long)]
        elements: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded random instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        wmax: u64,
        #[arg(long)]
        cmax: u64,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Fpt)]
    algo: Algo,
    /// First cluster center.
    #[arg(long, default_value_t = 0)]
    first: VertexId,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    /// Also write a solution file.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Compare against the exact optimum.
    #[arg(long)]
    oracle: bool,
    /// Include per-phase wall-clock times (makes the report non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    #[arg(long)]
    solution: Option<PathBuf>,
    #[arg(long, default_value_t = OracleLimits::default().max_non_edges)]
    max_non_edges: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_candidates)]
    max_candidates: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Fpt,
    Pairs,
    Star,
    Mst,
    Exact,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Small,
    Scale,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Refused(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Refused(_) => 2,
            Failure::Violation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Refused(m) | Failure::Violation(m) => m,
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Refused(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<WeightedInstance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Invalid(format!("write failed: {e}")))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                1
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(args, out),
        Command::Exact(args) => exact(args, out),
        Command::Check { input, solution } => check(&input, &solution, out),
        Command::Apsp { input, source, beta } => apsp(&input, source, beta, out),
        Command::Cluster { input, first } => cluster(&input, first, out),
        Command::Gen(cmd) => generate(cmd, out),
        Command::Bench { suite, seed, report } => bench_cmd(suite, seed, report, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn finish_report(
    report: RunReport,
    format: ReportFormat,
    aug: &Augmentation,
    solution: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    if let Some(path) = solution {
        write_file(path, &write_solution(aug))?;
    }
    emit(
        out,
        &match format {
            ReportFormat::Text => report.to_text(),
            ReportFormat::Json => report.to_json(),
        },
    )
}

fn solve(args: SolveArgs, out: &mut dyn Write) -> Outcome {
    let inst = load(&args.input)?;
    if args.algo == Algo::Exact {
        return exact(
            ExactArgs {
                input: args.input,
                report: args.report,
                solution: args.solution,
                max_non_edges: OracleLimits::default().max_non_edges,
                max_candidates: OracleLimits::default().max_candidates,
            },
            out,
        );
    }
    let (name, aug, mut report, timings) = match args.algo {
        Algo::Fpt => {
            let outcome = fpt_solve(&inst, args.first).map_err(invalid)?;
            let mut report = RunReport::new("fpt", &inst, &outcome.augmentation);
            report.gamma_height = Some(outcome.gamma_height);
            report.cluster_radius = Some(outcome.centers.radius);
            report.infeasible_height = outcome.infeasible_height.then_some(true);
            ("fpt", outcome.augmentation, report, outcome.timings)
        }
        algo => {
            let unit = UnitCostInstance::new(inst.clone()).map_err(invalid)?;
            let mut timings = PhaseTimings::default();
            let (name, outcome) = match algo {
                Algo::Pairs => ("pairs", timings.record("solve", || pairwise_centers(&unit, args.first))),
                Algo::Star => ("star", timings.record("solve", || star_centers(&unit, args.first))),
                _ => ("mst", timings.record("solve", || cluster_spanning_mst(&unit, args.first))),
            };
            let outcome = outcome.map_err(invalid)?;
            let mut report = RunReport::new(name, &inst, &outcome.augmentation);
            report.cluster_radius = Some(outcome.centers.radius);
            (name, outcome.augmentation, report, timings)
        }
    };
    debug_assert_eq!(report.algorithm, name);
    report.first_center = Some(args.first);
    if args.oracle {
        let optimum = exact_optimum(&inst, &OracleLimits::default())?;
        report = report.with_optimum(optimum.best_diameter);
    }
    if args.timings {
        report = report.with_timings(&timings);
    }
    finish_report(report, args.report, &aug, args.solution.as_deref(), out)
}

fn exact(args: ExactArgs, out: &mut dyn Write) -> Outcome {
    let inst = load(&args.input)?;
    let limits = OracleLimits {
        max_non_edges: args.max_non_edges,
        max_candidates: args.max_candidates,
        ..OracleLimits::default()
    };
    let result = exact_optimum(&inst, &limits)?;
    let aug = Augmentation::evaluate(&inst, result.best_f).map_err(invalid)?;
    let mut report = RunReport::new("exact", &inst, &aug);
    report.explored = Some(result.explored);
    let report = report.with_optimum(result.best_diameter);
    finish_report(report, args.report, &aug, args.solution.as_deref(), out)
}

fn check(input: &Path, solution: &Path, out: &mut dyn Write) -> Outcome {
    let inst = load(input)?;
    let claimed =
        parse_solution(&read(solution)?).map_err(|e| Failure::Invalid(format!("{}: {e}", solution.display())))?;
    let actual = Augmentation::evaluate(&inst, claimed.added.iter().copied()).map_err(invalid)?;
    let mut problems = Vec::new();
    if actual.added.len() != claimed.added.len() {
        problems.push("solution lists a pair more than once".to_string());
    }
    if actual.total_cost != claimed.cost {
        problems.push(format!("claimed cost {} but the pairs cost {}", claimed.cost, actual.total_cost));
    }
    if actual.diameter != claimed.diameter {
        problems
            .push(format!("claimed diameter {} but the augmented diameter is {}", claimed.diameter, actual.diameter));
    }
    if !actual.within_budget(&inst) {
        problems.push(format!("cost {} exceeds budget {}", actual.total_cost, inst.budget()));
    }
    if problems.is_empty() {
        emit(out, &format!("ok: cost {}, diameter {}\n", actual.total_cost, actual.diameter))
    } else {
        Err(Failure::Invalid(format!("mismatch: {}", problems.join("; "))))
    }
}

fn apsp(input: &Path, source: Option<VertexId>, beta: Option<usize>, out: &mut dyn Write) -> Outcome {
    let inst = load(input)?;
    if let Some(s) = source.filter(|&s| s >= inst.n()) {
        return Err(Failure::Invalid(format!("source {s} out of range for n = {}", inst.n())));
    }
    let b = usize::try_from(inst.budget()).unwrap_or(usize::MAX);
    if let Some(x) = beta.filter(|&x| x > b) {
        return Err(Failure::Invalid(format!("beta {x} exceeds budget {b}")));
    }
    let dists = apsp_b(&inst);
    let mut text = String::new();
    for x in beta.map_or(0..=b, |x| x..=x) {
        for u in source.map_or(0..inst.n(), |s| s..s + 1) {
            for (v, d) in dists.row(x, u).iter().enumerate() {
                text.push_str(&format!("{x} {u} {v} {d}\n"));
            }
        }
    }
    emit(out, &text)
}

fn cluster(input: &Path, first: VertexId, out: &mut dyn Write) -> Outcome {
    let inst = load(input)?;
    if first >= inst.n() {
        return Err(Failure::Invalid(format!("first center {first} out of range for n = {}", inst.n())));
    }
    let c = greedy_centers(&inst, first);
    let join = |xs: &[VertexId]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut text = format!("centers: {}\nradius: {}\n", join(&c.centers), c.radius);
    for (i, members) in c.clusters().iter().enumerate() {
        text.push_str(&format!("cluster {i} (center {}): {}\n", c.centers[i], join(members)));
    }
    emit(out, &text)
}

fn generate(cmd: GenCommand, out: &mut dyn Write) -> Outcome {
    let (text, output) = match cmd {
        GenCommand::Setcover { sets, k, copies, elements, output } => {
            let sc = SetCoverInstance::parse(&read(&sets)?, k, elements).map_err(invalid)?;
            let built = if copies == 1 { reduce_setcover(&sc) } else { reduce_setcover_multicopy(&sc, copies) };
            let (inst, _) = built.map_err(|e| match e {
                ReductionError::Degenerate { .. } | ReductionError::TooFewCopies(_) => Failure::Refused(e.to_string()),
                other => invalid(other),
            })?;
            (write_instance(&inst), output)
        }
        GenCommand::Random { n, p, wmax, cmax, budget, seed, output } => {
            let params = RandomParams { n, edge_probability: p, max_weight: wmax, max_cost: cmax, budget, seed };
            (write_instance(&gen_random(&params).map_err(invalid)?), output)
        }
    };
    match output {
        Some(path) => write_file(&path, &text),
        None => emit(out, &text),
    }
}

fn bench_cmd(suite: Suite, seed: u64, format: ReportFormat, out: &mut dyn Write) -> Outcome {
    match suite {
        Suite::Small => {
            let rows = bench::run_small(seed);
            emit(
                out,
                &match format {
                    ReportFormat::Text => bench::small_table(&rows),
                    ReportFormat::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
                },
            )?;
            let bad = rows.iter().filter(|r| !r.ok).count();
            if bad > 0 {
                return Err(Failure::Violation(format!("{bad} rows exceed their proven bound")));
            }
            Ok(())
        }
        Suite::Scale => {
            let rows = bench::run_scale(seed, &[2, 3, 4, 5, 6]);
            emit(
                out,
                &match format {
                    ReportFormat::Text => bench::scale_table(&rows),
                    ReportFormat::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
                },
            )
        }
    }
}
