use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pevcond::montecarlo::{
    run_experiment_with_workers, stochastic_check, verify_lemma_lines, verify_lemma_subspace,
    ExperimentConfig, ExperimentSummary, DEFAULT_BLOCKS,
};
use pevcond::problems::{condition_report, solve_instance, ProblemDescriptor, ProblemInstance};
use pevcond::verification::{run_comparison, Comparison};
use pevcond::Error;
use serde::Serialize;

use crate::problem_file::{build_descriptor, MaskSpec, ProblemFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Largest tolerated fraction of instances without exactly `s d_O` solutions.
pub const MISMATCH_RATE_LIMIT: f64 = 1e-3;

pub const CSV_HEADER: [&str; 18] = [
    "problem",
    "n",
    "d",
    "m",
    "r",
    "s",
    "d_O",
    "samples",
    "seed",
    "blocks",
    "mom_estimate",
    "naive_mean",
    "naive_stderr",
    "theory",
    "rel_err",
    "resamples",
    "wall_clock_s",
    "workers",
];

#[derive(Parser, Debug)]
#[command(
    name = "pevcond",
    version,
    about = "Polynomial eigenvalue condition numbers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a problem file and write eigenvalues with condition numbers as JSON.
    Solve { input: PathBuf, output: PathBuf },
    /// Print the structure constants and expected mean squared condition.
    Expect(FamilyArgs),
    /// Run a Monte Carlo experiment and append a CSV row.
    Mc(McArgs),
    /// Run a numerical verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// dense, lacunary, gevp, pevp, masked or quadric
    #[arg(long)]
    pub problem: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Degree of a scalar polynomial.
    #[arg(long = "N")]
    pub degree: Option<usize>,
    /// Support of a lacunary polynomial, e.g. 0,3,7
    #[arg(long, value_delimiter = ',')]
    pub indices: Option<Vec<usize>>,
    /// Mask names per coefficient, lowest power of α first, e.g. upper,full,diag
    #[arg(long, value_delimiter = ',')]
    pub masks: Option<Vec<String>>,
}

impl FamilyArgs {
    pub fn descriptor(&self) -> Result<ProblemDescriptor, String> {
        let masks: Option<Vec<MaskSpec>> = self
            .masks
            .as_ref()
            .map(|v| v.iter().cloned().map(MaskSpec::Pattern).collect());
        build_descriptor(
            &self.problem,
            self.n,
            self.d,
            self.degree,
            self.indices.as_deref(),
            masks.as_deref(),
        )
    }
}

#[derive(Args, Debug, Clone)]
pub struct McArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BLOCKS)]
    pub blocks: usize,
    /// Redraw budget for instances with untrusted or infinite condition.
    #[arg(long)]
    pub max_resamples: Option<usize>,
    /// CSV file to append to; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, env = "PEVCOND_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lemma,
    Stochastic,
    Oracle,
}

/// Runs a parsed command; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Solve { input, output } => cmd_solve(&input, &output, out),
        Command::Expect(f) => cmd_expect(&f, out),
        Command::Mc(args) => cmd_mc(&args, out),
        Command::Verify { suite } => cmd_verify(suite, out),
    }
}

fn is_numerical(e: &Error) -> bool {
    !matches!(e, Error::InvalidInput(_) | Error::Dimension(_))
}

#[derive(Serialize)]
struct EigenRecord {
    /// Canonical homogeneous coordinates.
    coords: Vec<[f64; 2]>,
    /// `α/β` when `|β| > 1e-12`.
    lambda: Option<[f64; 2]>,
    /// `null` when infinite.
    mu: Option<f64>,
    mu_st_sq: Option<f64>,
    residual_right: f64,
    residual_left: f64,
    trusted: bool,
}

#[derive(Serialize)]
struct SolveReport {
    family: String,
    solutions: usize,
    expected_solutions: usize,
    count_mismatch: bool,
    mean_mu_sq: Option<f64>,
    mu_max: Option<f64>,
    eigenvalues: Vec<EigenRecord>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn solve_report(inst: &ProblemInstance) -> pevcond::Result<SolveReport> {
    let outcome = solve_instance(inst)?;
    let report = condition_report(inst, &outcome)?;
    let eigenvalues = outcome
        .triples
        .iter()
        .zip(&report.per_eigenvalue)
        .map(|(t, e)| EigenRecord {
            coords: t.z.coords().iter().map(|c| [c.re, c.im]).collect(),
            lambda: match inst.descriptor.output_variety() {
                pevcond::geometry::OutputVariety::ProjectiveLine => {
                    t.z.affine().map(|l| [l.re, l.im])
                }
                pevcond::geometry::OutputVariety::QuadricCurve => None,
            },
            mu: finite(e.mu),
            mu_st_sq: finite(e.mu_st_sq),
            residual_right: t.residual_right,
            residual_left: t.residual_left,
            trusted: t.trusted,
        })
        .collect();
    Ok(SolveReport {
        family: inst.descriptor.name().to_string(),
        solutions: outcome.triples.len(),
        expected_solutions: inst.descriptor.expected_solution_count(),
        count_mismatch: outcome.count_mismatch,
        mean_mu_sq: finite(report.mean_mu_sq),
        mu_max: finite(report.mu_max),
        eigenvalues,
    })
}

pub fn cmd_solve(input: &Path, output: &Path, out: &mut dyn Write) -> i32 {
    let text = match fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", input.display());
            return EXIT_USAGE;
        }
    };
    let inst = match ProblemFile::parse(&text).and_then(|f| f.instance()) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {}: {e}", input.display());
            return EXIT_USAGE;
        }
    };
    let report = match solve_report(&inst) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return if is_numerical(&e) {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            };
        }
    };
    let json = serde_json::to_string_pretty(&report).expect("plain data serializes");
    if let Err(e) = fs::write(output, json + "\n") {
        eprintln!("error: cannot write {}: {e}", output.display());
        return EXIT_USAGE;
    }
    let _ = writeln!(
        out,
        "{} solutions written to {}",
        report.solutions,
        output.display()
    );
    EXIT_OK
}

pub fn cmd_expect(args: &FamilyArgs, out: &mut dyn Write) -> i32 {
    let desc = match args.descriptor() {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let theory = desc.expected_mean_sq_condition();
    let _ = writeln!(out, "problem {}", desc.name());
    let _ = writeln!(out, "m {}", desc.m());
    let _ = writeln!(out, "r {}", desc.r());
    let _ = writeln!(out, "s {}", desc.s());
    let _ = writeln!(out, "d_O {}", desc.d_o());
    let _ = writeln!(out, "solutions {}", desc.expected_solution_count());
    let _ = writeln!(out, "theory {}", fmt_real(theory));
    if let Some(u) = desc.uncorrected_value() {
        let _ = writeln!(
            out,
            "DISCREPANCY uncorrected m*r/s = {} differs from theory (m-1)*r/s = {}",
            fmt_real(u),
            fmt_real(theory)
        );
    }
    EXIT_OK
}

/// Shortest representation that round-trips.
fn fmt_real(v: f64) -> String {
    format!("{v}")
}

/// 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV fields of one experiment, in `CSV_HEADER` order.
pub fn csv_row(
    desc: &ProblemDescriptor,
    s: &ExperimentSummary,
    wall_clock: f64,
    workers: usize,
) -> Vec<String> {
    vec![
        desc.name().to_string(),
        desc.n().to_string(),
        desc.degree().to_string(),
        desc.m().to_string(),
        desc.r().to_string(),
        desc.s().to_string(),
        desc.d_o().to_string(),
        s.samples.to_string(),
        s.seed.to_string(),
        s.blocks.to_string(),
        fmt17(s.mom_estimate),
        fmt17(s.naive_mean),
        fmt17(s.naive_stderr),
        fmt17(s.theory),
        fmt17(s.rel_err),
        s.resample_count.to_string(),
        format!("{wall_clock:.3}"),
        workers.to_string(),
    ]
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn cmd_mc(args: &McArgs, out: &mut dyn Write) -> i32 {
    let desc = match args.family.descriptor() {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut cfg =
        ExperimentConfig::new(desc.clone(), args.samples, args.seed).with_blocks(args.blocks);
    if let Some(m) = args.max_resamples {
        cfg.max_resamples = m;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let workers = args.workers.unwrap_or_else(default_workers).max(1);
    let start = Instant::now();
    let summary = match run_experiment_with_workers(&cfg, workers) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return if is_numerical(&e) {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            };
        }
    };
    let row = csv_row(&desc, &summary, start.elapsed().as_secs_f64(), workers);
    let written = match &args.out {
        Some(path) => append_row(path, &row),
        None => write_rows(&mut *out, true, &row),
    };
    if let Err(e) = written {
        eprintln!("error: writing CSV: {e}");
        return EXIT_USAGE;
    }
    let rate = summary.count_mismatches as f64 / summary.samples as f64;
    if rate > MISMATCH_RATE_LIMIT {
        eprintln!(
            "error: {} of {} instances did not have exactly {} distinct solutions",
            summary.count_mismatches,
            summary.samples,
            desc.expected_solution_count()
        );
        return EXIT_MISMATCH;
    }
    EXIT_OK
}

fn write_rows<W: Write>(w: W, header: bool, row: &[String]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    if header {
        wtr.write_record(CSV_HEADER)?;
    }
    wtr.write_record(row)?;
    wtr.flush()?;
    Ok(())
}

fn append_row(path: &Path, row: &[String]) -> csv::Result<()> {
    let fresh = fs::metadata(path).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    write_rows(file, fresh, row)
}

/// Instances and directions used by the stochastic suite.
pub const STOCHASTIC_INSTANCES: usize = 100;
pub const STOCHASTIC_DIRECTIONS: usize = 50_000;
pub const STOCHASTIC_TOL: f64 = 0.02;
pub const LEMMA_TOL: f64 = 0.01;
pub const LEMMA_SUBSPACE_SAMPLES: usize = 100_000;
pub const ORACLE_INSTANCES: usize = 300;
const VERIFY_SEED: u64 = 42;

struct Check {
    name: String,
    measured: f64,
    expected: f64,
    pass: bool,
}

fn lemma_checks() -> Vec<Check> {
    let pi = std::f64::consts::PI;
    let mut checks: Vec<Check> = [1usize, 2, 3, 5]
        .iter()
        .map(|&d| {
            let v = verify_lemma_lines(d);
            let expected = pi * d as f64;
            Check {
                name: format!("lines d={d}"),
                measured: v,
                expected,
                pass: (v - expected).abs() <= LEMMA_TOL * expected,
            }
        })
        .collect();
    for n in 1..=3usize {
        let v = verify_lemma_subspace(n, LEMMA_SUBSPACE_SAMPLES, VERIFY_SEED);
        let expected = pi.powi(n as i32) * n as f64;
        checks.push(Check {
            name: format!("subspace n={n}"),
            measured: v,
            expected,
            pass: (v - expected).abs() <= LEMMA_TOL * expected,
        });
    }
    checks
}

fn stochastic_checks() -> Vec<Check> {
    let desc = ProblemDescriptor::pevp(2, 2).expect("valid");
    match stochastic_check(
        &desc,
        STOCHASTIC_INSTANCES,
        STOCHASTIC_DIRECTIONS,
        VERIFY_SEED,
    ) {
        Ok(samples) => {
            let worst = samples
                .iter()
                .max_by(|a, b| a.rel_err().total_cmp(&b.rel_err()))
                .copied()
                .expect("nonempty");
            vec![Check {
                name: format!("worst of {} eigenvalues", samples.len()),
                measured: worst.sampled,
                expected: worst.predicted,
                pass: samples.iter().all(|s| s.rel_err() <= STOCHASTIC_TOL),
            }]
        }
        Err(e) => vec![Check {
            name: format!("failed: {e}"),
            measured: f64::NAN,
            expected: f64::NAN,
            pass: false,
        }],
    }
}

fn oracle_checks() -> Vec<Check> {
    Comparison::ALL
        .iter()
        .map(
            |&cmp| match run_comparison(cmp, ORACLE_INSTANCES, VERIFY_SEED) {
                Ok(cases) => {
                    let worst = cases.iter().map(|c| c.rel_diff).fold(0.0, f64::max);
                    Check {
                        name: format!("{} ({} instances, max rel diff)", cmp.name(), cases.len()),
                        measured: worst,
                        expected: cmp.tolerance(),
                        pass: cases.iter().all(|c| c.rel_diff <= cmp.tolerance()),
                    }
                }
                Err(e) => Check {
                    name: format!("{} failed: {e}", cmp.name()),
                    measured: f64::NAN,
                    expected: cmp.tolerance(),
                    pass: false,
                },
            },
        )
        .collect()
}

pub fn cmd_verify(suite: Suite, out: &mut dyn Write) -> i32 {
    let checks = match suite {
        Suite::Lemma => lemma_checks(),
        Suite::Stochastic => stochastic_checks(),
        Suite::Oracle => oracle_checks(),
    };
    for c in &checks {
        let _ = writeln!(
            out,
            "{} {}: measured {} expected {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            fmt17(c.measured),
            fmt17(c.expected)
        );
    }
    if checks.iter().all(|c| c.pass) {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    }
}
