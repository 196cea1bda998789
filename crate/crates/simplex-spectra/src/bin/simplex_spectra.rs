//! Command-line front end: eigenpair censuses, oracle verification runs,
//! and basin-of-attraction experiments, with deterministic seeded output.

use clap::{Parser, Subcommand, ValueEnum};
use simplex_spectra::oracle::{verify_census_against_multistart, verify_rank_one_contractions};
use simplex_spectra::report::{census_csv, census_report, ReportError};
use simplex_spectra::stationary::StationaryError;
use simplex_spectra::tensor::SymTensor;
use simplex_spectra::{basin_experiment, build_frame, census, default_shift};
use std::io::Write;
use std::process::ExitCode;

const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "simplex-spectra", version, about = "Eigenpair census of regular simplex tensors")]
struct Cli {
    /// Seed for all randomized work; flags beat the environment.
    #[arg(long, global = true, env = "SIMPLEX_SPECTRA_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate and classify every real eigenpair for one (n, m).
    Census {
        /// Number of frame vectors (>= 3).
        #[arg(long)]
        n: usize,
        /// Tensor order (>= 3).
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Cross-check contractions and census coverage over a parameter grid.
    Verify {
        /// Grid such as "n=3..5,m=3..5" (inclusive ranges).
        #[arg(long, default_value = "n=3..5,m=3..4")]
        grid: String,
        /// Multistart budget per grid cell.
        #[arg(long, default_value_t = 200)]
        starts: usize,
    },
    /// Run seeded power-iteration starts and tally which eigenpair wins.
    Basin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        /// Power-iteration shift; defaults to (m-1)*n.
        #[arg(long)]
        shift: Option<f64>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn parse_grid(s: &str) -> Option<Vec<(usize, usize)>> {
    let mut n_range = None;
    let mut m_range = None;
    for part in s.split(',') {
        let (key, val) = part.split_once('=')?;
        let (lo, hi) = match val.split_once("..") {
            Some((a, b)) => (a.parse().ok()?, b.parse().ok()?),
            None => {
                let x: usize = val.parse().ok()?;
                (x, x)
            }
        };
        if lo > hi {
            return None;
        }
        match key.trim() {
            "n" => n_range = Some((lo, hi)),
            "m" => m_range = Some((lo, hi)),
            _ => return None,
        }
    }
    let (nl, nh) = n_range?;
    let (ml, mh) = m_range?;
    let mut grid = Vec::new();
    for n in nl..=nh {
        for m in ml..=mh {
            grid.push((n, m));
        }
    }
    Some(grid)
}

fn emit(text: &str, out: &Option<std::path::PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())
        }
    }
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Census { n, m, format, out } => {
            let report = match census_report(n, m, cli.seed) {
                Ok(r) => r,
                Err(ReportError::Stationary(StationaryError::DegenerateCombination {
                    ..
                })) => {
                    eprintln!(
                        "error: (n, m) = ({n}, {m}) is degenerate: the objective is \
                         constant on the unit sphere and eigenpairs form a continuum"
                    );
                    return EXIT_DEGENERATE;
                }
                Err(ReportError::Stationary(StationaryError::BadVertexCount { .. }))
                | Err(ReportError::Stationary(StationaryError::BadOrder { .. }))
                | Err(ReportError::Frame(_))
                | Err(ReportError::Tensor(_)) => {
                    eprintln!("error: invalid parameters n={n}, m={m}");
                    return EXIT_USAGE;
                }
                Err(e) => {
                    eprintln!("internal error: {e}");
                    return EXIT_INTERNAL;
                }
            };
            let text = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report).unwrap();
                    s.push('\n');
                    s
                }
                Format::Csv => census_csv(&report),
            };
            if emit(&text, &out).is_err() {
                eprintln!("error: could not write output");
                return EXIT_INTERNAL;
            }
            let counts_ok = report.count_matches_expected.unwrap_or(true)
                && report.count_within_bound;
            if !counts_ok {
                eprintln!("check failure: census count disagrees with the closed-form count");
                return EXIT_CHECK_FAILURE;
            }
            0
        }
        Command::Verify { grid, starts } => {
            let Some(cells) = parse_grid(&grid) else {
                eprintln!("error: malformed grid '{grid}' (expected e.g. n=3..5,m=3..4)");
                return EXIT_USAGE;
            };
            let cells: Vec<(usize, usize)> = cells
                .into_iter()
                .filter(|&(n, m)| {
                    let keep = !(n == 3 && m == 4) && n >= 3 && m >= 3;
                    if !keep {
                        eprintln!("skipping degenerate or out-of-scope cell (n={n}, m={m})");
                    }
                    keep
                })
                .collect();
            if cells.is_empty() {
                eprintln!("error: grid contains no checkable cells");
                return EXIT_USAGE;
            }
            let mut all_pass = true;
            match verify_rank_one_contractions(&cells, cli.seed) {
                Ok(check) => {
                    println!(
                        "{}: {} (max discrepancy {:.3e})",
                        check.subject,
                        if check.pass { "pass" } else { "FAIL" },
                        check.max_discrepancy
                    );
                    all_pass &= check.pass;
                }
                Err(e) => {
                    eprintln!("internal error: {e}");
                    return EXIT_INTERNAL;
                }
            }
            for &(n, m) in &cells {
                match verify_census_against_multistart(n, m, starts, cli.seed) {
                    Ok(check) => {
                        println!(
                            "{}: {}{}",
                            check.subject,
                            if check.pass { "pass" } else { "FAIL" },
                            if check.notes.is_empty() {
                                String::new()
                            } else {
                                format!(" ({})", check.notes.join("; "))
                            }
                        );
                        all_pass &= check.pass;
                    }
                    Err(e) => {
                        eprintln!("internal error: {e}");
                        return EXIT_INTERNAL;
                    }
                }
            }
            if all_pass {
                0
            } else {
                EXIT_CHECK_FAILURE
            }
        }
        Command::Basin { n, m, runs, shift, out } => {
            let shift = shift.unwrap_or_else(|| default_shift(n, m));
            let frame = match build_frame(n) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let tensor = match SymTensor::from_frame(&frame, m) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let c = match census(n, m) {
                Ok(c) => c,
                Err(StationaryError::DegenerateCombination { .. }) => {
                    eprintln!("error: (n, m) = ({n}, {m}) is degenerate");
                    return EXIT_DEGENERATE;
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            match basin_experiment(&frame, &tensor, &c, runs, cli.seed, shift) {
                Ok(report) => {
                    let mut text = serde_json::to_string_pretty(&report).unwrap();
                    text.push('\n');
                    if emit(&text, &out).is_err() {
                        eprintln!("error: could not write output");
                        return EXIT_INTERNAL;
                    }
                    0
                }
                Err(e) => {
                    eprintln!("internal error: {e}");
                    EXIT_INTERNAL
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}
