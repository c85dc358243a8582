//! `realign` command-line frontend.
//!
//! Exit codes: 0 no entanglement detected (or a sweep finished), 2 entanglement
//! detected by `check`, 1 any error.

pub mod check;
pub mod compare;
pub mod grid;
pub mod search;
pub mod sweep;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::bipartite::ValidateOptions;
use crate::criteria::{LogBase, Settings, DEFAULT_TOL};
use crate::error::{Error, Result};

pub use check::{CheckInput, CheckOutcome};
pub use compare::{CompareFamily, CompareRow, CompareSummary};
pub use grid::Grid;
pub use search::{SearchConfig, SearchMode, SearchSample, SearchStats};
pub use sweep::{Fig1Result, Fig1Summary, Fig2Result, Fig2Summary, SweepRow};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_DETECTED: i32 = 2;

const SWEEP_COLUMNS: &str = "CSV columns:
  a, p          grid coordinates
  n             trace norm of the realigned matrix
  log_n         log N in the chosen base
  f             max(0, log_n)
  ppt_min_eig   smallest eigenvalue of the partial transpose on A
  concurrence   two-qubit family only, else empty
  e_f           entanglement of formation (two-qubit family only, else empty)
  npt_undetected  true when ppt_min_eig < -tol and f == 0";

const SEARCH_COLUMNS: &str = "Per-sample CSV (only with --out):
  index, n, log_n, ppt_min_eig, realignment_detected, ppt_detected";

const COMPARE_COLUMNS: &str = "CSV columns:
  a             family parameter (empty for werner2)
  p             mixing parameter
  n, log_n, n_minus_one, concurrence, e_f";

#[derive(Debug, Parser)]
#[command(
    name = "realign",
    version,
    about = "Realignment entanglement criterion toolkit"
)]
pub struct Cli {
    /// RNG seed for random states and searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Grid over `a` as lo:hi:step (or a single value).
    #[arg(long, global = true)]
    pub grid_a: Option<Grid>,
    /// Grid over `p` as lo:hi:step (or a single value).
    #[arg(long, global = true)]
    pub grid_p: Option<Grid>,
    /// Detection tolerance: entangled when N > 1 + tol or a PPT eigenvalue < -tol.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Base of log N: `2` or `e`.
    #[arg(long, global = true, default_value = "2")]
    pub log_base: LogBase,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report N, log N, PPT and per-criterion verdicts for one state.
    ///
    /// The state is a family spec such as `horodecki3x3 a=0.236`, or a JSON
    /// matrix file `{"m":..,"n":..,"re":[[..]],"im":[[..]]}`.
    Check {
        /// Read the state from a JSON matrix file.
        #[arg(long, conflicts_with = "spec")]
        file: Option<PathBuf>,
        /// Rescale a file matrix whose trace is within 1e-6 of 1.
        #[arg(long)]
        normalize: bool,
        /// Family name followed by key=value parameters, or a file path.
        #[arg(required_unless_present = "file")]
        spec: Vec<String>,
    },
    /// Sweep the mixed Horodecki 3x3 state over a in (0,1), p in [0,1].
    #[command(after_help = SWEEP_COLUMNS)]
    SweepFig1,
    /// Sweep the two-qubit family over a, p in [0,1].
    #[command(after_help = SWEEP_COLUMNS)]
    SweepFig2,
    /// Detection statistics over random states.
    #[command(after_help = SEARCH_COLUMNS)]
    Search {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        /// `mixed` or `separable`.
        #[arg(long, default_value = "mixed")]
        mode: SearchMode,
        /// Rank of mixed samples (default m*n).
        #[arg(long)]
        rank: Option<usize>,
        /// Number of product terms per separable sample (default random 1..=20).
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Tabulate log N, N - 1, concurrence and E_f for a two-qubit family.
    #[command(after_help = COMPARE_COLUMNS)]
    Compare {
        /// `werner2` or `two_by_two_family`.
        family: CompareFamily,
    },
}

const FIG1_A: &str = "0.001:0.999:0.001";
const FIG1_P: &str = "0.99:1:0.0005";
const FIG2_GRID: &str = "0:1:0.02";
const WERNER_P: &str = "-0.3333333333333333:1:0.01";

impl Cli {
    fn settings(&self) -> Result<Settings> {
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::param(
                "tol",
                self.tol,
                "must be finite and non-negative",
            ));
        }
        Ok(Settings {
            tol: self.tol,
            log_base: self.log_base,
        })
    }

    fn grid_a(&self, default: &str) -> Grid {
        self.grid_a
            .unwrap_or_else(|| default.parse().expect("valid default grid"))
    }

    fn grid_p(&self, default: &str) -> Grid {
        self.grid_p
            .unwrap_or_else(|| default.parse().expect("valid default grid"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_CLEAN
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_ERROR
                }
            };
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let settings = cli.settings()?;
    match &cli.command {
        Command::Check {
            file,
            normalize,
            spec,
        } => {
            let input = match file {
                Some(path) => CheckInput::File(path.clone()),
                None => CheckInput::from_tokens(spec)?,
            };
            let state = input.load(ValidateOptions {
                normalize_trace: *normalize,
            })?;
            let outcome = check::check(&state, &settings)?;
            write!(stdout, "{}", outcome.report)?;
            Ok(if outcome.detected {
                EXIT_DETECTED
            } else {
                EXIT_CLEAN
            })
        }
        Command::SweepFig1 => {
            let r = sweep::sweep_fig1(&cli.grid_a(FIG1_A), &cli.grid_p(FIG1_P), &settings)?;
            let s = &r.summary;
            emit(cli, &r.rows, stdout, stderr, |w| {
                writeln!(
                    w,
                    "argmax_a f(a, p=1) = {} (max f = {:.6})",
                    s.argmax_a, s.max_f
                )?;
                writeln!(
                    w,
                    "threshold p at a = {}: {:.6}",
                    s.threshold_a, s.threshold_p
                )
            })?;
            Ok(EXIT_CLEAN)
        }
        Command::SweepFig2 => {
            let r = sweep::sweep_fig2(&cli.grid_a(FIG2_GRID), &cli.grid_p(FIG2_GRID), &settings)?;
            let s = &r.summary;
            emit(cli, &r.rows, stdout, stderr, |w| {
                writeln!(w, "points: {}", s.points)?;
                writeln!(w, "NPT points with f = 0: {}", s.npt_undetected)?;
                writeln!(
                    w,
                    "nonzero f on p = 1/2 or a in {{0,1}}: {}",
                    s.separable_line_violations
                )?;
                writeln!(w, "max (N - 1) - E_f: {:.6e}", s.max_n_minus_one_excess)?;
                writeln!(
                    w,
                    "entangled points with log N > E_f: {}, with log N < E_f: {}",
                    s.log_n_above_e_f, s.log_n_below_e_f
                )
            })?;
            Ok(EXIT_CLEAN)
        }
        Command::Search {
            m,
            n,
            count,
            mode,
            rank,
            terms,
        } => {
            let cfg = SearchConfig {
                m: *m,
                n: *n,
                count: *count,
                seed: cli.seed,
                mode: *mode,
                rank: *rank,
                terms: *terms,
            };
            let (stats, samples) = search::search(&cfg, &settings)?;
            if let Some(path) = &cli.out {
                write_csv(File::create(path)?, &samples)?;
            }
            writeln!(
                stdout,
                "samples: {} ({m} x {n}, {mode}, seed {})",
                stats.count, cli.seed
            )?;
            for (label, k) in [
                ("realignment only", stats.realignment_only),
                ("ppt only", stats.ppt_only),
                ("both", stats.both),
                ("neither", stats.neither),
            ] {
                writeln!(stdout, "{label:<17} {k:>8}  ({:.4})", stats.rate(k))?;
            }
            writeln!(stdout, "max log N         {:.6}", stats.max_log_n)?;
            writeln!(stdout, "anomalies         {:?}", stats.anomalies)?;
            writeln!(stdout, "elapsed           {:.3} s", stats.elapsed_secs)?;
            Ok(EXIT_CLEAN)
        }
        Command::Compare { family } => {
            let p_default = match family {
                CompareFamily::Werner2 => WERNER_P,
                CompareFamily::TwoByTwoFamily => FIG2_GRID,
            };
            let (rows, s) = compare::compare(
                *family,
                &cli.grid_a(FIG2_GRID),
                &cli.grid_p(p_default),
                &settings,
            )?;
            emit(cli, &rows, stdout, stderr, |w| {
                let held = |bad: usize| if bad == 0 { "held" } else { "failed" };
                writeln!(
                    w,
                    "points: {} (entangled: {})",
                    s.points, s.entangled_points
                )?;
                writeln!(
                    w,
                    "log N >= E_f: {} ({} violations)",
                    held(s.log_n_lt_e_f),
                    s.log_n_lt_e_f
                )?;
                writeln!(
                    w,
                    "N - 1 <= E_f: {} ({} violations, max excess {:.6e})",
                    held(s.n_minus_one_gt_e_f),
                    s.n_minus_one_gt_e_f,
                    s.max_n_minus_one_excess
                )?;
                writeln!(
                    w,
                    "max |E_f - (N - 1)| on entangled points: {:.6e}",
                    s.max_abs_e_f_minus_n_minus_one
                )?;
                writeln!(
                    w,
                    "max |C - (N - 1)| on entangled points: {:.6e}",
                    s.max_abs_c_minus_n_minus_one
                )?;
                writeln!(
                    w,
                    "measures vanish together at {}/{} boundary points",
                    s.boundary_consistent, s.boundary_points
                )
            })?;
            Ok(EXIT_CLEAN)
        }
    }
}

/// CSV to `--out` (summary to stdout) or to stdout (summary to stderr).
fn emit<R: Serialize>(
    cli: &Cli,
    rows: &[R],
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    summary: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    match &cli.out {
        Some(path) => {
            write_csv(File::create(path)?, rows)?;
            summary(stdout)?;
        }
        None => {
            write_csv(&mut *stdout, rows)?;
            summary(stderr)?;
        }
    }
    Ok(())
}

pub fn write_csv<W: Write, R: Serialize>(w: W, rows: &[R]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["realign"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn check_exit_codes() {
        assert_eq!(run_str(&["check", "tiles_upb"]).0, EXIT_DETECTED);
        assert_eq!(run_str(&["check", "max_mixed", "d=3"]).0, EXIT_CLEAN);
        assert_eq!(run_str(&["check", "max_mixed", "d=oops"]).0, EXIT_ERROR);
        assert_eq!(
            run_str(&["check", "--file", "/nonexistent/x.json"]).0,
            EXIT_ERROR
        );
        assert_eq!(run_str(&["bogus"]).0, EXIT_ERROR);
        assert_eq!(
            run_str(&["--tol", "-1", "check", "tiles_upb"]).0,
            EXIT_ERROR
        );
    }

    #[test]
    fn help_is_clean_and_documents_columns() {
        let (code, out, _) = run_str(&["sweep-fig2", "--help"]);
        assert_eq!(code, EXIT_CLEAN);
        assert!(out.contains("npt_undetected"));
    }

    #[test]
    fn sweep_csv_has_header() {
        let (code, out, err) =
            run_str(&["--grid-a", "0:1:0.5", "--grid-p", "0:1:0.5", "sweep-fig2"]);
        assert_eq!(code, EXIT_CLEAN, "{err}");
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "a,p,n,log_n,f,ppt_min_eig,concurrence,e_f,npt_undetected"
        );
        assert_eq!(lines.count(), 9);
        assert!(err.contains("points: 9"));
    }

    #[test]
    fn log_base_flag() {
        let (_, two, _) = run_str(&["check", "max_mixed", "d=2"]);
        let (_, e, _) = run_str(&["--log-base", "e", "check", "max_mixed", "d=2"]);
        assert!(two.contains("log2 N         -1.000000000000"), "{two}");
        assert!(e.contains("ln N           -0.693147180560"), "{e}");
    }
}
