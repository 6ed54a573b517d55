//! Command-line front end. Every subcommand builds one [`Report`] and
//! writes it as JSON or CSV.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use turan_core::grid::Grid;

use crate::certify::{DEFAULT_POINTS, DEFAULT_SEED};
use crate::exec::Pool;
use crate::report::{Keep, Report};
use crate::runs::{self, OrderScan, RunError};
use crate::suites;

/// Usage and domain errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "turan",
    version,
    about = "Bessel function products, Turán-type inequalities and their checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub out: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; defaults to TURAN_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Which verdict rows to keep in the output.
    #[arg(long, global = true, value_enum, default_value_t = VerdictRows::All)]
    pub verdicts: VerdictRows,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerdictRows {
    All,
    Failing,
    None,
}

impl From<VerdictRows> for Keep {
    fn from(v: VerdictRows) -> Keep {
        match v {
            VerdictRows::All => Keep::All,
            VerdictRows::Failing => Keep::Failing,
            VerdictRows::None => Keep::None,
        }
    }
}

fn grid(s: &str) -> Result<Grid, String> {
    s.parse::<Grid>().map_err(|e| e.to_string())
}

fn seed(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.parse(),
    }
    .map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Values of I, K, P, their scaled forms, derivatives, J or Y.
    Eval {
        /// I, K, P, scaledI, scaledK, dI, dK, J or Y.
        #[arg(long, default_value = "P")]
        kind: String,
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        nu: Grid,
        #[arg(long, value_parser = grid)]
        u: Grid,
        /// Add extended-precision reference values (I, K, P only).
        #[arg(long)]
        oracle: bool,
    },
    /// Compare a seeded random sample against the oracle.
    Certify {
        #[arg(long, value_parser = seed, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
    },
    /// Sandwich bounds for a ratio or logarithmic derivative, or the
    /// equivalence audit across all four families.
    Bounds {
        /// I_ratio, K_ratio, I_logderiv, K_logderiv.
        #[arg(long, required_unless_present = "audit")]
        target: Option<String>,
        #[arg(long)]
        audit: bool,
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        nu: Grid,
        #[arg(long, value_parser = grid)]
        u: Grid,
    },
    /// Scan one Turán-type inequality over a grid.
    Turan {
        /// t1 .. t7 or phi.
        #[arg(long)]
        label: String,
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        nu: Grid,
        #[arg(long, value_parser = grid)]
        u: Grid,
    },
    /// Search a box for counterexamples to one inequality.
    Hunt {
        #[arg(long)]
        label: String,
        /// Range `lo:hi`; only the ends are used.
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        nu: Grid,
        #[arg(long, value_parser = grid)]
        u: Grid,
        /// Maximum number of coarse grid points.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Values and inequalities for the product `P = I K`.
    Product {
        /// value, h1, h1-convex, h2, h2-concavity, h5, h6, order, u-shape,
        /// half-order or integral.
        #[arg(long, default_value = "value")]
        check: String,
        #[arg(long, value_parser = grid, allow_hyphen_values = true, default_value = "0.5")]
        nu: Grid,
        #[arg(long, value_parser = grid)]
        u: Grid,
        #[arg(long, default_value_t = 50)]
        n_max: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Re-evaluate indeterminate verdicts with the oracle.
        #[arg(long)]
        resolve: bool,
    },
    /// Log-convexity, monotonicity and complete monotonicity in the order.
    OrderScan {
        /// theorem1, logconvex, kratio or cm.
        #[arg(long, default_value = "theorem1")]
        check: String,
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        nu: Grid,
        #[arg(long, value_parser = grid)]
        u: Grid,
        /// Order function for logconvex.
        #[arg(long)]
        kind: Option<String>,
        /// a, b, c or d for cm.
        #[arg(long)]
        fact: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Second argument for fact d; defaults to u.
        #[arg(long)]
        v: Option<f64>,
        /// Shift for kratio.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        resolve: bool,
    },
    /// Integral representations against direct evaluation.
    IntegralCheck {
        /// gamma-ratio, nicholson, phi or product.
        #[arg(long)]
        identity: String,
        #[arg(long, value_parser = grid, allow_hyphen_values = true)]
        nu: Grid,
        #[arg(long, value_parser = grid)]
        u: Grid,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Midpoint log-convexity of the product in the order, with oracle
    /// re-checks of persistent failures.
    Conjecture {
        #[arg(long, value_parser = grid, allow_hyphen_values = true, default_value = "(-0.9:20:0.0625")]
        nu: Grid,
        #[arg(long, value_parser = grid, default_value = "0.1:10:log1")]
        u: Grid,
        #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.125,0.03125")]
        h: Vec<f64>,
    },
    /// Every acceptance suite, merged into one report.
    All {
        #[arg(long, value_parser = seed, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
    },
}

fn build(cmd: Command, pool: &Pool) -> Result<Report, RunError> {
    match cmd {
        Command::Eval { kind, nu, u, oracle } => runs::eval(&kind, &nu, &u, oracle),
        Command::Certify { seed, points } => Ok(runs::certify(pool, seed, points)),
        Command::Bounds { target, audit, nu, u } => {
            if audit {
                runs::audit(pool, &nu, &u)
            } else {
                let t = runs::parse_target(target.as_deref().unwrap_or_default())?;
                runs::bounds(pool, t, &nu, &u)
            }
        }
        Command::Turan { label, nu, u } => runs::turan_scan(pool, runs::parse_label(&label)?, &nu, &u),
        Command::Hunt { label, nu, u, budget } => {
            runs::hunt(pool, runs::parse_label(&label)?, (nu.lo, nu.hi), (u.lo, u.hi), budget)
        }
        Command::Product {
            check,
            nu,
            u,
            n_max,
            tol,
            resolve,
        } => runs::product_checks(&check, &nu, &u, n_max, tol, resolve),
        Command::OrderScan {
            check,
            nu,
            u,
            kind,
            fact,
            h,
            max_k,
            alpha,
            n,
            v,
            a,
            resolve,
        } => {
            let s = OrderScan {
                check,
                kind,
                fact,
                h,
                max_k,
                alpha,
                n,
                v,
                a,
                resolve,
            };
            runs::order_scan(pool, &s, &nu, &u)
        }
        Command::IntegralCheck { identity, nu, u, tol } => runs::integral_check(&identity, &nu, &u, tol),
        Command::Conjecture { nu, u, h } => runs::conjecture(pool, &nu, &u, &h),
        Command::All { seed, points } => {
            let all = suites::run_all(pool, seed, points)?;
            for s in &all {
                eprintln!("{}", s.line());
            }
            Ok(suites::combined(all))
        }
    }
}

fn write(report: &Report, out: &OutputArgs) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &out.output {
        Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match out.format {
        Format::Json => sink.write_all(report.to_json().as_bytes())?,
        Format::Csv => report.write_csv(&mut sink).map_err(io::Error::other)?,
    }
    sink.flush()
}

/// Runs one parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let start = Instant::now();
    let pool = match Pool::new(cli.out.threads) {
        Ok(p) => p,
        Err(e) => {
            eprintln!(
                "error: cannot start {} worker threads: {e}",
                cli.out.threads.unwrap_or(0)
            );
            return EXIT_USAGE;
        }
    };
    let mut report = match build(cli.command, &pool) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    report.retain(cli.out.verdicts.into());
    report.wall_time = start.elapsed().as_secs_f64();
    if let Err(e) = write(&report, &cli.out) {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    report.exit_code()
}
