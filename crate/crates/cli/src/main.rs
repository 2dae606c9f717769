mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sharpbound", version, about = "Sparse domination and sharp weighted-bound experiments on the torus")]
struct Cli {
    /// Output format written to stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    out: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Range {
    Lower,
    Upper,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorKind {
    Hilbert,
    Identity,
    Zero,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeKind {
    /// `e^{-tL}`
    Heat,
    /// `Q_t^(N)`
    Q,
}

#[derive(Subcommand)]
enum Command {
    /// Derived exponents of a triple `(p0, q0, p)`; `q0` may be `inf`.
    Exponents {
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        q0: f64,
        #[arg(long)]
        p: f64,
    },
    /// A_p and optionally RH_q characteristics of a weight.
    Characteristic {
        /// `power:a`, `const`, or `sampled:FILE` with a CSV column `value`.
        #[arg(long)]
        weight: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        rh: Option<f64>,
        /// Deepest dyadic level in the interval family.
        #[arg(long, default_value_t = 30)]
        depth: i32,
    },
    /// Residual of the truncated reproducing formula on a random band-limited input.
    Calderon {
        #[arg(long, default_value_t = 32)]
        modes: usize,
        #[arg(long = "N", default_value_t = 3)]
        order: u32,
        #[arg(long, default_value_t = 1e-8)]
        tmin: f64,
        #[arg(long, default_value_t = 1e2)]
        tmax: f64,
        /// Quadrature points per decade of `t`.
        #[arg(long, default_value_t = 50)]
        quad: usize,
        /// Grid depth `m` for `2^m` cells.
        #[arg(long, default_value_t = 10)]
        grid: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write the input as CSV `x,value`.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Off-diagonal `L^p_in -> L^q_out` norms between separated intervals.
    Odprobe {
        #[arg(long, value_enum, default_value_t = ProbeKind::Heat)]
        operator: ProbeKind,
        #[arg(long, default_value_t = 1.0 / 1600.0)]
        t: f64,
        #[arg(long = "N", default_value_t = 3)]
        order: u32,
        #[arg(long, default_value_t = 0.2)]
        centre: f64,
        /// Largest `d²/t`; gaps run over `1..=gap_max`.
        #[arg(long, default_value_t = 25)]
        gap_max: u32,
        #[arg(long, default_value_t = 1.0)]
        p_in: f64,
        #[arg(long, default_value_t = 8.0)]
        q_out: f64,
        #[arg(long, default_value_t = 11)]
        grid: u32,
    },
    /// Stopping-time sparse domination over a random corpus.
    Dominate {
        #[arg(long, value_enum, default_value_t = OperatorKind::Hilbert)]
        operator: OperatorKind,
        #[arg(long, default_value_t = 12)]
        grid: u32,
        /// Threshold, or `auto` to calibrate on the corpus.
        #[arg(long, default_value = "auto")]
        eta: String,
        #[arg(long, default_value_t = 1.0)]
        p0: f64,
        #[arg(long, default_value_t = 8.0)]
        q0: f64,
        #[arg(long = "N", default_value_t = 3)]
        order: u32,
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Largest allowed max/min ratio of per-pair constants.
        #[arg(long, default_value_t = 10.0)]
        spread: f64,
        /// Directory for `f_<i>.csv`, `g_<i>.csv` exports.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Both sides of the weighted bound on the extremal power family.
    Sharpness {
        #[arg(long, value_enum)]
        range: Range,
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        q0: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 2f64.powi(-14))]
        eps_min: f64,
        #[arg(long, default_value_t = 2f64.powi(-4))]
        eps_max: f64,
        #[arg(long, default_value_t = 0.05)]
        slope_tol: f64,
        #[arg(long, default_value_t = 4.0)]
        max_spread: f64,
    },
    /// Sparse-form bound against the characteristic over the lower-range weight family.
    ScanBound {
        #[arg(long, default_value_t = 1.0)]
        p0: f64,
        #[arg(long, default_value_t = 4.0)]
        q0: f64,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 2f64.powi(-14))]
        eps_min: f64,
        #[arg(long, default_value_t = 2f64.powi(-4))]
        eps_max: f64,
        /// `canonical` or `finite:N` for `[0, 2^-n)`, `n <= N`.
        #[arg(long, default_value = "canonical")]
        collection: String,
        /// The competing power is `alpha - delta`.
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 4.0)]
        max_spread: f64,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let report = match cli.command {
        Command::Exponents { p0, q0, p } => commands::exponents(p0, q0, p)?,
        Command::Characteristic { weight, p, rh, depth } => commands::characteristic(&weight, p, rh, depth)?,
        Command::Calderon {
            modes,
            order,
            tmin,
            tmax,
            quad,
            grid,
            seed,
            tol,
            export,
        } => commands::calderon(commands::CalderonArgs {
            modes,
            order,
            tmin,
            tmax,
            quad,
            grid,
            seed,
            tol,
            export,
        })?,
        Command::Odprobe {
            operator,
            t,
            order,
            centre,
            gap_max,
            p_in,
            q_out,
            grid,
        } => commands::odprobe(operator, t, order, centre, gap_max, p_in, q_out, grid)?,
        Command::Dominate {
            operator,
            grid,
            eta,
            p0,
            q0,
            order,
            pairs,
            seed,
            spread,
            export,
        } => commands::dominate(commands::DominateArgs {
            operator,
            grid,
            eta,
            p0,
            q0,
            order,
            pairs,
            seed,
            spread,
            export,
        })?,
        Command::Sharpness {
            range,
            p0,
            q0,
            p,
            eps_min,
            eps_max,
            slope_tol,
            max_spread,
        } => commands::sharpness(range, p0, q0, p, eps_min, eps_max, slope_tol, max_spread)?,
        Command::ScanBound {
            p0,
            q0,
            p,
            eps_min,
            eps_max,
            collection,
            delta,
            max_spread,
        } => commands::scan_bound(p0, q0, p, eps_min, eps_max, &collection, delta, max_spread)?,
    };
    output::emit(&report, cli.out)?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
