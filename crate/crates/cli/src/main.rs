//! `signeq`: runs the verification sweeps and writes CSV/JSON reports and
//! SVG charts.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! usage or I/O errors.

mod chart;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use signeq::alternating::{Interval, TestFunction};
use signeq::contour::CenterMode;
use signeq::sphere::Azimuthal;

use commands::Checks;
use config::{parse_angles, parse_degree_list, parse_interval, parse_window, Format, RunConfig};

#[derive(Parser)]
#[command(version, about = "Zeros of Legendre polynomials: bounds, alternating sums, contour and sphere checks")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "SIGNEQ_OUT", default_value = "signeq-out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for sampled diagnostics.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DegreeArgs {
    /// Comma-separated degrees; `a-b` is an inclusive range.
    #[arg(long, value_parser = parse_degrees)]
    degrees: DegreeList,
}

#[derive(Clone)]
struct DegreeList(Vec<usize>);

fn parse_degrees(s: &str) -> Result<DegreeList, String> {
    parse_degree_list(s).map(DegreeList).map_err(|e| format!("{e:#}"))
}

#[derive(Clone)]
struct Angles(Vec<f64>);

fn parse_theta_list(s: &str) -> Result<Angles, String> {
    parse_angles(s).map(Angles).map_err(|e| format!("{e:#}"))
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Root,
    Guess,
}

#[derive(Subcommand)]
enum Command {
    /// Roots of P_n(cos θ) and their classical brackets.
    Roots {
        #[command(flatten)]
        d: DegreeArgs,
    },
    /// Alternating sums of f over the roots in an interval.
    SignSum {
        #[command(flatten)]
        d: DegreeArgs,
        /// `A,B` in radians (`pi`, `pi-x`, `pi/k` allowed); default `[0.05, pi - 0.05]`.
        #[arg(long, value_parser = parse_interval)]
        interval: Option<Interval<f64>>,
        /// one, identity, cos, sin, exp or poly.
        #[arg(long, default_value = "identity", value_parser = parse_function)]
        function: TestFunction,
        /// Fail unless the fitted slope lies in `LO,HI`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        expect_slope: Option<(f64, f64)>,
    },
    /// Argument-principle integral over alternating circles around the roots.
    Contour {
        #[command(flatten)]
        d: DegreeArgs,
        #[arg(long, value_parser = parse_interval)]
        interval: Option<Interval<f64>>,
        #[arg(long, value_enum, default_value_t = Mode::Root)]
        mode: Mode,
        /// Circle radius (default π/(2(2n+1))).
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Laplace asymptotic error profiles and rates.
    Laplace {
        #[command(flatten)]
        d: DegreeArgs,
        #[arg(long, default_value_t = 0.3)]
        epsilon: f64,
        /// Also compare the double-integral remainder with the direct error.
        #[arg(long)]
        stieltjes: bool,
        /// Angles for the remainder comparison (default pi/4, pi/3, pi/2 - 0.1).
        #[arg(long, value_parser = parse_theta_list)]
        thetas: Option<Angles>,
    },
    /// Positive and negative areas on the sphere.
    Sphere {
        #[command(flatten)]
        d: DegreeArgs,
        /// Azimuthal order.
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// cosine or sine (m >= 1 only).
        #[arg(long, value_parser = parse_azimuthal)]
        azimuthal: Option<Azimuthal>,
        /// Add a Monte Carlo estimate from this many random points (m = 0).
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Alternating cosine sum over the grid nodes, against its limit -1.
    Riemann {
        #[command(flatten)]
        d: DegreeArgs,
    },
}

fn parse_function(s: &str) -> Result<TestFunction, String> {
    s.parse().map_err(|e: signeq::Error| e.to_string())
}

fn parse_azimuthal(s: &str) -> Result<Azimuthal, String> {
    s.parse().map_err(|e: signeq::Error| e.to_string())
}

fn flatten(d: DegreeArgs) -> Vec<usize> {
    d.degrees.0
}

fn default_interval() -> Interval<f64> {
    Interval::symmetric(0.05).expect("valid")
}

fn run(cli: Cli) -> Result<Checks> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()?;
    }
    let cfg = RunConfig {
        out: cli.out,
        format: cli.format,
        seed: cli.seed,
    };
    cfg.prepare()?;
    let mut checks = Checks::default();
    match cli.command {
        Command::Roots { d } => commands::roots(&cfg, &flatten(d), &mut checks)?,
        Command::SignSum { d, interval, function, expect_slope } => commands::sign_sum(
            &cfg,
            &flatten(d),
            interval.unwrap_or_else(default_interval),
            function,
            expect_slope,
            &mut checks,
        )?,
        Command::Contour { d, interval, mode, radius } => {
            let mode = match mode {
                Mode::Root => CenterMode::RootCentered,
                Mode::Guess => CenterMode::GuessCentered,
            };
            commands::contour(&cfg, &flatten(d), interval.unwrap_or_else(default_interval), mode, radius, &mut checks)?
        }
        Command::Laplace { d, epsilon, stieltjes, thetas } => commands::laplace(
            &cfg,
            &flatten(d),
            epsilon,
            stieltjes,
            &thetas.map_or_else(commands::default_thetas, |a| a.0),
            &mut checks,
        )?,
        Command::Sphere { d, m, azimuthal, samples } => {
            commands::sphere(&cfg, &flatten(d), m, azimuthal, samples, &mut checks)?
        }
        Command::Riemann { d } => commands::riemann(&cfg, &flatten(d), &mut checks)?,
    }
    Ok(checks)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(checks) => {
            checks.print();
            if checks.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
