//! `qadapt` — planner and verifier for quality-adaptive coded caching over
//! degraded broadcast channels.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qadapt_cli::commands::{self, SweepParams};

#[derive(Parser)]
#[command(
    name = "qadapt",
    version,
    about = "Exact-arithmetic planner and verifier for quality-adaptive coded caching",
    long_about = "Plans per-user quality, superposition power exponents, and delivery \
                  times for cache-aided broadcast channels with unequal channel \
                  strengths, entirely in exact rational arithmetic.\n\n\
                  Scenario files are JSON: {\"users\": 6, \"gamma\": \"1/3\", \
                  \"alpha\": [\"1/2\", ...], \"target_time\": \"MAN\" | \"p/q\", \
                  \"allocation\": {\"method\": \"sum_quality\", \"q\": [...]}}.\n\n\
                  Rationals are written \"p/q\" in lowest terms (\"p\" when integral); \
                  exit codes: 0 success, 2 input error, 3 infeasible target, \
                  4 scale refusal."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the full plan: qualities, loads, bottleneck, power exponents,
    /// rates, and per-sub-signal times (JSON on stdout).
    Plan {
        /// Scenario file (JSON).
        scenario: PathBuf,
        /// Allocation method override: baseline, proportional_fairness,
        /// max_min, sum_quality, explicit.
        #[arg(long)]
        method: Option<String>,
        /// Target delivery time override: "MAN" or a rational.
        #[arg(long)]
        target: Option<String>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run only the quality allocation and print its block (JSON).
    Allocate {
        scenario: PathBuf,
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerate the symbolic delivery, write the trace CSV (columns:
    /// sub_signal, sigma, interval_lo, interval_hi), and check decoding and
    /// measured-vs-closed-form loads.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        target: Option<String>,
        /// Trace CSV path (default: trace.csv).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Enumerate even past the million-message guard.
        #[arg(long)]
        force: bool,
    },
    /// Run the property suite (load identity, interval-oracle equivalence,
    /// decoding coverage, optimizer dominance and feasibility, power-plan
    /// invariants) on a scenario and/or seeded random instances.
    Verify {
        /// Optional scenario file checked before the random stream.
        scenario: Option<PathBuf>,
        /// Number of random scenarios.
        #[arg(long, default_value_t = 100)]
        random: usize,
        /// Largest random user count.
        #[arg(long, default_value_t = 12)]
        max_users: usize,
        /// Random seed (runs are reproducible).
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Generate figure data as CSV. Kinds and columns:
    /// two_type_quality (alpha, alpha_decimal, q_star, q_star_decimal);
    /// boost_vs_w (gamma, w, q_star, q_star_decimal, boost, boost_decimal);
    /// compare_methods (user, alpha, then per method: exact and decimal).
    Sweep {
        /// two_type_quality | boost_vs_w | compare_methods
        kind: String,
        /// User count K (two_type_quality, boost_vs_w).
        #[arg(long)]
        users: Option<u64>,
        /// Cache fraction, e.g. 1/10 (two_type_quality).
        #[arg(long)]
        gamma: Option<String>,
        /// Number of degraded users (two_type_quality).
        #[arg(long)]
        w: Option<u64>,
        /// Degraded-user channel strength (boost_vs_w).
        #[arg(long)]
        alpha: Option<String>,
        /// Grid steps for the alpha sweep (default 100).
        #[arg(long)]
        steps: Option<u32>,
        /// Comma-separated cache fractions (boost_vs_w), e.g. 1/20,1/10,1/5.
        #[arg(long)]
        gammas: Option<String>,
        /// Scenario file (compare_methods).
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Target delivery time override (compare_methods).
        #[arg(long)]
        target: Option<String>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();

    let result = match &cli.command {
        Command::Plan {
            scenario,
            method,
            target,
            output,
        } => commands::cmd_plan(
            scenario,
            method.as_deref(),
            target.as_deref(),
            output.as_deref(),
            &mut stdout,
        ),
        Command::Allocate {
            scenario,
            method,
            target,
            output,
        } => commands::cmd_allocate(
            scenario,
            method.as_deref(),
            target.as_deref(),
            output.as_deref(),
            &mut stdout,
        ),
        Command::Simulate {
            scenario,
            method,
            target,
            output,
            force,
        } => commands::cmd_simulate(
            scenario,
            method.as_deref(),
            target.as_deref(),
            output.as_deref(),
            *force,
            &mut stdout,
        ),
        Command::Verify {
            scenario,
            random,
            max_users,
            seed,
        } => commands::cmd_verify(
            scenario.as_deref(),
            *random,
            *max_users,
            *seed,
            &mut stdout,
            &mut stderr,
        ),
        Command::Sweep {
            kind,
            users,
            gamma,
            w,
            alpha,
            steps,
            gammas,
            scenario,
            target,
            output,
        } => {
            let params = SweepParams {
                users: *users,
                gamma: gamma.clone(),
                w: *w,
                alpha: alpha.clone(),
                steps: *steps,
                gammas: gammas.clone(),
                scenario: scenario.clone(),
                target: target.clone(),
            };
            commands::cmd_sweep(kind, &params, output.as_deref(), &mut stdout)
        }
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qadapt: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
