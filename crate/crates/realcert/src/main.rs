//! `realcert`: batch front end for the certified real-analysis kernels.

mod commands;
mod grammar;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "realcert", version, about = "Certified enclosures and convergence verdicts over exact rationals")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Decimal digits shown for enclosure endpoints (the target for `constants`).
    #[arg(long, global = true)]
    pub digits: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a named series family.
    Converge(ConvergeArgs),
    /// Enclose a definite or improper integral.
    Integrate(IntegrateArgs),
    /// Enclose e, ln2, pi-over-4 or gamma.
    Constants(ConstantsArgs),
    /// Taylor polynomial of sin, cos or exp with a Lagrange remainder enclosure.
    Taylor(TaylorArgs),
    /// Bernstein approximant of a function on an interval.
    Bernstein(BernsteinArgs),
    /// Rearrange a conditionally convergent series.
    Rearrange(RearrangeArgs),
    /// Sample a function on a grid.
    Sample(SampleArgs),
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    /// geometric, p-series, alt-p-series, alt-harmonic, newton-gregory,
    /// factorial-power, exp-series or power-ratio.
    pub family: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub horizon: u64,
    /// Comma-separated tests: geometric, p-series, nth-term, alternating, ratio, root, cauchy.
    #[arg(long)]
    pub policy: Option<String>,
    /// Margin for the ratio and root windows.
    #[arg(long, default_value = "1/100")]
    pub delta: String,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    /// poly:<polynomial>, gallery:<name> or improper:x^-<p>.
    pub function: String,
    #[arg(allow_hyphen_values = true)]
    pub a: String,
    /// Upper limit; `inf` selects the improper mode.
    #[arg(allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, default_value = "1e-6")]
    pub width: String,
    #[arg(long)]
    pub improper: bool,
    /// Doubling steps in improper mode.
    #[arg(long, default_value_t = 12)]
    pub steps: u32,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    /// e, ln2, pi-over-4 or gamma.
    pub name: String,
    #[arg(long)]
    pub horizon: Option<u64>,
}

#[derive(Args, Debug)]
pub struct TaylorArgs {
    /// sin, cos or exp.
    pub function: String,
    #[arg(long)]
    pub order: u32,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub at: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
}

#[derive(Args, Debug)]
pub struct BernsteinArgs {
    /// poly:<polynomial> or gallery:<name> with exact values at rationals.
    pub function: String,
    #[arg(long)]
    pub degree: u32,
    /// Evaluate the approximant here.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Grid cells for the deviation scan (default 2n).
    #[arg(long)]
    pub grid: Option<u64>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub to: String,
    /// With --eps, report the bound eps/2 + M/(2 delta^2 n).
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
}

#[derive(Args, Debug)]
pub struct RearrangeArgs {
    /// alt-harmonic or alt-p-series.
    pub series: String,
    #[arg(long)]
    pub p: Option<String>,
    /// `p,q`: p positive terms, then q negative ones.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Greedy target value.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    /// Number of terms consumed.
    #[arg(long, default_value_t = 999)]
    pub steps: usize,
    /// Partial sums kept in the trace.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// poly:<polynomial> or gallery:<name>.
    pub function: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub to: String,
    #[arg(long, default_value_t = 101)]
    pub points: u64,
    /// Emit CSV rows `x,value[,layer]`.
    #[arg(long)]
    pub csv: bool,
    /// Sample the degree-n Bernstein approximant instead.
    #[arg(long)]
    pub bernstein: Option<u32>,
    /// For the sawtooth: one row per partial sum S_0 … S_K.
    #[arg(long)]
    pub layers: Option<u32>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = std::io::stdout().lock();
    match commands::run(&cli) {
        Ok(commands::Output::Report(r)) => {
            let text = if cli.json { r.to_json() + "\n" } else { r.to_table() };
            let _ = out.write_all(text.as_bytes());
            ExitCode::from(r.exit_code())
        }
        Ok(commands::Output::Csv(text)) => {
            let _ = out.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("realcert: {e}");
            ExitCode::from(1)
        }
    }
}
