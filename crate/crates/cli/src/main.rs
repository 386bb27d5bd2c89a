mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};


#[derive(Parser, Debug)]
#[command(name = "periodforge", version, about = "Exact horizontal germs, contact systems and dimension bounds")]
pub struct Cli {
    /// Write the JSON report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampling; recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Run without the thread pool.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    #[command(subcommand)]
    Hodge(HodgeCmd),
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    #[command(subcommand)]
    Contact(ContactCmd),
    #[command(subcommand)]
    Germ(GermCmd),
    #[command(subcommand)]
    Bounds(BoundsCmd),
    #[command(subcommand)]
    Rigidity(RigidityCmd),
}

#[derive(Args, Debug, Clone)]
pub struct HodgeArg {
    /// Hodge numbers as inline JSON or a path, e.g. '{"weight":2,"h":[2,4,2]}'.
    #[arg(long)]
    pub hodge: String,
}

#[derive(Args, Debug, Clone)]
pub struct TruncationArg {
    /// Truncation degree; falls back to PERIODFORGE_TRUNCATION, then 4.
    #[arg(long)]
    pub truncation: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum HodgeCmd {
    /// Validate Hodge numbers.
    Validate(HodgeArg),
    /// Dimensions of the domain and of the horizontal coordinates.
    Dim(HodgeArg),
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    /// Bracket of two elements given as block-matrix JSON.
    Bracket {
        #[command(flatten)]
        hodge: HodgeArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Group element exp(X).
    Exp {
        #[command(flatten)]
        hodge: HodgeArg,
        #[arg(long)]
        x: String,
    },
    /// Check that a basis spans an abelian subalgebra of horizontal vectors.
    CheckElement {
        #[arg(long)]
        element: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ContactCmd {
    /// Legendrian chart from a generating function.
    Arnold {
        #[arg(long)]
        n: u32,
        /// Generating function in the free coordinates.
        #[arg(long)]
        f: String,
        /// Indices whose x-coordinate is free, comma separated.
        #[arg(long, value_delimiter = ',')]
        i: Vec<u32>,
        /// Indices whose y-coordinate is free, comma separated.
        #[arg(long, value_delimiter = ',')]
        j: Vec<u32>,
    },
    /// Pull back the contact form along a chart.
    Verify {
        #[arg(long)]
        chart: String,
    },
    /// Generators of the coupled contact system.
    Generators {
        #[command(flatten)]
        hodge: HodgeArg,
        #[arg(long, value_enum, default_value_t = SystemKind::Reduced)]
        system: SystemKind,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SystemKind {
    Reduced,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum GermCmd {
    /// Chart of exp(Σ x_a e_a) for an integral element.
    ExpConstruct {
        #[arg(long)]
        element: String,
        #[command(flatten)]
        truncation: TruncationArg,
    },
    /// Check horizontality of a chart.
    Verify {
        #[arg(long)]
        chart: String,
    },
    /// Extend a solution of the reduced system to a full chart.
    Extend {
        #[arg(long)]
        chart: String,
    },
    /// Member of the even-weight flexible family.
    Flex {
        #[command(flatten)]
        hodge: HodgeArg,
        /// Last-row functions of x1 (default: all x1).
        #[arg(long = "f")]
        f: Vec<String>,
        #[command(flatten)]
        truncation: TruncationArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Printed,
    Proof,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCmd {
    /// Closed-form q values.
    Q {
        #[command(flatten)]
        hodge: HodgeArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Printed)]
        mode: ModeArg,
    },
    /// Box-constrained quadratic programs of the bound.
    Qp {
        #[command(flatten)]
        hodge: HodgeArg,
    },
    /// Largest abelian coordinate patterns.
    Search {
        #[command(flatten)]
        hodge: HodgeArg,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, default_value_t = 16)]
        keep: usize,
    },
    /// Printed bound, proof bound and witness over all small Hodge vectors.
    Sweep {
        #[arg(long, default_value_t = 5)]
        max_weight: usize,
        #[arg(long, default_value_t = 3)]
        max_h: usize,
        #[arg(long, default_value_t = 128)]
        budget: usize,
        /// Random commuting families to probe against the proof bound.
        #[arg(long, default_value_t = 0)]
        families: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum RigidityCmd {
    /// Jet prolongation through a coordinate pattern.
    Probe {
        #[command(flatten)]
        hodge: HodgeArg,
        /// Pattern JSON: {"hodge": ..., "entries": ["Y[1,0][1,1]", ...]}.
        #[arg(long, required_unless_present = "flexible", conflicts_with = "flexible")]
        pattern: Option<String>,
        /// Integral element (default: the pattern's coordinate vectors).
        #[arg(long, conflicts_with = "flexible")]
        element: Option<String>,
        /// Use the maximal element of the even-weight flexible family.
        #[arg(long)]
        flexible: bool,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Uniqueness of maximal coordinate patterns, with sampled orbit evidence.
    Scan {
        #[command(flatten)]
        hodge: HodgeArg,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, default_value_t = 32)]
        keep: usize,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Compare two charts after graph normalization.
    Compare { a: String, b: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli).and_then(|(report, failure)| {
        report.write(cli.out.as_deref())?;
        Ok(failure)
    }) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("check failed: {}", msg);
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code())
        }
    }
}
