use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use d4ram::breaks::BreakKind;
use d4ram::cli::{self, InputArgs, Output};
use d4ram::deform::Deformation;
use d4ram::input::parse_triple;
use d4ram::{Error, Result};

/// Ramification of D4-extensions in characteristic 2.
#[derive(Parser)]
#[command(name = "d4ram", version)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Ext {
    /// Extension file with `key = value` lines (field, F, G, H, precision).
    spec: Option<PathBuf>,
    #[arg(long = "F", value_name = "SERIES", allow_hyphen_values = true)]
    first: Option<String>,
    #[arg(long = "G", value_name = "SERIES", allow_hyphen_values = true)]
    second: Option<String>,
    #[arg(long = "H", value_name = "SERIES", allow_hyphen_values = true)]
    top: Option<String>,
    /// Coefficient field, e.g. GF(4).
    #[arg(long)]
    field: Option<String>,
    /// Series precision; overrides the file and D4RAM_PRECISION.
    #[arg(long)]
    precision: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Auto,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(Subcommand)]
enum Command {
    /// Galois group of the closure of K[q, r].
    Classify(Ext),
    /// Equivalent standard-form triple with f <= g.
    Normalize(Ext),
    /// Upper and lower breaks, type and different.
    Breaks(Ext),
    /// The eight triples describing the same extension.
    Orbit(Ext),
    /// Intermediate fields with their generators.
    Lattice(Ext),
    /// A triple realizing given breaks.
    Witness {
        /// Break triple such as 1,3,4.
        #[arg(allow_hyphen_values = true)]
        breaks: String,
        /// Read the triple as lower breaks.
        #[arg(long)]
        lower: bool,
    },
    /// Deform and verify both branch fibers.
    Deform {
        #[command(flatten)]
        ext: Ext,
        #[arg(long, value_enum, default_value = "auto")]
        which: Which,
    },
    /// Chain of deformations down to a supersimple extension.
    Plan {
        #[command(flatten)]
        ext: Ext,
        /// Verify each step's fibers on concrete triples.
        #[arg(long)]
        deep: bool,
    },
    /// Filtration computed in the explicit degree-8 tower.
    Oracle(Ext),
    /// All realizable upper break triples up to a bound.
    Enumerate {
        #[arg(long = "max-u3", default_value_t = 15)]
        max_u3: i64,
    },
    /// Oracle against closed form on small profiles.
    Selftest,
}

fn spec_of(e: &Ext) -> Result<d4ram::input::ExtensionSpec> {
    cli::load(&InputArgs {
        file: e.spec.as_deref(),
        first: e.first.as_deref(),
        second: e.second.as_deref(),
        top: e.top.as_deref(),
        field: e.field.as_deref(),
        precision: e.precision,
    })
}

fn run(command: &Command) -> Result<Output> {
    match command {
        Command::Classify(e) => cli::classify(&spec_of(e)?),
        Command::Normalize(e) => cli::normalize(&spec_of(e)?),
        Command::Breaks(e) => cli::breaks(&spec_of(e)?),
        Command::Orbit(e) => cli::orbit(&spec_of(e)?),
        Command::Lattice(e) => cli::lattice(&spec_of(e)?),
        Command::Witness { breaks, lower } => {
            let kind = if *lower { BreakKind::Lower } else { BreakKind::Upper };
            cli::witness(parse_triple(breaks)?, kind)
        }
        Command::Deform { ext, which } => {
            let which = match which {
                Which::Auto => None,
                Which::One => Some(Deformation::First),
                Which::Two => Some(Deformation::Second),
                Which::Three => Some(Deformation::Third),
            };
            cli::deform(&spec_of(ext)?, which)
        }
        Command::Plan { ext, deep } => cli::plan(&spec_of(ext)?, *deep),
        Command::Oracle(e) => cli::oracle(&spec_of(e)?),
        Command::Enumerate { max_u3 } => cli::enumerate(*max_u3),
        Command::Selftest => cli::selftest(),
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(Error::Parse(String::new()).exit_code() as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(&args.command) {
        Ok(out) => {
            if args.json {
                println!("{}", out.report.to_json());
            } else {
                println!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
