//! Command line front end: lattice generation and validation, single-shot
//! decoding, and Monte Carlo sweeps over (lattice, error rate) grids.
//!
//! Exit codes: 0 on success, 1 for usage or input problems, 2 when a
//! single-shot decode gives up on its syndrome.

mod decode;
mod gen;
mod simulate;
mod util;
mod validate;

use clap::{Parser, Subcommand};

const EXIT_INPUT: i32 = 1;
const EXIT_DECODE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "toric3d",
    version,
    about = "Decode and benchmark bit-flip errors on 3D toric codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a built-in lattice to a file
    GenLattice(gen::GenLatticeArgs),
    /// Check the structural invariants of a lattice file
    Validate(validate::ValidateArgs),
    /// Decode one syndrome or planted error
    Decode(decode::DecodeArgs),
    /// Estimate logical error rates over a parameter grid
    Simulate(simulate::SimulateArgs),
}

/// Command failures, split by exit code.
#[derive(Debug)]
enum CliError {
    /// Bad flags, unreadable or malformed files, out-of-range ids,
    /// mode/lattice mismatches.
    Input(String),
    /// The decoder reported failure on a single-shot decode.
    Decode(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Decode(_) => EXIT_DECODE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Decode(m) => f.write_str(m),
        }
    }
}

impl From<toric3d::lattice::LatticeError> for CliError {
    fn from(e: toric3d::lattice::LatticeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here; only real usage errors get
            // the input-error exit code.
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::GenLattice(args) => gen::run(&args),
        Command::Validate(args) => validate::run(&args),
        Command::Decode(args) => decode::run(&args),
        Command::Simulate(args) => simulate::run(&args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
