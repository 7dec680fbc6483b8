//! `validate`: parse a lattice file and report structural violations.

use std::path::PathBuf;

use clap::Args;
use toric3d::format::parse_lattice_path;
use toric3d::lattice::L1Status;

use crate::CliError;

#[derive(Args)]
pub struct ValidateArgs {
    /// Lattice file to check
    #[arg(long)]
    pub lattice: PathBuf,
}

pub fn run(args: &ValidateArgs) -> Result<(), CliError> {
    let c = parse_lattice_path(&args.lattice)?;
    let report = c.validate();
    println!(
        "lattice={} vertices={} edges={} faces={} volumes={} periodic={} l1={} violations={}",
        args.lattice.display(),
        c.vertex_count(),
        c.edge_count(),
        c.face_count(),
        c.volume_count(),
        c.periodic(),
        match report.l1 {
            L1Status::ByConstruction => "by-construction",
            L1Status::Unverified => "unverified",
        },
        report.violations.len()
    );
    for v in &report.violations {
        println!("violation={v}");
    }
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "{} has {} structural violations",
            args.lattice.display(),
            report.violations.len()
        )))
    }
}
