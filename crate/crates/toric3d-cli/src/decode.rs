//! `decode`: run one syndrome through the decoder matching the lattice and
//! report the estimate, its status, and (for planted errors) the residual
//! homology class.

use std::path::PathBuf;

use clap::{ArgGroup, Args, ValueEnum};
use toric3d::decoder::{
    BoundaryDecoder, DecodeOutcome, DecodeStatus, PeriodicConfig, PeriodicDecoder,
    ResidualEstimator,
};
use toric3d::format::load_lattice_path;
use toric3d::oracle::is_stabilizer_support;
use toric3d::stabilizer::{
    classify_zero_syndrome, face_equivalence_classes, logical_basis, syndrome, Homology,
};
use toric3d::{ChainComplex3, EdgeSet, FaceSet};

use crate::util::{json_str, read_id_file};
use crate::CliError;

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Boundary,
    Periodic,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum EstimatorArg {
    /// Pick per lattice
    Auto,
    /// Deficit counters over the logical representatives
    General,
    /// Plane two-coloring, cubic torus only
    Cubic,
}

impl EstimatorArg {
    pub fn label(self) -> &'static str {
        match self {
            EstimatorArg::Auto => "auto",
            EstimatorArg::General => "general",
            EstimatorArg::Cubic => "cubic",
        }
    }
}

impl From<EstimatorArg> for ResidualEstimator {
    fn from(a: EstimatorArg) -> Self {
        match a {
            EstimatorArg::Auto => ResidualEstimator::Auto,
            EstimatorArg::General => ResidualEstimator::General,
            EstimatorArg::Cubic => ResidualEstimator::Cubic,
        }
    }
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["syndrome", "error"])))]
pub struct DecodeArgs {
    /// Lattice file
    #[arg(long)]
    pub lattice: PathBuf,
    /// Syndrome file: one edge id per line, `#` comments
    #[arg(long)]
    pub syndrome: Option<PathBuf>,
    /// Planted error file: one face id per line, `#` comments
    #[arg(long)]
    pub error: Option<PathBuf>,
    /// Decoder to use; defaults to the one matching the lattice
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Residual estimator for periodic decoding
    #[arg(long, value_enum, default_value_t = EstimatorArg::Auto)]
    pub estimator: EstimatorArg,
    /// Extra artificial boundaries to try after a failed projection
    #[arg(long, default_value_t = 1)]
    pub retries: usize,
    /// Exact GF(2) cleanup when the combinatorial decoder gets stuck
    #[arg(long)]
    pub gf2_fallback: bool,
    /// Emit one JSON object instead of key=value lines
    #[arg(long)]
    pub json: bool,
}

fn status_label(s: DecodeStatus) -> &'static str {
    match s {
        DecodeStatus::Success => "success",
        DecodeStatus::PeelingStuck => "peeling-stuck",
        DecodeStatus::ResidualSyndrome => "residual-syndrome",
        DecodeStatus::KleinBottleSuspected => "klein-bottle-suspected",
    }
}

/// Homology class of a zero-syndrome residual. Falls back to the algebraic
/// stabilizer test when the lattice has no usable logical basis.
fn classify(c: &ChainComplex3, residual: &FaceSet) -> String {
    let classes = face_equivalence_classes(c);
    match logical_basis(c, &classes) {
        Ok(basis) => match classify_zero_syndrome(c, &basis, residual) {
            Homology::Trivial => "trivial".into(),
            Homology::Logical(ix) => format!(
                "logical:{}",
                ix.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            ),
        },
        Err(_) => {
            if is_stabilizer_support(c, residual) {
                "trivial".into()
            } else {
                "nontrivial".into()
            }
        }
    }
}

fn print_report(args: &DecodeArgs, s_e: &EdgeSet, out: &DecodeOutcome, class: Option<&str>) {
    let est: Vec<String> = out.estimate.iter().map(|f| f.to_string()).collect();
    if args.json {
        let mut s = String::from("{");
        s += &format!("\"status\":{},", json_str(status_label(out.status)));
        s += &format!("\"syndrome_weight\":{},", s_e.weight());
        s += &format!("\"estimate\":[{}],", est.join(","));
        s += &format!("\"weight\":{},", out.estimate.weight());
        s += &format!(
            "\"waves\":{},\"frozen\":{},\"peeled\":{},\"retries\":{},\"fallback_used\":{}",
            out.stats.waves, out.stats.frozen, out.stats.peeled, out.stats.retries,
            out.stats.fallback_used
        );
        if let Some(cl) = class {
            s += &format!(",\"residual_class\":{}", json_str(cl));
        }
        s += "}";
        println!("{s}");
    } else {
        println!("status={}", status_label(out.status));
        println!("syndrome_weight={}", s_e.weight());
        println!("estimate={}", est.join(" "));
        println!("weight={}", out.estimate.weight());
        println!(
            "waves={} frozen={} peeled={} retries={} fallback_used={}",
            out.stats.waves, out.stats.frozen, out.stats.peeled, out.stats.retries,
            out.stats.fallback_used
        );
        if let Some(cl) = class {
            println!("residual_class={cl}");
        }
    }
}

pub fn run(args: &DecodeArgs) -> Result<(), CliError> {
    let c = load_lattice_path(&args.lattice)?;
    let periodic = match args.mode {
        None => c.periodic(),
        Some(ModeArg::Periodic) => {
            if !c.periodic() {
                return Err(CliError::Input(
                    "periodic mode needs a periodic lattice; this file has boundaries".into(),
                ));
            }
            true
        }
        Some(ModeArg::Boundary) => {
            if c.periodic() {
                return Err(CliError::Input(
                    "boundary mode needs a lattice with boundaries; this file is periodic".into(),
                ));
            }
            false
        }
    };

    let planted: Option<FaceSet> = match &args.error {
        Some(path) => Some(c.face_set(read_id_file(path, c.face_count(), "face")?)),
        None => None,
    };
    let s_e: EdgeSet = match (&args.syndrome, &planted) {
        (Some(path), _) => c.edge_set(read_id_file(path, c.edge_count(), "edge")?),
        (None, Some(err)) => syndrome(&c, err),
        (None, None) => unreachable!("clap enforces the input group"),
    };

    let outcome = if periodic {
        let config = PeriodicConfig {
            estimator: args.estimator.into(),
            retries: args.retries,
            gf2_fallback: args.gf2_fallback,
        };
        PeriodicDecoder::with_config(&c, config)
            .map_err(|e| CliError::Input(e.to_string()))?
            .decode(&s_e)
    } else {
        BoundaryDecoder::new(&c)
            .with_gf2_fallback(args.gf2_fallback)
            .decode(&s_e)
    };

    // The residual class only makes sense once the syndrome is reproduced.
    let class = match (&planted, outcome.status.is_success()) {
        (Some(err), true) => {
            let mut residual = err.clone();
            residual.xor_with(&outcome.estimate);
            Some(classify(&c, &residual))
        }
        _ => None,
    };

    print_report(args, &s_e, &outcome, class.as_deref());
    if outcome.status.is_success() {
        Ok(())
    } else {
        Err(CliError::Decode(format!(
            "decoder gave up: {}",
            status_label(outcome.status)
        )))
    }
}
