//! `simulate`: Monte Carlo estimation of logical error rates over a grid of
//! lattices and physical error rates, reported as CSV plus a JSON summary.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use toric3d::decoder::PeriodicConfig;
use toric3d::format::load_lattice_path;
use toric3d::lattice::{build_cubic_torus, build_open_slab};
use toric3d::sim::{run_point, PointSummary, SimConfig, TimingMode};
use toric3d::ChainComplex3;

use crate::decode::EstimatorArg;
use crate::util::{json_str, parse_ps, parse_sizes};
use crate::CliError;

/// Consulted for the default worker count when `--threads` is absent.
pub const THREADS_ENV: &str = "TORIC3D_THREADS";

pub const CSV_HEADER: &str =
    "family,L,n,p,trials,decode_failures,logical_failures,logical_rate,stderr,mean_decode_ms,seed";

#[derive(Clone, Copy, ValueEnum)]
pub enum SimFamilyArg {
    CubicTorus,
    Slab,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum TimingArg {
    /// Measure wall-clock decode time
    Wall,
    /// Report zero, making reruns byte-identical
    None,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Built-in family swept over --sizes
    #[arg(long, value_enum, conflicts_with = "lattice", requires = "sizes")]
    pub family: Option<SimFamilyArg>,
    /// Fixed lattice file instead of a family sweep
    #[arg(long, conflicts_with = "sizes")]
    pub lattice: Option<PathBuf>,
    /// Comma-separated linear sizes, e.g. 4,6,8
    #[arg(long)]
    pub sizes: Option<String>,
    /// Error rates: comma list or inclusive start:end:step range
    #[arg(long)]
    pub ps: String,
    /// Trial cap per point
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    /// Stop a point early after this many logical failures
    #[arg(long, default_value_t = 300)]
    pub max_logical: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; defaults to $TORIC3D_THREADS, then all cores
    #[arg(long)]
    pub threads: Option<usize>,
    /// Decode timing mode
    #[arg(long, value_enum, default_value_t = TimingArg::Wall)]
    pub timing: TimingArg,
    /// Residual estimator for periodic decoding
    #[arg(long, value_enum, default_value_t = EstimatorArg::Auto)]
    pub estimator: EstimatorArg,
    /// Extra artificial boundaries to try after a failed projection
    #[arg(long, default_value_t = 1)]
    pub retries: usize,
    /// Exact GF(2) cleanup for trials the decoder gives up on
    #[arg(long)]
    pub gf2_fallback: bool,
    /// CSV destination; the JSON summary lands next to it. Without --out
    /// the CSV goes to stdout instead of progress lines.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn csv_row(r: &PointSummary) -> String {
    format!(
        "{},{},{},{:.6},{},{},{},{:.6},{:.6},{:.6},{}",
        r.family,
        r.l,
        r.n,
        r.p,
        r.trials,
        r.decode_failures,
        r.logical_failures,
        r.logical_rate,
        r.stderr,
        r.mean_decode_ms,
        r.seed
    )
}

fn json_row(r: &PointSummary) -> String {
    format!(
        "{{\"family\":{},\"L\":{},\"n\":{},\"p\":{:.6},\"trials\":{},\
         \"decode_failures\":{},\"logical_failures\":{},\"logical_rate\":{:.6},\
         \"stderr\":{:.6},\"mean_decode_ms\":{:.6},\"seed\":{}}}",
        json_str(&r.family),
        r.l,
        r.n,
        r.p,
        r.trials,
        r.decode_failures,
        r.logical_failures,
        r.logical_rate,
        r.stderr,
        r.mean_decode_ms,
        r.seed
    )
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Input(format!("bad {THREADS_ENV}='{v}': expected a thread count"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::Input(format!("bad {THREADS_ENV}: {e}"))),
    }
}

fn summary_json(
    args: &SimulateArgs,
    ps: &[f64],
    threads: usize,
    rows: &[PointSummary],
) -> String {
    let source = match (&args.family, &args.lattice) {
        (Some(SimFamilyArg::CubicTorus), _) => json_str("cubic-torus"),
        (Some(SimFamilyArg::Slab), _) => json_str("slab"),
        (None, Some(path)) => json_str(&path.display().to_string()),
        (None, None) => unreachable!("validated in run"),
    };
    let ps_list: Vec<String> = ps.iter().map(|p| format!("{p:.6}")).collect();
    let rows_list: Vec<String> = rows.iter().map(json_row).collect();
    format!(
        "{{\"config\":{{\"source\":{},\"ps\":[{}],\"trials\":{},\"max_logical\":{},\
         \"seed\":{},\"threads\":{},\"timing\":{},\"estimator\":{},\"retries\":{},\
         \"gf2_fallback\":{}}},\"rows\":[{}]}}\n",
        source,
        ps_list.join(","),
        args.trials,
        args.max_logical,
        args.seed,
        threads,
        json_str(match args.timing {
            TimingArg::Wall => "wall",
            TimingArg::None => "none",
        }),
        json_str(args.estimator.label()),
        args.retries,
        args.gf2_fallback,
        rows_list.join(",")
    )
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let ps = parse_ps(&args.ps)?;
    let threads = resolve_threads(args.threads)?;
    let lattices: Vec<ChainComplex3> = match (&args.family, &args.lattice) {
        (Some(fam), None) => {
            let sizes = parse_sizes(args.sizes.as_deref().expect("clap requires sizes"))?;
            sizes
                .iter()
                .map(|&l| match fam {
                    SimFamilyArg::CubicTorus => build_cubic_torus(l),
                    SimFamilyArg::Slab => build_open_slab(l, l, l),
                })
                .collect::<Result<_, _>>()?
        }
        (None, Some(path)) => vec![load_lattice_path(path)?],
        (None, None) => {
            return Err(CliError::Input(
                "pass --family with --sizes, or --lattice".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflict"),
    };

    let cfg = SimConfig {
        max_trials: args.trials,
        max_logical: args.max_logical,
        seed: args.seed,
        threads,
        timing: match args.timing {
            TimingArg::Wall => TimingMode::Wall,
            TimingArg::None => TimingMode::Off,
        },
        periodic: PeriodicConfig {
            estimator: args.estimator.into(),
            retries: args.retries,
            gf2_fallback: args.gf2_fallback,
        },
        boundary_fallback: args.gf2_fallback,
    };

    // Progress lines would corrupt the CSV when it goes to stdout.
    let log_progress = args.out.is_some();
    let mut rows = Vec::new();
    for c in &lattices {
        for &p in &ps {
            let row = run_point(c, p, &cfg).map_err(|e| CliError::Input(e.to_string()))?;
            if log_progress {
                println!(
                    "point family={} L={} p={:.6} trials={} logical_failures={} \
                     logical_rate={:.6} stderr={:.6} mean_decode_ms={:.6}",
                    row.family,
                    row.l,
                    row.p,
                    row.trials,
                    row.logical_failures,
                    row.logical_rate,
                    row.stderr,
                    row.mean_decode_ms
                );
            }
            rows.push(row);
        }
    }

    let mut csv = String::with_capacity(rows.len() * 80 + CSV_HEADER.len() + 1);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&csv_row(r));
        csv.push('\n');
    }

    match &args.out {
        Some(path) => {
            let write = |p: &PathBuf, data: &str| {
                std::fs::write(p, data)
                    .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display())))
            };
            write(path, &csv)?;
            let json_path = path.with_extension("json");
            write(&json_path, &summary_json(args, &ps, threads, &rows))?;
            println!(
                "csv={} json={} rows={}",
                path.display(),
                json_path.display(),
                rows.len()
            );
        }
        None => print!("{csv}"),
    }
    Ok(())
}
