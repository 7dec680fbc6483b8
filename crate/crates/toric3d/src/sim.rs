//! Monte Carlo estimation of logical failure rates.
//!
//! Trials are reproducible and independent of the thread count: trial `i`
//! of a point draws from a stream seeded by `(master seed, lattice size,
//! p, i)`, and the early-stop rule folds outcomes in trial order.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::FaceSet;
use crate::decoder::{
    BoundaryDecoder, DecodeStatus, PeriodicConfig, PeriodicDecoder, PeriodicError,
};
use crate::lattice::{ChainComplex3, Family};
use crate::stabilizer::{
    classify_zero_syndrome, face_equivalence_classes, logical_basis, syndrome, BasisError,
    LogicalBasis,
};

#[derive(Error, Debug)]
pub enum SimError {
    #[error(transparent)]
    Periodic(#[from] PeriodicError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// Whether to measure wall-clock decode time. `Off` pins `mean_decode_ms`
/// to zero so repeated runs emit byte-identical reports.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TimingMode {
    Wall,
    Off,
}

#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    /// Hard cap on trials per point.
    pub max_trials: usize,
    /// Stop a point once this many logical failures accumulate.
    pub max_logical: usize,
    pub seed: u64,
    /// Worker threads; 0 picks the available parallelism.
    pub threads: usize,
    pub timing: TimingMode,
    pub periodic: PeriodicConfig,
    /// Exact GF(2) cleanup for stuck peels on lattices with boundaries.
    pub boundary_fallback: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            max_trials: 100_000,
            max_logical: 300,
            seed: 1,
            threads: 0,
            timing: TimingMode::Wall,
            periodic: PeriodicConfig::default(),
            boundary_fallback: false,
        }
    }
}

/// Aggregate over one (lattice, p) point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSummary {
    pub family: String,
    /// Linear size: `l` for the cubic torus, `lx` for slabs, 0 for custom
    /// lattices.
    pub l: usize,
    /// Number of qubits (faces).
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    /// Trials the decoder itself gave up on; every one also counts as a
    /// logical failure.
    pub decode_failures: usize,
    pub logical_failures: usize,
    pub logical_rate: f64,
    /// Binomial standard error of `logical_rate`.
    pub stderr: f64,
    pub mean_decode_ms: f64,
    pub seed: u64,
    /// Trials that needed a second artificial boundary.
    pub retried: usize,
    /// Trials where no boundary ever absorbed the syndrome.
    pub projection_failures: usize,
}

pub fn family_label(f: Family) -> &'static str {
    match f {
        Family::CubicTorus { .. } => "cubic-torus",
        Family::BoundarySlab { .. } => "boundary-slab",
        Family::OpenSlab { .. } => "open-slab",
        Family::Custom => "custom",
    }
}

pub fn size_label(f: Family) -> usize {
    match f {
        Family::CubicTorus { l } => l,
        Family::BoundarySlab { lx, .. } | Family::OpenSlab { lx, .. } => lx,
        Family::Custom => 0,
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Seed of the RNG stream for one trial, independent of threading.
pub fn trial_seed(master: u64, size: usize, p: f64, trial: u64) -> u64 {
    let mut h = splitmix64(master);
    h = splitmix64(h ^ size as u64);
    h = splitmix64(h ^ p.to_bits());
    splitmix64(h ^ trial)
}

/// Independent bit-flips: each face enters the error with probability `p`.
pub fn sample_error(c: &ChainComplex3, p: f64, rng: &mut impl Rng) -> FaceSet {
    debug_assert!((0.0..=1.0).contains(&p));
    let mut err = c.empty_face_set();
    for f in 0..c.face_count() {
        if rng.random::<f64>() < p {
            err.insert(f);
        }
    }
    err
}

#[derive(Clone, Copy, Debug)]
pub struct TrialOutcome {
    pub error_weight: usize,
    pub decode_failed: bool,
    /// Decode failure or a residual in a nontrivial homology class.
    pub logical_failure: bool,
    pub retried: bool,
    pub projection_failed: bool,
    pub fallback_used: bool,
    pub decode_ns: u64,
}

enum AnyDecoder<'c> {
    Boundary(BoundaryDecoder<'c>),
    Periodic(PeriodicDecoder<'c>),
}

/// One lattice, ready to run trials; shared read-only across worker
/// threads.
pub struct TrialRunner<'c> {
    c: &'c ChainComplex3,
    decoder: AnyDecoder<'c>,
    basis: LogicalBasis,
}

impl<'c> TrialRunner<'c> {
    pub fn new(c: &'c ChainComplex3, cfg: &SimConfig) -> Result<Self, SimError> {
        let basis = logical_basis(c, &face_equivalence_classes(c))?;
        let decoder = if c.periodic() {
            AnyDecoder::Periodic(PeriodicDecoder::with_config(c, cfg.periodic)?)
        } else {
            AnyDecoder::Boundary(BoundaryDecoder::new(c).with_gf2_fallback(cfg.boundary_fallback))
        };
        Ok(TrialRunner { c, decoder, basis })
    }

    pub fn basis(&self) -> &LogicalBasis {
        &self.basis
    }

    pub fn run_trial(&self, p: f64, rng: &mut impl Rng, timing: TimingMode) -> TrialOutcome {
        let c = self.c;
        let err = sample_error(c, p, rng);
        let s = syndrome(c, &err);
        let started = (timing == TimingMode::Wall).then(Instant::now);
        let out = match &self.decoder {
            AnyDecoder::Boundary(d) => d.decode(&s),
            AnyDecoder::Periodic(d) => d.decode(&s),
        };
        let decode_ns = started.map_or(0, |t| t.elapsed().as_nanos() as u64);
        let decode_failed = !out.status.is_success();
        let logical_failure = decode_failed || {
            let residual = &err ^ &out.estimate;
            debug_assert!(syndrome(c, &residual).is_empty());
            !classify_zero_syndrome(c, &self.basis, &residual).is_trivial()
        };
        TrialOutcome {
            error_weight: err.weight(),
            decode_failed,
            logical_failure,
            retried: out.stats.retries > 0,
            projection_failed: out.status == DecodeStatus::KleinBottleSuspected,
            fallback_used: out.stats.fallback_used,
            decode_ns,
        }
    }

    fn run_trial_indexed(&self, master: u64, p: f64, trial: u64, timing: TimingMode) -> TrialOutcome {
        let seed = trial_seed(master, self.c.face_count(), p, trial);
        self.run_trial(p, &mut ChaCha8Rng::seed_from_u64(seed), timing)
    }
}

const CHUNK: usize = 128;

/// Estimates the logical failure rate at one physical error rate.
///
/// Trials run in rounds of `threads` contiguous chunks; outcomes are folded
/// in trial order so the stopping point (and therefore the summary) does
/// not depend on scheduling.
pub fn run_point(c: &ChainComplex3, p: f64, cfg: &SimConfig) -> Result<PointSummary, SimError> {
    let runner = TrialRunner::new(c, cfg)?;
    let threads = if cfg.threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        cfg.threads
    };

    let mut trials = 0usize;
    let mut decode_failures = 0usize;
    let mut logical_failures = 0usize;
    let mut retried = 0usize;
    let mut projection_failures = 0usize;
    let mut total_ns = 0u64;

    let mut next = 0usize;
    'rounds: while next < cfg.max_trials && logical_failures < cfg.max_logical {
        let round_end = (next + threads * CHUNK).min(cfg.max_trials);
        let outcomes = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let lo = (next + t * CHUNK).min(round_end);
                    let hi = (lo + CHUNK).min(round_end);
                    let runner = &runner;
                    scope.spawn(move || {
                        (lo..hi)
                            .map(|i| runner.run_trial_indexed(cfg.seed, p, i as u64, cfg.timing))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            let mut all = Vec::with_capacity(round_end - next);
            for h in handles {
                all.extend(h.join().expect("trial worker panicked"));
            }
            all
        });
        next = round_end;
        for o in outcomes {
            trials += 1;
            decode_failures += usize::from(o.decode_failed);
            logical_failures += usize::from(o.logical_failure);
            retried += usize::from(o.retried);
            projection_failures += usize::from(o.projection_failed);
            total_ns += o.decode_ns;
            if logical_failures >= cfg.max_logical {
                break 'rounds;
            }
        }
    }

    let rate = logical_failures as f64 / trials.max(1) as f64;
    Ok(PointSummary {
        family: family_label(c.family()).to_string(),
        l: size_label(c.family()),
        n: c.face_count(),
        p,
        trials,
        decode_failures,
        logical_failures,
        logical_rate: rate,
        stderr: (rate * (1.0 - rate) / trials.max(1) as f64).sqrt(),
        mean_decode_ms: if cfg.timing == TimingMode::Wall {
            total_ns as f64 / trials.max(1) as f64 / 1e6
        } else {
            0.0
        },
        seed: cfg.seed,
        retried,
        projection_failures,
    })
}

/// [`run_point`] over the cartesian product of lattices and error rates,
/// lattices outermost.
pub fn run_sweep<'a>(
    lattices: impl IntoIterator<Item = &'a ChainComplex3>,
    ps: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<PointSummary>, SimError> {
    let mut rows = Vec::new();
    for c in lattices {
        for &p in ps {
            rows.push(run_point(c, p, cfg)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_boundary_slab, build_cubic_torus};

    fn quick_cfg() -> SimConfig {
        SimConfig {
            max_trials: 200,
            max_logical: 200,
            seed: 7,
            threads: 2,
            timing: TimingMode::Off,
            ..SimConfig::default()
        }
    }

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        let a = trial_seed(1, 48, 0.1, 0);
        assert_eq!(a, trial_seed(1, 48, 0.1, 0));
        assert_ne!(a, trial_seed(1, 48, 0.1, 1));
        assert_ne!(a, trial_seed(1, 48, 0.2, 0));
        assert_ne!(a, trial_seed(2, 48, 0.1, 0));
        assert_ne!(a, trial_seed(1, 96, 0.1, 0));
    }

    #[test]
    fn sample_error_extremes() {
        let c = build_cubic_torus(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_error(&c, 0.0, &mut rng).is_empty());
        assert_eq!(sample_error(&c, 1.0, &mut rng).weight(), c.face_count());
    }

    #[test]
    fn run_point_is_thread_count_invariant() {
        let c = build_cubic_torus(2).unwrap();
        let mut cfg = quick_cfg();
        let a = run_point(&c, 0.08, &cfg).unwrap();
        cfg.threads = 5;
        let b = run_point(&c, 0.08, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials, 200);
    }

    #[test]
    fn early_stop_halts_at_the_failure_cap() {
        let c = build_cubic_torus(2).unwrap();
        let cfg = SimConfig { max_logical: 5, ..quick_cfg() };
        let s = run_point(&c, 0.4, &cfg).unwrap();
        assert_eq!(s.logical_failures, 5);
        assert!(s.trials < cfg.max_trials);
    }

    #[test]
    fn failure_rate_grows_with_p() {
        let c = build_cubic_torus(3).unwrap();
        let cfg = quick_cfg();
        let low = run_point(&c, 0.02, &cfg).unwrap();
        let high = run_point(&c, 0.3, &cfg).unwrap();
        assert!(low.logical_rate < high.logical_rate);
        assert_eq!(low.family, "cubic-torus");
        assert_eq!(low.l, 3);
        assert_eq!(low.n, 81);
        assert_eq!(low.mean_decode_ms, 0.0);
    }

    #[test]
    fn boundary_lattice_point_runs_clean_at_low_p() {
        let c = build_boundary_slab(2, 2, 2).unwrap();
        let s = run_point(&c, 0.01, &quick_cfg()).unwrap();
        assert_eq!(s.family, "boundary-slab");
        assert!(s.logical_rate < 0.2);
        assert_eq!(s.retried, 0);
    }

    #[test]
    fn sweep_orders_lattices_outermost() {
        let c2 = build_cubic_torus(2).unwrap();
        let c3 = build_cubic_torus(3).unwrap();
        let cfg = SimConfig { max_trials: 20, ..quick_cfg() };
        let rows = run_sweep([&c2, &c3], &[0.05, 0.1], &cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].l, rows[0].p), (2, 0.05));
        assert_eq!((rows[1].l, rows[1].p), (2, 0.1));
        assert_eq!((rows[2].l, rows[2].p), (3, 0.05));
        assert_eq!((rows[3].l, rows[3].p), (3, 0.1));
    }
}
