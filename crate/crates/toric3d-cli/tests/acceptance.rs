//! End-to-end acceptance checks for the decoder stack, one per shipped
//! guarantee. Each criterion prints its own PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`) and the test fails if any
//! criterion does. Everything is seeded, so reruns are bit-identical.

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric3d::decoder::boundary::{explore_boundary, peel};
use toric3d::decoder::periodic::{explore_periodic, peel_project};
use toric3d::decoder::{ArtificialBoundary, PeriodicDecoder};
use toric3d::cutset::VolumeGraph;
use toric3d::lattice::{
    build_boundary_slab, build_cubic_torus, build_open_slab, ChainComplex3,
};
use toric3d::oracle::{has_enclosed_volume, is_stabilizer_support, solve_syndrome, SolveOutcome};
use toric3d::sim::{run_point, SimConfig, TimingMode};
use toric3d::stabilizer::{
    augment, classify_zero_syndrome, face_equivalence_classes, logical_basis, syndrome, Homology,
};
use toric3d::FaceSet;

/// Master seed for every Monte Carlo criterion; pinned so the suite is
/// deterministic across runs and thread counts.
const MC_SEED: u64 = 5;

/// Exhaustive weight-2 regression value: of the 3240 two-face errors on the
/// L=3 torus, this many decode to a homologically trivial residual. The
/// distance of the code is 3, and the decoder in fact corrects every
/// weight-2 error, so the pinned count is the full enumeration.
const WEIGHT2_TRIVIAL: usize = 3240;

type CriterionResult = Result<String, String>;

fn random_error(c: &ChainComplex3, rng: &mut ChaCha8Rng, wmax: usize) -> FaceSet {
    let w = rng.random_range(0..=wmax);
    let mut s = c.empty_face_set();
    while s.weight() < w {
        s.insert(rng.random_range(0..c.face_count()));
    }
    s
}

/// Criterion 1: on 2x2x2 lattices the peeled estimate must equal the GF(2)
/// solution over the erasure; on the torus the two may differ only inside
/// the artificial boundary.
fn oracle_equivalence() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for c in [build_boundary_slab(2, 2, 2).unwrap(), build_open_slab(2, 2, 2).unwrap()] {
        let aug = augment(&c);
        for case in 0..500 {
            let err = random_error(&c, &mut rng, 3);
            let s = syndrome(&c, &err);
            let ex = explore_boundary(&c, &aug, &s);
            let out = peel(&c, &ex.accepted, &s);
            if !out.status.is_success() {
                return Err(format!("boundary case {case}: peel failed on {err:?}"));
            }
            match solve_syndrome(&c, &s, &ex.accepted) {
                SolveOutcome::Unique(x) if x == out.estimate => {}
                SolveOutcome::Unique(_) => {
                    return Err(format!("boundary case {case}: peel disagrees with the oracle"))
                }
                other => {
                    return Err(format!(
                        "boundary case {case}: erasure not uniquely solvable ({other:?})"
                    ))
                }
            }
        }
    }

    let c = build_cubic_torus(2).unwrap();
    let graph = VolumeGraph::from_complex(&c);
    let x = ArtificialBoundary::canonical_torus(&c, &graph, 2, (0, 0, 0)).unwrap();
    for case in 0..500 {
        let err = random_error(&c, &mut rng, 3);
        let s = syndrome(&c, &err);
        let ex = explore_periodic(&c, &graph, &x, &s);
        let po = peel_project(&c, &x, &ex.accepted, &s);
        if !po.projected {
            return Err(format!("periodic case {case}: projection failed on {err:?}"));
        }
        let mut mask = ex.accepted.clone();
        mask.union_with(&x.faces);
        let solved = solve_syndrome(&c, &s, &mask);
        let Some(x0) = solved.solution() else {
            return Err(format!("periodic case {case}: oracle found no solution in E u X"));
        };
        let mut diff = x0.clone();
        diff.xor_with(&po.estimate);
        if !diff.is_subset_of(&x.faces) {
            return Err(format!(
                "periodic case {case}: estimate differs from the oracle outside X"
            ));
        }
    }
    Ok("1000 boundary + 500 periodic syndromes match the GF(2) oracle".into())
}

/// Criterion 2: the graph cut-set test must agree with the algebraic test
/// for an enclosed (dummy-augmented) volume set.
fn cutset_algebra() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let lattices = [
        build_boundary_slab(2, 2, 2).unwrap(),
        build_open_slab(2, 2, 2).unwrap(),
        build_cubic_torus(2).unwrap(),
    ];
    let mut checked = 0;
    for c in &lattices {
        let (graph, dummies) = if c.periodic() {
            (VolumeGraph::from_complex(c), None)
        } else {
            let aug = augment(c);
            (aug.graph, Some(aug.classes.classes))
        };
        let n = c.face_count();
        for _ in 0..1000 {
            let size = rng.random_range(1..=n / 2);
            let mut k = c.empty_face_set();
            while k.weight() < size {
                k.insert(rng.random_range(0..n));
            }
            let graph_says = graph.is_cut_set(&k);
            let algebra_says = has_enclosed_volume(c, dummies.as_deref(), &k);
            if graph_says != algebra_says {
                return Err(format!(
                    "disagreement on {k:?}: is_cut_set={graph_says}, algebra={algebra_says}"
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} face sets, cut-set test equals the GF(2) enclosure test"))
}

/// Criterion 3: exhaustive weight-1 and weight-2 errors on the L=3 torus.
fn exhaustive_low_weight() -> CriterionResult {
    let c = build_cubic_torus(3).unwrap();
    let dec = PeriodicDecoder::new(&c).map_err(|e| e.to_string())?;
    let basis = logical_basis(&c, &face_equivalence_classes(&c)).map_err(|e| e.to_string())?;
    let n = c.face_count();

    let classify = |residual: &FaceSet| -> Result<bool, String> {
        let parity = classify_zero_syndrome(&c, &basis, residual) == Homology::Trivial;
        let algebra = is_stabilizer_support(&c, residual);
        if parity != algebra {
            return Err(format!(
                "homology classifiers disagree on {residual:?}: parity={parity}, algebra={algebra}"
            ));
        }
        Ok(parity)
    };

    for f in 0..n {
        let err = c.face_set([f]);
        let s = syndrome(&c, &err);
        let out = dec.decode(&s);
        if !out.status.is_success() {
            return Err(format!("weight-1 error {{{f}}} did not decode"));
        }
        let mut residual = err;
        residual.xor_with(&out.estimate);
        if !classify(&residual)? {
            return Err(format!("weight-1 error {{{f}}} left a nontrivial residual"));
        }
    }

    let mut trivial = 0;
    let mut cases = 0;
    for f1 in 0..n {
        for f2 in f1 + 1..n {
            let err = c.face_set([f1, f2]);
            let s = syndrome(&c, &err);
            let out = dec.decode(&s);
            if !out.status.is_success() {
                return Err(format!("weight-2 error {{{f1},{f2}}} did not decode"));
            }
            if c.boundary_of_faces(&out.estimate) != s {
                return Err(format!(
                    "weight-2 error {{{f1},{f2}}}: estimate does not reproduce the syndrome"
                ));
            }
            if classify(&{
                let mut r = err.clone();
                r.xor_with(&out.estimate);
                r
            })? {
                trivial += 1;
            }
            cases += 1;
        }
    }
    if cases != 3240 {
        return Err(format!("expected 3240 weight-2 cases, enumerated {cases}"));
    }
    if trivial != WEIGHT2_TRIVIAL {
        return Err(format!(
            "weight-2 trivial-residual count drifted: got {trivial}, pinned {WEIGHT2_TRIVIAL}"
        ));
    }
    Ok(format!(
        "81 weight-1 all trivial; 3240 weight-2 all reproduce the syndrome, {trivial} trivial"
    ))
}

/// Inverse-variance weighted straight-line fit of the rate difference
/// between two curves; returns the p where the fit crosses zero.
fn fit_crossing(ps: &[f64], a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<f64, String> {
    let (mut sw, mut swx, mut swy) = (0.0, 0.0, 0.0);
    let pts: Vec<(f64, f64, f64)> = ps
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&p, (&(ra, sa), &(rb, sb)))| {
            let var = (sa * sa + sb * sb).max(1e-12);
            (p, ra - rb, 1.0 / var)
        })
        .collect();
    for &(x, y, w) in &pts {
        sw += w;
        swx += w * x;
        swy += w * y;
    }
    let (xb, yb) = (swx / sw, swy / sw);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y, w) in &pts {
        sxy += w * (x - xb) * (y - yb);
        sxx += w * (x - xb) * (x - xb);
    }
    let slope = sxy / sxx;
    if slope >= 0.0 {
        return Err(format!("rate difference is not decreasing (slope {slope:.3})"));
    }
    Ok(xb - yb / slope)
}

/// Criterion 4: the L = 4, 6, 8 logical-error curves cross inside the
/// expected threshold band and their ordering flips across it.
fn threshold_reproduction() -> CriterionResult {
    let ls = [4usize, 6, 8];
    let ps: Vec<f64> = (0..7).map(|k| 0.105 + 0.005 * k as f64).collect();
    let cfg = SimConfig {
        max_trials: 10_000,
        max_logical: 300,
        seed: MC_SEED,
        timing: TimingMode::Off,
        ..SimConfig::default()
    };
    let lattices: Vec<ChainComplex3> =
        ls.iter().map(|&l| build_cubic_torus(l).unwrap()).collect();
    let mut curves: Vec<Vec<(f64, f64)>> = Vec::new();
    for c in &lattices {
        let mut curve = Vec::new();
        for &p in &ps {
            let row = run_point(c, p, &cfg).map_err(|e| e.to_string())?;
            curve.push((row.logical_rate, row.stderr));
        }
        curves.push(curve);
    }

    let mut crossings = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let x = fit_crossing(&ps, &curves[i], &curves[j])?;
        if !(0.107..=0.137).contains(&x) {
            return Err(format!(
                "L={}/L={} crossing {x:.4} outside [0.107, 0.137]",
                ls[i], ls[j]
            ));
        }
        crossings.push(format!("L{}/L{}={x:.4}", ls[i], ls[j]));
    }

    // Ordering flips across the band, >= 1000 trials per cell.
    let cfg_flip = SimConfig { max_trials: 2000, max_logical: 2000, ..cfg };
    let rate = |c: &ChainComplex3, p: f64| -> Result<f64, String> {
        Ok(run_point(c, p, &cfg_flip).map_err(|e| e.to_string())?.logical_rate)
    };
    let (lo4, lo8) = (rate(&lattices[0], 0.09)?, rate(&lattices[2], 0.09)?);
    let (hi4, hi8) = (rate(&lattices[0], 0.15)?, rate(&lattices[2], 0.15)?);
    if lo8 >= lo4 {
        return Err(format!("below threshold: rate(L=8)={lo8:.4} !< rate(L=4)={lo4:.4}"));
    }
    if hi8 <= hi4 {
        return Err(format!("above threshold: rate(L=8)={hi8:.4} !> rate(L=4)={hi4:.4}"));
    }
    Ok(format!(
        "crossings {} in band; ordering flips ({lo8:.3}<{lo4:.3} at 0.09, {hi8:.3}>{hi4:.3} at 0.15)",
        crossings.join(" ")
    ))
}

/// Criterion 5: at L=8, p=0.12 the retry path and post-retry projection
/// failures stay rare.
fn retry_accounting() -> CriterionResult {
    let c = build_cubic_torus(8).unwrap();
    let cfg = SimConfig {
        max_trials: 10_000,
        max_logical: 10_000,
        seed: MC_SEED,
        timing: TimingMode::Off,
        ..SimConfig::default()
    };
    let row = run_point(&c, 0.12, &cfg).map_err(|e| e.to_string())?;
    if row.trials != 10_000 {
        return Err(format!("expected 10000 trials, ran {}", row.trials));
    }
    let retried_frac = row.retried as f64 / row.trials as f64;
    let proj_frac = row.projection_failures as f64 / row.trials as f64;
    if retried_frac >= 0.01 {
        return Err(format!("retry fraction {retried_frac:.4} >= 1%"));
    }
    if proj_frac >= 0.001 {
        return Err(format!("projection failure fraction {proj_frac:.4} >= 0.1%"));
    }
    Ok(format!(
        "retries {}/10000, projection failures {}/10000",
        row.retried, row.projection_failures
    ))
}

/// Criterion 6: mean decode time scales no worse than n^2.3.
fn complexity_scaling() -> CriterionResult {
    let cells = [(4usize, 3000usize), (6, 2000), (8, 1200), (10, 700)];
    let mut pts = Vec::new();
    for &(l, trials) in &cells {
        let c = build_cubic_torus(l).unwrap();
        let cfg = SimConfig {
            max_trials: trials,
            max_logical: trials,
            seed: MC_SEED,
            timing: TimingMode::Wall,
            ..SimConfig::default()
        };
        let row = run_point(&c, 0.12, &cfg).map_err(|e| e.to_string())?;
        if row.mean_decode_ms <= 0.0 {
            return Err(format!("L={l}: no decode time measured"));
        }
        pts.push(((row.n as f64).ln(), row.mean_decode_ms.ln()));
    }
    let m = pts.len() as f64;
    let xb = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let yb = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|&(x, y)| (x - xb) * (y - yb)).sum();
    let sxx: f64 = pts.iter().map(|&(x, _)| (x - xb) * (x - xb)).sum();
    let alpha = sxy / sxx;
    if alpha > 2.3 {
        return Err(format!("fitted exponent {alpha:.3} > 2.3"));
    }
    Ok(format!("t ~ n^{alpha:.2} over L in {{4, 6, 8, 10}} at p = 0.12"))
}

/// Criterion 7: the CLI reproduces byte-identical CSV for a fixed seed.
fn determinism() -> CriterionResult {
    let bin = env!("CARGO_BIN_EXE_toric3d");
    let dir = std::env::temp_dir().join(format!("toric3d-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for name in ["first.csv", "second.csv"] {
        let out = dir.join(name);
        let status = Command::new(bin)
            .args([
                "simulate",
                "--family",
                "cubic-torus",
                "--sizes",
                "4",
                "--ps",
                "0.105:0.135:0.005",
                "--trials",
                "10000",
                "--max-logical",
                "300",
                "--seed",
                &MC_SEED.to_string(),
                "--timing",
                "none",
                "--out",
            ])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("simulate exited with {status}"));
        }
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    if outputs[0] != outputs[1] {
        return Err("two seeded runs produced different CSV bytes".into());
    }
    let lines = outputs[0].split(|&b| b == b'\n').filter(|l| !l.is_empty()).count();
    if lines != 8 {
        return Err(format!("expected header + 7 rows, got {lines} lines"));
    }
    Ok("two seeded CLI runs emit byte-identical CSV (header + 7 rows)".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> CriterionResult); 7] = [
        ("criterion 1 oracle equivalence", oracle_equivalence),
        ("criterion 2 cut-set algebra", cutset_algebra),
        ("criterion 3 exhaustive low weight", exhaustive_low_weight),
        ("criterion 4 threshold reproduction", threshold_reproduction),
        ("criterion 5 retry accounting", retry_accounting),
        ("criterion 6 complexity scaling", complexity_scaling),
        ("criterion 7 determinism", determinism),
    ];
    let mut failures = Vec::new();
    println!();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {}", failures.join(", "));
}
