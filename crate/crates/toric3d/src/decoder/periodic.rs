//! Decoder for periodic lattices.
//!
//! Without boundaries, stabilizer supports are cut sets but some logical
//! supports are not. The decoder carves an artificial boundary `X` out of
//! one representative per logical X operator, explores only outside `X`
//! (where cut sets once again witness every stabilizer and logical), peels
//! the error down onto `X`, and finally estimates the residual inside `X`
//! where the absence of stabilizer supports makes the solution space tiny.

use thiserror::Error;

use super::{
    explore_waves, peel_faces, DecodeOutcome, DecodeStats, DecodeStatus, Exploration,
};
use crate::bits::{EdgeSet, FaceSet};
use crate::cutset::VolumeGraph;
use crate::lattice::{ChainComplex3, Family, TorusIndex};
use crate::oracle::solve_syndrome;
use crate::stabilizer::{face_equivalence_classes, logical_basis, BasisError, LogicalBasis};

#[derive(Error, Debug)]
pub enum BoundaryError {
    #[error("removing stabilizer supports from the artificial boundary did not converge")]
    ReductionDiverged,
    #[error("logical representative {rep} vanished during boundary reduction")]
    RepVanished { rep: usize },
}

#[derive(Error, Debug)]
pub enum PeriodicError {
    #[error("lattice is not periodic")]
    NotPeriodic,
    #[error("periodic lattice has degree-one faces")]
    DegreeOneFaces,
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

/// The artificial boundary `X`: one face-set representative per logical X
/// operator, holding no stabilizer support.
#[derive(Clone, Debug)]
pub struct ArtificialBoundary {
    /// Union of the representatives.
    pub faces: FaceSet,
    /// Per-logical representatives; pairwise disjoint on the cubic torus.
    pub reps: Vec<FaceSet>,
    /// Every edge incident on some face of `X` (plain union, not a
    /// symmetric difference): the region syndrome may legally survive in
    /// after projection.
    pub boundary_edges: EdgeSet,
    /// Edges incident on more than two faces of `X`; the per-plane
    /// estimator treats their checks as dependent and skips them.
    pub edges_over2: EdgeSet,
    /// Property needed by the per-plane estimator.
    pub reps_disjoint: bool,
}

impl ArtificialBoundary {
    /// Assembles `X` from logical representatives, removing stabilizer
    /// supports: while `X` is a cut set, some enclosed volume set `V` has
    /// `∂(V) ⊆ X`; the representatives meeting a common core of `∂(V)` are
    /// multiplied by that stabilizer, which strictly shrinks `X`.
    pub fn build(
        c: &ChainComplex3,
        graph: &VolumeGraph,
        mut reps: Vec<FaceSet>,
    ) -> Result<ArtificialBoundary, BoundaryError> {
        let mut faces = union_of(c, &reps);
        let mut budget = faces.weight() + 1;
        while graph.is_cut_set(&faces) {
            if budget == 0 {
                return Err(BoundaryError::ReductionDiverged);
            }
            budget -= 1;
            let parts = c.volume_components(&faces);
            let inside = parts.label[0];
            let mut stab = c.empty_face_set();
            for f in 0..c.face_count() {
                if let Some((a, b)) = graph.arc_ends(f) {
                    if (parts.label[a] == inside) != (parts.label[b] == inside) {
                        stab.insert(f);
                    }
                }
            }
            debug_assert!(stab.is_subset_of(&faces), "cut crosses a non-boundary face");
            // Narrow a core T of the stabilizer support: after one pass every
            // representative either contains T or misses it entirely.
            let mut core = stab.clone();
            let first = reps
                .iter()
                .position(|r| r.intersection_weight(&stab) > 0)
                .expect("a cut subset of X meets some representative");
            core.intersect_with(&reps[first]);
            for r in &reps {
                if r.intersection_weight(&core) > 0 {
                    let mut shrunk = core.clone();
                    shrunk.intersect_with(r);
                    core = shrunk;
                }
            }
            for (i, r) in reps.iter_mut().enumerate() {
                if r.intersection_weight(&core) > 0 {
                    r.xor_with(&stab);
                    if r.is_empty() {
                        return Err(BoundaryError::RepVanished { rep: i });
                    }
                }
            }
            faces = union_of(c, &reps);
        }

        let mut boundary_edges = c.empty_edge_set();
        let mut edge_hits = vec![0u32; c.edge_count()];
        for f in &faces {
            for &e in c.face_edges(f) {
                boundary_edges.insert(e as usize);
                edge_hits[e as usize] += 1;
            }
        }
        let edges_over2 = c.edge_set(
            (0..c.edge_count()).filter(|&e| edge_hits[e] > 2),
        );
        let reps_disjoint = reps.iter().enumerate().all(|(i, a)| {
            reps[i + 1..].iter().all(|b| a.is_disjoint_from(b))
        });
        Ok(ArtificialBoundary { faces, reps, boundary_edges, edges_over2, reps_disjoint })
    }

    /// The canonical boundary of the cubic torus: three axis planes through
    /// the cell at `offset`. They are pairwise face-disjoint and hold no
    /// stabilizer support, so no reduction ever fires.
    pub fn canonical_torus(
        c: &ChainComplex3,
        graph: &VolumeGraph,
        l: usize,
        offset: (usize, usize, usize),
    ) -> Result<ArtificialBoundary, BoundaryError> {
        Self::build(c, graph, TorusIndex { l }.axis_planes(offset))
    }
}

fn union_of(c: &ChainComplex3, reps: &[FaceSet]) -> FaceSet {
    let mut u = c.empty_face_set();
    for r in reps {
        u.union_with(r);
    }
    u
}

/// Grows the erasure outside the artificial boundary. Accepted faces never
/// overlap `X`; the cut-set probes run against `X ∪ E ∪ {f}`.
pub fn explore_periodic(
    c: &ChainComplex3,
    graph: &VolumeGraph,
    x: &ArtificialBoundary,
    s_e: &EdgeSet,
) -> Exploration {
    explore_waves(c, graph, Some(&x.faces), s_e)
}

/// Result of projecting the error onto the artificial boundary.
#[derive(Clone, Debug)]
pub struct ProjectOutcome {
    /// Estimate over the erasure (never touches `X`).
    pub estimate: FaceSet,
    /// Syndrome left after applying the estimate.
    pub residual: EdgeSet,
    /// True iff the residual lives entirely on edges of `X` faces, i.e. the
    /// remaining error can be explained inside `X` alone.
    pub projected: bool,
    pub peeled: usize,
}

/// Peels the erasure while holding `X` fixed: edges whose only remaining
/// face lies in `X` are left unresolved, so the surviving syndrome collects
/// on the boundary.
pub fn peel_project(
    c: &ChainComplex3,
    x: &ArtificialBoundary,
    erasure: &FaceSet,
    s_e: &EdgeSet,
) -> ProjectOutcome {
    let out = peel_faces(c, erasure, Some(&x.faces), s_e);
    let projected = out.residual.is_subset_of(&x.boundary_edges);
    ProjectOutcome { estimate: out.estimate, residual: out.residual, projected, peeled: out.peeled }
}

#[derive(Error, Debug)]
pub enum EstimatorError {
    #[error("peeling inside the artificial boundary left syndrome behind")]
    Stuck,
    #[error("syndrome is inconsistent over representative {rep}")]
    Inconsistent { rep: usize },
    #[error("{0} logical representatives exceed the subset bookkeeping limit")]
    TooManyReps(usize),
}

const MAX_TRACKED_REPS: usize = 12;

/// Residual estimation for arbitrary periodic lattices.
///
/// `X` holds no stabilizer support, so its nonempty zero-syndrome subsets
/// are exactly the symmetric differences of representatives: decoding over
/// `X` is exploration that refuses to complete any of those `2^K - 1` sets
/// (tracked by deficit counters), followed by ordinary peeling.
pub fn estimate_residual_general(
    c: &ChainComplex3,
    x: &ArtificialBoundary,
    s_x: &EdgeSet,
) -> Result<FaceSet, EstimatorError> {
    let k = x.reps.len();
    if k > MAX_TRACKED_REPS {
        return Err(EstimatorError::TooManyReps(k));
    }
    if x.faces.is_empty() {
        return if s_x.is_empty() { Ok(c.empty_face_set()) } else { Err(EstimatorError::Stuck) };
    }

    let mut rep_mask = vec![0u16; c.face_count()];
    for (i, r) in x.reps.iter().enumerate() {
        for f in r {
            rep_mask[f] |= 1 << i;
        }
    }
    // deficit[t] = faces of the symmetric difference over subset t still
    // missing from the accepted set; accepting its last face would complete
    // a logical support.
    let mut deficit = vec![0u32; 1 << k];
    for f in &x.faces {
        for (t, d) in deficit.iter_mut().enumerate().skip(1) {
            if (rep_mask[f] & t as u16).count_ones() % 2 == 1 {
                *d += 1;
            }
        }
    }

    let mut explored = c.empty_face_set();
    let mut accepted = c.empty_face_set();
    let mut remaining = x.faces.weight();
    let mut b = s_x.clone();
    let mut wave: Vec<u32> = Vec::new();
    let mut queued = c.empty_face_set();
    while remaining > 0 {
        wave.clear();
        queued.clear();
        for e in &b {
            for &f in c.edge_faces(e) {
                let f = f as usize;
                if x.faces.contains(f) && !explored.contains(f) && !queued.contains(f) {
                    queued.insert(f);
                    wave.push(f as u32);
                }
            }
        }
        if wave.is_empty() {
            let f = x.faces.iter().find(|&f| !explored.contains(f)).expect("remaining > 0");
            wave.push(f as u32);
        }
        wave.sort_unstable();
        let mut b_next = c.empty_edge_set();
        for &f in &wave {
            let f = f as usize;
            explored.insert(f);
            remaining -= 1;
            let mask = rep_mask[f];
            let completes = (1..1usize << k)
                .any(|t| deficit[t] == 1 && (mask & t as u16).count_ones() % 2 == 1);
            if completes {
                continue;
            }
            accepted.insert(f);
            for (t, d) in deficit.iter_mut().enumerate().skip(1) {
                if (mask & t as u16).count_ones() % 2 == 1 {
                    *d -= 1;
                }
            }
            for &e in c.face_edges(f) {
                b_next.insert(e as usize);
            }
        }
        b_next.difference_with(&b);
        b = b_next;
    }

    let out = peel_faces(c, &accepted, None, s_x);
    if out.residual.is_empty() {
        Ok(out.estimate)
    } else {
        Err(EstimatorError::Stuck)
    }
}

/// Residual estimation specialized to disjoint plane representatives (the
/// cubic torus): each plane, with the over-shared edges dropped as dependent
/// checks, is a cycle code with exactly two solutions. A two-coloring sweep
/// finds one, and the lighter of the pair is kept (ties keep the seeded
/// solution).
pub fn estimate_residual_cubic(
    c: &ChainComplex3,
    x: &ArtificialBoundary,
    s_x: &EdgeSet,
) -> Result<FaceSet, EstimatorError> {
    debug_assert!(x.reps_disjoint, "per-plane estimation needs disjoint representatives");
    let mut total = c.empty_face_set();
    let mut color = vec![2u8; c.face_count()];
    let mut queue = std::collections::VecDeque::new();
    for (i, plane) in x.reps.iter().enumerate() {
        let mut first = true;
        for seed in plane {
            if color[seed] != 2 {
                continue;
            }
            // The first component carries the seeded solution; any extra
            // component starts empty for determinism.
            color[seed] = u8::from(first);
            first = false;
            queue.push_back(seed as u32);
            while let Some(f) = queue.pop_front() {
                let f = f as usize;
                for &e in c.face_edges(f) {
                    let e = e as usize;
                    if x.edges_over2.contains(e) {
                        continue;
                    }
                    let mut in_plane =
                        c.edge_faces(e).iter().map(|&g| g as usize).filter(|&g| plane.contains(g));
                    let (a, b) = (in_plane.next(), in_plane.next());
                    if in_plane.next().is_some() {
                        continue;
                    }
                    let Some(other) = (match (a, b) {
                        (Some(a), Some(b)) if a == f => Some(b),
                        (Some(a), Some(b)) if b == f => Some(a),
                        _ => None,
                    }) else {
                        continue;
                    };
                    let expected = color[f] ^ u8::from(s_x.contains(e));
                    if color[other] == 2 {
                        color[other] = expected;
                        queue.push_back(other as u32);
                    } else if color[other] != expected {
                        return Err(EstimatorError::Inconsistent { rep: i });
                    }
                }
            }
        }
        let mut est = c.empty_face_set();
        for f in plane {
            if color[f] == 1 {
                est.insert(f);
            }
        }
        if 2 * est.weight() > plane.weight() {
            est.xor_with(plane);
        }
        total.union_with(&est);
    }
    Ok(total)
}

/// Which residual estimator [`PeriodicDecoder`] runs on the projected
/// syndrome.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ResidualEstimator {
    /// Per-plane two-coloring when the lattice is a cubic torus with
    /// disjoint representatives, deficit-tracked exploration otherwise.
    Auto,
    General,
    Cubic,
}

/// Knobs for periodic decoding.
#[derive(Clone, Copy, Debug)]
pub struct PeriodicConfig {
    pub estimator: ResidualEstimator,
    /// Extra artificial boundaries to try when projection fails. Only the
    /// cubic torus has a second canonical boundary (translated by half the
    /// lattice in every axis).
    pub retries: usize,
    /// Clear any remaining failure by solving the syndrome exactly over
    /// `E ∪ X`. Off by default so failure statistics stay visible.
    pub gf2_fallback: bool,
}

impl Default for PeriodicConfig {
    fn default() -> Self {
        PeriodicConfig { estimator: ResidualEstimator::Auto, retries: 1, gf2_fallback: false }
    }
}

/// Ready-to-run decoder for a periodic lattice: owns the volume graph, the
/// logical basis and the artificial boundaries.
pub struct PeriodicDecoder<'c> {
    c: &'c ChainComplex3,
    graph: VolumeGraph,
    basis: LogicalBasis,
    boundaries: Vec<ArtificialBoundary>,
    config: PeriodicConfig,
}

impl<'c> PeriodicDecoder<'c> {
    pub fn new(c: &'c ChainComplex3) -> Result<Self, PeriodicError> {
        Self::with_config(c, PeriodicConfig::default())
    }

    pub fn with_config(c: &'c ChainComplex3, config: PeriodicConfig) -> Result<Self, PeriodicError> {
        if !c.periodic() {
            return Err(PeriodicError::NotPeriodic);
        }
        if !c.degree_one_faces().is_empty() {
            return Err(PeriodicError::DegreeOneFaces);
        }
        let classes = face_equivalence_classes(c);
        let basis = logical_basis(c, &classes)?;
        let graph = VolumeGraph::from_complex(c);
        let mut boundaries =
            vec![ArtificialBoundary::build(c, &graph, basis.x_reps.clone())?];
        if let Family::CubicTorus { l } = c.family() {
            let shift = l / 2;
            boundaries.push(ArtificialBoundary::canonical_torus(
                c,
                &graph,
                l,
                (shift, shift, shift),
            )?);
        }
        Ok(PeriodicDecoder { c, graph, basis, boundaries, config })
    }

    pub fn basis(&self) -> &LogicalBasis {
        &self.basis
    }

    pub fn boundaries(&self) -> &[ArtificialBoundary] {
        &self.boundaries
    }

    fn estimate_residual(
        &self,
        x: &ArtificialBoundary,
        s_x: &EdgeSet,
    ) -> Result<FaceSet, EstimatorError> {
        let cubic = match self.config.estimator {
            ResidualEstimator::Cubic => true,
            ResidualEstimator::General => false,
            ResidualEstimator::Auto => {
                matches!(self.c.family(), Family::CubicTorus { .. }) && x.reps_disjoint
            }
        };
        if cubic {
            estimate_residual_cubic(self.c, x, s_x)
        } else {
            estimate_residual_general(self.c, x, s_x)
        }
    }

    pub fn decode(&self, s_e: &EdgeSet) -> DecodeOutcome {
        let c = self.c;
        let mut stats = DecodeStats::default();
        let mut total = c.empty_face_set();
        let mut s = s_e.clone();
        let attempts = self.boundaries.len().min(self.config.retries + 1).max(1);
        let mut projected_on = None;
        let mut last: Option<(&ArtificialBoundary, FaceSet)> = None;
        for (i, x) in self.boundaries[..attempts].iter().enumerate() {
            stats.retries = i;
            let ex = explore_periodic(c, &self.graph, x, &s);
            stats.waves += ex.waves;
            stats.frozen += ex.frozen;
            let out = peel_project(c, x, &ex.accepted, &s);
            stats.peeled += out.peeled;
            // Even a failed attempt keeps its partial estimate; the next
            // boundary decodes the updated syndrome.
            total.xor_with(&out.estimate);
            s = out.residual;
            let projected = out.projected;
            last = Some((x, ex.accepted));
            if projected {
                projected_on = Some(x);
                break;
            }
        }

        let mut status = match projected_on {
            None => DecodeStatus::KleinBottleSuspected,
            Some(x) => match self.estimate_residual(x, &s) {
                Err(_) => DecodeStatus::ResidualSyndrome,
                Ok(est) => {
                    s.xor_with(&c.boundary_of_faces(&est));
                    total.xor_with(&est);
                    if s.is_empty() {
                        DecodeStatus::Success
                    } else {
                        DecodeStatus::ResidualSyndrome
                    }
                }
            },
        };

        if status != DecodeStatus::Success && self.config.gf2_fallback {
            let (x, erasure) = last.as_ref().expect("at least one attempt ran");
            let mut mask = erasure.clone();
            mask.union_with(&x.faces);
            if let Some(solution) = solve_syndrome(c, &s, &mask).solution() {
                total.xor_with(solution);
                s.clear();
                status = DecodeStatus::Success;
                stats.fallback_used = true;
            }
        }

        debug_assert!(
            status != DecodeStatus::Success || c.boundary_of_faces(&total) == *s_e,
            "successful estimate must reproduce the syndrome"
        );
        DecodeOutcome { status, estimate: total, stats }
    }
}
