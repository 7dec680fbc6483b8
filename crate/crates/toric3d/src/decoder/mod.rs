//! Two-stage erasure-conversion decoding.
//!
//! Both decoders share one skeleton: *exploration* converts the syndrome into
//! an erasure, a face set guaranteed to hold exactly one explanation of the
//! syndrome, and *peeling* extracts that explanation by repeatedly resolving
//! edges incident on a single erased face. [`boundary`] covers lattices whose
//! degree-one faces anchor dummy volumes; [`periodic`] first projects the
//! error onto an artificial boundary and then estimates the remainder inside
//! it.

pub mod boundary;
pub mod periodic;

pub use boundary::BoundaryDecoder;
pub use periodic::{
    ArtificialBoundary, PeriodicConfig, PeriodicDecoder, PeriodicError, ResidualEstimator,
};

use std::collections::VecDeque;

use crate::bits::{EdgeSet, FaceSet};
use crate::cutset::{CutSession, VolumeGraph};
use crate::lattice::ChainComplex3;

/// Terminal state of a decode attempt.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecodeStatus {
    /// The estimate reproduces the input syndrome exactly.
    Success,
    /// Peeling ran out of leaf edges with syndrome left (Klein-bottle-like
    /// erasure shape on a lattice with boundaries).
    PeelingStuck,
    /// The erasure drained without clearing the syndrome.
    ResidualSyndrome,
    /// A periodic decode failed to project the error onto any of its
    /// artificial boundaries, even after retrying.
    KleinBottleSuspected,
}

impl DecodeStatus {
    pub fn is_success(&self) -> bool {
        matches!(self, DecodeStatus::Success)
    }
}

/// Counters describing how a decode went.
#[derive(Clone, Copy, Default, Debug)]
pub struct DecodeStats {
    /// Exploration waves run (summed over retries).
    pub waves: usize,
    /// Faces rejected by the cut-set test.
    pub frozen: usize,
    /// Faces peeled off the erasure.
    pub peeled: usize,
    /// Extra artificial boundaries tried (periodic decoding only).
    pub retries: usize,
    /// Whether the GF(2) fallback produced the final estimate.
    pub fallback_used: bool,
}

/// Decode result: a status, the face-set estimate and run counters. The
/// estimate satisfies `∂(estimate) = syndrome` exactly when the status is
/// [`DecodeStatus::Success`].
#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub estimate: FaceSet,
    pub stats: DecodeStats,
}

/// Result of the exploration stage.
#[derive(Clone, Debug)]
pub struct Exploration {
    /// The erasure `E`; never contains barrier faces.
    pub accepted: FaceSet,
    /// Face ids in acceptance order.
    pub order: Vec<u32>,
    /// Waves run, including re-seeded ones.
    pub waves: usize,
    /// Faces rejected because accepting them would complete a cut set.
    pub frozen: usize,
}

/// Fixed pseudorandom probe priority. Visiting wave faces in raw id order
/// lines the rejections up along the lexicographic seams of the lattice and
/// measurably drags the threshold down; hashing the id keeps the order
/// deterministic while breaking that alignment.
fn face_priority(f: u32) -> u64 {
    let mut z = (f as u64).wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Breadth-first exploration: waves start at the faces around the syndrome
/// and accept each face unless the exclusion set would become a cut set of
/// `graph`. A wave visits faces in hashed-priority order, marks every
/// visited face explored whether or not it is accepted, and seeds the next
/// wave with `B' \ B`, the new boundary edges not already on the frontier.
///
/// `barrier` faces are pre-excluded and never probed (the artificial
/// boundary of the periodic decoder); pass `None` to explore every face.
/// Whenever the frontier dies out with unexplored faces left the search
/// re-seeds from the lowest one: the erasure must be maximal for the
/// solution inside it to be unique.
pub(crate) fn explore_waves(
    c: &ChainComplex3,
    graph: &VolumeGraph,
    barrier: Option<&FaceSet>,
    s_e: &EdgeSet,
) -> Exploration {
    let nf = c.face_count();
    let base = barrier.cloned().unwrap_or_else(|| c.empty_face_set());
    let mut session = CutSession::new(graph, base);
    let mut explored = vec![false; nf];
    if let Some(x) = barrier {
        for f in x {
            explored[f] = true;
        }
    }
    let mut remaining = nf - barrier.map_or(0, FaceSet::weight);
    let mut accepted = c.empty_face_set();
    let mut order = Vec::new();
    let mut queued = c.empty_face_set();
    let mut wave_faces: Vec<u32> = Vec::new();
    let mut frozen = 0;
    let mut waves = 0;
    let mut b = s_e.clone();
    while remaining > 0 {
        wave_faces.clear();
        queued.clear();
        for e in &b {
            for &f in c.edge_faces(e) {
                if !explored[f as usize] && !queued.contains(f as usize) {
                    queued.insert(f as usize);
                    wave_faces.push(f);
                }
            }
        }
        if wave_faces.is_empty() {
            let f = explored.iter().position(|&done| !done).expect("remaining > 0");
            wave_faces.push(f as u32);
        }
        wave_faces.sort_unstable_by_key(|&f| (face_priority(f), f));
        waves += 1;
        let mut b_next = c.empty_edge_set();
        for &f in &wave_faces {
            let f = f as usize;
            explored[f] = true;
            remaining -= 1;
            if session.probe(f) {
                frozen += 1;
            } else {
                accepted.insert(f);
                order.push(f as u32);
                for &e in c.face_edges(f) {
                    b_next.insert(e as usize);
                }
            }
        }
        b_next.difference_with(&b);
        b = b_next;
    }
    Exploration { accepted, order, waves, frozen }
}

/// Result of the peeling stage.
#[derive(Clone, Debug)]
pub struct PeelOutcome {
    /// Faces assigned to the error; always a subset of the erasure.
    pub estimate: FaceSet,
    /// Syndrome left over: input syndrome xor `∂(estimate)`.
    pub residual: EdgeSet,
    /// Erasure faces never peeled (frozen faces not included).
    pub remaining: FaceSet,
    /// Faces peeled, whether or not they joined the estimate.
    pub peeled: usize,
}

/// Leaf peeling: while some edge is incident on exactly one live face, that
/// face's value is forced (it joins the estimate iff the edge still carries
/// syndrome) and the face is removed. `frozen` faces count as live but are
/// never removed, so an edge whose only live face is frozen stays unresolved;
/// this is how the periodic decoder leaves the artificial boundary intact.
pub(crate) fn peel_faces(
    c: &ChainComplex3,
    erasure: &FaceSet,
    frozen: Option<&FaceSet>,
    s_e: &EdgeSet,
) -> PeelOutcome {
    let ne = c.edge_count();
    let mut live = erasure.clone();
    if let Some(x) = frozen {
        debug_assert!(live.is_disjoint_from(x), "erasure overlaps the frozen set");
        live.union_with(x);
    }
    let mut count = vec![0u32; ne];
    for f in &live {
        for &e in c.face_edges(f) {
            count[e as usize] += 1;
        }
    }
    let mut queue: VecDeque<u32> =
        (0..ne as u32).filter(|&e| count[e as usize] == 1).collect();
    let mut b = s_e.clone();
    let mut estimate = c.empty_face_set();
    let mut peeled = 0;
    while let Some(e) = queue.pop_front() {
        let e = e as usize;
        if count[e] != 1 {
            // Stale entry: the edge lost its last faces since being queued.
            continue;
        }
        let f = c
            .edge_faces(e)
            .iter()
            .map(|&f| f as usize)
            .find(|&f| live.contains(f))
            .expect("count said one live face");
        if frozen.is_some_and(|x| x.contains(f)) {
            continue;
        }
        if b.contains(e) {
            estimate.insert(f);
            for &e2 in c.face_edges(f) {
                b.toggle(e2 as usize);
            }
        }
        live.remove(f);
        peeled += 1;
        for &e2 in c.face_edges(f) {
            let e2 = e2 as usize;
            count[e2] -= 1;
            if count[e2] == 1 {
                queue.push_back(e2 as u32);
            }
        }
    }
    let mut remaining = live;
    if let Some(x) = frozen {
        remaining.difference_with(x);
    }
    PeelOutcome { estimate, residual: b, remaining, peeled }
}
