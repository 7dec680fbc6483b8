//! Cut-set tests on the volume adjacency graph.
//!
//! A face set `K` is a cut set when removing the arcs labelled by `K`
//! disconnects the volume adjacency graph. On the augmented lattice this is
//! equivalent to `K` containing a nontrivial stabilizer or logical support,
//! which is exactly the condition the exploration stage must avoid.
//!
//! [`VolumeGraph::is_cut_set`] is the oblivious baseline: one BFS per query.
//! [`CutSession`] answers the exploration pattern (a growing exclusion set
//! probed one face at a time) with an early-exit BFS between the probed
//! face's two endpoints, which agrees with the baseline bit for bit because
//! the session's exclusion set is never itself a cut set.

use crate::bits::FaceSet;
use crate::lattice::ChainComplex3;

const NO_VOLUME: u32 = u32::MAX;

/// Volume adjacency with one arc per degree-two face (in the raw lattice) or
/// per face (in the augmented lattice, where dummy volumes give every
/// degree-one face a second endpoint). Parallel arcs are kept: two volumes
/// may share several faces.
pub struct VolumeGraph {
    volume_count: usize,
    face_count: usize,
    /// Arc endpoints per face; `NO_VOLUME` entries mean the face is no arc.
    ends: Vec<[u32; 2]>,
    off: Vec<u32>,
    arc_face: Vec<u32>,
    arc_to: Vec<u32>,
}

impl VolumeGraph {
    /// Raw lattice graph: only degree-two faces become arcs.
    pub fn from_complex(c: &ChainComplex3) -> VolumeGraph {
        Self::build(c, &[])
    }

    /// Augmented lattice graph: each face set in `dummies` becomes one extra
    /// volume adjacent through its faces. With the degree-one equivalence
    /// classes as dummies this is the decoder's working graph.
    pub fn augmented(c: &ChainComplex3, dummies: &[FaceSet]) -> VolumeGraph {
        Self::build(c, dummies)
    }

    fn build(c: &ChainComplex3, dummies: &[FaceSet]) -> VolumeGraph {
        let nf = c.face_count();
        let nv = c.volume_count() + dummies.len();
        let mut ends = vec![[NO_VOLUME; 2]; nf];
        for f in 0..nf {
            for (slot, &v) in c.face_volumes(f).iter().enumerate().take(2) {
                ends[f][slot] = v;
            }
        }
        for (j, support) in dummies.iter().enumerate() {
            assert_eq!(support.universe(), nf);
            let dummy = (c.volume_count() + j) as u32;
            for f in support {
                let slot = ends[f].iter().position(|&v| v == NO_VOLUME).expect(
                    "dummy attached to a face that already has two volumes",
                );
                ends[f][slot] = dummy;
            }
        }

        let mut degree = vec![0u32; nv];
        for &[a, b] in &ends {
            if a != NO_VOLUME && b != NO_VOLUME {
                degree[a as usize] += 1;
                degree[b as usize] += 1;
            }
        }
        let mut off = Vec::with_capacity(nv + 1);
        off.push(0u32);
        for v in 0..nv {
            off.push(off[v] + degree[v]);
        }
        let total = off[nv] as usize;
        let mut arc_face = vec![0u32; total];
        let mut arc_to = vec![0u32; total];
        let mut cursor: Vec<u32> = off[..nv].to_vec();
        for (f, &[a, b]) in ends.iter().enumerate() {
            if a == NO_VOLUME || b == NO_VOLUME {
                continue;
            }
            for (from, to) in [(a, b), (b, a)] {
                let slot = cursor[from as usize] as usize;
                arc_face[slot] = f as u32;
                arc_to[slot] = to;
                cursor[from as usize] += 1;
            }
        }
        VolumeGraph { volume_count: nv, face_count: nf, ends, off, arc_face, arc_to }
    }

    pub fn volume_count(&self) -> usize {
        self.volume_count
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    /// The two volumes a face connects, if it is an arc.
    pub fn arc_ends(&self, f: usize) -> Option<(usize, usize)> {
        let [a, b] = self.ends[f];
        (a != NO_VOLUME && b != NO_VOLUME).then_some((a as usize, b as usize))
    }

    /// Baseline cut-set test: BFS over all arcs whose face is not excluded.
    pub fn is_cut_set(&self, excluded: &FaceSet) -> bool {
        let mut scratch = BfsScratch::new(self.volume_count);
        self.is_cut_set_with(excluded, &mut scratch)
    }

    /// Baseline test with reusable scratch space.
    pub fn is_cut_set_with(&self, excluded: &FaceSet, scratch: &mut BfsScratch) -> bool {
        assert_eq!(excluded.universe(), self.face_count);
        if self.volume_count <= 1 {
            return false;
        }
        let epoch = scratch.next_epoch();
        scratch.stack.clear();
        scratch.stack.push(0);
        scratch.visited[0] = epoch;
        let mut seen = 1usize;
        while let Some(v) = scratch.stack.pop() {
            let (lo, hi) = (self.off[v as usize] as usize, self.off[v as usize + 1] as usize);
            for i in lo..hi {
                if excluded.contains(self.arc_face[i] as usize) {
                    continue;
                }
                let w = self.arc_to[i];
                if scratch.visited[w as usize] != epoch {
                    scratch.visited[w as usize] = epoch;
                    scratch.stack.push(w);
                    seen += 1;
                }
            }
        }
        seen < self.volume_count
    }
}

/// Epoch-stamped BFS buffers; reusing them avoids clearing a visited array
/// per query.
pub struct BfsScratch {
    visited: Vec<u32>,
    epoch: u32,
    stack: Vec<u32>,
}

impl BfsScratch {
    pub fn new(volumes: usize) -> Self {
        BfsScratch { visited: vec![0; volumes], epoch: 0, stack: Vec::new() }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch += 1;
        if self.epoch == u32::MAX {
            self.visited.fill(0);
            self.epoch = 1;
        }
        self.epoch
    }
}

/// Incremental cut-set queries against a growing exclusion set.
///
/// `probe(f)` answers `is_cut_set(excluded ∪ {f})`; on a negative answer the
/// face joins the exclusion set, mirroring how exploration accepts faces.
/// Requires the initial `base` not to be a cut set, which also guarantees the
/// graph minus the exclusion set stays connected after every accepted probe.
pub struct CutSession<'g> {
    graph: &'g VolumeGraph,
    excluded: FaceSet,
    scratch: BfsScratch,
}

impl<'g> CutSession<'g> {
    pub fn new(graph: &'g VolumeGraph, base: FaceSet) -> Self {
        assert_eq!(base.universe(), graph.face_count);
        debug_assert!(!graph.is_cut_set(&base), "session base must not be a cut set");
        CutSession { graph, excluded: base, scratch: BfsScratch::new(graph.volume_count) }
    }

    /// Faces excluded so far (base plus accepted probes).
    pub fn excluded(&self) -> &FaceSet {
        &self.excluded
    }

    pub fn into_excluded(self) -> FaceSet {
        self.excluded
    }

    /// True iff `excluded ∪ {face}` is a cut set; accepts the face otherwise.
    ///
    /// Removing a single arc from a connected graph can only separate that
    /// arc's two endpoints, so a targeted search from one endpoint to the
    /// other (skipping excluded arcs and the probed face itself) decides the
    /// query without a full sweep.
    pub fn probe(&mut self, face: usize) -> bool {
        debug_assert!(!self.excluded.contains(face), "face probed twice");
        let Some((from, to)) = self.graph.arc_ends(face) else {
            // Not an arc: removing it cannot disconnect anything.
            self.excluded.insert(face);
            return false;
        };
        let g = self.graph;
        let epoch = self.scratch.next_epoch();
        self.scratch.stack.clear();
        self.scratch.stack.push(from as u32);
        self.scratch.visited[from] = epoch;
        let mut reached = false;
        'bfs: while let Some(v) = self.scratch.stack.pop() {
            let (lo, hi) = (g.off[v as usize] as usize, g.off[v as usize + 1] as usize);
            for i in lo..hi {
                let af = g.arc_face[i] as usize;
                if af == face || self.excluded.contains(af) {
                    continue;
                }
                let w = g.arc_to[i] as usize;
                if self.scratch.visited[w] != epoch {
                    if w == to {
                        reached = true;
                        break 'bfs;
                    }
                    self.scratch.visited[w] = epoch;
                    self.scratch.stack.push(w as u32);
                }
            }
        }
        if reached {
            self.excluded.insert(face);
            false
        } else {
            true
        }
    }
}
