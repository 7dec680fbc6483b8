//! Three-dimensional cell complexes: storage, builders, boundary maps and
//! validation.
//!
//! A [`ChainComplex3`] holds vertices, edges, faces and volumes with dense
//! 0-based ids. Edges carry one or two vertex endpoints (an edge with a single
//! endpoint is *partial*: its other end lies on an open boundary). Faces are
//! edge sets, volumes are face sets; all incidence maps are precomputed both
//! ways.
//!
//! The decoder relies on two local conditions, checked by [`validate`]:
//!
//! * every face is incident on at most two volumes, and the faces around any
//!   edge can be arranged into a single face path (terminating on two
//!   degree-one faces) or a single face cycle;
//! * every face boundary is a closed edge loop or an open edge path whose two
//!   terminal edges are partial.
//!
//! The global condition that the complex has no internal voids holds by
//! construction for the built-in families and is reported as unverified for
//! loaded lattices.

use std::fmt;

use thiserror::Error;

use crate::bits::{EdgeSet, FaceSet};

/// Which constructor produced a complex. Decoders use this to pick canonical
/// logical representatives and artificial boundaries for the cubic torus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    /// Periodic cubic lattice with `l` vertices per direction.
    CubicTorus { l: usize },
    /// Closed block of `lx * ly * lz` cubes; all outer faces have degree one.
    BoundarySlab { lx: usize, ly: usize, lz: usize },
    /// Block with open x/y sides (partial edges) and smooth z walls; its
    /// degree-one faces split into a top and a bottom class.
    OpenSlab { lx: usize, ly: usize, lz: usize },
    /// Anything assembled from parts or loaded from a file.
    Custom,
}

/// Whether the absence of internal voids is guaranteed by the constructor.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum L1Status {
    ByConstruction,
    Unverified,
}

/// Logical operator supports supplied alongside a custom lattice.
#[derive(Clone, Debug)]
pub struct SuppliedBasis {
    pub x_reps: Vec<FaceSet>,
    pub z_reps: Vec<FaceSet>,
}

#[derive(Error, Debug)]
pub enum LatticeError {
    #[error("invalid lattice size: {0}")]
    BadSize(String),
    #[error("structural error: {0}")]
    Structure(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation failed with {} violation(s), first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A local defect found by [`validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// A face incident on zero or more than two volumes.
    FaceDegree { face: usize, volumes: usize },
    /// An edge appearing an odd number of times over the faces of a volume
    /// (the composite boundary map fails to vanish there).
    VolumeNotClosed { volume: usize, edge: usize },
    /// The faces around an edge do not form a single face path or cycle.
    EdgeLink { edge: usize, issue: LinkIssue },
    /// A face boundary that is neither a closed loop nor an open path with
    /// two partial terminal edges.
    FaceBoundaryForm { face: usize, issue: BoundaryIssue },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinkIssue {
    /// No face is incident on the edge.
    NoFaces,
    /// The single face around the edge is not a degree-one face.
    LoneFaceNotTerminal,
    /// A volume holds `count != 2` of the edge's faces.
    VolumeCount { volume: usize, count: usize },
    /// The faces around the edge split into several paths/cycles.
    Split,
    /// A path arrangement exists but the number of degree-one faces is not 0
    /// or 2.
    Terminals { degree_one: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BoundaryIssue {
    /// A vertex met by `count != 2` boundary edges of the face.
    VertexDegree { vertex: usize, count: usize },
    /// The boundary edges split into several loops/paths.
    Split,
    /// The boundary has `count` partial edges; only 0 or 2 are allowed.
    PartialCount { count: usize },
    /// The face has no edges at all.
    Empty,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FaceDegree { face, volumes } => {
                write!(f, "face {face} is incident on {volumes} volumes")
            }
            Violation::VolumeNotClosed { volume, edge } => {
                write!(f, "volume {volume} has an odd edge count at edge {edge}")
            }
            Violation::EdgeLink { edge, issue } => {
                write!(f, "edge {edge} has a malformed face link: {issue:?}")
            }
            Violation::FaceBoundaryForm { face, issue } => {
                write!(f, "face {face} has a malformed boundary: {issue:?}")
            }
        }
    }
}

/// Result of [`validate`].
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub l1: L1Status,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Volume connectivity after removing a face set; see
/// [`ChainComplex3::volume_components`].
#[derive(Clone, Debug)]
pub struct VolumeComponents {
    /// Component label per volume id.
    pub label: Vec<u32>,
    /// Number of connected components.
    pub count: usize,
}

const NO_VERTEX: u32 = u32::MAX;

/// A 3D cell complex with dense ids and precomputed incidences.
#[derive(Clone, Debug)]
pub struct ChainComplex3 {
    vertex_count: usize,
    periodic: bool,
    family: Family,
    l1: L1Status,
    /// Edge endpoints; second entry is `NO_VERTEX` for partial edges.
    edge_ends: Vec<[u32; 2]>,
    face_edge_off: Vec<u32>,
    face_edge_ids: Vec<u32>,
    volume_face_off: Vec<u32>,
    volume_face_ids: Vec<u32>,
    edge_face_off: Vec<u32>,
    edge_face_ids: Vec<u32>,
    face_volume_off: Vec<u32>,
    face_volume_ids: Vec<u32>,
    supplied_basis: Option<SuppliedBasis>,
}

fn csr(count: usize, lists: impl Iterator<Item = Vec<u32>> + Clone) -> (Vec<u32>, Vec<u32>) {
    let mut off = Vec::with_capacity(count + 1);
    let mut ids = Vec::new();
    off.push(0);
    for list in lists {
        ids.extend_from_slice(&list);
        off.push(ids.len() as u32);
    }
    (off, ids)
}

impl ChainComplex3 {
    /// Assembles a complex from raw parts. Performs structural checks only
    /// (id ranges, duplicates, empty cells); topological conditions are the
    /// job of [`validate`]. The result has [`Family::Custom`] and unverified
    /// L1 status.
    pub fn from_parts(
        vertex_count: usize,
        edges: Vec<(usize, Option<usize>)>,
        faces: Vec<Vec<usize>>,
        volumes: Vec<Vec<usize>>,
        periodic: bool,
    ) -> Result<ChainComplex3, LatticeError> {
        let max = u32::MAX as usize;
        if vertex_count >= max || edges.len() >= max || faces.len() >= max || volumes.len() >= max
        {
            return Err(LatticeError::Structure("cell count exceeds u32 range".into()));
        }
        let mut edge_ends = Vec::with_capacity(edges.len());
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= vertex_count {
                return Err(LatticeError::Structure(format!(
                    "edge {i} references vertex {a} out of range {vertex_count}"
                )));
            }
            let b = match b {
                Some(v) if v >= vertex_count => {
                    return Err(LatticeError::Structure(format!(
                        "edge {i} references vertex {v} out of range {vertex_count}"
                    )));
                }
                Some(v) => v as u32,
                None => NO_VERTEX,
            };
            edge_ends.push([a as u32, b]);
        }

        let check_list = |kind: &str, i: usize, list: &[usize], bound: usize| {
            if list.is_empty() {
                return Err(LatticeError::Structure(format!("{kind} {i} is empty")));
            }
            let mut sorted: Vec<usize> = list.to_vec();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(LatticeError::Structure(format!(
                        "{kind} {i} lists id {} twice",
                        w[0]
                    )));
                }
            }
            if *sorted.last().unwrap() >= bound {
                return Err(LatticeError::Structure(format!(
                    "{kind} {i} references id {} out of range {bound}",
                    sorted.last().unwrap()
                )));
            }
            Ok(())
        };
        for (i, list) in faces.iter().enumerate() {
            check_list("face", i, list, edges.len())?;
        }
        for (i, list) in volumes.iter().enumerate() {
            check_list("volume", i, list, faces.len())?;
        }

        let face_lists: Vec<Vec<u32>> = faces
            .iter()
            .map(|l| {
                let mut v: Vec<u32> = l.iter().map(|&e| e as u32).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let volume_lists: Vec<Vec<u32>> = volumes
            .iter()
            .map(|l| {
                let mut v: Vec<u32> = l.iter().map(|&f| f as u32).collect();
                v.sort_unstable();
                v
            })
            .collect();

        let mut edge_faces: Vec<Vec<u32>> = vec![Vec::new(); edges.len()];
        for (f, list) in face_lists.iter().enumerate() {
            for &e in list {
                edge_faces[e as usize].push(f as u32);
            }
        }
        let mut face_volumes: Vec<Vec<u32>> = vec![Vec::new(); faces.len()];
        for (v, list) in volume_lists.iter().enumerate() {
            for &f in list {
                face_volumes[f as usize].push(v as u32);
            }
        }

        let (face_edge_off, face_edge_ids) = csr(faces.len(), face_lists.iter().cloned());
        let (volume_face_off, volume_face_ids) = csr(volumes.len(), volume_lists.iter().cloned());
        let (edge_face_off, edge_face_ids) = csr(edges.len(), edge_faces.iter().cloned());
        let (face_volume_off, face_volume_ids) = csr(faces.len(), face_volumes.iter().cloned());

        Ok(ChainComplex3 {
            vertex_count,
            periodic,
            family: Family::Custom,
            l1: L1Status::Unverified,
            edge_ends,
            face_edge_off,
            face_edge_ids,
            volume_face_off,
            volume_face_ids,
            edge_face_off,
            edge_face_ids,
            face_volume_off,
            face_volume_ids,
            supplied_basis: None,
        })
    }

    /// Attaches logical representatives (paired X and Z supports) to a custom
    /// complex, as carried by lattice files.
    pub fn with_supplied_basis(
        mut self,
        x_reps: Vec<FaceSet>,
        z_reps: Vec<FaceSet>,
    ) -> Result<ChainComplex3, LatticeError> {
        if x_reps.len() != z_reps.len() {
            return Err(LatticeError::Structure(format!(
                "basis has {} X supports but {} Z supports",
                x_reps.len(),
                z_reps.len()
            )));
        }
        for s in x_reps.iter().chain(&z_reps) {
            if s.universe() != self.face_count() {
                return Err(LatticeError::Structure(
                    "basis support sized for a different face universe".into(),
                ));
            }
        }
        self.supplied_basis = Some(SuppliedBasis { x_reps, z_reps });
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ends.len()
    }

    pub fn face_count(&self) -> usize {
        self.face_edge_off.len() - 1
    }

    pub fn volume_count(&self) -> usize {
        self.volume_face_off.len() - 1
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn l1_status(&self) -> L1Status {
        self.l1
    }

    pub fn supplied_basis(&self) -> Option<&SuppliedBasis> {
        self.supplied_basis.as_ref()
    }

    /// Endpoints of an edge; `None` second coordinate for a partial edge.
    pub fn edge_endpoints(&self, e: usize) -> (usize, Option<usize>) {
        let [a, b] = self.edge_ends[e];
        (a as usize, (b != NO_VERTEX).then_some(b as usize))
    }

    pub fn is_partial_edge(&self, e: usize) -> bool {
        self.edge_ends[e][1] == NO_VERTEX
    }

    /// Edges of the face boundary, ascending.
    pub fn face_edges(&self, f: usize) -> &[u32] {
        &self.face_edge_ids[self.face_edge_off[f] as usize..self.face_edge_off[f + 1] as usize]
    }

    /// Faces of the volume boundary, ascending.
    pub fn volume_faces(&self, v: usize) -> &[u32] {
        &self.volume_face_ids
            [self.volume_face_off[v] as usize..self.volume_face_off[v + 1] as usize]
    }

    /// Faces incident on an edge (the support of the edge's Z check).
    pub fn edge_faces(&self, e: usize) -> &[u32] {
        &self.edge_face_ids[self.edge_face_off[e] as usize..self.edge_face_off[e + 1] as usize]
    }

    /// Volumes incident on a face (at most two on a valid complex).
    pub fn face_volumes(&self, f: usize) -> &[u32] {
        &self.face_volume_ids
            [self.face_volume_off[f] as usize..self.face_volume_off[f + 1] as usize]
    }

    pub fn face_degree(&self, f: usize) -> usize {
        (self.face_volume_off[f + 1] - self.face_volume_off[f]) as usize
    }

    /// All faces incident on exactly one volume.
    pub fn degree_one_faces(&self) -> FaceSet {
        let mut s = self.empty_face_set();
        for f in 0..self.face_count() {
            if self.face_degree(f) == 1 {
                s.insert(f);
            }
        }
        s
    }

    pub fn empty_face_set(&self) -> FaceSet {
        FaceSet::new(self.face_count())
    }

    pub fn empty_edge_set(&self) -> EdgeSet {
        EdgeSet::new(self.edge_count())
    }

    pub fn face_set<I: IntoIterator<Item = usize>>(&self, ids: I) -> FaceSet {
        FaceSet::from_ids(self.face_count(), ids)
    }

    pub fn edge_set<I: IntoIterator<Item = usize>>(&self, ids: I) -> EdgeSet {
        EdgeSet::from_ids(self.edge_count(), ids)
    }

    /// GF(2) boundary of a face set: the edges covered an odd number of
    /// times. Applied to an error this is its syndrome.
    pub fn boundary_of_faces(&self, faces: &FaceSet) -> EdgeSet {
        assert_eq!(faces.universe(), self.face_count(), "face set universe mismatch");
        let mut out = self.empty_edge_set();
        for f in faces {
            for &e in self.face_edges(f) {
                out.toggle(e as usize);
            }
        }
        out
    }

    /// GF(2) coboundary of an edge set: the faces incident on an odd number
    /// of the given edges.
    pub fn coboundary_of_edges(&self, edges: &EdgeSet) -> FaceSet {
        assert_eq!(edges.universe(), self.edge_count(), "edge set universe mismatch");
        let mut out = self.empty_face_set();
        for e in edges {
            for &f in self.edge_faces(e) {
                out.toggle(f as usize);
            }
        }
        out
    }

    /// Connected components of the volume adjacency graph after removing the
    /// excluded faces. Two volumes are adjacent when they share a
    /// non-excluded face.
    pub fn volume_components(&self, excluded: &FaceSet) -> VolumeComponents {
        assert_eq!(excluded.universe(), self.face_count());
        let nv = self.volume_count();
        let mut label = vec![u32::MAX; nv];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..nv {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = count as u32;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &f in self.volume_faces(v) {
                    if excluded.contains(f as usize) {
                        continue;
                    }
                    for &w in self.face_volumes(f as usize) {
                        let w = w as usize;
                        if label[w] == u32::MAX {
                            label[w] = count as u32;
                            stack.push(w);
                        }
                    }
                }
            }
            count += 1;
        }
        VolumeComponents { label, count }
    }

    /// Checks the local conditions the decoder relies on. An empty violation
    /// list means the complex is a valid decoding lattice (up to the L1
    /// status, which loaded lattices carry as unverified).
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        for f in 0..self.face_count() {
            let deg = self.face_degree(f);
            if deg == 0 || deg > 2 {
                violations.push(Violation::FaceDegree { face: f, volumes: deg });
            }
        }

        // Composite boundary: every edge must appear an even number of times
        // across the faces of each volume.
        let mut edge_count: Vec<(u32, u32)> = Vec::new();
        for v in 0..self.volume_count() {
            edge_count.clear();
            for &f in self.volume_faces(v) {
                for &e in self.face_edges(f as usize) {
                    edge_count.push((e, 1));
                }
            }
            edge_count.sort_unstable();
            let mut i = 0;
            while i < edge_count.len() {
                let e = edge_count[i].0;
                let mut n = 0;
                while i < edge_count.len() && edge_count[i].0 == e {
                    n += 1;
                    i += 1;
                }
                if n % 2 != 0 {
                    violations.push(Violation::VolumeNotClosed { volume: v, edge: e as usize });
                }
            }
        }

        for e in 0..self.edge_count() {
            if let Some(issue) = self.check_edge_link(e) {
                violations.push(Violation::EdgeLink { edge: e, issue });
            }
        }

        for f in 0..self.face_count() {
            if let Some(issue) = self.check_face_boundary(f) {
                violations.push(Violation::FaceBoundaryForm { face: f, issue });
            }
        }

        ValidationReport { l1: self.l1, violations }
    }

    /// The faces around `e` must arrange into one face path (both terminals
    /// degree-one) or one face cycle. Equivalently: every volume touching the
    /// faces holds exactly two of them, the contact graph is connected, and
    /// the number of degree-one faces is 0 or 2.
    fn check_edge_link(&self, e: usize) -> Option<LinkIssue> {
        let faces = self.edge_faces(e);
        match faces.len() {
            0 => return Some(LinkIssue::NoFaces),
            1 => {
                return (self.face_degree(faces[0] as usize) != 1)
                    .then_some(LinkIssue::LoneFaceNotTerminal);
            }
            _ => {}
        }

        // Volumes touching the link, with the (up to two) link faces they hold.
        let mut contacts: Vec<(u32, u32, u32)> = Vec::new(); // (volume, face, face)
        {
            let mut touch: Vec<(u32, u32)> = Vec::new();
            for &f in faces {
                for &v in self.face_volumes(f as usize) {
                    touch.push((v, f));
                }
            }
            touch.sort_unstable();
            let mut i = 0;
            while i < touch.len() {
                let v = touch[i].0;
                let mut members = Vec::new();
                while i < touch.len() && touch[i].0 == v {
                    members.push(touch[i].1);
                    i += 1;
                }
                if members.len() != 2 {
                    return Some(LinkIssue::VolumeCount {
                        volume: v as usize,
                        count: members.len(),
                    });
                }
                contacts.push((v, members[0], members[1]));
            }
        }

        // Union faces joined by a shared volume; the link must be one piece.
        let index = |f: u32| faces.binary_search(&f).unwrap();
        let mut parent: Vec<usize> = (0..faces.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(_, a, b) in &contacts {
            let (ra, rb) = (find(&mut parent, index(a)), find(&mut parent, index(b)));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        for i in 1..faces.len() {
            if find(&mut parent, i) != root {
                return Some(LinkIssue::Split);
            }
        }

        let degree_one = faces
            .iter()
            .filter(|&&f| self.face_degree(f as usize) == 1)
            .count();
        if degree_one != 0 && degree_one != 2 {
            return Some(LinkIssue::Terminals { degree_one });
        }
        None
    }

    /// The boundary of a face must be one closed edge loop (no partial
    /// edges), or one open edge path whose two terminal edges are partial.
    /// Both forms meet every touched vertex with exactly two boundary edges.
    fn check_face_boundary(&self, f: usize) -> Option<BoundaryIssue> {
        let edges = self.face_edges(f);
        if edges.is_empty() {
            return Some(BoundaryIssue::Empty);
        }

        let mut partial = 0usize;
        let mut touch: Vec<(u32, u32)> = Vec::new(); // (vertex, edge)
        for &e in edges {
            let [a, b] = self.edge_ends[e as usize];
            touch.push((a, e));
            if b == NO_VERTEX {
                partial += 1;
            } else {
                touch.push((b, e));
            }
        }
        if partial != 0 && partial != 2 {
            return Some(BoundaryIssue::PartialCount { count: partial });
        }

        touch.sort_unstable();
        let index = |e: u32| edges.binary_search(&e).unwrap();
        let mut parent: Vec<usize> = (0..edges.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut i = 0;
        while i < touch.len() {
            let v = touch[i].0;
            let first = touch[i].1;
            let mut n = 0;
            while i < touch.len() && touch[i].0 == v {
                let (ra, rb) = (
                    find(&mut parent, index(first)),
                    find(&mut parent, index(touch[i].1)),
                );
                parent[ra] = rb;
                n += 1;
                i += 1;
            }
            if n != 2 {
                return Some(BoundaryIssue::VertexDegree { vertex: v as usize, count: n });
            }
        }
        let root = find(&mut parent, 0);
        for j in 1..edges.len() {
            if find(&mut parent, j) != root {
                return Some(BoundaryIssue::Split);
            }
        }
        None
    }
}

/// Direction/orientation tags for the cubic families. `X/Y/Z` index edge
/// directions; faces use the orthogonal pair (`Xy` spans x and y, normal z).
#[derive(Clone, Copy)]
enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

/// Id arithmetic for the cubic torus: vertex `(x, y, z)` is `x + l*(y + l*z)`,
/// and edges/faces/volumes attach three (or one) cells per vertex.
#[derive(Clone, Copy)]
pub(crate) struct TorusIndex {
    pub l: usize,
}

impl TorusIndex {
    pub fn vertex(&self, x: usize, y: usize, z: usize) -> usize {
        let l = self.l;
        (x % l) + l * ((y % l) + l * (z % l))
    }

    /// Edge from `(x,y,z)` along direction `dir` (0 = x, 1 = y, 2 = z).
    pub fn edge(&self, x: usize, y: usize, z: usize, dir: usize) -> usize {
        3 * self.vertex(x, y, z) + dir
    }

    /// Face at `(x,y,z)` with orientation `o` (0 = xy, 1 = yz, 2 = zx).
    pub fn face(&self, x: usize, y: usize, z: usize, o: usize) -> usize {
        3 * self.vertex(x, y, z) + o
    }

    pub fn volume(&self, x: usize, y: usize, z: usize) -> usize {
        self.vertex(x, y, z)
    }

    /// The three axis planes through the cell at `offset`: all xy faces at
    /// z = oz, all yz faces at x = ox, all zx faces at y = oy. Each is a
    /// logical X support; their union is the default artificial boundary.
    pub fn axis_planes(&self, offset: (usize, usize, usize)) -> Vec<FaceSet> {
        let l = self.l;
        let (ox, oy, oz) = offset;
        let mut planes = vec![FaceSet::new(3 * l * l * l); 3];
        for a in 0..l {
            for b in 0..l {
                planes[0].insert(self.face(a, b, oz, 0));
                planes[1].insert(self.face(ox, a, b, 1));
                planes[2].insert(self.face(b, oy, a, 2));
            }
        }
        planes
    }

    /// Winding lines dual to [`Self::axis_planes`] at offset `(0,0,0)`: the
    /// i-th line crosses the i-th plane in exactly one face and the others in
    /// none. Each is a logical Z support.
    pub fn winding_lines(&self) -> Vec<FaceSet> {
        let l = self.l;
        let mut lines = vec![FaceSet::new(3 * l * l * l); 3];
        for t in 0..l {
            lines[0].insert(self.face(0, 0, t, 0));
            lines[1].insert(self.face(t, 0, 0, 1));
            lines[2].insert(self.face(0, t, 0, 2));
        }
        lines
    }
}

/// Periodic cubic lattice with `l ≥ 2` vertices per direction: `l³` vertices
/// and volumes, `3l³` edges and faces. Every edge touches four faces and
/// every face two volumes.
pub fn build_cubic_torus(l: usize) -> Result<ChainComplex3, LatticeError> {
    if l < 2 {
        return Err(LatticeError::BadSize(format!(
            "cubic torus needs l >= 2, got {l} (l = 1 collapses incidences)"
        )));
    }
    let t = TorusIndex { l };
    let n = l * l * l;

    let mut edges = vec![(0usize, None); 3 * n];
    let mut faces = vec![Vec::new(); 3 * n];
    let mut volumes = vec![Vec::new(); n];
    for z in 0..l {
        for y in 0..l {
            for x in 0..l {
                let shift = |d: usize, by: usize| (d + by) % l;
                for dir in 0..3 {
                    let (dx, dy, dz) = match dir {
                        0 => (1, 0, 0),
                        1 => (0, 1, 0),
                        _ => (0, 0, 1),
                    };
                    edges[t.edge(x, y, z, dir)] = (
                        t.vertex(x, y, z),
                        Some(t.vertex(shift(x, dx), shift(y, dy), shift(z, dz))),
                    );
                }
                let (ex, ey, ez) = (Axis::X as usize, Axis::Y as usize, Axis::Z as usize);
                faces[t.face(x, y, z, 0)] = vec![
                    t.edge(x, y, z, ex),
                    t.edge(x, shift(y, 1), z, ex),
                    t.edge(x, y, z, ey),
                    t.edge(shift(x, 1), y, z, ey),
                ];
                faces[t.face(x, y, z, 1)] = vec![
                    t.edge(x, y, z, ey),
                    t.edge(x, y, shift(z, 1), ey),
                    t.edge(x, y, z, ez),
                    t.edge(x, shift(y, 1), z, ez),
                ];
                faces[t.face(x, y, z, 2)] = vec![
                    t.edge(x, y, z, ez),
                    t.edge(shift(x, 1), y, z, ez),
                    t.edge(x, y, z, ex),
                    t.edge(x, y, shift(z, 1), ex),
                ];
                volumes[t.volume(x, y, z)] = vec![
                    t.face(x, y, z, 0),
                    t.face(x, y, shift(z, 1), 0),
                    t.face(x, y, z, 1),
                    t.face(shift(x, 1), y, z, 1),
                    t.face(x, y, z, 2),
                    t.face(x, shift(y, 1), z, 2),
                ];
            }
        }
    }

    let mut c = ChainComplex3::from_parts(n, edges, faces, volumes, true)?;
    c.family = Family::CubicTorus { l };
    c.l1 = L1Status::ByConstruction;
    Ok(c)
}

/// Shared machinery for the two slab builders: enumerate the cells of an
/// `lx * ly * lz` block in canonical order, keeping only cells the `alive`
/// predicates admit, and assign dense ids in enumeration order.
struct BlockBuilder {
    lx: usize,
    ly: usize,
    lz: usize,
    vertex_alive: fn(&BlockBuilder, usize, usize, usize) -> bool,
    /// Per-orientation face admission (0 = xy at x,y,z; 1 = yz; 2 = zx).
    face_alive: fn(&BlockBuilder, usize, usize, usize, usize) -> bool,
}

impl BlockBuilder {
    fn build(&self) -> Result<ChainComplex3, LatticeError> {
        let (lx, ly, lz) = (self.lx, self.ly, self.lz);
        let mut vertex_id = std::collections::HashMap::new();
        for z in 0..=lz {
            for y in 0..=ly {
                for x in 0..=lx {
                    if (self.vertex_alive)(self, x, y, z) {
                        vertex_id.insert((x, y, z), vertex_id.len());
                    }
                }
            }
        }

        // Edges: canonical key (x, y, z, dir); kept if at least one endpoint
        // vertex is alive, partial if exactly one.
        let mut edge_id = std::collections::HashMap::new();
        let mut edges = Vec::new();
        let deltas = [(1, 0, 0), (0, 1, 0), (0, 0, 1)];
        for z in 0..=lz {
            for y in 0..=ly {
                for x in 0..=lx {
                    for (dir, &(dx, dy, dz)) in deltas.iter().enumerate() {
                        let (x2, y2, z2) = (x + dx, y + dy, z + dz);
                        if x2 > lx || y2 > ly || z2 > lz {
                            continue;
                        }
                        let a = vertex_id.get(&(x, y, z)).copied();
                        let b = vertex_id.get(&(x2, y2, z2)).copied();
                        let ends = match (a, b) {
                            (Some(a), Some(b)) => (a, Some(b)),
                            (Some(a), None) => (a, None),
                            (None, Some(b)) => (b, None),
                            (None, None) => continue,
                        };
                        edge_id.insert((x, y, z, dir), edges.len());
                        edges.push(ends);
                    }
                }
            }
        }

        // Faces: canonical 4-edge boundaries filtered to surviving edges.
        let mut face_id = std::collections::HashMap::new();
        let mut faces = Vec::new();
        for z in 0..=lz {
            for y in 0..=ly {
                for x in 0..=lx {
                    for o in 0..3 {
                        let in_range = match o {
                            0 => x < lx && y < ly,
                            1 => y < ly && z < lz,
                            _ => z < lz && x < lx,
                        };
                        if !in_range || !(self.face_alive)(self, x, y, z, o) {
                            continue;
                        }
                        let canonical: [(usize, usize, usize, usize); 4] = match o {
                            0 => [(x, y, z, 0), (x, y + 1, z, 0), (x, y, z, 1), (x + 1, y, z, 1)],
                            1 => [(x, y, z, 1), (x, y, z + 1, 1), (x, y, z, 2), (x, y + 1, z, 2)],
                            _ => [(x, y, z, 2), (x + 1, y, z, 2), (x, y, z, 0), (x, y, z + 1, 0)],
                        };
                        let boundary: Vec<usize> = canonical
                            .iter()
                            .filter_map(|k| edge_id.get(k).copied())
                            .collect();
                        if boundary.is_empty() {
                            continue;
                        }
                        face_id.insert((x, y, z, o), faces.len());
                        faces.push(boundary);
                    }
                }
            }
        }

        let mut volumes = Vec::new();
        for z in 0..lz {
            for y in 0..ly {
                for x in 0..lx {
                    let cube: [(usize, usize, usize, usize); 6] = [
                        (x, y, z, 0),
                        (x, y, z + 1, 0),
                        (x, y, z, 1),
                        (x + 1, y, z, 1),
                        (x, y, z, 2),
                        (x, y + 1, z, 2),
                    ];
                    let boundary: Vec<usize> =
                        cube.iter().filter_map(|k| face_id.get(k).copied()).collect();
                    volumes.push(boundary);
                }
            }
        }

        ChainComplex3::from_parts(vertex_id.len(), edges, faces, volumes, false)
    }
}

/// Closed block of `lx * ly * lz` cubes (all ≥ 1). Every outer face has
/// degree one and there are no partial edges; all degree-one faces form a
/// single equivalence class, so the block encodes no logical qubit.
pub fn build_boundary_slab(lx: usize, ly: usize, lz: usize) -> Result<ChainComplex3, LatticeError> {
    if lx < 1 || ly < 1 || lz < 1 {
        return Err(LatticeError::BadSize(format!(
            "slab needs all sides >= 1, got {lx}x{ly}x{lz}"
        )));
    }
    let b = BlockBuilder {
        lx,
        ly,
        lz,
        vertex_alive: |_, _, _, _| true,
        face_alive: |_, _, _, _, _| true,
    };
    let mut c = b.build()?;
    c.family = Family::BoundarySlab { lx, ly, lz };
    c.l1 = L1Status::ByConstruction;
    Ok(c)
}

/// Block with open (rough) x/y sides and smooth z walls: the four side walls
/// lose their faces, the side vertex planes are removed, and edges that kept
/// a single endpoint become partial. Degree-one faces are exactly the top and
/// bottom walls, which form two equivalence classes, so the lattice encodes
/// one logical qubit. Needs `lx, ly ≥ 2` so interior vertices exist; the
/// degenerate `1x1xlz` column is built directly as a stack of faces hanging
/// off two partial edges.
pub fn build_open_slab(lx: usize, ly: usize, lz: usize) -> Result<ChainComplex3, LatticeError> {
    if lx == 1 && ly == 1 && lz >= 1 {
        return build_open_column(lz);
    }
    if lx < 2 || ly < 2 || lz < 1 {
        return Err(LatticeError::BadSize(format!(
            "open slab needs lx, ly >= 2 (or lx = ly = 1) and lz >= 1, got {lx}x{ly}x{lz}"
        )));
    }
    let b = BlockBuilder {
        lx,
        ly,
        lz,
        vertex_alive: |b, x, y, _| x >= 1 && x <= b.lx - 1 && y >= 1 && y <= b.ly - 1,
        face_alive: |b, x, y, _, o| match o {
            0 => true,                       // xy walls and slices stay
            1 => x >= 1 && x <= b.lx - 1,    // drop yz side walls
            _ => y >= 1 && y <= b.ly - 1,    // drop zx side walls
        },
    };
    let mut c = b.build()?;
    c.family = Family::OpenSlab { lx, ly, lz };
    c.l1 = L1Status::ByConstruction;
    Ok(c)
}

/// Limit of the open slab at a 1x1 cross section: every side vertex is gone,
/// so each square face keeps just its two partial edges, both hanging off a
/// single shared vertex. The stack has `lz + 1` faces and `lz` volumes; the
/// top and bottom faces are joined by both edges into one equivalence class.
fn build_open_column(lz: usize) -> Result<ChainComplex3, LatticeError> {
    let edges = vec![(0, None), (0, None)];
    let faces = vec![vec![0, 1]; lz + 1];
    let volumes = (0..lz).map(|i| vec![i, i + 1]).collect();
    let mut c = ChainComplex3::from_parts(1, edges, faces, volumes, false)?;
    c.family = Family::OpenSlab { lx: 1, ly: 1, lz };
    c.l1 = L1Status::ByConstruction;
    Ok(c)
}
