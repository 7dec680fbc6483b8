//! Dense GF(2) linear algebra used as an independent test oracle.
//!
//! Everything here works directly on incidence data via Gaussian
//! elimination and shares no code with the combinatorial decoder paths
//! (exploration, peeling, cut-set search), so agreement between the two is
//! meaningful evidence. The routines are polynomial but deliberately naive;
//! they are meant for small lattices and rare fallback use, not for the
//! Monte Carlo hot path.

use thiserror::Error;

use crate::bits::{EdgeSet, FaceSet, VolumeSet};
use crate::lattice::ChainComplex3;

#[derive(Error, Debug)]
pub enum OracleError {
    #[error("nullspace dimension {dim} exceeds the enumeration guard {max}")]
    NullspaceTooLarge { dim: usize, max: usize },
    #[error("syndrome is infeasible over the given face support")]
    Infeasible,
}

/// Maximum nullspace dimension [`min_weight_decode`] will enumerate (2^24
/// coset elements); large enough for every lattice the tests exercise.
pub const MIN_WEIGHT_GUARD: usize = 24;

/// Row-major dense bit matrix.
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Gf2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + (c >> 6)] |= 1 << (c & 63);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.words + (c >> 6)] >> (c & 63) & 1 != 0
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    fn xor_row(&mut self, target: usize, source: usize) {
        let (t, s) = (target * self.words, source * self.words);
        for w in 0..self.words {
            let v = self.data[s + w];
            self.data[t + w] ^= v;
        }
    }

    /// Gauss-Jordan over columns `0..col_limit` (columns beyond the limit,
    /// such as an augmented right-hand side, are carried along but never
    /// pivoted). Returns the pivot column of each of the leading `rank` rows.
    pub fn eliminate(&mut self, col_limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..col_limit {
            let Some(pr) = (next_row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(next_row, pr);
            for r in 0..self.rows {
                if r != next_row && self.get(r, col) {
                    self.xor_row(r, next_row);
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == self.rows {
                break;
            }
        }
        pivots
    }
}

/// Outcome of [`solve_syndrome`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SolveOutcome {
    /// Exactly one face set inside the mask produces the syndrome.
    Unique(FaceSet),
    /// A particular solution plus a nontrivial solution space.
    NonUnique { solution: FaceSet, null_dim: usize },
    /// No face set inside the mask produces the syndrome.
    Infeasible,
}

impl SolveOutcome {
    /// Any solution, unique or not.
    pub fn solution(&self) -> Option<&FaceSet> {
        match self {
            SolveOutcome::Unique(s) => Some(s),
            SolveOutcome::NonUnique { solution, .. } => Some(solution),
            SolveOutcome::Infeasible => None,
        }
    }
}

struct LinearSystem {
    matrix: Gf2Matrix,
    cols: Vec<u32>,
}

/// Boundary map restricted to the masked faces, augmented with the syndrome
/// as the last column.
fn boundary_system(c: &ChainComplex3, syndrome: &EdgeSet, mask: &FaceSet) -> LinearSystem {
    assert_eq!(mask.universe(), c.face_count());
    assert_eq!(syndrome.universe(), c.edge_count());
    let cols: Vec<u32> = mask.iter().map(|f| f as u32).collect();
    let mut m = Gf2Matrix::new(c.edge_count(), cols.len() + 1);
    for (j, &f) in cols.iter().enumerate() {
        for &e in c.face_edges(f as usize) {
            m.set(e as usize, j);
        }
    }
    for e in syndrome {
        m.set(e, cols.len());
    }
    LinearSystem { matrix: m, cols }
}

/// Reference solver for the decoding problem restricted to a face mask.
pub fn solve_syndrome(c: &ChainComplex3, syndrome: &EdgeSet, mask: &FaceSet) -> SolveOutcome {
    let sys = boundary_system(c, syndrome, mask);
    match solve_system(sys, c.face_count(), false) {
        None => SolveOutcome::Infeasible,
        Some((solution, _, 0)) => SolveOutcome::Unique(solution),
        Some((solution, _, null_dim)) => SolveOutcome::NonUnique { solution, null_dim },
    }
}

/// Solves the augmented system, mapping column indices back to face ids in a
/// set over `universe`. Returns the particular solution with all free
/// variables zero, the nullspace basis when requested, and the nullspace
/// dimension; `None` means the system is contradictory.
fn solve_system(
    sys: LinearSystem,
    universe: usize,
    want_nullspace: bool,
) -> Option<(FaceSet, Vec<FaceSet>, usize)> {
    let ncols = sys.cols.len();
    let aug = ncols;
    let mut matrix = sys.matrix;
    let cols = sys.cols;
    let pivots = matrix.eliminate(ncols);
    let rank = pivots.len();
    for r in rank..matrix.rows() {
        if matrix.get(r, aug) {
            return None;
        }
    }
    let mut solution = FaceSet::new(universe);
    for (row, &col) in pivots.iter().enumerate() {
        if matrix.get(row, aug) {
            solution.insert(cols[col] as usize);
        }
    }
    let null_dim = ncols - rank;
    let mut basis = Vec::new();
    if want_nullspace && null_dim > 0 {
        let mut is_pivot = vec![false; ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in (0..ncols).filter(|&c| !is_pivot[c]) {
            let mut v = FaceSet::new(universe);
            v.insert(cols[free] as usize);
            for (row, &col) in pivots.iter().enumerate() {
                if matrix.get(row, free) {
                    v.insert(cols[col] as usize);
                }
            }
            basis.push(v);
        }
    }
    Some((solution, basis, null_dim))
}

/// True iff some volume set has exactly `faces` as its GF(2) boundary, i.e.
/// the corresponding X operator is a stabilizer. Requires a zero-syndrome
/// input.
pub fn is_stabilizer_support(c: &ChainComplex3, faces: &FaceSet) -> bool {
    debug_assert!(
        c.boundary_of_faces(faces).is_empty(),
        "stabilizer query on a face set with nonzero syndrome"
    );
    let nv = c.volume_count();
    let nf = c.face_count();
    let mut m = Gf2Matrix::new(nf, nv + 1);
    for v in 0..nv {
        for &f in c.volume_faces(v) {
            m.set(f as usize, v);
        }
    }
    for f in faces {
        m.set(f, nv);
    }
    let pivots = m.eliminate(nv);
    for r in pivots.len()..nf {
        if m.get(r, nv) {
            return false;
        }
    }
    true
}

/// Minimum-weight solution of `∂(x) = syndrome` over all faces, by exhausting
/// the solution coset. Fails once the nullspace exceeds [`MIN_WEIGHT_GUARD`].
pub fn min_weight_decode(c: &ChainComplex3, syndrome: &EdgeSet) -> Result<FaceSet, OracleError> {
    let mask = FaceSet::from_ids(c.face_count(), 0..c.face_count());
    let sys = boundary_system(c, syndrome, &mask);
    let Some((solution, basis, null_dim)) = solve_system(sys, c.face_count(), true) else {
        return Err(OracleError::Infeasible);
    };
    if null_dim > MIN_WEIGHT_GUARD {
        return Err(OracleError::NullspaceTooLarge { dim: null_dim, max: MIN_WEIGHT_GUARD });
    }
    // Gray-code walk over the coset: step k flips basis vector
    // trailing_zeros(k).
    let mut current = solution.clone();
    let mut best = solution;
    let mut best_weight = best.weight();
    for k in 1u64..(1u64 << null_dim) {
        let i = k.trailing_zeros() as usize;
        current.xor_with(&basis[i]);
        let w = current.weight();
        if w < best_weight {
            best_weight = w;
            best = current.clone();
        }
    }
    Ok(best)
}

/// Cut-set oracle: true iff some volume set `V`, other than the empty set
/// and the set of all volumes, has `∂(V) ⊆ k`. With `dummies` given, the
/// test runs over the augmented lattice whose extra volumes have the given
/// face sets as boundaries.
pub fn has_enclosed_volume(c: &ChainComplex3, dummies: Option<&[FaceSet]>, k: &FaceSet) -> bool {
    let nv = c.volume_count();
    let nd = dummies.map_or(0, |d| d.len());
    let total = nv + nd;
    if total == 0 {
        return false;
    }
    let nf = c.face_count();
    // Rows: faces outside k must be covered an even number of times.
    let row_of: Vec<Option<u32>> = {
        let mut rows = vec![None; nf];
        let mut next = 0u32;
        for (f, slot) in rows.iter_mut().enumerate() {
            if !k.contains(f) {
                *slot = Some(next);
                next += 1;
            }
        }
        rows
    };
    let nrows = row_of.iter().flatten().count();
    let mut m = Gf2Matrix::new(nrows.max(1), total);
    for v in 0..nv {
        for &f in c.volume_faces(v) {
            if let Some(r) = row_of[f as usize] {
                m.set(r as usize, v);
            }
        }
    }
    if let Some(dummies) = dummies {
        for (j, support) in dummies.iter().enumerate() {
            for f in support {
                if let Some(r) = row_of[f] {
                    m.set(r as usize, nv + j);
                }
            }
        }
    }
    let pivots = m.eliminate(total);
    let null_dim = total - pivots.len();
    match null_dim {
        0 => false,
        1 => {
            // The single basis vector: free column plus dependent pivots.
            let mut is_pivot = vec![false; total];
            for &c in &pivots {
                is_pivot[c] = true;
            }
            let free = (0..total).find(|&c| !is_pivot[c]).unwrap();
            let mut v = VolumeSet::new(total);
            v.insert(free);
            for (row, &col) in pivots.iter().enumerate() {
                if m.get(row, free) {
                    v.insert(col);
                }
            }
            v.weight() != total
        }
        // Dimension two or more: the space has at least four elements, and at
        // most two of them ({0, all-volumes}) are excluded.
        _ => true,
    }
}
