//! Checks, stabilizers, boundary classes and logical operators.
//!
//! The Z check of an edge acts on the faces around it; the X stabilizer of a
//! volume acts on its boundary faces. A bit-flip error (face set) is detected
//! by exactly the edges of its GF(2) boundary, so [`syndrome`] is
//! [`ChainComplex3::boundary_of_faces`].
//!
//! Degree-one faces fall into equivalence classes generated by the edges
//! whose surrounding faces form an open path: the path's two terminal faces
//! are equivalent (the edge's check is then a product of face Z operators on
//! a path between them). Each class powers one dummy volume of the augmented
//! lattice and, on lattices with boundary, one logical X representative
//! (minus one dependent class).

use thiserror::Error;

use crate::bits::{EdgeSet, FaceSet};
use crate::cutset::VolumeGraph;
use crate::lattice::{ChainComplex3, Family, TorusIndex};

/// Syndrome of a bit-flip error: the edges whose checks anticommute with it.
pub fn syndrome(c: &ChainComplex3, error: &FaceSet) -> EdgeSet {
    c.boundary_of_faces(error)
}

/// Partition of the degree-one faces into boundary equivalence classes,
/// ordered by their smallest face id.
#[derive(Clone, Debug)]
pub struct BoundaryClasses {
    pub classes: Vec<FaceSet>,
    /// Class index per face; `None` for faces of degree two.
    pub class_of: Vec<Option<u32>>,
}

impl BoundaryClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

/// Computes the boundary classes: degree-one faces are equivalent when some
/// edge's face path terminates on both.
pub fn face_equivalence_classes(c: &ChainComplex3) -> BoundaryClasses {
    let nf = c.face_count();
    let mut parent: Vec<u32> = (0..nf as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for e in 0..c.edge_count() {
        let mut terminals = c
            .edge_faces(e)
            .iter()
            .filter(|&&f| c.face_degree(f as usize) == 1);
        if let (Some(&a), Some(&b)) = (terminals.next(), terminals.next()) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra as usize] = rb;
        }
    }

    let degree_one = c.degree_one_faces();
    let mut class_of: Vec<Option<u32>> = vec![None; nf];
    let mut classes: Vec<FaceSet> = Vec::new();
    let mut root_class: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    for f in &degree_one {
        let root = find(&mut parent, f as u32);
        let idx = *root_class.entry(root).or_insert_with(|| {
            classes.push(FaceSet::new(nf));
            (classes.len() - 1) as u32
        });
        classes[idx as usize].insert(f);
        class_of[f] = Some(idx);
    }
    BoundaryClasses { classes, class_of }
}

/// The augmented lattice: one dummy volume per boundary class, so every face
/// has exactly two incident volumes and cut sets coincide with face sets
/// containing stabilizer or logical supports.
pub struct AugmentedLattice {
    pub classes: BoundaryClasses,
    pub graph: VolumeGraph,
}

impl AugmentedLattice {
    pub fn dummy_count(&self) -> usize {
        self.classes.count()
    }
}

/// Builds the augmented lattice of `c`.
pub fn augment(c: &ChainComplex3) -> AugmentedLattice {
    let classes = face_equivalence_classes(c);
    let graph = VolumeGraph::augmented(c, &classes.classes);
    AugmentedLattice { classes, graph }
}

#[derive(Error, Debug)]
pub enum BasisError {
    #[error("periodic lattice without canonical or supplied logical representatives")]
    NeedSupplied,
    #[error("boundary classes are not connected through the volume graph")]
    ClassesUnreachable,
}

/// Paired logical representatives: `x_reps[i]` and `z_reps[i]` overlap in an
/// odd number of faces, while mixed pairs overlap evenly.
#[derive(Clone, Debug)]
pub struct LogicalBasis {
    pub x_reps: Vec<FaceSet>,
    pub z_reps: Vec<FaceSet>,
}

impl LogicalBasis {
    pub fn count(&self) -> usize {
        self.x_reps.len()
    }
}

/// Canonical logical representatives.
///
/// * Cubic torus: the three axis planes through the origin (X) and the three
///   winding face lines dual to them (Z).
/// * Lattices with boundary: every class but the last gives a logical X; its
///   paired Z is a face path from that class to the last class.
/// * Custom lattices may carry a supplied basis, which wins when present.
pub fn logical_basis(
    c: &ChainComplex3,
    classes: &BoundaryClasses,
) -> Result<LogicalBasis, BasisError> {
    if let Some(b) = c.supplied_basis() {
        return Ok(LogicalBasis { x_reps: b.x_reps.clone(), z_reps: b.z_reps.clone() });
    }
    if let Family::CubicTorus { l } = c.family() {
        let t = TorusIndex { l };
        return Ok(LogicalBasis {
            x_reps: t.axis_planes((0, 0, 0)),
            z_reps: t.winding_lines(),
        });
    }
    if c.periodic() {
        return Err(BasisError::NeedSupplied);
    }
    let k = classes.count();
    if k <= 1 {
        // A single boundary class encodes nothing.
        return Ok(LogicalBasis { x_reps: Vec::new(), z_reps: Vec::new() });
    }
    let mut x_reps = Vec::with_capacity(k - 1);
    let mut z_reps = Vec::with_capacity(k - 1);
    for i in 0..k - 1 {
        x_reps.push(classes.classes[i].clone());
        z_reps.push(class_path(c, classes, i, k - 1)?);
    }
    Ok(LogicalBasis { x_reps, z_reps })
}

/// A face path from class `from` to class `to`: BFS over volumes, entering
/// at the lowest face of `from` and leaving at the lowest reachable face of
/// `to`. Interior faces have degree two, so the path meets each class in
/// exactly one face.
fn class_path(
    c: &ChainComplex3,
    classes: &BoundaryClasses,
    from: usize,
    to: usize,
) -> Result<FaceSet, BasisError> {
    let nv = c.volume_count();
    // parent[v] = (previous volume, connecting face); u32::MAX roots the BFS.
    let mut parent: Vec<(u32, u32)> = vec![(u32::MAX, u32::MAX); nv];
    let mut visited = vec![false; nv];
    let mut queue = std::collections::VecDeque::new();

    let entry_face = classes.classes[from].first().expect("classes are nonempty");
    let entry_vol = c.face_volumes(entry_face)[0] as usize;
    visited[entry_vol] = true;
    queue.push_back(entry_vol);

    let target_face_of = |v: usize| -> Option<usize> {
        c.volume_faces(v)
            .iter()
            .map(|&f| f as usize)
            .find(|&f| classes.class_of[f] == Some(to as u32))
    };

    while let Some(v) = queue.pop_front() {
        if let Some(exit_face) = target_face_of(v) {
            let mut path = c.empty_face_set();
            path.insert(entry_face);
            path.insert(exit_face);
            let mut cur = v;
            while parent[cur].0 != u32::MAX {
                path.insert(parent[cur].1 as usize);
                cur = parent[cur].0 as usize;
            }
            return Ok(path);
        }
        for &f in c.volume_faces(v) {
            let f = f as usize;
            if c.face_degree(f) != 2 {
                continue;
            }
            for &w in c.face_volumes(f) {
                let w = w as usize;
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = (v as u32, f as u32);
                    queue.push_back(w);
                }
            }
        }
    }
    Err(BasisError::ClassesUnreachable)
}

/// Homology class of a zero-syndrome face set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Homology {
    /// The set is a stabilizer support.
    Trivial,
    /// Indices of the logical Z representatives the set overlaps oddly.
    Logical(Vec<usize>),
}

impl Homology {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Homology::Trivial)
    }
}

/// Classifies a zero-syndrome residual by its parity against each logical Z
/// representative. Even everywhere means the residual is a stabilizer
/// support; any odd parity identifies the logical component applied.
pub fn classify_zero_syndrome(
    c: &ChainComplex3,
    basis: &LogicalBasis,
    residual: &FaceSet,
) -> Homology {
    debug_assert!(
        c.boundary_of_faces(residual).is_empty(),
        "classification requires a zero-syndrome face set"
    );
    let odd: Vec<usize> = basis
        .z_reps
        .iter()
        .enumerate()
        .filter(|(_, z)| residual.intersection_weight(z) % 2 == 1)
        .map(|(i, _)| i)
        .collect();
    if odd.is_empty() {
        Homology::Trivial
    } else {
        Homology::Logical(odd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_boundary_slab, build_cubic_torus, build_open_slab};
    use crate::oracle::is_stabilizer_support;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn syndrome_is_linear() {
        let c = build_cubic_torus(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let nf = c.face_count();
        for _ in 0..50 {
            let a = c.face_set((0..nf).filter(|_| rng.random::<f64>() < 0.2));
            let b = c.face_set((0..nf).filter(|_| rng.random::<f64>() < 0.2));
            let lhs = syndrome(&c, &(&a ^ &b));
            let rhs = &syndrome(&c, &a) ^ &syndrome(&c, &b);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn torus_has_no_classes_and_no_dummies() {
        let c = build_cubic_torus(3).unwrap();
        let aug = augment(&c);
        assert_eq!(aug.classes.count(), 0);
        assert_eq!(aug.graph.volume_count(), c.volume_count());
    }

    #[test]
    fn unit_cube_is_one_class() {
        let c = build_boundary_slab(1, 1, 1).unwrap();
        let classes = face_equivalence_classes(&c);
        assert_eq!(classes.count(), 1);
        assert_eq!(classes.classes[0].weight(), 6);
        let aug = augment(&c);
        assert_eq!(aug.dummy_count(), 1);
        assert_eq!(aug.graph.volume_count(), 2);
    }

    #[test]
    fn closed_block_is_one_class() {
        let c = build_boundary_slab(2, 2, 2).unwrap();
        let classes = face_equivalence_classes(&c);
        assert_eq!(classes.count(), 1);
        assert_eq!(classes.classes[0].weight(), 24);
    }

    #[test]
    fn open_slab_has_top_and_bottom_classes() {
        let c = build_open_slab(3, 3, 2).unwrap();
        let classes = face_equivalence_classes(&c);
        assert_eq!(classes.count(), 2);
        assert_eq!(classes.classes[0].weight(), 9);
        assert_eq!(classes.classes[1].weight(), 9);
        // Terminal faces of any open face path share a class.
        for e in 0..c.edge_count() {
            let terminals: Vec<usize> = c
                .edge_faces(e)
                .iter()
                .map(|&f| f as usize)
                .filter(|&f| c.face_degree(f) == 1)
                .collect();
            if terminals.len() == 2 {
                assert_eq!(
                    classes.class_of[terminals[0]], classes.class_of[terminals[1]],
                    "edge {e}"
                );
            }
        }
        let aug = augment(&c);
        assert_eq!(aug.dummy_count(), 2);
    }

    #[test]
    fn torus_basis_pairs_delta() {
        let c = build_cubic_torus(3).unwrap();
        let classes = face_equivalence_classes(&c);
        let basis = logical_basis(&c, &classes).unwrap();
        assert_eq!(basis.count(), 3);
        for (i, x) in basis.x_reps.iter().enumerate() {
            assert_eq!(x.weight(), 9);
            // X supports commute with every edge check.
            for e in 0..c.edge_count() {
                let overlap = c
                    .edge_faces(e)
                    .iter()
                    .filter(|&&f| x.contains(f as usize))
                    .count();
                assert_eq!(overlap % 2, 0, "x_rep {i} anticommutes with edge {e}");
            }
            for (j, z) in basis.z_reps.iter().enumerate() {
                assert_eq!(x.intersection_weight(z), usize::from(i == j));
            }
        }
        // Z supports have even overlap with every volume boundary.
        for z in &basis.z_reps {
            for v in 0..c.volume_count() {
                let overlap = c
                    .volume_faces(v)
                    .iter()
                    .filter(|&&f| z.contains(f as usize))
                    .count();
                assert_eq!(overlap % 2, 0);
            }
        }
    }

    #[test]
    fn closed_block_encodes_nothing() {
        let c = build_boundary_slab(2, 2, 2).unwrap();
        let classes = face_equivalence_classes(&c);
        let basis = logical_basis(&c, &classes).unwrap();
        assert_eq!(basis.count(), 0);
    }

    #[test]
    fn open_slab_encodes_one_qubit() {
        for (lx, ly, lz) in [(2, 2, 1), (3, 3, 2)] {
            let c = build_open_slab(lx, ly, lz).unwrap();
            let classes = face_equivalence_classes(&c);
            let basis = logical_basis(&c, &classes).unwrap();
            assert_eq!(basis.count(), 1, "open slab {lx}x{ly}x{lz}");
            assert_eq!(basis.x_reps[0], classes.classes[0]);
            assert_eq!(basis.x_reps[0].intersection_weight(&basis.z_reps[0]), 1);
            // The Z path has even overlap with every volume boundary.
            for v in 0..c.volume_count() {
                let overlap = c
                    .volume_faces(v)
                    .iter()
                    .filter(|&&f| basis.z_reps[0].contains(f as usize))
                    .count();
                assert_eq!(overlap % 2, 0, "volume {v}");
            }
        }
    }

    #[test]
    fn classify_examples_on_torus() {
        let c = build_cubic_torus(3).unwrap();
        let classes = face_equivalence_classes(&c);
        let basis = logical_basis(&c, &classes).unwrap();
        let shell = c.face_set(c.volume_faces(7).iter().map(|&f| f as usize));
        assert_eq!(classify_zero_syndrome(&c, &basis, &shell), Homology::Trivial);
        assert_eq!(
            classify_zero_syndrome(&c, &basis, &basis.x_reps[0]),
            Homology::Logical(vec![0])
        );
        let mixed = &shell ^ &basis.x_reps[1];
        assert_eq!(classify_zero_syndrome(&c, &basis, &mixed), Homology::Logical(vec![1]));
        assert_eq!(
            classify_zero_syndrome(&c, &basis, &c.empty_face_set()),
            Homology::Trivial
        );
    }

    #[test]
    fn classification_is_stabilizer_invariant() {
        let c = build_cubic_torus(2).unwrap();
        let classes = face_equivalence_classes(&c);
        let basis = logical_basis(&c, &classes).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            // A random stabilizer support: boundary of a random volume set.
            let vols: Vec<usize> =
                (0..c.volume_count()).filter(|_| rng.random::<f64>() < 0.4).collect();
            let mut stab = c.empty_face_set();
            for v in vols {
                for &f in c.volume_faces(v) {
                    stab.toggle(f as usize);
                }
            }
            assert_eq!(classify_zero_syndrome(&c, &basis, &stab), Homology::Trivial);
            let with_logical = &stab ^ &basis.x_reps[2];
            assert_eq!(
                classify_zero_syndrome(&c, &basis, &with_logical),
                Homology::Logical(vec![2])
            );
        }
    }

    #[test]
    fn classify_agrees_with_gf2_oracle() {
        // Zero-syndrome residuals built from random stabilizers and optional
        // logicals: trivial classification must coincide with the oracle's
        // stabilizer-support test.
        for l in [2, 3] {
            let c = build_cubic_torus(l).unwrap();
            let classes = face_equivalence_classes(&c);
            let basis = logical_basis(&c, &classes).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(13 + l as u64);
            for _ in 0..60 {
                let mut residual = c.empty_face_set();
                for v in 0..c.volume_count() {
                    if rng.random::<f64>() < 0.3 {
                        for &f in c.volume_faces(v) {
                            residual.toggle(f as usize);
                        }
                    }
                }
                for x in &basis.x_reps {
                    if rng.random::<f64>() < 0.25 {
                        residual.xor_with(x);
                    }
                }
                let trivial = classify_zero_syndrome(&c, &basis, &residual).is_trivial();
                assert_eq!(trivial, is_stabilizer_support(&c, &residual));
            }
        }
    }
}
