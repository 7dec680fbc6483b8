//! Decoder for lattices with boundaries.
//!
//! Exploration runs on the augmented lattice, where every stabilizer and
//! logical support is a cut set, so the returned erasure `E` holds exactly
//! one solution of the syndrome and plain leaf peeling finds it.

use super::{explore_waves, peel_faces, DecodeOutcome, DecodeStats, DecodeStatus, Exploration};
use crate::bits::{EdgeSet, FaceSet};
use crate::lattice::ChainComplex3;
use crate::oracle::solve_syndrome;
use crate::stabilizer::{augment, AugmentedLattice, BoundaryClasses};

/// Grows the erasure for a syndrome on the augmented lattice.
pub fn explore_boundary(
    c: &ChainComplex3,
    aug: &AugmentedLattice,
    s_e: &EdgeSet,
) -> Exploration {
    explore_waves(c, &aug.graph, None, s_e)
}

/// Peels the syndrome out of an erasure.
///
/// Succeeds whenever the erasure contains exactly one solution, the
/// guarantee [`explore_boundary`] provides. Failure states: peeling stalled
/// with faces and syndrome left ([`DecodeStatus::PeelingStuck`]), or the
/// erasure drained without clearing the syndrome
/// ([`DecodeStatus::ResidualSyndrome`]).
pub fn peel(c: &ChainComplex3, erasure: &FaceSet, s_e: &EdgeSet) -> DecodeOutcome {
    let out = peel_faces(c, erasure, None, s_e);
    let status = if out.residual.is_empty() {
        DecodeStatus::Success
    } else if out.remaining.is_empty() {
        DecodeStatus::ResidualSyndrome
    } else {
        DecodeStatus::PeelingStuck
    };
    DecodeOutcome {
        status,
        estimate: out.estimate,
        stats: DecodeStats { peeled: out.peeled, ..DecodeStats::default() },
    }
}

/// Ready-to-run decoder for a lattice with boundaries: owns the augmented
/// lattice and composes exploration with peeling.
pub struct BoundaryDecoder<'c> {
    c: &'c ChainComplex3,
    aug: AugmentedLattice,
    gf2_fallback: bool,
}

impl<'c> BoundaryDecoder<'c> {
    pub fn new(c: &'c ChainComplex3) -> Self {
        BoundaryDecoder { c, aug: augment(c), gf2_fallback: false }
    }

    /// Enables solving the stuck-peel case exactly over the erasure. The
    /// restricted system is guaranteed uniquely solvable, so this only
    /// trades speed on a rare path; it is off by default to keep raw peeling
    /// failures observable.
    pub fn with_gf2_fallback(mut self, on: bool) -> Self {
        self.gf2_fallback = on;
        self
    }

    pub fn augmented(&self) -> &AugmentedLattice {
        &self.aug
    }

    pub fn classes(&self) -> &BoundaryClasses {
        &self.aug.classes
    }

    pub fn decode(&self, s_e: &EdgeSet) -> DecodeOutcome {
        let exploration = explore_boundary(self.c, &self.aug, s_e);
        let mut outcome = peel(self.c, &exploration.accepted, s_e);
        outcome.stats.waves = exploration.waves;
        outcome.stats.frozen = exploration.frozen;
        if outcome.status == DecodeStatus::PeelingStuck && self.gf2_fallback {
            if let Some(solution) =
                solve_syndrome(self.c, s_e, &exploration.accepted).solution()
            {
                outcome.estimate = solution.clone();
                outcome.status = DecodeStatus::Success;
                outcome.stats.fallback_used = true;
            }
        }
        outcome
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_boundary_slab, build_open_slab};
    use crate::oracle::{has_enclosed_volume, is_stabilizer_support, SolveOutcome};
    use crate::stabilizer::syndrome;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_error(c: &ChainComplex3, rng: &mut ChaCha8Rng, weight: usize) -> FaceSet {
        let mut err = c.empty_face_set();
        while err.weight() < weight {
            err.insert(rng.random_range(0..c.face_count()));
        }
        err
    }

    #[test]
    fn empty_syndrome_decodes_to_empty() {
        let c = build_boundary_slab(2, 2, 2).unwrap();
        let dec = BoundaryDecoder::new(&c);
        let out = dec.decode(&c.empty_edge_set());
        assert_eq!(out.status, DecodeStatus::Success);
        assert!(out.estimate.is_empty());
        // The exploration still sweeps the whole lattice and must freeze at
        // least one face per completed volume boundary.
        assert!(out.stats.frozen >= 1);
    }

    #[test]
    fn single_face_errors_recovered_exactly() {
        let c = build_boundary_slab(2, 2, 2).unwrap();
        let dec = BoundaryDecoder::new(&c);
        for f in 0..c.face_count() {
            let err = c.face_set([f]);
            let out = dec.decode(&syndrome(&c, &err));
            assert_eq!(out.status, DecodeStatus::Success, "face {f}");
            // The unique solution inside the erasure is the planted error
            // itself whenever the error is a member, which weight one forces.
            assert_eq!(out.estimate, err, "face {f}");
        }
    }

    #[test]
    fn erasure_is_stabilizer_free_and_maximal() {
        let c = build_boundary_slab(2, 2, 2).unwrap();
        let dec = BoundaryDecoder::new(&c);
        let dummies = dec.classes().classes.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            let w = rng.random_range(1..=3);
            let err = random_error(&c, &mut rng, w);
            let s = syndrome(&c, &err);
            let ex = explore_boundary(&c, dec.augmented(), &s);
            assert!(
                !has_enclosed_volume(&c, Some(&dummies), &ex.accepted),
                "erasure contains a stabilizer or logical support"
            );
            for f in 0..c.face_count() {
                if !ex.accepted.contains(f) {
                    let mut k = ex.accepted.clone();
                    k.insert(f);
                    assert!(dec.augmented().graph.is_cut_set(&k), "face {f} was freezable");
                }
            }
        }
    }

    #[test]
    fn peel_matches_gf2_solution_on_random_errors() {
        for c in [build_boundary_slab(2, 2, 2).unwrap(), build_open_slab(3, 3, 2).unwrap()] {
            let dec = BoundaryDecoder::new(&c);
            let mut rng = ChaCha8Rng::seed_from_u64(33);
            for _ in 0..100 {
                let w = rng.random_range(1..=3);
                let err = random_error(&c, &mut rng, w);
                let s = syndrome(&c, &err);
                let ex = explore_boundary(&c, dec.augmented(), &s);
                let out = peel(&c, &ex.accepted, &s);
                assert_eq!(out.status, DecodeStatus::Success);
                match solve_syndrome(&c, &s, &ex.accepted) {
                    SolveOutcome::Unique(reference) => assert_eq!(out.estimate, reference),
                    other => panic!("expected a unique solution, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn residuals_of_low_weight_errors_are_stabilizers() {
        let c = build_boundary_slab(2, 2, 2).unwrap();
        let dec = BoundaryDecoder::new(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let w = rng.random_range(1..=2);
            let err = random_error(&c, &mut rng, w);
            let out = dec.decode(&syndrome(&c, &err));
            assert_eq!(out.status, DecodeStatus::Success);
            let residual = &err ^ &out.estimate;
            assert!(c.boundary_of_faces(&residual).is_empty());
            // The closed block encodes nothing, so any zero-syndrome
            // residual must be a stabilizer support.
            assert!(is_stabilizer_support(&c, &residual));
        }
    }

    #[test]
    fn peel_unit_cases() {
        let c = build_boundary_slab(2, 2, 2).unwrap();
        let out = peel(&c, &c.empty_face_set(), &c.empty_edge_set());
        assert_eq!(out.status, DecodeStatus::Success);
        assert!(out.estimate.is_empty());

        let erasure = c.face_set([5]);
        let s = syndrome(&c, &erasure);
        let out = peel(&c, &erasure, &s);
        assert_eq!(out.status, DecodeStatus::Success);
        assert_eq!(out.estimate, erasure);

        // A syndrome the erasure cannot explain drains it and reports the
        // leftover syndrome.
        let s = syndrome(&c, &c.face_set([17]));
        let out = peel(&c, &c.face_set([5]), &s);
        assert_eq!(out.status, DecodeStatus::ResidualSyndrome);
    }

    #[test]
    fn success_estimates_reproduce_the_syndrome() {
        let c = build_open_slab(3, 3, 2).unwrap();
        let dec = BoundaryDecoder::new(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..60 {
            let mut err = c.empty_face_set();
            for f in 0..c.face_count() {
                if rng.random::<f64>() < 0.12 {
                    err.insert(f);
                }
            }
            let s = syndrome(&c, &err);
            let out = dec.decode(&s);
            if out.status.is_success() {
                assert_eq!(syndrome(&c, &out.estimate), s);
            }
        }
    }
}
