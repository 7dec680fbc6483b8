//! Decoding of bit-flip errors on 3D toric codes defined over arbitrary
//! three-dimensional cell complexes, with or without boundaries.
//!
//! Qubits live on the faces of a cell complex, Z-type checks on its edges and
//! X-type stabilizers on its volumes. A bit-flip error is a face set `F`; the
//! measured syndrome is its edge boundary `∂(F)` over GF(2). The decoder
//! converts the error back into an erasure in two stages:
//!
//! 1. **Exploration** grows a face set `E` outward from the syndrome, accepting
//!    a face only while `E` stays free of stabilizer and logical supports
//!    (a cut-set test on the volume adjacency graph).
//! 2. **Peeling** solves the syndrome inside `E` by repeatedly resolving edges
//!    incident on exactly one remaining face, which is exact because the
//!    freeze rule keeps the restricted solution unique.
//!
//! Lattices with boundary are handled by augmenting degree-one faces with
//! dummy volumes ([`stabilizer::augment`]); periodic lattices by carving an
//! artificial boundary out of logical representatives
//! ([`decoder::periodic`]). A dense GF(2) linear-algebra oracle
//! ([`oracle`]) provides independent reference answers for tests, and
//! [`sim`] drives Monte Carlo threshold estimates.

pub mod bits;
pub mod cutset;
pub mod decoder;
pub mod format;
pub mod lattice;
pub mod oracle;
pub mod sim;
pub mod stabilizer;

pub use bits::{EdgeSet, FaceSet, VolumeSet};
pub use lattice::ChainComplex3;
