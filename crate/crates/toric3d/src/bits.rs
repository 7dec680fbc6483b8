//! Dense bitsets over cell ids.
//!
//! All cell ids in a [`crate::ChainComplex3`] are dense 0-based integers, so
//! subsets of edges, faces and volumes are packed bitsets. The phantom kind
//! parameter keeps face sets and edge sets from being mixed up; symmetric
//! difference (`^`) is the GF(2) sum used throughout the decoder.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::marker::PhantomData;

/// Marker for sets indexed by face id.
pub enum FaceKind {}
/// Marker for sets indexed by edge id.
pub enum EdgeKind {}
/// Marker for sets indexed by volume id.
pub enum VolumeKind {}

/// Set of face ids.
pub type FaceSet = CellSet<FaceKind>;
/// Set of edge ids.
pub type EdgeSet = CellSet<EdgeKind>;
/// Set of volume ids.
pub type VolumeSet = CellSet<VolumeKind>;

/// Packed bitset over a fixed universe of cell ids `0..universe`.
pub struct CellSet<K> {
    words: Vec<u64>,
    universe: usize,
    _kind: PhantomData<K>,
}

impl<K> CellSet<K> {
    /// Empty set over `0..universe`.
    pub fn new(universe: usize) -> Self {
        CellSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
            _kind: PhantomData,
        }
    }

    /// Set containing the given ids, which must lie in `0..universe`.
    pub fn from_ids<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Self {
        let mut s = Self::new(universe);
        for id in ids {
            s.insert(id);
        }
        s
    }

    /// Size of the id universe (not the number of members).
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, id: usize) -> bool {
        debug_assert!(id < self.universe);
        self.words[id >> 6] >> (id & 63) & 1 != 0
    }

    pub fn insert(&mut self, id: usize) {
        assert!(id < self.universe, "id {id} out of range {}", self.universe);
        self.words[id >> 6] |= 1 << (id & 63);
    }

    pub fn remove(&mut self, id: usize) {
        assert!(id < self.universe, "id {id} out of range {}", self.universe);
        self.words[id >> 6] &= !(1 << (id & 63));
    }

    /// Flips membership of `id` (GF(2) addition of a singleton).
    pub fn toggle(&mut self, id: usize) {
        assert!(id < self.universe, "id {id} out of range {}", self.universe);
        self.words[id >> 6] ^= 1 << (id & 63);
    }

    /// Number of members.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    /// True iff every member of `self` is a member of `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Number of members shared with `other`.
    pub fn intersection_weight(&self, other: &Self) -> usize {
        assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// True iff `self` and `other` share no member.
    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// In-place union.
    pub fn union_with(&mut self, other: &Self) {
        assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// In-place set difference (`self \ other`).
    pub fn difference_with(&mut self, other: &Self) {
        assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// In-place intersection.
    pub fn intersect_with(&mut self, other: &Self) {
        assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// In-place symmetric difference (GF(2) sum).
    pub fn xor_with(&mut self, other: &Self) {
        assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Members in ascending id order.
    pub fn iter(&self) -> Iter<'_, K> {
        Iter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
            _kind: PhantomData,
        }
    }

    /// Lowest member id, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl<K> Clone for CellSet<K> {
    fn clone(&self) -> Self {
        CellSet {
            words: self.words.clone(),
            universe: self.universe,
            _kind: PhantomData,
        }
    }
}

impl<K> PartialEq for CellSet<K> {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.words == other.words
    }
}

impl<K> Eq for CellSet<K> {}

impl<K> Hash for CellSet<K> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.words.hash(state);
    }
}

impl<K> fmt::Debug for CellSet<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<K> std::ops::BitXor for &CellSet<K> {
    type Output = CellSet<K>;
    fn bitxor(self, rhs: Self) -> CellSet<K> {
        let mut out = self.clone();
        out.xor_with(rhs);
        out
    }
}

impl<K> std::ops::BitXorAssign<&CellSet<K>> for CellSet<K> {
    fn bitxor_assign(&mut self, rhs: &CellSet<K>) {
        self.xor_with(rhs);
    }
}

/// Ascending iterator over set members.
pub struct Iter<'a, K> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
    _kind: PhantomData<K>,
}

impl<K> Iterator for Iter<'_, K> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx << 6 | bit)
    }
}

impl<'a, K> IntoIterator for &'a CellSet<K> {
    type Item = usize;
    type IntoIter = Iter<'a, K>;
    fn into_iter(self) -> Iter<'a, K> {
        self.iter()
    }
}
