//! Fixed-length bit vectors over the points of a finite ground set.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A subset of `{0, .., len-1}`.
///
/// Spaces of up to 128 points stay inline; larger ones (grid exports) spill
/// to the heap. Bits at positions `>= len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

impl PointSet {
    pub fn empty(len: usize) -> Self {
        PointSet {
            len,
            words: smallvec![0; words_for(len)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = PointSet {
            len,
            words: smallvec![!0; words_for(len)],
        };
        s.trim();
        s
    }

    pub fn singleton(len: usize, x: usize) -> Self {
        let mut s = Self::empty(len);
        s.insert(x);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, items: I) -> Self {
        let mut s = Self::empty(len);
        for x in items {
            s.insert(x);
        }
        s
    }

    /// Builds the set whose members are the set bits of `mask` (points < 64).
    pub fn from_mask(len: usize, mask: u64) -> Self {
        let mut s = Self::empty(len);
        if !s.words.is_empty() {
            s.words[0] = mask;
        }
        s.trim();
        s
    }

    /// Low 64 bits as an integer mask.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.len && self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        assert!(x < self.len, "point {x} out of range {}", self.len);
        self.words[x / WORD] |= 1 << (x % WORD);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        if x < self.len {
            self.words[x / WORD] &= !(1 << (x % WORD));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &PointSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> PointSet {
        let mut s = PointSet {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn as_words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn as_words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Compare by sorted member lists, lexicographically. This is the
    /// canonical order used when picking minimal witnesses.
    pub fn lex_cmp(&self, other: &PointSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serialized as `{"len": n, "members": [..]}`.
#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    len: usize,
    members: Vec<usize>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointSetRepr {
            len: self.len,
            members: self.to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PointSetRepr::deserialize(d)?;
        if let Some(&bad) = r.members.iter().find(|&&m| m >= r.len) {
            return Err(serde::de::Error::custom(format!(
                "member {bad} out of range {}",
                r.len
            )));
        }
        Ok(PointSet::from_indices(r.len, r.members))
    }
}
