//! Binary relations on a finite ground set, stored as row bit-vectors.

use serde::{Deserialize, Serialize};

use crate::bitset::PointSet;
use crate::error::{Error, Result};

/// `rows[x] = { y : (x, y) ∈ R }`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    n: usize,
    rows: Vec<PointSet>,
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            rows: vec![PointSet::empty(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Relation {
            n,
            rows: (0..n).map(|x| PointSet::singleton(n, x)).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Relation {
            n,
            rows: vec![PointSet::full(n); n],
        }
    }

    pub fn from_rows(rows: Vec<PointSet>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Relation { n, rows })
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self> {
        let mut r = Relation::empty(n);
        for (x, y) in pairs {
            for p in [x, y] {
                if p >= n {
                    return Err(Error::PointOutOfRange { point: p, n });
                }
            }
            r.rows[x].insert(y);
        }
        Ok(r)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    #[inline]
    pub fn row(&self, x: usize) -> &PointSet {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[PointSet] {
        &self.rows
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(x, r)| r.iter().map(move |y| (x, y)))
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(PointSet::count).sum()
    }

    pub fn transpose(&self) -> Relation {
        let mut t = Relation::empty(self.n);
        for (x, y) in self.pairs() {
            t.rows[y].insert(x);
        }
        t
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.n == other.n
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.is_subset(b))
    }

    /// First pair of `self` (in row-major order) missing from `other`.
    pub fn first_missing_from(&self, other: &Relation) -> Option<(usize, usize)> {
        self.pairs().find(|&(x, y)| !other.contains(x, y))
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let mut r = self.clone();
        for (a, b) in r.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
        r
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        let mut r = self.clone();
        for (a, b) in r.rows.iter_mut().zip(&other.rows) {
            a.intersect_with(b);
        }
        r
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.contains(x, x))
    }

    pub fn reflexive(mut self) -> Relation {
        for x in 0..self.n {
            self.rows[x].insert(x);
        }
        self
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs()
            .all(|(x, y)| self.rows[y].is_subset(&self.rows[x]))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(x, y)| x == y || !self.contains(y, x))
    }

    /// Reflexive-transitive closure by per-row worklist propagation.
    pub fn reflexive_transitive_closure(&self) -> Relation {
        let mut out = Relation::empty(self.n);
        let mut stack = Vec::with_capacity(self.n);
        for x in 0..self.n {
            let reach = &mut out.rows[x];
            reach.insert(x);
            stack.clear();
            stack.push(x);
            while let Some(y) = stack.pop() {
                for z in self.rows[y].iter() {
                    if !reach.contains(z) {
                        reach.insert(z);
                        stack.push(z);
                    }
                }
            }
        }
        out
    }
}

/// A reflexive and transitive relation. Keeps the transposed rows around so
/// decreasing hulls are as cheap as increasing ones.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Preorder {
    up: Relation,
    down: Relation,
}

impl Preorder {
    /// Validates an already-closed relation.
    pub fn new(rel: Relation) -> Result<Self> {
        if let Some(x) = (0..rel.n()).find(|&x| !rel.contains(x, x)) {
            return Err(Error::BadArguments(format!(
                "relation is not reflexive at {x}"
            )));
        }
        if !rel.is_transitive() {
            return Err(Error::BadArguments("relation is not transitive".into()));
        }
        Ok(Self::new_unchecked(rel))
    }

    pub(crate) fn new_unchecked(rel: Relation) -> Self {
        debug_assert!(rel.is_reflexive() && rel.is_transitive());
        let down = rel.transpose();
        Preorder { up: rel, down }
    }

    /// Reflexive-transitive closure of `generators`.
    pub fn generated_by(generators: &Relation) -> Self {
        Self::new_unchecked(generators.reflexive_transitive_closure())
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self> {
        Ok(Self::generated_by(&Relation::from_pairs(n, pairs)?))
    }

    pub fn discrete(n: usize) -> Self {
        Self::new_unchecked(Relation::identity(n))
    }

    pub fn total(n: usize) -> Self {
        Self::new_unchecked(Relation::full(n))
    }

    /// The chain `0 ≤ 1 ≤ .. ≤ n-1`.
    pub fn chain(n: usize) -> Self {
        Self::new_unchecked(
            Relation::from_pairs(n, (0..n).flat_map(|x| (x..n).map(move |y| (x, y))))
                .expect("in range"),
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.up.n()
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up.contains(x, y)
    }

    /// `i(x)`.
    #[inline]
    pub fn up(&self, x: usize) -> &PointSet {
        self.up.row(x)
    }

    /// `d(x)`.
    #[inline]
    pub fn down(&self, x: usize) -> &PointSet {
        self.down.row(x)
    }

    /// `[x] = d(x) ∩ i(x)`.
    pub fn class(&self, x: usize) -> PointSet {
        self.up(x).intersection(self.down(x))
    }

    pub fn graph(&self) -> &Relation {
        &self.up
    }

    pub fn dual(&self) -> Preorder {
        Preorder {
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n()).all(|x| self.class(x).count() == 1)
    }

    /// Non-reflexive pairs, row-major.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up.pairs().filter(|(x, y)| x != y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_closure(r: &Relation) -> Relation {
        // Floyd–Warshall over booleans, independent of the worklist code.
        let n = r.n();
        let mut m: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| x == y || r.contains(x, y)).collect())
            .collect();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if m[i][k] && m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
        Relation::from_pairs(
            n,
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j]),
        )
        .unwrap()
    }

    #[test]
    fn chain_hulls() {
        let c = Preorder::chain(3);
        assert_eq!(c.up(1).to_vec(), vec![1, 2]);
        assert_eq!(c.down(1).to_vec(), vec![0, 1]);
        assert!(c.is_antisymmetric());
        assert!(!Preorder::total(2).is_antisymmetric());
    }

    #[test]
    fn rejects_non_transitive() {
        let r = Relation::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap();
        assert!(Preorder::new(r).is_err());
    }

    proptest! {
        #[test]
        fn closure_matches_warshall(n in 1usize..9, pairs in proptest::collection::vec((0usize..9, 0usize..9), 0..30)) {
            let pairs: Vec<_> = pairs.into_iter().filter(|&(a, b)| a < n && b < n).collect();
            let r = Relation::from_pairs(n, pairs).unwrap();
            let c = r.reflexive_transitive_closure();
            prop_assert_eq!(&c, &brute_closure(&r));
            prop_assert!(c.is_reflexive() && c.is_transitive());
        }
    }
}
