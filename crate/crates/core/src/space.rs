//! Topological preordered spaces and the hull operators built on them.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::relation::{Preorder, Relation};
use crate::topology::FiniteTopology;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Increasing (`i`, `I`).
    Inc,
    /// Decreasing (`d`, `D`).
    Dec,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Inc => Direction::Dec,
            Direction::Dec => Direction::Inc,
        }
    }
}

/// A finite topology together with a preorder on the same points.
///
/// T1/T2 status is computed on first request and cached.
#[derive(Clone, Debug)]
pub struct PreorderedSpace {
    top: FiniteTopology,
    ord: Preorder,
    t1: OnceLock<bool>,
    t2: OnceLock<bool>,
}

impl PartialEq for PreorderedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.top == other.top && self.ord == other.ord
    }
}

impl Eq for PreorderedSpace {}

impl PreorderedSpace {
    pub fn new(top: FiniteTopology, ord: Preorder) -> Result<Self> {
        if top.n() != ord.n() {
            return Err(Error::SizeMismatch {
                expected: top.n(),
                found: ord.n(),
            });
        }
        Ok(PreorderedSpace {
            top,
            ord,
            t1: OnceLock::new(),
            t2: OnceLock::new(),
        })
    }

    /// Builds a space from a minimal-open table and order generators; the
    /// order is the reflexive-transitive closure of the generators.
    pub fn from_parts(minopen: Vec<PointSet>, generators: &[(usize, usize)]) -> Result<Self> {
        let n = minopen.len();
        let top = FiniteTopology::new(minopen)?;
        let ord = Preorder::from_pairs(n, generators.iter().copied())?;
        PreorderedSpace::new(top, ord)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.top.n()
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.top
    }

    pub fn order(&self) -> &Preorder {
        &self.ord
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.n())
    }

    pub fn point(&self, x: usize) -> Result<PointSet> {
        self.check_point(x)?;
        Ok(PointSet::singleton(self.n(), x))
    }

    pub(crate) fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.n() {
            return Err(Error::PointOutOfRange {
                point: x,
                n: self.n(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_set(&self, s: &PointSet) -> Result<()> {
        if s.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: s.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_relation(&self, r: &Relation) -> Result<()> {
        if r.n() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: r.n(),
            });
        }
        Ok(())
    }

    pub fn closure(&self, s: &PointSet) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(self.top.closure(s))
    }

    pub fn interior(&self, s: &PointSet) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(self.top.interior(s))
    }

    pub fn hull(&self, s: &PointSet, dir: Direction) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(self.hull_of(s, dir))
    }

    /// `i(S)` or `d(S)`.
    pub(crate) fn hull_of(&self, s: &PointSet, dir: Direction) -> PointSet {
        let mut out = PointSet::empty(self.n());
        for x in s {
            out.union_with(match dir {
                Direction::Inc => self.ord.up(x),
                Direction::Dec => self.ord.down(x),
            });
        }
        out
    }

    /// `I(S)` or `D(S)`: alternate hull and closure until nothing changes.
    pub fn closed_hull(&self, s: &PointSet, dir: Direction) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(self.closed_hull_of(s, dir))
    }

    pub(crate) fn closed_hull_of(&self, s: &PointSet, dir: Direction) -> PointSet {
        let mut cur = s.clone();
        loop {
            let next = self.top.closure(&self.hull_of(&cur, dir));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Smallest open monotone superset: alternate hull and open hull.
    pub fn open_hull(&self, s: &PointSet, dir: Direction) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(self.open_monotone_hull(s, dir))
    }

    pub(crate) fn open_monotone_hull(&self, s: &PointSet, dir: Direction) -> PointSet {
        let mut cur = s.clone();
        loop {
            let next = self.top.open_hull(&self.hull_of(&cur, dir));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Largest open `dir`-monotone subset of `s`: the complement of the
    /// smallest closed set of the opposite monotonicity containing `E ∖ s`.
    pub(crate) fn open_monotone_kernel(&self, s: &PointSet, dir: Direction) -> PointSet {
        self.closed_hull_of(&s.complement(), dir.flip())
            .complement()
    }

    /// `d(S) ∩ i(S)`, the smallest convex superset.
    pub fn convex_hull(&self, s: &PointSet) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(self.convex_hull_of(s))
    }

    pub(crate) fn convex_hull_of(&self, s: &PointSet) -> PointSet {
        self.hull_of(s, Direction::Dec)
            .intersection(&self.hull_of(s, Direction::Inc))
    }

    pub fn is_convex_set(&self, s: &PointSet) -> Result<bool> {
        self.check_set(s)?;
        Ok(self.convex_hull_of(s) == *s)
    }

    pub fn is_c_set(&self, s: &PointSet) -> Result<bool> {
        self.check_set(s)?;
        let c = self
            .closed_hull_of(s, Direction::Dec)
            .intersection(&self.closed_hull_of(s, Direction::Inc));
        Ok(c == *s)
    }

    pub fn is_monotone(&self, s: &PointSet, dir: Direction) -> bool {
        self.hull_of(s, dir) == *s
    }

    pub fn product_closure(&self, r: &Relation) -> Result<Relation> {
        self.top.product_closure(r)
    }

    /// Cached T1 flag, i.e. `i(x)` and `d(x)` closed for every `x`.
    pub fn t1(&self) -> bool {
        *self
            .t1
            .get_or_init(|| crate::props::t1_failure(self).is_none())
    }

    /// Cached T2 flag, i.e. the graph of the preorder is closed.
    pub fn t2(&self) -> bool {
        *self
            .t2
            .get_or_init(|| crate::props::t2_failure(self).is_none())
    }

    /// All open sets that are `dir`-monotone, capped.
    pub fn open_monotone_sets(&self, dir: Direction, cap: usize) -> Result<Vec<PointSet>> {
        let gens =
            (0..self.n()).map(|x| self.open_monotone_hull(&PointSet::singleton(self.n(), x), dir));
        crate::topology::union_closure(self.n(), gens, cap, "open monotone sets")
    }

    /// All closed `dir`-monotone sets (complements of open sets of the
    /// opposite monotonicity), sorted lexicographically.
    pub fn closed_monotone_sets(&self, dir: Direction, cap: usize) -> Result<Vec<PointSet>> {
        let mut v: Vec<PointSet> = self
            .open_monotone_sets(dir.flip(), cap)?
            .into_iter()
            .map(|o| o.complement())
            .collect();
        v.sort_by(|a, b| a.lex_cmp(b));
        Ok(v)
    }
}

/// Named fixtures used throughout the tests and docs.
pub mod fixtures {
    use super::*;

    /// Discrete three-point chain `0 ≤ 1 ≤ 2`.
    pub fn ch3() -> PreorderedSpace {
        PreorderedSpace::new(FiniteTopology::discrete(3), Preorder::chain(3)).unwrap()
    }

    /// Sierpiński topology (`M(a) = {a, b}`, `M(b) = {b}`) with the total preorder.
    pub fn p2() -> PreorderedSpace {
        PreorderedSpace::new(sierpinski(), Preorder::total(2)).unwrap()
    }

    /// Sierpiński topology with the discrete order.
    pub fn s2() -> PreorderedSpace {
        PreorderedSpace::new(sierpinski(), Preorder::discrete(2)).unwrap()
    }

    pub fn one_point() -> PreorderedSpace {
        PreorderedSpace::new(FiniteTopology::discrete(1), Preorder::discrete(1)).unwrap()
    }

    pub fn sierpinski() -> FiniteTopology {
        FiniteTopology::new(vec![
            PointSet::from_indices(2, [0, 1]),
            PointSet::from_indices(2, [1]),
        ])
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn set(n: usize, xs: &[usize]) -> PointSet {
        PointSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn make_space_examples() {
        let ch3 = PreorderedSpace::from_parts(
            (0..3).map(|x| PointSet::singleton(3, x)).collect(),
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(ch3, fixtures::ch3());
        let p2 =
            PreorderedSpace::from_parts(vec![set(2, &[0, 1]), set(2, &[1])], &[(0, 1), (1, 0)])
                .unwrap();
        assert_eq!(p2, fixtures::p2());
        let bad = PreorderedSpace::from_parts(vec![set(2, &[0]), set(2, &[0])], &[]);
        assert!(matches!(bad, Err(Error::InvalidTopology { point: 1, .. })));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(ch3().closure(&set(3, &[1])).unwrap(), set(3, &[1]));
        assert_eq!(p2().closure(&set(2, &[1])).unwrap(), set(2, &[0, 1]));
        assert_eq!(p2().closure(&set(2, &[0])).unwrap(), set(2, &[0]));
        assert!(matches!(
            p2().closure(&set(3, &[0])),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn hull_examples() {
        assert_eq!(
            ch3().hull(&set(3, &[1]), Direction::Inc).unwrap(),
            set(3, &[1, 2])
        );
        assert_eq!(
            p2().hull(&set(2, &[1]), Direction::Dec).unwrap(),
            set(2, &[0, 1])
        );
        assert!(ch3().hull(&set(3, &[]), Direction::Dec).unwrap().is_empty());
    }

    #[test]
    fn closed_hull_examples() {
        assert_eq!(
            ch3().closed_hull(&set(3, &[1]), Direction::Inc).unwrap(),
            set(3, &[1, 2])
        );
        assert_eq!(
            p2().closed_hull(&set(2, &[0]), Direction::Inc).unwrap(),
            set(2, &[0, 1])
        );
        assert_eq!(
            s2().closed_hull(&set(2, &[1]), Direction::Inc).unwrap(),
            set(2, &[0, 1])
        );
    }

    #[test]
    fn convex_hull_examples() {
        assert_eq!(
            ch3().convex_hull(&set(3, &[0, 2])).unwrap(),
            set(3, &[0, 1, 2])
        );
        assert_eq!(ch3().convex_hull(&set(3, &[1])).unwrap(), set(3, &[1]));
        assert_eq!(p2().convex_hull(&set(2, &[1])).unwrap(), set(2, &[0, 1]));
    }

    #[test]
    fn convex_and_c_set_examples() {
        assert!(ch3().is_convex_set(&set(3, &[0, 1])).unwrap());
        assert!(ch3().is_c_set(&set(3, &[0, 1])).unwrap());
        assert!(!p2().is_convex_set(&set(2, &[1])).unwrap());
        for sp in [ch3(), p2(), s2()] {
            assert!(sp.is_convex_set(&sp.full()).unwrap());
            assert!(sp.is_c_set(&sp.full()).unwrap());
        }
    }

    #[test]
    fn product_closure_examples() {
        assert_eq!(
            ch3().product_closure(&Relation::identity(3)).unwrap(),
            Relation::identity(3)
        );
        assert_eq!(
            s2().product_closure(&Relation::identity(2)).unwrap(),
            Relation::full(2)
        );
        assert_eq!(
            s2().product_closure(&Relation::full(2)).unwrap(),
            Relation::full(2)
        );
    }

    #[test]
    fn cached_flags() {
        let s = s2();
        assert!(!s.t1());
        assert!(!s.t2());
        assert!(ch3().t1() && ch3().t2());
        assert!(p2().t1() && p2().t2());
    }

    fn arb_space(max_n: usize) -> impl Strategy<Value = PreorderedSpace> {
        (1..=max_n).prop_flat_map(|n| {
            (
                proptest::collection::vec((0..n, 0..n), 0..(2 * n)),
                proptest::collection::vec((0..n, 0..n), 0..(2 * n)),
            )
                .prop_map(move |(t, o)| {
                    let spec = Preorder::from_pairs(n, t).unwrap();
                    let top = FiniteTopology::from_preorder(&spec);
                    PreorderedSpace::new(top, Preorder::from_pairs(n, o).unwrap()).unwrap()
                })
        })
    }

    fn all_subsets(n: usize) -> impl Iterator<Item = PointSet> {
        (0u64..(1 << n)).map(move |m| PointSet::from_mask(n, m))
    }

    proptest! {
        #[test]
        fn hull_closure_algebra(sp in arb_space(5), a in 0u64..32, b in 0u64..32) {
            let n = sp.n();
            let a = PointSet::from_mask(n, a);
            let b = PointSet::from_mask(n, b);
            for dir in [Direction::Inc, Direction::Dec] {
                let ha = sp.hull_of(&a, dir);
                prop_assert_eq!(sp.hull_of(&ha, dir), ha.clone());
                prop_assert_eq!(sp.hull_of(&a.union(&b), dir), ha.union(&sp.hull_of(&b, dir)));
                let ca = sp.closed_hull_of(&a, dir);
                prop_assert!(sp.topology().is_closed(&ca) && sp.is_monotone(&ca, dir));
                prop_assert!(a.is_subset(&ca));
                prop_assert_eq!(sp.topology().closure(&sp.hull_of(&ca, dir)), ca);
            }
            let cl = sp.topology().closure(&a);
            prop_assert!(a.is_subset(&cl));
            prop_assert_eq!(sp.topology().closure(&cl), cl.clone());
            prop_assert!(sp.topology().closure(&a.intersection(&b)).is_subset(&cl));
        }

        #[test]
        fn convex_hull_is_smallest_convex_superset(sp in arb_space(5), a in 0u64..32) {
            let n = sp.n();
            let a = PointSet::from_mask(n, a);
            let h = sp.convex_hull(&a).unwrap();
            prop_assert!(sp.is_convex_set(&h).unwrap());
            prop_assert!(a.is_subset(&h));
            for c in all_subsets(n) {
                if a.is_subset(&c) && sp.is_convex_set(&c).unwrap() {
                    prop_assert!(h.is_subset(&c));
                }
            }
        }

        #[test]
        fn product_closure_properties(sp in arb_space(5), pairs in proptest::collection::vec((0usize..5, 0usize..5), 0..12)) {
            let n = sp.n();
            let r = Relation::from_pairs(n, pairs.into_iter().filter(|&(x, y)| x < n && y < n)).unwrap();
            let c = sp.product_closure(&r).unwrap();
            prop_assert!(r.is_subset(&c));
            prop_assert_eq!(sp.product_closure(&c).unwrap(), c.clone());
            // Swapping the factors: transposing commutes with the closure.
            prop_assert_eq!(sp.product_closure(&r.transpose()).unwrap(), c.transpose());
        }

        #[test]
        fn t2_spaces_have_closed_monotone_hulls(sp in arb_space(5), k in 0u64..32) {
            let repaired = crate::closure::smallest_closed_preorder(sp.topology(), sp.order().graph()).unwrap();
            let sp = PreorderedSpace::new(sp.topology().clone(), repaired).unwrap();
            prop_assume!(sp.t2());
            let k = PointSet::from_mask(sp.n(), k);
            for dir in [Direction::Inc, Direction::Dec] {
                prop_assert_eq!(sp.hull_of(&k, dir), sp.closed_hull_of(&k, dir));
            }
        }
    }
}
