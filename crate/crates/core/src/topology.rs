//! Finite topologies as minimal-open-neighbourhood tables.
//!
//! Every topology on a finite set is Alexandrov: the intersection of all
//! open sets containing `x` is itself open. Recording that minimal open set
//! `M(x)` for each point determines the topology completely, and the open
//! sets are exactly the unions of the `M(x)`.

use serde::Serialize;

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::relation::{Preorder, Relation};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct FiniteTopology {
    minopen: Vec<PointSet>,
}

impl FiniteTopology {
    /// Validates `x ∈ M(x)` and `y ∈ M(x) ⇒ M(y) ⊆ M(x)`.
    pub fn new(minopen: Vec<PointSet>) -> Result<Self> {
        let n = minopen.len();
        for (x, m) in minopen.iter().enumerate() {
            if m.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: m.len(),
                });
            }
            if !m.contains(x) {
                return Err(Error::InvalidTopology {
                    point: x,
                    reason: format!("{x} is not in its own minimal open set"),
                });
            }
        }
        for (x, m) in minopen.iter().enumerate() {
            if let Some(y) = m.iter().find(|&y| !minopen[y].is_subset(m)) {
                return Err(Error::InvalidTopology {
                    point: x,
                    reason: format!("{y} ∈ M({x}) but M({y}) ⊄ M({x})"),
                });
            }
        }
        Ok(FiniteTopology { minopen })
    }

    pub fn discrete(n: usize) -> Self {
        FiniteTopology {
            minopen: (0..n).map(|x| PointSet::singleton(n, x)).collect(),
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        FiniteTopology {
            minopen: vec![PointSet::full(n); n],
        }
    }

    /// The Alexandrov topology whose minimal opens are the up-sets of `p`.
    pub fn from_preorder(p: &Preorder) -> Self {
        FiniteTopology {
            minopen: (0..p.n()).map(|x| p.up(x).clone()).collect(),
        }
    }

    /// Normalizes a family of open sets. The family is closed under unions
    /// and finite intersections first, so any subbase is accepted; the whole
    /// space is always open.
    pub fn from_open_sets(n: usize, opens: &[PointSet]) -> Result<Self> {
        if let Some(bad) = opens.iter().find(|o| o.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let minopen = (0..n)
            .map(|x| {
                opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(PointSet::full(n), |acc, o| acc.intersection(o))
            })
            .collect();
        FiniteTopology::new(minopen)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.minopen.len()
    }

    /// `M(x)`.
    #[inline]
    pub fn minopen(&self, x: usize) -> &PointSet {
        &self.minopen[x]
    }

    pub fn minopens(&self) -> &[PointSet] {
        &self.minopen
    }

    /// The specialization preorder `x ⊑ y ⇔ y ∈ M(x)`.
    pub fn specialization(&self) -> Preorder {
        Preorder::new_unchecked(Relation::from_rows(self.minopen.clone()).expect("square table"))
    }

    pub fn is_discrete(&self) -> bool {
        self.minopen.iter().all(|m| m.count() == 1)
    }

    /// `cl(S) = { x : M(x) ∩ S ≠ ∅ }`.
    pub fn closure(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(
            self.n(),
            (0..self.n()).filter(|&x| self.minopen[x].intersects(s)),
        )
    }

    pub fn interior(&self, s: &PointSet) -> PointSet {
        self.closure(&s.complement()).complement()
    }

    /// Smallest open superset, `⋃_{x ∈ S} M(x)`.
    pub fn open_hull(&self, s: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.n());
        for x in s {
            out.union_with(&self.minopen[x]);
        }
        out
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        s.iter().all(|x| self.minopen[x].is_subset(s))
    }

    pub fn is_closed(&self, s: &PointSet) -> bool {
        self.is_open(&s.complement())
    }

    /// All open sets, by closing the minimal opens under union.
    pub fn open_sets(&self, cap: usize) -> Result<Vec<PointSet>> {
        union_closure(self.n(), self.minopen.iter().cloned(), cap, "open sets")
    }

    /// Product closure of a relation viewed as a subset of `E × E`, where
    /// the minimal open of `(x, y)` is `M(x) × M(y)`:
    /// row `x` of the result is `cl(R(M(x)))`.
    pub fn product_closure(&self, r: &Relation) -> Result<Relation> {
        if r.n() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: r.n(),
            });
        }
        let rows = (0..self.n())
            .map(|x| {
                let mut image = PointSet::empty(self.n());
                for a in &self.minopen[x] {
                    image.union_with(r.row(a));
                }
                self.closure(&image)
            })
            .collect();
        Relation::from_rows(rows)
    }

    /// Normal as a plain topological space: disjoint closed sets have
    /// disjoint open neighbourhoods. For finite spaces the smallest open
    /// neighbourhoods decide it.
    pub fn is_normal(&self, cap: usize) -> Result<bool> {
        let closed: Vec<PointSet> = self
            .open_sets(cap)?
            .into_iter()
            .map(|o| o.complement())
            .collect();
        for a in &closed {
            let ua = self.open_hull(a);
            for b in &closed {
                if a.is_disjoint(b) && ua.intersects(&self.open_hull(b)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Closes `generators ∪ {∅}` under binary union, failing once the family
/// grows past `cap`. Output is sorted by [`PointSet::lex_cmp`].
pub(crate) fn union_closure<I: IntoIterator<Item = PointSet>>(
    n: usize,
    generators: I,
    cap: usize,
    what: &str,
) -> Result<Vec<PointSet>> {
    use std::collections::HashSet;
    let mut gens: Vec<PointSet> = generators.into_iter().collect();
    gens.sort_by(|a, b| a.lex_cmp(b));
    gens.dedup();
    let mut seen: HashSet<PointSet> = HashSet::new();
    let mut family = vec![PointSet::empty(n)];
    seen.insert(PointSet::empty(n));
    for g in &gens {
        let mut fresh = Vec::new();
        for s in &family {
            let u = s.union(g);
            if !seen.contains(&u) {
                seen.insert(u.clone());
                fresh.push(u);
            }
        }
        family.extend(fresh);
        if family.len() > cap {
            return Err(Error::InstanceTooLarge {
                what: what.to_string(),
                count: family.len() as u128,
                cap: cap as u128,
            });
        }
    }
    family.sort_by(|a, b| a.lex_cmp(b));
    Ok(family)
}
