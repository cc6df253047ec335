//! Reachability relations on a cone grid: `J⁺`, `I⁺` and widened cones.

use rayon::prelude::*;

use super::kernel::{Cone, Kernel, Slice};
use super::{ConeGrid, Site, Window};
use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::relation::Relation;

/// Largest number of sites for which a relation is stored row by row.
/// Homogeneous grids are stored as time-shift templates and have no cap.
pub const MAX_DENSE_SITES: usize = 1 << 14;

/// Largest slack index accepted by [`widened_reach`] (resolution `2^k`).
pub const MAX_SLACK: u32 = 16;

/// Cap on refined positions per time slice for widened sweeps.
const MAX_POSITIONS: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Storage {
    /// One row per site; removed sites have empty rows.
    Dense(Vec<PointSet>),
    /// Rows of the sources `(t, x)` with `t < q`; the row of `(t, x)` is the
    /// row of `(t mod q, x)` shifted forward by `t − t mod q` steps.
    Template { q: usize, rows: Vec<PointSet> },
}

/// A reachability relation over the sites of a grid. Rows are bit vectors
/// indexed by [`ConeGrid::index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRelation {
    t: usize,
    x: usize,
    time_periodic: bool,
    label: String,
    slack: Option<u32>,
    storage: Storage,
}

impl GridRelation {
    /// Name of the relation, e.g. `J+` or `widened(3)`.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Slack index for widened relations.
    pub fn slack(&self) -> Option<u32> {
        self.slack
    }

    pub fn extent_t(&self) -> usize {
        self.t
    }

    pub fn extent_x(&self) -> usize {
        self.x
    }

    pub fn n_sites(&self) -> usize {
        self.t * self.x
    }

    /// Whether rows are stored as time-shift templates.
    pub fn is_template(&self) -> bool {
        matches!(self.storage, Storage::Template { .. })
    }

    fn index(&self, (t, x): Site) -> usize {
        t * self.x + x
    }

    fn site(&self, i: usize) -> Site {
        (i / self.x, i % self.x)
    }

    pub fn contains(&self, a: Site, b: Site) -> bool {
        match &self.storage {
            Storage::Dense(rows) => rows[self.index(a)].contains(self.index(b)),
            Storage::Template { q, rows } => {
                let m = a.0 - a.0 % q;
                b.0 >= m && rows[(a.0 % q) * self.x + a.1].contains(self.index((b.0 - m, b.1)))
            }
        }
    }

    /// The successors of `a` as a set of site indices.
    pub fn row(&self, a: Site) -> PointSet {
        match &self.storage {
            Storage::Dense(rows) => rows[self.index(a)].clone(),
            Storage::Template { q, rows } => {
                let m = a.0 - a.0 % q;
                shifted(&rows[(a.0 % q) * self.x + a.1], m * self.x)
            }
        }
    }

    /// All pairs, source-major. Intended for small grids.
    pub fn pairs(&self) -> impl Iterator<Item = (Site, Site)> + '_ {
        (0..self.n_sites()).flat_map(move |i| {
            let a = self.site(i);
            let row = self.row(a);
            row.iter()
                .map(move |j| (a, self.site(j)))
                .collect::<Vec<_>>()
        })
    }

    /// Number of pairs.
    pub fn count(&self) -> u64 {
        match &self.storage {
            Storage::Dense(rows) => rows.iter().map(|r| r.count() as u64).sum(),
            Storage::Template { q, rows } => {
                let mut total = 0u64;
                for (i, row) in rows.iter().enumerate() {
                    // Members per time slice, accumulated.
                    let mut per_t = vec![0u64; self.t];
                    for j in row.iter() {
                        per_t[j / self.x] += 1;
                    }
                    let mut acc = vec![0u64; self.t + 1];
                    for t in 0..self.t {
                        acc[t + 1] = acc[t] + per_t[t];
                    }
                    let phase = i / self.x;
                    let mut m = 0;
                    while phase + m < self.t {
                        total += acc[self.t - m];
                        m += q;
                    }
                }
                total
            }
        }
    }

    /// Dense relation over site indices (removed sites have empty rows).
    pub fn to_relation(&self) -> Relation {
        let rows = (0..self.n_sites())
            .map(|i| self.row(self.site(i)))
            .collect();
        Relation::from_rows(rows).expect("rows are square")
    }

    /// Whether every live site reaches itself.
    pub fn is_reflexive_on(&self, grid: &ConeGrid) -> bool {
        grid.live_sites().all(|s| self.contains(s, s))
    }

    /// First pair `(a, b)`, `a ≠ b`, with `a → b` and `b → a`, in source
    /// order.
    pub fn first_symmetric_pair(&self) -> Option<(Site, Site)> {
        if !self.time_periodic {
            // Every step advances time, so a mutual pair shares its time.
            for t in 0..self.t {
                for x in 0..self.x {
                    for y in 0..self.x {
                        if x != y && self.contains((t, x), (t, y)) && self.contains((t, y), (t, x))
                        {
                            return Some(((t, x), (t, y)));
                        }
                    }
                }
            }
            return None;
        }
        (0..self.n_sites()).find_map(|i| {
            let a = self.site(i);
            self.row(a)
                .iter()
                .map(|j| self.site(j))
                .find(|&b| b != a && self.contains(b, a))
                .map(|b| (a, b))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.first_symmetric_pair().is_none()
    }

    /// Whether both relations have the same pairs.
    pub fn same_pairs(&self, other: &GridRelation) -> bool {
        if (self.t, self.x) != (other.t, other.x) {
            return false;
        }
        match (&self.storage, &other.storage) {
            (Storage::Template { q: q1, rows: r1 }, Storage::Template { q: q2, rows: r2 })
                if q1 == q2 =>
            {
                r1 == r2
            }
            _ => (0..self.n_sites())
                .into_par_iter()
                .all(|i| self.row(self.site(i)) == other.row(self.site(i))),
        }
    }

    /// Whether every pair of `self` is a pair of `other`.
    pub fn is_subset(&self, other: &GridRelation) -> bool {
        (0..self.n_sites())
            .into_par_iter()
            .all(|i| self.row(self.site(i)).is_subset(&other.row(self.site(i))))
    }

    /// Pairs of `self` missing from `other`: the total count and the first
    /// `limit` pairs in source-major order.
    pub fn difference(&self, other: &GridRelation, limit: usize) -> (u64, Vec<(Site, Site)>) {
        if self.same_pairs(other) {
            return (0, Vec::new());
        }
        let per_row: Vec<(u64, Vec<(Site, Site)>)> = (0..self.n_sites())
            .into_par_iter()
            .map(|i| {
                let a = self.site(i);
                let d = self.row(a).difference(&other.row(a));
                let sample = d.iter().take(limit).map(|j| (a, self.site(j))).collect();
                (d.count() as u64, sample)
            })
            .collect();
        let total = per_row.iter().map(|(c, _)| c).sum();
        let sample = per_row
            .into_iter()
            .flat_map(|(_, s)| s)
            .take(limit)
            .collect();
        (total, sample)
    }
}

/// `row` moved forward by `by` bit positions, truncated to its length.
fn shifted(row: &PointSet, by: usize) -> PointSet {
    let len = row.len();
    let mut out = PointSet::empty(len);
    if by >= len {
        return out;
    }
    let src = row.as_words();
    let dst = out.as_words_mut();
    let (ws, bs) = (by / 64, by % 64);
    for i in (ws..dst.len()).rev() {
        let j = i - ws;
        let mut w = src[j] << bs;
        if bs > 0 && j > 0 {
            w |= src[j - 1] >> (64 - bs);
        }
        dst[i] = w;
    }
    // Bits beyond `len` cannot appear: they would come from positions
    // beyond `len − by` of a row that is itself trimmed, but the last word
    // may still receive them.
    let extra = dst.len() * 64 - len;
    if extra > 0 {
        let last = dst.len() - 1;
        dst[last] &= !0u64 >> extra;
    }
    out
}

/// Builds a relation from a per-source row function, as templates on
/// homogeneous grids and densely otherwise.
fn build<F>(grid: &ConeGrid, label: String, slack: Option<u32>, row_of: F) -> Result<GridRelation>
where
    F: Fn(Site) -> PointSet + Sync,
{
    let storage = if grid.is_homogeneous() {
        let q = (grid.slope().q() as usize).min(grid.t);
        let rows = (0..q * grid.x)
            .into_par_iter()
            .map(|i| row_of((i / grid.x, i % grid.x)))
            .collect();
        Storage::Template {
            q: grid.slope().q() as usize,
            rows,
        }
    } else {
        let n = grid.n_sites();
        if n > MAX_DENSE_SITES {
            return Err(Error::InstanceTooLarge {
                what: "grid sites for a dense relation".into(),
                count: n as u128,
                cap: MAX_DENSE_SITES as u128,
            });
        }
        let rows = (0..n)
            .into_par_iter()
            .map(|i| {
                let s = grid.site(i);
                if grid.is_live(s) {
                    row_of(s)
                } else {
                    PointSet::empty(n)
                }
            })
            .collect();
        Storage::Dense(rows)
    };
    Ok(GridRelation {
        t: grid.t,
        x: grid.x,
        time_periodic: grid.time_periodic,
        label,
        slack,
        storage,
    })
}

/// Lattice sites of a swept slice, added to `row`.
fn absorb(k: &Kernel, t: usize, slice: &Slice, row: &mut PointSet) {
    let g = k.grid();
    let base = t * g.x;
    if k.res() == 1 {
        for x in slice.ones() {
            row.insert(base + x);
        }
    } else {
        for x in 0..g.x {
            if slice.get(k.lattice_pos(x)) {
                row.insert(base + x);
            }
        }
    }
}

fn forward_set(k: &Kernel, seeds: &[Site]) -> PointSet {
    let mut row = PointSet::empty(k.grid().n_sites());
    k.forward(seeds, |t, s| absorb(k, t, s, &mut row));
    row
}

fn check_sites(grid: &ConeGrid, k: &[Site]) -> Result<()> {
    k.iter().try_for_each(|&s| grid.check_site(s))
}

/// The single-step relation: `(t, x) → (t', x')` when `t'` follows `t`,
/// `|x' − x|` is within the allowance of `(t, x)`, and both sites are live.
pub fn one_step_relation(grid: &ConeGrid) -> Relation {
    let n = grid.n_sites();
    let mut rel = Relation::empty(n);
    for a in grid.live_sites() {
        let Some(t1) = grid.next_time(a.0) else {
            continue;
        };
        let r = grid.allowance(a);
        for x1 in a.1.saturating_sub(r)..=(a.1 + r).min(grid.x - 1) {
            if grid.is_live((t1, x1)) {
                rel.insert(grid.index(a), grid.index((t1, x1)));
            }
        }
    }
    rel
}

/// The causal relation `J⁺`: reflexive-transitive closure of the
/// single-step relation.
pub fn j_plus(grid: &ConeGrid) -> Result<GridRelation> {
    let k = Kernel::new(grid, 1, Cone::Plain);
    build(grid, "J+".into(), None, |s| forward_set(&k, &[s]))
}

/// `J⁺(K)`: sites reachable from some live site of `k`.
pub fn j_plus_of_set(grid: &ConeGrid, k: &[Site]) -> Result<PointSet> {
    check_sites(grid, k)?;
    Ok(forward_set(&Kernel::new(grid, 1, Cone::Plain), k))
}

/// `J⁻(K)`: sites from which some live site of `k` is reachable.
pub fn j_minus_of_set(grid: &ConeGrid, k: &[Site]) -> Result<PointSet> {
    check_sites(grid, k)?;
    let kern = Kernel::new(grid, 1, Cone::Plain);
    let mut row = PointSet::empty(grid.n_sites());
    kern.backward(k, |t, s| absorb(&kern, t, s, &mut row));
    Ok(row)
}

/// The causal hull `J⁺(K) ∩ J⁻(K)` of the live sites of a window.
pub fn hull(grid: &ConeGrid, window: Window) -> Result<PointSet> {
    grid.check_window(window)?;
    let k = window_sites(grid, window);
    let mut h = j_plus_of_set(grid, &k)?;
    h.intersect_with(&j_minus_of_set(grid, &k)?);
    Ok(h)
}

/// Live sites of a window, time-major.
pub(crate) fn window_sites(grid: &ConeGrid, [t0, x0, t1, x1]: Window) -> Vec<Site> {
    (t0..=t1)
        .flat_map(|t| (x0..=x1).map(move |x| (t, x)))
        .filter(|&s| grid.is_live(s))
        .collect()
}

/// The chronological relation `I⁺`: pairs joined by a causal path with at
/// least one strictly timelike step (lateral move below the allowance).
/// On slope-1 grids this is `Δt > |Δx|`.
pub fn i_plus(grid: &ConeGrid) -> Result<GridRelation> {
    let plain = Kernel::new(grid, 1, Cone::Plain);
    let reduced = Kernel::new(grid, 1, Cone::Reduced);
    build(grid, "I+".into(), None, |s| {
        let mut slices = vec![plain.blank(); grid.t];
        plain.forward(&[s], |t, sl| slices[t].copy_from(sl));
        let mut seeds = vec![plain.blank(); grid.t];
        let mut scratch = reduced.scratch();
        for t in 0..grid.t {
            if let Some(tn) = grid.next_time(t) {
                let mut out = plain.blank();
                reduced.step_forward(t, tn, &slices[t], &mut out, &mut scratch);
                seeds[tn].or_with(&out);
            }
        }
        let mut row = PointSet::empty(grid.n_sites());
        plain.forward_from_slices(seeds, |t, sl| absorb(&plain, t, sl, &mut row));
        row
    })
}

/// Reachability with every cone widened by the factor `1 + 2^−k`.
///
/// Sweeps run on a lattice refined `R = 2^k` times laterally; a step from
/// allowance `a` moves at most `a·(R + 1)` refined positions. Removed sites
/// block only their own lattice position, so widened paths may slip past a
/// deletion between lattice columns. The relation shrinks as `k` grows and
/// always contains `J⁺`.
pub fn widened_reach(grid: &ConeGrid, k: u32) -> Result<GridRelation> {
    if k == 0 || k > MAX_SLACK {
        return Err(Error::BadParameters(format!(
            "slack index must be in 1..={MAX_SLACK}, got {k}"
        )));
    }
    let res = 1usize << k;
    let positions = (grid.x - 1) * res + 1;
    if positions > MAX_POSITIONS {
        return Err(Error::InstanceTooLarge {
            what: "refined positions per time slice".into(),
            count: positions as u128,
            cap: MAX_POSITIONS as u128,
        });
    }
    let kern = Kernel::new(grid, res, Cone::Widened);
    build(grid, format!("widened({k})"), Some(k), |s| {
        forward_set(&kern, &[s])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{BTreeSet, VecDeque};

    /// Plain breadth-first search over sites.
    fn bfs_reach(grid: &ConeGrid, from: Site) -> BTreeSet<Site> {
        let mut seen = BTreeSet::new();
        if !grid.is_live(from) {
            return seen;
        }
        let mut queue = VecDeque::from([from]);
        seen.insert(from);
        while let Some(a) = queue.pop_front() {
            let Some(t1) = grid.next_time(a.0) else {
                continue;
            };
            let r = grid.allowance(a) as isize;
            for dx in -r..=r {
                let x1 = a.1 as isize + dx;
                if x1 < 0 || x1 >= grid.x as isize {
                    continue;
                }
                let b = (t1, x1 as usize);
                if grid.is_live(b) && seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    /// Breadth-first search over refined states for the widened cone.
    fn bfs_widened(grid: &ConeGrid, k: u32, from: Site) -> BTreeSet<Site> {
        let res = 1usize << k;
        let positions = (grid.x - 1) * res + 1;
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([(from.0, from.1 * res)]);
        seen.insert((from.0, from.1 * res));
        while let Some((t, p)) = queue.pop_front() {
            let Some(t1) = grid.next_time(t) else {
                continue;
            };
            let col = (p + (res - 1) / 2) / res;
            let r = (grid.allowance((t, col)) * (res + 1)) as isize;
            for d in -r..=r {
                let p1 = p as isize + d;
                if p1 < 0 || p1 >= positions as isize {
                    continue;
                }
                let p1 = p1 as usize;
                if p1 % res == 0 && !grid.is_live((t1, p1 / res)) {
                    continue;
                }
                if seen.insert((t1, p1)) {
                    queue.push_back((t1, p1));
                }
            }
        }
        seen.into_iter()
            .filter(|&(_, p)| p % res == 0)
            .map(|(t, p)| (t, p / res))
            .collect()
    }

    fn row_sites(rel: &GridRelation, a: Site) -> BTreeSet<Site> {
        rel.row(a).iter().map(|j| rel.site(j)).collect()
    }

    fn arb_grid() -> impl Strategy<Value = ConeGrid> {
        (
            1usize..9,
            1usize..9,
            1u32..4,
            1u32..4,
            any::<bool>(),
            proptest::collection::vec((0usize..9, 0usize..9), 0..5),
            proptest::collection::vec((0usize..9, 0usize..9, 1u32..3, 1u32..3), 0..3),
        )
            .prop_map(|(t, x, p, q, per, removed, slopes)| {
                let mut g = ConeGrid::new(t, x)
                    .unwrap()
                    .with_slope(Slope::new(p, q).unwrap())
                    .time_periodic(per);
                for (a, b) in removed {
                    if a < t && b < x {
                        g = g.without((a, b)).unwrap();
                    }
                }
                for (a, b, p, q) in slopes {
                    if a < t && b < x {
                        g = g
                            .with_site_slope((a, b), Slope::new(p, q).unwrap())
                            .unwrap();
                    }
                }
                g
            })
    }

    use super::super::Slope;

    #[test]
    fn closed_form_on_slope_one_grids() {
        for (t, x) in [(1, 1), (1, 7), (5, 3), (16, 16), (32, 32), (32, 9), (7, 32)] {
            let g = ConeGrid::new(t, x).unwrap();
            let j = j_plus(&g).unwrap();
            assert!(j.is_template());
            for a in g.live_sites() {
                for b in g.live_sites() {
                    let want = b.0 >= a.0 && b.0 - a.0 >= a.1.abs_diff(b.1);
                    assert_eq!(j.contains(a, b), want, "{t}x{x}: {a:?} -> {b:?}");
                }
            }
        }
    }

    #[test]
    fn spec_examples() {
        let m16 = ConeGrid::minkowski(16).unwrap();
        let j = j_plus(&m16).unwrap();
        assert!(j.contains((0, 8), (5, 12)));
        assert!(!j.contains((0, 0), (2, 3)));
        let w1 = widened_reach(&m16, 1).unwrap();
        assert!(w1.contains((0, 0), (2, 3)));

        let holed = m16.clone().without((8, 8)).unwrap();
        let j = j_plus(&holed).unwrap();
        assert!(!j.contains((7, 7), (9, 9)));
        assert!(!j.is_template());
        for k in 1..=8 {
            assert!(
                widened_reach(&holed, k).unwrap().contains((7, 7), (9, 9)),
                "k={k}"
            );
        }

        let step = one_step_relation(&ConeGrid::minkowski(4).unwrap());
        let succ: Vec<usize> = step.row(0).iter().collect();
        assert_eq!(succ, vec![4, 5]);
        let g = ConeGrid::minkowski(4).unwrap().without((1, 0)).unwrap();
        assert_eq!(one_step_relation(&g).row(0).to_vec(), vec![5]);
        let c = ConeGrid::cylinder(4).unwrap();
        let succ: Vec<usize> = one_step_relation(&c).row(c.index((3, 1))).iter().collect();
        assert_eq!(succ, vec![0, 1, 2]);
    }

    #[test]
    fn widened_closed_form_on_minkowski() {
        let g = ConeGrid::minkowski(20).unwrap();
        for k in 1..=5 {
            let w = widened_reach(&g, k).unwrap();
            let r = 1usize << k;
            for a in g.live_sites() {
                for b in g.live_sites() {
                    let want = b.0 >= a.0 && (b.0 - a.0) * (r + 1) >= a.1.abs_diff(b.1) * r;
                    assert_eq!(w.contains(a, b), want, "k={k} {a:?} -> {b:?}");
                }
            }
        }
    }

    #[test]
    fn i_plus_is_strict_interior_on_slope_one() {
        let g = ConeGrid::minkowski(12).unwrap();
        let i = i_plus(&g).unwrap();
        let j = j_plus(&g).unwrap();
        assert!(i.is_subset(&j));
        for a in g.live_sites() {
            for b in g.live_sites() {
                let want = b.0 > a.0 && b.0 - a.0 > a.1.abs_diff(b.1);
                assert_eq!(i.contains(a, b), want, "{a:?} -> {b:?}");
            }
        }
    }

    #[test]
    fn hull_of_a_row_window_is_itself() {
        let g = ConeGrid::minkowski(16).unwrap();
        let h = hull(&g, [4, 4, 4, 8]).unwrap();
        let want: Vec<usize> = (4..=8).map(|x| g.index((4, x))).collect();
        assert_eq!(h.to_vec(), want);
        assert!(hull(&g, [4, 4, 16, 8]).is_err());
    }

    #[test]
    fn template_shift_crosses_words() {
        let g = ConeGrid::new(9, 13)
            .unwrap()
            .with_slope(Slope::new(2, 3).unwrap());
        let j = j_plus(&g).unwrap();
        assert!(j.is_template());
        for a in g.live_sites() {
            assert_eq!(row_sites(&j, a), bfs_reach(&g, a), "{a:?}");
        }
        let dense = j.to_relation();
        assert_eq!(dense.count() as u64, j.count());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn j_plus_matches_bfs(g in arb_grid()) {
            let j = j_plus(&g).unwrap();
            for a in g.live_sites() {
                prop_assert_eq!(row_sites(&j, a), bfs_reach(&g, a));
            }
            prop_assert!(j.is_reflexive_on(&g));
            let rel = j.to_relation();
            prop_assert!(rel.is_transitive());
            prop_assert_eq!(rel.count() as u64, j.count());
            // J⁺ is the reflexive-transitive closure of the single step on live sites.
            let closure = one_step_relation(&g).reflexive_transitive_closure();
            for a in g.live_sites() {
                for b in g.live_sites() {
                    prop_assert_eq!(closure.contains(g.index(a), g.index(b)), j.contains(a, b));
                }
            }
        }

        #[test]
        fn j_minus_is_transpose(g in arb_grid(), k in proptest::collection::vec((0usize..9, 0usize..9), 1..4)) {
            let k: Vec<Site> = k.into_iter().filter(|&(t, x)| t < g.t && x < g.x).collect();
            let j = j_plus(&g).unwrap();
            let fwd = j_plus_of_set(&g, &k).unwrap();
            let bwd = j_minus_of_set(&g, &k).unwrap();
            for s in g.live_sites() {
                let live_k = || k.iter().filter(|&&a| g.is_live(a));
                prop_assert_eq!(fwd.contains(g.index(s)), live_k().any(|&a| j.contains(a, s)));
                prop_assert_eq!(bwd.contains(g.index(s)), live_k().any(|&a| j.contains(s, a)));
            }
        }

        #[test]
        fn widened_matches_refined_bfs_and_is_monotone(g in arb_grid()) {
            let j = j_plus(&g).unwrap();
            let mut prev: Option<GridRelation> = None;
            for k in 1..=4 {
                let w = widened_reach(&g, k).unwrap();
                for a in g.live_sites() {
                    prop_assert_eq!(row_sites(&w, a), bfs_widened(&g, k, a), "k={} a={:?}", k, a);
                }
                prop_assert!(j.is_subset(&w));
                prop_assert!(w.to_relation().is_transitive());
                prop_assert!(w.is_reflexive_on(&g));
                if let Some(p) = &prev {
                    prop_assert!(w.is_subset(p), "widened({}) not inside widened({})", k, k - 1);
                }
                prev = Some(w);
            }
        }

        #[test]
        fn i_plus_inside_j_plus(g in arb_grid()) {
            let i = i_plus(&g).unwrap();
            let j = j_plus(&g).unwrap();
            prop_assert!(i.is_subset(&j));
            // I⁺ ∘ J⁺ ⊆ I⁺ and J⁺ ∘ I⁺ ⊆ I⁺ on live sites.
            for a in g.live_sites() {
                for b in row_sites(&i, a) {
                    for c in row_sites(&j, b) {
                        prop_assert!(i.contains(a, c));
                    }
                }
            }
        }
    }
}
