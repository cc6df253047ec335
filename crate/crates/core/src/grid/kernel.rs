//! Bit-parallel time sweeps over a cone grid.
//!
//! A time slice is a bit vector over lateral positions. At resolution `R`
//! there are `(X − 1)·R + 1` positions and lattice column `x` sits at
//! position `x·R`; positions in between exist only for widened cones.
//! One step dilates a slice by the step radius (each run of set bits grows
//! by the radius on both sides) and masks out removed sites. Each slice
//! tracks the range of words that may be non-zero, so narrow cones stay
//! cheap.

use super::{ConeGrid, Site};

const W: usize = 64;

/// A bit slice that is zero outside `lo..=hi` (empty when `lo > hi`).
#[derive(Clone, Debug)]
pub(crate) struct Slice {
    words: Vec<u64>,
    lo: usize,
    hi: usize,
}

impl Slice {
    pub(crate) fn new(nw: usize) -> Self {
        Slice {
            words: vec![0; nw],
            lo: 1,
            hi: 0,
        }
    }

    #[inline]
    pub(crate) fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub(crate) fn clear(&mut self) {
        if !self.is_empty() {
            self.words[self.lo..=self.hi].fill(0);
        }
        self.lo = 1;
        self.hi = 0;
    }

    #[inline]
    pub(crate) fn get(&self, pos: usize) -> bool {
        self.words[pos / W] >> (pos % W) & 1 == 1
    }

    pub(crate) fn set(&mut self, pos: usize) {
        let w = pos / W;
        self.words[w] |= 1 << (pos % W);
        if self.is_empty() {
            self.lo = w;
            self.hi = w;
        } else {
            self.lo = self.lo.min(w);
            self.hi = self.hi.max(w);
        }
    }

    fn shrink(&mut self) {
        while !self.is_empty() && self.words[self.lo] == 0 {
            self.lo += 1;
        }
        while !self.is_empty() && self.words[self.hi] == 0 {
            if self.hi == 0 {
                self.lo = 1;
                break;
            }
            self.hi -= 1;
        }
    }

    /// `self |= other`.
    pub(crate) fn or_with(&mut self, other: &Slice) {
        if other.is_empty() {
            return;
        }
        for i in other.lo..=other.hi {
            self.words[i] |= other.words[i];
        }
        if self.is_empty() {
            self.lo = other.lo;
            self.hi = other.hi;
        } else {
            self.lo = self.lo.min(other.lo);
            self.hi = self.hi.max(other.hi);
        }
    }

    /// `self &= mask`.
    pub(crate) fn and_with(&mut self, mask: &[u64]) {
        if self.is_empty() {
            return;
        }
        for i in self.lo..=self.hi {
            self.words[i] &= mask[i];
        }
        self.shrink();
    }

    /// `self &= !other`; returns whether anything remains.
    pub(crate) fn and_not(&mut self, other: &Slice) -> bool {
        if !self.is_empty() && !other.is_empty() {
            let (a, b) = (self.lo.max(other.lo), self.hi.min(other.hi));
            if a <= b {
                for i in a..=b {
                    self.words[i] &= !other.words[i];
                }
            }
            self.shrink();
        }
        !self.is_empty()
    }

    pub(crate) fn copy_from(&mut self, other: &Slice) {
        self.clear();
        self.or_with(other);
    }

    /// Sets every position in `a..=b`.
    fn fill(&mut self, a: usize, b: usize) {
        let (wa, wb) = (a / W, b / W);
        let lo_mask = !0u64 << (a % W);
        let hi_mask = !0u64 >> (W - 1 - b % W);
        if wa == wb {
            self.words[wa] |= lo_mask & hi_mask;
        } else {
            self.words[wa] |= lo_mask;
            self.words[wa + 1..wb].fill(!0);
            self.words[wb] |= hi_mask;
        }
        if self.is_empty() {
            self.lo = wa;
            self.hi = wb;
        } else {
            self.lo = self.lo.min(wa);
            self.hi = self.hi.max(wb);
        }
    }

    /// Calls `f(a, b)` for each maximal run `a..=b` of set positions, in
    /// increasing order.
    fn runs(&self, mut f: impl FnMut(usize, usize)) {
        if self.is_empty() {
            return;
        }
        let end = (self.hi + 1) * W;
        let mut p = self.lo * W;
        let mut start: Option<usize> = None;
        while p < end {
            let (i, b) = (p / W, p % W);
            let w = self.words[i] >> b;
            match start {
                None => {
                    if w == 0 {
                        p = (i + 1) * W;
                    } else {
                        p += w.trailing_zeros() as usize;
                        start = Some(p);
                    }
                }
                Some(s) => {
                    let ones = w.trailing_ones() as usize;
                    if ones >= W - b {
                        p = (i + 1) * W;
                    } else {
                        p += ones;
                        f(s, p - 1);
                        start = None;
                    }
                }
            }
        }
        if let Some(s) = start {
            f(s, end - 1);
        }
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        let range = if self.is_empty() {
            0..0
        } else {
            self.lo..self.hi + 1
        };
        range.flat_map(move |i| {
            let mut w = self.words[i];
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * W + b)
            })
        })
    }
}

/// Per-time step data for one direction of travel.
#[derive(Clone, Debug)]
struct Layer {
    /// `None`: every position is live.
    live: Option<Vec<u64>>,
    /// `(radius, positions using it)`; a `None` mask means all positions.
    groups: Vec<(usize, Option<Vec<u64>>)>,
}

/// Sweep engine for one grid at one resolution and one cone scaling.
#[derive(Clone, Debug)]
pub(crate) struct Kernel<'g> {
    grid: &'g ConeGrid,
    res: usize,
    positions: usize,
    nw: usize,
    layers: Vec<Layer>,
}

/// How a lattice allowance `a` becomes a radius in positions.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Cone {
    /// `a·R`: the plain cone (used at resolution 1).
    Plain,
    /// `a·(R + 1)`: the cone widened by a factor `1 + 1/R`.
    Widened,
    /// `a − 1` at resolution 1, absent when `a = 0`: a strictly
    /// timelike step.
    Reduced,
}

impl<'g> Kernel<'g> {
    pub(crate) fn new(grid: &'g ConeGrid, res: usize, cone: Cone) -> Self {
        let positions = (grid.x - 1) * res + 1;
        let nw = positions.div_ceil(W);
        let full_mask = |f: &dyn Fn(usize) -> bool| -> Vec<u64> {
            let mut m = vec![0u64; nw];
            for pos in 0..positions {
                if f(pos) {
                    m[pos / W] |= 1 << (pos % W);
                }
            }
            m
        };
        // Lattice column governing a position: the nearest, ties downward.
        let column = |pos: usize| (pos + (res - 1) / 2) / res;
        let layers = (0..grid.t)
            .map(|t| {
                let live = if (0..grid.x).all(|x| grid.is_live((t, x))) {
                    None
                } else {
                    Some(full_mask(&|pos| {
                        pos % res != 0 || grid.is_live((t, pos / res))
                    }))
                };
                let radius = |x: usize| -> Option<usize> {
                    let a = grid.allowance((t, x));
                    match cone {
                        Cone::Plain => Some(a * res),
                        Cone::Widened => Some(a * (res + 1)),
                        Cone::Reduced => a.checked_sub(1),
                    }
                };
                let radii: Vec<Option<usize>> = (0..grid.x).map(radius).collect();
                let mut distinct: Vec<Option<usize>> = radii.clone();
                distinct.sort();
                distinct.dedup();
                let groups = if distinct.len() == 1 {
                    distinct[0].map(|r| (r, None)).into_iter().collect()
                } else {
                    distinct
                        .into_iter()
                        .flatten()
                        .map(|r| (r, Some(full_mask(&|pos| radii[column(pos)] == Some(r)))))
                        .collect()
                };
                Layer { live, groups }
            })
            .collect();
        Kernel {
            grid,
            res,
            positions,
            nw,
            layers,
        }
    }

    pub(crate) fn res(&self) -> usize {
        self.res
    }

    pub(crate) fn grid(&self) -> &ConeGrid {
        self.grid
    }

    pub(crate) fn blank(&self) -> Slice {
        Slice::new(self.nw)
    }

    pub(crate) fn lattice_pos(&self, x: usize) -> usize {
        x * self.res
    }

    /// `out |= {p : some set position of src lies within distance r}`.
    fn dilate_into(&self, src: &Slice, r: usize, out: &mut Slice) {
        let last = self.positions - 1;
        let mut open: Option<(usize, usize)> = None;
        src.runs(|a, b| {
            let (a, b) = (a.saturating_sub(r), (b + r).min(last));
            match open {
                Some((oa, ob)) if a <= ob + 1 => open = Some((oa, ob.max(b))),
                Some((oa, ob)) => {
                    out.fill(oa, ob);
                    open = Some((a, b));
                }
                None => open = Some((a, b)),
            }
        });
        if let Some((a, b)) = open {
            out.fill(a, b);
        }
    }

    /// Positions at time `t + 1` reachable in one step from `cur` at `t`.
    /// `out` must be empty.
    pub(crate) fn step_forward(
        &self,
        t: usize,
        t_next: usize,
        cur: &Slice,
        out: &mut Slice,
        scratch: &mut Scratch,
    ) {
        let layer = &self.layers[t];
        for (r, mask) in &layer.groups {
            match mask {
                None => self.dilate_into(cur, *r, out),
                Some(m) => {
                    scratch.masked.copy_from(cur);
                    scratch.masked.and_with(m);
                    let masked = std::mem::replace(&mut scratch.masked, Slice::new(0));
                    self.dilate_into(&masked, *r, out);
                    scratch.masked = masked;
                }
            }
        }
        if let Some(live) = &self.layers[t_next].live {
            out.and_with(live);
        }
    }

    /// Positions at time `t` from which one step reaches `cur` at `t + 1`.
    /// `out` must be empty.
    pub(crate) fn step_backward(
        &self,
        t: usize,
        cur: &Slice,
        out: &mut Slice,
        scratch: &mut Scratch,
    ) {
        let layer = &self.layers[t];
        for (r, mask) in &layer.groups {
            scratch.masked.clear();
            let mut dil = std::mem::replace(&mut scratch.masked, Slice::new(0));
            self.dilate_into(cur, *r, &mut dil);
            if let Some(m) = mask {
                dil.and_with(m);
            }
            out.or_with(&dil);
            scratch.masked = dil;
        }
        if let Some(live) = &layer.live {
            out.and_with(live);
        }
    }

    pub(crate) fn scratch(&self) -> Scratch {
        Scratch {
            masked: self.blank(),
        }
    }

    /// Forward reach from `seeds` (site times and lattice columns). Calls
    /// `sink(t, slice)` with the reachable positions at each time, in
    /// increasing time order for non-periodic grids.
    pub(crate) fn forward(&self, seeds: &[Site], sink: impl FnMut(usize, &Slice)) {
        self.sweep(seeds, true, sink)
    }

    /// Backward reach (sites from which some seed is reachable).
    pub(crate) fn backward(&self, seeds: &[Site], sink: impl FnMut(usize, &Slice)) {
        self.sweep(seeds, false, sink)
    }

    /// Forward reach from arbitrary position slices per time.
    pub(crate) fn forward_from_slices(&self, seeds: Vec<Slice>, sink: impl FnMut(usize, &Slice)) {
        self.sweep_slices(seeds, true, sink)
    }

    fn sweep(&self, seeds: &[Site], forward: bool, sink: impl FnMut(usize, &Slice)) {
        let mut slices = vec![self.blank(); self.grid.t];
        for &(t, x) in seeds {
            if self.grid.is_live((t, x)) {
                slices[t].set(self.lattice_pos(x));
            }
        }
        self.sweep_slices(slices, forward, sink)
    }

    fn sweep_slices(&self, seeds: Vec<Slice>, forward: bool, mut sink: impl FnMut(usize, &Slice)) {
        let g = self.grid;
        let mut scratch = self.scratch();
        if !g.time_periodic {
            let times: Vec<usize> = if forward {
                (0..g.t).collect()
            } else {
                (0..g.t).rev().collect()
            };
            let start = match times.iter().position(|&t| !seeds[t].is_empty()) {
                Some(i) => i,
                None => return,
            };
            let mut cur = self.blank();
            let mut next = self.blank();
            for (k, &t) in times.iter().enumerate().skip(start) {
                cur.or_with(&seeds[t]);
                sink(t, &cur);
                let Some(&tn) = times.get(k + 1) else { break };
                next.clear();
                if forward {
                    self.step_forward(t, tn, &cur, &mut next, &mut scratch);
                } else {
                    self.step_backward(tn, &cur, &mut next, &mut scratch);
                }
                std::mem::swap(&mut cur, &mut next);
            }
            return;
        }
        // Periodic time: propagate deltas around the cycle until stable.
        let mut visited = seeds;
        let mut delta: Vec<Slice> = visited.clone();
        let mut queue: std::collections::VecDeque<usize> =
            (0..g.t).filter(|&t| !visited[t].is_empty()).collect();
        let mut queued: Vec<bool> = (0..g.t).map(|t| !visited[t].is_empty()).collect();
        let mut out = self.blank();
        while let Some(t) = queue.pop_front() {
            queued[t] = false;
            let d = std::mem::replace(&mut delta[t], self.blank());
            out.clear();
            let tn = if forward {
                g.next_time(t).expect("periodic")
            } else {
                g.prev_time(t).expect("periodic")
            };
            if forward {
                self.step_forward(t, tn, &d, &mut out, &mut scratch);
            } else {
                self.step_backward(tn, &d, &mut out, &mut scratch);
            }
            if out.and_not(&visited[tn]) {
                visited[tn].or_with(&out);
                delta[tn].or_with(&out);
                if !queued[tn] {
                    queued[tn] = true;
                    queue.push_back(tn);
                }
            }
        }
        for (t, s) in visited.iter().enumerate() {
            sink(t, s);
        }
    }
}

pub(crate) struct Scratch {
    masked: Slice,
}
