//! Discretized (1+1)-dimensional causal structure.
//!
//! A [`ConeGrid`] is a `T × X` lattice of sites `(t, x)`. Each step advances
//! time by one and moves laterally by at most the step allowance of the
//! current site. A slope `p/q` grants at most `p` lateral units per `q`
//! steps, phased in time: the allowance at time `t` is
//! `⌊p(t+1)/q⌋ − ⌊pt/q⌋`. Removed sites are excluded from every relation,
//! and a time-periodic grid identifies time `T` with time `0`.
//!
//! Reachability (`J⁺`), its strict-interior variant (`I⁺`), cone widening
//! and the causality ladder live in the submodules and are re-exported here.

mod kernel;
mod ladder;
mod reach;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ladder::{
    bench, causality_ladder, causality_ladder_with, export_finite_space, is_globally_hyperbolic,
    is_globally_hyperbolic_with, seifert_approx, BenchReport, ExportedSpace, LadderReport, Rung,
    SeifertApprox, WindowSampling,
};
pub use reach::{
    hull, i_plus, j_minus_of_set, j_plus, j_plus_of_set, one_step_relation, widened_reach,
    GridRelation, MAX_DENSE_SITES, MAX_SLACK,
};

/// A lattice site `(t, x)`.
pub type Site = (usize, usize);

/// An inclusive rectangle `[t0, x0, t1, x1]` of sites.
pub type Window = [usize; 4];

/// A positive rational cone slope `p/q` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: u32,
    q: u32,
}

impl Slope {
    pub const ONE: Slope = Slope { p: 1, q: 1 };

    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::BadParameters(format!(
                "slope {p}/{q} must be positive"
            )));
        }
        let g = gcd(p, q);
        Ok(Slope { p: p / g, q: q / g })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Lateral units granted for the step from time `t` to `t + 1`.
    #[inline]
    pub fn allowance(&self, t: usize) -> usize {
        let (p, q, t) = (self.p as u64, self.q as u64, t as u64);
        (p * (t + 1) / q - p * t / q) as usize
    }

    /// Largest single-step allowance, `⌈p/q⌉`.
    pub fn ceil(&self) -> usize {
        self.p.div_ceil(self.q) as usize
    }
}

impl std::str::FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad slope `{s}`, expected p/q"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        Slope::new(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a as u32, b as u32) as usize * b
}

/// A (1+1)-dimensional cone grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGrid {
    t: usize,
    x: usize,
    slope: Slope,
    site_slopes: BTreeMap<Site, Slope>,
    removed: BTreeSet<Site>,
    time_periodic: bool,
}

impl ConeGrid {
    pub fn new(t: usize, x: usize) -> Result<Self> {
        if t == 0 || x == 0 {
            return Err(Error::BadParameters(format!(
                "grid extents must be positive, got {t}×{x}"
            )));
        }
        Ok(ConeGrid {
            t,
            x,
            slope: Slope::ONE,
            site_slopes: BTreeMap::new(),
            removed: BTreeSet::new(),
            time_periodic: false,
        })
    }

    /// `MINK(n)`: an `n × n` slope-1 grid.
    pub fn minkowski(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    /// `CYL(n)`: `MINK(n)` with time identified periodically.
    pub fn cylinder(n: usize) -> Result<Self> {
        Ok(Self::new(n, n)?.time_periodic(true))
    }

    pub fn with_slope(mut self, slope: Slope) -> Self {
        self.slope = slope;
        self
    }

    pub fn time_periodic(mut self, on: bool) -> Self {
        self.time_periodic = on;
        self
    }

    pub fn with_site_slope(mut self, site: Site, slope: Slope) -> Result<Self> {
        self.check_site(site)?;
        self.site_slopes.insert(site, slope);
        Ok(self)
    }

    pub fn without(mut self, site: Site) -> Result<Self> {
        self.check_site(site)?;
        self.removed.insert(site);
        Ok(self)
    }

    pub fn check_site(&self, (t, x): Site) -> Result<()> {
        if t >= self.t || x >= self.x {
            return Err(Error::BadParameters(format!(
                "site ({t}, {x}) outside the {}×{} grid",
                self.t, self.x
            )));
        }
        Ok(())
    }

    pub fn check_window(&self, w: Window) -> Result<()> {
        let [t0, x0, t1, x1] = w;
        if t0 > t1 || x0 > x1 || t1 >= self.t || x1 >= self.x {
            return Err(Error::WindowOutOfRange(w));
        }
        Ok(())
    }

    pub fn extent_t(&self) -> usize {
        self.t
    }

    pub fn extent_x(&self) -> usize {
        self.x
    }

    pub fn slope(&self) -> Slope {
        self.slope
    }

    pub fn site_slopes(&self) -> &BTreeMap<Site, Slope> {
        &self.site_slopes
    }

    pub fn removed(&self) -> &BTreeSet<Site> {
        &self.removed
    }

    pub fn is_time_periodic(&self) -> bool {
        self.time_periodic
    }

    pub fn n_sites(&self) -> usize {
        self.t * self.x
    }

    #[inline]
    pub fn index(&self, (t, x): Site) -> usize {
        t * self.x + x
    }

    #[inline]
    pub fn site(&self, i: usize) -> Site {
        (i / self.x, i % self.x)
    }

    #[inline]
    pub fn is_live(&self, s: Site) -> bool {
        !self.removed.contains(&s)
    }

    pub fn live_sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.n_sites())
            .map(|i| self.site(i))
            .filter(|&s| self.is_live(s))
    }

    pub fn slope_at(&self, s: Site) -> Slope {
        self.site_slopes.get(&s).copied().unwrap_or(self.slope)
    }

    /// Lateral allowance of the step leaving `s`.
    #[inline]
    pub fn allowance(&self, s: Site) -> usize {
        self.slope_at(s).allowance(s.0)
    }

    /// Time after `t`, if any.
    #[inline]
    pub fn next_time(&self, t: usize) -> Option<usize> {
        if t + 1 < self.t {
            Some(t + 1)
        } else if self.time_periodic {
            Some(0)
        } else {
            None
        }
    }

    #[inline]
    pub fn prev_time(&self, t: usize) -> Option<usize> {
        if t > 0 {
            Some(t - 1)
        } else if self.time_periodic {
            Some(self.t - 1)
        } else {
            None
        }
    }

    /// Uniform slope, nothing removed, no periodicity: rows are determined
    /// by the source column and the slope phase.
    pub fn is_homogeneous(&self) -> bool {
        self.site_slopes.is_empty() && self.removed.is_empty() && !self.time_periodic
    }

    /// Period of the allowance pattern in time (lcm of all denominators).
    pub fn phase_period(&self) -> usize {
        self.site_slopes
            .values()
            .fold(self.slope.q as usize, |acc, s| lcm(acc, s.q as usize))
    }

    /// The grid embedded in a larger, non-periodic one with one extra
    /// column on each side, one extra step on top and `phase_period` extra
    /// steps below (so slope phases are preserved). Returns the grid and
    /// the offset of the original origin.
    pub fn enlarged(&self) -> (ConeGrid, Site) {
        let dt = self.phase_period();
        let off = (dt, 1);
        let mut g = ConeGrid::new(self.t + dt + 1, self.x + 2).expect("positive extents");
        g.slope = self.slope;
        g.site_slopes = self
            .site_slopes
            .iter()
            .map(|(&(t, x), &s)| ((t + off.0, x + off.1), s))
            .collect();
        g.removed = self
            .removed
            .iter()
            .map(|&(t, x)| (t + off.0, x + off.1))
            .collect();
        (g, off)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_allowances_are_phased() {
        let s: Slope = "1/2".parse().unwrap();
        assert_eq!(
            (0..4).map(|t| s.allowance(t)).collect::<Vec<_>>(),
            vec![0, 1, 0, 1]
        );
        let s: Slope = "3/2".parse().unwrap();
        assert_eq!(
            (0..4).map(|t| s.allowance(t)).collect::<Vec<_>>(),
            vec![1, 2, 1, 2]
        );
        assert_eq!(s.ceil(), 2);
        assert_eq!("2/4".parse::<Slope>().unwrap(), Slope::new(1, 2).unwrap());
        assert!("0/1".parse::<Slope>().is_err());
        assert!("a".parse::<Slope>().is_err());
        assert_eq!(Slope::ONE.to_string(), "1/1");
    }

    #[test]
    fn time_neighbours() {
        let g = ConeGrid::minkowski(4).unwrap();
        assert_eq!(g.next_time(3), None);
        assert_eq!(g.prev_time(0), None);
        let c = ConeGrid::cylinder(4).unwrap();
        assert_eq!(c.next_time(3), Some(0));
        assert_eq!(c.prev_time(0), Some(3));
    }

    #[test]
    fn windows_and_sites_are_checked() {
        let g = ConeGrid::minkowski(4).unwrap();
        assert!(g.check_window([0, 0, 3, 3]).is_ok());
        assert_eq!(
            g.check_window([0, 0, 4, 3]),
            Err(Error::WindowOutOfRange([0, 0, 4, 3]))
        );
        assert!(g.clone().without((4, 0)).is_err());
        assert!(ConeGrid::new(0, 3).is_err());
    }
}
