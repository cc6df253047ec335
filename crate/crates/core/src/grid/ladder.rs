//! Seifert approximation, the causality ladder, hyperbolicity checks and
//! export of grid windows as finite preordered spaces.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::kernel::{Cone, Kernel};
use super::reach::{j_plus, widened_reach, window_sites, GridRelation};
use super::{ConeGrid, Site, Window};
use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::props::{PropertyReport, Witness};
use crate::relation::{Preorder, Relation};
use crate::space::PreorderedSpace;
use crate::topology::FiniteTopology;

/// Largest window exported as a finite space.
const MAX_EXPORT_SITES: usize = 4096;

/// Number of leak pairs kept as examples in a ladder report.
const EXTRA_SAMPLE: usize = 16;

const GH: &str = "globally hyperbolic";

/// Finite proxy for the Seifert relation: the most widened-then-narrowed
/// cone relation computed.
#[derive(Clone, Debug)]
pub struct SeifertApprox {
    /// `widened_reach(grid, k_max)`; the widened relations decrease in `k`,
    /// so this is also their intersection over `k ≤ k_max`.
    pub relation: GridRelation,
    /// Whether `widened_reach(grid, k_max − 1)` has the same pairs.
    pub stabilized: bool,
}

fn check_k_max(k_max: u32) -> Result<()> {
    if k_max < 2 {
        return Err(Error::BadParameters(format!(
            "k_max must be at least 2, got {k_max}"
        )));
    }
    Ok(())
}

pub fn seifert_approx(grid: &ConeGrid, k_max: u32) -> Result<SeifertApprox> {
    check_k_max(k_max)?;
    let relation = widened_reach(grid, k_max)?;
    let stabilized = widened_reach(grid, k_max - 1)?.same_pairs(&relation);
    Ok(SeifertApprox {
        relation,
        stabilized,
    })
}

/// Rungs of the causality ladder, lowest first. `≈` rungs are verdicts
/// about the discretization (cone widening stands in for closedness).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rung {
    NonCausal,
    Causal,
    StablyCausal,
    CausallySimple,
    GloballyHyperbolic,
}

impl Rung {
    pub fn as_str(self) -> &'static str {
        match self {
            Rung::NonCausal => "non-causal",
            Rung::Causal => "causal",
            Rung::StablyCausal => "stably-causal≈",
            Rung::CausallySimple => "causally-simple≈",
            Rung::GloballyHyperbolic => "globally-hyperbolic",
        }
    }
}

impl fmt::Display for Rung {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Rung {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// How windows are chosen for the hyperbolicity hull check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowSampling {
    /// All windows are checked when there are at most this many; otherwise
    /// this many are drawn at random.
    pub budget: usize,
    pub seed: u64,
}

impl Default for WindowSampling {
    fn default() -> Self {
        WindowSampling {
            budget: 256,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderReport {
    pub rung: Rung,
    pub k_max: u32,
    /// A mutually reachable pair of distinct sites, when non-causal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_curve: Option<(Site, Site)>,
    /// Smallest slack index whose widened relation is antisymmetric.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antisymmetric_at: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seifert_stabilized: Option<bool>,
    /// Number of Seifert pairs outside `J⁺`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seifert_extra: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub seifert_extra_sample: Vec<(Site, Site)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperbolicity: Option<PropertyReport>,
}

/// Classifies a grid on the causality ladder:
///
/// * non-causal: `J⁺` has a mutual pair of distinct sites;
/// * causal otherwise;
/// * stably-causal≈: some widened relation with `k ≤ k_max` is
///   antisymmetric (on grids without periodic time every step advances
///   time, so `k = 1` qualifies without computation);
/// * causally-simple≈: additionally the Seifert approximation equals `J⁺`;
/// * globally-hyperbolic: additionally [`is_globally_hyperbolic`] holds.
pub fn causality_ladder(grid: &ConeGrid, k_max: u32) -> Result<LadderReport> {
    causality_ladder_with(grid, k_max, WindowSampling::default())
}

pub fn causality_ladder_with(
    grid: &ConeGrid,
    k_max: u32,
    sampling: WindowSampling,
) -> Result<LadderReport> {
    check_k_max(k_max)?;
    let mut report = LadderReport {
        rung: Rung::NonCausal,
        k_max,
        closed_curve: None,
        antisymmetric_at: None,
        seifert_stabilized: None,
        seifert_extra: None,
        seifert_extra_sample: Vec::new(),
        hyperbolicity: None,
    };
    let j = j_plus(grid)?;
    if let Some(pair) = j.first_symmetric_pair() {
        report.closed_curve = Some(pair);
        return Ok(report);
    }
    report.rung = Rung::Causal;
    report.antisymmetric_at = if grid.is_time_periodic() {
        let mut found = None;
        for k in 1..=k_max {
            if widened_reach(grid, k)?.is_antisymmetric() {
                found = Some(k);
                break;
            }
        }
        found
    } else {
        Some(1)
    };
    if report.antisymmetric_at.is_none() {
        return Ok(report);
    }
    report.rung = Rung::StablyCausal;
    let seifert = seifert_approx(grid, k_max)?;
    report.seifert_stabilized = Some(seifert.stabilized);
    let (extra, sample) = seifert.relation.difference(&j, EXTRA_SAMPLE);
    report.seifert_extra = Some(extra);
    report.seifert_extra_sample = sample;
    if extra > 0 {
        return Ok(report);
    }
    report.rung = Rung::CausallySimple;
    let gh = hull_check(grid, sampling)?;
    if gh.verdict {
        report.rung = Rung::GloballyHyperbolic;
    }
    report.hyperbolicity = Some(gh);
    Ok(report)
}

/// Global hyperbolicity on a finite grid: the grid is causal, the Seifert
/// approximation at `k_max` adds nothing to `J⁺` (otherwise the first leak
/// pair is the witness), and for every checked window `K` the causal hull
/// `J⁺(K) ∩ J⁻(K)` is the same whether computed on the grid or on the grid
/// embedded in a larger one (the hull does not leak through deletions or
/// boundaries).
pub fn is_globally_hyperbolic(grid: &ConeGrid, k_max: u32) -> Result<PropertyReport> {
    is_globally_hyperbolic_with(grid, k_max, WindowSampling::default())
}

pub fn is_globally_hyperbolic_with(
    grid: &ConeGrid,
    k_max: u32,
    sampling: WindowSampling,
) -> Result<PropertyReport> {
    check_k_max(k_max)?;
    let j = j_plus(grid)?;
    if let Some((a, b)) = j.first_symmetric_pair() {
        return Ok(PropertyReport::fail(
            GH,
            Witness::Prerequisite {
                property: "causal".into(),
                witness: Box::new(site_pair(a, b, "closed causal curve")),
            },
        ));
    }
    let seifert = seifert_approx(grid, k_max)?;
    let (_, leak) = seifert.relation.difference(&j, 1);
    if let Some(&(a, b)) = leak.first() {
        return Ok(PropertyReport::fail(
            GH,
            site_pair(a, b, &format!("in widened({k_max}) but not in J+")),
        ));
    }
    hull_check(grid, sampling)
}

fn site_pair(a: Site, b: Site, detail: &str) -> Witness {
    Witness::SitePair {
        from: [a.0, a.1],
        to: [b.0, b.1],
        detail: detail.to_string(),
    }
}

/// Windows to check: all of them in row-major `(t0, x0, t1, x1)` order when
/// there are at most `budget`, otherwise `budget` seeded random draws.
pub(crate) fn windows(grid: &ConeGrid, sampling: WindowSampling) -> Vec<Window> {
    let (t, x) = (grid.extent_t(), grid.extent_x());
    let total = (t * (t + 1) / 2) as u128 * (x * (x + 1) / 2) as u128;
    if total <= sampling.budget as u128 {
        let mut out = Vec::new();
        for t0 in 0..t {
            for x0 in 0..x {
                for t1 in t0..t {
                    for x1 in x0..x {
                        out.push([t0, x0, t1, x1]);
                    }
                }
            }
        }
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    (0..sampling.budget)
        .map(|_| {
            let (a, b) = (rng.gen_range(0..t), rng.gen_range(0..t));
            let (c, d) = (rng.gen_range(0..x), rng.gen_range(0..x));
            [a.min(b), c.min(d), a.max(b), c.max(d)]
        })
        .collect()
}

fn hull_in(kern: &Kernel, k: &[Site]) -> PointSet {
    let g = kern.grid();
    let mut fwd = PointSet::empty(g.n_sites());
    kern.forward(k, |t, s| {
        for x in s.ones() {
            fwd.insert(t * g.extent_x() + x);
        }
    });
    let mut h = PointSet::empty(g.n_sites());
    kern.backward(k, |t, s| {
        for x in s.ones() {
            let i = t * g.extent_x() + x;
            if fwd.contains(i) {
                h.insert(i);
            }
        }
    });
    h
}

fn hull_check(grid: &ConeGrid, sampling: WindowSampling) -> Result<PropertyReport> {
    let (big, off) = grid.enlarged();
    let kern = Kernel::new(grid, 1, Cone::Plain);
    let big_kern = Kernel::new(&big, 1, Cone::Plain);
    let ws = windows(grid, sampling);
    let mismatch = ws.par_iter().find_map_first(|&w| {
        let k = window_sites(grid, w);
        let shifted: Vec<Site> = k.iter().map(|&(t, x)| (t + off.0, x + off.1)).collect();
        let small = hull_in(&kern, &k);
        let large = hull_in(&big_kern, &shifted);
        let differs = |s: Site| {
            small.contains(grid.index(s)) != large.contains(big.index((s.0 + off.0, s.1 + off.1)))
        };
        (0..grid.n_sites())
            .map(|i| grid.site(i))
            .find(|&s| differs(s))
            .map(|s| (w, s))
    });
    Ok(match mismatch {
        None => PropertyReport::pass(GH),
        Some((window, s)) => PropertyReport::fail(
            GH,
            Witness::HullMismatch {
                window,
                site: [s.0, s.1],
            },
        ),
    })
}

/// A grid window as a finite preordered space.
#[derive(Clone, Debug)]
pub struct ExportedSpace {
    pub space: PreorderedSpace,
    /// Grid site of each point, in point order (time-major).
    pub sites: Vec<Site>,
}

/// The live sites of `window` with the discrete topology and the order
/// `J⁺` restricted to the window, re-closed transitively.
pub fn export_finite_space(grid: &ConeGrid, window: Window) -> Result<ExportedSpace> {
    grid.check_window(window)?;
    let sites = window_sites(grid, window);
    let n = sites.len();
    if n > MAX_EXPORT_SITES {
        return Err(Error::InstanceTooLarge {
            what: "window sites for export".into(),
            count: n as u128,
            cap: MAX_EXPORT_SITES as u128,
        });
    }
    let kern = Kernel::new(grid, 1, Cone::Plain);
    let mut local = vec![usize::MAX; grid.n_sites()];
    for (i, &s) in sites.iter().enumerate() {
        local[grid.index(s)] = i;
    }
    let rows: Vec<PointSet> = sites
        .par_iter()
        .map(|&s| {
            let mut row = PointSet::empty(n);
            kern.forward(&[s], |t, sl| {
                for x in sl.ones() {
                    let i = local[grid.index((t, x))];
                    if i != usize::MAX {
                        row.insert(i);
                    }
                }
            });
            row
        })
        .collect();
    let order = Preorder::generated_by(&Relation::from_rows(rows)?);
    let space = PreorderedSpace::new(FiniteTopology::discrete(n), order)?;
    Ok(ExportedSpace { space, sites })
}

/// Row throughput of the `J⁺` kernel over every live source.
#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub sites: usize,
    pub rows: usize,
    pub pairs: u64,
    pub seconds: f64,
    pub rows_per_second: f64,
}

pub fn bench(grid: &ConeGrid) -> BenchReport {
    let start = Instant::now();
    let kern = Kernel::new(grid, 1, Cone::Plain);
    let live: Vec<Site> = grid.live_sites().collect();
    let pairs: u64 = live
        .par_iter()
        .map(|&s| {
            let mut count = 0u64;
            kern.forward(&[s], |_, sl| count += sl.ones().count() as u64);
            count
        })
        .sum();
    let seconds = start.elapsed().as_secs_f64();
    BenchReport {
        sites: grid.n_sites(),
        rows: live.len(),
        pairs,
        seconds,
        rows_per_second: live.len() as f64 / seconds.max(1e-9),
    }
}
