//! Instance generation, theorem verification at finite scale,
//! counterexample search and the interval hull-diameter diagnostic.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitset::PointSet;
use crate::closure::smallest_closed_preorder;
use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::format::{Instance, SpaceFile};
use crate::props::{self, ConvexityKind, PropertyReport, DEFAULT_CAP};
use crate::relation::{Preorder, Relation};
use crate::separation::check_completely_regular;
use crate::space::{Direction, PreorderedSpace};
use crate::topology::FiniteTopology;

/// Largest `n` for exhaustive enumeration.
pub const MAX_ENUM_N: usize = 4;

fn random_preorder(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Preorder {
    let mut gens = Relation::empty(n);
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(density) {
                gens.insert(a, b);
            }
        }
    }
    Preorder::generated_by(&gens)
}

fn check_random_args(n: usize, density: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::BadParameters("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::BadParameters(format!(
            "density {density} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Topology from a random specialization preorder (pair density drawn
/// uniformly) and an order generated by pairs of the given density, with
/// no repair: the graph need not be closed.
pub fn random_pair(seed: u64, n: usize, density: f64) -> Result<PreorderedSpace> {
    check_random_args(n, density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (top, ord) = random_parts(&mut rng, n, density);
    PreorderedSpace::new(top, ord)
}

fn random_parts(rng: &mut ChaCha8Rng, n: usize, density: f64) -> (FiniteTopology, Preorder) {
    let top_density = rng.gen::<f64>();
    let top = FiniteTopology::from_preorder(&random_preorder(rng, n, top_density));
    let ord = random_preorder(rng, n, density);
    (top, ord)
}

/// Like [`random_pair`], but the order is replaced by the smallest closed
/// preorder containing it, so the result is T2-preordered.
pub fn random_space(seed: u64, n: usize, density: f64) -> Result<PreorderedSpace> {
    check_random_args(n, density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (top, ord) = random_parts(&mut rng, n, density);
    let closed = smallest_closed_preorder(&top, ord.graph())?;
    PreorderedSpace::new(top, closed)
}

/// A seeded stream of `count` random spaces with `n` in `n_min..=n_max`.
/// Even draws are closure-repaired ([`random_space`]), odd draws are raw
/// ([`random_pair`]); densities are uniform.
pub fn random_sample(
    seed: u64,
    count: usize,
    n_min: usize,
    n_max: usize,
) -> Result<impl Iterator<Item = PreorderedSpace>> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::BadParameters(format!(
            "bad size range {n_min}..={n_max}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(move |i| {
        let n = rng.gen_range(n_min..=n_max);
        let density = rng.gen::<f64>();
        let sub = rng.gen::<u64>();
        if i % 2 == 0 {
            random_space(sub, n, density).expect("valid arguments")
        } else {
            random_pair(sub, n, density).expect("valid arguments")
        }
    }))
}

fn check_enum_n(n: usize) -> Result<()> {
    if n > MAX_ENUM_N {
        return Err(Error::InstanceTooLarge {
            what: "points for exhaustive enumeration".into(),
            count: n as u128,
            cap: MAX_ENUM_N as u128,
        });
    }
    Ok(())
}

/// All preorders on `n` points, ordered by the bit mask of their
/// off-diagonal pairs (row-major).
pub fn preorders(n: usize) -> Result<Vec<Preorder>> {
    check_enum_n(n)?;
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << off.len()) {
        let mut rel = Relation::identity(n);
        for (k, &(a, b)) in off.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rel.insert(a, b);
            }
        }
        if let Ok(p) = Preorder::new(rel) {
            out.push(p);
        }
    }
    Ok(out)
}

/// All topologies on `n` points, coarsest first: by number of open sets,
/// then by the mask of the specialization preorder.
pub fn topologies(n: usize) -> Result<Vec<FiniteTopology>> {
    let mut tops: Vec<(usize, usize, FiniteTopology)> = preorders(n)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let t = FiniteTopology::from_preorder(p);
            let opens = t.open_sets(DEFAULT_CAP).expect("small").len();
            (opens, i, t)
        })
        .collect();
    tops.sort_by_key(|(opens, i, _)| (*opens, *i));
    Ok(tops.into_iter().map(|(_, _, t)| t).collect())
}

/// Labeled (topology, preorder) pairs on `n` points in canonical order:
/// topologies coarsest first, preorders by mask within each topology.
pub struct Spaces {
    tops: Vec<FiniteTopology>,
    ords: Vec<Preorder>,
    next: usize,
    closed_only: bool,
}

impl Spaces {
    /// Number of pairs before filtering.
    pub fn total(&self) -> usize {
        self.tops.len() * self.ords.len()
    }
}

impl Iterator for Spaces {
    type Item = PreorderedSpace;

    fn next(&mut self) -> Option<PreorderedSpace> {
        while self.next < self.total() {
            let (i, j) = (self.next / self.ords.len(), self.next % self.ords.len());
            self.next += 1;
            let sp = PreorderedSpace::new(self.tops[i].clone(), self.ords[j].clone())
                .expect("same size");
            if !self.closed_only || sp.t2() {
                return Some(sp);
            }
        }
        None
    }
}

/// Enumerates all labeled spaces on `n ≤ 4` points, optionally only those
/// with a closed order graph (T2-preordered).
pub fn enumerate_spaces(n: usize, closed_only: bool) -> Result<Spaces> {
    Ok(Spaces {
        tops: topologies(n)?,
        ords: preorders(n)?,
        next: 0,
        closed_only,
    })
}

/// Names of the implications checked by [`theorem_suite`].
pub mod theorems {
    pub const COMPACT_NORMAL: &str = "compact T2-preordered => normally preordered";
    pub const LOCALLY_CONVEX_T2: &str =
        "locally convex & T2-preordered => convex & normally preordered";
    pub const POINTWISE_CONVEXITY: &str = "T2-preordered & locally convex at x => convex at x";
    pub const LOCALLY_CONVEX_I_SPACE: &str = "locally convex I-space => convex";
    pub const KUNZI: &str = "normal topology & T1-preordered & antisymmetric & C-space => convex";
    pub const CLASS_INDISTINGUISHABLE: &str =
        "T2-preordered & class-indistinguishable at x => weakly convex at x";
    pub const HIERARCHY: &str = "convex at x => weakly convex at x => locally convex at x";
    pub const SEPARATION: &str = "normally preordered => T2-preordered => T1-preordered";
    pub const CLOSED_HULLS: &str = "T2-preordered => d(K) = D(K) and i(K) = I(K) for every K";
    pub const DICHOTOMY: &str = "T2-preordered & antisymmetric => discrete & convex";
    pub const COMPLETELY_REGULAR: &str =
        "completely regularly preordered => convex & T2-preordered";

    pub const ALL: [&str; 11] = [
        COMPACT_NORMAL,
        LOCALLY_CONVEX_T2,
        POINTWISE_CONVEXITY,
        LOCALLY_CONVEX_I_SPACE,
        KUNZI,
        CLASS_INDISTINGUISHABLE,
        HIERARCHY,
        SEPARATION,
        CLOSED_HULLS,
        DICHOTOMY,
        COMPLETELY_REGULAR,
    ];
}

/// Outcome of one implication on one space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub theorem: &'static str,
    /// Whether the hypotheses held (somewhere, for pointwise forms).
    pub fired: bool,
    pub holds: bool,
    /// Violating point, for pointwise forms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<usize>,
    /// Violating set, for set-quantified forms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<PointSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<TheoremCheck>,
}

impl SuiteReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &TheoremCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// How normality is decided inside the suite.
#[derive(Clone, Copy)]
enum NormalityOracle {
    /// Reduced separation test of the props module.
    Reduced,
    /// Search over all open monotone pairs.
    Brute,
}

struct Facts {
    t1: bool,
    t2: bool,
    normal: bool,
    convex: Vec<bool>,
    weak: Vec<bool>,
    local: Vec<bool>,
    i_space: bool,
    c_space: bool,
    antisymmetric: bool,
}

fn facts(sp: &PreorderedSpace, oracle: NormalityOracle) -> Result<Facts> {
    let n = sp.n();
    let at = |kind| -> Result<Vec<bool>> {
        (0..n)
            .map(|x| Ok(props::convexity_at(sp, x, kind)?.verdict))
            .collect()
    };
    let normal = match oracle {
        NormalityOracle::Reduced => props::is_normally_preordered(sp)?.verdict,
        NormalityOracle::Brute => brute_normal(sp)?,
    };
    Ok(Facts {
        t1: sp.t1(),
        t2: sp.t2(),
        normal,
        convex: at(ConvexityKind::Convex)?,
        weak: at(ConvexityKind::Weak)?,
        local: at(ConvexityKind::Local)?,
        i_space: props::is_i_space(sp).verdict,
        c_space: props::is_c_space(sp).verdict,
        antisymmetric: sp.order().is_antisymmetric(),
    })
}

fn brute_normal(sp: &PreorderedSpace) -> Result<bool> {
    if !sp.t1() {
        return Ok(false);
    }
    let decs = sp.closed_monotone_sets(Direction::Dec, DEFAULT_CAP)?;
    let incs = sp.closed_monotone_sets(Direction::Inc, DEFAULT_CAP)?;
    Ok(decs.iter().all(|a| {
        incs.iter()
            .all(|b| !a.is_disjoint(b) || props::brute_separable(sp, a, b))
    }))
}

fn check(theorem: &'static str, fired: bool, holds: bool) -> TheoremCheck {
    TheoremCheck {
        theorem,
        fired,
        holds,
        point: None,
        set: None,
    }
}

/// A pointwise implication: first point where the hypothesis holds and the
/// conclusion fails.
fn pointwise(
    theorem: &'static str,
    n: usize,
    hyp: impl Fn(usize) -> bool,
    concl: impl Fn(usize) -> bool,
) -> TheoremCheck {
    let fired = (0..n).any(&hyp);
    let bad = (0..n).find(|&x| hyp(x) && !concl(x));
    TheoremCheck {
        theorem,
        fired,
        holds: bad.is_none(),
        point: bad,
        set: None,
    }
}

fn evaluate(sp: &PreorderedSpace, oracle: NormalityOracle) -> Result<SuiteReport> {
    use theorems::*;
    let f = facts(sp, oracle)?;
    let n = sp.n();
    let all = |v: &[bool]| v.iter().all(|&b| b);
    let convex = all(&f.convex);
    let local = all(&f.local);
    let mut checks = vec![
        check(COMPACT_NORMAL, f.t2, !f.t2 || f.normal),
        check(
            LOCALLY_CONVEX_T2,
            local && f.t2,
            !(local && f.t2) || (convex && f.normal),
        ),
        pointwise(
            POINTWISE_CONVEXITY,
            n,
            |x| f.t2 && f.local[x],
            |x| f.convex[x],
        ),
        check(
            LOCALLY_CONVEX_I_SPACE,
            local && f.i_space,
            !(local && f.i_space) || convex,
        ),
    ];
    let kunzi_hyp = f.t1 && f.antisymmetric && f.c_space && sp.topology().is_normal(DEFAULT_CAP)?;
    checks.push(check(KUNZI, kunzi_hyp, !kunzi_hyp || convex));
    let indist = (0..n)
        .map(|x| props::class_indistinguishable(sp, x))
        .collect::<Result<Vec<_>>>()?;
    checks.push(pointwise(
        CLASS_INDISTINGUISHABLE,
        n,
        |x| f.t2 && indist[x],
        |x| f.weak[x],
    ));
    checks.push(pointwise(
        HIERARCHY,
        n,
        |x| f.convex[x] || f.weak[x],
        |x| (!f.convex[x] || f.weak[x]) && (!f.weak[x] || f.local[x]),
    ));
    checks.push(check(
        SEPARATION,
        f.normal || f.t2,
        (!f.normal || f.t2) && (!f.t2 || f.t1),
    ));
    let mut prop_2_1 = check(CLOSED_HULLS, f.t2, true);
    if f.t2 && n <= 16 {
        for mask in 0u64..(1 << n) {
            let k = PointSet::from_mask(n, mask);
            let ok = [Direction::Dec, Direction::Inc].into_iter().all(|d| {
                sp.hull(&k, d).expect("same size") == sp.closed_hull(&k, d).expect("same size")
            });
            if !ok {
                prop_2_1.holds = false;
                prop_2_1.set = Some(k);
                break;
            }
        }
    }
    checks.push(prop_2_1);
    let dich = f.t2 && f.antisymmetric;
    checks.push(check(
        DICHOTOMY,
        dich,
        !dich || (sp.topology().is_discrete() && convex),
    ));
    let cr = check_completely_regular(sp)?.verdict;
    checks.push(check(COMPLETELY_REGULAR, cr, !cr || (convex && f.t2)));
    Ok(SuiteReport { checks })
}

/// Evaluates every registered implication on a space.
pub fn theorem_suite(sp: &PreorderedSpace) -> Result<SuiteReport> {
    evaluate(sp, NormalityOracle::Reduced)
}

/// Re-derives a counterexample with brute-force normality: true when the
/// named implication really fails on `sp`.
pub fn revalidate(sp: &PreorderedSpace, theorem: &str) -> Result<bool> {
    let report = evaluate(sp, NormalityOracle::Brute)?;
    Ok(report
        .checks
        .iter()
        .any(|c| c.theorem == theorem && !c.holds))
}

/// Search predicates.
pub const PREDICATES: [&str; 5] = [
    "normal-not-convex",
    "T2-not-locally-convex",
    "I-space-not-C-space",
    "convex-not-I-space",
    "T1-not-normal",
];

/// Evaluates a named search predicate.
pub fn predicate(name: &str, sp: &PreorderedSpace) -> Result<bool> {
    Ok(match name {
        "normal-not-convex" => {
            props::is_normally_preordered(sp)?.verdict && !props::is_convex(sp).verdict
        }
        "T2-not-locally-convex" => sp.t2() && !props::is_locally_convex(sp).verdict,
        "I-space-not-C-space" => props::is_i_space(sp).verdict && !props::is_c_space(sp).verdict,
        "convex-not-I-space" => props::is_convex(sp).verdict && !props::is_i_space(sp).verdict,
        "T1-not-normal" => sp.t1() && !props::is_normally_preordered(sp)?.verdict,
        other => return Err(Error::UnknownPredicate(other.to_string())),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub predicate: String,
    pub n_min: usize,
    pub n_max: usize,
    pub mode: SearchMode,
    pub seed: u64,
    /// Random mode: number of draws. Exhaustive mode: optional cap on the
    /// instances scanned.
    pub samples: Option<usize>,
    /// Stop after this much wall-clock time (makes the outcome depend on
    /// machine speed).
    pub time_budget: Option<Duration>,
}

impl SearchConfig {
    pub fn exhaustive(predicate: &str, n_max: usize) -> Self {
        SearchConfig {
            predicate: predicate.to_string(),
            n_min: 1,
            n_max,
            mode: SearchMode::Exhaustive,
            seed: 0,
            samples: None,
            time_budget: None,
        }
    }

    pub fn random(predicate: &str, n_min: usize, n_max: usize, seed: u64, samples: usize) -> Self {
        SearchConfig {
            predicate: predicate.to_string(),
            n_min,
            n_max,
            mode: SearchMode::Random,
            seed,
            samples: Some(samples),
            time_budget: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchWitness {
    pub n: usize,
    /// Position of the witness in the scanned stream (0-based).
    pub index: u64,
    pub space: SpaceFile,
    pub reports: Vec<PropertyReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Witness,
    Exhausted,
    BudgetReached,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub predicate: String,
    pub mode: SearchMode,
    pub status: SearchStatus,
    pub scanned: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SearchWitness>,
}

/// Scans instances in canonical order (exhaustive: by `n`, then the
/// enumeration order; random: the seeded stream) and returns the first
/// instance satisfying the predicate, or the number scanned.
pub fn counterexample_search(cfg: &SearchConfig) -> Result<SearchReport> {
    if !PREDICATES.contains(&cfg.predicate.as_str()) {
        return Err(Error::UnknownPredicate(cfg.predicate.clone()));
    }
    if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(Error::BadParameters(format!(
            "bad size range {}..={}",
            cfg.n_min, cfg.n_max
        )));
    }
    let start = Instant::now();
    let stream: Box<dyn Iterator<Item = PreorderedSpace>> = match cfg.mode {
        SearchMode::Exhaustive => {
            check_enum_n(cfg.n_max)?;
            let mut chained: Box<dyn Iterator<Item = PreorderedSpace>> =
                Box::new(std::iter::empty());
            for n in cfg.n_min..=cfg.n_max {
                chained = Box::new(chained.chain(enumerate_spaces(n, false)?));
            }
            match cfg.samples {
                Some(cap) => Box::new(chained.take(cap)),
                None => chained,
            }
        }
        SearchMode::Random => Box::new(random_sample(
            cfg.seed,
            cfg.samples.unwrap_or(10_000),
            cfg.n_min,
            cfg.n_max,
        )?),
    };
    let mut scanned = 0u64;
    for sp in stream {
        if let Some(budget) = cfg.time_budget {
            if start.elapsed() > budget {
                return Ok(SearchReport {
                    predicate: cfg.predicate.clone(),
                    mode: cfg.mode,
                    status: SearchStatus::BudgetReached,
                    scanned,
                    witness: None,
                });
            }
        }
        scanned += 1;
        if predicate(&cfg.predicate, &sp)? {
            let reports = props::battery(&sp)?;
            return Ok(SearchReport {
                predicate: cfg.predicate.clone(),
                mode: cfg.mode,
                status: SearchStatus::Witness,
                scanned,
                witness: Some(SearchWitness {
                    n: sp.n(),
                    index: scanned - 1,
                    space: Instance::new(sp).to_file(),
                    reports,
                }),
            });
        }
    }
    Ok(SearchReport {
        predicate: cfg.predicate.clone(),
        mode: cfg.mode,
        status: SearchStatus::Exhausted,
        scanned,
        witness: None,
    })
}

/// The ordered grid `E_n = {k/n : 1 ≤ k ≤ n}` of the unit interval.
///
/// Point `k` stands for `k/n`. The increasing hulls are
/// `i(x) = {y : x ≤ y ≤ 1 − x}` for `x ≤ 1/2`, `{x}` for `1/2 < x < 1` and
/// everything for `x = 1`; the decreasing hulls are
/// `d(x) = {y : y ≤ x or y = 1}` for `x ≤ 1/2` and
/// `{y : y ≤ 1 − x or y = x or y = 1}` for `x > 1/2`.
pub mod interval {
    /// `k/n ∈ i(j/n)`.
    pub fn in_i(n: usize, j: usize, k: usize) -> bool {
        if 2 * j <= n {
            j <= k && k <= n - j
        } else if j < n {
            k == j
        } else {
            true
        }
    }

    /// `k/n ∈ d(j/n)`.
    pub fn in_d(n: usize, j: usize, k: usize) -> bool {
        if 2 * j <= n {
            k <= j || k == n
        } else {
            k <= n - j || k == j || k == n
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalReport {
    pub n: usize,
    #[serde(serialize_with = "ser_q")]
    pub eps: Q,
    /// Points of the ball `|y − 1| < eps`.
    pub ball: usize,
    /// Points of the convex hull `d(B) ∩ i(B)`.
    pub hull: usize,
    #[serde(serialize_with = "ser_q")]
    pub hull_min: Q,
    #[serde(serialize_with = "ser_q")]
    pub hull_max: Q,
    #[serde(serialize_with = "ser_q")]
    pub diameter: Q,
    /// Hull points in `(0, 1/2]`, in `(1/2, 1)`, and whether `1` is in it.
    pub lower_half: usize,
    pub upper_half: usize,
    pub contains_one: bool,
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&exact::to_display(q))
}

/// Convex hull of the `eps`-ball around `1` in `E_n` and its diameter in
/// the ambient interval metric.
pub fn interval_diagnostic(n: usize, eps: Q) -> Result<IntervalReport> {
    if n < 4 {
        return Err(Error::BadParameters(format!(
            "n must be at least 4, got {n}"
        )));
    }
    if eps <= exact::zero() || eps >= Q::new(1, 2) {
        return Err(Error::BadParameters(format!(
            "eps must lie in (0, 1/2), got {}",
            exact::to_display(&eps)
        )));
    }
    let (num, den) = (*eps.numer() as i128, *eps.denom() as i128);
    let ball: Vec<usize> = (1..=n)
        .filter(|&j| ((n - j) as i128) * den < num * n as i128)
        .collect();
    let mut up = vec![false; n + 1];
    let mut down = vec![false; n + 1];
    for &j in &ball {
        for k in 1..=n {
            up[k] |= interval::in_i(n, j, k);
            down[k] |= interval::in_d(n, j, k);
        }
    }
    let hull: Vec<usize> = (1..=n).filter(|&k| up[k] && down[k]).collect();
    let (lo, hi) = (hull[0], hull[hull.len() - 1]);
    let q = |k: usize| Q::new(k as i64, n as i64);
    Ok(IntervalReport {
        n,
        eps,
        ball: ball.len(),
        hull: hull.len(),
        hull_min: q(lo),
        hull_max: q(hi),
        diameter: q(hi - lo),
        lower_half: hull.iter().filter(|&&k| 2 * k <= n).count(),
        upper_half: hull.iter().filter(|&&k| 2 * k > n && k < n).count(),
        contains_one: hi == n,
    })
}
