//! Constructive separation by continuous isotone functions and the
//! complete-regularity decision.
//!
//! Values are exact dyadic rationals in `[0, 1]`. Continuity is checked
//! through thresholds: for every `t`, `{f > t}` must be open increasing and
//! `{f < t}` open decreasing.

use serde::{Serialize, Serializer};

use crate::bitset::PointSet;
use crate::closure::{isotone_functions_to_chain, DEFAULT_FUNCTION_CAP};
use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::props::{self, ConvexityKind};
use crate::space::{Direction, PreorderedSpace};

/// A function `E → [0, 1]` with exact values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotoneFunction {
    values: Vec<Q>,
}

impl Serialize for IsotoneFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.values.iter().map(exact::to_fraction).collect();
        v.serialize(s)
    }
}

impl IsotoneFunction {
    /// Wraps a value table, rejecting values outside `[0, 1]`.
    pub fn new(values: Vec<Q>) -> Result<Self> {
        if let Some(v) = values
            .iter()
            .find(|v| **v < exact::zero() || **v > exact::one())
        {
            return Err(Error::BadArguments(format!(
                "value {} outside [0, 1]",
                exact::to_display(v)
            )));
        }
        Ok(IsotoneFunction { values })
    }

    pub fn constant(n: usize, v: Q) -> Self {
        IsotoneFunction { values: vec![v; n] }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn value(&self, x: usize) -> Q {
        self.values[x]
    }

    /// `{x : f(x) > t}`.
    pub fn above(&self, t: Q) -> PointSet {
        PointSet::from_indices(self.n(), (0..self.n()).filter(|&x| self.values[x] > t))
    }

    /// `{x : f(x) < t}`.
    pub fn below(&self, t: Q) -> PointSet {
        PointSet::from_indices(self.n(), (0..self.n()).filter(|&x| self.values[x] < t))
    }

    /// `{y : f(y) = f(x)}`.
    pub fn level_of(&self, x: usize) -> PointSet {
        let v = self.values[x];
        PointSet::from_indices(self.n(), (0..self.n()).filter(|&y| self.values[y] == v))
    }

    /// Space-separated short forms, e.g. `0 1/2 1`.
    pub fn display(&self) -> String {
        self.values
            .iter()
            .map(exact::to_display)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `x ≤ y ⇒ f(x) ≤ f(y)`.
pub fn check_isotone(sp: &PreorderedSpace, f: &IsotoneFunction) -> bool {
    f.n() == sp.n()
        && sp
            .order()
            .graph()
            .pairs()
            .all(|(x, y)| f.value(x) <= f.value(y))
}

/// Every `{f > t}` is open increasing and every `{f < t}` open decreasing.
/// Both families only change at the values of `f`, so those thresholds
/// suffice.
pub fn check_continuous(sp: &PreorderedSpace, f: &IsotoneFunction) -> bool {
    if f.n() != sp.n() {
        return false;
    }
    let top = sp.topology();
    f.values().iter().all(|&t| {
        let up = f.above(t);
        let down = f.below(t);
        top.is_open(&up)
            && sp.is_monotone(&up, Direction::Inc)
            && top.is_open(&down)
            && sp.is_monotone(&down, Direction::Dec)
    })
}

/// Largest open decreasing `U` with `D(U) ⊆ w`. Admissible sets are closed
/// under union (`D` distributes over unions), and every admissible set is
/// a union of admissible generators `open-dec-hull({x})`.
fn largest_admissible(sp: &PreorderedSpace, w: &PointSet) -> PointSet {
    let n = sp.n();
    let mut u = PointSet::empty(n);
    for x in 0..n {
        let g = sp.open_monotone_hull(&PointSet::singleton(n, x), Direction::Dec);
        if sp.closed_hull_of(&g, Direction::Dec).is_subset(w) {
            u.union_with(&g);
        }
    }
    u
}

fn check_separation_args(sp: &PreorderedSpace, a: &PointSet, b: &PointSet) -> Result<()> {
    sp.check_set(a)?;
    sp.check_set(b)?;
    let top = sp.topology();
    if !(top.is_closed(a) && sp.is_monotone(a, Direction::Dec)) {
        return Err(Error::BadArguments(format!(
            "A = {a:?} is not closed decreasing"
        )));
    }
    if !(top.is_closed(b) && sp.is_monotone(b, Direction::Inc)) {
        return Err(Error::BadArguments(format!(
            "B = {b:?} is not closed increasing"
        )));
    }
    if a.intersects(b) {
        return Err(Error::BadArguments(format!(
            "A and B meet in {:?}",
            a.intersection(b)
        )));
    }
    Ok(())
}

/// Separates closed decreasing `a` from closed increasing `b` by a
/// continuous isotone `f` with `f|a = 0`, `f|b = 1`.
///
/// Builds the dyadic family `U_q` of open decreasing sets with
/// `U_1 = E ∖ b`, `a ⊆ U_0` and `D(U_q) ⊆ U_{q'}` for `q < q'`, always
/// taking the largest admissible set, then sets `f(x) = min{q : x ∈ U_q}`
/// (1 if `x` lies in no `U_q` with `q < 1`). Refinement stops once a level
/// adds no new set, or after `n` levels.
pub fn separate_monotone(
    sp: &PreorderedSpace,
    a: &PointSet,
    b: &PointSet,
) -> Result<IsotoneFunction> {
    check_separation_args(sp, a, b)?;
    if !props::is_normally_preordered(sp)?.verdict {
        return Err(Error::NotNormal);
    }
    separate_unchecked(sp, a, b)
}

fn separate_unchecked(sp: &PreorderedSpace, a: &PointSet, b: &PointSet) -> Result<IsotoneFunction> {
    let n = sp.n();
    let u1 = b.complement();
    let u0 = largest_admissible(sp, &u1);
    if !a.is_subset(&u0) {
        return Err(Error::NotNormal);
    }
    // family[k] = U_{k / 2^depth}, k = 0..=2^depth
    let mut family = vec![u0, u1];
    let mut depth = 0u32;
    while depth < n.min(16) as u32 {
        let mut next = Vec::with_capacity(family.len() * 2 - 1);
        let mut fresh = false;
        for pair in family.windows(2) {
            let (lo, hi) = (&pair[0], &pair[1]);
            let mid = largest_admissible(sp, hi);
            if !sp.closed_hull_of(lo, Direction::Dec).is_subset(&mid) {
                return Err(Error::NotNormal);
            }
            fresh |= mid != *lo && mid != *hi;
            next.push(lo.clone());
            next.push(mid);
        }
        next.push(family.last().expect("non-empty").clone());
        if !fresh {
            break;
        }
        family = next;
        depth += 1;
    }
    let scale = 1i64 << depth;
    let last = family.len() - 1;
    let values = (0..n)
        .map(|x| {
            family[..last]
                .iter()
                .position(|u| u.contains(x))
                .map_or(exact::one(), |k| Q::new(k as i64, scale))
        })
        .collect();
    let f = IsotoneFunction { values };
    debug_assert!(check_isotone(sp, &f) && check_continuous(sp, &f));
    Ok(f)
}

/// Whether `f` separates `a` (value 0) from `b` (value 1) and is a
/// continuous isotone function.
pub fn validates_separation(
    sp: &PreorderedSpace,
    f: &IsotoneFunction,
    a: &PointSet,
    b: &PointSet,
) -> bool {
    check_isotone(sp, f)
        && check_continuous(sp, f)
        && a.iter().all(|x| f.value(x) == exact::zero())
        && b.iter().all(|x| f.value(x) == exact::one())
}

/// A family of continuous isotone functions recovering both the topology
/// (through level sets) and the preorder. For each point `x` it separates
/// `x` from the complement of its smallest open increasing and decreasing
/// neighbourhoods, and for each `x ≰ y` it separates `D({y})` from `I({x})`.
/// Constant functions and duplicates are removed; the result is sorted.
pub fn separating_family(sp: &PreorderedSpace) -> Result<Vec<IsotoneFunction>> {
    if let Some(w) = props::is_convex(sp).witness {
        let point = match w {
            props::Witness::Convexity { x, .. } => x,
            _ => 0,
        };
        return Err(Error::NotConvex { point });
    }
    if !props::is_normally_preordered(sp)?.verdict {
        return Err(Error::NotNormal);
    }
    let n = sp.n();
    let mut fam = Vec::new();
    for x in 0..n {
        let px = PointSet::singleton(n, x);
        let v = sp.open_monotone_hull(&px, Direction::Inc);
        let ix = sp.closed_hull_of(&px, Direction::Inc);
        fam.push(separate_pair(sp, &v.complement(), &ix)?);
        let u = sp.open_monotone_hull(&px, Direction::Dec);
        let dx = sp.closed_hull_of(&px, Direction::Dec);
        fam.push(separate_pair(sp, &dx, &u.complement())?);
    }
    for x in 0..n {
        for y in 0..n {
            if !sp.order().le(x, y) {
                let dy = sp.closed_hull_of(&PointSet::singleton(n, y), Direction::Dec);
                let ix = sp.closed_hull_of(&PointSet::singleton(n, x), Direction::Inc);
                fam.push(separate_pair(sp, &dy, &ix)?);
            }
        }
    }
    // Constants neither cut level sets nor separate pairs.
    fam.retain(|f| f.values().iter().any(|v| *v != f.value(0)));
    fam.sort();
    fam.dedup();
    Ok(fam)
}

fn separate_pair(sp: &PreorderedSpace, a: &PointSet, b: &PointSet) -> Result<IsotoneFunction> {
    check_separation_args(sp, a, b).map_err(|_| Error::NotNormal)?;
    separate_unchecked(sp, a, b)
}

/// Which defining condition of complete regularity fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum RegularityFailure {
    /// (i): the level sets of continuous isotone functions through `x` only
    /// cut out `recovered`, which is larger than `M(x)`.
    Topology {
        x: usize,
        minopen: PointSet,
        recovered: PointSet,
    },
    /// (ii): `x ≰ y` but every continuous isotone `f` has `f(x) ≤ f(y)`.
    Order { x: usize, y: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompleteRegularityReport {
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<IsotoneFunction>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<RegularityFailure>,
    /// Agreement with direct enumeration over chain-valued functions, for
    /// spaces of at most four points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumeration_agrees: Option<bool>,
}

/// Checks conditions (i) and (ii) for a family of continuous isotone
/// functions; returns the first failure.
pub fn family_failure(sp: &PreorderedSpace, fam: &[IsotoneFunction]) -> Option<RegularityFailure> {
    let n = sp.n();
    for x in 0..n {
        let recovered = fam
            .iter()
            .fold(PointSet::full(n), |acc, f| acc.intersection(&f.level_of(x)));
        let m = sp.topology().minopen(x);
        if &recovered != m {
            return Some(RegularityFailure::Topology {
                x,
                minopen: m.clone(),
                recovered,
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if !sp.order().le(x, y) && !fam.iter().any(|f| f.value(x) > f.value(y)) {
                return Some(RegularityFailure::Order { x, y });
            }
        }
    }
    None
}

/// Decides conditions (i) and (ii) directly from every continuous isotone
/// function into the chain `{0, .., levels-1}`.
pub fn completely_regular_by_enumeration(sp: &PreorderedSpace, levels: usize) -> Result<bool> {
    let fs = isotone_functions_to_chain(sp, sp.order().graph(), levels, DEFAULT_FUNCTION_CAP)?;
    let fam: Vec<IsotoneFunction> = fs
        .into_iter()
        .map(|v| IsotoneFunction {
            values: v.into_iter().map(|k| Q::from_integer(k as i64)).collect(),
        })
        .collect();
    // Level sets do not depend on the scale, so unnormalized values suffice.
    Ok(family_failure(sp, &fam).is_none())
}

/// Completely regularly preordered ⇔ convex and normally preordered.
/// On success the report carries a separating family that re-validates.
/// Failures name the violated condition: a pair in the closure of the
/// graph cannot be separated by any continuous isotone function, and at a
/// point where convexity fails every such function is constant on a set
/// strictly larger than `M(x)`.
pub fn check_completely_regular(sp: &PreorderedSpace) -> Result<CompleteRegularityReport> {
    let n = sp.n();
    let enumeration = if n <= 4 {
        Some(completely_regular_by_enumeration(sp, n + 1)?)
    } else {
        None
    };
    let mut report =
        if let Some(props::Witness::PairInClosure { x, y }) = props::is_t2_preordered(sp).witness {
            CompleteRegularityReport {
                verdict: false,
                family: None,
                failure: Some(RegularityFailure::Order { x, y }),
                enumeration_agrees: None,
            }
        } else if let Some(x) = (0..n).find(|&x| {
            !props::convexity_at(sp, x, ConvexityKind::Convex)
                .expect("in range")
                .verdict
        }) {
            // Continuous isotone functions are constant on M(y) for y ∈ M(x)
            // and on order classes; the smallest set closed under both is what
            // level sets can recover at best.
            let recovered = recoverable_neighbourhood(sp, x);
            CompleteRegularityReport {
                verdict: false,
                family: None,
                failure: Some(RegularityFailure::Topology {
                    x,
                    minopen: sp.topology().minopen(x).clone(),
                    recovered,
                }),
                enumeration_agrees: None,
            }
        } else {
            let fam = separating_family(sp)?;
            let failure = family_failure(sp, &fam);
            CompleteRegularityReport {
                verdict: failure.is_none(),
                family: Some(fam),
                failure,
                enumeration_agrees: None,
            }
        };
    report.enumeration_agrees = enumeration.map(|e| e == report.verdict);
    Ok(report)
}

/// Points that every continuous isotone function maps to `f(x)` because of
/// continuity and isotonicity alone, joined with `M(x)`.
fn recoverable_neighbourhood(sp: &PreorderedSpace, x: usize) -> PointSet {
    let n = sp.n();
    let mut cur = sp.topology().minopen(x).union(&sp.order().class(x));
    loop {
        let mut next = cur.clone();
        for y in &cur {
            next.union_with(sp.topology().minopen(y));
            next.union_with(&sp.order().class(y));
            // y ∈ M(z) forces f(z) = f(y)
            for z in 0..n {
                if sp.topology().minopen(z).contains(y) {
                    next.insert(z);
                }
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}
