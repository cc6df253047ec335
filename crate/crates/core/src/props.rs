//! Decision procedures for the separation and convexity properties of a
//! finite topological preordered space.
//!
//! Every checker returns a [`PropertyReport`]. A false verdict always
//! carries a witness, chosen minimal in index order (points) or in the
//! lexicographic order of member lists (sets), so the output is stable.
//!
//! Quantifiers over neighbourhoods reduce to the minimal open set `M(x)`:
//! each local property is antitone in the neighbourhood, so `M(x)` is the
//! hardest case. Quantifiers over open or closed monotone sets either reduce
//! to generators (I-space, C-space) or are enumerated under a cap.

use serde::Serialize;

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::space::{Direction, PreorderedSpace};

/// Default cap on enumerated families of monotone sets.
pub const DEFAULT_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// A point at which the property fails.
    Point { x: usize },
    /// `i(x)` (or `d(x)`) is not closed.
    HullNotClosed {
        x: usize,
        direction: Direction,
        hull: PointSet,
    },
    /// `(x, y)` lies in the closure of the graph but not in the graph.
    PairInClosure { x: usize, y: usize },
    /// Disjoint closed decreasing `a` and closed increasing `b` with no
    /// separating open monotone pair.
    Inseparable { a: PointSet, b: PointSet },
    /// Convexity of the requested kind fails at `x` for the neighbourhood `o`.
    Convexity {
        x: usize,
        kind: ConvexityKind,
        o: PointSet,
    },
    /// The hull of `set` in `direction` is not open (I-space) or not closed
    /// (C-space).
    Hull {
        x: usize,
        direction: Direction,
        set: PointSet,
    },
    /// Two points of the class `[x]` with different minimal open sets.
    Distinguished { x: usize, y: usize, z: usize },
    /// A property that failed because a prerequisite did.
    Prerequisite {
        property: String,
        witness: Box<Witness>,
    },
    /// A pair of grid sites `(t, x)`, e.g. a closed causal curve or a
    /// Seifert leak.
    SitePair {
        from: [usize; 2],
        to: [usize; 2],
        detail: String,
    },
    /// The causal hull of `window` differs at `site` between the grid and
    /// its enlarged embedding.
    HullMismatch {
        window: [usize; 4],
        site: [usize; 2],
    },
    /// Free-form witness from other modules (metric or grid checks).
    Other { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn pass(property: &str) -> Self {
        PropertyReport {
            property: property.to_string(),
            verdict: true,
            witness: None,
        }
    }

    pub fn fail(property: &str, witness: Witness) -> Self {
        PropertyReport {
            property: property.to_string(),
            verdict: false,
            witness: Some(witness),
        }
    }

    fn from_witness(property: &str, w: Option<Witness>) -> Self {
        match w {
            None => Self::pass(property),
            Some(w) => Self::fail(property, w),
        }
    }

    fn prerequisite(property: &str, failed: PropertyReport) -> Self {
        Self::fail(
            property,
            Witness::Prerequisite {
                property: failed.property,
                witness: Box::new(failed.witness.expect("failed report has witness")),
            },
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvexityKind {
    Convex,
    Weak,
    Local,
}

pub(crate) fn t1_failure(sp: &PreorderedSpace) -> Option<Witness> {
    let top = sp.topology();
    for x in 0..sp.n() {
        for (dir, hull) in [
            (Direction::Inc, sp.order().up(x)),
            (Direction::Dec, sp.order().down(x)),
        ] {
            if !top.is_closed(hull) {
                return Some(Witness::HullNotClosed {
                    x,
                    direction: dir,
                    hull: hull.clone(),
                });
            }
        }
    }
    None
}

pub(crate) fn t2_failure(sp: &PreorderedSpace) -> Option<Witness> {
    let g = sp.order().graph();
    let cl = sp.product_closure(g).expect("same size");
    cl.first_missing_from(g)
        .map(|(x, y)| Witness::PairInClosure { x, y })
}

pub fn is_t1_preordered(sp: &PreorderedSpace) -> PropertyReport {
    PropertyReport::from_witness("T1-preordered", t1_failure(sp))
}

pub fn is_t2_preordered(sp: &PreorderedSpace) -> PropertyReport {
    PropertyReport::from_witness("T2-preordered", t2_failure(sp))
}

/// Can closed decreasing `a` and closed increasing `b` be separated by an
/// open decreasing `U ⊇ a` and an open increasing `V ⊇ b` with `U ∩ V = ∅`?
///
/// Enlarging `U` only shrinks the room left for `V`, so it suffices to try
/// the smallest open decreasing superset of `a` and the largest open
/// increasing subset of its complement.
pub fn separable(sp: &PreorderedSpace, a: &PointSet, b: &PointSet) -> bool {
    if a.intersects(b) {
        return false;
    }
    let u = sp.open_monotone_hull(a, Direction::Dec);
    if u.intersects(b) {
        return false;
    }
    let v = sp.open_monotone_kernel(&u.complement(), Direction::Inc);
    b.is_subset(&v)
}

/// Normality with an explicit cap on the enumerated closed monotone sets.
pub fn is_normally_preordered_capped(sp: &PreorderedSpace, cap: usize) -> Result<PropertyReport> {
    const NAME: &str = "normally preordered";
    let t1 = is_t1_preordered(sp);
    if !t1.verdict {
        return Ok(PropertyReport::prerequisite(NAME, t1));
    }
    let decs = sp.closed_monotone_sets(Direction::Dec, cap)?;
    let incs = sp.closed_monotone_sets(Direction::Inc, cap)?;
    for a in &decs {
        for b in &incs {
            if a.is_disjoint(b) && !separable(sp, a, b) {
                return Ok(PropertyReport::fail(
                    NAME,
                    Witness::Inseparable {
                        a: a.clone(),
                        b: b.clone(),
                    },
                ));
            }
        }
    }
    Ok(PropertyReport::pass(NAME))
}

pub fn is_normally_preordered(sp: &PreorderedSpace) -> Result<PropertyReport> {
    is_normally_preordered_capped(sp, DEFAULT_CAP)
}

/// Point-versus-set separation: (a) closed decreasing `A` against `i(x)`,
/// (b) `d(x)` against closed increasing `B`.
pub fn is_regularly_preordered_capped(sp: &PreorderedSpace, cap: usize) -> Result<PropertyReport> {
    const NAME: &str = "regularly preordered";
    let t1 = is_t1_preordered(sp);
    if !t1.verdict {
        return Ok(PropertyReport::prerequisite(NAME, t1));
    }
    let decs = sp.closed_monotone_sets(Direction::Dec, cap)?;
    let incs = sp.closed_monotone_sets(Direction::Inc, cap)?;
    let mut failures: Vec<(PointSet, PointSet)> = Vec::new();
    for x in 0..sp.n() {
        let ix = sp.order().up(x);
        for a in &decs {
            if a.is_disjoint(ix) && !separable(sp, a, ix) {
                failures.push((a.clone(), ix.clone()));
            }
        }
        let dx = sp.order().down(x);
        for b in &incs {
            if dx.is_disjoint(b) && !separable(sp, dx, b) {
                failures.push((dx.clone(), b.clone()));
            }
        }
    }
    let first = failures
        .into_iter()
        .min_by(|p, q| p.0.lex_cmp(&q.0).then_with(|| p.1.lex_cmp(&q.1)));
    Ok(PropertyReport::from_witness(
        NAME,
        first.map(|(a, b)| Witness::Inseparable { a, b }),
    ))
}

pub fn is_regularly_preordered(sp: &PreorderedSpace) -> Result<PropertyReport> {
    is_regularly_preordered_capped(sp, DEFAULT_CAP)
}

/// Smallest open convex superset: open sets and convex sets are both closed
/// under intersection, so alternating the two hulls reaches it.
pub(crate) fn open_convex_hull(sp: &PreorderedSpace, s: &PointSet) -> PointSet {
    let mut cur = s.clone();
    loop {
        let next = sp.topology().open_hull(&sp.convex_hull_of(&cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Convexity of the given kind at `x` relative to an arbitrary open
/// neighbourhood `o` of `x`.
pub fn convexity_at_within(
    sp: &PreorderedSpace,
    x: usize,
    kind: ConvexityKind,
    o: &PointSet,
) -> Result<bool> {
    sp.check_point(x)?;
    sp.check_set(o)?;
    if !o.contains(x) || !sp.topology().is_open(o) {
        return Err(Error::BadArguments(format!(
            "{o:?} is not an open neighbourhood of {x}"
        )));
    }
    let px = PointSet::singleton(sp.n(), x);
    Ok(match kind {
        // The smallest open decreasing and increasing neighbourhoods are the
        // best candidates for U and V.
        ConvexityKind::Convex => sp
            .open_monotone_hull(&px, Direction::Dec)
            .intersection(&sp.open_monotone_hull(&px, Direction::Inc))
            .is_subset(o),
        ConvexityKind::Weak => open_convex_hull(sp, &px).is_subset(o),
        // A neighbourhood of x contains M(x); its convex hull is the best N.
        ConvexityKind::Local => sp.convex_hull_of(sp.topology().minopen(x)).is_subset(o),
    })
}

pub fn convexity_at(sp: &PreorderedSpace, x: usize, kind: ConvexityKind) -> Result<PropertyReport> {
    sp.check_point(x)?;
    let o = sp.topology().minopen(x);
    let name = match kind {
        ConvexityKind::Convex => "convex at point",
        ConvexityKind::Weak => "weakly convex at point",
        ConvexityKind::Local => "locally convex at point",
    };
    Ok(if convexity_at_within(sp, x, kind, o)? {
        PropertyReport::pass(name)
    } else {
        PropertyReport::fail(
            name,
            Witness::Convexity {
                x,
                kind,
                o: o.clone(),
            },
        )
    })
}

fn convex_everywhere(sp: &PreorderedSpace, kind: ConvexityKind, name: &str) -> PropertyReport {
    for x in 0..sp.n() {
        let r = convexity_at(sp, x, kind).expect("in range");
        if !r.verdict {
            return PropertyReport::fail(name, r.witness.unwrap());
        }
    }
    PropertyReport::pass(name)
}

pub fn is_convex(sp: &PreorderedSpace) -> PropertyReport {
    convex_everywhere(sp, ConvexityKind::Convex, "convex")
}

pub fn is_weakly_convex(sp: &PreorderedSpace) -> PropertyReport {
    convex_everywhere(sp, ConvexityKind::Weak, "weakly convex")
}

pub fn is_locally_convex(sp: &PreorderedSpace) -> PropertyReport {
    convex_everywhere(sp, ConvexityKind::Local, "locally convex")
}

/// Hulls of open sets are open. Hulls distribute over unions and every open
/// set is a union of minimal opens, so checking `i(M(x))`, `d(M(x))` suffices.
pub fn is_i_space(sp: &PreorderedSpace) -> PropertyReport {
    let top = sp.topology();
    for x in 0..sp.n() {
        for dir in [Direction::Inc, Direction::Dec] {
            let h = sp.hull_of(top.minopen(x), dir);
            if !top.is_open(&h) {
                return PropertyReport::fail(
                    "I-space",
                    Witness::Hull {
                        x,
                        direction: dir,
                        set: top.minopen(x).clone(),
                    },
                );
            }
        }
    }
    PropertyReport::pass("I-space")
}

/// Hulls of closed sets are closed; point closures generate the closed sets.
pub fn is_c_space(sp: &PreorderedSpace) -> PropertyReport {
    let top = sp.topology();
    for x in 0..sp.n() {
        let cx = top.closure(&PointSet::singleton(sp.n(), x));
        for dir in [Direction::Inc, Direction::Dec] {
            if !top.is_closed(&sp.hull_of(&cx, dir)) {
                return PropertyReport::fail(
                    "C-space",
                    Witness::Hull {
                        x,
                        direction: dir,
                        set: cx,
                    },
                );
            }
        }
    }
    PropertyReport::pass("C-space")
}

/// Convex hulls of compact sets are compact. Every subset of a finite space
/// is compact, so this always holds here.
pub fn is_k_preserving(_sp: &PreorderedSpace) -> PropertyReport {
    PropertyReport::pass("k-preserving")
}

/// Whether the topology fails to distinguish the points of `[x]`.
pub fn class_indistinguishable(sp: &PreorderedSpace, x: usize) -> Result<bool> {
    Ok(class_distinguished_by(sp, x)?.is_none())
}

pub(crate) fn class_distinguished_by(
    sp: &PreorderedSpace,
    x: usize,
) -> Result<Option<(usize, usize)>> {
    sp.check_point(x)?;
    let class = sp.order().class(x);
    let top = sp.topology();
    for y in &class {
        for z in &class {
            if y < z && top.minopen(y) != top.minopen(z) {
                return Ok(Some((y, z)));
            }
        }
    }
    Ok(None)
}

pub fn is_antisymmetric(sp: &PreorderedSpace) -> PropertyReport {
    match (0..sp.n()).find_map(|x| sp.order().class(x).iter().find(|&y| y != x).map(|y| (x, y))) {
        None => PropertyReport::pass("antisymmetric"),
        Some((x, y)) => PropertyReport::fail(
            "antisymmetric",
            Witness::Other {
                detail: format!("{x} ≤ {y} ≤ {x}"),
            },
        ),
    }
}

/// The full battery, in a fixed order.
pub fn battery(sp: &PreorderedSpace) -> Result<Vec<PropertyReport>> {
    Ok(vec![
        is_t1_preordered(sp),
        is_t2_preordered(sp),
        is_normally_preordered(sp)?,
        is_regularly_preordered(sp)?,
        is_convex(sp),
        is_weakly_convex(sp),
        is_locally_convex(sp),
        is_i_space(sp),
        is_c_space(sp),
        is_k_preserving(sp),
        is_antisymmetric(sp),
    ])
}

/// Re-checks that a witness from a false verdict really is a violation.
pub fn witness_is_genuine(sp: &PreorderedSpace, property: &str, w: &Witness) -> bool {
    let top = sp.topology();
    match w {
        Witness::HullNotClosed { x, direction, hull } => {
            let expect = match direction {
                Direction::Inc => sp.order().up(*x),
                Direction::Dec => sp.order().down(*x),
            };
            hull == expect && !top.is_closed(hull)
        }
        Witness::PairInClosure { x, y } => {
            let g = sp.order().graph();
            !g.contains(*x, *y) && sp.product_closure(g).unwrap().contains(*x, *y)
        }
        Witness::Inseparable { a, b } => {
            top.is_closed(a)
                && sp.is_monotone(a, Direction::Dec)
                && top.is_closed(b)
                && sp.is_monotone(b, Direction::Inc)
                && a.is_disjoint(b)
                && !brute_separable(sp, a, b)
        }
        Witness::Convexity { x, kind, o } => {
            o == top.minopen(*x) && !convexity_at_within(sp, *x, *kind, o).unwrap()
        }
        Witness::Hull { x, direction, set } => {
            let h = sp.hull_of(set, *direction);
            match property {
                "I-space" => set == top.minopen(*x) && !top.is_open(&h),
                "C-space" => !top.is_closed(&h),
                _ => false,
            }
        }
        Witness::Distinguished { x, y, z } => {
            let c = sp.order().class(*x);
            c.contains(*y) && c.contains(*z) && top.minopen(*y) != top.minopen(*z)
        }
        Witness::Prerequisite { property, witness } => witness_is_genuine(sp, property, witness),
        Witness::Point { .. } | Witness::Other { .. } => true,
        // Grid witnesses never describe a finite-space property.
        Witness::SitePair { .. } | Witness::HullMismatch { .. } => false,
    }
}

/// Exhaustive search over all open decreasing `U` and open increasing `V`.
pub(crate) fn brute_separable(sp: &PreorderedSpace, a: &PointSet, b: &PointSet) -> bool {
    let us = sp.open_monotone_sets(Direction::Dec, DEFAULT_CAP).unwrap();
    let vs = sp.open_monotone_sets(Direction::Inc, DEFAULT_CAP).unwrap();
    us.iter()
        .filter(|u| a.is_subset(u))
        .any(|u| vs.iter().any(|v| b.is_subset(v) && u.is_disjoint(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Preorder;
    use crate::space::fixtures::*;
    use crate::topology::FiniteTopology;
    use proptest::prelude::*;

    #[test]
    fn t1_examples() {
        assert!(is_t1_preordered(&ch3()).verdict);
        assert!(is_t1_preordered(&p2()).verdict);
        let r = is_t1_preordered(&s2());
        assert!(!r.verdict);
        assert_eq!(
            r.witness,
            Some(Witness::HullNotClosed {
                x: 1,
                direction: Direction::Inc,
                hull: PointSet::singleton(2, 1)
            })
        );
    }

    #[test]
    fn t2_examples() {
        assert!(is_t2_preordered(&ch3()).verdict);
        assert!(is_t2_preordered(&p2()).verdict);
        let r = is_t2_preordered(&s2());
        assert_eq!(r.witness, Some(Witness::PairInClosure { x: 0, y: 1 }));
    }

    #[test]
    fn normality_examples() {
        assert!(is_normally_preordered(&ch3()).unwrap().verdict);
        assert!(is_normally_preordered(&p2()).unwrap().verdict);
        let r = is_normally_preordered(&s2()).unwrap();
        assert!(!r.verdict);
        assert!(matches!(r.witness, Some(Witness::Prerequisite { .. })));
    }

    #[test]
    fn normality_cap_is_enforced() {
        let err = is_normally_preordered_capped(&ch3(), 2).unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge { .. }));
    }

    #[test]
    fn regularity_examples() {
        assert!(is_regularly_preordered(&ch3()).unwrap().verdict);
        assert!(is_regularly_preordered(&p2()).unwrap().verdict);
    }

    #[test]
    fn convexity_at_examples() {
        for x in 0..3 {
            for k in [
                ConvexityKind::Convex,
                ConvexityKind::Weak,
                ConvexityKind::Local,
            ] {
                assert!(convexity_at(&ch3(), x, k).unwrap().verdict);
            }
        }
        assert!(
            !convexity_at(&p2(), 1, ConvexityKind::Local)
                .unwrap()
                .verdict
        );
        for k in [
            ConvexityKind::Convex,
            ConvexityKind::Weak,
            ConvexityKind::Local,
        ] {
            assert!(convexity_at(&p2(), 0, k).unwrap().verdict);
        }
        assert!(matches!(
            convexity_at(&p2(), 2, ConvexityKind::Convex),
            Err(Error::PointOutOfRange { .. })
        ));
    }

    #[test]
    fn global_convexity_examples() {
        assert!(is_convex(&ch3()).verdict);
        assert!(is_weakly_convex(&ch3()).verdict);
        assert!(is_locally_convex(&ch3()).verdict);
        for r in [
            is_convex(&p2()),
            is_weakly_convex(&p2()),
            is_locally_convex(&p2()),
        ] {
            assert!(!r.verdict);
            assert!(matches!(r.witness, Some(Witness::Convexity { x: 1, .. })));
        }
    }

    #[test]
    fn i_and_c_space_examples() {
        assert!(is_i_space(&ch3()).verdict);
        assert!(is_c_space(&ch3()).verdict);
        assert!(is_i_space(&p2()).verdict);
        assert!(is_k_preserving(&ch3()).verdict);
        assert!(is_k_preserving(&p2()).verdict);
    }

    #[test]
    fn class_examples() {
        for x in 0..3 {
            assert!(class_indistinguishable(&ch3(), x).unwrap());
        }
        assert!(!class_indistinguishable(&p2(), 1).unwrap());
    }

    fn arb_space(max_n: usize) -> impl Strategy<Value = PreorderedSpace> {
        (1..=max_n).prop_flat_map(|n| {
            (
                proptest::collection::vec((0..n, 0..n), 0..(2 * n)),
                proptest::collection::vec((0..n, 0..n), 0..(2 * n)),
            )
                .prop_map(move |(t, o)| {
                    let top = FiniteTopology::from_preorder(&Preorder::from_pairs(n, t).unwrap());
                    PreorderedSpace::new(top, Preorder::from_pairs(n, o).unwrap()).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn separable_matches_brute_force(sp in arb_space(5)) {
            let decs = sp.closed_monotone_sets(Direction::Dec, DEFAULT_CAP).unwrap();
            let incs = sp.closed_monotone_sets(Direction::Inc, DEFAULT_CAP).unwrap();
            for a in &decs {
                for b in &incs {
                    if a.is_disjoint(b) {
                        prop_assert_eq!(separable(&sp, a, b), brute_separable(&sp, a, b));
                    }
                }
            }
        }

        #[test]
        fn hierarchy_and_witnesses(sp in arb_space(5)) {
            let reports = battery(&sp).unwrap();
            for r in &reports {
                prop_assert_eq!(r.verdict, r.witness.is_none());
                if let Some(w) = &r.witness {
                    prop_assert!(witness_is_genuine(&sp, &r.property, w), "{:?}", r);
                }
            }
            let v = |name: &str| reports.iter().find(|r| r.property == name).unwrap().verdict;
            prop_assert!(!v("convex") || v("weakly convex"));
            prop_assert!(!v("weakly convex") || v("locally convex"));
            prop_assert!(!v("normally preordered") || v("T2-preordered"));
            prop_assert!(!v("T2-preordered") || v("T1-preordered"));
            for x in 0..sp.n() {
                let c = convexity_at(&sp, x, ConvexityKind::Convex).unwrap().verdict;
                let w = convexity_at(&sp, x, ConvexityKind::Weak).unwrap().verdict;
                let l = convexity_at(&sp, x, ConvexityKind::Local).unwrap().verdict;
                prop_assert!(!c || w);
                prop_assert!(!w || l);
            }
        }

        /// Any open O ⊇ M(x) gives a verdict at least as permissive, so M(x)
        /// decides the neighbourhood quantifier.
        #[test]
        fn minimal_open_decides_neighbourhood_quantifier(sp in arb_space(5), extra in 0u64..32) {
            let n = sp.n();
            for x in 0..n {
                let o = sp.topology().open_hull(&PointSet::from_mask(n, extra).union(sp.topology().minopen(x)));
                for k in [ConvexityKind::Convex, ConvexityKind::Weak, ConvexityKind::Local] {
                    let at_min = convexity_at(&sp, x, k).unwrap().verdict;
                    if at_min {
                        prop_assert!(convexity_at_within(&sp, x, k, &o).unwrap());
                    }
                }
            }
        }

        #[test]
        fn literal_normality_procedure_agrees(sp in arb_space(4)) {
            // Enumerate every open decreasing U ⊇ A with U ∩ B = ∅ and test
            // whether the largest open increasing subset of E ∖ U holds B.
            let r = is_normally_preordered(&sp).unwrap();
            let t1 = is_t1_preordered(&sp).verdict;
            let us = sp.open_monotone_sets(Direction::Dec, DEFAULT_CAP).unwrap();
            let decs = sp.closed_monotone_sets(Direction::Dec, DEFAULT_CAP).unwrap();
            let incs = sp.closed_monotone_sets(Direction::Inc, DEFAULT_CAP).unwrap();
            let literal = t1 && decs.iter().all(|a| incs.iter().filter(|b| a.is_disjoint(b)).all(|b| {
                us.iter().filter(|u| a.is_subset(u) && u.is_disjoint(b)).any(|u| {
                    b.is_subset(&sp.open_monotone_kernel(&u.complement(), Direction::Inc))
                })
            }));
            prop_assert_eq!(r.verdict, literal);
        }
    }
}
