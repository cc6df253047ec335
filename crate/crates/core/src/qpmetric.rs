//! Quasi-pseudo-metrics on finite preordered spaces.
//!
//! A quasi-pseudo-metric `p` has `p(x, x) = 0` and satisfies the triangle
//! inequality, but need not be symmetric. Its balls `{y : p(x, y) < ε}`
//! generate a topology; on a finite set the smallest ball around `x` is
//! `{y : p(x, y) = 0}`, which is therefore the minimal open set of `x`.
//! The conjugate `p⁻¹(x, y) = p(y, x)` is never stored.

use serde::Serialize;

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::props::{self, PropertyReport, Witness};
use crate::relation::Relation;
use crate::separation::check_completely_regular;
use crate::space::{Direction, PreorderedSpace};
use crate::topology::FiniteTopology;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiPseudoMetric {
    n: usize,
    table: Vec<Q>,
}

impl Serialize for QuasiPseudoMetric {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_fractions().serialize(s)
    }
}

impl QuasiPseudoMetric {
    /// Validates non-negativity, zero self-distance and the triangle
    /// inequality.
    pub fn new(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: r.len(),
            });
        }
        let p = QuasiPseudoMetric {
            n,
            table: rows.into_iter().flatten().collect(),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for x in 0..n {
            if self.get(x, x) != exact::zero() {
                return Err(Error::NotAQpm(format!("p({x}, {x}) ≠ 0")));
            }
            for y in 0..n {
                if self.get(x, y) < exact::zero() {
                    return Err(Error::NotAQpm(format!("p({x}, {y}) < 0")));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.get(x, z) > self.get(x, y) + self.get(y, z) {
                        return Err(Error::NotAQpm(format!(
                            "p({x}, {z}) > p({x}, {y}) + p({y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Q {
        self.table[x * self.n + y]
    }

    /// `(p ∨ p⁻¹)(x, y)`.
    pub fn symmetrized(&self, x: usize, y: usize) -> Q {
        self.get(x, y).max(self.get(y, x))
    }

    /// `{(x, y) : p(x, y) = 0}`.
    pub fn zero_relation(&self) -> Relation {
        let n = self.n;
        Relation::from_pairs(
            n,
            (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|&(x, y)| self.get(x, y) == exact::zero()),
        )
        .expect("in range")
    }

    /// Rows of `num/den` strings.
    pub fn to_fractions(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|x| {
                (0..self.n)
                    .map(|y| exact::to_fraction(&self.get(x, y)))
                    .collect()
            })
            .collect()
    }

    pub fn from_fractions(rows: &[Vec<String>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| exact::parse(s))
                    .collect::<Result<Vec<Q>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }
}

/// Which of the two ball topologies of a quasi-pseudo-metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Balls of `p`; compared with the open increasing sets.
    Upper,
    /// Balls of `p⁻¹`; compared with the open decreasing sets.
    Lower,
}

/// The topology whose open sets are the open increasing (upper) or open
/// decreasing (lower) sets of the space. Both families are closed under
/// unions and intersections, so the result is a valid finite topology.
pub fn monotone_topology(sp: &PreorderedSpace, side: Side) -> FiniteTopology {
    let dir = match side {
        Side::Upper => Direction::Inc,
        Side::Lower => Direction::Dec,
    };
    let n = sp.n();
    FiniteTopology::new(
        (0..n)
            .map(|x| sp.open_monotone_hull(&PointSet::singleton(n, x), dir))
            .collect(),
    )
    .expect("open monotone hulls form a topology")
}

fn ball_topology_by(n: usize, zero: impl Fn(usize, usize) -> bool) -> FiniteTopology {
    FiniteTopology::new(
        (0..n)
            .map(|x| PointSet::from_indices(n, (0..n).filter(|&y| zero(x, y))))
            .collect(),
    )
    .expect("zero balls of a quasi-pseudo-metric are nested by the triangle inequality")
}

/// Topology of the balls of `p` (upper) or `p⁻¹` (lower).
pub fn ball_topology(p: &QuasiPseudoMetric, side: Side) -> FiniteTopology {
    let z = exact::zero();
    match side {
        Side::Upper => ball_topology_by(p.n(), |x, y| p.get(x, y) == z),
        Side::Lower => ball_topology_by(p.n(), |x, y| p.get(y, x) == z),
    }
}

/// Topology of the pseudo-metric `p ∨ p⁻¹`.
pub fn symmetrized_topology(p: &QuasiPseudoMetric) -> FiniteTopology {
    let z = exact::zero();
    ball_topology_by(p.n(), |x, y| p.symmetrized(x, y) == z)
}

/// Topology of the pseudo-metric `p + p⁻¹`.
pub fn sum_topology(p: &QuasiPseudoMetric) -> FiniteTopology {
    let z = exact::zero();
    ball_topology_by(p.n(), |x, y| p.get(x, y) + p.get(y, x) == z)
}

/// `p(x, y) = max_f max(0, f(x) − f(y))` over the separating family of a
/// completely regularly preordered space.
pub fn synthesize_qpm(sp: &PreorderedSpace) -> Result<QuasiPseudoMetric> {
    let report = check_completely_regular(sp)?;
    let fam = match (report.verdict, report.family) {
        (true, Some(fam)) => fam,
        _ => return Err(Error::NotCompletelyRegular),
    };
    let n = sp.n();
    let mut table = vec![exact::zero(); n * n];
    for x in 0..n {
        for y in 0..n {
            for f in &fam {
                let d = f.value(x) - f.value(y);
                if d > table[x * n + y] {
                    table[x * n + y] = d;
                }
            }
        }
    }
    let p = QuasiPseudoMetric { n, table };
    debug_assert!(p.validate().is_ok());
    Ok(p)
}

/// `p(x, y) = 0` if `x ≤ y`, else 1. Admissible for discrete topologies.
pub fn qpm_from_order_discrete(sp: &PreorderedSpace) -> Result<QuasiPseudoMetric> {
    if !sp.topology().is_discrete() {
        return Err(Error::NotDiscrete);
    }
    let n = sp.n();
    let table = (0..n * n)
        .map(|i| {
            if sp.order().le(i / n, i % n) {
                exact::zero()
            } else {
                exact::one()
            }
        })
        .collect();
    Ok(QuasiPseudoMetric { n, table })
}

fn check_metric(sp: &PreorderedSpace, p: &QuasiPseudoMetric) -> Result<()> {
    if p.n() != sp.n() {
        return Err(Error::SizeMismatch {
            expected: sp.n(),
            found: p.n(),
        });
    }
    p.validate()
}

fn topology_mismatch(
    what: &str,
    expected: &FiniteTopology,
    got: &FiniteTopology,
) -> Option<Witness> {
    (0..expected.n())
        .find(|&x| expected.minopen(x) != got.minopen(x))
        .map(|x| Witness::Other {
            detail: format!(
                "{what}: minimal open set of {x} is {:?}, balls give {:?}",
                expected.minopen(x).to_vec(),
                got.minopen(x).to_vec()
            ),
        })
}

/// `p ∨ p⁻¹` generates the topology and `{p = 0}` is the graph of `≤`.
pub fn check_admissible(sp: &PreorderedSpace, p: &QuasiPseudoMetric) -> Result<PropertyReport> {
    const NAME: &str = "admissible";
    check_metric(sp, p)?;
    if let Some(w) = topology_mismatch("topology", sp.topology(), &symmetrized_topology(p)) {
        return Ok(PropertyReport::fail(NAME, w));
    }
    if let Some((x, y)) = zero_set_mismatch(sp, p) {
        return Ok(PropertyReport::fail(
            NAME,
            Witness::Other {
                detail: format!(
                    "order: p({x}, {y}) = {} but {x} {} {y}",
                    exact::to_display(&p.get(x, y)),
                    if sp.order().le(x, y) { "≤" } else { "≰" }
                ),
            },
        ));
    }
    Ok(PropertyReport::pass(NAME))
}

fn zero_set_mismatch(sp: &PreorderedSpace, p: &QuasiPseudoMetric) -> Option<(usize, usize)> {
    let n = sp.n();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| (p.get(x, y) == exact::zero()) != sp.order().le(x, y))
}

/// Strictness: the space is convex and T1-preordered, the balls of `p`
/// generate the upper topology and those of `p⁻¹` the lower topology.
pub fn check_strict(sp: &PreorderedSpace, p: &QuasiPseudoMetric) -> Result<PropertyReport> {
    const NAME: &str = "strict";
    check_metric(sp, p)?;
    for r in [props::is_convex(sp), props::is_t1_preordered(sp)] {
        if !r.verdict {
            return Ok(PropertyReport::fail(
                NAME,
                Witness::Prerequisite {
                    property: r.property,
                    witness: Box::new(r.witness.expect("failed report has witness")),
                },
            ));
        }
    }
    for (side, what) in [
        (Side::Upper, "upper topology"),
        (Side::Lower, "lower topology"),
    ] {
        if let Some(w) =
            topology_mismatch(what, &monotone_topology(sp, side), &ball_topology(p, side))
        {
            return Ok(PropertyReport::fail(NAME, w));
        }
    }
    Ok(PropertyReport::pass(NAME))
}

/// `p ∨ p⁻¹` vanishes only on the diagonal.
pub fn is_albert(p: &QuasiPseudoMetric) -> bool {
    let n = p.n();
    (0..n).all(|x| (0..n).all(|y| x == y || p.symmetrized(x, y) != exact::zero()))
}
