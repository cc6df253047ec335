//! Smallest closed preorders and continuous isotone functions into chains.
//!
//! A preorder `≤` is generated by a relation `R` when it is the smallest
//! closed preorder containing `R`. On a finite space every set is compact,
//! so the compactness condition on `cl(R(K))` holds automatically and only
//! the fixpoint condition carries information.

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::relation::{Preorder, Relation};
use crate::space::PreorderedSpace;
use crate::topology::FiniteTopology;

/// Default cap on the number of candidate functions enumerated.
pub const DEFAULT_FUNCTION_CAP: u128 = 1 << 24;

fn check_size(top: &FiniteTopology, r: &Relation) -> Result<()> {
    if r.n() != top.n() {
        return Err(Error::SizeMismatch {
            expected: top.n(),
            found: r.n(),
        });
    }
    Ok(())
}

/// The intersection of all closed preorders containing `r` (which is
/// reflexivized first). Alternates reflexive-transitive closure and product
/// closure until both leave the relation unchanged; each round that changes
/// anything adds a pair, so at most `n²` rounds run.
pub fn smallest_closed_preorder(top: &FiniteTopology, r: &Relation) -> Result<Preorder> {
    check_size(top, r)?;
    let mut cur = r.reflexive_transitive_closure();
    loop {
        let closed = top.product_closure(&cur)?;
        if closed == cur {
            return Ok(Preorder::new_unchecked(cur));
        }
        cur = closed.reflexive_transitive_closure();
    }
}

/// Same fixpoint reached with the opposite alternation (product closure
/// first). Kept to check that the order of the two steps is immaterial.
pub fn smallest_closed_preorder_closure_first(
    top: &FiniteTopology,
    r: &Relation,
) -> Result<Preorder> {
    check_size(top, r)?;
    let mut cur = r.clone().reflexive();
    loop {
        let next = top.product_closure(&cur)?.reflexive_transitive_closure();
        if next == cur {
            return Ok(Preorder::new_unchecked(cur));
        }
        cur = next;
    }
}

fn check_subrelation(sp: &PreorderedSpace, r: &Relation) -> Result<()> {
    sp.check_relation(r)?;
    match r.first_missing_from(sp.order().graph()) {
        Some((x, y)) => Err(Error::NotASubrelation(x, y)),
        None => Ok(()),
    }
}

/// Whether the space's preorder is the smallest closed preorder containing
/// `r`. `r` must be contained in the preorder.
pub fn is_generated_by(sp: &PreorderedSpace, r: &Relation) -> Result<bool> {
    check_subrelation(sp, r)?;
    Ok(smallest_closed_preorder(sp.topology(), r)?.graph() == sp.order().graph())
}

/// Groups the points on which every continuous function must be constant:
/// the connected components of `y ∈ M(x)`. Returns the component index of
/// each point; components are numbered by their smallest point.
pub(crate) fn continuity_components(top: &FiniteTopology) -> (Vec<usize>, usize) {
    let n = top.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for x in 0..n {
        for y in top.minopen(x) {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut comp = vec![0; n];
    let mut count = 0;
    for x in 0..n {
        let root = find(&mut parent, x);
        if label[root] == usize::MAX {
            label[root] = count;
            count += 1;
        }
        comp[x] = label[root];
    }
    (comp, count)
}

/// All continuous `f: E → {0, .., levels-1}` that are isotone for `r`,
/// in lexicographic order of their value vectors.
///
/// Continuity is continuity into the real line: every preimage of an open
/// set is open, which on a finite space means `f` is constant on each `M(x)`.
pub fn isotone_functions_to_chain(
    sp: &PreorderedSpace,
    r: &Relation,
    levels: usize,
    cap: u128,
) -> Result<Vec<Vec<u32>>> {
    sp.check_relation(r)?;
    if levels == 0 {
        return Err(Error::BadArguments("at least one level is required".into()));
    }
    let (comp, c) = continuity_components(sp.topology());
    let count = (levels as u128).checked_pow(c as u32).unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::InstanceTooLarge {
            what: "chain-valued functions".into(),
            count,
            cap,
        });
    }
    // Constraints between components: (a, b) ∈ R forces value(a) ≤ value(b).
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); c];
    for (x, y) in r.pairs() {
        let (a, b) = (comp[x], comp[y]);
        if a != b && !below[b].contains(&a) {
            below[b].push(a);
        }
    }
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); c];
    for (b, list) in below.iter().enumerate() {
        for &a in list {
            above[a].push(b);
        }
    }
    let consistent = |vals: &[u32], k: usize| {
        below[k].iter().all(|&a| a > k || vals[a] <= vals[k])
            && above[k].iter().all(|&b| b > k || vals[k] <= vals[b])
    };
    let mut out = Vec::new();
    let mut vals = vec![0u32; c];
    // Depth-first assignment of components in index order with pruning.
    fn rec(
        k: usize,
        c: usize,
        levels: u32,
        vals: &mut Vec<u32>,
        ok: &dyn Fn(&[u32], usize) -> bool,
        out: &mut Vec<Vec<u32>>,
    ) {
        if k == c {
            out.push(vals.clone());
            return;
        }
        for v in 0..levels {
            vals[k] = v;
            if ok(vals, k) {
                rec(k + 1, c, levels, vals, ok, out);
            }
        }
    }
    let mut comp_vals = Vec::new();
    rec(0, c, levels as u32, &mut vals, &consistent, &mut comp_vals);
    for cv in comp_vals {
        out.push(comp.iter().map(|&k| cv[k]).collect::<Vec<u32>>());
    }
    out.sort();
    Ok(out)
}

/// Whether the continuous isotone functions for `r` and for the whole
/// preorder coincide (as `levels`-valued functions).
pub fn isotone_sets_coincide(sp: &PreorderedSpace, r: &Relation, levels: usize) -> Result<bool> {
    check_subrelation(sp, r)?;
    let a = isotone_functions_to_chain(sp, r, levels, DEFAULT_FUNCTION_CAP)?;
    let b = isotone_functions_to_chain(sp, sp.order().graph(), levels, DEFAULT_FUNCTION_CAP)?;
    Ok(a == b)
}

/// Searches for a violation of the intermediate-point property of generated
/// preorders: whenever `x ∈ Int(K)`, `x ≤ z` and `z ∉ cl(R(K))`, some `y`
/// with `x ≤ y ≤ z` lies in `cl(R(K)) ∖ Int(K)`. Returns `(x, z, K)` for
/// the first failure, scanning `K` by bitmask. Limited to 20 points.
pub fn intermediate_point_violation(
    sp: &PreorderedSpace,
    r: &Relation,
) -> Result<Option<(usize, usize, PointSet)>> {
    sp.check_relation(r)?;
    let n = sp.n();
    if n > 20 {
        return Err(Error::InstanceTooLarge {
            what: "subsets".into(),
            count: 1u128 << n,
            cap: 1 << 20,
        });
    }
    let top = sp.topology();
    let ord = sp.order();
    for mask in 0u64..(1u64 << n) {
        let k = PointSet::from_mask(n, mask);
        let int_k = top.interior(&k);
        let mut image = PointSet::empty(n);
        for a in &k {
            image.union_with(r.row(a));
        }
        let cl = top.closure(&image);
        let band = cl.difference(&int_k);
        for x in &int_k {
            for z in ord.up(x).difference(&cl).iter() {
                let between = ord.up(x).intersection(ord.down(z));
                if !between.intersects(&band) {
                    return Ok(Some((x, z, k)));
                }
            }
        }
    }
    Ok(None)
}
