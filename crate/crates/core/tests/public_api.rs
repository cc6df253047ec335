//! End-to-end use of the public API: files in, verdicts out.

use ordtop::format::{parse_grid, Instance};
use ordtop::grid::{self, Rung};
use ordtop::lab;
use ordtop::qpmetric::{check_admissible, synthesize_qpm};
use ordtop::separation::separate_monotone;
use ordtop::{props, PointSet};

const CH3: &str = r#"{ "points": ["lo", "mid", "hi"],
  "minopen": { "lo": ["lo"], "mid": ["mid"], "hi": ["hi"] },
  "order": [["lo", "mid"], ["mid", "hi"]] }"#;

#[test]
fn chain_file_to_metric() {
    let inst = Instance::parse(CH3).unwrap();
    assert!(props::battery(&inst.space)
        .unwrap()
        .iter()
        .all(|r| r.verdict));
    let f = separate_monotone(
        &inst.space,
        &PointSet::from_indices(3, [0]),
        &PointSet::from_indices(3, [2]),
    )
    .unwrap();
    assert_eq!(f.display(), "0 0 1");
    let p = synthesize_qpm(&inst.space).unwrap();
    assert!(check_admissible(&inst.space, &p).unwrap().verdict);
    // Writing the metric back into the file keeps it intact.
    let with_metric = Instance {
        qpm: Some(p.clone()),
        ..inst
    };
    let again = Instance::parse(&with_metric.to_json()).unwrap();
    assert_eq!(again.qpm, Some(p));
}

#[test]
fn grid_file_to_exported_space() {
    let g = parse_grid(r#"{ "T": 12, "X": 12, "removed": [[6, 6]] }"#).unwrap();
    assert_eq!(
        grid::causality_ladder(&g, 8).unwrap().rung,
        Rung::StablyCausal
    );
    // The window ends before the removed site, so the exported order is the
    // slope-1 closed form (t, x) ≤ (t', x') iff t' − t ≥ |x' − x|.
    let ex = grid::export_finite_space(&g, [0, 0, 3, 3]).unwrap();
    for (i, &a) in ex.sites.iter().enumerate() {
        for (j, &b) in ex.sites.iter().enumerate() {
            let want = b.0 >= a.0 && b.0 - a.0 >= a.1.abs_diff(b.1);
            assert_eq!(ex.space.order().le(i, j), want, "{a:?} {b:?}");
        }
    }
    assert!(props::is_convex(&ex.space).verdict);
}

#[test]
fn search_witness_round_trips() {
    let r =
        lab::counterexample_search(&lab::SearchConfig::exhaustive("normal-not-convex", 3)).unwrap();
    let w = r.witness.expect("a witness exists at two points");
    let sp = Instance::from_file(&w.space).unwrap().space;
    assert!(lab::predicate("normal-not-convex", &sp).unwrap());
    assert_eq!(w.n, 2);
}
