use std::process::Command;

use ordtop::format::{parse_grid, Instance};
use ordtop::grid::{causality_ladder, Rung};
use ordtop::space::fixtures::{ch3, p2, s2};
use ordtop_cli::run;

const F: &str = "tests/fixtures";

fn args(line: &str) -> Vec<String> {
    std::iter::once("ordtop".to_string())
        .chain(line.split_whitespace().map(|s| s.replace("$F", F)))
        .collect()
}

/// Each golden file holds the exact stdout of one command.
const GOLDEN: &[(&str, &str)] = &[
    ("check_ch3.txt", "check $F/ch3.json"),
    ("check_p2.txt", "check $F/p2.json"),
    ("check_s2.txt", "check $F/s2.json"),
    ("check_p2.json", "check $F/p2.json --json"),
    ("suite_ch3.txt", "suite $F/ch3.json"),
    ("separate_ch3.txt", "separate $F/ch3.json --a a --b c"),
    ("separate_s2.txt", "separate $F/s2.json --a a"),
    ("qpm_ch3.txt", "qpm $F/ch3.json --strict"),
    ("qpm_p2.txt", "qpm $F/p2.json"),
    ("closure_s2.txt", "closure $F/s2.json $F/delta2.json"),
    ("closure_ch3.txt", "closure $F/ch3.json $F/delta3.json"),
    ("ladder_mink16.txt", "grid $F/mink16.json ladder"),
    ("ladder_mink16.json", "grid $F/mink16.json ladder --json"),
    ("ladder_cyl8.txt", "grid $F/cyl8.json ladder"),
    ("ladder_mink16_p.txt", "grid $F/mink16_p.json ladder"),
    ("hull_mink16.txt", "grid $F/mink16.json hull 2,3,4,5"),
    ("export_mink16.txt", "grid $F/mink16.json export 0,0,1,1"),
    (
        "search_p2.txt",
        "search normal-not-convex --exhaustive --n 2",
    ),
    ("interval.txt", "interval --n 10000 --eps 0.01"),
];

#[test]
fn golden_outputs() {
    for (file, line) in GOLDEN {
        let expected = std::fs::read_to_string(format!("tests/golden/{file}")).unwrap();
        let out = run(args(line));
        assert_eq!(out.code, 0, "{line}: {}", out.stderr);
        assert_eq!(out.stdout, expected, "{line}");
    }
}

fn json(line: &str) -> serde_json::Value {
    let out = run(args(&format!("{line} --json")));
    assert_eq!(out.code, 0, "{line}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn verdict(report: &serde_json::Value, name: &str) -> bool {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["verdict"]
        .as_bool()
        .unwrap()
}

/// The fixture files describe the library's named spaces, and the check
/// command reports exactly the library battery.
#[test]
fn check_matches_library() {
    for (file, sp) in [("ch3", ch3()), ("p2", p2()), ("s2", s2())] {
        let text = std::fs::read_to_string(format!("{F}/{file}.json")).unwrap();
        assert_eq!(Instance::parse(&text).unwrap().space, sp);
        let r = json(&format!("check {F}/{file}.json"));
        for rep in ordtop::props::battery(&sp).unwrap() {
            assert_eq!(
                verdict(&r, &rep.property),
                rep.verdict,
                "{file} {}",
                rep.property
            );
        }
    }
    let r = json(&format!("check {F}/p2.json"));
    for p in ["convex", "weakly convex", "locally convex"] {
        assert!(!verdict(&r, p));
    }
    assert!(verdict(&r, "normally preordered") && verdict(&r, "I-space"));
}

#[test]
fn command_examples() {
    let r = json(&format!("separate {F}/ch3.json --a a --b c"));
    assert_eq!(
        r["values"]["f"],
        serde_json::json!({ "a": "0", "b": "0", "c": "1" })
    );
    let r = json(&format!("separate {F}/s2.json --a a"));
    assert_eq!(r["error"], "space is not normally preordered");

    let r = json(&format!("qpm {F}/ch3.json --strict"));
    assert!(verdict(&r, "admissible") && verdict(&r, "strict"));
    let r = json(&format!("qpm {F}/p2.json"));
    assert_eq!(r["error"], "space is not completely regularly preordered");
    let r = json(&format!("qpm {F}/discrete2.json"));
    assert!(verdict(
        &r,
        "Albert (p ∨ p⁻¹ vanishes only on the diagonal)"
    ));

    let r = json(&format!("closure {F}/s2.json {F}/delta2.json"));
    assert_eq!(r["values"]["closure"].as_array().unwrap().len(), 4);
    let r = json(&format!("closure {F}/ch3.json {F}/delta3.json"));
    assert_eq!(r["values"]["closure"].as_array().unwrap().len(), 3);
    assert!(!verdict(&r, "order is generated by the relation"));

    for (file, rung) in [
        ("mink16", Rung::GloballyHyperbolic),
        ("cyl8", Rung::NonCausal),
        ("mink16_p", Rung::StablyCausal),
    ] {
        let g = parse_grid(&std::fs::read_to_string(format!("{F}/{file}.json")).unwrap()).unwrap();
        assert_eq!(causality_ladder(&g, 8).unwrap().rung, rung);
        let r = json(&format!("grid {F}/{file}.json ladder"));
        assert_eq!(r["values"]["rung"], rung.as_str());
    }

    let r = json("search normal-not-convex --exhaustive --n 2");
    assert_eq!(r["values"]["status"], "witness");
    let w: ordtop::format::SpaceFile =
        serde_json::from_value(r["values"]["witness"].clone()).unwrap();
    assert_eq!(Instance::from_file(&w).unwrap().space, p2());

    let r = json("interval --n 10000 --eps 0.01");
    assert_eq!(r["values"]["diameter"], "9999/10000");
}

#[test]
fn errors_and_exit_codes() {
    for (line, needle) in [
        ("check $F/malformed.json", "parse error"),
        ("check $F/missing.json", "missing.json"),
        ("separate $F/ch3.json --a a --b a", "bad arguments"),
        ("closure $F/ch3.json $F/delta2.json", "size mismatch"),
        ("search bogus", "unknown predicate"),
        ("interval --n 100 --eps 0.5", "bad parameters"),
        ("grid $F/mink16.json hull 1,2,3", "bad window"),
        ("grid $F/mink16.json hull 0,0,99,0", "out of range"),
        ("frobnicate", "unrecognized subcommand"),
    ] {
        let out = run(args(line));
        assert_eq!(out.code, 1, "{line}");
        assert!(out.stdout.is_empty(), "{line}");
        assert!(out.stderr.contains(needle), "{line}: {}", out.stderr);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ordtop");
    let ok = Command::new(bin)
        .args(args("check $F/p2.json").into_iter().skip(1))
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(ok.stdout).unwrap(),
        std::fs::read_to_string("tests/golden/check_p2.txt").unwrap()
    );
    let bad = Command::new(bin)
        .args(["search", "bogus"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8(bad.stderr)
        .unwrap()
        .contains("unknown predicate"));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn timings_only_on_request() {
    let plain = run(args("interval --n 1000 --eps 0.1"));
    assert!(!plain.stdout.contains("time "));
    let timed = run(args("interval --n 1000 --eps 0.1 --timings"));
    assert!(timed.stdout.contains("time total: "));
}

#[test]
fn seeded_commands_are_deterministic() {
    for line in [
        "search I-space-not-C-space --random --n-min 3 --n 5 --seed 11 --samples 300 --json",
        "grid $F/mink16_p.json ladder --budget 8 --seed 5 --json",
    ] {
        assert_eq!(run(args(line)), run(args(line)));
    }
}
