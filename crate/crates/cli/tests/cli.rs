use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn recex(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recex"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("recex runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = recex(dir, args);
    assert!(
        out.status.success(),
        "recex {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

const HALVES: &str = r#"{
  "version": 1, "kind": "recmap", "dim": 2, "symbols": [{"name": "1", "kind": "unit"}, {"name": "sqrt2", "kind": "sqrt", "arg": 2}],
  "ambient": [{"lo": [{}, {}], "hi": [{"1": "1"}, {"1": "1"}]}],
  "pieces": [
    {"rect": {"lo": [{}, {}], "hi": [{"1": "1/2"}, {"1": "1"}]}, "shift": [{"1": "1/2"}, {}]},
    {"rect": {"lo": [{"1": "1/2"}, {}], "hi": [{"1": "1"}, {"1": "1"}]}, "shift": [{"1": "-1/2"}, {}]}
  ]
}"#;

const QUARTERS: &str = r#"{
  "version": 1, "kind": "recmap", "dim": 2, "symbols": [{"name": "1", "kind": "unit"}, {"name": "sqrt2", "kind": "sqrt", "arg": 2}],
  "ambient": [{"lo": [{}, {}], "hi": [{"1": "1"}, {"1": "1"}]}],
  "pieces": [
    {"rect": {"lo": [{}, {}], "hi": [{"1": "1/2"}, {"sqrt2": "1/2"}]}, "shift": [{"1": "1/2"}, {}]},
    {"rect": {"lo": [{}, {"sqrt2": "1/2"}], "hi": [{"1": "1/2"}, {"1": "1"}]}, "shift": [{"1": "1/2"}, {}]},
    {"rect": {"lo": [{"1": "1/2"}, {}], "hi": [{"1": "1"}, {"1": "1"}]}, "shift": [{"1": "-1/2"}, {}]}
  ]
}"#;

#[test]
fn resplit_map_is_equal() {
    let dir = scratch("resplit");
    fs::write(dir.join("a.json"), HALVES).unwrap();
    fs::write(dir.join("b.json"), QUARTERS).unwrap();
    assert_eq!(ok(&dir, &["equal", "a.json", "b.json"]).trim(), "true");
    assert_eq!(ok(&dir, &["validate", "b.json"]).trim(), "valid recmap");
}

#[test]
fn different_maps_are_unequal() {
    let dir = scratch("unequal");
    fs::write(dir.join("a.json"), HALVES).unwrap();
    ok(
        &dir,
        &[
            "random", "--dim", "2", "--pieces", "4", "--seed", "3", "-o", "b.json",
        ],
    );
    let out = recex(&dir, &["equal", "a.json", "b.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "false");
}

#[test]
fn decomposition_recomposes() {
    let dir = scratch("decompose");
    ok(
        &dir,
        &[
            "random",
            "--dim",
            "2",
            "--pieces",
            "6",
            "--symbols",
            "sqrt2,sqrt3",
            "--seed",
            "5",
            "-o",
            "a.json",
        ],
    );
    for mode in ["shuffles", "grid"] {
        let f = format!("{mode}.json");
        ok(&dir, &["decompose", "a.json", "--mode", mode, "-o", &f]);
        ok(&dir, &["compose", &f, "a.json", "-o", "twice.json"]);
        ok(
            &dir,
            &["compose", "a.json", "a.json", "-o", "expected.json"],
        );
        assert_eq!(
            ok(&dir, &["equal", "twice.json", "expected.json"]).trim(),
            "true",
            "{mode}"
        );
    }
}

#[test]
fn involution_decomposes_into_transpositions() {
    let dir = scratch("involution");
    fs::write(dir.join("a.json"), HALVES).unwrap();
    ok(
        &dir,
        &[
            "decompose",
            "a.json",
            "--mode",
            "involution",
            "-o",
            "t.json",
        ],
    );
    ok(&dir, &["compose", "t.json", "a.json", "-o", "id.json"]);
    ok(&dir, &["invert", "a.json", "-o", "inv.json"]);
    assert_eq!(ok(&dir, &["equal", "t.json", "inv.json"]).trim(), "true");
}

#[test]
fn commutator_has_trivial_saf() {
    let dir = scratch("commutator");
    ok(
        &dir,
        &[
            "random", "--dim", "2", "--pieces", "5", "--seed", "42", "-o", "a.json",
        ],
    );
    ok(
        &dir,
        &[
            "random", "--dim", "2", "--pieces", "5", "--seed", "43", "-o", "b.json",
        ],
    );
    ok(&dir, &["invert", "a.json", "-o", "ai.json"]);
    ok(&dir, &["invert", "b.json", "-o", "bi.json"]);
    ok(&dir, &["compose", "ai.json", "bi.json", "-o", "t1.json"]);
    ok(&dir, &["compose", "b.json", "t1.json", "-o", "t2.json"]);
    ok(&dir, &["compose", "a.json", "t2.json", "-o", "c.json"]);
    let doc: serde_json::Value = serde_json::from_str(&ok(&dir, &["saf", "c.json"])).unwrap();
    let components = doc["components"].as_array().unwrap();
    assert_eq!(components.len(), 2);
    assert!(components
        .iter()
        .all(|c| c["coeffs"].as_array().unwrap().is_empty()));
    assert_eq!(ok(&dir, &["derived", "c.json"]).trim(), "true");
    let single: serde_json::Value = serde_json::from_str(&ok(&dir, &["saf", "a.json"])).unwrap();
    assert!(!single["components"][1]["coeffs"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn random_is_deterministic() {
    let dir = scratch("determinism");
    let args = [
        "random",
        "--dim",
        "3",
        "--pieces",
        "7",
        "--symbols",
        "sqrt2,sqrt5",
        "--seed",
        "9",
    ];
    let a = ok(&dir, &args);
    let b = ok(&dir, &args);
    assert_eq!(a, b);
    let c = ok(
        &dir,
        &[
            "random",
            "--dim",
            "3",
            "--pieces",
            "7",
            "--symbols",
            "sqrt2,sqrt5",
            "--seed",
            "10",
        ],
    );
    assert_ne!(a, c);
}

#[test]
fn render_writes_svg() {
    let dir = scratch("render");
    ok(
        &dir,
        &[
            "random", "--dim", "2", "--pieces", "6", "--seed", "1", "-o", "a.json",
        ],
    );
    ok(&dir, &["render", "a.json", "-o", "a.svg"]);
    let svg = fs::read_to_string(dir.join("a.svg")).unwrap();
    assert!(svg.trim_start().starts_with("<?xml") || svg.trim_start().starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<svg").count(), 1);
    let opened = svg.matches("<rect").count();
    assert!(opened >= 2);
    assert_eq!(svg.matches("<g").count(), svg.matches("</g>").count());
}

#[test]
fn volume_and_isomorphism() {
    let dir = scratch("iso");
    let doc = |rects: &str| {
        format!(
            r#"{{"version": 1, "kind": "multirect", "dim": 2, "symbols": [{{"name": "1", "kind": "unit"}}, {{"name": "sqrt2", "kind": "sqrt", "arg": 2}}], "rects": [{rects}]}}"#
        )
    };
    let wide = r#"{"lo": [{}, {}], "hi": [{"1": "1"}, {"1": "1/2"}]}"#;
    let halves = r#"{"lo": [{}, {}], "hi": [{"1": "1/2"}, {"1": "1/2"}]}, {"lo": [{}, {"1": "1"}], "hi": [{"1": "1/2"}, {"1": "3/2"}]}"#;
    let tall = r#"{"lo": [{}, {}], "hi": [{"sqrt2": "1"}, {"sqrt2": "1/4"}]}"#;
    fs::write(dir.join("wide.json"), doc(wide)).unwrap();
    fs::write(dir.join("halves.json"), doc(halves)).unwrap();
    fs::write(dir.join("tall.json"), doc(tall)).unwrap();
    assert_eq!(
        ok(&dir, &["vol", "wide.json"]),
        ok(&dir, &["vol", "halves.json"])
    );
    let iso: serde_json::Value =
        serde_json::from_str(&ok(&dir, &["iso", "wide.json", "halves.json"])).unwrap();
    assert_eq!(iso["kind"], "isomorphism");
    let out = recex(&dir, &["iso", "wide.json", "tall.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("not isomorphic"));
}

#[test]
fn exit_codes() {
    let dir = scratch("exits");
    fs::write(dir.join("a.json"), HALVES).unwrap();
    fs::write(dir.join("broken.json"), "{\"kind\": ").unwrap();
    assert_eq!(
        recex(&dir, &["invert", "missing.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        recex(&dir, &["random", "--dim", "2", "--pieces", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        recex(&dir, &["invert", "broken.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        recex(&dir, &["validate", "broken.json"]).status.code(),
        Some(1)
    );
    assert_eq!(recex(&dir, &["validate", "a.json"]).status.code(), Some(0));
    let overlapping = HALVES.replace(r#""lo": [{"1": "1/2"}, {}]"#, r#""lo": [{"1": "1/4"}, {}]"#);
    fs::write(dir.join("overlap.json"), overlapping).unwrap();
    assert_eq!(
        recex(&dir, &["validate", "overlap.json"]).status.code(),
        Some(1)
    );
    assert_eq!(recex(&dir, &["saf", "overlap.json"]).status.code(), Some(2));
    let scalars = r#"{"version": 1, "kind": "scalars", "symbols": [{"name": "1", "kind": "unit"}, {"name": "sqrt2", "kind": "sqrt", "arg": 2}, {"name": "sqrt3", "kind": "sqrt", "arg": 3}], "values": [{"1": "1"}, {"sqrt2": "1"}, {"sqrt3": "1"}, {"1": "4", "sqrt2": "-1", "sqrt3": "-1"}]}"#;
    fs::write(dir.join("s.json"), scalars).unwrap();
    assert_eq!(recex(&dir, &["qfree", "s.json"]).status.code(), Some(0));
    assert_eq!(
        recex(&dir, &["--search-budget", "1", "qfree", "s.json"])
            .status
            .code(),
        Some(4)
    );
    let opaque = r#"{"version": 1, "kind": "scalars", "symbols": [{"name": "1", "kind": "unit"}, {"name": "g", "kind": "opaque", "value": "0.5", "digits": 1}], "values": [{"g": "1", "1": "-1/2"}]}"#;
    fs::write(dir.join("o.json"), opaque).unwrap();
    assert_eq!(recex(&dir, &["qfree", "o.json"]).status.code(), Some(3));
}

#[test]
fn selftest_filter_runs_one_criterion() {
    let dir = scratch("selftest");
    let out = ok(&dir, &["selftest", "--filter", "torus-volume"]);
    assert!(out
        .lines()
        .next()
        .unwrap()
        .starts_with("[PASS] 09 torus-volume"));
    assert!(out.contains("1/1 criteria passed"));
}
