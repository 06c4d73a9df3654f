use std::path::PathBuf;
use std::process::{Command, Output};

use bredon_cli::schema::{parse_scenario, to_json, ScenarioFile};
use bredon_core::presets;
use serde_json::Value;

fn bredon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bredon")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn scenario(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn compute_file(path: &PathBuf) -> Output {
    bredon(&["compute", "--scenario", path.to_str().unwrap()])
}

fn json_report(args: &[&str]) -> Value {
    let mut all = vec!["compute"];
    all.extend(args);
    all.extend(["--report", "json"]);
    let o = bredon(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn headline_reports() {
    let r = json_report(&["--preset", "sp4-case1"]);
    assert_eq!(r["bredon"]["blowup"], serde_json::json!(["Z^2", "0", "0"]));
    assert_eq!((r["k0"].as_str(), r["k1"].as_str()), (Some("Z^2"), Some("0")));
    let r = json_report(&["--preset", "klein-bottle"]);
    assert_eq!((r["k0"].as_str(), r["k1"].as_str()), (Some("Z ⊕ Z/2"), Some("Z")));
    let r = json_report(&["--preset", "dim1-case-a"]);
    assert_eq!((r["k0"].as_str(), r["k1"].as_str()), (Some("Z^3"), Some("0")));
    let r = json_report(&["--preset", "t3-inversion"]);
    assert_eq!(r["status"], "rational-only");
}

#[test]
fn table_report_lists_the_groups() {
    let o = bredon(&["compute", "--preset", "sp4-case8"]);
    assert_eq!(code(&o), 0);
    let t = stdout(&o);
    assert!(t.contains("Z | Z^2 | Z"), "{t}");
    assert!(t.contains("K status") && t.contains("exact"));
}

#[test]
fn systems_flag_selects_sides() {
    let r = json_report(&["--preset", "sp4-case4", "--systems", "blowup"]);
    assert!(r["bredon"]["x_side"].is_null());
    assert_eq!(r["cross_check"], "skipped");
    let r = json_report(&["--preset", "sp4-case4", "--systems", "x-side"]);
    assert!(r["bredon"]["blowup"].is_null());
    assert_eq!(r["bredon"]["x_side"], serde_json::json!(["Z^6", "0", "0"]));
}

#[test]
fn full_checks_on_presets() {
    for name in ["sp4-case1", "dim1-case-b", "klein-bottle", "discrete-series-twisted"] {
        let r = json_report(&["--preset", name, "--check-invariants", "full"]);
        assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true), "{name}");
        assert!(r["checks"].as_array().unwrap().len() > 7);
    }
}

#[test]
fn reports_are_deterministic() {
    for args in [["compute", "--preset", "sp4-case2", "--report", "json"], ["compute", "--preset", "dim1-case-c", "--report", "table"]] {
        let a = bredon(&args);
        let b = bredon(&args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn presets_round_trip_through_json() {
    let dir = tempfile::tempdir().unwrap();
    for name in presets::names() {
        let s = presets::preset(&name).unwrap();
        let text = to_json(&s);
        assert_eq!(parse_scenario(&text).unwrap().to_scenario(), s, "{name}");
        let shown = bredon(&["show-preset", &name]);
        assert_eq!(stdout(&shown).trim_end(), text.trim_end(), "{name}");
    }
    // a written file computes the same report as the preset
    let path = scenario(&dir, "case3.json", &to_json(&presets::preset("sp4-case3").unwrap()));
    let from_file = json_report(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(from_file, json_report(&["--preset", "sp4-case3"]));
}

#[test]
fn catalog_shape() {
    let names = presets::names();
    assert_eq!(names.iter().filter(|n| n.starts_with("sp4-case") && n[8..].parse::<u8>().is_ok()).count(), 8);
    assert_eq!(names.iter().filter(|n| n.starts_with("dim1-case-")).count(), 3);
    let o = bredon(&["list-presets", "--report", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scenarios"].as_array().unwrap().len(), names.len());
    assert_eq!(v["crossed"].as_array().unwrap().len(), presets::crossed_names().len());
}

#[test]
fn crossed_diagnostics() {
    for name in presets::crossed_names() {
        let o = bredon(&["crossed", "--preset", &name, "--report", "json"]);
        assert_eq!(code(&o), 0, "{name}");
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["center_dimension"].as_u64().unwrap() as usize, v["dual"].as_array().unwrap().len());
        assert_eq!(v["block_sum"], v["dimension"]);
    }
    let o = bredon(&["crossed", "--preset", "crossed-ideal", "--report", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ideal"]["k0_rank"], 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &str, i32); 7] = [
        ("malformed", "{\"name\": ", 2),
        ("unknown-field", r#"{"name":"x","lattice":[[6]],"colour":1}"#, 2),
        ("bad-rational", r#"{"name":"x","lattice":[[6]],"generators":[{"name":"u","linear":[[1]],"translation":["two"]}]}"#, 2),
        (
            "closure",
            r#"{"name":"x","lattice":[[6]],"generators":[{"name":"u","linear":[[1]],"translation":["1"]}],"options":{"max_group_order":3}}"#,
            3,
        ),
        (
            "not-cellular",
            r#"{"name":"x","lattice":[[6]],"generators":[{"name":"u","linear":[[1]],"translation":["2"]}],"families":[{"normal":["1"],"offsets":["1"],"period":"6"}]}"#,
            4,
        ),
        (
            "iota-conflict",
            r#"{"name":"x","lattice":[[6]],"generators":[{"name":"u","linear":[[1]],"translation":["3"]},{"name":"r","linear":[[-1]],"translation":["0"]}],
               "sliced":[{"reflection":["r"],"family":{"normal":["1"],"offsets":["0","3"],"period":"6"},"iota":[{"offset":"0","exponent":1},{"offset":"3","exponent":0}]}],"iota_modulus":2}"#,
            5,
        ),
        ("dimension", r#"{"name":"x","lattice":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#, 6),
    ];
    for (name, text, want) in cases {
        let o = compute_file(&scenario(&dir, &format!("{name}.json"), text));
        assert_eq!(code(&o), want, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "), "{name}");
    }
    assert_eq!(code(&bredon(&["compute", "--preset", "sp4-case9"])), 2);
    assert_eq!(code(&bredon(&["compute", "--preset", "t3-inversion", "--max-group-order", "1"])), 3);
    let o = bredon(&["compute", "--scenario", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn schema_accepts_integers_and_fractions() {
    let f: ScenarioFile = parse_scenario(
        r#"{"name":"x","lattice":[[2,0],[0,2]],"generators":[{"name":"g","linear":[[1,0],[0,-1]],"translation":[1,"0/3"]}]}"#,
    )
    .unwrap();
    let s = f.to_scenario();
    assert_eq!(s.generators[0].translation[0], bredon_core::rational::Q::from_integer(1.into()));
    assert!(parse_scenario(r#"{"name":"x","lattice":[[2]],"generators":[{"name":"g","linear":[[1]],"translation":["1/0"]}]}"#).is_err());
}
