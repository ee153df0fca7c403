use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn valid(name: &str) -> String {
    root().join("corpus/valid").join(name).display().to_string()
}

fn golden(name: &str) -> String {
    fs::read_to_string(root().join("golden").join(name)).unwrap()
}

fn sas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sas"))
        .args(args)
        .env("SAS_COLOR", "0")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = sas(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

#[test]
fn gain_is_byte_exact() {
    assert_eq!(
        ok(&["gain", "--n1", "3", "--n2", "2"]).as_bytes(),
        b"{\"gain\":12}\n"
    );
    assert_eq!(ok(&["gain", "--n1", "3", "--n2", "2"]), golden("gain.json"));
}

#[test]
fn capacity_value() {
    let out = ok(&["capacity", "--neurons", "1e11", "--synapses", "1e3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let got = v["log10_bir"].as_f64().unwrap();
    assert!((got - 8432.395353608566).abs() / 8432.395353608566 <= 1e-12);
    let want: serde_json::Value = serde_json::from_str(&golden("capacity.json")).unwrap();
    assert!((got - want["log10_bir"].as_f64().unwrap()).abs() <= 1e-9);
}

#[test]
fn file_commands_match_goldens() {
    let cases: [(&[&str], &str); 7] = [
        (
            &[
                "fuse",
                &valid("fig5_fusion.sas"),
                "--systems",
                "S1,S2",
                "--oracle",
            ],
            "fuse_fig5.json",
        ),
        (&["topology", &valid("layers.sas")], "topology_layers.txt"),
        (&["fmt", &valid("unordered.sas")], "fmt_unordered.sas"),
        (
            &["reliability", "--error-rates", "0.1,0.2,0.3"],
            "reliability.json",
        ),
        (
            &[
                "knowledge-gain",
                &valid("concepts.sas"),
                "--concepts",
                "vehicle,car",
            ],
            "knowledge_gain.json",
        ),
        (
            &["compose", &valid("introspection.sas"), "--layers", "2"],
            "compose.json",
        ),
        (&["gain", "--n1", "3", "--n2", "2"], "gain.json"),
    ];
    for (args, file) in cases {
        assert_eq!(ok(args), golden(file), "{args:?}");
    }
}

#[test]
fn every_valid_fixture_formats_to_a_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(root().join("corpus/valid")).unwrap() {
        let path = entry.unwrap().path();
        let once = ok(&["fmt", path.to_str().unwrap()]);
        let tmp = dir.path().join("once.sas");
        fs::write(&tmp, &once).unwrap();
        assert_eq!(
            ok(&["fmt", tmp.to_str().unwrap()]),
            once,
            "{}",
            path.display()
        );
    }
}

#[test]
fn dispatch_writes_deterministic_trace() {
    let dir = tempfile::tempdir().unwrap();
    let events = root().join("golden/guard.events");
    let mut traces = Vec::new();
    for i in 0..3 {
        let out = dir.path().join(format!("trace{i}.json"));
        let summary = ok(&[
            "dispatch",
            &valid("dispatch.sas"),
            "--events",
            events.to_str().unwrap(),
            "--trace",
            out.to_str().unwrap(),
        ]);
        assert!(summary.contains("\"entries\":6"));
        assert!(summary.contains("\"unhandled\":1"));
        traces.push(fs::read_to_string(out).unwrap());
    }
    assert!(traces.iter().all(|t| *t == golden("dispatch_trace.json")));
}

#[test]
fn simulate_csv() {
    let out = ok(&[
        "simulate-pps",
        "--steps",
        "5",
        "--dt",
        "0.01",
        "--out",
        "csv",
    ]);
    let want = golden("simulate_small.csv");
    assert_eq!(out.lines().count(), 7);
    assert_eq!(out.lines().next(), Some("t,N_L,N_G,V"));
    for (got, exp) in out.lines().zip(want.lines()).skip(1) {
        let (g, e): (Vec<&str>, Vec<&str>) = (got.split(',').collect(), exp.split(',').collect());
        assert_eq!(g[..3], e[..3]);
        let (gv, ev): (f64, f64) = (g[3].parse().unwrap(), e[3].parse().unwrap());
        assert!((gv - ev).abs() <= 1e-14);
    }
    assert_eq!(
        out,
        ok(&[
            "simulate-pps",
            "--steps",
            "5",
            "--dt",
            "0.01",
            "--out",
            "csv"
        ])
    );
}

#[test]
fn simulate_to_file_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let summary = ok(&[
        "simulate-pps",
        "--steps",
        "100",
        "--out",
        "csv",
        "--path",
        path.to_str().unwrap(),
    ]);
    assert!(summary.contains("\"samples\":101"));
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 102);
    let json: serde_json::Value = serde_json::from_str(&ok(&[
        "simulate-pps",
        "--steps",
        "3",
        "--nl0",
        "0",
        "--ng0",
        "5",
    ]))
    .unwrap();
    let samples = json["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 4);
    assert!(samples[0]["V"].is_null());
    assert_eq!(samples[0]["N_G"], 5.0);
    let csv = ok(&["simulate-pps", "--steps", "1", "--nl0", "0", "--out", "csv"]);
    assert!(csv.lines().nth(1).unwrap().ends_with(','));
}

#[test]
fn taxonomy_lists_sixteen() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["taxonomy"])).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 16);
}

#[test]
fn validate_reports_and_exits() {
    let o = sas(&["validate", "missing.sas"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.sas"));

    let bad = root().join("corpus/diagnostics/level_range.sas");
    let o = sas(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let msg = stderr(&o);
    assert!(
        msg.contains("level_range.sas:6:22: error[E_LEVEL_RANGE]"),
        "{msg}"
    );
    assert!(!msg.contains('\x1b'));
    assert!(stdout(&o).is_empty());

    let warn = root().join("corpus/diagnostics/empty_system.sas");
    let o = sas(&["validate", warn.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning[W_EMPTY_SYSTEM]"));

    assert!(ok(&["validate", &valid("all_relations.sas")]).contains("\"valid\":true"));
}

#[test]
fn usage_and_domain_errors() {
    for args in [
        &["gain", "--n1", "x", "--n2", "1"][..],
        &["frobnicate"],
        &[],
        &["simulate-pps", "--out", "xml"],
        &["fuse", "file.sas"],
    ] {
        let o = sas(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("Usage:"), "{args:?}");
    }
    for args in [
        &["reliability", "--error-rates", "0.5,1.5"][..],
        &["capacity", "--neurons", "10", "--synapses", "11"],
        &["simulate-pps", "--dt", "0"],
        &["fuse", &valid("fig5_fusion.sas"), "--systems", "S1,Nope"],
        &[
            "knowledge-gain",
            &valid("concepts.sas"),
            "--concepts",
            "vehicle,ghost",
        ],
    ] {
        let o = sas(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(stderr(&o).starts_with("error: "), "{args:?}");
    }
}

#[test]
fn bad_event_stream_is_reported_with_path() {
    let events = root().join("corpus/diagnostics/bad_stream.events");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let o = sas(&[
        "dispatch",
        &valid("dispatch.sas"),
        "--events",
        events.to_str().unwrap(),
        "--trace",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad_stream.events:4:1: error[E_EVENTS_SYNTAX]"));
    assert!(!out.exists());
}
