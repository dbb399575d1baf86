use std::path::PathBuf;

use hyperkit::report::Report;
use hyperkit::Verdict;

fn corpus(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, Option<Report>, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hyperkit").chain(args.iter().copied());
    let (code, report) = hyperkit_cli::run(argv, &mut out, &mut err);
    (code, report, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn corpus_exit_codes() {
    let expected = [
        ("sign.hyp", 0),
        ("sign_field.hyp", 0),
        ("trivial.hyp", 0),
        ("convolution.hyp", 0),
        ("valuation.hyp", 0),
        ("valuation_not_onto.hyp", 1),
        ("no_inverse.hyp", 1),
        ("gf4_valuation.hyp", 1),
        ("missing_cell.hyp", 2),
    ];
    let mut files: Vec<String> = std::fs::read_dir(corpus(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|f| f.ends_with(".hyp"))
        .collect();
    files.sort();
    let mut listed: Vec<String> = expected.iter().map(|(f, _)| f.to_string()).collect();
    listed.sort();
    assert_eq!(files, listed, "every corpus file has an expected exit code");
    for (file, code) in expected {
        let (got, _, _, err) = run(&["check", &corpus(file)]);
        assert_eq!(got, code, "{file}: {err}");
    }
}

#[test]
fn parse_errors_carry_positions() {
    let (code, report, _, err) = run(&["check", &corpus("missing_cell.hyp")]);
    assert_eq!(code, 2);
    assert!(report.is_none());
    assert!(err.contains("missing_cell.hyp:1:12: missing cell a*a in `Z2`"), "{err}");
}

#[test]
fn failing_check_names_the_axiom() {
    let (_, report, out, _) = run(&["check", &corpus("no_inverse.hyp")]);
    let report = report.unwrap();
    let failed: Vec<&str> = report.failures().map(|d| d.name.as_str()).collect();
    assert_eq!(failed, ["Bad: H3 unique inverses"]);
    assert!(out.contains("FAIL  Bad: H3 unique inverses"));
    let (_, report, _, _) = run(&["check", &corpus("valuation_not_onto.hyp")]);
    let failed: Vec<String> = report.unwrap().failures().map(|d| d.name.clone()).collect();
    assert_eq!(failed, ["w: surjective onto H ∪ {∞}"]);
    let (_, report, _, _) = run(&["check", &corpus("gf4_valuation.hyp")]);
    let failed: Vec<String> = report.unwrap().failures().map(|d| d.name.clone()).collect();
    assert_eq!(failed, ["w: O_w is a valuation hyperring", "w: value group order is linear"]);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["check"]).0, 2);
    assert_eq!(run(&["check", "/nonexistent/file.hyp"]).0, 2);
    assert_eq!(run(&["quotient", "--ring", "zmod:6", "--subgroup", "1,5"]).0, 2);
    assert_eq!(run(&["quotient", "--ring", "poly:5", "--subgroup", "1"]).0, 2);
    assert_eq!(run(&["quotient", "--ring", "zmod:7", "--subgroup", "1,3"]).0, 2);
    assert_eq!(run(&["decompose", "--padic", "4"]).0, 2);
    assert_eq!(run(&["decompose", &corpus("sign.hyp")]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn counterexamples_report_the_probe_values() {
    let (code, report, _, _) = run(&["counterexamples", "--format", "json"]);
    assert_eq!(code, 0);
    let report = report.unwrap();
    let probe = report.checks.iter().find(|d| d.name == "convolution: (fg)h != f(gh)").unwrap();
    assert_eq!(probe.verdict, Verdict::Pass);
    assert!(probe.details.contains("left = -8, right = -6"), "{}", probe.details);
    let anti = report.checks.iter().find(|d| d.name == "cone: antisymmetry fails").unwrap();
    assert_eq!(anti.details, "not antisymmetric");
}

#[test]
fn json_output_round_trips() {
    let (_, report, out, _) = run(&["--format", "json", "check", &corpus("sign.hyp")]);
    let parsed = Report::from_json(&out).unwrap();
    assert_eq!(parsed, report.unwrap());
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["tool_version"].is_string());
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "pass"));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["check", "CORPUS/valuation.hyp"],
        vec!["decompose", "--padic", "3", "--samples", "500", "--seed", "7"],
        vec!["counterexamples", "--samples", "500"],
    ] {
        let args: Vec<String> = args.iter().map(|a| a.replace("CORPUS/", &corpus(""))).collect();
        let args: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let a = run(&args).1.unwrap();
        let mut with_jobs = args.clone();
        with_jobs.extend(["--jobs", "1"]);
        let b = run(&with_jobs).1.unwrap();
        assert_eq!(a.deterministic_json(), b.deterministic_json(), "{args:?}");
    }
}

#[test]
fn quotient_text_rechecks_clean() {
    let (code, report, out, _) = run(&["quotient", "--ring", "zmod:5", "--subgroup", "1,4"]);
    assert_eq!(code, 0);
    assert!(out.contains("table: 1+1 = {0, 2}"));
    assert!(out.contains("table: 1+2 = {1, 2}"));
    assert!(out.contains("table: 2+2 = {0, 1}"));
    let orbits = report.unwrap().checks.into_iter().find(|d| d.name == "orbits").unwrap();
    assert_eq!(orbits.details, "{0} {1, 4} {2, 3}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.hyp");
    std::fs::write(&path, &out).unwrap();
    let (code, report, _, err) = run(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(report.unwrap().checks.len(), 5);
}

#[test]
fn convolve_file_matches_builtin_example() {
    let (code, _, out, _) = run(&["convolve", &corpus("convolution.hyp")]);
    assert_eq!(code, 1);
    let (code2, _, builtin, _) = run(&["convolve"]);
    assert_eq!(code2, 1);
    let products = |s: &str| s.lines().take(4).map(String::from).collect::<Vec<_>>();
    assert_eq!(products(&out), products(&builtin));
    assert_eq!(products(&out)[2], "(fg)h = (0: -2, 1: -8, -1: 0)");
    assert_eq!(products(&out)[3], "f(gh) = (0: -2, 1: -6, -1: -2)");
    // Reordering the maps is still a valid request.
    let (_, _, out, _) = run(&["convolve", &corpus("convolution.hyp"), "--functions", "h,g,f"]);
    assert!(out.starts_with("hg = "));
    assert_eq!(run(&["convolve", &corpus("convolution.hyp"), "--functions", "f,g,k"]).0, 2);
}

#[test]
fn decompose_file_reports_factorisation() {
    let (code, report, out, _) = run(&["decompose", &corpus("valuation.hyp")]);
    assert_eq!(code, 0);
    assert!(out.contains("w: value group of order 1"));
    let names: Vec<String> = report.unwrap().checks.into_iter().map(|d| d.name).collect();
    assert!(names.iter().any(|n| n == "w: w = h ∘ v"));
    assert!(names.iter().any(|n| n == "w: O_v = O_w"));
}

#[test]
fn enumerate_emits_parseable_catalog() {
    let (code, report, out, _) = run(&["enumerate", "--order", "3", "--emit"]);
    assert_eq!(code, 0);
    assert!(report.unwrap().checks[0].details.starts_with("10 entries"));
    let doc = hyperkit::dsl::parse(&out).unwrap();
    assert_eq!(doc.blocks.len(), 10);
    let (_, report, _, _) = run(&["enumerate", "--order", "3", "--kind", "hyperfields"]);
    assert!(report.unwrap().checks[0].details.starts_with("5 entries"));
    let (code, report, _, _) = run(&["enumerate", "--order", "4", "--max-nodes", "10"]);
    assert_eq!(code, 1, "a truncated catalog is not a pass");
    assert!(report.unwrap().checks[0].details.ends_with("exhaustive: false"));
}
