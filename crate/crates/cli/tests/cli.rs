use std::path::Path;
use std::process::{Command, Output};

fn jellium(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jellium")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = jellium(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn jellium_sample_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        ok(&["sample", "--model", "jellium", "--measure", "circle:1", "--n", "50", "--seed", "7", "-o", p(path)]);
    }
    let text = std::fs::read_to_string(&a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re,im");
    assert_eq!(lines.len(), 51);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(a.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["schema_version"], 1);
    assert_eq!(meta["n"], 50);
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["measure"]["name"], "circle");
    assert!(meta["toolkit_version"].is_string());
}

#[test]
fn kac_sample_reports_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kac.csv");
    ok(&["sample", "--model", "poly_zeros", "--measure", "circle:1", "--n", "200", "--seed", "3", "-o", p(&out)]);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 201);
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    let report = &meta["root_report"];
    assert_eq!(report["roots"], 200);
    assert_eq!(report["converged"], true);
    assert!(report["max_backward_error"].as_f64().unwrap() < 1e-10);
    assert_eq!(meta["model"], "poly_zeros");
}

#[test]
fn sampling_requires_a_seed() {
    let out = jellium(&["sample", "--measure", "circle:1", "--n", "5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(&config, "seed = 7\nn = 12\n[measure]\nname = \"uniform_disk\"\nparams = { radius = 2.0 }\n").unwrap();
    let out = dir.path().join("pts.csv");
    ok(&["sample", "--config", p(&config), "--n", "9", "-o", p(&out)]);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 10);
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["measure"]["params"]["radius"], 2.0);
}

#[test]
fn campaign_writes_one_value_per_replica() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("max.csv");
    let args = ["sample", "--measure", "fubini_study", "--n", "10", "--seed", "1", "--replicas", "64", "--statistic", "max_mod"];
    let mut with_out = args.to_vec();
    with_out.extend(["-o", p(&out)]);
    ok(&with_out);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("value"));
    assert_eq!(text.lines().count(), 65);
    let single = Command::new(env!("CARGO_BIN_EXE_jellium"))
        .args(&with_out)
        .env("JELLIUM_THREADS", "1")
        .output()
        .unwrap();
    assert!(single.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
}

#[test]
fn cdf_tables() {
    let out = ok(&["cdf", "--kind", "bergman_max_outside", "--radius", "1", "--t-min", "1", "--t-max", "3", "--points", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (t, f) = l.split_once(',').unwrap();
            (t.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    assert_eq!(text.lines().next(), Some("t,F"));
    let at2 = rows.iter().find(|r| r.0 == 2.0).unwrap().1;
    assert!((at2 - 0.68854).abs() < 5e-6);
    assert!(rows.windows(2).all(|w| w[0].1 <= w[1].1));

    let out = ok(&["cdf", "--kind", "exact_max", "--measure", "circle:1", "--n", "1", "--t-min", "1", "--t-max", "4", "--points", "7"]);
    for line in String::from_utf8(out.stdout).unwrap().lines().skip(1) {
        let (t, f) = line.split_once(',').unwrap();
        let (t, f): (f64, f64) = (t.parse().unwrap(), f.parse().unwrap());
        assert!((f - (1.0 - 0.5 / (t * t))).abs() < 1e-10, "{t}: {f}");
    }

    assert!(!jellium(&["cdf", "--kind", "bergman_min_disk", "--radius", "-1", "--t-min", "0.1", "--t-max", "0.5"]).status.success());
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = jellium(&["verify", "no-such-scenario"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown scenario"));

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("ginibre.json");
    ok(&["verify", "ginibre", "--report", p(&report)]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["scenario"], "ginibre");
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"][0]["threshold"], 1e-8);

    let report = dir.path().join("weyl.json");
    ok(&["verify", "weyl", "--replicas", "300", "--report", p(&report)]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["checks"][0]["threshold"].is_number());
    assert_eq!(v["binning"]["bins"], 40);
    let svg = std::fs::read_to_string(report.with_extension("svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
}

#[test]
fn plots() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    std::fs::write(&pts, "re,im\n0,1\n-1,0.5\n2,-2\n").unwrap();
    let svg = String::from_utf8(ok(&["plot", p(&pts)]).stdout).unwrap();
    assert_eq!(svg.matches("<circle").count(), 3);
    assert_eq!(svg, String::from_utf8(ok(&["plot", p(&pts)]).stdout).unwrap());

    let values = dir.path().join("v.csv");
    let body: String = (1..200).map(|i| format!("{}\n", 0.01 * i as f64)).collect();
    std::fs::write(&values, format!("value\n{body}")).unwrap();
    let svg = String::from_utf8(ok(&["plot", p(&values), "--reference", "bergman_min_disk:3"]).stdout).unwrap();
    assert_eq!(svg.matches("<rect").count(), 2 + 40);
    let poly = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(poly.split_whitespace().count(), 400);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "re,im\n1,x\n").unwrap();
    assert!(!jellium(&["plot", p(&bad)]).status.success());
}
