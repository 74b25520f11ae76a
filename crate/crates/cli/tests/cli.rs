use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn frontlab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_frontlab"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("FRONTLAB_THREADS", t),
        None => cmd.env_remove("FRONTLAB_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = repo_root().join("schemas").join(format!("{name}.schema.json"));
    let s: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc:#}");
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_config(dir: &Path, name: &str, doc: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    p
}

fn small_sim(out: &Path) -> Value {
    json!({
        "grid": 64,
        "alpha": 1.0,
        "dt": 1e-3,
        "t_end": 0.02,
        "initial_data": { "kind": "two_cosine" },
        "output_every": 5,
        "output_dir": out.to_str().unwrap()
    })
}

#[test]
fn shipped_configs_match_schemas() {
    let root = repo_root().join("configs");
    for (file, name) in [
        ("two_cosine.json", "simulation_config"),
        ("sech_squared.json", "simulation_config"),
        ("consistency_euler.json", "consistency_config"),
        ("consistency_sqg.json", "consistency_config"),
        ("conservation.json", "conservation_spec"),
    ] {
        assert_valid(&schema(name), &read_json(&root.join(file)));
    }
}

#[test]
fn dry_run_writes_only_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dry");
    let cfg = repo_root().join("configs/two_cosine.json");
    let o = frontlab(
        &["simulate", cfg.to_str().unwrap(), "--dry-run", "--output-dir", out.to_str().unwrap()],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let files: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files, vec!["manifest.json"]);
    let m = read_json(&out.join("manifest.json"));
    assert_valid(&schema("manifest"), &m);
    assert_eq!(m["stop_reason"], "dry_run");
    assert_eq!(m["config"]["grid"], 16384);
}

#[test]
fn malformed_config_is_a_usage_error_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let mut doc = small_sim(&out);
    doc["viscosity"] = json!({ "kind": "exp_filter", "strenght": 36.0 });
    let p = write_config(dir.path(), "bad.json", &doc);
    let o = frontlab(&["simulate", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("strenght"), "{}", stderr(&o));
    assert!(!out.exists());

    doc = small_sim(&out);
    doc["initial_data"] = json!({ "kind": "single_mode", "parameters": [1, 0.1] });
    let p = write_config(dir.path(), "bad2.json", &doc);
    let o = frontlab(&["simulate", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());

    let o = frontlab(&["simulate", "/nonexistent/config.json"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_writes_reproducible_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<PathBuf> = ["a", "b"].iter().map(|n| dir.path().join(n)).collect();
    for out in &runs {
        let p = write_config(dir.path(), "sim.json", &small_sim(out));
        let o = frontlab(&["simulate", p.to_str().unwrap()], Some("2"));
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).contains("stop reason   completed"));
    }
    let diag = fs::read_to_string(runs[0].join("diagnostics.csv")).unwrap();
    assert!(diag.starts_with("t,H,P,strip_width,max_slope,Hs_1,Hs_2\n"));
    assert_eq!(diag.lines().count(), 6);
    let snap = fs::read_to_string(runs[0].join("snapshot_000004.csv")).unwrap();
    assert!(snap.starts_with("# t=2.0000000000000000e-2\nx,phi\n"), "{}", &snap[..60]);
    let spec = fs::read_to_string(runs[0].join("spectrum_000000.csv")).unwrap();
    assert!(spec.starts_with("k,re,im\n"));
    for f in ["diagnostics.csv", "snapshot_000002.csv", "spectrum_000004.csv"] {
        assert_eq!(fs::read(runs[0].join(f)).unwrap(), fs::read(runs[1].join(f)).unwrap(), "{f}");
    }
    let m = read_json(&runs[0].join("manifest.json"));
    assert_valid(&schema("manifest"), &m);
    assert_eq!(m["threads"], 2);
    assert_eq!(m["stop_reason"], "completed");
    let manifests = fs::read_dir(&runs[0])
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".json"))
        .count();
    assert_eq!(manifests, 1);
}

#[test]
fn numerical_abort_exits_2_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("boom");
    let mut doc = small_sim(&out);
    doc["initial_data"] = json!({ "kind": "single_mode", "parameters": [3, 1000.0, 0.0] });
    doc["viscosity"] = json!({ "kind": "none" });
    doc["dt"] = json!(0.01);
    doc["t_end"] = json!(1.0);
    let p = write_config(dir.path(), "boom.json", &doc);
    let o = frontlab(&["simulate", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let m = read_json(&out.join("manifest.json"));
    assert_valid(&schema("manifest"), &m);
    assert_eq!(m["stop_reason"], "aborted");
    assert!(m["detail"].as_str().unwrap().contains("non-finite"));
}

#[test]
fn consistency_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["consistency_euler.json", "consistency_sqg.json"] {
        let out = dir.path().join(name);
        let cfg = repo_root().join("configs").join(name);
        let o = frontlab(
            &["consistency", cfg.to_str().unwrap(), "--output-dir", out.to_str().unwrap()],
            None,
        );
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let csv = fs::read_to_string(out.join("consistency.csv")).unwrap();
        assert!(csv.starts_with("amplitude,discrepancy,nonlinear_norm,relative,slope\n"));
        let m = read_json(&out.join("manifest.json"));
        assert_valid(&schema("manifest"), &m);
        let slope = m["outcomes"]["slope"].as_f64().unwrap();
        assert!((slope - 2.0).abs() < 0.1, "{name}: {slope}");
    }
}

#[test]
fn consistency_with_one_amplitude_is_insufficient() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = read_json(&repo_root().join("configs/consistency_euler.json"));
    doc["amplitudes"] = json!([0.01]);
    doc["output_dir"] = json!(dir.path().join("c").to_str().unwrap());
    let p = write_config(dir.path(), "one.json", &doc);
    let o = frontlab(&["consistency", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least 4"), "{}", stderr(&o));
}

#[test]
fn analyze_examples() {
    let o = frontlab(&["analyze", "nls", "--alpha", "1", "--k", "2"], None);
    assert!(o.status.success());
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let cells: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(cells[1], "-1");
    assert_eq!(cells[4], "true");

    let o = frontlab(&["analyze", "constants", "--s", "3"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("C0(3)              80.8888888889"), "{text}");
    assert!(text.contains("s0                 0.636504424971"), "{text}");

    let o = frontlab(&["analyze", "stokes", "--alpha", "2", "--k", "1", "--psi1", "0.1"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("psi3               0 + 0i"));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("disp.csv");
    let o = frontlab(
        &["analyze", "dispersion", "--alpha", "2", "--k", "1,2", "--csv", csv.to_str().unwrap()],
        None,
    );
    assert!(o.status.success());
    let text = fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next(), Some("k,b,omega0,sigma2"));
    assert!(text.contains("2.0000000000000000e0,2.5000000000000000e-1,5.0000000000000000e-1"));

    let o = frontlab(&["analyze", "tau", "--tau0", "4", "--E0", "0", "--M", "2"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("none before"));
}

#[test]
fn analyze_domain_errors_name_the_parameter() {
    let o = frontlab(&["analyze", "nls", "--alpha", "2", "--k", "1"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--k 1"));
    let o = frontlab(&["analyze", "dispersion", "--alpha", "2.5", "--k", "1"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--alpha 2.5"));
    let o = frontlab(&["analyze", "constants", "--s", "-1"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--s -1"));
    let o = frontlab(&["analyze", "tau", "--tau0", "2", "--E0", "1", "--M", "2"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("tau0"));
}

#[test]
fn usage_errors() {
    assert_eq!(frontlab(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(frontlab(&["verify", "everything"], None).status.code(), Some(1));
    assert_eq!(frontlab(&["--help"], None).status.code(), Some(0));
    let o = frontlab(&["analyze", "constants"], Some("zero"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FRONTLAB_THREADS"));
    assert_eq!(frontlab(&["analyze", "constants"], Some("0")).status.code(), Some(1));
}

#[test]
fn verify_appendix_passes_at_s_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("app");
    let o = frontlab(&["verify", "appendix", "--s", "1.0", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("(x, y) = (0.333333333333, 0.333333333333)"));
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["passed"], true);
    assert_valid(&schema("manifest"), &read_json(&out.join("manifest.json")));
    let csv = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(csv.starts_with("bound,parameter,samples,worst_ratio,passed,seeds\nf_sup,"));
}

#[test]
fn verify_kernels_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k");
    let o = frontlab(
        &["verify", "kernels", "--alpha", "1", "--kmax", "1000", "--trials", "20000", "--seed", "7", "--out", out.to_str().unwrap()],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let m = read_json(&out.join("manifest.json"));
    assert_valid(&schema("manifest"), &m);
    assert_eq!(m["seeds"], json!([7, 7]));
    let report = read_json(&out.join("report.json"));
    assert!(report["entries"][0]["worst_ratio"].as_f64().unwrap() <= 5.0);
}

#[test]
fn verify_failure_exits_3_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "grid": 32,
        "alpha": 1.0,
        "dt": 0.01,
        "t_end": 0.5,
        "initial_data": { "kind": "fourier_list", "parameters": [1, 0.2, 0.0, 2, 0.0, 0.1] },
        "p_tolerance": 1e-30
    });
    assert_valid(&schema("conservation_spec"), &doc);
    let p = write_config(dir.path(), "cons.json", &doc);
    let out = dir.path().join("c");
    let o = frontlab(
        &["verify", "conservation", "--config", p.to_str().unwrap(), "--out", out.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("momentum_drift"), "{}", stderr(&o));
    assert_eq!(read_json(&out.join("manifest.json"))["stop_reason"], "failed");
}

#[test]
fn verify_conservation_default_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let cfg = repo_root().join("configs/conservation.json");
    let o = frontlab(
        &["verify", "conservation", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report = read_json(&out.join("report.json"));
    assert!(report["details"]["coarse"]["h_max"].as_f64().unwrap() <= 1e-8);
    assert!(report["details"]["coarse"]["p_max"].as_f64().unwrap() <= 1e-10);
}
