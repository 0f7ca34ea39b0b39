use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use phasefkg_cli::config::{ExperimentConfig, Kind};
use phasefkg_cli::validate::{resolve, validate_text};
use serde_json::Value;
use sha2::{Digest, Sha256};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phasefkg"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_cli(args: &[&str], threads: Option<&str>) -> Output {
    let mut c = bin();
    c.args(args);
    if let Some(t) = threads {
        c.env("PHASEFKG_THREADS", t);
    }
    c.output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("cfg.toml");
    fs::write(&p, text).unwrap();
    p
}

fn messages(text: &str) -> Vec<String> {
    validate_text(text).into_iter().map(|d| d.to_string()).collect()
}

#[test]
fn list_experiments_names_every_kind() {
    let out = run_cli(&["list-experiments"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for k in Kind::ALL {
        assert!(text.contains(k.name()), "{k} missing");
    }
}

#[test]
fn shipped_configs_validate() {
    let mut seen = 0;
    for entry in fs::read_dir(configs_dir()).unwrap() {
        let p = entry.unwrap().path();
        let out = run_cli(&["validate", p.to_str().unwrap()], None);
        assert!(out.status.success(), "{}: {}", p.display(), String::from_utf8_lossy(&out.stderr));
        seen += 1;
    }
    assert_eq!(seen, Kind::ALL.len());
}

#[test]
fn bundle_layout_and_hashes() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("b");
    let cfg = configs_dir().join("defect.toml");
    let out = run_cli(&["run", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["schema_version"], 1);
    let files = manifest["files"].as_array().unwrap();
    let paths: Vec<&str> = files.iter().map(|f| f["path"].as_str().unwrap()).collect();
    assert!(paths.contains(&"summary.json") && paths.contains(&"config.resolved.toml") && paths.contains(&"data/defect.csv"));
    for f in files {
        let bytes = fs::read(out_dir.join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
        assert_eq!(f["bytes"].as_u64().unwrap(), bytes.len() as u64);
    }
    let summary: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["approximate"], true);
    let csv = fs::read_to_string(out_dir.join("data/defect.csv")).unwrap();
    assert!(csv.starts_with("# APPROXIMATE: "));
    // The echoed config has every default filled in and parses back.
    let echoed = ExperimentConfig::parse(&fs::read_to_string(out_dir.join("config.resolved.toml")).unwrap()).unwrap();
    assert_eq!(echoed.run.method, Some(phasefkg_cli::config::DefectMethodChoice::Auto));
    assert!(echoed.run.grid_size.is_some() && echoed.output_dir.is_none());
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    for name in ["coupling", "gcwm-fkg", "ergm-clt"] {
        let cfg = configs_dir().join(format!("{name}.toml"));
        let mut manifests = Vec::new();
        for (i, threads) in ["1", "4", "4"].iter().enumerate() {
            let dir = tmp.path().join(format!("{name}-{i}"));
            let out = run_cli(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()], Some(threads));
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            manifests.push(fs::read_to_string(dir.join("manifest.json")).unwrap());
        }
        assert_eq!(manifests[0], manifests[1], "{name}: 1 vs 4 threads");
        assert_eq!(manifests[1], manifests[2], "{name}: rerun");
    }
}

#[test]
fn seed_override_changes_sampled_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("ergm-sample.toml");
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(run_cli(&["run", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()], None).status.success());
    assert!(run_cli(&["run", cfg.to_str().unwrap(), "--out", b.to_str().unwrap(), "--seed", "99"], None).status.success());
    let trace = |d: &Path| fs::read_to_string(d.join("data/trace.csv")).unwrap();
    assert_ne!(trace(&a), trace(&b));
    let s: Value = serde_json::from_str(&fs::read_to_string(b.join("summary.json")).unwrap()).unwrap();
    assert_eq!(s["seed"], 99);
}

#[test]
fn free_model_has_single_maximizer_at_one_half() {
    let tmp = tempfile::tempdir().unwrap();
    let p = write_config(tmp.path(), "kind = \"gcwm-analyze\"\nseed = 0\n[model]\nbeta = [0.0, 0.0]\nn = 20\n");
    let dir = tmp.path().join("o");
    let out = run_cli(&["run", p.to_str().unwrap(), "--out", dir.to_str().unwrap()], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s: Value = serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    let maxima = s["result"]["strictly_concave_maximizers"].as_array().unwrap();
    assert_eq!(maxima.len(), 1);
    assert!((maxima[0].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(s["result"]["lemma_agree"], true);
}

#[test]
fn validation_diagnostics() {
    let ferro = messages("kind = \"gcwm-analyze\"\nseed = 0\n[model]\nbeta = [0.0, -1.0]\nn = 10\n");
    assert_eq!(ferro, vec!["model.beta: ferromagnetic violation j=2"]);

    // Maximizers near 0.0707 and 0.9293; half the gap is about 0.429.
    let wide = messages("kind = \"gcwm-fkg\"\nseed = 0\n[model]\nbeta = [-3.0, 3.0]\nn = 8\n[run]\neta = 0.45\n");
    assert_eq!(wide.len(), 1, "{wide:?}");
    assert!(wide[0].starts_with("run.eta:") && wide[0].contains("m=0.0707") && wide[0].contains("m=0.9292"), "{wide:?}");

    let eps = messages("kind = \"defect\"\nseed = 0\n[model]\nfamily = \"gcwm\"\nbeta = [-3.0, 3.0]\nn = 8\n[run]\neta = 0.2\nepsilon = 0.2\n");
    assert!(eps.iter().any(|m| m.starts_with("run.epsilon:")), "{eps:?}");

    let grid = messages("kind = \"gcwm-clt\"\nseed = 0\n[model]\nbeta = [-3.0, 3.0]\n[run]\nn_grid = [200, 100]\n");
    assert!(grid.iter().any(|m| m.contains("strictly increasing")), "{grid:?}");

    let wrong_kind = messages("kind = \"gcwm-analyze\"\nseed = 0\n[model]\nbeta = [0.0]\nn = 10\n[run]\npairs = 5\n");
    assert_eq!(wrong_kind, vec!["run.pairs: not used by kind gcwm-analyze"]);

    let unknown = messages("kind = \"gcwm-analyze\"\nseed = 0\n[model]\nbeta = [0.0]\nn = 10\n[run]\nbogus = 1\n");
    assert_eq!(unknown.len(), 1);
    assert!(unknown[0].contains("bogus"), "{unknown:?}");

    let missing = messages("kind = \"bound-eval\"\nseed = 0\n");
    assert_eq!(missing.len(), 3, "{missing:?}");

    let ergm_ferro = messages("kind = \"ergm-analyze\"\nseed = 0\n[model]\nbeta = [0.0, -0.5]\nn = 10\n");
    assert!(ergm_ferro[0].contains("ferromagnetic violation"), "{ergm_ferro:?}");
}

#[test]
fn defaults_are_filled() {
    let cfg = ExperimentConfig::parse("kind = \"coupling\"\nseed = 0\n[model]\nbeta = [0.0, 0.5]\nn = 12\n").unwrap();
    let r = resolve(&cfg).unwrap();
    let run = &r.config.run;
    assert_eq!(run.t, Some(144));
    assert_eq!(run.replicas, Some(500));
    assert_eq!(run.tilt_epsilon, Some(1.0 / 144.0));
    assert_eq!(run.contraction_reps, Some(200_000));
    let eta = run.eta.unwrap();
    assert_eq!(run.epsilon, Some(eta / 2.0));
    assert!(run.pairs.is_none(), "keys outside the kind stay unset");
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_config(tmp.path(), "kind = \"gcwm-analyze\"\nseed = 0\n[model]\nbeta = [0.0, -1.0]\nn = 10\n");
    let out = run_cli(&["validate", bad.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ferromagnetic violation j=2"));
    assert_eq!(run_cli(&["run", bad.to_str().unwrap()], None).status.code(), Some(2));

    // The inner band |m − 1/2| ≤ 0.01 holds no level k/5.
    let empty = tmp.path().join("empty.toml");
    fs::write(&empty, "kind = \"gcwm-fkg\"\nseed = 0\n[model]\nbeta = [0.0, 0.0]\nn = 5\n[run]\neta = 0.15\nepsilon = 0.01\n").unwrap();
    let out = run_cli(&["run", empty.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!tmp.path().join("o").exists());

    let occupied = tmp.path().join("occupied");
    fs::create_dir(&occupied).unwrap();
    fs::write(occupied.join("keep.txt"), "x").unwrap();
    let cfg = configs_dir().join("bound-eval.toml");
    let out = run_cli(&["run", cfg.to_str().unwrap(), "--out", occupied.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(occupied.join("keep.txt").exists());

    let missing = run_cli(&["run", tmp.path().join("nope.toml").to_str().unwrap()], None);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(run_cli(&["run", cfg.to_str().unwrap()], Some("zero")).status.code(), Some(2));
}

#[test]
fn rerun_replaces_previous_bundle() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("o");
    let cfg = configs_dir().join("bound-eval.toml");
    for _ in 0..2 {
        assert!(run_cli(&["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()], None).status.success());
    }
    let leftovers = fs::read_dir(tmp.path()).unwrap().count();
    assert_eq!(leftovers, 1, "staging directories are cleaned up");
}
