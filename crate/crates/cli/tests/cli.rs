use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qknot::exact_poly::MultiPoly;
use qknot::jones::jones_fig8;
use qknot::serialize::{from_json, to_json};
use qknot_cli::cache::{JonesCache, LoadError};

fn qknot(args: &[&str], cache: Option<&Path>, cwd: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qknot"));
    cmd.args(args).current_dir(cwd).env_remove("QKNOT_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("QKNOT_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

fn run(args: &[&str]) -> Output {
    let tmp = tempfile::tempdir().unwrap();
    qknot(args, None, tmp.path())
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn jones_fig8_text() {
    let o = run(&["jones", "--knot", "fig8", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "t^-10 + t^10");
}

#[test]
fn jones_json_parses_back() {
    let o = run(&["jones", "--knot", "cable", "--r", "9", "--s", "2", "--n", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let p: MultiPoly = from_json(stdout(&o).trim()).unwrap();
    let text = run(&["jones", "--knot", "cable", "--r", "9", "--s", "2", "--n", "3"]);
    assert_eq!(stdout(&text).trim(), p.to_string());
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        &["jones", "--knot", "cable", "--r", "9", "--s", "1"][..],
        &["aj", "--r", "6", "--s", "3"],
        &["apoly", "--r", "0", "--s", "2"],
        &["jones", "--knot", "cable", "--n", "2"],
        &["degrees", "--bogus"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn aj_9_2_json() {
    let o = run(&["aj", "--r", "9", "--s", "2", "--verify-n", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["proportional"], true);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["regime"], "proven");
    assert_eq!(v["empirical"].as_array().unwrap().len(), 8);
}

#[test]
fn aj_output_is_reproducible() {
    let a = run(&["aj", "--r", "-9", "--s", "2", "--verify-n", "3", "--format", "json"]);
    let b = run(&["aj", "--r", "-9", "--s", "2", "--verify-n", "3", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn aj_inside_band_warns() {
    let o = run(&["aj", "--r", "5", "--s", "2", "--verify-n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("warning: |r| < 4s"));
}

#[test]
fn degree_mismatch_exits_1() {
    let o = run(&["degrees", "--knot", "cable", "--r", "7", "--s", "2", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NO"));
    let o = run(&["degrees", "--knot", "cable", "--r", "9", "--s", "2", "--n-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn annihilator_and_apoly() {
    let o = run(&["annihilator", "--r", "9", "--s", "2", "--verify-n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("L-degree 4") && out.contains("annihilator check n = 1..4: all pass"));
    let o = run(&["apoly", "--knot", "fig8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["provenance"], "fig8");
}

#[test]
fn output_file() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("j.txt");
    let o = qknot(&["jones", "--knot", "fig8", "--n", "2", "-o", out.to_str().unwrap()], None, tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(out).unwrap().trim(), "t^-10 + t^10");
}

#[test]
fn no_cache_writes_without_configuration() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qknot(&["jones", "--knot", "cable", "--r", "9", "--s", "2", "--n", "4"], None, tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 0);
}

#[test]
fn cache_store_load_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cache = JonesCache::at(tmp.path().to_path_buf());
    let v = cache.get(5);
    assert_eq!(v, jones_fig8(5));
    let path = cache.path(5).unwrap();
    let first = fs::read(&path).unwrap();
    let loaded = cache.load(5).unwrap();
    assert_eq!(loaded, v);
    assert_eq!(cache.get(5), v);
    assert_eq!(fs::read(&path).unwrap(), first);
    let reencoded = format!(r#"{{"n":5,"value":{}}}"#, to_json(&loaded));
    assert_eq!(reencoded.into_bytes(), first);
    assert_eq!(cache.load(6), Err(LoadError::Missing));
}

#[test]
fn corrupt_entry_is_recomputed_and_overwritten() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cache = JonesCache::at(tmp.path().to_path_buf());
    let good = cache.get(4);
    let path = cache.path(4).unwrap();
    let canonical = fs::read_to_string(&path).unwrap();
    for bad in [
        "{".to_string(),
        canonical.replace(r#""1"]"#, r#""2"]"#),
        canonical.replace(r#"{"n":4"#, r#"{"n":3"#),
    ] {
        fs::write(&path, &bad).unwrap();
        assert!(matches!(cache.load(4), Err(LoadError::Corrupt(_))), "{bad}");
        assert_eq!(cache.get(4), good);
        assert_eq!(fs::read_to_string(&path).unwrap(), canonical);
    }
}

#[test]
fn binary_uses_and_repairs_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("cache");
    let o = qknot(&["jones", "--knot", "fig8", "--n", "5"], Some(&dir), tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let path = dir.join("fig8_5.json");
    let canonical = fs::read_to_string(&path).unwrap();
    fs::write(&path, "not json").unwrap();
    let o = qknot(&["jones", "--knot", "fig8", "--n", "5"], Some(&dir), tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("discarding cache entry for n = 5"));
    assert_eq!(fs::read_to_string(&path).unwrap(), canonical);
    let flag = tmp.path().join("flag");
    let o = qknot(&["jones", "--knot", "cable", "--r", "13", "--s", "3", "--n", "2", "--cache-dir", flag.to_str().unwrap()], None, tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(flag.join("fig8_4.json").exists());
}

#[test]
fn unusable_cache_directory_degrades() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("plain");
    fs::write(&file, "x").unwrap();
    let o = qknot(&["jones", "--knot", "fig8", "--n", "3"], Some(&file), tmp.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("continuing in memory"));
    assert_eq!(stdout(&o).trim(), jones_fig8(3).to_string());
}
