use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ffgaps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffgaps"))
        .args(args)
        .env_remove("FQ_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = ffgaps(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn example5_default_report() {
    let out = ffgaps(&["example5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("count(7..9) = 104; tuple size 105; bound 2048"), "{text}");
    assert!(text.contains("max pairwise norm difference\t2048"));
    assert!(text.contains("degrees after multiplying by g\t8..11"));
}

#[test]
fn example5_other_fields() {
    let v = json(&["example5", "--q", "3", "--g", "t", "--json"]);
    assert_eq!(v["bound"], "177147");
    assert_eq!(v["bound_holds"], true);
    let v = json(&["example5", "--q", "2", "--g", "t^2+t", "--json"]);
    assert_eq!(v["bound"], "4096");
    assert_eq!(v["max_gap"], "4096");
}

#[test]
fn field_description() {
    let v = json(&["field", "--q", "9", "--json", "--elements"]);
    assert_eq!(v["characteristic"], 3);
    assert_eq!(v["unit_order"], 8);
    assert_eq!(v["elements"].as_array().unwrap().len(), 9);
    assert_eq!(stdout(&ffgaps(&["field", "--q", "7"])).lines().count(), 6);
}

#[test]
fn factor_emits_json_lines() {
    let out = ffgaps(&["factor", "--q", "3", "t^3-t", "2*t^2+2"]);
    assert!(out.status.success());
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["factors"].as_array().unwrap().len(), 3);
    assert_eq!(lines[1]["unit"], "2");
    assert_eq!(lines[1]["irreducible"], true);
}

#[test]
fn symbol_methods_and_exit_codes() {
    let v = json(&["symbol", "--q", "5", "--d", "4", "t+1", "t^2+2", "--json"]);
    assert_eq!(v["exp"], v["reciprocity"]);
    let v = json(&["symbol", "--q", "3", "--d", "2", "t", "t^2+1", "--method", "reciprocity", "--json"]);
    assert!(v["exp"].is_null());
    assert_eq!(ffgaps(&["symbol", "--q", "5", "--d", "4", "t", "t^2"]).status.code(), Some(2));
    assert_eq!(ffgaps(&["symbol", "--q", "5", "--d", "3", "t", "t+1"]).status.code(), Some(2));
    assert_eq!(ffgaps(&["symbol", "--q", "5"]).status.code(), Some(2));
}

#[test]
fn budget_exceeded_exits_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_ffgaps"))
        .args(["tuple", "build", "--q", "2", "--k", "105", "--g", "t"])
        .env("FQ_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn primroot_commands() {
    let v = json(&["primroot", "count", "--q", "2", "--n", "4", "--json"]);
    assert_eq!(v["brute_force"], 2);
    let out = ffgaps(&["primroot", "scan", "--q", "2", "--lo", "3", "--hi", "4"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("degree\tprime\tgap_norm"));
    assert_eq!(text.lines().count(), 5);
    let v = json(&["primroot", "check", "--q", "2", "--g", "t", "--p", "t^4+t^3+t^2+t+1", "--json"]);
    assert_eq!(v["order"], "5");
    assert_eq!(v["primitive"], false);
}

#[test]
fn tuple_commands() {
    let v = json(&["tuple", "build", "--q", "2", "--k", "105", "--g", "t", "--json"]);
    assert_eq!(v["k"], 105);
    assert_eq!(v["max_gap_norm"], "2048");
    let v = json(&["tuple", "check", "--q", "2", "t", "t+1", "--json"]);
    assert_eq!(v["admissible"], false);
}

#[test]
fn genus_commands() {
    let g = |args: &[&str]| json(args)["genus"].as_u64().unwrap();
    assert_eq!(g(&["genus", "kummer", "--q", "7", "--a", "t", "--r", "3", "--json"]), 0);
    assert_eq!(g(&["genus", "kummer", "--q", "7", "--a", "t^2+t", "--r", "3", "--json"]), 1);
    assert_eq!(g(&["genus", "cyclotomic", "--q", "5", "--M", "t", "--json"]), 0);
    assert_eq!(
        g(&["genus", "castelnuovo", "--n1", "2", "--g1", "1", "--n2", "3", "--g2", "2", "--json"]),
        10
    );
    assert_eq!(g(&["genus", "compositum", "--q", "7", "--r", "3", "--M", "t", "--json"]), 10);
    assert_eq!(ffgaps(&["genus", "kummer", "--q", "7", "--a", "t^3", "--r", "3"]).status.code(), Some(2));
}

#[test]
fn density_report() {
    let v = json(&["density", "--q", "2", "--l", "11", "--json"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["r"], 23);
    assert_eq!(rows[0]["observed"], 8);
    assert_eq!(rows[0]["predicted"], "2048/253");
    assert_eq!(v["r_sum"]["bound"], "2/11");
    assert_eq!(ffgaps(&["density", "--q", "3", "--l", "3", "--r", "2"]).status.code(), Some(2));
}

#[test]
fn pipeline_minimal_config() {
    let cfg = write_tmp("minimal.cfg", "q = 2\nk = 1\nl = 5\n");
    let v = json(&["pipeline", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v["result"]["alpha_verification"]["passed"], true);
    assert_eq!(v["result"]["sieve"]["sums"]["class_size"], 16);
    assert_eq!(v["manifest"]["config"]["q"], "2");
    let digest = v["manifest"]["output_sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
}

#[test]
fn pipeline_rejects_bad_configs() {
    for (name, text) in [
        ("theta.cfg", "q = 2\nk = 1\nl = 5\ntheta = 0.3\n"),
        ("even.cfg", "q = 2\nk = 1\nl = 6\n"),
        ("unknown.cfg", "q = 2\nbogus = 1\n"),
    ] {
        let cfg = write_tmp(name, text);
        let out = ffgaps(&["pipeline", "--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }
    let out = ffgaps(&["pipeline", "--config", "/nonexistent/x.cfg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sieve_run_is_reproducible() {
    write_tmp("h.txt", "t^2\n# comment\nt^3\n");
    let cfg = write_tmp(
        "sieve.cfg",
        "q = 3\nk = 2\nl = 7\ntheta = 1/5\ng = t\ntuple_file = h.txt\nF = 1 - x1 - x2\n",
    );
    let a = json(&["sieve", "run", "--config", cfg.to_str().unwrap()]);
    let b = json(&["sieve", "run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["manifest"]["output_sha256"], b["manifest"]["output_sha256"]);
    assert_eq!(a["result"]["main_terms"]["i_k"], "1/12");
    assert_eq!(a["result"]["tuple"]["elements"][1], "t^3");
}

#[test]
fn manifest_file_is_written() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests-manifest.json");
    let _ = std::fs::remove_file(&path);
    let out = ffgaps(&["genus", "cyclotomic", "--q", "3", "--M", "t", "--manifest", path.to_str().unwrap()]);
    assert!(out.status.success());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(m["command_line"].as_array().unwrap().len() > 2);
    assert_eq!(m["versions"]["ffgaps"], env!("CARGO_PKG_VERSION"));
}
