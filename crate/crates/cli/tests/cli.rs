use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lacunary(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lacunary"))
        .current_dir(dir)
        .env_remove("LACUNARY_OUT")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn generate_then_analyze_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = lacunary(d, &["generate", "--schedule", "t2_2", "--c", "1", "--n", "100000", "--seed", "7", "--out", "g"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["set.json", "blocks.csv", "summary.csv", "config.toml"] {
        assert!(d.join("g").join(f).exists(), "{f}");
    }
    // The persisted config reproduces the set.
    let o = lacunary(d, &["generate", "--config", "g/config.toml", "--out", "g2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(d.join("g/set.json")).unwrap(), fs::read(d.join("g2/set.json")).unwrap());

    for out in ["a1", "a2"] {
        let o = lacunary(d, &["analyze", "--set", "g/set.json", "--out", out]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (a, b) = (csv_files(&d.join("a1")), csv_files(&d.join("a2")));
    assert_eq!(a.len(), 6);
    assert_eq!(a, b);
    assert!(d.join("a1/mesh.svg").exists());
}

#[test]
fn two_stage_schedule_writes_thinned_set() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["generate", "--schedule", "t2_7", "--c", "0.04", "--tau", "0.04", "--n", "65536", "--seed", "1", "--out", "g"];
    let o = lacunary(tmp.path(), &args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(tmp.path().join("g/thinned.json").exists());
    let blocks = fs::read_to_string(tmp.path().join("g/blocks.csv")).unwrap();
    assert!(blocks.starts_with("config_hash,seed,n,lo,hi,count,thinned"));
}

#[test]
fn usage_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let o = lacunary(tmp.path(), &["generate", "--n", "10"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--schedule"));
    assert_eq!(code(&lacunary(tmp.path(), &["verify", "nosuch"])), 2);
    assert_eq!(code(&lacunary(tmp.path(), &["generate", "--schedule", "t2_2", "--base", "cubes"])), 2);
}

#[test]
fn overflow_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    // The 2^40-th perfect 4th power does not fit in 64 bits.
    let o = lacunary(tmp.path(), &["generate", "--schedule", "t2_2", "--base", "powers:4", "--n", "70000", "--out", "g"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn empty_set_analyzes_gracefully() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("empty.json"), r#"{"name":"empty","schedule":null,"seed":null,"elements":[]}"#).unwrap();
    let o = lacunary(tmp.path(), &["analyze", "--set", "empty.json", "--out", "a"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let fit = fs::read_to_string(tmp.path().join("a/mesh_fit.csv")).unwrap();
    assert!(fit.contains("not fitted"));
}

#[test]
fn oversized_norm_profiles_are_partial() {
    let tmp = tempfile::tempdir().unwrap();
    let elems: Vec<String> = (1..=30u64).map(|k| (1u64 << k).to_string()).collect();
    let json = format!(r#"{{"name":"p","schedule":null,"seed":null,"elements":[{}]}}"#, elems.join(","));
    fs::write(tmp.path().join("p.json"), json).unwrap();
    let o = lacunary(tmp.path(), &["analyze", "--set", "p.json", "--out", "a", "--blocks", "dyadic"]);
    assert_eq!(code(&o), 4);
    assert!(tmp.path().join("a/mesh_fit.csv").exists());
    let fit = fs::read_to_string(tmp.path().join("a/mesh_fit.csv")).unwrap();
    assert!(fit.contains("fitted"));
}

#[test]
fn verify_appends_and_report_renders() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = lacunary(d, &["verify", "lemma2_1", "--s", "3", "--M", "27", "--trials", "500", "--out", "v"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("consistent"));
    let o = lacunary(d, &["verify", "zalcwasser", "--q", "6", "--out", "v"]);
    assert_eq!(code(&o), 0);
    let ledger = fs::read_to_string(d.join("v/ledger.csv")).unwrap();
    assert_eq!(ledger.lines().count(), 3);
    assert!(ledger.lines().skip(1).all(|l| l.split(',').nth(3).is_some_and(|s| s == "1")));

    let o = lacunary(d, &["report", "--ledger", "v/ledger.csv", "--out", "r"]);
    assert_eq!(code(&o), 0);
    assert!(d.join("r/bounds.svg").exists() && d.join("r/index.html").exists());

    fs::write(d.join("v/ledger.csv"), ledger + "not,a,row\n").unwrap();
    let o = lacunary(d, &["report", "--ledger", "v/ledger.csv", "--out", "r2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: skipped ledger line 4"));

    fs::write(d.join("empty.csv"), "").unwrap();
    assert_eq!(code(&lacunary(d, &["report", "--ledger", "empty.csv", "--out", "r3"])), 2);
}

#[test]
fn single_row_ledger_gives_one_plot() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&lacunary(d, &["verify", "lemma1_3", "--out", "v"])), 0);
    assert_eq!(code(&lacunary(d, &["report", "--ledger", "v/ledger.csv", "--out", "r"])), 0);
    let svgs = fs::read_dir(d.join("r")).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg")).count();
    assert_eq!(svgs, 1);
}

#[test]
fn output_directory_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lacunary"))
        .current_dir(tmp.path())
        .env("LACUNARY_OUT", "from_env")
        .args(["verify", "lemma1_3"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(tmp.path().join("from_env/ledger.csv").exists());
}
