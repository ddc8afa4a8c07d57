use std::path::PathBuf;
use std::process::{Command, Output};

fn idamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idamp")).args(args).env_remove("IDAMP_SEED").output().unwrap()
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn run_csv_and_json() {
    let csv = stdout(&idamp(&["run", &scenario("hom-beamsplitter")]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("final,class,amp_re,amp_im,probability"));
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.contains("p:1 q:1,boson,0.0,0.0,0.0\n"));

    let json = stdout(&idamp(&["run", &scenario("hom-beamsplitter"), "--output", "json"]));
    let rows: serde_json::Value = serde_json::from_str(&json).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0]["class"], "boson");
    assert_eq!(rows[0]["final"], serde_json::json!({"p": 2}));
    assert!(rows[2]["amplitude"].is_null());
}

#[test]
fn run_class_filter() {
    let csv = stdout(&idamp(&["run", &scenario("three-particle-tritter"), "--classes", "fermion,dist"]));
    assert!(!csv.contains(",boson,"));
    assert_eq!(csv.lines().count(), 1 + 2 * 10);
    assert!(!idamp(&["run", &scenario("hom-beamsplitter"), "--classes", "anyon"]).status.success());
}

#[test]
fn run_reports_invalid_files() {
    let dir = std::env::temp_dir().join(format!("idamp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    let text = std::fs::read_to_string(scenario("hom-beamsplitter")).unwrap().replace("\"particle-count\"", "\"particles\"");
    std::fs::write(&bad, text).unwrap();
    let out = idamp(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("particles"));
    assert!(!idamp(&["run", dir.join("missing.json").to_str().unwrap()]).status.success());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_table_and_json() {
    let table = stdout(&idamp(&["verify"]));
    assert!(table.starts_with("check"));
    assert!(table.trim_end().ends_with("0 failed"));

    let json = stdout(&idamp(&["verify", "--seed", "3", "--output", "json"]));
    let reports: serde_json::Value = serde_json::from_str(&json).unwrap();
    let reports = reports.as_array().unwrap();
    assert!(reports.iter().all(|r| r["pass"] == true));
    assert!(reports.iter().any(|r| r["check-name"] == "factorization/fermion"));
}

#[test]
fn verify_seed_from_environment() {
    let flag = stdout(&idamp(&["verify", "--seed", "7", "--output", "json"]));
    let env = Command::new(env!("CARGO_BIN_EXE_idamp"))
        .args(["verify", "--output", "json"])
        .env("IDAMP_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(stdout(&env), flag);
    // the flag wins over the environment
    let both = Command::new(env!("CARGO_BIN_EXE_idamp"))
        .args(["verify", "--seed", "7", "--output", "json"])
        .env("IDAMP_SEED", "8")
        .output()
        .unwrap();
    assert_eq!(stdout(&both), flag);
}

#[test]
fn verify_fails_under_impossible_tolerance() {
    let out = idamp(&["verify", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn sample_counts() {
    let out = stdout(&idamp(&["sample", &scenario("hom-beamsplitter"), "--draws", "1000", "--seed", "1", "--class", "fermion"]));
    assert_eq!(out, "final,count\np:2,0\np:1 q:1,1000\nq:2,0\n");
}

#[test]
fn bench_rows() {
    let out = stdout(&idamp(&["bench", "--max-n", "5", "--reps", "2"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,median_ns,oracle_checked");
    assert_eq!(lines.len(), 6);
    assert!(lines[5].starts_with("5,") && lines[5].ends_with(",true"));
    assert!(!idamp(&["bench", "--max-n", "30"]).status.success());
}
