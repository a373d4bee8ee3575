use std::path::Path;
use std::process::{Command, Output};

fn grsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grsc")).args(args).env_remove("GRSC_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen_grid(dir: &Path, n: &str) -> String {
    let path = dir.join("g.txt");
    let p = path.to_str().unwrap();
    let o = grsc(&["gen-grid", "--n", n, "--s1", "1", "--s2", "2", "--seed", "3", "--scenario", "A", "--out", p]);
    assert!(o.status.success(), "{o:?}");
    p.to_string()
}

#[test]
fn solve_writes_outputs_and_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_grid(dir.path(), "3");
    let out = dir.path().to_str().unwrap();
    let o = grsc(&["solve", "--instance", &inst, "--variant", "grsc-c", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    for ext in ["csv", "sol", "svg"] {
        let f = dir.path().join(format!("g.GRSC-C.{ext}"));
        assert!(f.exists(), "missing {}", f.display());
    }
    let sol = std::fs::read_to_string(dir.path().join("g.GRSC-C.sol")).unwrap();
    let obj = |text: &str| -> f64 {
        text.lines().find_map(|l| l.strip_prefix("OBJECTIVE ")).unwrap().trim().parse().unwrap()
    };
    let o = grsc(&["oracle", "--instance", &inst, "--variant", "grsc-c"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert_eq!(obj(&sol), obj(&stdout(&o)));
}

#[test]
fn zero_components_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_grid(dir.path(), "4");
    let o = grsc(&["solve", "--instance", &inst, "--k", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("k = 0"));
}

#[test]
fn infeasible_instance_names_protection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inf.txt");
    std::fs::write(
        &path,
        "NODES 3\nEDGES 2\n0 1\n1 2\nCOSTS\n1 1 1\nSPECIES1 1\nSPECIES2 0\nW 0 0 5\nLAMBDA\n10\nPARAMS 1 0 1 1\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let runs = [
        grsc(&["solve", "--instance", p, "--out", dir.path().to_str().unwrap()]),
        grsc(&["oracle", "--instance", p]),
    ];
    for o in runs {
        assert_eq!(o.status.code(), Some(3), "{o:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("protect_1"));
    }
}

#[test]
fn export_lp_has_sections() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_grid(dir.path(), "4");
    let o = grsc(&["export-lp", "--instance", &inst, "--variant", "grsc-b"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let pos: Vec<usize> =
        ["Minimize", "Subject To", "Binaries", "End"].iter().map(|s| text.find(s).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn bench_csv_has_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("runs.csv");
    let o = grsc(&[
        "bench", "--set", "1", "--scale", "5", "--count", "1", "--scenarios", "A", "--k", "1,2",
        "--variant", "grsc,grsc-cb", "--settings", "basic,basic+cp", "--csv", csv.to_str().unwrap(),
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2);
    assert!(text.lines().next().unwrap().starts_with("instance,scenario,variant"));
}
