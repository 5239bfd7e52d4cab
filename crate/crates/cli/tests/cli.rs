use std::fs;
use std::process::{Command, Output};

fn msldpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msldpc"))
        .args(args)
        .env_remove("MSLDPC_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn catalog_lists_ten_codes() {
    let o = msldpc(&["catalog"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    let fields = |name: &str| -> Vec<String> {
        let row = rows.iter().find(|r| r.starts_with(name)).unwrap();
        row.split_whitespace().map(String::from).collect()
    };
    assert_eq!(fields("93_47")[4], "8");
    assert_eq!(fields("511_259")[4], "13");
}

#[test]
fn construct_seven_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.code");
    let o = msldpc(&[
        "construct",
        "--n",
        "7",
        "--cosets",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("n=7 k=3 row_weight=3 d_min=4 orthogonal=yes"));
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "n=7\nk=3\ncosets=1\nu=16\ndmin=4\n"
    );
}

#[test]
fn construct_warns_when_not_orthogonal() {
    let o = msldpc(&["construct", "--n", "21", "--cosets", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("orthogonal=no"));
    assert!(stderr(&o).contains("warning: parity checks are not orthogonal"));
}

#[test]
fn construct_rejects_even_length() {
    let o = msldpc(&["construct", "--n", "4", "--cosets", "1"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("odd"));
}

#[test]
fn construct_search_finds_63_37() {
    let dir = tempfile::tempdir().unwrap();
    let o = msldpc(&[
        "construct",
        "--n",
        "63",
        "--search",
        "8",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("n=63 k=37 row_weight=8 d_min=9 orthogonal=yes"));
    let files = fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, stdout(&o).lines().count() - 1);
}

#[test]
fn out_dir_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_msldpc"))
        .args(["construct", "--n", "7", "--cosets", "1"])
        .env("MSLDPC_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("7_3.code").exists());
}

#[test]
fn simulate_sweep_writes_six_rows_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = msldpc(&[
            "simulate",
            "--code",
            "63_37",
            "--decoder",
            "bp",
            "--ebno",
            "1.5..4.0:0.5",
            "--seed",
            "1",
            "--min-errors",
            "5",
            "--max-frames",
            "2000",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read_to_string(path).unwrap()
    };
    let a = run("a.csv");
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], msldpc::simchan::CSV_HEADER);
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("1.5,"));
    assert!(lines[6].starts_with("4,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",bp,0,0,1")));
    assert_eq!(a, run("b.csv"));
    let meta = fs::read_to_string(dir.path().join("a.meta")).unwrap();
    assert!(meta.contains("max_iter=50") && meta.contains("seed=1"));
}

#[test]
fn simulate_modified_from_code_file() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("c.code");
    assert!(msldpc(&[
        "construct",
        "--n",
        "21",
        "--cosets",
        "3,7",
        "--out",
        code.to_str().unwrap()
    ])
    .status
    .success());
    let o = msldpc(&[
        "simulate",
        "--spec",
        code.to_str().unwrap(),
        "--decoder",
        "modbp",
        "--psi",
        "2",
        "--trials",
        "5",
        "--ebno",
        "3.0",
        "--min-errors",
        "3",
        "--max-frames",
        "500",
        "--seed",
        "9",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(
        rows[1].starts_with("3,") && rows[1].ends_with(",modbp,2,5,9"),
        "{}",
        rows[1]
    );
}

#[test]
fn simulate_unwritable_output_fails() {
    let o = msldpc(&[
        "simulate",
        "--code",
        "21_11",
        "--ebno",
        "3",
        "--max-frames",
        "10",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("cannot create"));
}

#[test]
fn simulate_rejects_bad_selectors() {
    assert!(!msldpc(&["simulate", "--ebno", "2"]).status.success());
    assert!(!msldpc(&["simulate", "--code", "64_1", "--ebno", "2"])
        .status
        .success());
    assert!(!msldpc(&["simulate", "--code", "63_37", "--ebno", "2..1:1"])
        .status
        .success());
}

#[test]
fn help_lists_every_flag() {
    let help = stdout(&msldpc(&["simulate", "--help"]));
    for flag in [
        "--code",
        "--spec",
        "--n",
        "--cosets",
        "--decoder",
        "--psi",
        "--trials",
        "--max-iter",
        "--pool-size",
        "--pool-order",
        "--pool-seed",
        "--clip",
        "--selection",
        "--stop",
        "--early-stop",
        "--ebno",
        "--min-errors",
        "--max-frames",
        "--seed",
        "--workers",
        "--progress-every",
        "--all-zero",
        "--out",
        "--out-dir",
        "MSLDPC_OUT_DIR",
    ] {
        assert!(help.contains(flag), "{flag} missing from help");
    }
}
