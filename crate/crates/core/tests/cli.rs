use std::fs;
use std::path::Path;
use std::process::Command;

use quasi_bp::cli::run;

fn run_ok(args: &[&str]) -> String {
    let mut out = Vec::new();
    let mut argv = vec!["quasi-bp"];
    argv.extend_from_slice(args);
    run(argv, &mut out).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    String::from_utf8(out).unwrap()
}

fn run_err(args: &[&str]) -> String {
    let mut argv = vec!["quasi-bp"];
    argv.extend_from_slice(args);
    run(argv, &mut Vec::new()).expect_err("command should fail").to_string()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

/// File contents without lines that carry wall-clock time.
fn without_timing(p: &str) -> String {
    fs::read_to_string(p).unwrap().lines().filter(|l| !l.contains("wall_seconds")).collect::<Vec<_>>().join("\n")
}

#[test]
fn code_info_reports_dimensions() {
    let text = run_ok(&["code-info", "--code", "bch_127_64"]);
    for expected in ["n         127", "k         64", "deg g     63", "H         126 x 127", "rank H    63"] {
        assert!(text.contains(expected), "missing `{expected}` in\n{text}");
    }
    let text = run_ok(&["code-info", "--code", "bch_255_239", "--delta1", "2"]);
    assert!(text.contains("H         32 x 255"), "{text}");
}

#[test]
fn code_info_exports_a_loadable_alist() {
    let dir = tempfile::tempdir().unwrap();
    let alist = path(dir.path(), "h.alist");
    run_ok(&["code-info", "--code", "bch_31_21", "--out", &alist]);
    let text = run_ok(&["code-info", "--alist", &alist]);
    assert!(text.contains("n         31") && text.contains("k         21"), "{text}");
}

#[test]
fn bad_code_key_exits_nonzero() {
    let status = Command::new(env!("CARGO_BIN_EXE_quasi-bp"))
        .args(["code-info", "--code", "bch_100_50"])
        .output()
        .unwrap();
    assert!(!status.status.success());
    assert!(String::from_utf8_lossy(&status.stderr).contains("unknown code"));
    assert!(run_err(&["code-info"]).contains("no code"));
    assert!(run_err(&["simulate", "--code", "bch_31_21", "--alg", "turbo", "--snr", "3", "--out", "x.csv"])
        .contains("unknown algorithm"));
}

#[test]
fn help_succeeds_and_usage_errors_exit_two() {
    let bin = env!("CARGO_BIN_EXE_quasi-bp");
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert!(help.status.success());
    assert!(String::from_utf8_lossy(&help.stdout).contains("simulate"));
    let bad = Command::new(bin).args(["simulate", "--bogus"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("unexpected argument") && !stderr.contains("invalid configuration"), "{stderr}");
}

#[test]
fn simulate_is_reproducible_and_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "simulate".to_string(),
            "--code=bch_31_21".into(),
            "--lmax=5".into(),
            "--delta2=3".into(),
            "--snr=2:1:4".into(),
            "--frames-max=600".into(),
            "--min-errors=30".into(),
            "--seed=11".into(),
            format!("--out={out}"),
        ]
    };
    let (a, b) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"));
    let run_args = |out: &str| {
        let owned = args(out);
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        run_ok(&refs)
    };
    run_args(&a);
    run_args(&b);
    let csv = fs::read_to_string(&a).unwrap();
    assert_eq!(csv, fs::read_to_string(&b).unwrap());
    assert_eq!(without_timing(&path(dir.path(), "a.json")), without_timing(&path(dir.path(), "b.json")));

    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# schema=1");
    assert!(lines.contains(&"# code=bch_31_21") && lines.contains(&"# seed=11") && lines.contains(&"# snr=2,3,4"));
    let rows: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).collect();
    assert!(rows[0].starts_with("snr_db,frames,frame_errors,fer,ber,mean_iters"));
    assert_eq!(rows.len(), 4);

    // the header alone reproduces the run
    let config = path(dir.path(), "from_header.conf");
    let header: String = lines
        .iter()
        .filter_map(|l| l.strip_prefix("# "))
        .filter(|l| !l.starts_with("schema="))
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(&config, header).unwrap();
    let c = path(dir.path(), "c.csv");
    run_ok(&["simulate", "--config", &config, "--out", &c]);
    assert_eq!(fs::read_to_string(&c).unwrap(), csv);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = path(dir.path(), "run.conf");
    fs::write(&config, "code = bch_31_21\nalg = nms\nlmax = 4\nsnr = 3\nframes-max = 64\nmin-errors = 1000\n").unwrap();
    let out = path(dir.path(), "r.csv");
    run_ok(&["simulate", "--config", &config, "--lmax", "7", "--out", &out]);
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.contains("# lmax=7") && csv.contains("# alg=nms") && csv.contains("# nms-weight="), "{csv}");
    fs::write(&config, "code = bch_31_21\ncolour = red\n").unwrap();
    assert!(run_err(&["code-info", "--config", &config]).contains("unknown key"));
}

#[test]
fn unwritable_output_fails_before_simulating() {
    let start = std::time::Instant::now();
    let err = run_err(&[
        "simulate",
        "--code",
        "bch_127_64",
        "--snr",
        "0",
        "--min-errors",
        "1000000",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert!(err.contains("cannot write"), "{err}");
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn exit_refuses_small_pilots_and_writes_three_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "curves.csv");
    let err = run_err(&["exit", "--code", "bch_31_21", "--snr", "3", "--pilot", "50", "--out", &out]);
    assert!(err.contains("too small"), "{err}");

    let summary = run_ok(&[
        "exit", "--code", "bch_31_21", "--delta2", "3", "--lmax", "4", "--snr", "2,4", "--pilot", "120", "--out", &out,
    ]);
    assert!(summary.contains("counted_fer"));
    let curves = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = curves.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "snr_db,t,i_ev,i_ec");
    assert_eq!(rows.len(), 1 + 2 * 4);
    let cloud = fs::read_to_string(path(dir.path(), "curves.cloud.csv")).unwrap();
    let rows: Vec<&str> = cloud.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "snr_db,t,realization_id,mi");
    assert_eq!(rows.len(), 1 + 2 * 4 * 120);
    let fer = fs::read_to_string(path(dir.path(), "curves.fer.csv")).unwrap();
    assert!(fer.contains("# pilot=120"));
    assert_eq!(fer.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn tune_requires_one_anchor_and_a_quasi_decoder() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "tune.json");
    assert!(run_err(&["tune", "--code", "bch_31_21", "--snr", "2,3", "--out", &out]).contains("single anchor"));
    assert!(run_err(&["tune", "--code", "bch_31_21", "--alg", "bp", "--snr", "3", "--out", &out]).contains("merging weight"));
}
