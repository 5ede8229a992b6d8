use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_frobpoly")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn polygon_csv() {
    let (code, out, _) = run(&["polygon", "hodge", "--n", "2", "--d", "3", "--emit", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("k,HP\n0,0/1\n1,2/3\n2,5/3\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["polygon", "frobenius", "--n", "2", "--d", "3", "--p", "9"]).0, 2);
    assert_eq!(run(&["verify", "--suite", "no-such-suite"]).0, 2);
    let f = "p=5;a=1;n=1;d=3;terms=3:1|1:2";
    assert_eq!(run(&["np", "--f", f, "--budget", "1"]).0, 3);
    assert_eq!(run(&["np", "--f", f]).0, 0);
    let (code, _, err) = run(&["verify", "--suite", "tau0-uniqueness", "--n", "2", "--d", "4", "--p", "7"]);
    assert_eq!(code, 4);
    assert!(err.contains("FAIL tau0-uniqueness"));
    assert_eq!(run(&["verify", "--suite", "SF1-collapse", "--n", "2", "--d", "4", "--p", "7"]).0, 0);
}

#[test]
fn report_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gnp.json");
    let p = path.to_str().unwrap();
    let args = ["gnp", "--n", "1", "--d", "3", "--p", "5", "--samples", "10", "--seed", "3", "--out", p];
    assert_eq!(run(&args).0, 0);
    let first = std::fs::read_to_string(&path).unwrap();
    assert_eq!(run(&args).0, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    assert!(first.contains("\"sampled_min_np\""));

    let svg = dir.path().join("gnp.svg");
    let mut svg_args = args.to_vec();
    svg_args.truncate(svg_args.len() - 2);
    svg_args.extend(["--emit", "svg", "--out", svg.to_str().unwrap()]);
    assert_eq!(run(&svg_args).0, 0);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));

    let (code, _, err) = run(&["polygon", "hodge", "--n", "1", "--d", "3", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent-dir/x.json"));
}

#[test]
fn polynomial_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "p=5;a=1;n=1;d=3;terms=3:1|1:2\n").unwrap();
    let (code, out, _) = run(&["lpoly", "--f", path.to_str().unwrap(), "--upto", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"ord_pi\""));
}
