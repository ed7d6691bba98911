use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn hpcqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpcqc"))
        .args(args)
        .current_dir(golden(""))
        .env_remove("HPCQC_CONFIG")
        .output()
        .unwrap()
}

fn assert_golden(args: &[&str], file: &str) {
    let out = hpcqc(args);
    assert_eq!(out.status.code(), Some(if file.starts_with("advise_machine") { 10 } else { 0 }), "{args:?}");
    let want = std::fs::read_to_string(golden(file)).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{args:?} vs {file}");
}

#[test]
fn text_outputs_match_golden_files() {
    assert_golden(&["count", "mixed.qc"], "count.txt");
    assert_golden(&["estimate", "-t", "1,3,4,1e8"], "estimate.txt");
    assert_golden(
        &[
            "encode",
            "610x340x103:hyperspectral",
            "100x100x4:polarimetric",
            "100x100x3:polarimetric:symmetric",
            "64x64x12:multispectral",
            "--scheme",
            "amplitude",
        ],
        "encode_amplitude.txt",
    );
    assert_golden(&["advise", "mixed.qc"], "advise.txt");
    assert_golden(&["advise", "mixed.qc", "--format", "machine", "--t-threshold", "10"], "advise_machine.json");
    assert_golden(&["transpile", "mixed.qc", "--mode", "count"], "transpile_count.qc");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| hpcqc(args).status.code();
    assert_eq!(code(&["advise", "mixed.qc"]), Some(0));
    assert_eq!(code(&["advise", "mixed.qc", "--t-threshold", "10"]), Some(10));
    assert_eq!(code(&["advise", "--t-override", "1e15", "--logical-qubits", "5", "--p", "9e-3"]), Some(11));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["bench", "nosuch"]), Some(2));
    assert_eq!(code(&["advise", "mixed.qc", "--policy", "half"]), Some(2));
    assert_eq!(code(&["estimate", "-t", "5,3"]), Some(1));
    assert_eq!(code(&["count", "does-not-exist.qc"]), Some(1));
}

#[test]
fn parse_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qc");
    std::fs::write(&bad, "qubits 2\nh 0\ncnot 0 7\n").unwrap();
    let out = hpcqc(&["count", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn transpiled_output_feeds_back_into_count_and_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("grid.qc");
    std::fs::write(&source, "qubits 2\nh 0\nu1(pi/4) 1\ncnot 0 1\nrz(pi/2) 1\nu2(0, pi) 1\n").unwrap();
    let lowered = dir.path().join("lowered.qc");
    let out = hpcqc(&["transpile", source.to_str().unwrap(), "-o", lowered.to_str().unwrap()]);
    assert!(out.status.success());
    let count = String::from_utf8(hpcqc(&["count", lowered.to_str().unwrap()]).stdout).unwrap();
    assert!(count.starts_with("t_full: 1\n"), "{count}");
    let sim = hpcqc(&["simulate", lowered.to_str().unwrap(), "--shots", "200", "--format", "machine"]);
    assert!(sim.status.success(), "{}", String::from_utf8_lossy(&sim.stderr));
    // raw rotations must be transpiled first
    assert_eq!(hpcqc(&["simulate", "mixed.qc"]).status.code(), Some(1));
}

#[test]
fn config_file_layers_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("hpcqc.toml");
    std::fs::write(&cfg, "t_threshold = 10\npolicy = \"full\"\n").unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["advise", "mixed.qc"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_hpcqc"))
            .args(&args)
            .current_dir(golden(""))
            .env("HPCQC_CONFIG", &cfg)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run(&[]), Some(10));
    assert_eq!(run(&["--t-threshold", "300"]), Some(0));
    assert_eq!(run(&["--policy", "symmetry"]), Some(0));
    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    assert_eq!(run(&[]), Some(2));
}
