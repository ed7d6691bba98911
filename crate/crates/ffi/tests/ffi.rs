use std::ffi::{CStr, CString};
use std::ptr;

use hpcqc_ffi::*;

fn parse(text: &str) -> *mut HpcqcCircuit {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hpcqc_circuit_parse(c.as_ptr(), &mut out) }, HpcqcStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hpcqc_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn parse_stats_and_free() {
    let c = parse("qubits 2\nh 0\ncnot 0 1");
    let (mut n, mut m, mut d) = (0, 0, 0);
    assert_eq!(unsafe { hpcqc_circuit_stats(c, &mut n, &mut m, &mut d) }, HpcqcStatus::Ok);
    assert_eq!((n, m, d), (2, 2, 2));
    unsafe { hpcqc_circuit_free(c) };
    unsafe { hpcqc_circuit_free(ptr::null_mut()) };
}

#[test]
fn parse_error_sets_message() {
    let text = CString::new("qubits 1\nbogus 0").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hpcqc_circuit_parse(text.as_ptr(), &mut out) }, HpcqcStatus::Parse);
    assert!(out.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());
    assert_eq!(
        unsafe { hpcqc_circuit_parse(ptr::null(), &mut out) },
        HpcqcStatus::NullPointer
    );
}

#[test]
fn t_count_and_advise() {
    let c = parse("qubits 2\nblock\nry(0.3) 0\nrz(0.4) 1\ncnot 0 1");
    let (mut full, mut sym) = (0, 0);
    assert_eq!(unsafe { hpcqc_t_count(c, 1e-3, &mut full, &mut sym) }, HpcqcStatus::Ok);
    assert_eq!((full, sym), (68, 1));

    let mut decision = HpcqcDecision::Infeasible;
    let mut report = ptr::null_mut();
    let status = unsafe {
        hpcqc_advise(
            c,
            1e-3,
            HpcqcPolicy::Symmetry as u32,
            300,
            1e-3,
            1e-6,
            1e-3,
            u64::MAX,
            0,
            &mut decision,
            &mut report,
        )
    };
    assert_eq!(status, HpcqcStatus::Ok);
    assert_eq!(decision, HpcqcDecision::Hpc);
    let json = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_string();
    assert!(json.contains("\"decision\": \"HPC\""));
    unsafe { hpcqc_string_free(report) };

    let status = unsafe {
        hpcqc_advise(c, 1e-3, 7, 300, 1e-3, 1e-6, 1e-3, u64::MAX, 0, &mut decision, &mut report)
    };
    assert_eq!(status, HpcqcStatus::InvalidArgument);
    unsafe { hpcqc_circuit_free(c) };
}

#[test]
fn estimate_scenario() {
    let mut e = HpcqcEstimate::default();
    assert_eq!(unsafe { hpcqc_estimate(1e-3, 1e-6, 1e-3, 5, 100_000_000, &mut e) }, HpcqcStatus::Ok);
    assert_eq!((e.distance, e.total_physical_qubits, e.distillation_qubits), (25, 158_431, 9_375));
    assert_eq!(e.source, HpcqcSource::PaperTable as u32);
    assert_eq!(
        unsafe { hpcqc_estimate(0.5, 1e-6, 1e-3, 5, 1, &mut e) },
        HpcqcStatus::InvalidArgument
    );
    assert!(!last_error().is_empty());
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hpcqc.h")).unwrap();
    for name in ["hpcqc_circuit_parse", "hpcqc_advise", "HPCQC_STATUS_PARSE", "HpcqcEstimate"] {
        assert!(h.contains(name), "{name}");
    }
    let v = unsafe { CStr::from_ptr(hpcqc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler on PATH; header syntax not checked");
        return;
    };
    let dir = tempdir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"hpcqc.h\"\nint main(void) {\n  HpcqcCircuit *c = 0;\n  HpcqcEstimate e;\n  \
         HpcqcStatus s = hpcqc_estimate(1e-3, 1e-6, 1e-3, 5, 1, &e);\n  \
         hpcqc_circuit_free(c);\n  return s == HPCQC_STATUS_OK ? (int)HPCQC_POLICY_FULL : 1;\n}\n",
    )
    .unwrap();
    let out = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("hpcqc-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
