use std::ffi::{CStr, CString};
use std::ptr;

use qha_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qha_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn builtin_suite_round_trip() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(qha_scenario_builtin(c("wh:2").as_ptr(), &mut s), QhaStatus::Ok);
        assert_eq!(qha_scenario_set_trials(s, 5, 5), QhaStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(qha_run_suite(s, &mut r), QhaStatus::Ok);
        assert!(qha_report_passed(r));
        let n = qha_report_len(r);
        assert!(n > 10);
        let mut check = QhaCheck::default();
        for i in 0..n {
            assert_eq!(qha_report_check(r, i, &mut check), QhaStatus::Ok);
            assert!(check.pass);
            assert!(!qha_report_check_name(r, i).is_null());
        }
        assert_eq!(qha_report_check(r, n, &mut check), QhaStatus::InvalidArgument);
        assert!(qha_report_check_name(r, n).is_null());
        let name = CStr::from_ptr(qha_report_check_name(r, 0)).to_str().unwrap();
        assert_eq!(name, "action-homomorphism");

        let mut json = ptr::null_mut();
        assert_eq!(qha_report_to_json(r, &mut json), QhaStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["scenario"], "wh:2");
        qha_string_free(json);
        qha_report_free(r);
        qha_scenario_free(s);
    }
}

#[test]
fn duflo_constant_through_the_abi() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(qha_scenario_builtin(c("cosets:cyclic(6):cyclic(3)").as_ptr(), &mut s), QhaStatus::Ok);
        let mut d = QhaDuflo::default();
        assert_eq!(qha_estimate_duflo(s, &mut d), QhaStatus::Ok);
        assert!(d.is_scalar);
        assert!((d.d_inverse - 3.0).abs() < 1e-10);
        assert!(d.cross_check_residual < 1e-8);
        qha_scenario_free(s);

        assert_eq!(qha_scenario_builtin(c("affine-wavelet").as_ptr(), &mut s), QhaStatus::Ok);
        assert_eq!(qha_estimate_duflo(s, &mut d), QhaStatus::InvalidArgument);
        qha_scenario_free(s);
    }
}

#[test]
fn errors_and_null_handles() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(qha_scenario_builtin(c("nope").as_ptr(), &mut s), QhaStatus::Config);
        assert!(last_error().contains("unknown scenario"));
        assert!(s.is_null());
        assert_eq!(qha_scenario_builtin(ptr::null(), &mut s), QhaStatus::NullPointer);
        assert_eq!(qha_scenario_load(c("/no/such/file.toml").as_ptr(), &mut s), QhaStatus::Config);
        assert_eq!(qha_run_suite(ptr::null(), &mut ptr::null_mut()), QhaStatus::NullPointer);
        assert_eq!(qha_report_len(ptr::null()), 0);
        assert!(!qha_report_passed(ptr::null()));
        qha_scenario_free(ptr::null_mut());
        qha_report_free(ptr::null_mut());
        qha_string_free(ptr::null_mut());

        assert_eq!(qha_scenario_builtin(c("wh:3").as_ptr(), &mut s), QhaStatus::Ok);
        assert_eq!(qha_scenario_set_tolerances(s, -1.0, 0.0), QhaStatus::InvalidArgument);
        qha_scenario_free(s);
    }
}

#[test]
fn failing_checks_return_check_failed() {
    let text = "id = \"broken\"\n[group]\nkind = \"finite\"\nname = \"c2\"\n[algebra]\ntrace_weights = [1.0, 2.0]\n[action]\nkind = \"permutation\"\npoint_maps = [[0, 1], [1, 0]]\n[tolerances]\ntrials = 3\npairs = 3\n";
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(qha_scenario_parse(c(text).as_ptr(), &mut s), QhaStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(qha_run_suite(s, &mut r), QhaStatus::CheckFailed);
        assert!(!qha_report_passed(r));
        qha_report_free(r);
        qha_scenario_free(s);
    }
}

#[test]
fn toml_export_reparses() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(qha_scenario_builtin(c("irrep:s3:std").as_ptr(), &mut s), QhaStatus::Ok);
        assert_eq!(qha_scenario_set_seed(s, 42), QhaStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(qha_scenario_to_toml(s, &mut text), QhaStatus::Ok);
        let mut s2 = ptr::null_mut();
        assert_eq!(qha_scenario_parse(text, &mut s2), QhaStatus::Ok);
        assert!(CStr::from_ptr(text).to_str().unwrap().contains("seed = 42"));
        qha_string_free(text);
        qha_scenario_free(s);
        qha_scenario_free(s2);
    }
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(qha_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export_and_compiles_as_c() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/qha.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    for line in src.lines().filter(|l| l.contains("extern \"C\" fn qha_")) {
        let name = line.split("fn ").nth(1).unwrap().split('(').next().unwrap();
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    let probe = std::env::temp_dir().join("qha_header_probe.c");
    std::fs::write(&probe, "#include \"qha.h\"\nint main(void) { QhaScenario *s = 0; return qha_scenario_builtin(\"wh:2\", &s) == QHA_STATUS_OK ? 0 : 1; }\n").unwrap();
    match std::process::Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&probe)
        .status()
    {
        Ok(status) => assert!(status.success(), "header does not compile as C"),
        Err(e) => eprintln!("skipping C compile: no cc ({e})"),
    }
}
