use std::ffi::{CStr, CString};
use std::ptr;

use uavsec_ffi::*;

fn last_error() -> String {
    let p = uavsec_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn preset(name: &str) -> *mut UavsecScenario {
    let name = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { uavsec_scenario_from_preset(name.as_ptr(), &mut s) }, UavsecStatus::Ok);
    assert!(!s.is_null());
    s
}

#[test]
fn hypervolume_hand_cases() {
    let pts = [0.0, 2.0, 2.0, 0.0];
    let mut hv = 0.0;
    assert_eq!(unsafe { uavsec_hypervolume(pts.as_ptr(), 2, 2, [3.0, 3.0].as_ptr(), &mut hv) }, UavsecStatus::Ok);
    assert_eq!(hv, 5.0);
    assert_eq!(unsafe { uavsec_hypervolume(pts.as_ptr(), 1, 2, [2.0, 2.0].as_ptr(), &mut hv) }, UavsecStatus::Ok);
    assert_eq!(hv, 0.0);
    let st = unsafe { uavsec_hypervolume(pts.as_ptr(), 1, 4, [1.0; 4].as_ptr(), &mut hv) };
    assert_eq!(st, UavsecStatus::InvalidArgument);
    assert!(!last_error().is_empty());
}

#[test]
fn practicality_crossover() {
    let mut bytes = 0.0;
    let st = unsafe { uavsec_practicality_crossover_bytes(UavsecCipher::Aes, 40.0, &mut bytes) };
    assert_eq!(st, UavsecStatus::Ok);
    assert!((bytes - 200e6 * 40.0 / 9.29).abs() < 1.0);
    let st = unsafe { uavsec_practicality_crossover_bytes(UavsecCipher::Rsa, -1.0, &mut bytes) };
    assert_eq!(st, UavsecStatus::InvalidArgument);
}

#[test]
fn null_and_bad_input_report_errors() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { uavsec_scenario_from_json(ptr::null(), &mut s) }, UavsecStatus::NullPointer);
    assert_eq!(last_error(), "json is null");
    let bad = CString::new("{\"kind\": \"relay\"").unwrap();
    assert_eq!(unsafe { uavsec_scenario_from_json(bad.as_ptr(), &mut s) }, UavsecStatus::ConfigError);
    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { uavsec_scenario_from_preset(unknown.as_ptr(), &mut s) }, UavsecStatus::ConfigError);
    assert!(last_error().contains("nope"));
    assert!(s.is_null());
    let mut kind = UavsecScenarioKind::Relay;
    assert_eq!(unsafe { uavsec_scenario_kind(ptr::null(), &mut kind) }, UavsecStatus::NullPointer);
    unsafe {
        uavsec_scenario_free(ptr::null_mut());
        uavsec_front_free(ptr::null_mut());
        uavsec_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { uavsec_front_len(ptr::null()) }, 0);
}

#[test]
fn scenario_round_trip_through_json() {
    let text = CString::new(serde_json::json!({"kind": "twoway"}).to_string()).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { uavsec_scenario_from_json(text.as_ptr(), &mut s) }, UavsecStatus::ConfigError);

    let mut scenario = serde_json::to_value(uavsec::scenarios::tiny_twoway()).unwrap();
    scenario["kind"] = "twoway".into();
    let text = CString::new(scenario.to_string()).unwrap();
    assert_eq!(unsafe { uavsec_scenario_from_json(text.as_ptr(), &mut s) }, UavsecStatus::Ok);
    let mut kind = UavsecScenarioKind::Relay;
    assert_eq!(unsafe { uavsec_scenario_kind(s, &mut kind) }, UavsecStatus::Ok);
    assert_eq!(kind, UavsecScenarioKind::TwoWay);
    unsafe { uavsec_scenario_free(s) };
}

#[test]
fn genome_evaluation_matches_core() {
    use uavsec::moea::Problem;
    let s = preset("tiny_relay");
    let (mut nc, mut ni, mut np) = (0, 0, 0);
    assert_eq!(unsafe { uavsec_scenario_genome_shape(s, &mut nc, &mut ni, &mut np) }, UavsecStatus::Ok);
    let problem = uavsec::scenarios::RelayProblem::new(uavsec::scenarios::tiny_relay()).unwrap();
    let g = problem.anchor().unwrap();
    assert_eq!((nc, ni, np), (g.continuous.len(), g.integers.len(), 1));
    let perm = g.permutation.clone().unwrap();
    let mut out = [0.0; 3];
    let st = unsafe {
        uavsec_scenario_evaluate_genome(
            s,
            g.continuous.as_ptr(),
            nc,
            g.integers.as_ptr(),
            ni,
            perm.as_ptr(),
            np,
            out.as_mut_ptr(),
        )
    };
    assert_eq!(st, UavsecStatus::Ok);
    assert_eq!(out.to_vec(), problem.evaluate(&g).unwrap());

    let st = unsafe {
        uavsec_scenario_evaluate_genome(s, g.continuous.as_ptr(), nc - 1, ptr::null(), 0, ptr::null(), 0, out.as_mut_ptr())
    };
    assert_eq!(st, UavsecStatus::InvalidArgument);
    unsafe { uavsec_scenario_free(s) };
}

#[test]
fn optimize_and_read_front() {
    let s = preset("tiny_relay");
    let settings = CString::new(r#"{"population": 10, "iterations": 5}"#).unwrap();
    let mut front = ptr::null_mut();
    let st = unsafe { uavsec_optimize(s, UavsecAlgorithm::Imodaom, 7, settings.as_ptr(), &mut front) };
    assert_eq!(st, UavsecStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { uavsec_front_evaluations(front) }, 60);
    let n = unsafe { uavsec_front_len(front) };
    assert!(n >= 1);
    let mut last = f64::NEG_INFINITY;
    for i in 0..n {
        let mut obj = [0.0; 3];
        assert_eq!(unsafe { uavsec_front_objectives(front, i, obj.as_mut_ptr()) }, UavsecStatus::Ok);
        assert!(obj[0] >= last);
        last = obj[0];
        let mut json = ptr::null_mut();
        assert_eq!(unsafe { uavsec_front_solution_json(front, i, &mut json) }, UavsecStatus::Ok);
        let mut again = [0.0; 3];
        assert_eq!(unsafe { uavsec_scenario_evaluate_json(s, json, again.as_mut_ptr()) }, UavsecStatus::Ok);
        assert_eq!(obj, again);
        unsafe { uavsec_string_free(json) };
    }
    let mut obj = [0.0; 3];
    assert_eq!(unsafe { uavsec_front_objectives(front, n, obj.as_mut_ptr()) }, UavsecStatus::InvalidArgument);

    let bad = CString::new(r#"{"population": 0}"#).unwrap();
    let mut other = ptr::null_mut();
    assert_eq!(unsafe { uavsec_optimize(s, UavsecAlgorithm::Random, 1, bad.as_ptr(), &mut other) }, UavsecStatus::ConfigError);
    unsafe {
        uavsec_front_free(front);
        uavsec_scenario_free(s);
    }
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(uavsec_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/uavsec.h");
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = std::process::Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, header])
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(_) => eprintln!("{compiler} not available; skipping"),
        }
    }
}

#[test]
fn c_program_links_static_library() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libuavsec_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = env!("CARGO_MANIFEST_DIR");
    let out = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("uavsec_smoke");
    let built = std::process::Command::new("cc")
        .args(["-Wall", "-Werror", "-I", &format!("{dir}/include"), &format!("{dir}/tests/c/smoke.c")])
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status();
    match built {
        Ok(s) => assert!(s.success(), "compiling the C smoke test failed"),
        Err(_) => {
            eprintln!("cc not available; skipping");
            return;
        }
    }
    let run = std::process::Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
