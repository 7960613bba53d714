use std::ffi::{c_char, CStr, CString};
use std::ptr;

use parahiggs_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ph_last_error()) }.to_string_lossy().into_owned()
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { ph_string_free(s) };
    out
}

fn parse(json: &str) -> Result<*mut PhScenario, i32> {
    let text = CString::new(json).unwrap();
    let mut s = ptr::null_mut();
    match unsafe { ph_scenario_parse(text.as_ptr(), &mut s) } {
        PH_OK => Ok(s),
        code => Err(code),
    }
}

fn run(s: *const PhScenario) -> (i32, usize, usize, *mut PhReport) {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ph_run(s, &mut r) }, PH_OK);
    let (mut status, mut total, mut passed) = (-1, 0, 0);
    assert_eq!(unsafe { ph_report_status(r, &mut status) }, PH_OK);
    assert_eq!(unsafe { ph_report_checks(r, &mut total, &mut passed) }, PH_OK);
    (status, total, passed, r)
}

const J2: &str = r#"{"schema_version": 1, "id": "j2", "kind": "weight_filtration", "payload": {"matrix": [["0", "1"], ["0", "0"]]}}"#;

#[test]
fn parse_run_render() {
    let s = parse(J2).unwrap();
    let (status, total, passed, r) = run(s);
    assert_eq!((status, total, passed), (0, 3, 3));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ph_report_render(r, false, &mut out) }, PH_OK);
    let json = take(out);
    assert!(json.contains("\"level_dims\": [\n      0,\n      1,\n      1,\n      2\n    ]"), "{json}");
    assert_eq!(unsafe { ph_report_render(r, true, &mut out) }, PH_OK);
    assert!(take(out).contains("status: pass"));
    unsafe {
        ph_report_free(r);
        ph_scenario_free(s);
    }
}

#[test]
fn hypothesis_failure_is_a_status_not_an_error() {
    let s = parse(
        r#"{"schema_version": 1, "id": "k", "kind": "qis_check", "window": [3, 3],
            "payload": {"module": {"presented": {"generators": [[0, 0]], "relations": [["x"], ["y"]]}}}}"#,
    )
    .unwrap();
    let (status, _, passed, r) = run(s);
    assert_eq!((status, passed), (2, 0));
    unsafe {
        ph_report_free(r);
        ph_scenario_free(s);
    }
}

#[test]
fn error_codes() {
    assert_eq!(parse("{ nope").unwrap_err(), PH_ERR_PARSE);
    assert!(last_error().contains("line 1"), "{}", last_error());
    assert_eq!(parse(&J2.replace("[\"0\", \"0\"]", "[\"0\"]")).unwrap_err(), PH_ERR_VALIDATION);
    assert!(last_error().contains("payload"), "{}", last_error());

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ph_scenario_parse(ptr::null(), &mut s) }, PH_ERR_NULL);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { ph_scenario_parse(bad.as_ptr().cast(), &mut s) }, PH_ERR_UTF8);
    let kind = CString::new("nonsense").unwrap();
    assert_eq!(unsafe { ph_scenario_generate(kind.as_ptr(), 0, 1, &mut s) }, PH_ERR_PARSE);
    let kind = CString::new("koszul").unwrap();
    assert_eq!(unsafe { ph_scenario_generate(kind.as_ptr(), 0, 9, &mut s) }, PH_ERR_VALIDATION);
    assert_eq!(unsafe { ph_run(ptr::null(), ptr::null_mut()) }, PH_ERR_NULL);
    unsafe {
        ph_scenario_free(ptr::null_mut());
        ph_report_free(ptr::null_mut());
        ph_string_free(ptr::null_mut());
    }
}

#[test]
fn window_override_is_checked() {
    let kind = CString::new("qis_check").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ph_scenario_generate(kind.as_ptr(), 4, 2, &mut s) }, PH_OK);
    assert_eq!(unsafe { ph_scenario_set_window(s, 0, 2) }, PH_ERR_VALIDATION);
    assert_eq!(unsafe { ph_scenario_set_window(s, 2, 2) }, PH_OK);
    assert_eq!(unsafe { ph_scenario_set_seed(s, 9) }, PH_OK);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ph_scenario_to_json(s, &mut out) }, PH_OK);
    let json = take(out);
    assert!(json.contains("\"seed\": 9") && json.contains("\"window\": [\n    2,\n    2\n  ]"), "{json}");
    let (status, _, _, r) = run(s);
    assert_eq!(status, 0);
    unsafe {
        ph_report_free(r);
        ph_scenario_free(s);
    }
}

#[test]
fn weight_dims() {
    let j3 = [0i64, 1, 0, 0, 0, 1, 0, 0, 0];
    let mut dims = [99usize; 5];
    assert_eq!(unsafe { ph_weight_graded_dims(3, j3.as_ptr(), dims.as_mut_ptr(), dims.len()) }, PH_OK);
    assert_eq!(dims, [1, 0, 1, 0, 1]);
    assert_eq!(unsafe { ph_weight_graded_dims(3, j3.as_ptr(), dims.as_mut_ptr(), 4) }, PH_ERR_BUFFER);
    let id = [1i64, 0, 0, 1];
    assert_eq!(unsafe { ph_weight_graded_dims(2, id.as_ptr(), dims.as_mut_ptr(), 3) }, PH_ERR_COMPUTATION);
    assert!(last_error().contains("nilpotent"), "{}", last_error());
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/parahiggs.h");
    for name in [
        "ph_last_error",
        "ph_scenario_parse",
        "ph_scenario_generate",
        "ph_scenario_set_window",
        "ph_scenario_set_seed",
        "ph_scenario_to_json",
        "ph_scenario_free",
        "ph_run",
        "ph_report_status",
        "ph_report_checks",
        "ph_report_render",
        "ph_report_free",
        "ph_string_free",
        "ph_weight_graded_dims",
        "typedef struct PhScenario PhScenario",
        "#define PH_ERR_PANIC 7",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
