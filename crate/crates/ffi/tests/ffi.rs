use std::ffi::{c_char, c_int, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use fueterfrac_ffi::*;

fn last_error() -> String {
    let p = ff_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn standard() -> *mut FfFrame {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { ff_frame_standard(&mut f) }, FfStatus::Ok);
    f
}

fn field(frame: *const FfFrame, comps: [&str; 4]) -> Result<*mut FfField, FfStatus> {
    let owned: Vec<CString> = comps.iter().map(|s| CString::new(*s).unwrap()).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|c| c.as_ptr()).collect();
    let mut out = ptr::null_mut();
    match unsafe { ff_field_new(frame, ptrs.as_ptr(), &mut out) } {
        FfStatus::Ok => Ok(out),
        s => Err(s),
    }
}

#[test]
fn field_and_classical_operator() {
    let fr = standard();
    let f = field(fr, ["x0^2", "x1", "0", "0"]).unwrap();
    let x = [1.5, 0.0, 0.0, 0.0];
    let mut v = [0.0; 4];
    assert_eq!(unsafe { ff_field_eval(f, x.as_ptr(), v.as_mut_ptr()) }, FfStatus::Ok);
    assert_eq!(v, [2.25, 0.0, 0.0, 0.0]);
    // ψD(x0² + e1 x1) = 2x0 + e1·e1 = 2x0 − 1
    assert_eq!(unsafe { ff_fueter(f, FfSide::Left, x.as_ptr(), v.as_mut_ptr()) }, FfStatus::Ok);
    assert!((v[0] - 2.0).abs() < 1e-12 && v[1..].iter().all(|c| c.abs() < 1e-12), "{v:?}");
    unsafe {
        ff_field_free(f);
        ff_frame_free(fr);
    }
}

#[test]
fn classical_operator_handle_matches_fueter() {
    let fr = standard();
    let f = field(fr, ["x0*x1 + 1", "x2^2", "x3", "x0"]).unwrap();
    let json = CString::new("{}").unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { ff_operator_new(FfSide::Right, json.as_ptr(), &mut op) }, FfStatus::Ok);
    let x = [0.7, 1.1, 0.4, 2.0];
    let (mut a, mut b) = ([0.0; 4], [0.0; 4]);
    unsafe {
        assert_eq!(ff_prop_fractal_fueter(f, op, x.as_ptr(), a.as_mut_ptr()), FfStatus::Ok);
        assert_eq!(ff_fueter(f, FfSide::Right, x.as_ptr(), b.as_mut_ptr()), FfStatus::Ok);
        ff_operator_free(op);
        ff_field_free(f);
        ff_frame_free(fr);
    }
    for k in 0..4 {
        assert!((a[k] - b[k]).abs() < 1e-12, "{a:?} vs {b:?}");
    }
}

#[test]
fn kernel_and_frame_sign() {
    let psi = [
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, -1.0,
    ];
    let mut fr = ptr::null_mut();
    assert_eq!(unsafe { ff_frame_new(psi.as_ptr(), &mut fr) }, FfStatus::Ok);
    let mut sign: c_int = 0;
    assert_eq!(unsafe { ff_frame_sign(fr, &mut sign) }, FfStatus::Ok);
    assert_eq!(sign, -1);
    let q = [1.0, 0.0, 0.0, 0.0];
    let mut k = [0.0; 4];
    assert_eq!(unsafe { ff_cauchy_kernel(fr, q.as_ptr(), k.as_mut_ptr()) }, FfStatus::Ok);
    assert!((k[0] - 0.05066059182116889).abs() < 1e-15);
    let zero = [0.0; 4];
    assert_eq!(unsafe { ff_cauchy_kernel(fr, zero.as_ptr(), k.as_mut_ptr()) }, FfStatus::Domain);
    assert!(last_error().contains("singular"));
    unsafe { ff_frame_free(fr) };
}

#[test]
fn errors_have_status_and_message() {
    let fr = standard();
    assert_eq!(field(fr, ["x0 +", "0", "0", "0"]).unwrap_err(), FfStatus::Parse);
    assert!(last_error().contains("column"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ff_frame_standard(ptr::null_mut()) }, FfStatus::NullPointer);
    let bad = [1.0; 16];
    assert_eq!(unsafe { ff_frame_new(bad.as_ptr(), &mut out) }, FfStatus::InvalidParameter);
    let json = CString::new(r#"{"sigma": 2}"#).unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { ff_operator_new(FfSide::Left, json.as_ptr(), &mut op) }, FfStatus::InvalidParameter);
    let json = CString::new(r#"{"sigmaa": 1}"#).unwrap();
    assert_eq!(unsafe { ff_operator_new(FfSide::Left, json.as_ptr(), &mut op) }, FfStatus::Config);
    // a successful call clears the message
    assert_eq!(unsafe { ff_frame_standard(&mut out) }, FfStatus::Ok);
    assert!(ff_last_error().is_null());
    unsafe {
        ff_frame_free(out);
        ff_frame_free(fr);
        ff_frame_free(ptr::null_mut());
    }
}

#[test]
fn scenario_report() {
    let cfg = CString::new(
        r#"{
          "f": ["1", "0", "0", "0"],
          "box": {"lo": [0, 0, 0, 0], "hi": [1, 1, 1, 1]},
          "quadrature": {"boundary_order": 32, "volume_order": 4, "graded_levels": 0},
          "points": [[0.5, 0.5, 0.5, 0.5]],
          "identities": [
            {"name": "borel_pompeiu", "tolerance": 1e-8},
            {"name": "stokes", "tolerance": 1e-10}
          ]
        }"#,
    )
    .unwrap();
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { ff_verify_scenario(cfg.as_ptr(), &mut rep) }, FfStatus::Ok, "{}", last_error());
    let (mut rows, mut passed, mut max) = (0usize, 0 as c_int, f64::NAN);
    assert_eq!(unsafe { ff_report_summary(rep, &mut rows, &mut passed, &mut max) }, FfStatus::Ok);
    assert_eq!((rows, passed), (2, 1), "max residual {max:e}");
    assert!(max < 1e-8);
    let mut csv = ptr::null_mut();
    assert_eq!(unsafe { ff_report_csv(rep, &mut csv) }, FfStatus::Ok);
    let text = unsafe { CStr::from_ptr(csv) }.to_str().unwrap().to_owned();
    assert!(text.starts_with("identity,variant,x0"));
    assert_eq!(text.lines().count(), 3);
    unsafe {
        ff_string_free(csv);
        ff_report_free(rep);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fueterfrac.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["ff_frame_new", "ff_field_eval", "ff_prop_fractal_fueter", "ff_verify_scenario", "FF_STATUS_DOMAIN", "typedef struct FfField FfField"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // the header must be valid C when a compiler is present
    let probe = std::env::temp_dir().join(format!("fueterfrac-header-{}.c", std::process::id()));
    std::fs::write(&probe, format!("#include \"{}\"\nint main(void) {{ return FF_STATUS_OK; }}\n", header.display())).unwrap();
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror"]).arg(&probe).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let _ = std::fs::remove_file(&probe);
}
