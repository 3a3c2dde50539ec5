use std::ffi::{CStr, CString};
use std::ptr;

use phantom_ffi::*;

fn z(re: f64, ph: f64) -> PhPhantom {
    PhPhantom { re, ph }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ph_last_error_message()) }.to_str().unwrap().to_owned()
}

#[test]
fn ring_by_value() {
    assert_eq!(ph_mul(z(1.0, 2.0), z(3.0, 4.0)), z(3.0, 18.0));
    assert_eq!(ph_add(z(1.0, 2.0), z(3.0, 4.0)), z(4.0, 6.0));
    assert_eq!(ph_conjugate(z(1.0, 2.0)), z(3.0, -2.0));
    assert_eq!(ph_reduction(z(1.0, 2.0)), 3.0);
    assert!(ph_is_zero_divisor(z(0.0, 1.0)));
}

#[test]
fn fallible_calls_report_status_and_message() {
    let mut out = z(7.0, 7.0);
    assert_eq!(unsafe { ph_inverse(z(2.0, 2.0), &mut out) }, PhStatus::Ok);
    assert_eq!(out, z(0.5, -0.25));
    assert_eq!(last_error(), "");

    let before = out;
    assert_eq!(unsafe { ph_inverse(z(0.0, 1.0), &mut out) }, PhStatus::NotInvertible);
    assert_eq!(out, before);
    assert!(last_error().contains("not invertible"));

    assert_eq!(unsafe { ph_ln(z(-1.0, 0.0), &mut out) }, PhStatus::LogDomain);
    assert_eq!(unsafe { ph_inverse(z(2.0, 0.0), ptr::null_mut()) }, PhStatus::NullPointer);
}

#[test]
fn eval_and_render() {
    let src = CString::new("(1+2*p)^3").unwrap();
    let mut out = PhPhantom::default();
    assert_eq!(unsafe { ph_eval(src.as_ptr(), &mut out) }, PhStatus::Ok);
    assert_eq!(out, z(1.0, 26.0));

    let mut buf = [0 as std::ffi::c_char; 64];
    let n = unsafe { ph_render(out, buf.as_mut_ptr(), buf.len()) };
    assert_eq!(n, "1 + p*26".len());
    assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(), "1 + p*26");

    let mut small = [0 as std::ffi::c_char; 4];
    assert_eq!(unsafe { ph_render(out, small.as_mut_ptr(), small.len()) }, 8);
    assert_eq!(unsafe { CStr::from_ptr(small.as_ptr()) }.to_str().unwrap(), "1 +");

    let bad = CString::new("1 ^ p").unwrap();
    assert_eq!(unsafe { ph_eval(bad.as_ptr(), &mut out) }, PhStatus::SyntaxError);
    assert!(last_error().contains("byte 4"));
    assert_eq!(unsafe { ph_eval(ptr::null(), &mut out) }, PhStatus::NullPointer);
}

#[test]
fn measure_handles() {
    let labels = [CString::new("H").unwrap(), CString::new("T").unwrap()];
    let ptrs: Vec<_> = labels.iter().map(|s| s.as_ptr()).collect();
    let weights = [z(0.4, 0.2), z(0.6, -0.2)];
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ph_measure_new(ptrs.as_ptr(), weights.as_ptr(), 2, true, &mut m) }, PhStatus::Ok);
    let mut out = PhPhantom::default();
    assert_eq!(unsafe { ph_measure_prob(m, [0usize].as_ptr(), 1, &mut out) }, PhStatus::Ok);
    assert_eq!(out, z(0.4, 0.2));
    assert_eq!(unsafe { ph_measure_prob(m, [0usize, 1].as_ptr(), 2, &mut out) }, PhStatus::Ok);
    assert!((out.re - 1.0).abs() < 1e-15 && out.ph.abs() < 1e-15);
    assert_eq!(
        unsafe { ph_measure_conditional(m, [0usize].as_ptr(), 1, [0usize].as_ptr(), 1, &mut out) },
        PhStatus::Ok
    );
    assert!((out.re - 1.0).abs() < 1e-15 && out.ph.abs() < 1e-15);
    unsafe { ph_measure_free(m) };

    let gambler = CString::new(
        r#"{"mode":"strict","outcomes":[{"label":"W","re":0,"ph":1},{"label":"L","re":1,"ph":-1}]}"#,
    )
    .unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ph_measure_from_json(gambler.as_ptr(), &mut g) }, PhStatus::InvalidMeasure);
    assert!(g.is_null());
    assert!(last_error().contains("zero divisor"));
    let broken = CString::new("{").unwrap();
    assert_eq!(unsafe { ph_measure_from_json(broken.as_ptr(), &mut g) }, PhStatus::Schema);
    unsafe { ph_measure_free(ptr::null_mut()) };
}

#[test]
fn discrete_handles() {
    let mut x = ptr::null_mut();
    assert_eq!(unsafe { ph_discrete_bernoulli(z(0.4, 0.2), &mut x) }, PhStatus::Ok);
    let mut v = PhPhantom::default();
    assert_eq!(unsafe { ph_discrete_variance(x, &mut v) }, PhStatus::Ok);
    assert!((v.re - 0.24).abs() < 1e-15 && v.ph.abs() < 1e-15);
    assert_eq!(unsafe { ph_discrete_mgf(x, z(0.0, 0.0), &mut v) }, PhStatus::Ok);
    assert_eq!(v, z(1.0, 0.0));
    assert_eq!(unsafe { ph_discrete_cdf(x, z(0.5, 0.0), PhOrder::AbsNorm, 0.0, &mut v) }, PhStatus::BadOrder);

    let mut b = PhBound::default();
    assert_eq!(unsafe { ph_markov(x, z(0.5, 0.0), 3, &mut b) }, PhStatus::Ok);
    assert!(b.holds);
    assert_eq!(unsafe { ph_markov(x, z(0.5, 0.0), 9, &mut b) }, PhStatus::BadVariant);
    assert_eq!(unsafe { ph_chebyshev(x, 2.0, &mut b) }, PhStatus::Ok);
    assert_eq!(b.rhs.re, 0.25);

    let mut s = PhSimSummary::default();
    let status = unsafe { ph_simulate(x, PhLaw::Wlln, PhSelection::ReducedComponent, 42, 1, 10_000, 0.0, &mut s) };
    assert_eq!(status, PhStatus::Ok);
    assert!((s.target_mean - 0.6).abs() < 1e-15);
    assert!(s.ks_statistic.is_nan());
    unsafe { ph_discrete_free(x) };

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { ph_discrete_poisson(z(-1.0, 0.0), &mut bad) }, PhStatus::BadParameter);
    assert_eq!(unsafe { ph_discrete_variance(ptr::null(), &mut v) }, PhStatus::NullPointer);
}

#[test]
fn header_compiles_as_c() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include").join("phantom_ffi.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["ph_eval", "ph_measure_free", "ph_discrete_free", "ph_last_error_message", "PH_STATUS_OK"] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; header syntax not checked");
        return;
    };
    let probe = std::env::temp_dir().join(format!("phantom_ffi_probe_{}.c", std::process::id()));
    std::fs::write(&probe, "#include \"phantom_ffi.h\"\nint main(void) { PhPhantom z = ph_add((PhPhantom){1, 2}, (PhPhantom){3, 4}); return (int)z.re; }\n").unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c11", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&probe)
        .status()
        .unwrap();
    let _ = std::fs::remove_file(&probe);
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}
