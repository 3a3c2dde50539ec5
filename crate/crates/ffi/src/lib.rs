//! C ABI for `phantom-core`.
//!
//! Phantom numbers cross the boundary by value as [`PhPhantom`]. Measures
//! and random variables are opaque handles created by `ph_*_new` style
//! functions and released with the matching `ph_*_free`.
//!
//! Fallible functions return a [`PhStatus`] and write their result through
//! an out pointer, which is left untouched on failure. The message of the
//! most recent failure on the calling thread is available from
//! [`ph_last_error_message`]. Panics never cross the boundary; they are
//! reported as [`PhStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use phantom_core::cli::expr::{eval_str, render_phantom, EvalError};
use phantom_core::cli::MeasureDoc;
use phantom_core::distributions::{build, DistSpec, Prv};
use phantom_core::limits::{
    chebyshev_c_form, clt_experiment, markov_bound, slln_experiment, wlln_experiment, MarkovVariant, Selection,
    SimConfig,
};
use phantom_core::measure::{Event, MeasureMode, PhantomMeasure, SampleSpace};
use phantom_core::randvar::{DiscretePRV, RandomVariable, Threshold};
use phantom_core::{OrderKind, Phantom, PhantomError};

/// A phantom number `re + p*ph`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhPhantom {
    pub re: f64,
    pub ph: f64,
}

impl From<Phantom> for PhPhantom {
    fn from(z: Phantom) -> Self {
        PhPhantom { re: z.re, ph: z.ph }
    }
}

impl From<PhPhantom> for Phantom {
    fn from(z: PhPhantom) -> Self {
        Phantom::new(z.re, z.ph)
    }
}

/// Result codes. `PH_STATUS_OK` is zero; every other value is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    SyntaxError = 3,
    NotInvertible = 4,
    RootDomain = 5,
    LogDomain = 6,
    BadAlpha = 7,
    OutOfDomain = 8,
    QuadratureFailure = 9,
    UnknownOutcome = 10,
    ConditioningDegenerate = 11,
    BadPartition = 12,
    BadCoefficients = 13,
    InvalidMeasure = 14,
    InvalidVariable = 15,
    BadOrder = 16,
    EmptyRange = 17,
    DegenerateVariance = 18,
    BadParameter = 19,
    BadVariant = 20,
    Schema = 21,
    Panic = 99,
}

impl From<&PhantomError> for PhStatus {
    fn from(e: &PhantomError) -> Self {
        match e {
            PhantomError::NotInvertible(_) => PhStatus::NotInvertible,
            PhantomError::RootDomain(_) => PhStatus::RootDomain,
            PhantomError::LogDomain(_) => PhStatus::LogDomain,
            PhantomError::BadAlpha(_) => PhStatus::BadAlpha,
            PhantomError::OutOfDomain { .. } => PhStatus::OutOfDomain,
            PhantomError::QuadratureFailure { .. } => PhStatus::QuadratureFailure,
            PhantomError::UnknownOutcome(_) => PhStatus::UnknownOutcome,
            PhantomError::ConditioningDegenerate(_) => PhStatus::ConditioningDegenerate,
            PhantomError::BadPartition(_) => PhStatus::BadPartition,
            PhantomError::BadCoefficients(_) => PhStatus::BadCoefficients,
            PhantomError::InvalidMeasure(_) => PhStatus::InvalidMeasure,
            PhantomError::InvalidVariable(_) => PhStatus::InvalidVariable,
            PhantomError::BadOrder(_) => PhStatus::BadOrder,
            PhantomError::EmptyRange => PhStatus::EmptyRange,
            PhantomError::DegenerateVariance(_) => PhStatus::DegenerateVariance,
            PhantomError::BadParameter(_) => PhStatus::BadParameter,
            PhantomError::BadVariant(_) => PhStatus::BadVariant,
        }
    }
}

/// Orders accepted by comparison and CDF functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhOrder {
    Lex = 0,
    /// The alpha map; the `alpha` argument must be positive.
    Alpha = 1,
    RealTerm = 2,
    AbsNorm = 3,
}

fn order_kind(order: PhOrder, alpha: f64) -> OrderKind {
    match order {
        PhOrder::Lex => OrderKind::Lex,
        PhOrder::Alpha => OrderKind::Alpha(alpha),
        PhOrder::RealTerm => OrderKind::RealTerm,
        PhOrder::AbsNorm => OrderKind::AbsNorm,
    }
}

/// Opaque finite phantom probability measure.
pub struct PhMeasure(PhantomMeasure);

/// Opaque discrete phantom random variable.
pub struct PhDiscrete(DiscretePRV);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(PhStatus, String);

impl From<PhantomError> for Failure {
    fn from(e: PhantomError) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Syntax(s) => Failure(PhStatus::SyntaxError, s.to_string()),
            EvalError::Domain(d) => d.into(),
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PhStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status and recording the
/// message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PhStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PhStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(PhStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// The message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn ph_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn ph_add(a: PhPhantom, b: PhPhantom) -> PhPhantom {
    (Phantom::from(a) + Phantom::from(b)).into()
}

#[no_mangle]
pub extern "C" fn ph_sub(a: PhPhantom, b: PhPhantom) -> PhPhantom {
    (Phantom::from(a) - Phantom::from(b)).into()
}

#[no_mangle]
pub extern "C" fn ph_mul(a: PhPhantom, b: PhPhantom) -> PhPhantom {
    (Phantom::from(a) * Phantom::from(b)).into()
}

#[no_mangle]
pub extern "C" fn ph_conjugate(z: PhPhantom) -> PhPhantom {
    Phantom::from(z).conjugate().into()
}

#[no_mangle]
pub extern "C" fn ph_exp(z: PhPhantom) -> PhPhantom {
    Phantom::from(z).exp().into()
}

/// The reduction `re + ph`.
#[no_mangle]
pub extern "C" fn ph_reduction(z: PhPhantom) -> f64 {
    Phantom::from(z).reduction()
}

/// The modulus `sqrt((re^2 + (re + ph)^2) / 2)`.
#[no_mangle]
pub extern "C" fn ph_abs(z: PhPhantom) -> f64 {
    Phantom::from(z).abs()
}

#[no_mangle]
pub extern "C" fn ph_is_zero_divisor(z: PhPhantom) -> bool {
    Phantom::from(z).is_zero_divisor()
}

/// # Safety
/// `out` must be null or valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_inverse(z: PhPhantom, out: *mut PhPhantom) -> PhStatus {
    guard(|| write_out(out, Phantom::from(z).inverse()?.into()))
}

/// # Safety
/// `out` must be null or valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_div(a: PhPhantom, b: PhPhantom, out: *mut PhPhantom) -> PhStatus {
    guard(|| write_out(out, Phantom::from(a).div(b.into())?.into()))
}

/// # Safety
/// `out` must be null or valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_pow_int(z: PhPhantom, n: i32, out: *mut PhPhantom) -> PhStatus {
    guard(|| write_out(out, Phantom::from(z).pow_int(n)?.into()))
}

/// # Safety
/// `out` must be null or valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_nth_root(z: PhPhantom, n: u32, out: *mut PhPhantom) -> PhStatus {
    guard(|| write_out(out, Phantom::from(z).nth_root(n)?.into()))
}

/// # Safety
/// `out` must be null or valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_ln(z: PhPhantom, out: *mut PhPhantom) -> PhStatus {
    guard(|| write_out(out, Phantom::from(z).ln()?.into()))
}

/// # Safety
/// `out` must be null or valid for writing one `f64`.
#[no_mangle]
pub unsafe extern "C" fn ph_alpha_value(z: PhPhantom, alpha: f64, out: *mut f64) -> PhStatus {
    guard(|| write_out(out, Phantom::from(z).alpha_value(alpha)?))
}

/// Writes -1, 0, or 1 as `a` is below, equivalent to, or above `b`.
///
/// # Safety
/// `out` must be null or valid for writing one `i32`.
#[no_mangle]
pub unsafe extern "C" fn ph_compare(a: PhPhantom, b: PhPhantom, order: PhOrder, alpha: f64, out: *mut i32) -> PhStatus {
    guard(|| {
        let ord = order_kind(order, alpha).validated()?;
        let c = ord.compare(a.into(), b.into());
        write_out(out, if c.is_le() && c.is_ge() { 0 } else if c.is_le() { -1 } else { 1 })
    })
}

/// Evaluates an expression such as `"(1+2*p)^3"`.
///
/// # Safety
/// `src` must be null or a NUL-terminated string; `out` must be null or
/// valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_eval(src: *const c_char, out: *mut PhPhantom) -> PhStatus {
    guard(|| {
        let v = eval_str(str_arg(src, "src")?)?;
        write_out(out, v.to_phantom().into())
    })
}

/// Renders `z` as `"a + p*b"` at 12 significant digits into `buf`,
/// truncating to `cap - 1` bytes plus NUL. Returns the full length
/// excluding the NUL, like `snprintf`.
///
/// # Safety
/// `buf` must be null or valid for writing `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn ph_render(z: PhPhantom, buf: *mut c_char, cap: usize) -> usize {
    let text = render_phantom(z.into());
    if !buf.is_null() && cap > 0 {
        let n = text.len().min(cap - 1);
        std::ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), n);
        *buf.add(n) = 0;
    }
    text.len()
}

/// Builds and validates a measure from `n` labels and weights.
///
/// # Safety
/// `labels` must point to `n` NUL-terminated strings, `weights` to `n`
/// values, and `out` must be valid for writing one pointer. Release the
/// result with [`ph_measure_free`].
#[no_mangle]
pub unsafe extern "C" fn ph_measure_new(
    labels: *const *const c_char,
    weights: *const PhPhantom,
    n: usize,
    strict: bool,
    out: *mut *mut PhMeasure,
) -> PhStatus {
    guard(|| {
        let labels = slice_arg(labels, n, "labels")?
            .iter()
            .map(|&s| str_arg(s, "label").map(str::to_owned))
            .collect::<Result<Vec<_>, _>>()?;
        let weights = slice_arg(weights, n, "weights")?.iter().map(|&w| w.into()).collect();
        let mode = if strict { MeasureMode::Strict } else { MeasureMode::Lenient };
        let m = PhantomMeasure::new(SampleSpace::new(labels)?, weights, mode)?;
        write_out(out, Box::into_raw(Box::new(PhMeasure(m))))
    })
}

/// Builds and validates a measure from a JSON document
/// `{"mode": ..., "outcomes": [{"label": ..., "re": ..., "ph": ...}]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writing one
/// pointer. Release the result with [`ph_measure_free`].
#[no_mangle]
pub unsafe extern "C" fn ph_measure_from_json(json: *const c_char, out: *mut *mut PhMeasure) -> PhStatus {
    guard(|| {
        let doc = MeasureDoc::from_json(str_arg(json, "json")?).map_err(|e| Failure(PhStatus::Schema, e))?;
        let m = doc.to_measure()?;
        let report = m.validate();
        if !report.valid {
            let msgs: Vec<_> = report.findings.iter().map(|f| f.message.as_str()).collect();
            return Err(Failure(PhStatus::InvalidMeasure, msgs.join("; ")));
        }
        write_out(out, Box::into_raw(Box::new(PhMeasure(m))))
    })
}

/// # Safety
/// `m` must be null or a pointer returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ph_measure_free(m: *mut PhMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `P(A)` for the event of the `k` outcome indices in `a`.
///
/// # Safety
/// `m` must be a live measure handle, `a` must point to `k` indices, and
/// `out` must be valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_measure_prob(m: *const PhMeasure, a: *const usize, k: usize, out: *mut PhPhantom) -> PhStatus {
    guard(|| {
        let m = &handle(m, "measure")?.0;
        let a = Event::from_indices(slice_arg(a, k, "a")?.iter().copied());
        write_out(out, m.prob(&a)?.into())
    })
}

/// `P(A | B)`; needs a strict measure and an invertible `P(B)`.
///
/// # Safety
/// `m` must be a live measure handle, `a` and `b` must point to `ka` and
/// `kb` indices, and `out` must be valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_measure_conditional(
    m: *const PhMeasure,
    a: *const usize,
    ka: usize,
    b: *const usize,
    kb: usize,
    out: *mut PhPhantom,
) -> PhStatus {
    guard(|| {
        let m = &handle(m, "measure")?.0;
        let a = Event::from_indices(slice_arg(a, ka, "a")?.iter().copied());
        let b = Event::from_indices(slice_arg(b, kb, "b")?.iter().copied());
        write_out(out, m.conditional(&a, &b)?.into())
    })
}

/// Builds a discrete variable from `n` values and probabilities.
///
/// # Safety
/// `values` and `probs` must point to `n` values each and `out` must be
/// valid for writing one pointer. Release with [`ph_discrete_free`].
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_new(
    values: *const PhPhantom,
    probs: *const PhPhantom,
    n: usize,
    out: *mut *mut PhDiscrete,
) -> PhStatus {
    guard(|| {
        let v = slice_arg(values, n, "values")?;
        let p = slice_arg(probs, n, "probs")?;
        let x = DiscretePRV::new(v.iter().zip(p).map(|(&v, &p)| (v.into(), p.into())).collect())?;
        write_out(out, Box::into_raw(Box::new(PhDiscrete(x))))
    })
}

unsafe fn discrete_from_spec(spec: DistSpec, out: *mut *mut PhDiscrete) -> PhStatus {
    guard(|| match build(&spec)?.prv {
        Prv::Discrete(x) => write_out(out, Box::into_raw(Box::new(PhDiscrete(x)))),
        Prv::Continuous(_) => Err(Failure(PhStatus::BadParameter, "not a discrete family".into())),
    })
}

/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_bernoulli(p: PhPhantom, out: *mut *mut PhDiscrete) -> PhStatus {
    discrete_from_spec(DistSpec::bernoulli(p.into()), out)
}

/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_binomial(n: u32, p: PhPhantom, out: *mut *mut PhDiscrete) -> PhStatus {
    discrete_from_spec(DistSpec::binomial(n, p.into()), out)
}

/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_geometric(p: PhPhantom, out: *mut *mut PhDiscrete) -> PhStatus {
    discrete_from_spec(DistSpec::geometric(p.into()), out)
}

/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_poisson(lambda: PhPhantom, out: *mut *mut PhDiscrete) -> PhStatus {
    discrete_from_spec(DistSpec::poisson(lambda.into()), out)
}

/// # Safety
/// `x` must be null or a pointer returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_free(x: *mut PhDiscrete) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// `E[X^n]`.
///
/// # Safety
/// `x` must be a live handle and `out` valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_moment(x: *const PhDiscrete, n: u32, out: *mut PhPhantom) -> PhStatus {
    guard(|| write_out(out, handle(x, "x")?.0.moment(n)?.into()))
}

/// # Safety
/// `x` must be a live handle and `out` valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_variance(x: *const PhDiscrete, out: *mut PhPhantom) -> PhStatus {
    guard(|| write_out(out, handle(x, "x")?.0.variance()?.into()))
}

/// # Safety
/// `x` must be a live handle and `out` valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_mgf(x: *const PhDiscrete, zeta: PhPhantom, out: *mut PhPhantom) -> PhStatus {
    guard(|| write_out(out, handle(x, "x")?.0.mgf(zeta.into())?.into()))
}

/// `P(X <= z)` under `order`; only lex and alpha orders are accepted.
///
/// # Safety
/// `x` must be a live handle and `out` valid for writing one `PhPhantom`.
#[no_mangle]
pub unsafe extern "C" fn ph_discrete_cdf(
    x: *const PhDiscrete,
    z: PhPhantom,
    order: PhOrder,
    alpha: f64,
    out: *mut PhPhantom,
) -> PhStatus {
    guard(|| {
        let x = &handle(x, "x")?.0;
        write_out(out, x.cdf(Threshold::At(z.into()), order_kind(order, alpha))?.into())
    })
}

/// Both sides of an inequality and whether it holds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhBound {
    pub lhs: PhPhantom,
    pub rhs: PhPhantom,
    pub holds: bool,
}

/// Markov's inequality; `variant` is 1, 2, or 3 for the order, abs-order,
/// and real-modulus forms. Comparisons use the lexicographic order.
///
/// # Safety
/// `x` must be a live handle and `out` valid for writing one `PhBound`.
#[no_mangle]
pub unsafe extern "C" fn ph_markov(x: *const PhDiscrete, z: PhPhantom, variant: u32, out: *mut PhBound) -> PhStatus {
    guard(|| {
        let variant = match variant {
            1 => MarkovVariant::Order,
            2 => MarkovVariant::AbsOrder,
            3 => MarkovVariant::AbsAbs,
            v => return Err(Failure(PhStatus::BadVariant, format!("unknown variant {v}"))),
        };
        let c = markov_bound(&handle(x, "x")?.0, z.into(), variant, OrderKind::Lex)?;
        write_out(out, PhBound { lhs: c.lhs.into(), rhs: c.rhs.into(), holds: c.holds })
    })
}

/// Chebyshev's inequality at `c` standard deviations; `rhs` is `1/c^2`.
/// Both sides are real, carried in the `re` fields.
///
/// # Safety
/// `x` must be a live handle and `out` valid for writing one `PhBound`.
#[no_mangle]
pub unsafe extern "C" fn ph_chebyshev(x: *const PhDiscrete, c: f64, out: *mut PhBound) -> PhStatus {
    guard(|| {
        let r = chebyshev_c_form(&handle(x, "x")?.0, c)?;
        let real = |v| PhPhantom { re: v, ph: 0.0 };
        write_out(out, PhBound { lhs: real(r.lhs), rhs: real(r.rhs), holds: r.holds })
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhLaw {
    Wlln = 0,
    Clt = 1,
    Slln = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhSelection {
    RealComponent = 0,
    ReducedComponent = 1,
    Midpoint = 2,
}

/// Scalar results of a simulation. Absent statistics are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhSimSummary {
    pub empirical_mean: f64,
    pub target_mean: f64,
    pub deviation: f64,
    pub ks_statistic: f64,
    pub ks_raw: f64,
    pub slln_fraction: f64,
}

/// Runs one experiment. `epsilon` is used by the strong law only.
///
/// # Safety
/// `x` must be a live handle and `out` valid for writing one
/// `PhSimSummary`.
#[no_mangle]
pub unsafe extern "C" fn ph_simulate(
    x: *const PhDiscrete,
    law: PhLaw,
    selection: PhSelection,
    seed: u64,
    reps: usize,
    n: usize,
    epsilon: f64,
    out: *mut PhSimSummary,
) -> PhStatus {
    guard(|| {
        let x = &handle(x, "x")?.0;
        let selection = match selection {
            PhSelection::RealComponent => Selection::RealComponent,
            PhSelection::ReducedComponent => Selection::ReducedComponent,
            PhSelection::Midpoint => Selection::Midpoint,
        };
        let cfg = SimConfig::new(seed, reps, n, selection)?;
        let r = match law {
            PhLaw::Wlln => wlln_experiment(x, &cfg)?,
            PhLaw::Clt => clt_experiment(x, &cfg)?,
            PhLaw::Slln => slln_experiment(x, &cfg, epsilon)?,
        };
        write_out(
            out,
            PhSimSummary {
                empirical_mean: r.empirical_mean,
                target_mean: r.target_mean,
                deviation: r.deviation,
                ks_statistic: r.ks_statistic.unwrap_or(f64::NAN),
                ks_raw: r.ks_raw.unwrap_or(f64::NAN),
                slln_fraction: r.slln_fraction.unwrap_or(f64::NAN),
            },
        )
    })
}
