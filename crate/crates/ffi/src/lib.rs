//! C ABI over the `uavsec` library.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every fallible call returns a [`UavsecStatus`];
//! on failure [`uavsec_last_error`] describes the problem. Strings returned
//! by the library are released with [`uavsec_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use uavsec::analysis::{hypervolume, practicality_crossover_bytes, Cipher, PracticalityInputs};
use uavsec::io::{ScenarioConfig, PRESETS};
use uavsec::moea::{is_permutation, run_algorithm, Algorithm, Genome, Individual, OptimizerConfig, OptimizerSettings, Problem};
use uavsec::scenarios::{evaluate_relay, evaluate_twoway, RelayProblem, RelaySolution, TwoWayProblem, TwoWaySolution};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UavsecStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConfigError = 3,
    RuntimeError = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UavsecAlgorithm {
    Imodaom = 0,
    Emoalo = 1,
    Mopso = 2,
    Random = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UavsecCipher {
    Des = 0,
    Aes = 1,
    Rsa = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UavsecScenarioKind {
    Relay = 0,
    TwoWay = 1,
}

enum Inner {
    Relay(RelayProblem),
    TwoWay(TwoWayProblem),
}

/// A validated relay or two-way scenario.
pub struct UavsecScenario {
    inner: Inner,
}

/// Archive of a finished optimizer run, sorted by objectives.
pub struct UavsecFront {
    members: Vec<Individual>,
    solutions: Vec<String>,
    evaluations: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

type Outcome = Result<(), (UavsecStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> UavsecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UavsecStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UavsecStatus::Panic
        }
    }
}

fn null(what: &str) -> (UavsecStatus, String) {
    (UavsecStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> (UavsecStatus, String) {
    (UavsecStatus::InvalidArgument, message.into())
}

fn config(message: impl ToString) -> (UavsecStatus, String) {
    (UavsecStatus::ConfigError, message.to_string())
}

fn runtime(message: impl ToString) -> (UavsecStatus, String) {
    (UavsecStatus::RuntimeError, message.to_string())
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (UavsecStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (UavsecStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn scenario_ref<'a>(s: *const UavsecScenario) -> Result<&'a UavsecScenario, (UavsecStatus, String)> {
    s.as_ref().ok_or_else(|| null("scenario"))
}

fn build_scenario(cfg: ScenarioConfig) -> Result<Box<UavsecScenario>, (UavsecStatus, String)> {
    let inner = match cfg {
        ScenarioConfig::Relay(s) => Inner::Relay(RelayProblem::new(s).map_err(config)?),
        ScenarioConfig::Twoway(s) => Inner::TwoWay(TwoWayProblem::new(s).map_err(config)?),
    };
    Ok(Box::new(UavsecScenario { inner }))
}

/// Last error message on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn uavsec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn uavsec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not be freed already.
#[no_mangle]
pub unsafe extern "C" fn uavsec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a scenario: `{"kind": "relay" | "twoway", ...}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uavsec_scenario_from_json(json: *const c_char, out: *mut *mut UavsecScenario) -> UavsecStatus {
    guard(|| {
        let cfg: ScenarioConfig = serde_json::from_str(text(json, "json")?).map_err(config)?;
        let s = build_scenario(cfg)?;
        write_out(out, Box::into_raw(s), "out")
    })
}

/// Loads the scenario of a shipped preset such as `relay_default`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uavsec_scenario_from_preset(name: *const c_char, out: *mut *mut UavsecScenario) -> UavsecStatus {
    guard(|| {
        let name = text(name, "name")?;
        let (_, body) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| config(format!("unknown preset {name:?}")))?;
        let run = uavsec::io::parse_config(body, name).map_err(config)?;
        let s = build_scenario(run.scenario)?;
        write_out(out, Box::into_raw(s), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be freed already.
#[no_mangle]
pub unsafe extern "C" fn uavsec_scenario_free(s: *mut UavsecScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uavsec_scenario_kind(s: *const UavsecScenario, out: *mut UavsecScenarioKind) -> UavsecStatus {
    guard(|| {
        let kind = match scenario_ref(s)?.inner {
            Inner::Relay(_) => UavsecScenarioKind::Relay,
            Inner::TwoWay(_) => UavsecScenarioKind::TwoWay,
        };
        write_out(out, kind, "out")
    })
}

/// Gene counts of the scenario's genome; `permutation` is 0 when there is none.
///
/// # Safety
/// `s` must be a live scenario handle; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn uavsec_scenario_genome_shape(
    s: *const UavsecScenario,
    continuous: *mut usize,
    integers: *mut usize,
    permutation: *mut usize,
) -> UavsecStatus {
    guard(|| {
        let schema = match &scenario_ref(s)?.inner {
            Inner::Relay(p) => p.schema(),
            Inner::TwoWay(p) => p.schema(),
        };
        write_out(continuous, schema.continuous.len(), "continuous")?;
        write_out(integers, schema.integers.len(), "integers")?;
        write_out(permutation, schema.permutation_len.unwrap_or(0), "permutation")
    })
}

/// Evaluates a solution given as JSON; writes `[f1, f2, f3]` to `out`.
///
/// # Safety
/// `s` must be a live scenario handle, `json` NUL-terminated, `out` room for 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn uavsec_scenario_evaluate_json(
    s: *const UavsecScenario,
    json: *const c_char,
    out: *mut f64,
) -> UavsecStatus {
    guard(|| {
        let body = text(json, "json")?;
        let obj = match &scenario_ref(s)?.inner {
            Inner::Relay(p) => {
                let sol: RelaySolution = serde_json::from_str(body).map_err(|e| invalid(e.to_string()))?;
                evaluate_relay(p.scenario(), &sol)
            }
            Inner::TwoWay(p) => {
                let sol: TwoWaySolution = serde_json::from_str(body).map_err(|e| invalid(e.to_string()))?;
                evaluate_twoway(p.scenario(), &sol)
            }
        }
        .map_err(|e| invalid(e.to_string()))?;
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(obj.to_array().as_ptr(), out, 3);
        Ok(())
    })
}

/// Repairs and evaluates a raw genome; writes `[f1, f2, f3]` to `out`.
///
/// # Safety
/// Array arguments must hold the stated number of elements; `out` room for 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn uavsec_scenario_evaluate_genome(
    s: *const UavsecScenario,
    continuous: *const f64,
    n_continuous: usize,
    integers: *const i64,
    n_integers: usize,
    permutation: *const usize,
    n_permutation: usize,
    out: *mut f64,
) -> UavsecStatus {
    guard(|| {
        let scenario = scenario_ref(s)?;
        let problem: &dyn Problem = match &scenario.inner {
            Inner::Relay(p) => p,
            Inner::TwoWay(p) => p,
        };
        let perm = slice(permutation, n_permutation, "permutation")?;
        let mut genome = Genome {
            continuous: slice(continuous, n_continuous, "continuous")?.to_vec(),
            integers: slice(integers, n_integers, "integers")?.to_vec(),
            permutation: problem.schema().permutation_len.map(|_| perm.to_vec()),
        };
        let schema = problem.schema();
        let perm_ok = match schema.permutation_len {
            Some(m) => is_permutation(perm, m),
            None => perm.is_empty(),
        };
        if genome.continuous.len() != schema.continuous.len() || genome.integers.len() != schema.integers.len() || !perm_ok {
            return Err(invalid("genome does not match the scenario's gene layout"));
        }
        schema.clamp(&mut genome);
        problem.repair(&mut genome);
        let obj = problem.evaluate(&genome).map_err(|e| runtime(e.0))?;
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(obj.as_ptr(), out, 3);
        Ok(())
    })
}

/// Runs an optimizer. `settings_json` may be null for the defaults.
///
/// # Safety
/// `s` must be a live scenario handle; `settings_json` null or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uavsec_optimize(
    s: *const UavsecScenario,
    algorithm: UavsecAlgorithm,
    seed: u64,
    settings_json: *const c_char,
    out: *mut *mut UavsecFront,
) -> UavsecStatus {
    guard(|| {
        let scenario = scenario_ref(s)?;
        let settings: OptimizerSettings = if settings_json.is_null() {
            OptimizerSettings::default()
        } else {
            serde_json::from_str(text(settings_json, "settings_json")?).map_err(config)?
        };
        settings.validate().map_err(config)?;
        let alg = match algorithm {
            UavsecAlgorithm::Imodaom => Algorithm::Imodaom,
            UavsecAlgorithm::Emoalo => Algorithm::Emoalo,
            UavsecAlgorithm::Mopso => Algorithm::Mopso,
            UavsecAlgorithm::Random => Algorithm::Random,
        };
        let cfg = OptimizerConfig::with_settings(settings, seed);
        let mut quiet = |_: &uavsec::moea::ProgressRecord| {};
        let (result, encode): (_, Box<dyn Fn(&Genome) -> String>) = match &scenario.inner {
            Inner::Relay(p) => (
                run_algorithm(alg, p, &cfg, &mut quiet),
                Box::new(|g| serde_json::to_string(&p.decode(g)).expect("solutions serialize")),
            ),
            Inner::TwoWay(p) => (
                run_algorithm(alg, p, &cfg, &mut quiet),
                Box::new(|g| serde_json::to_string(&p.decode(g)).expect("solutions serialize")),
            ),
        };
        let result = result.map_err(runtime)?;
        let mut members: Vec<Individual> = result.archive.members().cloned().collect();
        members.sort_by(|a, b| {
            a.objectives
                .iter()
                .zip(&b.objectives)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let solutions = members.iter().map(|m| encode(&m.genome)).collect();
        let front = Box::new(UavsecFront { members, solutions, evaluations: result.evaluations });
        write_out(out, Box::into_raw(front), "out")
    })
}

/// # Safety
/// `f` must come from this library and not be freed already.
#[no_mangle]
pub unsafe extern "C" fn uavsec_front_free(f: *mut UavsecFront) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of front members, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live front handle.
#[no_mangle]
pub unsafe extern "C" fn uavsec_front_len(f: *const UavsecFront) -> usize {
    f.as_ref().map_or(0, |f| f.members.len())
}

/// Objective evaluations spent by the run, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live front handle.
#[no_mangle]
pub unsafe extern "C" fn uavsec_front_evaluations(f: *const UavsecFront) -> usize {
    f.as_ref().map_or(0, |f| f.evaluations)
}

/// # Safety
/// `f` must be a live front handle; `out` room for 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn uavsec_front_objectives(f: *const UavsecFront, index: usize, out: *mut f64) -> UavsecStatus {
    guard(|| {
        let front = f.as_ref().ok_or_else(|| null("front"))?;
        let m = front.members.get(index).ok_or_else(|| invalid(format!("index {index} out of range")))?;
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(m.objectives.as_ptr(), out, 3);
        Ok(())
    })
}

/// Decoded solution of one member as JSON; release with `uavsec_string_free`.
///
/// # Safety
/// `f` must be a live front handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uavsec_front_solution_json(
    f: *const UavsecFront,
    index: usize,
    out: *mut *mut c_char,
) -> UavsecStatus {
    guard(|| {
        let front = f.as_ref().ok_or_else(|| null("front"))?;
        let s = front.solutions.get(index).ok_or_else(|| invalid(format!("index {index} out of range")))?;
        let c = CString::new(s.as_str()).map_err(runtime)?;
        write_out(out, c.into_raw(), "out")
    })
}

/// Exact hypervolume of `n` points of dimension `dims` (row-major).
///
/// # Safety
/// `points` must hold `n * dims` doubles, `reference` `dims`; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn uavsec_hypervolume(
    points: *const f64,
    n: usize,
    dims: usize,
    reference: *const f64,
    out: *mut f64,
) -> UavsecStatus {
    guard(|| {
        let flat = slice(points, n.checked_mul(dims).ok_or_else(|| invalid("size overflow"))?, "points")?;
        let reference = slice(reference, dims, "reference")?;
        let front: Vec<&[f64]> = if dims == 0 { Vec::new() } else { flat.chunks(dims).collect() };
        let hv = hypervolume(&front, reference).map_err(|e| invalid(e.to_string()))?;
        write_out(out, hv.value, "out")
    })
}

/// Transfer size in bytes beyond which the one-off optimization time is
/// cheaper than encrypting with `cipher` at its published throughput.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn uavsec_practicality_crossover_bytes(
    cipher: UavsecCipher,
    optimization_time_s: f64,
    out: *mut f64,
) -> UavsecStatus {
    guard(|| {
        let c = match cipher {
            UavsecCipher::Des => Cipher::Des,
            UavsecCipher::Aes => Cipher::Aes,
            UavsecCipher::Rsa => Cipher::Rsa,
        };
        let inputs = PracticalityInputs::with_reference_ciphers(optimization_time_s);
        let bytes = practicality_crossover_bytes(&inputs, c).map_err(|e| invalid(e.to_string()))?;
        write_out(out, bytes, "out")
    })
}
