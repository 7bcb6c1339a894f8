//! Evaluation of JSON requests `{"op": ..., args...}`.

use std::cmp::Ordering;

use serde_json::{json, Value};

use witt_smooth_core::analysis::{
    self, AphiMatrix, Cyclicity, Height, Intertwining, TruncationWindow,
};
use witt_smooth_core::gln::{self, check_gln_relations};
use witt_smooth_core::module::{act, ModuleVector, SmoothModule};
use witt_smooth_core::series::{continuous_act, PowerSeriesDerivation};
use witt_smooth_core::weyl::{canonical_projection, p0_act, p0_reach_one, projection_phi};
use witt_smooth_core::witt::basis_of_grade;
use witt_smooth_core::{families, MultiIndex};

use crate::json::{self as js};
use crate::modules::{character_from, module_from, AnyModule};
use crate::CliError;

/// Window degree used when a request gives none.
pub const DEFAULT_DEGREE: u32 = 4;

/// Every operation name accepted by [`eval`].
pub const OPERATIONS: &[&str] = &[
    "mi_add",
    "mi_sub",
    "mi_binomial",
    "mi_factorial",
    "lex_compare",
    "bracket",
    "grade_component",
    "basis_of_grade",
    "apply_to_polynomial",
    "weyl_multiply",
    "p0_act",
    "p0_reach_one",
    "projection_phi",
    "canonical_projection",
    "exterior_power",
    "one_dim_module",
    "tau_twist",
    "check_gln_relations",
    "joint_eigenvectors",
    "module_summary",
    "act",
    "l_n_generators",
    "continuous_act",
    "quotient_graded_dims",
    "stabilizer_space",
    "annihilator_space",
    "height",
    "cyclicity_certificate",
    "local_finiteness_orbit",
    "smoothness_bound_check",
    "aphi_det",
    "aphi_matrix",
    "quasi_whittaker_vectors_deg1",
    "intertwiner_check",
];

/// `"generators"`, or the `L_n(P₀, r)` spanning set for `"l_n": r`.
fn generators_from(req: &Value, m: &AnyModule, w: &TruncationWindow) -> Result<Vec<ModuleVector>, CliError> {
    match req.get("l_n") {
        Some(r) => {
            let r = r
                .as_u64()
                .ok_or_else(|| CliError::Usage("\"l_n\" must be a positive integer".into()))?;
            Ok(families::l_n_generators(m.arity(), r as usize, w.degree.saturating_sub(1))?)
        }
        None => vectors_from(m, list_arg(req, "generators")?),
    }
}

fn arg<'a>(req: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    req.get(key)
        .ok_or_else(|| CliError::Usage(format!("missing argument {key:?}")))
}

fn int_arg(req: &Value, key: &str) -> Result<i64, CliError> {
    arg(req, key)?
        .as_i64()
        .ok_or_else(|| CliError::Usage(format!("argument {key:?} must be an integer")))
}

fn uint_arg(req: &Value, key: &str) -> Result<u64, CliError> {
    arg(req, key)?
        .as_u64()
        .ok_or_else(|| CliError::Usage(format!("argument {key:?} must be a non-negative integer")))
}

fn list_arg<'a>(req: &'a Value, key: &str) -> Result<&'a Vec<Value>, CliError> {
    arg(req, key)?
        .as_array()
        .ok_or_else(|| CliError::Usage(format!("argument {key:?} must be a list")))
}

/// `{"degree", "grade_cap", "fiber_degree"}`, each optional; the defaults
/// give a complete window of degree [`DEFAULT_DEGREE`].
pub fn window_from<M: SmoothModule + ?Sized>(req: &Value, m: &M) -> Result<TruncationWindow, CliError> {
    let empty = json!({});
    let w = req.get("window").unwrap_or(&empty);
    let degree = match w.get("degree") {
        Some(_) => uint_arg(w, "degree")? as u32,
        None => DEFAULT_DEGREE,
    };
    let mut window = TruncationWindow::for_module(m, degree);
    if w.get("grade_cap").is_some() {
        window.grade_cap = int_arg(w, "grade_cap")? as i32;
    }
    if w.get("fiber_degree").is_some() {
        window = window.with_fiber_degree(uint_arg(w, "fiber_degree")? as u32);
    }
    Ok(window)
}

pub fn window_to(w: &TruncationWindow) -> Value {
    json!({"degree": w.degree, "grade_cap": w.grade_cap, "fiber_degree": w.fiber_degree})
}

fn vectors_to(vs: &[ModuleVector]) -> Value {
    Value::Array(vs.iter().map(js::vector_to).collect())
}

fn vectors_from(m: &AnyModule, list: &[Value]) -> Result<Vec<ModuleVector>, CliError> {
    list.iter().map(|v| m.vector(v)).collect()
}

fn symbol_to(sym: &witt_smooth_core::witt::Symbol) -> Value {
    json!({"alpha": js::multi_index_to(&sym.0), "i": sym.1 + 1})
}

fn pair(req: &Value) -> Result<(MultiIndex, MultiIndex), CliError> {
    Ok((js::multi_index_from(arg(req, "a")?)?, js::multi_index_from(arg(req, "b")?)?))
}

/// Evaluates one request object, or each element of a list of requests.
pub fn eval(req: &Value) -> Result<Value, CliError> {
    if let Some(list) = req.as_array() {
        return list.iter().map(eval).collect::<Result<Vec<_>, _>>().map(Value::Array);
    }
    let op = arg(req, "op")?
        .as_str()
        .ok_or_else(|| CliError::Usage("\"op\" must be a string".into()))?;
    match op {
        "mi_add" => {
            let (a, b) = pair(req)?;
            Ok(js::multi_index_to(&a.add(&b)?))
        }
        "mi_sub" => {
            let (a, b) = pair(req)?;
            Ok(a.sub(&b)?.map_or(Value::Null, |d| js::multi_index_to(&d)))
        }
        "mi_binomial" => {
            let (a, b) = pair(req)?;
            Ok(js::scalar_to(&a.binomial(&b)?))
        }
        "mi_factorial" => Ok(js::scalar_to(&js::multi_index_from(arg(req, "a")?)?.factorial())),
        "lex_compare" => {
            let (a, b) = pair(req)?;
            Ok(json!(match a.lex_compare(&b)? {
                Ordering::Less => "less",
                Ordering::Equal => "equal",
                Ordering::Greater => "greater",
            }))
        }
        "bracket" => {
            let x = js::witt_from(arg(req, "x")?)?;
            let y = js::witt_from(arg(req, "y")?)?;
            Ok(js::witt_to(&x.bracket(&y)?))
        }
        "grade_component" => {
            let x = js::witt_from(arg(req, "x")?)?;
            Ok(js::witt_to(&x.grade_component(int_arg(req, "k")? as i32)))
        }
        "basis_of_grade" => {
            let n = uint_arg(req, "n")? as usize;
            let k = int_arg(req, "k")? as i32;
            Ok(Value::Array(basis_of_grade(n, k).iter().map(js::witt_to).collect()))
        }
        "apply_to_polynomial" => {
            let x = js::witt_from(arg(req, "x")?)?;
            let f = js::polynomial_from(arg(req, "f")?)?;
            Ok(js::polynomial_to(&x.apply_to_polynomial(&f)?))
        }
        "weyl_multiply" => {
            let a = js::weyl_from(arg(req, "a")?)?;
            let b = js::weyl_from(arg(req, "b")?)?;
            Ok(js::weyl_to(&a.multiply(&b)?))
        }
        "p0_act" => {
            let a = js::weyl_from(arg(req, "a")?)?;
            let v = js::p0_from(arg(req, "v")?)?;
            Ok(js::p0_to(&p0_act(&a, &v)?))
        }
        "p0_reach_one" => {
            let (beta, c) = p0_reach_one(&js::p0_from(arg(req, "v")?)?)?;
            Ok(json!({"beta": js::multi_index_to(&beta), "c": js::scalar_to(&c)}))
        }
        "projection_phi" => Ok(js::p0_to(&projection_phi(&js::weyl_from(arg(req, "a")?)?))),
        "canonical_projection" => Ok(js::p0_to(&canonical_projection(&js::weyl_from(arg(req, "a")?)?))),
        "exterior_power" => {
            let n = uint_arg(req, "n")? as usize;
            Ok(js::gln_to(&gln::exterior_power(n, uint_arg(req, "k")? as usize)?))
        }
        "one_dim_module" => {
            let n = uint_arg(req, "n")? as usize;
            Ok(js::gln_to(&gln::one_dim_module(n, js::scalar_from(arg(req, "b")?)?)?))
        }
        "tau_twist" => Ok(js::gln_to(&gln::tau_twist(&js::gln_from(arg(req, "module")?)?))),
        "check_gln_relations" => {
            let (n, mats, _) = js::gln_raw_from(arg(req, "module")?)?;
            Ok(match check_gln_relations(n, &mats)? {
                None => json!({"pass": true}),
                Some(v) => json!({"pass": false, "violation": [v.i + 1, v.j + 1, v.k + 1, v.l + 1]}),
            })
        }
        "joint_eigenvectors" => {
            let m = js::gln_from(arg(req, "module")?)?;
            let ev = js::scalars_from(arg(req, "eigenvalues")?)?;
            let basis = gln::joint_eigenvectors(&m, &ev)?;
            Ok(Value::Array(basis.iter().map(|v| js::scalars_to(v)).collect()))
        }
        "module_summary" => Ok(module_from(arg(req, "module")?)?.summary()),
        "act" => {
            let m = module_from(arg(req, "module")?)?;
            let x = js::witt_from(arg(req, "x")?)?;
            let v = m.vector(arg(req, "v")?)?;
            Ok(js::vector_to(&act(&m, &x, &v)?))
        }
        "l_n_generators" => {
            let n = uint_arg(req, "n")? as usize;
            let r = uint_arg(req, "r")? as usize;
            let bound = uint_arg(req, "bound")? as u32;
            Ok(vectors_to(&families::l_n_generators(n, r, bound)?))
        }
        "continuous_act" => {
            let m = module_from(arg(req, "module")?)?;
            let comps = list_arg(req, "series")?
                .iter()
                .map(js::witt_from)
                .collect::<Result<Vec<_>, _>>()?;
            let d = PowerSeriesDerivation::new(m.arity(), comps)?;
            let v = m.vector(arg(req, "v")?)?;
            Ok(js::vector_to(&continuous_act(&d, &v, &m)?))
        }
        "quotient_graded_dims" => {
            let m = module_from(arg(req, "module")?)?;
            let w = window_from(req, &m)?;
            let gens = generators_from(req, &m, &w)?;
            let dims = analysis::quotient_graded_dims(&m, &w, &gens)?;
            Ok(json!({"dims": dims, "window": window_to(&w)}))
        }
        "stabilizer_space" => {
            let m = module_from(arg(req, "module")?)?;
            let w = window_from(req, &m)?;
            let gens = generators_from(req, &m, &w)?;
            let d = match req.get("slice_degree") {
                Some(_) => int_arg(req, "slice_degree")? as u32,
                None => w.degree.saturating_sub(1),
            };
            let basis = analysis::stabilizer_space(&m, &w, &gens, d)?;
            Ok(json!({"dim": basis.len(), "basis": vectors_to(&basis), "slice_degree": d,
                      "truncated": true, "window": window_to(&w)}))
        }
        "annihilator_space" => {
            let m = module_from(arg(req, "module")?)?;
            let w = window_from(req, &m)?;
            let r = int_arg(req, "r")? as i32;
            let basis = analysis::annihilator_space(&m, &w, r)?;
            Ok(json!({"r": r, "dim": basis.len(), "basis": vectors_to(&basis), "window": window_to(&w)}))
        }
        "height" => {
            let m = module_from(arg(req, "module")?)?;
            let w = window_from(req, &m)?;
            Ok(match analysis::height(&m, &w)? {
                Height::Exact(r) => json!({"status": "exact", "height": r, "window": window_to(&w)}),
                Height::Above(k) => json!({"status": "above", "height": null, "above": k, "window": window_to(&w)}),
            })
        }
        "cyclicity_certificate" => {
            let m = module_from(arg(req, "module")?)?;
            let w = window_from(req, &m)?;
            let v = m.vector(arg(req, "v")?)?;
            let d = match req.get("slice_degree") {
                Some(_) => uint_arg(req, "slice_degree")? as u32,
                None => w.degree.saturating_sub(1),
            };
            Ok(match analysis::cyclicity_certificate(&m, &w, &v, d)? {
                Cyclicity::Certificate { slice_dim } => json!({
                    "pass": true, "status": "certificate", "slice_degree": d,
                    "slice_dim": slice_dim, "window": window_to(&w),
                }),
                Cyclicity::Counterexample { reached, missing } => json!({
                    "pass": false, "status": "counterexample", "slice_degree": d,
                    "reached": vectors_to(&reached), "missing": vectors_to(&missing),
                    "window": window_to(&w),
                }),
            })
        }
        "local_finiteness_orbit" => {
            let m = module_from(arg(req, "module")?)?;
            let w = window_from(req, &m)?;
            let i = uint_arg(req, "i")? as usize;
            if i == 0 || i > m.arity() {
                return Err(CliError::Usage(format!("direction {i} not in 1..={}", m.arity())));
            }
            let k = uint_arg(req, "k")? as u32;
            let v = m.vector(arg(req, "v")?)?;
            let dim = analysis::local_finiteness_orbit(&m, &w, i - 1, k, &v)?;
            Ok(json!({"dim": dim, "window": window_to(&w)}))
        }
        "smoothness_bound_check" => {
            let m = module_from(arg(req, "module")?)?;
            let w = window_from(req, &m)?;
            let alpha = js::multi_index_from(arg(req, "alpha")?)?;
            let b = analysis::smoothness_bound_check(&m, &w, &alpha)?;
            Ok(json!({
                "pass": b.holds(), "least": b.least, "predicted": b.predicted,
                "scanned": b.scanned, "window": window_to(&w),
            }))
        }
        "aphi_det" => {
            let phi = character_from(arg(req, "phi")?)?;
            Ok(js::scalar_to(&analysis::aphi_det(&phi)?))
        }
        "aphi_matrix" => {
            let phi = character_from(arg(req, "phi")?)?;
            let a = AphiMatrix::new(&phi);
            Ok(json!({
                "matrix": js::matrix_to(&a.entries), "det": js::scalar_to(&a.determinant()),
                "rank": a.rank(), "kernel": js::matrix_to(&a.kernel()),
            }))
        }
        "quasi_whittaker_vectors_deg1" => {
            let phi = character_from(arg(req, "phi")?)?;
            Ok(js::matrix_to(&analysis::quasi_whittaker_vectors_deg1(&phi)?))
        }
        "intertwiner_check" => {
            let source = module_from(arg(req, "source")?)?;
            let target = module_from(arg(req, "target")?)?;
            let w = window_from(req, &source)?;
            let images = vectors_from(&target, list_arg(req, "images")?)?;
            Ok(intertwining_to(analysis::intertwiner_check(&source, &target, images, &w)?, &w))
        }
        _ => Err(CliError::Usage(format!("unknown operation {op:?}"))),
    }
}

pub fn intertwining_to(r: Intertwining, w: &TruncationWindow) -> Value {
    match r {
        Intertwining::Certificate { checks, slice_dims } => json!({
            "pass": true, "status": "certificate", "checks": checks,
            "slice_dims": slice_dims, "window": window_to(w),
        }),
        Intertwining::Violation { symbol, alpha, k } => json!({
            "pass": false, "status": "violation", "symbol": symbol_to(&symbol),
            "alpha": js::multi_index_to(&alpha), "fiber": k, "window": window_to(w),
        }),
        Intertwining::NotBijective { degree } => json!({
            "pass": false, "status": "not_bijective", "degree": degree, "window": window_to(w),
        }),
    }
}
