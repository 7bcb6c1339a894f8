//! Named verification suites with seeded, reproducible sampling.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use witt_smooth_core::analysis::{
    self, AphiMatrix, Cyclicity, Height, TruncationWindow,
};
use witt_smooth_core::gln::{exterior_power, one_dim_module, tau_twist, GlnModule};
use witt_smooth_core::linalg::{self, Matrix};
use witt_smooth_core::module::{act, Family, FiniteModule, ModuleVector, SmoothModule};
use witt_smooth_core::series::{continuous_act, PowerSeriesDerivation};
use witt_smooth_core::weyl::{canonical_projection, p0_act, p0_reach_one, Letter};
use witt_smooth_core::witt::{basis_of_grade, symbols_of_grade, w2};
use witt_smooth_core::{
    families, Character, InducedModule, MultiIndex, P0Vector, Polynomial, Scalar, TensorModule,
    TrivialModule, WeylElement, WhittakerModule, WittElement,
};

use crate::eval::{intertwining_to, window_to};
use crate::json as js;
use crate::CliError;

pub const SUITES: &[&str] = &[
    "jacobi",
    "weyl",
    "p0",
    "tensor",
    "induced",
    "iso",
    "wphi",
    "whittaker",
    "smoothness",
    "continuous",
];

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const SEED_ENV: &str = "WITT_SMOOTH_SEED";

/// An explicit seed, else `WITT_SMOOTH_SEED`, else [`DEFAULT_SEED`].
pub fn resolve_seed(explicit: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub n: Option<usize>,
    pub degree: Option<u32>,
    pub grade_cap: Option<i32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub window: Value,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// With `timing = false` the output is a pure function of the inputs.
    pub fn to_json(&self, timing: bool) -> Value {
        let mut v = json!({
            "suite": self.suite,
            "seed": self.seed,
            "status": if self.passed() { "pass" } else { "fail" },
            "window": self.window,
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "status": if c.passed { "pass" } else { "fail" },
                "witness": c.witness,
            })).collect::<Vec<_>>(),
        });
        if timing {
            v["elapsed_ms"] = json!(self.elapsed_ms as u64);
        }
        v
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut checks, window) = match name {
        "jacobi" => jacobi(&mut rng),
        "weyl" => weyl(&mut rng),
        "p0" => p0(&mut rng),
        "tensor" => tensor(&mut rng),
        "induced" => induced(&mut rng),
        "iso" => iso(&mut rng, opts),
        "wphi" => wphi(&mut rng, opts),
        "whittaker" => whittaker(&mut rng, opts),
        "smoothness" => smoothness(opts),
        "continuous" => continuous(&mut rng),
        _ => {
            return Err(CliError::Usage(format!(
                "unknown suite {name:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SuiteReport {
        suite: name.to_string(),
        seed: opts.seed,
        checks,
        window,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Counts samples and keeps the first failure as the witness.
struct Tally {
    name: String,
    samples: usize,
    failures: usize,
    first: Option<Value>,
    extra: Value,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.to_string(),
            samples: 0,
            failures: 0,
            first: None,
            extra: json!({}),
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(witness());
            }
        }
    }

    fn record_result(&mut self, r: witt_smooth_core::Result<bool>, witness: impl FnOnce() -> Value) {
        match r {
            Ok(ok) => self.record(ok, witness),
            Err(e) => {
                let mut w = witness();
                w["error"] = json!({"name": e.name(), "message": e.to_string()});
                self.record(false, || w);
            }
        }
    }

    fn note(mut self, key: &str, v: Value) -> Self {
        self.extra[key] = v;
        self
    }

    fn finish(self) -> Check {
        let mut witness = json!({
            "samples": self.samples,
            "failures": self.failures,
            "first_failure": self.first,
        });
        if let Value::Object(m) = self.extra {
            for (k, v) in m {
                witness[k] = v;
            }
        }
        Check {
            passed: self.failures == 0 && self.samples > 0,
            name: self.name,
            witness,
        }
    }
}

fn single(name: &str, r: Result<(bool, Value), CliError>) -> Check {
    match r {
        Ok((passed, witness)) => Check {
            name: name.to_string(),
            passed,
            witness,
        },
        Err(e) => Check {
            name: name.to_string(),
            passed: false,
            witness: json!({"error": {"name": e.name(), "message": e.to_string()}}),
        },
    }
}

// ---- random objects ----

fn rand_rat(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into())
}

fn rand_nonzero_rat(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let c = rand_rat(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

fn rand_index_of_size(rng: &mut ChaCha8Rng, n: usize, size: u32) -> MultiIndex {
    let mut e = vec![0u32; n];
    for _ in 0..size {
        e[rng.gen_range(0..n)] += 1;
    }
    MultiIndex::new(e)
}

fn rand_index(rng: &mut ChaCha8Rng, n: usize, max: u32) -> MultiIndex {
    let s = rng.gen_range(0..=max);
    rand_index_of_size(rng, n, s)
}

fn rand_witt(rng: &mut ChaCha8Rng, n: usize, max: u32) -> WittElement {
    let terms = rng.gen_range(1..=3);
    let mut x = WittElement::zero(n);
    for _ in 0..terms {
        let (a, i) = (rand_index(rng, n, max), rng.gen_range(0..n));
        x = x + WittElement::symbol(a, i).scale(&rand_nonzero_rat(rng));
    }
    x
}

fn rand_weyl(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> WeylElement {
    let terms = rng.gen_range(1..=3);
    let mut a = WeylElement::zero(n);
    for _ in 0..terms {
        let s = rng.gen_range(0..=deg);
        let b = rng.gen_range(0..=s);
        let beta = rand_index_of_size(rng, n, b);
        let gamma = rand_index_of_size(rng, n, s - b);
        a = a + WeylElement::term(beta, gamma, rand_nonzero_rat(rng));
    }
    a
}

fn rand_p0(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> P0Vector {
    loop {
        let terms = rng.gen_range(1..=3);
        let list: Vec<_> = (0..terms).map(|_| (rand_index(rng, n, deg), rand_nonzero_rat(rng))).collect();
        let v = P0Vector::from_terms(n, list).expect("arity matches");
        if !v.is_zero() {
            return v;
        }
    }
}

fn rand_polynomial(rng: &mut ChaCha8Rng, n: usize, deg: u32) -> Polynomial {
    let list: Vec<_> = (0..3).map(|_| (rand_index(rng, n, deg), rand_rat(rng))).collect();
    Polynomial::from_terms(n, list).expect("arity matches")
}

/// A nonzero vector `Σ ∂^α ⊗ c_α` with `|α| ≤ deg` and fiber support in `fibers`.
fn rand_vector(
    rng: &mut ChaCha8Rng,
    n: usize,
    family: Family,
    dim: usize,
    fibers: usize,
    deg: u32,
) -> ModuleVector {
    loop {
        let terms = rng.gen_range(1..=3);
        let list: Vec<_> = (0..terms)
            .map(|_| {
                let a = rand_index(rng, n, deg);
                let c = (0..dim)
                    .map(|k| if k < fibers && rng.gen_bool(0.6) { rand_rat(rng) } else { Scalar::zero() })
                    .collect();
                (a, c)
            })
            .collect();
        let v = ModuleVector::from_terms(n, family, dim, list).expect("shapes match");
        if !v.is_zero() {
            return v;
        }
    }
}

fn rand_invertible(rng: &mut ChaCha8Rng, d: usize) -> (Matrix, Matrix) {
    loop {
        let p: Matrix = (0..d)
            .map(|_| (0..d).map(|_| Scalar::from_integer(rng.gen_range(-3i64..=3).into())).collect())
            .collect();
        if let Some(inv) = linalg::inverse(&p) {
            return (p, inv);
        }
    }
}

fn unit_matrix(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = linalg::zeros(n, n);
    m[i][j] = Scalar::one();
    m
}

/// A 2-dimensional `gl₂`-module `X ↦ PXP⁻¹ + μ tr(X)·I` or `X ↦ tr(X)·N`.
fn rand_gl2_module(rng: &mut ChaCha8Rng) -> (GlnModule, Value) {
    let conj = rng.gen_bool(0.5);
    let (p, inv) = rand_invertible(rng, 2);
    let mu = rand_rat(rng);
    let nmat: Matrix = (0..2).map(|_| (0..2).map(|_| rand_rat(rng)).collect()).collect();
    let mut mats = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let m = if conj {
                let c = linalg::mat_mul(&linalg::mat_mul(&p, &unit_matrix(2, i, j)), &inv);
                if i == j {
                    linalg::mat_add(&c, &linalg::identity(2), &mu)
                } else {
                    c
                }
            } else if i == j {
                nmat.clone()
            } else {
                linalg::zeros(2, 2)
            };
            mats.push(m);
        }
    }
    let m = GlnModule::new(2, mats).expect("both constructions satisfy the gl_2 relations");
    let desc = if conj {
        json!({"kind": "conjugate", "P": js::matrix_to(&p), "mu": js::scalar_to(&mu)})
    } else {
        json!({"kind": "trace", "N": js::matrix_to(&nmat)})
    };
    (m, desc)
}

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.iter().copied())
}

fn window_with(w: TruncationWindow, opts: &SuiteOptions) -> TruncationWindow {
    match opts.grade_cap {
        Some(k) => TruncationWindow { grade_cap: k, ..w },
        None => w,
    }
}

// ---- suites ----

fn jacobi(rng: &mut ChaCha8Rng) -> (Vec<Check>, Value) {
    let mut anti = Tally::new("antisymmetry");
    let mut jac = Tally::new("jacobi_identity");
    let mut grading = Tally::new("bracket_grading");
    let mut action = Tally::new("vector_field_action");
    for s in 0..1000 {
        let n = 1 + s % 4;
        let x = rand_witt(rng, n, 5);
        let y = rand_witt(rng, n, 5);
        let z = rand_witt(rng, n, 5);
        let w = || json!({"x": js::witt_to(&x), "y": js::witt_to(&y), "z": js::witt_to(&z)});
        let xy = x.bracket(&y).expect("same arity");
        anti.record(xy.clone() + y.bracket(&x).unwrap() == WittElement::zero(n), w);
        let cyc = x.bracket(&y.bracket(&z).unwrap()).unwrap()
            + y.bracket(&z.bracket(&x).unwrap()).unwrap()
            + z.bracket(&xy).unwrap();
        jac.record(cyc.is_zero(), w);
        for k in -1..=4 {
            for l in -1..=4 {
                let b = x.grade_component(k).bracket(&y.grade_component(l)).unwrap();
                grading.record(b.is_zero() || b.grade() == Some(k + l), w);
            }
        }
        if s % 5 == 0 {
            let f = rand_polynomial(rng, n, 4);
            let lhs = xy.apply_to_polynomial(&f).unwrap();
            let rhs = x.apply_to_polynomial(&y.apply_to_polynomial(&f).unwrap()).unwrap()
                - y.apply_to_polynomial(&x.apply_to_polynomial(&f).unwrap()).unwrap();
            action.record(lhs == rhs, || {
                let mut v = w();
                v["f"] = js::polynomial_to(&f);
                v
            });
        }
    }
    let x = WittElement::t_d(2, 0, 1);
    let y = WittElement::t_d(2, 1, 0);
    let expect = WittElement::t_d(2, 0, 0) - WittElement::t_d(2, 1, 1);
    let got = x.bracket(&y).unwrap();
    let example = Check {
        name: "bracket_example".into(),
        passed: got == expect,
        witness: json!({"x": js::witt_to(&x), "y": js::witt_to(&y), "bracket": js::witt_to(&got)}),
    };
    (
        vec![anti.finish(), jac.finish(), grading.finish(), action.finish(), example],
        json!({"max_alpha": 5, "arity": [1, 2, 3, 4]}),
    )
}

fn weyl(rng: &mut ChaCha8Rng) -> (Vec<Check>, Value) {
    let mut assoc = Tally::new("associativity");
    for s in 0..500 {
        let n = 1 + s % 3;
        let (a, b, c) = (rand_weyl(rng, n, 4), rand_weyl(rng, n, 4), rand_weyl(rng, n, 4));
        let lhs = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let rhs = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        assoc.record(lhs == rhs, || json!({"a": js::weyl_to(&a), "b": js::weyl_to(&b), "c": js::weyl_to(&c)}));
    }
    let mut rel = Tally::new("t_d_power_relation");
    for n in 1..=3 {
        for i in 0..n {
            for j in 0..n {
                for m in 0..=5u32 {
                    let dm = WeylElement::d_pow(MultiIndex::unit(n, j).scaled(m));
                    let lhs = WeylElement::t(n, i).multiply(&dm).unwrap();
                    let mut rhs = dm.multiply(&WeylElement::t(n, i)).unwrap();
                    if i == j && m > 0 {
                        let lower = WeylElement::d_pow(MultiIndex::unit(n, j).scaled(m - 1));
                        rhs = rhs - lower.scale(&Scalar::from_integer(m.into()));
                    }
                    rel.record(lhs == rhs, || json!({"n": n, "i": i + 1, "j": j + 1, "m": m}));
                }
            }
        }
    }
    let mut words = Tally::new("word_rewriting_oracle");
    for s in 0..300 {
        let n = 1 + s % 3;
        let len = rng.gen_range(0..=6);
        let word: Vec<Letter> = (0..len)
            .map(|_| {
                let i = rng.gen_range(0..n);
                if rng.gen_bool(0.5) {
                    Letter::T(i)
                } else {
                    Letter::D(i)
                }
            })
            .collect();
        let rewritten = WeylElement::from_word(n, &word).unwrap();
        let product = word.iter().fold(WeylElement::scalar(n, Scalar::one()), |acc, l| {
            let g = match l {
                Letter::T(i) => WeylElement::t(n, *i),
                Letter::D(i) => WeylElement::d(n, *i),
            };
            acc.multiply(&g).unwrap()
        });
        words.record(rewritten == product, || json!({"n": n, "word": format!("{word:?}")}));
    }
    (
        vec![assoc.finish(), rel.finish(), words.finish()],
        json!({"max_degree": 4, "max_power": 5, "arity": [1, 2, 3]}),
    )
}

fn p0(rng: &mut ChaCha8Rng) -> (Vec<Check>, Value) {
    let mut cross = Tally::new("action_matches_quotient");
    for s in 0..500 {
        let n = 1 + s % 3;
        let a = rand_weyl(rng, n, 4);
        let v = rand_p0(rng, n, 4);
        let direct = p0_act(&a, &v).unwrap();
        let via = canonical_projection(&a.multiply(&v.lift()).unwrap());
        cross.record(direct == via, || json!({"a": js::weyl_to(&a), "v": js::p0_to(&v)}));
    }
    let mut reach = Tally::new("constructive_simplicity");
    for s in 0..200 {
        let n = 1 + s % 3;
        let v = rand_p0(rng, n, 6);
        let ok = p0_reach_one(&v).and_then(|(beta, c)| {
            let hit = p0_act(&WeylElement::t_pow(beta), &v)?;
            Ok(!c.is_zero() && hit == P0Vector::monomial(MultiIndex::zero(n), c))
        });
        reach.record_result(ok, || json!({"v": js::p0_to(&v)}));
    }
    let one = P0Vector::monomial(mi(&[1, 0]), Scalar::one());
    let got = p0_act(&WeylElement::t(2, 0), &one).unwrap();
    let example = Check {
        name: "t1_on_d1".into(),
        passed: got == P0Vector::monomial(mi(&[0, 0]), -Scalar::one()),
        witness: js::p0_to(&got),
    };
    (
        vec![cross.finish(), reach.finish(), example],
        json!({"action_degree": 4, "reach_degree": 6}),
    )
}

fn module_axiom<M: SmoothModule + ?Sized>(
    m: &M,
    x: &WittElement,
    y: &WittElement,
    v: &ModuleVector,
) -> witt_smooth_core::Result<bool> {
    let lhs = act(m, &x.bracket(y)?, v)?;
    let rhs = act(m, x, &act(m, y, v)?)? - act(m, y, &act(m, x, v)?)?;
    Ok(lhs == rhs)
}

fn axiom_witness(x: &WittElement, y: &WittElement, v: &ModuleVector) -> Value {
    json!({"x": js::witt_to(x), "y": js::witt_to(y), "v": js::vector_to(v)})
}

fn tensor(rng: &mut ChaCha8Rng) -> (Vec<Check>, Value) {
    let mut axiom = Tally::new("module_axiom");
    let modules: Vec<(usize, usize, TensorModule)> = (1..=3)
        .flat_map(|n| (0..=n).map(move |k| (n, k)))
        .map(|(n, k)| (n, k, TensorModule::new(exterior_power(n, k).unwrap())))
        .collect();
    for s in 0..500 {
        let (n, k, m) = &modules[s % modules.len()];
        let x = rand_witt(rng, *n, 3);
        let y = rand_witt(rng, *n, 3);
        let v = rand_vector(rng, *n, Family::Tensor, m.fiber_dim(), m.fiber_dim(), 3);
        axiom.record_result(module_axiom(m, &x, &y, &v), || {
            let mut w = axiom_witness(&x, &y, &v);
            w["module"] = json!({"n": n, "exterior": k});
            w
        });
    }
    let mut kill = Tally::new("highest_weight_annihilation");
    let mut eig = Tally::new("highest_weight_eigenvalues");
    for (n, r, m) in &modules {
        let top = ModuleVector::basis(Family::Tensor, m.fiber_dim(), MultiIndex::zero(*n), 0);
        for size in 2..=4 {
            for alpha in MultiIndex::of_size(*n, size) {
                for i in 0..*n {
                    let x = WittElement::symbol(alpha.clone(), i);
                    kill.record_result(act(m, &x, &top).map(|v| v.is_zero()), || {
                        json!({"n": n, "r": r, "x": js::witt_to(&x)})
                    });
                }
            }
        }
        for i in 0..*n {
            let expect = if i < *r { Scalar::zero() } else { -Scalar::one() };
            let got = act(m, &WittElement::t_d(*n, i, i), &top);
            eig.record_result(got.map(|v| v == top.scale(&expect)), || {
                json!({"n": n, "r": r, "i": i + 1, "expected": js::scalar_to(&expect)})
            });
        }
    }
    (
        vec![axiom.finish(), kill.finish(), eig.finish()],
        json!({"modules": "exterior powers with n <= 3", "vector_degree": 3, "element_alpha": 3}),
    )
}

fn whittaker_phi(rng: &mut ChaCha8Rng, with_q: bool) -> Character {
    let p = [rand_rat(rng), rand_rat(rng), rand_rat(rng), rand_rat(rng)];
    let q = if with_q {
        [rand_rat(rng), rand_rat(rng)]
    } else {
        [Scalar::zero(), Scalar::zero()]
    };
    Character::new(p, q)
}

/// Checks `ht(g_k · (∂^α ⊗ e)) ≤ |α| - k + ℓ - 1` for `ℓ - 1 ≤ k ≤ 6`, `|α| ≤ 4`.
fn grading_inclusion<M: SmoothModule>(m: &M, fibers: usize, label: Value, tally: &mut Tally) {
    let l = m.level() as i32;
    for alpha in MultiIndex::up_to_size(m.arity(), 4) {
        for k in (l - 1)..=6 {
            let bound = alpha.size() as i32 - k + l - 1;
            for sym in symbols_of_grade(m.arity(), k) {
                for f in 0..fibers {
                    let r = m.act_basis(&sym, &alpha, f).map(|t| {
                        t.keys().all(|(a, _)| (a.size() as i32) <= bound)
                    });
                    tally.record_result(r, || {
                        json!({"module": label.clone(), "k": k, "alpha": js::multi_index_to(&alpha),
                               "symbol": {"alpha": js::multi_index_to(&sym.0), "i": sym.1 + 1}, "fiber": f})
                    });
                }
            }
        }
    }
}

fn induced(rng: &mut ChaCha8Rng) -> (Vec<Check>, Value) {
    let mut wphi_axiom = Tally::new("module_axiom_w_phi_type");
    let lambdas: Vec<Scalar> = (0..4).map(|_| rand_rat(rng)).collect();
    let wphis: Vec<_> = lambdas.iter().map(|l| families::make_w_phi(2, l.clone()).unwrap()).collect();
    for s in 0..200 {
        let m = &wphis[s % wphis.len()];
        let x = rand_witt(rng, 2, 3);
        let y = rand_witt(rng, 2, 3);
        let v = rand_vector(rng, 2, Family::Induced, 1, 1, 3);
        wphi_axiom.record_result(module_axiom(m, &x, &y, &v), || {
            let mut w = axiom_witness(&x, &y, &v);
            w["lambda"] = js::scalar_to(&lambdas[s % lambdas.len()]);
            w
        });
    }

    let cap = 4;
    let mut mphi_axiom = Tally::new("module_axiom_whittaker_type");
    let phis: Vec<Character> = (0..3).map(|_| whittaker_phi(rng, true)).collect();
    let mphis: Vec<_> = phis
        .iter()
        .map(|p| InducedModule::new(WhittakerModule::new(p.clone(), cap)))
        .collect();
    for s in 0..150 {
        let m = &mphis[s % mphis.len()];
        let low = m.inducing().slice_dim(1);
        let x = rand_witt(rng, 2, 2);
        let y = rand_witt(rng, 2, 2);
        let v = rand_vector(rng, 2, Family::Induced, m.fiber_dim(), low, 2);
        mphi_axiom.record_result(module_axiom(m, &x, &y, &v), || {
            let mut w = axiom_witness(&x, &y, &v);
            w["phi"] = crate::modules::character_to(&phis[s % phis.len()]);
            w["cap"] = json!(cap);
            w
        });
    }

    let mut incl = Tally::new("grading_inclusion");
    let lam = rand_rat(rng);
    let wp = families::make_w_phi(2, lam.clone()).unwrap();
    grading_inclusion(&wp, 1, json!({"family": "wphi", "lambda": js::scalar_to(&lam)}), &mut incl);
    let phi = whittaker_phi(rng, true);
    let mp = InducedModule::new(WhittakerModule::new(phi.clone(), 3));
    let fibers = mp.inducing().slice_dim(2);
    grading_inclusion(&mp, fibers, json!({"family": "whittaker", "phi": crate::modules::character_to(&phi), "cap": 3}), &mut incl);

    (
        vec![wphi_axiom.finish(), mphi_axiom.finish(), incl.finish()],
        json!({"n": 2, "whittaker_cap": cap, "inclusion": {"max_k": 6, "max_r": 4}}),
    )
}

fn identity_images(target: &TensorModule) -> Vec<ModuleVector> {
    let n = target.arity();
    (0..target.fiber_dim())
        .map(|k| ModuleVector::basis(Family::Tensor, target.fiber_dim(), MultiIndex::zero(n), k))
        .collect()
}

fn psi_check(label: &str, m: &GlnModule, degree: u32, opts: &SuiteOptions, extra: Value) -> Check {
    let source = InducedModule::new(FiniteModule::from_gln(m));
    let target = TensorModule::new(tau_twist(m));
    let w = window_with(TruncationWindow::for_module(&source, degree), opts);
    let images = identity_images(&target);
    single(
        label,
        analysis::intertwiner_check(&source, &target, images, &w)
            .map(|r| {
                let mut v = intertwining_to(r, &w);
                v["module"] = extra;
                (v["pass"] == json!(true), v)
            })
            .map_err(CliError::from),
    )
}

fn iso(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> (Vec<Check>, Value) {
    let degree = opts.degree.unwrap_or(4);
    let mut checks = Vec::new();
    let lam1 = exterior_power(2, 1).unwrap();
    checks.push(psi_check("psi_exterior_1", &lam1, degree, opts, json!({"exterior": 1, "n": 2})));
    let (user, desc) = rand_gl2_module(rng);
    checks.push(psi_check("psi_random_user_module", &user, degree, opts, json!({"gln": js::gln_to(&user), "construction": desc})));

    let source = InducedModule::new(FiniteModule::from_gln(&lam1));
    let target = TensorModule::new(lam1.clone());
    let w = window_with(TruncationWindow::for_module(&source, degree.min(2)), opts);
    checks.push(single(
        "psi_requires_twist",
        analysis::intertwiner_check(&source, &target, identity_images(&target), &w)
            .map(|r| {
                let v = intertwining_to(r, &w);
                (v["pass"] == json!(false), v)
            })
            .map_err(CliError::from),
    ));

    for (n, l) in [(2usize, 1i64), (2, 2), (3, 1)] {
        let lam = Scalar::from_integer(l.into());
        let source = families::make_w_phi(n, lam.clone()).unwrap();
        let b = Scalar::from_integer((n as i64).into()) + lam;
        let target = TensorModule::new(one_dim_module(n, b.clone()).unwrap());
        let w = window_with(TruncationWindow::for_module(&source, degree), opts);
        let name = format!("phi_w_n{n}_lambda{l}");
        checks.push(single(
            &name,
            analysis::intertwiner_check(&source, &target, identity_images(&target), &w)
                .map(|r| {
                    let mut v = intertwining_to(r, &w);
                    v["target_b"] = js::scalar_to(&b);
                    (v["pass"] == json!(true), v)
                })
                .map_err(CliError::from),
        ));
    }
    (checks, json!({"degree": degree, "grade_cap": opts.grade_cap}))
}

fn cyclicity_value(c: &Cyclicity) -> Value {
    match c {
        Cyclicity::Certificate { slice_dim } => json!({"status": "certificate", "slice_dim": slice_dim}),
        Cyclicity::Counterexample { reached, missing } => json!({
            "status": "counterexample",
            "reached": reached.iter().map(js::vector_to).collect::<Vec<_>>(),
            "missing": missing.iter().map(js::vector_to).collect::<Vec<_>>(),
        }),
    }
}

fn wphi(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> (Vec<Check>, Value) {
    let n = opts.n.unwrap_or(2);
    let degree = opts.degree.unwrap_or(4);
    let mut checks = Vec::new();

    let w0 = families::make_w_phi(n, Scalar::zero()).unwrap();
    let win = window_with(TruncationWindow::for_module(&w0, degree), opts);
    let gens: Vec<ModuleVector> = (0..n)
        .map(|i| ModuleVector::basis(Family::Induced, 1, MultiIndex::unit(n, i), 0))
        .collect();
    checks.push(single(
        "maximal_submodule_lambda_0",
        analysis::quotient_graded_dims(&w0, &win, &gens)
            .map(|d| {
                let mut expect = vec![0usize; degree as usize + 1];
                expect[0] = 1;
                (d == expect, json!({"dims": d, "window": window_to(&win)}))
            })
            .map_err(CliError::from),
    ));

    let cyc_degree = 2;
    let cyc_window = |m: &InducedModule<FiniteModule>| {
        window_with(TruncationWindow::for_module(m, cyc_degree + 1), opts)
    };
    for (name, lam) in [
        ("lambda_1", Scalar::one()),
        ("lambda_-2", Scalar::from_integer((-2).into())),
        ("lambda_1/3", Scalar::new(1.into(), 3.into())),
    ] {
        let m = families::make_w_phi(n, lam).unwrap();
        let w = cyc_window(&m);
        let d1 = ModuleVector::basis(Family::Induced, 1, MultiIndex::unit(n, 0), 0);
        let random = rand_vector(rng, n, Family::Induced, 1, 1, cyc_degree);
        let mut top2 = random.clone();
        if top2.ht() != Some(cyc_degree) {
            top2 = top2 + ModuleVector::basis(Family::Induced, 1, MultiIndex::unit(n, n - 1).scaled(cyc_degree), 0);
        }
        for (tag, v) in [("d1", d1), ("random", top2)] {
            checks.push(single(
                &format!("cyclic_{name}_{tag}"),
                analysis::cyclicity_certificate(&m, &w, &v, cyc_degree)
                    .map(|c| {
                        let ok = matches!(c, Cyclicity::Certificate { .. });
                        let mut val = cyclicity_value(&c);
                        val["v"] = js::vector_to(&v);
                        val["slice_degree"] = json!(cyc_degree);
                        val["window"] = window_to(&w);
                        (ok, val)
                    })
                    .map_err(CliError::from),
            ));
        }
    }
    let w = cyc_window(&w0);
    let d1 = ModuleVector::basis(Family::Induced, 1, MultiIndex::unit(n, 0), 0);
    checks.push(single(
        "not_cyclic_lambda_0",
        analysis::cyclicity_certificate(&w0, &w, &d1, cyc_degree)
            .map(|c| {
                let ok = matches!(c, Cyclicity::Counterexample { .. });
                let mut val = cyclicity_value(&c);
                val["window"] = window_to(&w);
                (ok, val)
            })
            .map_err(CliError::from),
    ));

    for r in [2usize, 3] {
        let m = TensorModule::new(exterior_power(r, r).unwrap());
        let win = window_with(TruncationWindow::for_module(&m, 3), opts);
        checks.push(single(
            &format!("top_exterior_quotient_n{r}"),
            families::l_n_generators(r, r, 2)
                .and_then(|g| analysis::quotient_graded_dims(&m, &win, &g))
                .map(|d| (d == vec![1, 0, 0, 0], json!({"dims": d, "window": window_to(&win)})))
                .map_err(CliError::from),
        ));
    }
    (
        checks,
        json!({"n": n, "quotient_degree": degree, "cyclicity": {"degree": cyc_degree + 1, "slice_degree": cyc_degree}, "exterior_degree": 3}),
    )
}

fn whittaker(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> (Vec<Check>, Value) {
    let ones = Character::new(
        [Scalar::one(), Scalar::one(), Scalar::one(), Scalar::one()],
        [Scalar::zero(), Scalar::zero()],
    );
    let mut checks = Vec::new();
    checks.push(single(
        "det_aphi_all_ones",
        analysis::aphi_det(&ones)
            .map(|d| (d == Scalar::from_integer((-4).into()), json!({"det": js::scalar_to(&d)})))
            .map_err(CliError::from),
    ));

    let mut kern = Tally::new("kernel_matches_quasi_whittaker");
    let mut rows = Tally::new("aphi_rows_are_bracket_values");
    let mut ranks = Vec::new();
    for s in 0..20 {
        let mut phi = whittaker_phi(rng, false);
        if s % 4 == 3 {
            let mut p = phi.p().clone();
            let z = rng.gen_range(0..4);
            p[z] = Scalar::zero();
            p[(z + 2) % 4] = Scalar::zero();
            phi = Character::new(p, [Scalar::zero(), Scalar::zero()]);
        }
        let a = AphiMatrix::new(&phi);
        ranks.push(a.rank());
        let r = analysis::quasi_whittaker_vectors_deg1(&phi)
            .map(|k| k.len() == 4 - a.rank() && k == a.kernel());
        kern.record_result(r, || crate::modules::character_to(&phi));
        let p = [w2::p0(), w2::p1(), w2::p2(), w2::p3()];
        let ok = p.iter().enumerate().all(|(row, pm)| {
            w2::g0_basis().iter().enumerate().all(|(col, z)| {
                phi.value(&pm.bracket(z).unwrap()).unwrap() == a.entries[row][col]
            })
        });
        rows.record(ok, || crate::modules::character_to(&phi));
    }
    let kern = kern.note("ranks", json!(ranks));

    let degree = opts.degree.unwrap_or(3);
    let m = InducedModule::new(WhittakerModule::new(ones.clone(), 2));
    let w = window_with(TruncationWindow::for_module(&m, degree), opts);
    checks.push(single(
        "height_induced_whittaker",
        analysis::height(&m, &w)
            .map(|h| (h == Height::Exact(2), height_value(h, &w)))
            .map_err(CliError::from),
    ));
    checks.push(kern.finish());
    checks.push(rows.finish());
    (checks, json!({"height_degree": degree, "whittaker_cap": 2}))
}

fn height_value(h: Height, w: &TruncationWindow) -> Value {
    match h {
        Height::Exact(r) => json!({"height": r, "window": window_to(w)}),
        Height::Above(k) => json!({"above": k, "window": window_to(w)}),
    }
}

fn smoothness(opts: &SuiteOptions) -> (Vec<Check>, Value) {
    let degree = opts.degree.unwrap_or(3);
    let mut checks = Vec::new();
    for n in [2usize, 3] {
        let m = TensorModule::new(exterior_power(n, 1).unwrap());
        let w = window_with(TruncationWindow::for_module(&m, degree), opts);
        checks.push(single(
            &format!("height_tensor_exterior1_n{n}"),
            analysis::height(&m, &w)
                .map(|h| (h == Height::Exact(1), height_value(h, &w)))
                .map_err(CliError::from),
        ));
    }
    let t = TrivialModule::new(2);
    let w = window_with(TruncationWindow::for_module(&t, degree), opts);
    checks.push(single(
        "height_trivial",
        analysis::height(&t, &w)
            .map(|h| (h == Height::Exact(0), height_value(h, &w)))
            .map_err(CliError::from),
    ));

    let ones = Character::new(
        [Scalar::one(), Scalar::one(), Scalar::one(), Scalar::one()],
        [Scalar::zero(), Scalar::zero()],
    );
    let tensor = TensorModule::new(exterior_power(2, 1).unwrap());
    let wphi = families::make_w_phi(2, Scalar::one()).unwrap();
    let ind_lam = InducedModule::new(FiniteModule::from_gln(&exterior_power(2, 1).unwrap()));
    let mphi = InducedModule::new(WhittakerModule::new(ones, 4));
    let mut orbit = Tally::new("local_finiteness_orbits");
    let mut bound = Tally::new("smoothness_bound");
    let grid = 4;
    run_grid("tensor_exterior1", &tensor, 1, grid, &mut orbit, &mut bound);
    run_grid("w_phi_lambda1", &wphi, 1, grid, &mut orbit, &mut bound);
    run_grid("induced_exterior1", &ind_lam, 2, grid, &mut orbit, &mut bound);
    run_grid("induced_whittaker_ones", &mphi, 1, grid, &mut orbit, &mut bound);
    checks.push(orbit.finish());
    checks.push(bound.finish());
    (checks, json!({"height_degree": degree, "grid": grid}))
}

/// Orbits of `tᵢ^{ℓ+1}∂ᵢ` and the smoothness bound on `∂^α ⊗ e_k`, `|α| ≤ grid`.
fn run_grid<M: SmoothModule>(label: &str, m: &M, fibers: usize, grid: u32, orbit: &mut Tally, bound: &mut Tally) {
    let w = TruncationWindow::for_module(m, grid);
    for alpha in MultiIndex::up_to_size(m.arity(), grid) {
        for k in 0..fibers {
            let v = ModuleVector::basis(m.family(), m.fiber_dim(), alpha.clone(), k);
            for i in 0..m.arity() {
                let r = analysis::local_finiteness_orbit(m, &w, i, m.level(), &v)
                    .map(|d| d <= alpha.size() as usize + 1);
                orbit.record_result(r, || {
                    json!({"module": label, "alpha": js::multi_index_to(&alpha), "fiber": k, "i": i + 1})
                });
            }
        }
        let r = analysis::smoothness_bound_check(m, &w, &alpha).map(|b| b.holds());
        bound.record_result(r, || json!({"module": label, "alpha": js::multi_index_to(&alpha)}));
    }
}

fn rand_series(rng: &mut ChaCha8Rng, n: usize) -> PowerSeriesDerivation {
    let top = rng.gen_range(1..=5);
    let comps = (-1..=top)
        .map(|k| {
            basis_of_grade(n, k).into_iter().fold(WittElement::zero(n), |acc, b| {
                if rng.gen_bool(0.4) {
                    acc + b.scale(&rand_rat(rng))
                } else {
                    acc
                }
            })
        })
        .collect();
    PowerSeriesDerivation::new(n, comps).expect("homogeneous components")
}

fn series_value(d: &PowerSeriesDerivation) -> Value {
    Value::Array(d.components().iter().map(js::witt_to).collect())
}

fn continuous(rng: &mut ChaCha8Rng) -> (Vec<Check>, Value) {
    let m = TensorModule::new(exterior_power(2, 1).unwrap());
    let mut trunc = Tally::new("truncation_independence");
    let mut compat = Tally::new("bracket_compatibility");
    for _ in 0..100 {
        let x = rand_series(rng, 2);
        let y = rand_series(rng, 2);
        let v = rand_vector(rng, 2, Family::Tensor, 2, 2, 3);
        let w = || json!({"x": series_value(&x), "y": series_value(&y), "v": js::vector_to(&v)});
        let r = (|| {
            let here = continuous_act(&x, &v, &m)?;
            let nb = m.smoothness_bound(&v);
            let tail: Vec<WittElement> = (x.truncation() + 1..=nb + 3)
                .map(|k| basis_of_grade(2, k).into_iter().fold(WittElement::zero(2), |a, b| a + b))
                .collect();
            let longer = x.extended(tail)?;
            let mut ok = continuous_act(&longer, &v, &m)? == act(&m, &longer.partial_sum(nb), &v)?;
            for extra in 0..=3 {
                ok &= act(&m, &x.partial_sum(nb + extra), &v)? == here;
            }
            Ok(ok)
        })();
        trunc.record_result(r, w);
        let r = (|| {
            let lhs = continuous_act(&x.bracket(&y)?, &v, &m)?;
            let yv = continuous_act(&y, &v, &m)?;
            let xv = continuous_act(&x, &v, &m)?;
            Ok(lhs == continuous_act(&x, &yv, &m)? - continuous_act(&y, &xv, &m)?)
        })();
        compat.record_result(r, w);
    }
    (
        vec![trunc.finish(), compat.finish()],
        json!({"n": 2, "module": "tensor exterior 1", "vector_degree": 3, "series_top": 5}),
    )
}
