use proptest::prelude::*;
use serde_json::{json, Value};

use witt_smooth::json as js;
use witt_smooth::{eval, CliError};
use witt_smooth_core::module::{act, Family, ModuleVector};
use witt_smooth_core::scalar::{int, ratio};
use witt_smooth_core::{MultiIndex, P0Vector, Scalar, WeylElement, WittElement};

fn td(i: usize, j: usize) -> Value {
    let mut alpha = vec![0, 0];
    alpha[i - 1] = 1;
    json!({"n": 2, "terms": [{"alpha": alpha, "i": j, "c": "1"}]})
}

fn lambda1(n: usize) -> Value {
    json!({"family": "tensor", "n": n, "data": {"exterior": 1}})
}

#[test]
fn bracket_request() {
    let out = eval(&json!({"op": "bracket", "x": td(1, 2), "y": td(2, 1)})).unwrap();
    let expect = WittElement::t_d(2, 0, 0) - WittElement::t_d(2, 1, 1);
    assert_eq!(js::witt_from(&out).unwrap(), expect);
    assert_eq!(
        out,
        json!({"n": 2, "terms": [
            {"alpha": [0, 1], "i": 2, "c": "-1"},
            {"alpha": [1, 0], "i": 1, "c": "1"},
        ]})
    );
}

#[test]
fn p0_act_request() {
    let a = json!({"n": 2, "terms": [{"beta": [1, 0], "gamma": [0, 0], "c": "1"}]});
    let v = json!({"n": 2, "terms": [{"alpha": [1, 0], "c": "1"}]});
    let out = eval(&json!({"op": "p0_act", "a": a, "v": v})).unwrap();
    assert_eq!(out, json!({"n": 2, "terms": [{"alpha": [0, 0], "c": "-1"}]}));
}

#[test]
fn height_request() {
    let out = eval(&json!({"op": "height", "module": lambda1(2), "window": {"degree": 3}})).unwrap();
    assert_eq!(out["height"], json!(1));
    assert_eq!(out["status"], json!("exact"));
    assert_eq!(out["window"], json!({"degree": 3, "grade_cap": 4, "fiber_degree": null}));
}

#[test]
fn whittaker_height_in_smallest_window() {
    let m = json!({"family": "whittaker", "n": 2, "data": {"p": [1, 1, 1, 1], "cap": 2}});
    let out = eval(&json!({"op": "height", "module": m, "window": {"degree": 0}})).unwrap();
    assert_eq!(out["height"], json!(2));
    assert_eq!(out["window"], json!({"degree": 0, "grade_cap": 2, "fiber_degree": 1}));
}

#[test]
fn incomplete_window_is_window_error() {
    let e = eval(&json!({"op": "height", "module": lambda1(2), "window": {"degree": 3, "grade_cap": 2}})).unwrap_err();
    assert_eq!(e.name(), "WindowError");
}

#[test]
fn weyl_and_projection_requests() {
    let d1 = json!({"n": 1, "terms": [{"beta": [0], "gamma": [1], "c": "1"}]});
    let t1 = json!({"n": 1, "terms": [{"beta": [1], "gamma": [0], "c": "1"}]});
    let prod = js::weyl_from(&eval(&json!({"op": "weyl_multiply", "a": d1, "b": t1})).unwrap()).unwrap();
    assert_eq!(prod, WeylElement::t(1, 0).multiply(&WeylElement::d(1, 0)).unwrap() + WeylElement::scalar(1, int(1)));
    let dt = json!({"n": 1, "terms": [{"beta": [1], "gamma": [1], "c": "1"}]});
    let phi = eval(&json!({"op": "projection_phi", "a": dt})).unwrap();
    assert_eq!(phi, json!({"n": 1, "terms": []}));
    let can = eval(&json!({"op": "canonical_projection", "a": dt})).unwrap();
    assert_eq!(can, json!({"n": 1, "terms": [{"alpha": [0], "c": "-1"}]}));
}

#[test]
fn reach_one_request() {
    let v = json!({"n": 2, "terms": [{"alpha": [2, 1], "c": "3"}, {"alpha": [0, 1], "c": "1"}]});
    let out = eval(&json!({"op": "p0_reach_one", "v": v})).unwrap();
    assert_eq!(out, json!({"beta": [2, 1], "c": "-6"}));
}

#[test]
fn multi_index_requests() {
    assert_eq!(eval(&json!({"op": "mi_add", "a": [1, 2], "b": [0, 3]})).unwrap(), json!([1, 5]));
    assert_eq!(eval(&json!({"op": "mi_sub", "a": [1, 2], "b": [2, 0]})).unwrap(), Value::Null);
    assert_eq!(eval(&json!({"op": "mi_binomial", "a": [3, 2], "b": [1, 1]})).unwrap(), json!("6"));
    assert_eq!(eval(&json!({"op": "mi_factorial", "a": [3, 2]})).unwrap(), json!("12"));
    assert_eq!(eval(&json!({"op": "lex_compare", "a": [1, 0], "b": [0, 5]})).unwrap(), json!("greater"));
    assert_eq!(eval(&json!({"op": "mi_add", "a": [1], "b": [1, 2]})).unwrap_err().name(), "ArityError");
}

#[test]
fn gln_requests() {
    let m = eval(&json!({"op": "exterior_power", "n": 2, "k": 1})).unwrap();
    assert_eq!(eval(&json!({"op": "check_gln_relations", "module": m})).unwrap(), json!({"pass": true}));
    let bad = json!({"n": 2, "dim": 1, "E": [[["1"]], [["0"]], [["0"]], [["0"]]]});
    let e = eval(&json!({"op": "intertwiner_check", "source": {"family": "tensor", "n": 2, "data": {"gln": bad}},
        "target": lambda1(2), "images": []}));
    assert_eq!(e.unwrap_err().name(), "InvalidModuleError");
    let bad = json!({"n": 2, "dim": 1, "E": [[["1"]], [["1"]], [["0"]], [["0"]]]});
    let out = eval(&json!({"op": "check_gln_relations", "module": bad})).unwrap();
    assert_eq!(out["pass"], json!(false));
    assert_eq!(out["violation"], json!([1, 1, 1, 2]));
    let e = eval(&json!({"op": "exterior_power", "n": 2, "k": 3})).unwrap_err();
    assert_eq!(e.name(), "RangeError");
}

#[test]
fn whittaker_requests() {
    assert_eq!(eval(&json!({"op": "aphi_det", "phi": {"p": ["1", "1", "1", "1"]}})).unwrap(), json!("-4"));
    let m = eval(&json!({"op": "aphi_matrix", "phi": {"p": [1, 1, 1, 1], "q": [0, 0]}})).unwrap();
    assert_eq!(m["matrix"][0], json!(["0", "-1", "-3", "-1"]));
    assert_eq!(m["rank"], json!(4));
    let k = eval(&json!({"op": "quasi_whittaker_vectors_deg1", "phi": {"p": [0, 0, 0, 0]}})).unwrap();
    assert_eq!(k.as_array().unwrap().len(), 4);
    let e = eval(&json!({"op": "quasi_whittaker_vectors_deg1", "phi": {"p": [1, 1, 1, 1], "q": [0, "1/2"]}}));
    assert_eq!(e.unwrap_err().name(), "HypothesisError");
}

#[test]
fn module_requests() {
    let wphi0 = json!({"family": "wphi", "n": 2, "data": {"lambda": 0}});
    let gens = json!([
        {"n": 2, "terms": [{"alpha": [1, 0], "c": ["1"]}]},
        {"n": 2, "terms": [{"alpha": [0, 1], "c": ["1"]}]},
    ]);
    let out = eval(&json!({"op": "quotient_graded_dims", "module": wphi0, "generators": gens})).unwrap();
    assert_eq!(out["dims"], json!([1, 0, 0, 0, 0]));
    let top = json!({"family": "tensor", "n": 3, "data": {"exterior": 3}});
    let out = eval(&json!({"op": "quotient_graded_dims", "module": top, "l_n": 3, "window": {"degree": 3}})).unwrap();
    assert_eq!(out["dims"], json!([1, 0, 0, 0]));

    let v = json!({"n": 2, "terms": [{"alpha": [1, 0], "c": ["1"]}]});
    let w1 = json!({"family": "wphi", "n": 2, "data": {"lambda": "1/3"}});
    let out = eval(&json!({"op": "cyclicity_certificate", "module": w1, "v": v, "window": {"degree": 3}, "slice_degree": 2}))
        .unwrap();
    assert_eq!(out["status"], json!("certificate"));
    assert_eq!(out["slice_dim"], json!(6));
    let out = eval(&json!({"op": "cyclicity_certificate", "module": wphi0, "v": v, "window": {"degree": 3}})).unwrap();
    assert_eq!(out["pass"], json!(false));
    assert_eq!(out["missing"].as_array().unwrap().len(), 1);

    let e = json!({"family": "induced", "n": 2, "data": {"exterior": 1}});
    let v = json!({"n": 2, "terms": [{"alpha": [2, 1], "c": ["1", "0"]}]});
    let out = eval(&json!({"op": "local_finiteness_orbit", "module": e, "i": 1, "k": 1, "v": v})).unwrap();
    let d = out["dim"].as_u64().unwrap();
    assert!((1..=4).contains(&d));
    let out = eval(&json!({"op": "smoothness_bound_check", "module": e, "alpha": [2, 1]})).unwrap();
    assert_eq!(out["pass"], json!(true));
    assert_eq!(out["predicted"], json!(4));

    let ann = eval(&json!({"op": "annihilator_space", "module": lambda1(2), "r": 1, "window": {"degree": 2}})).unwrap();
    assert_eq!(ann["dim"], json!(ann["basis"].as_array().unwrap().len()));
    assert!(ann["dim"].as_u64().unwrap() >= 2);
}

#[test]
fn intertwiner_requests() {
    let source = json!({"family": "induced", "n": 2, "data": {"exterior": 1}});
    let target = json!({"family": "tensor", "n": 2, "data": {"exterior": 1, "twist": true}});
    let images = json!([
        {"n": 2, "terms": [{"alpha": [0, 0], "c": ["1", "0"]}]},
        {"n": 2, "terms": [{"alpha": [0, 0], "c": ["0", "1"]}]},
    ]);
    let req = json!({"op": "intertwiner_check", "source": source, "target": target, "images": images, "window": {"degree": 3}});
    let out = eval(&req).unwrap();
    assert_eq!(out["status"], json!("certificate"));
    assert_eq!(out["slice_dims"], json!([2, 6, 12, 20]));
    let mut bad = req.clone();
    bad["images"][1]["terms"][0]["c"] = json!(["0", "2"]);
    let out = eval(&bad).unwrap();
    assert_eq!(out["status"], json!("violation"));
    assert_eq!(out["pass"], json!(false));
}

#[test]
fn continuous_request() {
    let v = json!({"n": 2, "terms": [{"alpha": [1, 1], "c": ["1", "0"]}]});
    let series = json!([{"n": 2, "terms": [{"alpha": [0, 0], "i": 1, "c": "1"}]}, td(1, 1)]);
    let out = eval(&json!({"op": "continuous_act", "module": lambda1(2), "series": series, "v": v})).unwrap();
    let m = witt_smooth::module_from(&lambda1(2)).unwrap();
    let vv = m.vector(&v).unwrap();
    let x = WittElement::partial(2, 0) + WittElement::t_d(2, 0, 0);
    assert_eq!(js::vector_from(&out, None).unwrap(), act(&m, &x, &vv).unwrap());
    let bad = json!([td(1, 1)]);
    let e = eval(&json!({"op": "continuous_act", "module": lambda1(2), "series": bad, "v": v})).unwrap_err();
    assert_eq!(e.name(), "RangeError");
}

#[test]
fn batches_and_schema_errors() {
    let out = eval(&json!([
        {"op": "mi_factorial", "a": [2]},
        {"op": "aphi_det", "phi": {"p": [1, 1, 1, 1]}},
    ]))
    .unwrap();
    assert_eq!(out, json!(["2", "-4"]));
    assert!(matches!(eval(&json!({"op": "height"})), Err(CliError::Usage(_))));
    assert!(matches!(eval(&json!({"op": "act", "module": {"family": "tensor", "n": 2}})), Err(CliError::Usage(_))));
    let e = eval(&json!({"op": "bracket", "x": td(1, 2), "y": {"n": 2, "terms": [{"alpha": [0, 0], "i": 1, "c": "1/0"}]}}));
    assert_eq!(e.unwrap_err().name(), "UsageError");
}

fn rat() -> impl Strategy<Value = Scalar> {
    (-20i64..20, 1i64..7).prop_map(|(a, b)| ratio(a, b))
}

fn index(n: usize) -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(0u32..4, n).prop_map(MultiIndex::new)
}

fn witt(n: usize) -> impl Strategy<Value = WittElement> {
    proptest::collection::vec((index(n), 0..n, rat()), 0..5).prop_map(move |ts| {
        WittElement::from_terms(n, ts.into_iter().map(|(a, i, c)| ((a, i), c))).unwrap()
    })
}

fn weyl(n: usize) -> impl Strategy<Value = WeylElement> {
    proptest::collection::vec((index(n), index(n), rat()), 0..4)
        .prop_map(move |ts| WeylElement::from_terms(n, ts.into_iter().map(|(b, g, c)| ((b, g), c))).unwrap())
}

fn p0(n: usize) -> impl Strategy<Value = P0Vector> {
    proptest::collection::vec((index(n), rat()), 0..4).prop_map(move |ts| P0Vector::from_terms(n, ts).unwrap())
}

fn vector(n: usize, dim: usize) -> impl Strategy<Value = ModuleVector> {
    proptest::collection::vec((index(n), proptest::collection::vec(rat(), dim)), 0..4)
        .prop_map(move |ts| ModuleVector::from_terms(n, Family::Tensor, dim, ts).unwrap())
}

/// Emitted text re-parses to the same value.
fn reparse(v: &Value) -> Value {
    serde_json::from_str(&serde_json::to_string(v).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_output_round_trips((x, y) in (1usize..4).prop_flat_map(|n| (witt(n), witt(n)))) {
        let out = eval(&json!({"op": "bracket", "x": js::witt_to(&x), "y": js::witt_to(&y)})).unwrap();
        prop_assert_eq!(js::witt_from(&reparse(&out)).unwrap(), x.bracket(&y).unwrap());
    }

    #[test]
    fn weyl_output_round_trips((a, b) in (1usize..4).prop_flat_map(|n| (weyl(n), weyl(n)))) {
        let out = eval(&json!({"op": "weyl_multiply", "a": js::weyl_to(&a), "b": js::weyl_to(&b)})).unwrap();
        prop_assert_eq!(js::weyl_from(&reparse(&out)).unwrap(), a.multiply(&b).unwrap());
    }

    #[test]
    fn p0_output_round_trips((a, v) in (1usize..4).prop_flat_map(|n| (weyl(n), p0(n)))) {
        let out = eval(&json!({"op": "p0_act", "a": js::weyl_to(&a), "v": js::p0_to(&v)})).unwrap();
        prop_assert_eq!(js::p0_from(&reparse(&out)).unwrap(), witt_smooth_core::weyl::p0_act(&a, &v).unwrap());
    }

    #[test]
    fn act_output_round_trips((x, v) in (witt(2), vector(2, 2))) {
        let module = json!({"family": "tensor", "n": 2, "data": {"exterior": 1}});
        let out = eval(&json!({"op": "act", "module": module, "x": js::witt_to(&x), "v": js::vector_to(&v)})).unwrap();
        let m = witt_smooth::module_from(&module).unwrap();
        prop_assert_eq!(js::vector_from(&reparse(&out), None).unwrap(), act(&m, &x, &v).unwrap());
    }

    #[test]
    fn scalars_round_trip(c in rat()) {
        prop_assert_eq!(js::scalar_from(&reparse(&js::scalar_to(&c))).unwrap(), c);
    }
}

#[test]
fn gln_output_round_trips() {
    for (n, k) in [(1, 0), (2, 1), (3, 2), (4, 2)] {
        let out = eval(&json!({"op": "exterior_power", "n": n, "k": k})).unwrap();
        let m = witt_smooth_core::gln::exterior_power(n, k).unwrap();
        assert_eq!(js::gln_from(&reparse(&out)).unwrap(), m);
    }
    let out = eval(&json!({"op": "one_dim_module", "n": 2, "b": "5/2"})).unwrap();
    let twisted = eval(&json!({"op": "tau_twist", "module": out})).unwrap();
    let expect = witt_smooth_core::gln::tau_twist(&witt_smooth_core::gln::one_dim_module(2, ratio(5, 2)).unwrap());
    assert_eq!(js::gln_from(&reparse(&twisted)).unwrap(), expect);
}

#[test]
fn stabilizer_request() {
    let out = eval(&json!({
        "op": "stabilizer_space",
        "module": {"family": "tensor", "n": 2, "data": {"exterior": 2}},
        "l_n": 2,
        "window": {"degree": 3},
    }))
    .unwrap();
    assert_eq!(out["dim"], json!(6));
    assert_eq!(out["slice_degree"], json!(2));
    assert_eq!(out["truncated"], json!(true));
    assert_eq!(out["basis"].as_array().unwrap().len(), 6);

    let err = eval(&json!({
        "op": "stabilizer_space",
        "module": {"family": "trivial", "n": 2},
        "generators": [],
        "slice_degree": 3,
        "window": {"degree": 3},
    }))
    .unwrap_err();
    assert_eq!(err.name(), "WindowError");
}
