use std::collections::BTreeMap;

use crlab::bch::{embed_phi, infinitesimal_automorphism, phi_closed_form, phi_matrix_path};
use crlab::models::sl::{sl_forward, sl_forward_printed, sl_input, solve_back_exact, SlCoords};
use crlab::models::{build_model, family, registry, shipped_instances, DefiningEquation};
use crlab::{Error, Scalar};

fn params(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn every_shipped_instance_verifies() {
    for (name, p) in shipped_instances() {
        let model = build_model(name, &p).unwrap();
        let report = model.verify(7, 12).unwrap();
        assert!(report.passed(), "{name} {p:?}: {:?}", report.failures);
        assert_eq!(report.samples, 12, "{name} {p:?}");
    }
}

#[test]
fn samples_pass_both_phi_routes() {
    let model = build_model("SO_hyp", &params(&[("p", 1), ("q", 1)])).unwrap();
    let real = &model.algebra.realization;
    for s in model.sample_on_model(3, 5).unwrap().samples {
        assert_eq!(phi_matrix_path(real, &s.x, &s.y).unwrap(), phi_closed_form(real, &s.x, &s.y).unwrap());
    }
}

#[test]
fn json_ast_evaluates_like_the_residual() {
    let model = build_model("SU", &params(&[("p", 1), ("q", 1), ("r", 1), ("s", 0)])).unwrap();
    let parsed = DefiningEquation::from_json(&model.equation.to_json()).unwrap();
    assert_eq!(parsed, model.equation);
    let batch = model.sample_on_model(11, 10).unwrap();
    assert_eq!(batch.samples.len(), 10);
    for s in &batch.samples {
        let moved = model.perturbed(&s.point);
        assert_eq!(parsed.residual(&s.point.blocks).unwrap(), model.residual(&s.point).unwrap());
        assert_eq!(parsed.residual(&moved.blocks).unwrap(), model.residual(&moved).unwrap());
    }
}

#[test]
fn json_ast_round_trips_for_every_family() {
    for (name, p) in shipped_instances() {
        let eq = family(name).unwrap().equation(&p);
        assert_eq!(DefiningEquation::from_json(&eq.to_json()).unwrap(), eq, "{name}");
    }
}

const LIGHT_CONE: &str = "\\operatorname{Re}\\left(w\\right) = \\frac{z \\overline{z} + \\operatorname{Re}\\left(z z \\overline{\\xi}\\right)}{1 -\\xi \\overline{\\xi}}";

#[test]
fn light_cone_forms_hold_after_rescaling() {
    for (name, p) in [("SO_hyp", params(&[("p", 0), ("q", 1)])), ("SP", params(&[("n", 1), ("p", 0)]))] {
        let model = build_model(name, &p).unwrap();
        let simple = model.family.simplified(&p).expect("light-cone form");
        assert_eq!(simple.latex(), LIGHT_CONE);
        for s in model.sample_on_model(8, 20).unwrap().samples {
            assert!(simple.residual(&s.point.blocks).unwrap().is_zero(), "{name}");
            assert!(!simple.residual(&model.perturbed(&s.point).blocks).unwrap().is_zero(), "{name}");
        }
    }
    assert!(family("SO_hyp").unwrap().simplified(&params(&[("p", 1), ("q", 1)])).is_none());
}

#[test]
fn su_latex_names_the_auxiliary() {
    let eq = family("SU").unwrap().equation(&params(&[("p", 1), ("q", 1), ("r", 1), ("s", 0)]));
    let tex = eq.latex();
    assert!(tex.contains("w"), "{tex}");
    assert!(tex.contains("\\Xi"), "{tex}");
}

#[test]
fn printed_equations_that_differ_are_rejected_by_samples() {
    let cases = [
        ("SL", params(&[("n", 2)])),
        ("SO_hyp", params(&[("p", 1), ("q", 1)])),
        ("SOstar_hyp", params(&[("n", 2)])),
        ("SO_hi", params(&[("p", 1), ("q", 1)])),
    ];
    for (name, p) in cases {
        let model = build_model(name, &p).unwrap();
        let printed = model.family.printed_equation(&p).expect("a printed variant is carried");
        assert!(model.family.erratum(&p).is_some(), "{name}");
        let batch = model.sample_on_model(5, 10).unwrap();
        let off = batch.samples.iter().filter(|s| !matches!(printed.residual(&s.point.blocks), Ok(r) if r.is_zero()));
        assert!(off.count() > 0, "{name}: printed equation held on every sample");
    }
}

#[test]
fn sl_n1_pinned_point() {
    // (x, y, u, v, c, ξ) = (1, 0, 0, 1, 0, 0): X¹ = 1, Y² = 1, the rest zero.
    let real = crlab::liealg::MatrixRealization::new(crlab::liealg::Classical::Sl, params(&[("n", 1)])).unwrap();
    let one = |v: i64| crlab::linalg::Matrix::diagonal(&[Scalar::int(v)]);
    let p = SlCoords { x1: one(1), y1: one(0), x2: one(0), y2: one(1), c: Scalar::int(0), xi: one(0) };
    let (x, y) = sl_input(&real, &p).unwrap();
    let pt = embed_phi(&real, &x, &y).unwrap();
    let fixture: serde_json::Value =
        serde_json::from_str(include_str!("fixtures/sl_n1_pinned.json")).unwrap();
    let got = serde_json::json!({
        "Z1": pt.blocks["Z1"],
        "Z2": pt.blocks["Z2"],
        "Xi": pt.blocks["Xi"],
        "w": pt.w(),
    });
    assert_eq!(got, fixture["phi"]);
    assert_eq!(sl_forward(&p).2, pt.w());
    assert_eq!(sl_forward_printed(&p).2, pt.w());

    // The displayed n = 1 equation gives Im w = 1 here; the image has Im w = −1.
    let model = build_model("SL", &params(&[("n", 1)])).unwrap();
    assert!(model.residual(&pt).unwrap().is_zero());
    let printed = model.family.printed_equation(&params(&[("n", 1)])).unwrap();
    assert!(!printed.residual(&pt.blocks).unwrap().is_zero());
}

#[test]
fn sl_n1_automorphism_fixture() {
    let model = build_model("SL", &params(&[("n", 1)])).unwrap();
    let alg = &model.algebra;
    let fixture: serde_json::Value =
        serde_json::from_str(include_str!("fixtures/sl_n1_automorphism.json")).unwrap();
    let coords = |key: &str| -> Vec<Scalar> { serde_json::from_value(fixture[key].clone()).unwrap() };
    let (x, y) = model.input(&coords("x"), &coords("y")).unwrap();
    let a: crlab::linalg::Matrix = serde_json::from_value(fixture["a"].clone()).unwrap();
    assert!(alg.realization.in_algebra(&a));
    let pt = model.point(&x, &y).unwrap();
    let v = infinitesimal_automorphism(&alg.realization, &a, &pt).unwrap();
    let expected: crlab::linalg::Matrix = serde_json::from_value(fixture["vector"].clone()).unwrap();
    assert_eq!(v, expected);
}

#[test]
fn sl_exact_back_solve_on_samples() {
    let model = build_model("SL", &params(&[("n", 2)])).unwrap();
    for s in model.sample_on_model(21, 5).unwrap().samples {
        let b = &s.point.blocks;
        match solve_back_exact(&b["Xi"], &b["Z1"], &b["Z2"]) {
            Ok((x1, x2, y1, y2)) => {
                let p = SlCoords { x1, y1, x2, y2, c: Scalar::int(0), xi: b["Xi"].clone() };
                let (z1, z2, _) = sl_forward(&p);
                assert_eq!((&z1, &z2), (&b["Z1"], &b["Z2"]));
            }
            Err(e) => assert!(matches!(e, Error::Singular(_))),
        }
    }
}

#[test]
fn registry_names_are_the_family_tags() {
    let names: Vec<&str> = registry().keys().copied().collect();
    assert_eq!(names, ["SL", "SO_hi", "SO_hyp", "SOstar_hi", "SOstar_hyp", "SP", "SU"]);
}
