use crlab::bch::{phi_jacobian, tangency_with};
use crlab::models::{build_model, shipped_instances};

/// Every basis automorphism of every shipped model is tangent at a couple of sampled points.
#[test]
fn basis_automorphisms_are_tangent_for_every_family() {
    for (name, p) in shipped_instances() {
        let model = build_model(name, &p).unwrap();
        let alg = &model.algebra;
        let expected_rank = alg.gminus_indices().len() + alg.kernel_indices().len();
        for s in model.sample_on_model(99, 2).unwrap().samples {
            let jac = phi_jacobian(alg, &s.x, &s.y).unwrap();
            for (i, a) in alg.real_mats.iter().enumerate() {
                let t = tangency_with(alg, &jac, a, &s.x, &s.y).unwrap();
                assert_eq!(t.jacobian_rank, expected_rank, "{name} {p:?}");
                assert!(t.tangent, "{name} {p:?} generator {i} at sample {}", s.index);
            }
        }
    }
}

#[test]
fn transverse_shift_of_a_generator_is_not_tangent() {
    let p = crlab::liealg::realization::params(&[("n", 1), ("p", 0)]);
    let model = build_model("SP", &p).unwrap();
    let alg = &model.algebra;
    let s = &model.sample_on_model(4, 1).unwrap().samples[0];
    let jac = phi_jacobian(alg, &s.x, &s.y).unwrap();
    let a = &alg.real_mats[0];
    let t = tangency_with(alg, &jac, a, &s.x, &s.y).unwrap();
    assert!(t.tangent);
    // Adding i times the vector of a g_{-2} translation leaves the real span.
    let c = alg.indices_of_orbit((-2, -1))[0];
    let shift = tangency_with(alg, &jac, &alg.real_mats[c], &s.x, &s.y).unwrap().vector;
    let moved = &t.vector + &shift.scale(&crlab::Scalar::i());
    assert!(!crlab::bch::in_real_span(&jac, &moved));
}
