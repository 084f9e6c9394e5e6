use crlab::liealg::realization::params;
use crlab::liealg::{classical_realization, graded_matrix_algebra, Classical};
use crlab::linalg::Matrix;
use crlab::prolong::{
    ce_cohomology, check_complex, desk_complex, differential, nonpositive_part, tanaka_prolong, tanaka_prolong_reduced,
    ReductionData, WeightRule,
};

fn sp6_omega() -> Matrix {
    Matrix::from_int_rows(&[
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 1],
        &[-1, 0, 0, 0, 0, 0],
        &[0, -1, 0, 0, 0, 0],
        &[0, 0, -1, 0, 0, 0],
    ])
}

#[test]
fn sp6_second_node_prolongs_to_sp6() {
    let (alg, _) = graded_matrix_algebra(Some(&sp6_omega()), &[1, 1, 0, -1, -1, 0]).unwrap();
    let idx = alg.indices_where(|b| b.degree <= 0);
    let base = alg.subalgebra(&idx).unwrap();
    let r = tanaka_prolong(&base, 5).unwrap();
    assert!(r.terminated);
    assert!(!r.reduction_applied);
    assert_eq!(r.total_dim, 21, "{r:?}");
    assert_eq!(r.dims[&1], 4);
    assert_eq!(r.dims[&2], 3);
}

#[test]
fn su22_reduced_prolongation() {
    let alg = classical_realization(Classical::Su, &params(&[("p", 1), ("q", 1), ("r", 1), ("s", 0)])).unwrap();
    let base = nonpositive_part(&alg).unwrap();
    let red = ReductionData::from_realized(&alg).unwrap();
    let r = tanaka_prolong_reduced(&base, &red, 5).unwrap();
    assert_eq!(r.total_dim, 15);
    assert!(r.terminated);
}

#[test]
fn sp4_first_homogeneity_cohomology_is_nonzero() {
    let alg = classical_realization(Classical::Sp, &params(&[("n", 1), ("p", 0)])).unwrap();
    let (n, m) = desk_complex(&alg, WeightRule::Total).unwrap();
    check_complex(&n, &m, 0).unwrap();
    assert!(ce_cohomology(&n, &m, 1, 0).unwrap().dim > 0);
}

#[test]
fn truncated_euler_characteristic() {
    // Σ_{k≤2} (−1)^k (dim C^k − dim H^k) = rank d_2 once d_{−1} = 0.
    let alg = classical_realization(Classical::Sl, &params(&[("n", 1)])).unwrap();
    let (n, m) = desk_complex(&alg, WeightRule::Total).unwrap();
    for h in -2..=3 {
        let mut defect = 0i64;
        for k in 0..=2usize {
            let r = ce_cohomology(&n, &m, k, h).unwrap();
            let sign = if k % 2 == 0 { 1 } else { -1 };
            defect += sign * (r.cochain_dim as i64 - r.dim as i64);
        }
        assert_eq!(defect, differential(&n, &m, 2, h).rank() as i64, "h = {h}");
    }
}
