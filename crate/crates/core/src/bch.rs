//! Nilpotent exponential and logarithm, the BCH remainder series, and the embedding `φ`
//! of a model into the big cell `n` together with its infinitesimal automorphisms.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{independent_subset, realify, real_rank, Matrix};
use crate::liealg::{MatrixRealization, RealizedAlgebra};
use crate::scalar::{Rational, Scalar};
use crate::{Error, Result};

/// A nilpotent square matrix together with its nilindex.
#[derive(Clone, Debug, PartialEq)]
pub struct NilMatrix {
    entries: Matrix,
    nilindex: usize,
}

impl NilMatrix {
    pub fn new(entries: Matrix) -> Result<Self> {
        let nilindex = nilindex(&entries)?;
        Ok(NilMatrix { entries, nilindex })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_matrix(self) -> Matrix {
        self.entries
    }

    /// Smallest `ν` with `M^ν = 0`.
    pub fn nilindex(&self) -> usize {
        self.nilindex
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }
}

/// Smallest `ν` with `M^ν = 0`, searching up to the size of `M`.
pub fn nilindex(m: &Matrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Input(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut p = Matrix::identity(n);
    for k in 0..=n {
        if p.is_zero() {
            return Ok(k);
        }
        p = &p * m;
    }
    Err(Error::NotNilpotent(format!("M^{n} != 0")))
}

/// Length `L` such that every product of `L` factors from `ms` vanishes.
///
/// Uses the filtration `V_0 = C^n`, `V_{k+1} = Σ M V_k`; fails if it stalls before reaching 0.
pub fn joint_nilindex(ms: &[&Matrix]) -> Result<usize> {
    let n = ms.first().map(|m| m.rows()).unwrap_or(0);
    if ms.iter().any(|m| !m.is_square() || m.rows() != n) {
        return Err(Error::Input("matrices of different sizes".into()));
    }
    let id = Matrix::identity(n);
    let mut space: Vec<Vec<Scalar>> = (0..n).map(|c| id.column(c)).collect();
    let mut k = 0;
    while !space.is_empty() {
        let images: Vec<Vec<Scalar>> = ms.iter().flat_map(|m| space.iter().map(move |v| m.mul_vec(v))).collect();
        let next: Vec<Vec<Scalar>> = independent_subset(&images).into_iter().map(|i| images[i].clone()).collect();
        if next.len() >= space.len() {
            return Err(Error::NotNilpotent("the matrices do not generate a nilpotent algebra".into()));
        }
        space = next;
        k += 1;
    }
    Ok(k)
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i.into()))
}

/// `exp(M) = Σ_{k<ν} M^k / k!`.
pub fn nil_exp(m: &NilMatrix) -> Matrix {
    let n = m.size();
    let mut out = Matrix::identity(n);
    let mut p = Matrix::identity(n);
    for k in 1..m.nilindex {
        p = &p * &m.entries;
        out = &out + &p.scale_rat(&(Rational::one() / factorial(k)));
    }
    out
}

/// `log(U) = Σ_{k≥1} (−1)^{k+1} (U − 1)^k / k` for unipotent `U`.
pub fn nil_log(u: &Matrix) -> Result<NilMatrix> {
    if !u.is_square() {
        return Err(Error::Input("log of a non-square matrix".into()));
    }
    let a = NilMatrix::new(u - &Matrix::identity(u.rows()))
        .map_err(|_| Error::NotNilpotent("U − 1 is not nilpotent".into()))?;
    let mut out = Matrix::zeros(u.rows(), u.rows());
    let mut p = Matrix::identity(u.rows());
    for k in 1..a.nilindex {
        p = &p * &a.entries;
        let c = Rational::new(if k % 2 == 1 { 1.into() } else { (-1).into() }, (k as i64).into());
        out = &out + &p.scale_rat(&c);
    }
    NilMatrix::new(out)
}

fn nil(m: &Matrix) -> Result<NilMatrix> {
    NilMatrix::new(m.clone())
}

/// `exp` of a matrix known to be nilpotent.
pub fn exp_of(m: &Matrix) -> Result<Matrix> {
    Ok(nil_exp(&nil(m)?))
}

fn ad_pow(x: &Matrix, k: usize, m: &Matrix) -> Matrix {
    (0..k).fold(m.clone(), |acc, _| x.commutator(&acc))
}

/// The remainder `f(Y,Z)` of the BCH series, so that `log(e^Y e^Z) = Y + Z + f(Y,Z)`.
///
/// Sums `(−1)^n/(n+1) · ad(Y)^{r_1} ad(Z)^{s_1} ⋯ ad(Y)^{r_n} ad(Z)^{s_n}(Y) / ((1 + Σ r_i) Π r_i! s_i!)`
/// over all `r_i + s_i > 0`, dropping words longer than the joint nilindex of `Y, Z`.
pub fn bch_remainder(y: &NilMatrix, z: &NilMatrix) -> Result<NilMatrix> {
    if y.size() != z.size() {
        return Err(Error::Input("BCH of matrices of different sizes".into()));
    }
    let len = joint_nilindex(&[&y.entries, &z.entries])?;
    let mut acc = Matrix::zeros(y.size(), y.size());
    // Each word is a product of `1 + Σ (r_i + s_i)` factors, so only budgets below `len − 1` survive.
    let budget = len.saturating_sub(2);
    dynkin_walk(&y.entries, &z.entries, &y.entries, 0, 0, Rational::one(), budget, &mut acc);
    NilMatrix::new(acc)
}

#[allow(clippy::too_many_arguments)]
fn dynkin_walk(
    y: &Matrix,
    z: &Matrix,
    current: &Matrix,
    n: usize,
    sum_r: usize,
    denom: Rational,
    budget: usize,
    acc: &mut Matrix,
) {
    if n > 0 {
        let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
        let c = sign / (Rational::from_integer((n as i64 + 1).into()) * Rational::from_integer((1 + sum_r as i64).into()) * &denom);
        *acc = &*acc + &current.scale_rat(&c);
    }
    for total in 1..=budget {
        for r in 0..=total {
            let s = total - r;
            // The new pair sits to the left: ad(Z)^s acts first, then ad(Y)^r.
            let next = ad_pow(y, r, &ad_pow(z, s, current));
            if next.is_zero() {
                continue;
            }
            let d = &denom * factorial(r) * factorial(s);
            dynkin_walk(y, z, &next, n + 1, sum_r + r, d, budget - total, acc);
        }
    }
}

/// Coefficients `c_k` with `g(Z,W) = Σ_k c_k ad(W)^k(Z)`, summed over compositions of `k`.
fn linear_part_coefficients(max_k: usize) -> Vec<Rational> {
    // comp[n][k] = Σ over compositions of k into n positive parts of 1/Π s_i!
    let mut comp: Vec<Vec<Rational>> = vec![vec![Rational::zero(); max_k + 1]; max_k + 1];
    comp[0][0] = Rational::one();
    for n in 1..=max_k {
        for k in n..=max_k {
            let mut v = Rational::zero();
            for s in 1..=k - (n - 1) {
                v += &comp[n - 1][k - s] / factorial(s);
            }
            comp[n][k] = v;
        }
    }
    let mut c = vec![Rational::zero(); max_k + 1];
    c[0] = Rational::one();
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        for (n, row) in comp.iter().enumerate().skip(1) {
            let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
            *ck += sign * &row[k] / Rational::from_integer((n as i64 + 1).into());
        }
    }
    c
}

/// `g(Z,W) = Z + Σ_n (−1)^n/(n+1) Σ_{s_i>0} ad(W)^{s_1+⋯+s_n}(Z) / Π s_i!`.
///
/// This is `d/dt|_{t=0} log(e^{tZ} e^W)`.
pub fn linear_part_g(z: &NilMatrix, w: &NilMatrix) -> Result<NilMatrix> {
    if z.size() != w.size() {
        return Err(Error::Input("matrices of different sizes".into()));
    }
    let len = joint_nilindex(&[&z.entries, &w.entries])?;
    let max_k = len.saturating_sub(1);
    let c = linear_part_coefficients(max_k);
    let mut acc = Matrix::zeros(z.size(), z.size());
    let mut term = z.entries.clone();
    for ck in c.iter() {
        if term.is_zero() {
            break;
        }
        acc = &acc + &term.scale_rat(ck);
        term = w.entries.commutator(&term);
    }
    NilMatrix::new(acc)
}

/// `f'(0)` for a matrix-valued polynomial `f` of degree at most `degree_bound`.
///
/// Samples `t = 0, …, degree_bound + 1`, checks that the top forward difference vanishes, and
/// reads the derivative off Newton's forward formula `f'(0) = Σ_k (−1)^{k+1} Δ^k f(0) / k`.
pub fn first_order_coefficient(f: impl Fn(&Scalar) -> Result<Matrix>, degree_bound: usize) -> Result<Matrix> {
    let mut values: Vec<Matrix> = (0..=degree_bound + 1).map(|t| f(&Scalar::int(t as i64))).collect::<Result<_>>()?;
    let (rows, cols) = (values[0].rows(), values[0].cols());
    let mut out = Matrix::zeros(rows, cols);
    for k in 1..values.len() {
        values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
        if k == degree_bound + 1 {
            if !values[0].is_zero() {
                return Err(Error::Consistency(format!("curve has degree above {degree_bound}")));
            }
            break;
        }
        let c = Rational::new(if k % 2 == 1 { 1.into() } else { (-1).into() }, (k as i64).into());
        out = &out + &values[0].scale_rat(&c);
    }
    Ok(out)
}

/// A point of the big cell in logarithmic coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    /// The element of `n` as a matrix.
    pub matrix: Matrix,
    /// Named coordinate blocks of the family layout.
    pub blocks: BTreeMap<String, Matrix>,
}

impl ModelPoint {
    pub fn from_matrix(real: &MatrixRealization, matrix: Matrix) -> Result<Self> {
        if !in_n(real, &matrix) {
            return Err(Error::Consistency("point leaves n".into()));
        }
        let mut blocks = BTreeMap::new();
        for b in &real.blocks {
            blocks.insert(b.name.clone(), real.get_block(&matrix, &b.name)?);
        }
        Ok(ModelPoint { matrix, blocks })
    }

    pub fn block(&self, name: &str) -> Option<&Matrix> {
        self.blocks.get(name)
    }

    /// The scalar `w` coordinate.
    pub fn w(&self) -> Scalar {
        self.blocks["w"][(0, 0)].clone()
    }
}

/// Membership in `n = g_{<0} ⊗ C` modulo `g_{−1,0}`, i.e. entries of bidegree `(a, b)` with `b < 0`.
pub fn in_n(real: &MatrixRealization, m: &Matrix) -> bool {
    real.project(m, |(_, b)| b >= 0).is_zero()
}

/// The `n`-component along the parabolic `p_{Σ2}` (all bidegrees with `b ≥ 0`).
pub fn project_n(real: &MatrixRealization, m: &Matrix) -> Matrix {
    real.project(m, |(_, b)| b < 0)
}

fn depth(real: &MatrixRealization) -> i64 {
    -real.bidegrees().iter().map(|&(a, _)| a).min().unwrap_or(0)
}

/// Graded pieces of an input pair `(X, Y)`.
struct PhiInput {
    u: Matrix,
    v: Matrix,
    x2: Matrix,
    b: Matrix,
}

fn split_input(real: &MatrixRealization, x: &Matrix, y: &Matrix) -> Result<PhiInput> {
    let n = real.size();
    if x.rows() != n || y.rows() != n || !x.is_square() || !y.is_square() {
        return Err(Error::Input(format!("expected {n}x{n} matrices")));
    }
    if !real.in_algebra(x) || !real.in_algebra(y) {
        return Err(Error::Precondition("input is not in the algebra".into()));
    }
    if !real.project(x, |(a, _)| a >= 0).is_zero() {
        return Err(Error::Precondition("X has components outside g_-".into()));
    }
    if !real.project(y, |(a, b)| !(a == 0 && (b == -1 || b == 1))).is_zero() {
        return Err(Error::Precondition("Y has components outside k".into()));
    }
    if real.conjugation.apply(x) != *x || real.conjugation.apply(y) != *y {
        return Err(Error::Precondition("input is not in the real form".into()));
    }
    Ok(PhiInput {
        u: real.project(x, |bd| bd == (-1, -1)),
        v: real.project(x, |bd| bd == (-1, 0)),
        x2: real.project(x, |(a, _)| a <= -2),
        b: real.project(y, |bd| bd == (0, -1)),
    })
}

/// `φ(X+Y) = log(exp(X) exp(½(Y − iIY)) exp(−½(X_{−1} + iIX_{−1})))`.
///
/// With `U = X_{−1,−1}`, `V = X_{−1,0}` and `B = Y_{0,−1}` the two inner factors are `exp(B)` and `exp(−V)`.
pub fn phi_matrix_path(real: &MatrixRealization, x: &Matrix, y: &Matrix) -> Result<Matrix> {
    let p = split_input(real, x, y)?;
    let prod = &(&exp_of(x)? * &exp_of(&p.b)?) * &exp_of(&-&p.v)?;
    Ok(nil_log(&prod)?.into_matrix())
}

/// Graded expansion of `φ` for depth 2:
/// `U + B + [V,B] + X_{−2} − ½[U,V] + ½[V,[V,B]] + f(U, B + [V,B])_{−2}`.
pub fn phi_closed_form(real: &MatrixRealization, x: &Matrix, y: &Matrix) -> Result<Matrix> {
    if depth(real) != 2 {
        return Err(Error::Precondition(format!("graded expansion implemented for depth 2, got {}", depth(real))));
    }
    let p = split_input(real, x, y)?;
    let half = Rational::new(1.into(), 2.into());
    let vb = p.v.commutator(&p.b);
    let degree_minus1 = &p.u;
    let f = bch_remainder(&nil(degree_minus1)?, &nil(&(&p.b + &vb))?)?;
    let f2 = real.project(f.matrix(), |(a, _)| a == -2);
    let mut out = &p.u + &p.b;
    out = &out + &vb;
    out = &out + &p.x2;
    out = &out - &p.u.commutator(&p.v).scale_rat(&half);
    out = &out + &p.v.commutator(&vb).scale_rat(&half);
    Ok(&out + &f2)
}

/// `φ(X+Y)` by both routes; a disagreement is a hard error.
pub fn embed_phi(real: &MatrixRealization, x: &Matrix, y: &Matrix) -> Result<ModelPoint> {
    let m = phi_matrix_path(real, x, y)?;
    let c = phi_closed_form(real, x, y)?;
    if m != c {
        return Err(Error::Consistency(format!(
            "phi paths disagree: matrix {m:?} vs graded expansion {c:?}"
        )));
    }
    ModelPoint::from_matrix(real, m)
}

/// Degree bound for curves built from products in the nilpotent algebra `g_{<0} ⊕ g_{0,±1}`.
fn curve_degree_bound(real: &MatrixRealization) -> usize {
    real.size()
}

/// The vector of `A ∈ g` at `exp(Y)`: `d/dt log(e^Y e^{tN})` with `N = (Ad(e^{−Y}) A)_n`.
///
/// Evaluated both by interpolation in `t` and as `g(Ad(e^Y) N, Y)`.
pub fn infinitesimal_automorphism(real: &MatrixRealization, a: &Matrix, point: &ModelPoint) -> Result<Matrix> {
    if !real.in_algebra(a) || real.conjugation.apply(a) != *a {
        return Err(Error::Precondition("A is not in the real form".into()));
    }
    let y = &point.matrix;
    if !in_n(real, y) {
        return Err(Error::Precondition("point is not in n".into()));
    }
    let ey = exp_of(y)?;
    let ey_inv = exp_of(&-y)?;
    let n_part = project_n(real, &(&(&ey_inv * a) * &ey));
    let by_curve = first_order_coefficient(
        |t| Ok(nil_log(&(&ey * &exp_of(&n_part.scale(t))?))?.into_matrix()),
        curve_degree_bound(real),
    )?;
    let moved = &(&ey * &n_part) * &ey_inv;
    let by_series = linear_part_g(&nil(&moved)?, &nil(y)?)?.into_matrix();
    if by_curve != by_series {
        return Err(Error::Consistency("automorphism vector differs between the two routes".into()));
    }
    Ok(by_curve)
}

/// Real directions of `g_− ⊕ k`, split into the `X` and `Y` parts.
fn domain_directions(alg: &RealizedAlgebra) -> Vec<(Matrix, Matrix)> {
    let n = alg.realization.size();
    let zero = Matrix::zeros(n, n);
    let mut out: Vec<(Matrix, Matrix)> =
        alg.gminus_indices().into_iter().map(|i| (alg.real_mats[i].clone(), zero.clone())).collect();
    out.extend(alg.kernel_indices().into_iter().map(|i| (zero.clone(), alg.real_mats[i].clone())));
    out
}

/// Columns of `dφ` at `(X, Y)`, one per real basis direction of `g_− ⊕ k`.
pub fn phi_jacobian(alg: &RealizedAlgebra, x: &Matrix, y: &Matrix) -> Result<Vec<Matrix>> {
    let real = &alg.realization;
    domain_directions(alg)
        .into_iter()
        .map(|(dx, dy)| {
            first_order_coefficient(
                |s| {
                    let s = s.re.clone();
                    phi_matrix_path(real, &(x + &dx.scale_rat(&s)), &(y + &dy.scale_rat(&s)))
                },
                curve_degree_bound(real),
            )
        })
        .collect()
}

/// Whether `v` lies in the real span of the Jacobian columns.
pub fn in_real_span(columns: &[Matrix], v: &Matrix) -> bool {
    let mut vecs: Vec<Vec<Scalar>> = columns.iter().map(|c| realify(&c.to_vec())).collect();
    let base = real_rank(&vecs);
    vecs.push(realify(&v.to_vec()));
    real_rank(&vecs) == base
}

/// Outcome of a tangency check at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Tangency {
    pub point: ModelPoint,
    pub vector: Matrix,
    pub jacobian_rank: usize,
    pub tangent: bool,
}

/// Whether the automorphism vector of `A` at `φ(X+Y)` is tangent to the model.
pub fn tangency_check(alg: &RealizedAlgebra, a: &Matrix, x: &Matrix, y: &Matrix) -> Result<bool> {
    let jac = phi_jacobian(alg, x, y)?;
    Ok(tangency_with(alg, &jac, a, x, y)?.tangent)
}

/// Tangency against a precomputed Jacobian, so several `A` can share one point.
pub fn tangency_with(alg: &RealizedAlgebra, jacobian: &[Matrix], a: &Matrix, x: &Matrix, y: &Matrix) -> Result<Tangency> {
    let point = embed_phi(&alg.realization, x, y)?;
    let vector = infinitesimal_automorphism(&alg.realization, a, &point)?;
    let jacobian_rank = real_rank(&jacobian.iter().map(|c| realify(&c.to_vec())).collect::<Vec<_>>());
    let tangent = in_real_span(jacobian, &vector);
    Ok(Tangency { point, vector, jacobian_rank, tangent })
}

/// Random Gaussian-rational matrices for oracle tests.
pub mod sample {
    use rand::Rng;

    use crate::linalg::Matrix;
    use crate::scalar::{Rational, Scalar};

    pub fn rational(rng: &mut impl Rng, bound: i64) -> Rational {
        Rational::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=bound).into())
    }

    pub fn gaussian(rng: &mut impl Rng, bound: i64) -> Scalar {
        Scalar::new(rational(rng, bound), rational(rng, bound))
    }

    /// Strictly upper-triangular `n × n` matrix with Gaussian-rational entries.
    pub fn strictly_upper(rng: &mut impl Rng, n: usize, bound: i64) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if j > i { gaussian(rng, bound) } else { Scalar::zero() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::realization::params;
    use crate::liealg::{classical_realization, Classical};
    use rand::SeedableRng;
    use rand_pcg::Pcg64;

    fn nm(rows: &[&[i64]]) -> NilMatrix {
        NilMatrix::new(Matrix::from_int_rows(rows)).unwrap()
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = NilMatrix::new(Matrix::zeros(3, 3)).unwrap();
        assert_eq!(z.nilindex(), 1);
        assert_eq!(nil_exp(&z), Matrix::identity(3));
    }

    #[test]
    fn jordan_block_exp() {
        let j = nm(&[&[0, 5], &[0, 0]]);
        assert_eq!(nil_exp(&j), Matrix::from_int_rows(&[&[1, 5], &[0, 1]]));
    }

    #[test]
    fn non_nilpotent_rejected() {
        assert!(matches!(NilMatrix::new(Matrix::identity(2)), Err(Error::NotNilpotent(_))));
        assert!(matches!(nil_log(&Matrix::from_int_rows(&[&[2, 0], &[0, 1]])), Err(Error::NotNilpotent(_))));
    }

    #[test]
    fn log_exp_round_trip() {
        let mut rng = Pcg64::seed_from_u64(7);
        for _ in 0..10 {
            let m = NilMatrix::new(sample::strictly_upper(&mut rng, 5, 5)).unwrap();
            assert_eq!(nil_log(&nil_exp(&m)).unwrap(), m);
        }
    }

    #[test]
    fn joint_nilindex_detects_non_nilpotent_pairs() {
        let e = Matrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        let f = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        assert_eq!(joint_nilindex(&[&e]).unwrap(), 2);
        assert!(joint_nilindex(&[&e, &f]).is_err());
    }

    #[test]
    fn commuting_remainder_vanishes() {
        let y = nm(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let z = nm(&[&[0, 0, 3], &[0, 0, 0], &[0, 0, 0]]);
        assert!(bch_remainder(&y, &z).unwrap().matrix().is_zero());
    }

    #[test]
    fn two_step_remainder_is_half_bracket() {
        let y = nm(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let z = nm(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
        let f = bch_remainder(&y, &z).unwrap();
        assert_eq!(*f.matrix(), y.matrix().commutator(z.matrix()).scale_rat(&Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn remainder_matches_matrix_log() {
        let mut rng = Pcg64::seed_from_u64(11);
        for n in [4, 5] {
            for _ in 0..4 {
                let y = NilMatrix::new(sample::strictly_upper(&mut rng, n, 4)).unwrap();
                let z = NilMatrix::new(sample::strictly_upper(&mut rng, n, 4)).unwrap();
                let oracle = &(nil_log(&(&nil_exp(&y) * &nil_exp(&z))).unwrap().into_matrix() - y.matrix()) - z.matrix();
                assert_eq!(*bch_remainder(&y, &z).unwrap().matrix(), oracle);
            }
        }
    }

    #[test]
    fn linear_part_coefficients_are_bernoulli() {
        // x/(e^x − 1) = 1 − x/2 + x²/12 − x⁴/720
        let c = linear_part_coefficients(4);
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(c, vec![q(1, 1), q(-1, 2), q(1, 12), q(0, 1), q(-1, 720)]);
    }

    #[test]
    fn linear_part_trivial_cases() {
        let z = nm(&[&[0, 1, 2], &[0, 0, 3], &[0, 0, 0]]);
        let zero = NilMatrix::new(Matrix::zeros(3, 3)).unwrap();
        assert_eq!(linear_part_g(&z, &zero).unwrap(), z);
        let w = nm(&[&[0, 0, 7], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(linear_part_g(&z, &w).unwrap(), z);
    }

    #[test]
    fn linear_part_is_left_derivative() {
        let mut rng = Pcg64::seed_from_u64(5);
        for _ in 0..5 {
            let z = NilMatrix::new(sample::strictly_upper(&mut rng, 5, 4)).unwrap();
            let w = NilMatrix::new(sample::strictly_upper(&mut rng, 5, 4)).unwrap();
            let ew = nil_exp(&w);
            let oracle = first_order_coefficient(
                |t| Ok(nil_log(&(&exp_of(&z.matrix().scale(t))? * &ew))?.into_matrix()),
                5,
            )
            .unwrap();
            assert_eq!(*linear_part_g(&z, &w).unwrap().matrix(), oracle);
            let right = first_order_coefficient(
                |t| Ok(nil_log(&(&ew * &exp_of(&z.matrix().scale(t))?))?.into_matrix()),
                5,
            )
            .unwrap();
            assert_ne!(*linear_part_g(&z, &w).unwrap().matrix(), right);
        }
    }

    #[test]
    fn interpolation_rejects_high_degree() {
        let r = first_order_coefficient(|t| Ok(Matrix::diagonal(&[t.clone() * t.clone() * t.clone()])), 2);
        assert!(matches!(r, Err(Error::Consistency(_))));
        let d = first_order_coefficient(|t| Ok(Matrix::diagonal(&[Scalar::int(3) + t.clone() * Scalar::int(4) + t.clone() * t.clone()])), 2);
        assert_eq!(d.unwrap(), Matrix::diagonal(&[Scalar::int(4)]));
    }

    fn sl4() -> RealizedAlgebra {
        classical_realization(Classical::Sl, &params(&[("n", 1)])).unwrap()
    }

    fn combo(alg: &RealizedAlgebra, idx: &[usize], coeffs: &[i64]) -> Matrix {
        let n = alg.realization.size();
        idx.iter()
            .zip(coeffs)
            .fold(Matrix::zeros(n, n), |acc, (&i, &c)| &acc + &alg.real_mats[i].scale(&Scalar::int(c)))
    }

    #[test]
    fn phi_at_origin_and_on_g_minus2() {
        let alg = sl4();
        let n = alg.realization.size();
        let zero = Matrix::zeros(n, n);
        assert!(embed_phi(&alg.realization, &zero, &zero).unwrap().matrix.is_zero());
        let c = alg.real.indices_of_degree(-2);
        let x = combo(&alg, &c, &[3]);
        assert_eq!(embed_phi(&alg.realization, &x, &zero).unwrap().matrix, x);
    }

    #[test]
    fn phi_paths_agree_on_random_sl4_points() {
        let alg = sl4();
        let gm = alg.gminus_indices();
        let k = alg.kernel_indices();
        let mut rng = Pcg64::seed_from_u64(3);
        for _ in 0..5 {
            let xc: Vec<i64> = gm.iter().map(|_| rand::Rng::gen_range(&mut rng, -3..=3)).collect();
            let yc: Vec<i64> = k.iter().map(|_| rand::Rng::gen_range(&mut rng, -3..=3)).collect();
            let p = embed_phi(&alg.realization, &combo(&alg, &gm, &xc), &combo(&alg, &k, &yc)).unwrap();
            assert!(in_n(&alg.realization, &p.matrix));
        }
    }

    #[test]
    fn jacobian_at_origin_is_injective() {
        let alg = sl4();
        let n = alg.realization.size();
        let zero = Matrix::zeros(n, n);
        let jac = phi_jacobian(&alg, &zero, &zero).unwrap();
        let rank = real_rank(&jac.iter().map(|c| realify(&c.to_vec())).collect::<Vec<_>>());
        assert_eq!(rank, alg.gminus_indices().len() + alg.kernel_indices().len());
    }

    #[test]
    fn grading_element_vanishes_at_origin() {
        let alg = sl4();
        let n = alg.realization.size();
        let origin = ModelPoint::from_matrix(&alg.realization, Matrix::zeros(n, n)).unwrap();
        let e1 = alg.realization.e1_matrix();
        assert!(infinitesimal_automorphism(&alg.realization, &e1, &origin).unwrap().is_zero());
    }

    #[test]
    fn deepest_translations_are_constant() {
        let alg = sl4();
        let c = alg.real.indices_of_degree(-2)[0];
        let a = alg.real_mats[c].clone();
        let gm = alg.gminus_indices();
        let k = alg.kernel_indices();
        let x = combo(&alg, &gm, &[1, -2, 3, 1, 2]);
        let y = combo(&alg, &k, &[1, 1]);
        let p = embed_phi(&alg.realization, &x, &y).unwrap();
        assert_eq!(infinitesimal_automorphism(&alg.realization, &a, &p).unwrap(), a);
        assert!(tangency_check(&alg, &a, &x, &y).unwrap());
    }

    #[test]
    fn every_sl4_generator_is_tangent_at_a_point() {
        let alg = sl4();
        let gm = alg.gminus_indices();
        let k = alg.kernel_indices();
        let x = combo(&alg, &gm, &[2, -1, 1, 3, -1]);
        let y = combo(&alg, &k, &[1, -1]);
        let jac = phi_jacobian(&alg, &x, &y).unwrap();
        for a in &alg.real_mats {
            let t = tangency_with(&alg, &jac, a, &x, &y).unwrap();
            assert!(t.tangent);
            assert_eq!(t.jacobian_rank, 7);
        }
    }

    #[test]
    fn transverse_direction_is_not_tangent() {
        let alg = sl4();
        let gm = alg.gminus_indices();
        let k = alg.kernel_indices();
        let x = combo(&alg, &gm, &[1, 1, -1, 2, 1]);
        let y = combo(&alg, &k, &[1, 2]);
        let jac = phi_jacobian(&alg, &x, &y).unwrap();
        let c = alg.real.indices_of_degree(-2)[0];
        let transverse = alg.real_mats[c].scale(&Scalar::i());
        assert!(!in_real_span(&jac, &transverse));
    }
}
