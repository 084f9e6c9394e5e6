//! Model hypersurfaces: construction, on-model sampling, residuals and reports.

pub mod expr;
pub mod families;
pub mod sl;

use std::collections::BTreeMap;

use rand::Rng;
use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bch::{embed_phi, ModelPoint};
use crate::linalg::Matrix;
use crate::liealg::{
    check_levi_tanaka, check_regularity, classical_realization, grading_elements, iota_map, levi_kernel, levi_signature,
    Classical, RealizedAlgebra,
};
use crate::scalar::{Rational, Scalar};
use crate::{Error, Result};

pub use expr::{DefiningEquation, Expr};
pub use families::{family, registry, ModelFamily, Simplified};

/// Results of the structural checks run when a model is built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureChecks {
    pub levi_kernel_is_k: bool,
    pub iota_injective: bool,
    pub regular: bool,
    pub levi_tanaka: bool,
    pub grading_identity: bool,
    /// `(p, q, dim_C k)` computed from structure constants.
    pub signature: (usize, usize, usize),
    pub expected_signature: (usize, usize, usize),
    /// Agreement up to swapping `p` and `q`, which depends on the orientation of `g_{−2}`.
    pub signature_matches: bool,
}

impl StructureChecks {
    pub fn all_pass(&self) -> bool {
        self.levi_kernel_is_k
            && self.iota_injective
            && self.regular
            && self.levi_tanaka
            && self.grading_identity
            && self.signature_matches
    }
}

pub struct ModelInstance {
    pub family: Box<dyn ModelFamily>,
    pub params: BTreeMap<String, i64>,
    pub algebra: RealizedAlgebra,
    pub equation: DefiningEquation,
    pub checks: StructureChecks,
}

impl std::fmt::Debug for ModelInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModelInstance").field("family", &self.family.name()).field("params", &self.params).finish()
    }
}

/// Runs the structural checks on a realized algebra.
pub fn structure_checks(fam: &dyn ModelFamily, params: &BTreeMap<String, i64>, alg: &RealizedAlgebra) -> Result<StructureChecks> {
    let data = alg.levi_data()?;
    let (m, _) = data.symbol_algebra()?;
    let ker = levi_kernel(&m);
    let n1 = data.g1().len();
    let levi_kernel_is_k = ker.len() == data.dim_k() && ker.iter().all(|v| v[..n1].iter().all(Scalar::is_zero));
    let slt = data.second_order();
    let iota_injective = iota_map(&slt).injective;
    let regular = check_regularity(&slt).regular;
    let levi_tanaka = check_levi_tanaka(&data)?.all_hold();
    let grading_identity = grading_elements(alg).is_ok();
    let two = alg.real.indices_of_degree(-2).len();
    let functional = vec![Scalar::one(); two];
    let (p, q, _) = levi_signature(&data, &functional)?;
    let signature = (p, q, data.dim_k() / 2);
    let expected_signature = fam.signature(params);
    let (ep, eq, ek) = expected_signature;
    let signature_matches = ek == signature.2 && ((p, q) == (ep, eq) || (q, p) == (ep, eq));
    Ok(StructureChecks {
        levi_kernel_is_k,
        iota_injective,
        regular,
        levi_tanaka,
        grading_identity,
        signature,
        expected_signature,
        signature_matches,
    })
}

/// Realizes the family, attaches its equation and runs the structural checks.
pub fn build_model(name: &str, params: &BTreeMap<String, i64>) -> Result<ModelInstance> {
    let fam = family(name).ok_or_else(|| Error::Input(format!("unknown family {name}")))?;
    let tag: Classical = fam.tag();
    let algebra = classical_realization(tag, params)?;
    let checks = structure_checks(fam.as_ref(), params, &algebra)?;
    if !checks.all_pass() {
        return Err(Error::Consistency(format!("{name} {params:?} fails structural checks: {checks:?}")));
    }
    let equation = fam.equation(params);
    Ok(ModelInstance { family: fam, params: params.clone(), algebra, equation, checks })
}

/// One on-model sample: the real input `(X, Y)` and its image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub index: usize,
    pub x: Matrix,
    pub y: Matrix,
    pub point: ModelPoint,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub samples: Vec<Sample>,
    pub singular_skips: usize,
    /// Indices for which every attempt hit a singular locus.
    pub exhausted: Vec<usize>,
}

/// Numerator and denominator bound for rational draws.
pub const DEFAULT_BOUND: i64 = 7;
const MAX_ATTEMPTS: usize = 20;

fn draw(rng: &mut Pcg64, bound: i64) -> Scalar {
    let num: i64 = rng.gen_range(-bound..=bound);
    let den: i64 = rng.gen_range(1..=bound);
    Scalar::real(Rational::new(num.into(), den.into()))
}

impl ModelInstance {
    pub fn name(&self) -> &'static str {
        self.family.name()
    }

    /// `X + Y` from real coordinates on `g_−` and `k`.
    pub fn input(&self, x: &[Scalar], y: &[Scalar]) -> Result<(Matrix, Matrix)> {
        let gm = self.algebra.gminus_indices();
        let k = self.algebra.kernel_indices();
        if x.len() != gm.len() || y.len() != k.len() {
            return Err(Error::Input(format!("expected {} + {} coordinates", gm.len(), k.len())));
        }
        let n = self.algebra.realization.size();
        let combine = |idx: &[usize], c: &[Scalar]| {
            idx.iter().zip(c).fold(Matrix::zeros(n, n), |acc, (&i, s)| &acc + &self.algebra.real_mats[i].scale(s))
        };
        Ok((combine(&gm, x), combine(&k, y)))
    }

    pub fn point(&self, x: &Matrix, y: &Matrix) -> Result<ModelPoint> {
        embed_phi(&self.algebra.realization, x, y)
    }

    /// Left minus right side of the defining equation at `point`.
    pub fn residual(&self, point: &ModelPoint) -> Result<Scalar> {
        self.equation.residual(&point.blocks)
    }

    /// The point moved by the transverse unit in `w`.
    pub fn perturbed(&self, point: &ModelPoint) -> ModelPoint {
        let mut moved = point.clone();
        let (r, c) = self.algebra.realization.w_entry();
        let t = self.family.transverse_unit();
        moved.matrix[(r, c)] += &t;
        let w = moved.blocks.get_mut("w").expect("every family has w");
        w[(0, 0)] += &t;
        moved
    }

    /// Draws the sample with the given index, retrying inside its own stream on singular loci.
    fn sample_one(&self, seed: u64, index: usize, bound: i64) -> Result<(Option<Sample>, usize)> {
        let mut rng = Pcg64::new(seed as u128, index as u128);
        let nx = self.algebra.gminus_indices().len();
        let ny = self.algebra.kernel_indices().len();
        let mut skips = 0;
        for _ in 0..MAX_ATTEMPTS {
            let xc: Vec<Scalar> = (0..nx).map(|_| draw(&mut rng, bound)).collect();
            let yc: Vec<Scalar> = (0..ny).map(|_| draw(&mut rng, bound)).collect();
            let (x, y) = self.input(&xc, &yc)?;
            let point = self.point(&x, &y)?;
            match self.residual(&point) {
                Err(Error::Singular(_)) => skips += 1,
                _ => return Ok((Some(Sample { index, x, y, point }), skips)),
            }
        }
        Ok((None, skips))
    }

    /// Deterministic on-model samples for `(seed, count)`; index `i` uses PCG stream `i`.
    pub fn sample_on_model(&self, seed: u64, count: usize) -> Result<SampleBatch> {
        self.sample_with_bound(seed, count, DEFAULT_BOUND)
    }

    pub fn sample_with_bound(&self, seed: u64, count: usize, bound: i64) -> Result<SampleBatch> {
        let drawn: Vec<(Option<Sample>, usize)> =
            (0..count).into_par_iter().map(|i| self.sample_one(seed, i, bound)).collect::<Result<_>>()?;
        let mut batch = SampleBatch::default();
        for (i, (s, skips)) in drawn.into_iter().enumerate() {
            batch.singular_skips += skips;
            match s {
                Some(s) => batch.samples.push(s),
                None => batch.exhausted.push(i),
            }
        }
        Ok(batch)
    }

    pub fn equation_digest(&self) -> String {
        equation_digest(&self.equation)
    }

    /// Samples, checks the residual on-model and its sensitivity off-model.
    pub fn verify(&self, seed: u64, count: usize) -> Result<ResidualReport> {
        let batch = self.sample_on_model(seed, count)?;
        let checks: Vec<Vec<Failure>> = batch.samples.par_iter().map(|s| self.check_sample(s)).collect();
        let mut failures: Vec<Failure> = checks.into_iter().flatten().collect();
        failures.extend(batch.exhausted.iter().map(|&index| Failure {
            index,
            kind: FailureKind::Exhausted,
            detail: format!("{MAX_ATTEMPTS} draws hit singular loci"),
        }));
        Ok(ResidualReport {
            family: self.name().to_string(),
            params: self.params.clone(),
            samples: batch.samples.len(),
            failures,
            singular_skips: batch.singular_skips,
            equation_digest: self.equation_digest(),
            erratum: self.family.erratum(&self.params),
        })
    }

    fn check_sample(&self, s: &Sample) -> Vec<Failure> {
        let mut out = Vec::new();
        let fail = |kind, detail: String| Failure { index: s.index, kind, detail };
        match self.residual(&s.point) {
            Ok(r) if r.is_zero() => {}
            Ok(r) => out.push(fail(FailureKind::Residual, r.to_string())),
            Err(e) => out.push(fail(FailureKind::Residual, e.to_string())),
        }
        match self.residual(&self.perturbed(&s.point)) {
            Ok(r) if !r.is_zero() => {}
            Ok(r) => out.push(fail(FailureKind::Perturbation, r.to_string())),
            Err(e) => out.push(fail(FailureKind::Perturbation, e.to_string())),
        }
        out
    }
}

pub fn equation_digest(eq: &DefiningEquation) -> String {
    let digest = Sha256::digest(eq.to_json().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// Nonzero residual at an on-model point.
    Residual,
    /// Zero residual after moving off the model.
    Perturbation,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    pub kind: FailureKind,
    /// Residual value as an exact string, or the error message.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub family: String,
    pub params: BTreeMap<String, i64>,
    pub samples: usize,
    pub failures: Vec<Failure>,
    pub singular_skips: usize,
    pub equation_digest: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub erratum: Option<String>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The small-parameter instances exercised by the verification suite.
pub fn shipped_instances() -> Vec<(&'static str, BTreeMap<String, i64>)> {
    let p = crate::liealg::realization::params;
    vec![
        ("SL", p(&[("n", 1)])),
        ("SL", p(&[("n", 2)])),
        ("SU", p(&[("p", 1), ("q", 1), ("r", 1), ("s", 0)])),
        ("SU", p(&[("p", 2), ("q", 0), ("r", 1), ("s", 0)])),
        ("SU", p(&[("p", 1), ("q", 1), ("r", 0), ("s", 1)])),
        ("SO_hyp", p(&[("p", 0), ("q", 1)])),
        ("SO_hyp", p(&[("p", 1), ("q", 1)])),
        ("SO_hyp", p(&[("p", 0), ("q", 2)])),
        ("SOstar_hyp", p(&[("n", 1)])),
        ("SOstar_hyp", p(&[("n", 2)])),
        ("SO_hi", p(&[("p", 1), ("q", 1)])),
        ("SOstar_hi", p(&[("n", 2), ("p", 0)])),
        ("SOstar_hi", p(&[("n", 2), ("p", 1)])),
        ("SP", p(&[("n", 1), ("p", 0)])),
        ("SP", p(&[("n", 2), ("p", 0)])),
        ("SP", p(&[("n", 2), ("p", 1)])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::realization::params;

    #[test]
    fn registry_has_seven_families() {
        let r = registry();
        assert_eq!(r.len(), 7);
        for c in Classical::ALL {
            assert_eq!(r[c.name()].tag(), c);
        }
    }

    #[test]
    fn unknown_family_is_input_error() {
        assert!(build_model("SX", &params(&[])).unwrap_err().is_input_error());
        assert!(build_model("SL", &params(&[("n", 9)])).unwrap_err().is_input_error());
    }

    #[test]
    fn zero_samples() {
        let m = build_model("SL", &params(&[("n", 1)])).unwrap();
        assert!(m.sample_on_model(42, 0).unwrap().samples.is_empty());
    }

    #[test]
    fn origin_satisfies_every_equation() {
        for (name, ps) in shipped_instances() {
            let m = build_model(name, &ps).unwrap();
            let n = m.algebra.realization.size();
            let o = m.point(&Matrix::zeros(n, n), &Matrix::zeros(n, n)).unwrap();
            assert!(m.residual(&o).unwrap().is_zero(), "{name} {ps:?}");
            let r = m.residual(&m.perturbed(&o)).unwrap();
            assert!(r == Scalar::one() || r == Scalar::int(-1), "{name}: {r}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = build_model("SO_hyp", &params(&[("p", 0), ("q", 1)])).unwrap();
        let a = m.sample_on_model(42, 3).unwrap();
        let b = m.sample_on_model(42, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples.len(), 3);
    }

    #[test]
    fn unit_xi_is_singular() {
        let m = build_model("SO_hyp", &params(&[("p", 0), ("q", 1)])).unwrap();
        let n = m.algebra.realization.size();
        let mut p = m.point(&Matrix::zeros(n, n), &Matrix::zeros(n, n)).unwrap();
        p.blocks.insert("xi".into(), Matrix::diagonal(&[Scalar::one()]));
        assert!(matches!(m.residual(&p), Err(Error::Singular(_))));
    }

    #[test]
    fn sl_n1_verifies() {
        let m = build_model("SL", &params(&[("n", 1)])).unwrap();
        let rep = m.verify(42, 5).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.samples, 5);
    }
}
