//! The seven classical families and their defining equations.

use std::collections::BTreeMap;

use super::expr::{conj, ct, frac, ident, im, imag_unit, int, inv, ipq, re, sym, tr, DefiningEquation, Expr};
use crate::liealg::Classical;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::{Error, Result};

type Params = BTreeMap<String, i64>;

fn get(params: &Params, key: &str) -> usize {
    params.get(key).copied().unwrap_or(0).max(0) as usize
}

/// A family of model hypersurfaces, keyed by its matrix realization.
pub trait ModelFamily: Send + Sync {
    fn tag(&self) -> Classical;

    fn name(&self) -> &'static str {
        self.tag().name()
    }

    fn param_schema(&self) -> &'static [(&'static str, i64, i64)] {
        self.tag().param_schema()
    }

    /// The equation that vanishes on the image of `φ`.
    fn equation(&self, params: &Params) -> DefiningEquation;

    /// The equation as printed next to the matrix display, when it differs from [`Self::equation`].
    fn printed_equation(&self, _params: &Params) -> Option<DefiningEquation> {
        None
    }

    /// Shift of `w` that leaves the model: `i` when the equation constrains `Im(w)`, `1` for `Re(w)`.
    fn transverse_unit(&self) -> Scalar;

    /// The `(p, q, dim k)` annotation of the family.
    fn signature(&self, params: &Params) -> (usize, usize, usize);

    fn erratum(&self, _params: &Params) -> Option<String> {
        None
    }

    /// A scalar rewrite for the smallest instances, when the family has one.
    fn simplified(&self, _params: &Params) -> Option<Simplified> {
        None
    }
}

/// `lhs = numerator / denominator` in scalar coordinates `z = Z¹`, `w' = w_scale·w`,
/// `ξ' = xi_scale·ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Simplified {
    pub lhs: Expr,
    pub numerator: Expr,
    pub denominator: Expr,
    pub w_scale: Scalar,
    pub xi_scale: Scalar,
}

impl Simplified {
    pub fn equation(&self) -> DefiningEquation {
        DefiningEquation::new(self.lhs.clone(), self.numerator.clone() * inv(self.denominator.clone()))
    }

    pub fn latex(&self) -> String {
        format!("{} = \\frac{{{}}}{{{}}}", self.lhs.latex(), self.numerator.latex(), self.denominator.latex())
    }

    /// The `z, w, xi` values of a model point.
    pub fn coordinates(&self, blocks: &BTreeMap<String, Matrix>) -> Result<BTreeMap<String, Matrix>> {
        let get = |k: &str| blocks.get(k).ok_or_else(|| Error::Input(format!("point has no {k} block")));
        let z = get("Z1")?;
        if z.rows() != 1 || z.cols() != 1 {
            return Err(Error::Input("scalar form needs a one-dimensional Z1".into()));
        }
        let xi = blocks.get("xi").or_else(|| blocks.get("Xi")).ok_or_else(|| Error::Input("point has no xi".into()))?;
        Ok(BTreeMap::from([
            ("z".to_string(), z.clone()),
            ("w".to_string(), get("w")?.scale(&self.w_scale)),
            ("xi".to_string(), xi.scale(&self.xi_scale)),
        ]))
    }

    pub fn residual(&self, blocks: &BTreeMap<String, Matrix>) -> Result<Scalar> {
        self.equation().residual(&self.coordinates(blocks)?)
    }
}

/// `Re(w) = (z z̄ + Re(z² ξ̄)) / (1 − ξ ξ̄)`, the tube over the light cone.
fn light_cone(w_scale: i64, xi_scale: i64) -> Simplified {
    let (z, xi) = (sym("z"), sym("xi"));
    Simplified {
        lhs: re(sym("w")),
        numerator: z.clone() * conj(z.clone()) + re(z.clone() * z * conj(xi.clone())),
        denominator: int(1) - xi.clone() * conj(xi),
        w_scale: Scalar::int(w_scale),
        xi_scale: Scalar::int(xi_scale),
    }
}

/// `(a + b) / c` style division by a scalar auxiliary.
fn over(den_name: &str, num: Expr) -> Expr {
    sym(den_name) * num
}

pub struct Sl;
pub struct Su;
pub struct SoHyp;
pub struct SoStarHyp;
pub struct SoHi;
pub struct SoStarHi;
pub struct Sp;

impl ModelFamily for Sl {
    fn tag(&self) -> Classical {
        Classical::Sl
    }

    fn equation(&self, params: &Params) -> DefiningEquation {
        let n = get(params, "n");
        let (z1, z2, xi) = (sym("Z1"), sym("Z2"), sym("Xi"));
        DefiningEquation::new(im(sym("w")), -im(sym("v") * conj(sym("u"))) - im(conj(sym("v")) * sym("Xi") * conj(sym("u"))))
            .with_aux("u", inv(ident(n) - xi.clone() * conj(xi.clone())) * (z1.clone() + xi.clone() * conj(z1)))
            .with_aux("v", (z2.clone() - conj(z2) * xi.clone()) * inv(ident(n) - conj(xi.clone()) * xi))
    }

    fn printed_equation(&self, params: &Params) -> Option<DefiningEquation> {
        let n = get(params, "n");
        let (z1, z2, xi) = (sym("Z1"), sym("Z2"), sym("Xi"));
        let d = sym("D");
        let rhs = -(imag_unit() * (z2.clone() * d.clone() * conj(z1.clone()) - conj(z2.clone()) * d.clone() * z1.clone()))
            + im(z2 * d * conj(xi.clone()) * z1);
        Some(
            DefiningEquation::new(im(sym("w")), rhs)
                .with_aux("D", inv(int(2) * ident(n) - xi.clone() * conj(xi.clone()) - conj(xi.clone()) * xi)),
        )
    }

    fn transverse_unit(&self) -> Scalar {
        Scalar::i()
    }

    fn signature(&self, params: &Params) -> (usize, usize, usize) {
        let n = get(params, "n");
        (n, n, n * n)
    }

    fn erratum(&self, _params: &Params) -> Option<String> {
        Some(
            "printed Im(w) equation has the opposite overall sign and uses (2id-XiXib-XibXi)^-1, which is exact only \
             when Xi commutes with its conjugate; shipped form uses u=(id-XiXib)^-1(Z1+XiZ1b), v=(Z2-Z2bXi)(id-XibXi)^-1"
                .into(),
        )
    }
}

impl ModelFamily for Su {
    fn tag(&self) -> Classical {
        Classical::Su
    }

    fn equation(&self, params: &Params) -> DefiningEquation {
        let (p, q, r, s) = (get(params, "p"), get(params, "q"), get(params, "r"), get(params, "s"));
        let (irs, ip) = (ipq(r, s), ipq(p - r, q - s));
        let (z1, z2, xi) = (sym("Z1"), sym("Z2"), sym("Xi"));
        let (drs, dp) = (sym("Drs"), sym("Dp"));
        let rhs = frac(1, 2) * ct(z1.clone()) * dp.clone() * z1.clone()
            - frac(1, 2) * z2.clone() * drs.clone() * ct(z2.clone())
            + re(frac(1, 2) * z2.clone() * drs * ct(xi.clone()) * ip.clone() * z1.clone()
                + frac(1, 2) * z2 * irs.clone() * ct(xi.clone()) * dp * z1);
        DefiningEquation::new(re(sym("w")), rhs)
            .with_aux("Drs", inv(irs.clone() + ct(xi.clone()) * ip.clone() * xi.clone()))
            .with_aux("Dp", inv(ip + xi.clone() * irs * ct(xi)))
    }

    fn transverse_unit(&self) -> Scalar {
        Scalar::one()
    }

    fn signature(&self, params: &Params) -> (usize, usize, usize) {
        let (p, q, r, s) = (get(params, "p"), get(params, "q"), get(params, "r"), get(params, "s"));
        (r + q - s, s + p - r, (r + s) * (p + q - r - s))
    }
}

impl ModelFamily for SoHyp {
    fn tag(&self) -> Classical {
        Classical::SoHyp
    }

    fn equation(&self, params: &Params) -> DefiningEquation {
        let (p, q) = (get(params, "p"), get(params, "q"));
        let (z, xi, i) = (sym("Z1"), sym("xi"), ipq(p, q));
        let num = ct(z.clone()) * i.clone() * z.clone() - re(conj(xi.clone()) * tr(z.clone()) * i * z);
        DefiningEquation::new(re(sym("w")), over("d", num)).with_aux("d", inv(int(2) - int(2) * xi.clone() * conj(xi)))
    }

    fn printed_equation(&self, params: &Params) -> Option<DefiningEquation> {
        let (p, q) = (get(params, "p"), get(params, "q"));
        let (z, xi, i) = (sym("Z1"), sym("xi"), ipq(p, q));
        let num = ct(z.clone()) * i.clone() * z.clone() - re(conj(xi.clone()) * ct(z.clone()) * i * z);
        Some(DefiningEquation::new(re(sym("w")), over("d", num)).with_aux("d", inv(int(2) - int(2) * xi.clone() * conj(xi))))
    }

    fn transverse_unit(&self) -> Scalar {
        Scalar::one()
    }

    fn signature(&self, params: &Params) -> (usize, usize, usize) {
        (get(params, "q"), get(params, "p"), 1)
    }

    fn erratum(&self, _params: &Params) -> Option<String> {
        Some("printed Re(xib (Z1b)^T I Z1) should read Re(xib (Z1)^T I Z1)".into())
    }

    fn simplified(&self, params: &Params) -> Option<Simplified> {
        (get(params, "p") == 0 && get(params, "q") == 1).then(|| light_cone(-2, -1))
    }
}

impl ModelFamily for SoStarHyp {
    fn tag(&self) -> Classical {
        Classical::SoStarHyp
    }

    fn equation(&self, _params: &Params) -> DefiningEquation {
        so_star_hyp(int(1))
    }

    fn printed_equation(&self, _params: &Params) -> Option<DefiningEquation> {
        Some(so_star_hyp(frac(1, 2)))
    }

    fn transverse_unit(&self) -> Scalar {
        Scalar::i()
    }

    fn signature(&self, params: &Params) -> (usize, usize, usize) {
        let n = get(params, "n");
        (n, n, 1)
    }

    fn erratum(&self, _params: &Params) -> Option<String> {
        Some("printed factor 1/2 in front of Im(xib((Z1)^T Z1+(Z2)^T Z2)) should be 1".into())
    }
}

fn so_star_hyp(c: Expr) -> DefiningEquation {
    let (z1, z2, xi) = (sym("Z1"), sym("Z2"), sym("xi"));
    let num = imag_unit() * ct(z1.clone()) * z2.clone() - imag_unit() * ct(z2.clone()) * z1.clone()
        - c * im(conj(xi.clone()) * (tr(z1.clone()) * z1 + tr(z2.clone()) * z2));
    DefiningEquation::new(im(sym("w")), over("d", num)).with_aux("d", inv(int(2) + int(2) * xi.clone() * conj(xi)))
}

impl ModelFamily for SoHi {
    fn tag(&self) -> Classical {
        Classical::SoHi
    }

    fn equation(&self, params: &Params) -> DefiningEquation {
        let (p, q) = (get(params, "p"), get(params, "q"));
        let (z1, z2, xi, d, i) = (sym("Z1"), sym("Z2"), sym("Xi"), sym("D"), ipq(p, q));
        let rhs = frac(1, 2)
            * (imag_unit() * ct(z2.clone()) * d.clone() * z1.clone() - imag_unit() * ct(z1.clone()) * d.clone() * z2.clone()
                + im(tr(z2) * (d.clone() * conj(xi.clone()) * i.clone() + i.clone() * conj(xi.clone()) * d) * z1));
        DefiningEquation::new(im(sym("w")), rhs).with_aux("D", inv(i.clone() - xi.clone() * i * conj(xi)))
    }

    fn printed_equation(&self, params: &Params) -> Option<DefiningEquation> {
        let (p, q) = (get(params, "p"), get(params, "q"));
        let (z1, z2, xi, d, i) = (sym("Z1"), sym("Z2"), sym("Xi"), sym("D"), ipq(p, q));
        let rhs = frac(1, 2)
            * (ct(z2.clone()) * d.clone() * z1.clone() + ct(z1.clone()) * d.clone() * z2.clone()
                + im(tr(z2) * (d.clone() * conj(xi.clone()) * i.clone() + i.clone() * xi.clone() * d) * z1));
        Some(DefiningEquation::new(im(sym("w")), rhs).with_aux("D", inv(i.clone() - xi.clone() * i * conj(xi))))
    }

    fn transverse_unit(&self) -> Scalar {
        Scalar::i()
    }

    fn signature(&self, params: &Params) -> (usize, usize, usize) {
        let (p, q) = (get(params, "p"), get(params, "q"));
        (2 * p, 2 * q, (p + q) * (p + q).saturating_sub(1) / 2)
    }

    fn erratum(&self, _params: &Params) -> Option<String> {
        Some(
            "printed Hermitian part (Z2b)^T D Z1 + (Z1b)^T D Z2 should be i(Z2b)^T D Z1 - i(Z1b)^T D Z2, and I Xi D \
             should be I Xib D"
                .into(),
        )
    }
}

impl ModelFamily for SoStarHi {
    fn tag(&self) -> Classical {
        Classical::SoStarHi
    }

    fn equation(&self, params: &Params) -> DefiningEquation {
        let (n, p) = (get(params, "n"), get(params, "p"));
        let (z1, z2, xi, d, i) = (sym("Z1"), sym("Z2"), sym("Xi"), sym("D"), ipq(p, n - p));
        let rhs = frac(1, 2)
            * (ct(z2.clone()) * d.clone() * z2.clone() + ct(z1.clone()) * d.clone() * z1.clone()
                - re(tr(z2) * (d.clone() * conj(xi.clone()) * i.clone() + i.clone() * conj(xi.clone()) * d) * z1));
        DefiningEquation::new(re(sym("w")), rhs).with_aux("D", inv(i.clone() + conj(xi.clone()) * i * xi))
    }

    fn transverse_unit(&self) -> Scalar {
        Scalar::one()
    }

    fn signature(&self, params: &Params) -> (usize, usize, usize) {
        let (n, p) = (get(params, "n"), get(params, "p"));
        (2 * p, 2 * (n - p), n * (n - 1) / 2)
    }
}

impl ModelFamily for Sp {
    fn tag(&self) -> Classical {
        Classical::Sp
    }

    fn equation(&self, params: &Params) -> DefiningEquation {
        let (n, p) = (get(params, "n"), get(params, "p"));
        let (z1, xi, d, i) = (sym("Z1"), sym("Xi"), sym("D"), ipq(p, n - p));
        let rhs = -(ct(z1.clone()) * d.clone() * z1.clone()) - re(tr(z1.clone()) * i.clone() * conj(xi.clone()) * d * z1);
        DefiningEquation::new(re(sym("w")), rhs).with_aux("D", inv(i.clone() - xi.clone() * i * conj(xi)))
    }

    fn transverse_unit(&self) -> Scalar {
        Scalar::one()
    }

    fn signature(&self, params: &Params) -> (usize, usize, usize) {
        let (n, p) = (get(params, "n"), get(params, "p"));
        (p, n - p, n * (n + 1) / 2)
    }

    fn simplified(&self, params: &Params) -> Option<Simplified> {
        (get(params, "n") == 1 && get(params, "p") == 0).then(|| light_cone(1, -1))
    }
}

/// All families by name.
pub fn registry() -> BTreeMap<&'static str, Box<dyn ModelFamily>> {
    let all: Vec<Box<dyn ModelFamily>> =
        vec![Box::new(Sl), Box::new(Su), Box::new(SoHyp), Box::new(SoStarHyp), Box::new(SoHi), Box::new(SoStarHi), Box::new(Sp)];
    all.into_iter().map(|f| (f.name(), f)).collect()
}

pub fn family(name: &str) -> Option<Box<dyn ModelFamily>> {
    registry().into_iter().find(|(k, _)| *k == name).map(|(_, f)| f)
}
