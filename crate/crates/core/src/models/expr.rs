//! Matrix-valued expression trees over the block symbols of a model.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::scalar::{rational_to_string, Scalar};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Expr {
    /// A coordinate block or a previously defined auxiliary.
    Sym { name: String },
    /// A scalar, acting as a `1 × 1` matrix or as a multiplier.
    Const { value: Scalar },
    Ident { n: usize },
    /// `diag(1,…,1,−1,…,−1)` with `p` ones and `q` minus ones.
    Ipq { p: usize, q: usize },
    Conj { arg: Box<Expr> },
    Transpose { arg: Box<Expr> },
    Inv { arg: Box<Expr> },
    Re { arg: Box<Expr> },
    Im { arg: Box<Expr> },
    Neg { arg: Box<Expr> },
    Sum { terms: Vec<Expr> },
    Product { factors: Vec<Expr> },
}

pub fn sym(name: &str) -> Expr {
    Expr::Sym { name: name.into() }
}

pub fn konst(value: Scalar) -> Expr {
    Expr::Const { value }
}

pub fn int(n: i64) -> Expr {
    konst(Scalar::int(n))
}

pub fn frac(n: i64, d: i64) -> Expr {
    konst(Scalar::frac(n, d))
}

pub fn imag_unit() -> Expr {
    konst(Scalar::i())
}

pub fn ident(n: usize) -> Expr {
    Expr::Ident { n }
}

pub fn ipq(p: usize, q: usize) -> Expr {
    Expr::Ipq { p, q }
}

pub fn conj(e: Expr) -> Expr {
    Expr::Conj { arg: Box::new(e) }
}

pub fn tr(e: Expr) -> Expr {
    Expr::Transpose { arg: Box::new(e) }
}

/// Conjugate transpose.
pub fn ct(e: Expr) -> Expr {
    tr(conj(e))
}

pub fn inv(e: Expr) -> Expr {
    Expr::Inv { arg: Box::new(e) }
}

pub fn re(e: Expr) -> Expr {
    Expr::Re { arg: Box::new(e) }
}

pub fn im(e: Expr) -> Expr {
    Expr::Im { arg: Box::new(e) }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        let mut terms = match self {
            Expr::Sum { terms } => terms,
            other => vec![other],
        };
        match rhs {
            Expr::Sum { terms: more } => terms.extend(more),
            other => terms.push(other),
        }
        Expr::Sum { terms }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg { arg: Box::new(self) }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        let mut factors = match self {
            Expr::Product { factors } => factors,
            other => vec![other],
        };
        match rhs {
            Expr::Product { factors: more } => factors.extend(more),
            other => factors.push(other),
        }
        Expr::Product { factors }
    }
}

fn scalar_of(m: &Matrix) -> Option<Scalar> {
    (m.rows() == 1 && m.cols() == 1).then(|| m[(0, 0)].clone())
}

fn times(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols() == b.rows() {
        return Ok(a * b);
    }
    if let Some(s) = scalar_of(a) {
        return Ok(b.scale(&s));
    }
    if let Some(s) = scalar_of(b) {
        return Ok(a.scale(&s));
    }
    Err(Error::Input(format!("cannot multiply {}x{} by {}x{}", a.rows(), a.cols(), b.rows(), b.cols())))
}

impl Expr {
    pub fn eval(&self, env: &BTreeMap<String, Matrix>) -> Result<Matrix> {
        Ok(match self {
            Expr::Sym { name } => env.get(name).cloned().ok_or_else(|| Error::Input(format!("unbound symbol {name}")))?,
            Expr::Const { value } => Matrix::diagonal(std::slice::from_ref(value)),
            Expr::Ident { n } => Matrix::identity(*n),
            Expr::Ipq { p, q } => {
                let d: Vec<Scalar> = (0..*p).map(|_| Scalar::one()).chain((0..*q).map(|_| Scalar::int(-1))).collect();
                Matrix::diagonal(&d)
            }
            Expr::Conj { arg } => arg.eval(env)?.conj(),
            Expr::Transpose { arg } => arg.eval(env)?.transpose(),
            Expr::Inv { arg } => arg.eval(env)?.inverse()?,
            Expr::Re { arg } => arg.eval(env)?.map(Scalar::re_part),
            Expr::Im { arg } => arg.eval(env)?.map(Scalar::im_part),
            Expr::Neg { arg } => -arg.eval(env)?,
            Expr::Sum { terms } => {
                let mut it = terms.iter();
                let first = it.next().ok_or_else(|| Error::Input("empty sum".into()))?.eval(env)?;
                it.try_fold(first, |acc, t| {
                    let v = t.eval(env)?;
                    if v.rows() != acc.rows() || v.cols() != acc.cols() {
                        return Err(Error::Input("sum of differently shaped terms".into()));
                    }
                    Ok(&acc + &v)
                })?
            }
            Expr::Product { factors } => {
                let mut it = factors.iter();
                let first = it.next().ok_or_else(|| Error::Input("empty product".into()))?.eval(env)?;
                it.try_fold(first, |acc, f| times(&acc, &f.eval(env)?))?
            }
        })
    }

    fn is_atomic(&self) -> bool {
        matches!(
            self,
            Expr::Sym { .. } | Expr::Ident { .. } | Expr::Ipq { .. } | Expr::Conj { .. } | Expr::Re { .. } | Expr::Im { .. }
        ) || matches!(self, Expr::Const { value } if value.im.is_zero() || value.re.is_zero())
    }

    pub fn latex(&self) -> String {
        let mut out = String::new();
        self.write_latex(&mut out);
        out
    }

    fn write_wrapped(&self, out: &mut String) {
        if self.is_atomic() {
            self.write_latex(out);
        } else {
            out.push_str("\\left(");
            self.write_latex(out);
            out.push_str("\\right)");
        }
    }

    fn write_latex(&self, out: &mut String) {
        match self {
            Expr::Sym { name } => out.push_str(&symbol_latex(name)),
            Expr::Const { value } => out.push_str(&scalar_latex(value)),
            Expr::Ident { n } => {
                let _ = write!(out, "\\mathrm{{id}}_{{{n}}}");
            }
            Expr::Ipq { p, q } => {
                let _ = write!(out, "I_{{{p},{q}}}");
            }
            Expr::Conj { arg } => {
                out.push_str("\\overline{");
                arg.write_latex(out);
                out.push('}');
            }
            Expr::Transpose { arg } => {
                if matches!(**arg, Expr::Sym { .. }) && arg.latex().contains('^') {
                    let _ = write!(out, "{{{}}}", arg.latex());
                } else {
                    arg.write_wrapped(out);
                }
                out.push_str("^{T}");
            }
            Expr::Inv { arg } => {
                arg.write_wrapped(out);
                out.push_str("^{-1}");
            }
            Expr::Re { arg } | Expr::Im { arg } => {
                out.push_str(if matches!(self, Expr::Re { .. }) { "\\operatorname{Re}\\left(" } else { "\\operatorname{Im}\\left(" });
                arg.write_latex(out);
                out.push_str("\\right)");
            }
            Expr::Neg { arg } => {
                out.push('-');
                if matches!(**arg, Expr::Sum { .. }) {
                    arg.write_wrapped(out);
                } else {
                    arg.write_latex(out);
                }
            }
            Expr::Sum { terms } => {
                for (k, t) in terms.iter().enumerate() {
                    if k > 0 && !matches!(t, Expr::Neg { .. }) {
                        out.push_str(" + ");
                    } else if k > 0 {
                        out.push(' ');
                    }
                    t.write_latex(out);
                }
            }
            Expr::Product { factors } => {
                for (k, f) in factors.iter().enumerate() {
                    if k > 0 {
                        out.push(' ');
                    }
                    if matches!(f, Expr::Sum { .. } | Expr::Neg { .. }) || (matches!(f, Expr::Const { .. }) && !f.is_atomic()) {
                        f.write_wrapped(out);
                    } else {
                        f.write_latex(out);
                    }
                }
            }
        }
    }
}

fn symbol_latex(name: &str) -> String {
    match name {
        "Xi" => "\\Xi".into(),
        "xi" => "\\xi".into(),
        _ => match name.strip_prefix('Z') {
            Some(k) if !k.is_empty() => format!("Z^{{{k}}}"),
            // Drs -> D_{rs}
            _ => {
                let mut chars = name.chars();
                match chars.next() {
                    Some(c) if c.is_ascii_uppercase() && name.len() > 1 && chars.all(|c| c.is_ascii_lowercase()) => {
                        format!("{c}_{{{}}}", &name[1..])
                    }
                    _ => name.into(),
                }
            }
        },
    }
}

fn rational_latex(q: &crate::Rational) -> String {
    if q.is_integer() {
        rational_to_string(q)
    } else {
        let sign = if q < &crate::Rational::from_integer(0.into()) { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", q.numer().magnitude(), q.denom())
    }
}

fn scalar_latex(s: &Scalar) -> String {
    match (s.re.is_zero(), s.im.is_zero()) {
        (_, true) => rational_latex(&s.re),
        (true, false) => {
            if s.im == crate::Rational::from_integer(1.into()) {
                "i".into()
            } else if s.im == crate::Rational::from_integer((-1).into()) {
                "-i".into()
            } else {
                format!("{}i", rational_latex(&s.im))
            }
        }
        (false, false) => format!("{} + {}i", rational_latex(&s.re), rational_latex(&s.im)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Auxiliary {
    pub name: String,
    pub expr: Expr,
}

/// `lhs = rhs`, with auxiliaries evaluated in order before either side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefiningEquation {
    pub lhs: Expr,
    pub rhs: Expr,
    pub auxiliaries: Vec<Auxiliary>,
}

impl DefiningEquation {
    pub fn new(lhs: Expr, rhs: Expr) -> Self {
        DefiningEquation { lhs, rhs, auxiliaries: Vec::new() }
    }

    pub fn with_aux(mut self, name: &str, expr: Expr) -> Self {
        self.auxiliaries.push(Auxiliary { name: name.into(), expr });
        self
    }

    /// `lhs − rhs` at the given block values.
    pub fn residual(&self, blocks: &BTreeMap<String, Matrix>) -> Result<Scalar> {
        let mut env = blocks.clone();
        for a in &self.auxiliaries {
            let v = a.expr.eval(&env)?;
            env.insert(a.name.clone(), v);
        }
        let d = &self.lhs.eval(&env)? - &self.rhs.eval(&env)?;
        scalar_of(&d).ok_or_else(|| Error::Input("equation does not evaluate to a scalar".into()))
    }

    pub fn latex(&self) -> String {
        let mut s = format!("{} = {}", self.lhs.latex(), self.rhs.latex());
        for a in &self.auxiliaries {
            let _ = write!(s, ", \\quad {} = {}", symbol_latex(&a.name), a.expr.latex());
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expression trees serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("bad equation JSON: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, Matrix)]) -> BTreeMap<String, Matrix> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn scalar_factors_scale() {
        let e = frac(1, 2) * sym("Z");
        let z = Matrix::from_int_rows(&[&[2], &[4]]);
        assert_eq!(e.eval(&env(&[("Z", z)])).unwrap(), Matrix::from_int_rows(&[&[1], &[2]]));
    }

    #[test]
    fn hermitian_form_is_real() {
        let z = Matrix::from_rows(vec![vec![Scalar::gauss(1, 2)], vec![Scalar::gauss(0, -3)]]);
        let e = ct(sym("Z")) * ipq(1, 1) * sym("Z");
        let v = e.eval(&env(&[("Z", z)])).unwrap();
        assert_eq!(v[(0, 0)], Scalar::int(5 - 9));
    }

    #[test]
    fn singular_inverse_is_reported() {
        let e = inv(int(2) - int(2) * sym("x"));
        let r = e.eval(&env(&[("x", Matrix::identity(1))]));
        assert!(matches!(r, Err(Error::Singular(_))));
    }

    #[test]
    fn json_round_trip() {
        let eq = DefiningEquation::new(im(sym("w")), frac(1, 2) * re(ct(sym("Z1")) * sym("D") * sym("Z1")))
            .with_aux("D", inv(ident(2) - sym("Xi") * conj(sym("Xi"))));
        assert_eq!(DefiningEquation::from_json(&eq.to_json()).unwrap(), eq);
    }

    #[test]
    fn latex_rendering() {
        let eq = DefiningEquation::new(re(sym("w")), -(ct(sym("Z1")) * sym("Z1")) + imag_unit() * sym("xi"));
        assert_eq!(
            eq.latex(),
            "\\operatorname{Re}\\left(w\\right) = -\\overline{Z^{1}}^{T} Z^{1} + i \\xi"
        );
        let fused = sym("Xi") * ipq(1, 0) * tr(sym("Z2")) * sym("Drs");
        assert_eq!(fused.latex(), "\\Xi I_{1,0} {Z^{2}}^{T} D_{rs}");
    }
}
