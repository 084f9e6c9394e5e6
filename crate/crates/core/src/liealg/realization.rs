//! Block-matrix realizations of the classical hypersurface models and their real forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{independent_subset, nullspace, realify, Matrix, SpanCoords};
use crate::rootsys::Bidegree;
use crate::scalar::{rat, Rational};
use crate::{Error, Result, Scalar};

use super::levi::LeviData;
use super::{BasisElement, GradedLieAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Classical {
    #[serde(rename = "SL")]
    Sl,
    #[serde(rename = "SU")]
    Su,
    #[serde(rename = "SO_hyp")]
    SoHyp,
    #[serde(rename = "SOstar_hyp")]
    SoStarHyp,
    #[serde(rename = "SO_hi")]
    SoHi,
    #[serde(rename = "SOstar_hi")]
    SoStarHi,
    #[serde(rename = "SP")]
    Sp,
}

impl Classical {
    pub const ALL: [Classical; 7] = [
        Classical::Sl,
        Classical::Su,
        Classical::SoHyp,
        Classical::SoStarHyp,
        Classical::SoHi,
        Classical::SoStarHi,
        Classical::Sp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Classical::Sl => "SL",
            Classical::Su => "SU",
            Classical::SoHyp => "SO_hyp",
            Classical::SoStarHyp => "SOstar_hyp",
            Classical::SoHi => "SO_hi",
            Classical::SoStarHi => "SOstar_hi",
            Classical::Sp => "SP",
        }
    }

    /// Parameter names with inclusive bounds.
    pub fn param_schema(self) -> &'static [(&'static str, i64, i64)] {
        match self {
            Classical::Sl => &[("n", 1, 3)],
            Classical::Su => &[("p", 0, 4), ("q", 0, 4), ("r", 0, 4), ("s", 0, 4)],
            Classical::SoHyp => &[("p", 0, 4), ("q", 0, 4)],
            Classical::SoStarHyp => &[("n", 1, 3)],
            Classical::SoHi => &[("p", 0, 2), ("q", 0, 2)],
            Classical::SoStarHi => &[("n", 2, 3), ("p", 0, 3)],
            Classical::Sp => &[("n", 1, 3), ("p", 0, 3)],
        }
    }

    /// Checks names, bounds and the cross-parameter constraints.
    pub fn validate(self, params: &BTreeMap<String, i64>) -> Result<()> {
        let schema = self.param_schema();
        for k in params.keys() {
            if !schema.iter().any(|(n, _, _)| n == k) {
                return Err(Error::Params(format!("{}: unknown parameter {k}", self.name())));
            }
        }
        for (name, lo, hi) in schema {
            let v = params
                .get(*name)
                .ok_or_else(|| Error::Params(format!("{}: missing parameter {name}", self.name())))?;
            if v < lo || v > hi {
                return Err(Error::Params(format!(
                    "{}: {name}={v} outside {lo}..={hi}",
                    self.name()
                )));
            }
        }
        let g = |k: &str| params[k];
        let ok = match self {
            Classical::Su => {
                g("r") <= g("p") && g("s") <= g("q") && g("r") + g("s") >= 1 && g("p") + g("q") >= g("r") + g("s") + 1
            }
            Classical::SoHyp => g("p") + g("q") >= 1,
            Classical::SoHi => g("p") + g("q") >= 2,
            Classical::SoStarHi | Classical::Sp => g("p") <= g("n"),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Params(format!("{}: inconsistent parameters {params:?}", self.name())))
        }
    }
}

impl fmt::Display for Classical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Classical {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Classical::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Params(format!("unknown family {s:?}")))
    }
}

/// Antilinear involution of the complex matrix algebra cutting out the real form.
#[derive(Clone, Debug, PartialEq)]
pub enum Conjugation {
    /// `M ↦ S M̄ S⁻¹`
    Similarity { s: Matrix, s_inv: Matrix },
    /// `M ↦ −H⁻¹ M* H`
    NegAdjoint { h: Matrix, h_inv: Matrix },
}

impl Conjugation {
    pub fn apply(&self, m: &Matrix) -> Matrix {
        match self {
            Conjugation::Similarity { s, s_inv } => &(s * &m.conj()) * s_inv,
            Conjugation::NegAdjoint { h, h_inv } => -(&(h_inv * &m.adjoint()) * h),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedBlock {
    pub name: String,
    pub row_block: usize,
    pub col_block: usize,
    pub bidegree: Bidegree,
}

#[derive(Clone, Debug)]
pub struct MatrixRealization {
    pub family: Classical,
    pub params: BTreeMap<String, i64>,
    pub sizes: Vec<usize>,
    pub e1: Vec<Rational>,
    pub e2: Vec<Rational>,
    /// `Mᵀ B + B M = 0`; `None` means traceless matrices.
    pub form: Option<Matrix>,
    pub conjugation: Conjugation,
    /// Coordinate blocks of the model, in the lower-left corner of the matrix.
    pub blocks: Vec<NamedBlock>,
    /// Value of the `w` entry on the real generator of `g_{-2}`.
    pub c_dir: Scalar,
}

fn ipq(p: usize, q: usize) -> Matrix {
    let d: Vec<Scalar> = (0..p).map(|_| Scalar::one()).chain((0..q).map(|_| Scalar::int(-1))).collect();
    Matrix::diagonal(&d)
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut o = vec![0];
    for s in sizes {
        o.push(o.last().unwrap() + s);
    }
    o
}

fn place(sizes: &[usize], blocks: &[(usize, usize, Matrix)]) -> Matrix {
    let o = offsets(sizes);
    let n = *o.last().unwrap();
    let mut m = Matrix::zeros(n, n);
    for (i, j, b) in blocks {
        m.set_submatrix(o[*i], o[*j], b);
    }
    m
}

fn one() -> Matrix {
    Matrix::identity(1)
}

fn j1() -> Matrix {
    Matrix::from_int_rows(&[&[0, 1], &[-1, 0]])
}

fn spread(sizes: &[usize], vals: &[Rational]) -> Vec<Rational> {
    sizes.iter().zip(vals).flat_map(|(&s, v)| std::iter::repeat(v.clone()).take(s)).collect()
}

fn r(n: i64) -> Rational {
    rat(n, 1)
}

fn half(n: i64) -> Rational {
    rat(n, 2)
}

fn similarity(s: Matrix) -> Result<Conjugation> {
    let s_inv = s.inverse()?;
    Ok(Conjugation::Similarity { s, s_inv })
}

fn block(name: &str, i: usize, j: usize, bd: Bidegree) -> NamedBlock {
    NamedBlock { name: name.into(), row_block: i, col_block: j, bidegree: bd }
}

impl MatrixRealization {
    pub fn new(family: Classical, params: BTreeMap<String, i64>) -> Result<Self> {
        family.validate(&params)?;
        let u = |k: &str| params[k] as usize;
        let (sizes, e1v, e2v, form, conjugation, blocks, c_dir);
        match family {
            Classical::Sl => {
                let n = u("n");
                sizes = vec![1, n, n, 1];
                e1v = vec![r(1), r(0), r(0), r(-1)];
                e2v = vec![half(1), half(1), half(-1), half(-1)];
                form = None;
                let p = place(&sizes, &[(0, 0, one()), (1, 2, Matrix::identity(n)), (2, 1, Matrix::identity(n)), (3, 3, one())]);
                conjugation = similarity(p)?;
                blocks = vec![
                    block("Z1", 2, 0, (-1, -1)),
                    block("Xi", 2, 1, (0, -1)),
                    block("Z2", 3, 1, (-1, -1)),
                    block("w", 3, 0, (-2, -1)),
                ];
                c_dir = Scalar::one();
            }
            Classical::Su => {
                let (p, q, rr, s) = (u("p"), u("q"), u("r"), u("s"));
                let (a, b) = (rr + s, p + q - rr - s);
                sizes = vec![1, a, b, 1];
                e1v = vec![r(1), r(0), r(0), r(-1)];
                e2v = vec![half(1), half(1), half(-1), half(-1)];
                form = None;
                let h = place(
                    &sizes,
                    &[(0, 3, one()), (3, 0, one()), (1, 1, -ipq(rr, s)), (2, 2, -ipq(p - rr, q - s))],
                );
                let h_inv = h.inverse()?;
                conjugation = Conjugation::NegAdjoint { h, h_inv };
                blocks = vec![
                    block("Z1", 2, 0, (-1, -1)),
                    block("Xi", 2, 1, (0, -1)),
                    block("Z2", 3, 1, (-1, -1)),
                    block("w", 3, 0, (-2, -1)),
                ];
                c_dir = Scalar::i();
            }
            Classical::SoHyp => {
                let (p, q) = (u("p"), u("q"));
                let m = p + q;
                sizes = vec![1, 1, m, 1, 1];
                e1v = vec![r(1), r(1), r(0), r(-1), r(-1)];
                e2v = vec![r(1), r(0), r(0), r(0), r(-1)];
                form = Some(place(
                    &sizes,
                    &[(0, 4, one()), (4, 0, one()), (1, 3, one()), (3, 1, one()), (2, 2, -ipq(p, q))],
                ));
                let pm = place(
                    &sizes,
                    &[(0, 1, one()), (1, 0, one()), (2, 2, Matrix::identity(m)), (3, 4, one()), (4, 3, one())],
                );
                conjugation = similarity(pm)?;
                blocks = vec![
                    block("xi", 1, 0, (0, -1)),
                    block("Z1", 2, 0, (-1, -1)),
                    block("w", 3, 0, (-2, -1)),
                ];
                c_dir = Scalar::i();
            }
            Classical::SoStarHyp => {
                let n = u("n");
                sizes = vec![1, 1, n, n, 1, 1];
                e1v = vec![r(1), r(1), r(0), r(0), r(-1), r(-1)];
                e2v = vec![r(1), r(0), r(0), r(0), r(0), r(-1)];
                form = Some(place(
                    &sizes,
                    &[
                        (0, 5, one()),
                        (5, 0, one()),
                        (1, 4, one()),
                        (4, 1, one()),
                        (2, 2, Matrix::identity(n)),
                        (3, 3, Matrix::identity(n)),
                    ],
                ));
                let mid = place(&[n, n], &[(0, 1, Matrix::identity(n)), (1, 0, -Matrix::identity(n))]);
                conjugation = similarity(Matrix::block_diagonal(&[j1(), mid, -j1()]))?;
                blocks = vec![
                    block("xi", 1, 0, (0, -1)),
                    block("Z1", 2, 0, (-1, -1)),
                    block("Z2", 3, 0, (-1, -1)),
                    block("w", 4, 0, (-2, -1)),
                ];
                c_dir = Scalar::one();
            }
            Classical::SoHi | Classical::SoStarHi => {
                let star = family == Classical::SoStarHi;
                let (m, ip) = if star {
                    let (n, p) = (u("n"), u("p"));
                    (n, ipq(p, n - p))
                } else {
                    let (p, q) = (u("p"), u("q"));
                    (p + q, ipq(p, q))
                };
                sizes = vec![1, 1, m, m, 1, 1];
                e1v = vec![r(1), r(1), r(0), r(0), r(-1), r(-1)];
                e2v = vec![half(1), half(1), half(1), half(-1), half(-1), half(-1)];
                form = Some(place(
                    &sizes,
                    &[
                        (0, 5, one()),
                        (5, 0, one()),
                        (1, 4, one()),
                        (4, 1, one()),
                        (2, 3, Matrix::identity(m)),
                        (3, 2, Matrix::identity(m)),
                    ],
                ));
                let s = if star {
                    let mid = place(&[m, m], &[(0, 1, ip.clone()), (1, 0, -ip.clone())]);
                    Matrix::block_diagonal(&[j1(), mid, j1()])
                } else {
                    let mid = place(&[m, m], &[(0, 1, ip.clone()), (1, 0, ip.clone())]);
                    Matrix::block_diagonal(&[one(), one(), mid, one(), one()])
                };
                conjugation = similarity(s)?;
                blocks = vec![
                    block("Z1", 3, 0, (-1, -1)),
                    block("Z2", 3, 1, (-1, -1)),
                    block("Xi", 3, 2, (0, -1)),
                    block("w", 4, 0, (-2, -1)),
                ];
                c_dir = if star { Scalar::i() } else { Scalar::one() };
            }
            Classical::Sp => {
                let (n, p) = (u("n"), u("p"));
                sizes = vec![1, n, n, 1];
                e1v = vec![r(1), r(0), r(0), r(-1)];
                e2v = vec![half(1), half(1), half(-1), half(-1)];
                form = Some(place(
                    &sizes,
                    &[(0, 3, one()), (3, 0, -one()), (1, 2, Matrix::identity(n)), (2, 1, -Matrix::identity(n))],
                ));
                let ip = ipq(p, n - p);
                let mid = place(&[n, n], &[(0, 1, ip.clone()), (1, 0, ip)]);
                conjugation = similarity(Matrix::block_diagonal(&[one(), mid, -one()]))?;
                blocks = vec![
                    block("Z1", 2, 0, (-1, -1)),
                    block("Xi", 2, 1, (0, -1)),
                    block("w", 3, 0, (-2, -1)),
                ];
                c_dir = Scalar::i();
            }
        }
        let e1 = spread(&sizes, &e1v);
        let mut e2 = spread(&sizes, &e2v);
        if form.is_none() {
            // traceless representative inside sl(N)
            let n = e2.len() as i64;
            let tr: Rational = e2.iter().cloned().sum();
            let shift = tr / r(n);
            for x in &mut e2 {
                *x -= &shift;
            }
        }
        Ok(MatrixRealization { family, params, sizes, e1, e2, form, conjugation, blocks, c_dir })
    }

    pub fn size(&self) -> usize {
        self.e1.len()
    }

    pub fn offsets(&self) -> Vec<usize> {
        offsets(&self.sizes)
    }

    /// Bidegree of the matrix unit `E_{ij}`, read off from the grading elements.
    pub fn entry_bidegree(&self, i: usize, j: usize) -> Result<Bidegree> {
        let a = &self.e1[i] - &self.e1[j];
        let b = &self.e2[i] - &self.e2[j];
        let as_int = |q: &Rational| {
            q.is_integer()
                .then(|| q.to_integer().to_i64())
                .flatten()
                .ok_or_else(|| Error::Consistency(format!("non-integral eigenvalue at ({i},{j})")))
        };
        Ok((as_int(&a)?, as_int(&b)?))
    }

    /// Projection onto the entries whose bidegree satisfies `keep`.
    pub fn project(&self, m: &Matrix, keep: impl Fn(Bidegree) -> bool) -> Matrix {
        let n = self.size();
        Matrix::from_fn(n, n, |i, j| {
            let bd = self.entry_bidegree(i, j).expect("validated at construction");
            if keep(bd) {
                m[(i, j)].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn in_algebra(&self, m: &Matrix) -> bool {
        match &self.form {
            Some(b) => (&(&m.transpose() * b) + &(b * m)).is_zero(),
            None => m.trace().is_zero(),
        }
    }

    pub fn bidegrees(&self) -> BTreeSet<Bidegree> {
        let n = self.size();
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                out.insert(self.entry_bidegree(i, j).expect("integral"));
            }
        }
        out
    }

    /// Basis of `g_{a,b}` inside the complex matrix algebra.
    pub fn complex_component_basis(&self, bd: Bidegree) -> Vec<Matrix> {
        let n = self.size();
        let pos: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.entry_bidegree(i, j).ok() == Some(bd))
            .collect();
        component_basis(n, self.form.as_ref(), &pos, bd == (0, 0))
    }

    pub fn named_block(&self, name: &str) -> Option<&NamedBlock> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn get_block(&self, m: &Matrix, name: &str) -> Result<Matrix> {
        let b = self
            .named_block(name)
            .ok_or_else(|| Error::Input(format!("no block named {name}")))?;
        let o = self.offsets();
        Ok(m.submatrix(o[b.row_block], o[b.col_block], self.sizes[b.row_block], self.sizes[b.col_block]))
    }

    /// Global `(row, col)` of the `w` entry.
    pub fn w_entry(&self) -> (usize, usize) {
        let b = self.named_block("w").expect("every family has w");
        let o = self.offsets();
        (o[b.row_block], o[b.col_block])
    }

    pub fn e1_matrix(&self) -> Matrix {
        Matrix::diagonal(&self.e1.iter().cloned().map(Scalar::real).collect::<Vec<_>>())
    }

    pub fn e2_matrix(&self) -> Matrix {
        Matrix::diagonal(&self.e2.iter().cloned().map(Scalar::real).collect::<Vec<_>>())
    }
}

/// Basis of the matrices supported on `pos` inside the algebra cut out by `form`
/// (traceless when `form` is `None`; the trace only matters when `diagonal` is set).
fn component_basis(n: usize, form: Option<&Matrix>, pos: &[(usize, usize)], diagonal: bool) -> Vec<Matrix> {
    if pos.is_empty() {
        return Vec::new();
    }
    let unit = |k: usize| {
        let mut m = Matrix::zeros(n, n);
        m[pos[k]] = Scalar::one();
        m
    };
    let constraint_rows: Vec<Vec<Scalar>> = match form {
        Some(bm) => {
            let images: Vec<Vec<Scalar>> = (0..pos.len())
                .map(|k| {
                    let e = unit(k);
                    (&(&e.transpose() * bm) + &(bm * &e)).to_vec()
                })
                .collect();
            (0..n * n).map(|t| images.iter().map(|v| v[t].clone()).collect()).collect()
        }
        None if diagonal => {
            vec![pos.iter().map(|&(i, j)| if i == j { Scalar::one() } else { Scalar::zero() }).collect()]
        }
        None => Vec::new(),
    };
    let kernel = if constraint_rows.is_empty() {
        (0..pos.len())
            .map(|k| (0..pos.len()).map(|t| if t == k { Scalar::one() } else { Scalar::zero() }).collect())
            .collect()
    } else {
        nullspace(&Matrix::from_rows(constraint_rows))
    };
    kernel
        .into_iter()
        .map(|v| {
            let mut m = Matrix::zeros(n, n);
            for (k, c) in v.into_iter().enumerate() {
                m[pos[k]] = c;
            }
            m
        })
        .collect()
}

/// Split real matrix algebra (`sl(n)` or the algebra of `form`) graded by a diagonal
/// grading element with the given integer eigenvalues.
pub fn graded_matrix_algebra(form: Option<&Matrix>, grading: &[i64]) -> Result<(GradedLieAlgebra, Vec<Matrix>)> {
    let n = grading.len();
    if let Some(f) = form {
        if f.rows() != n || f.cols() != n {
            return Err(Error::Input("form size does not match the grading".into()));
        }
    }
    let mut degrees: Vec<i64> = (0..n).flat_map(|i| (0..n).map(move |j| grading[i] - grading[j])).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut basis = Vec::new();
    let mut mats = Vec::new();
    for d in degrees {
        let pos: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| grading[i] - grading[j] == d)
            .collect();
        for (k, m) in component_basis(n, form, &pos, d == 0).into_iter().enumerate() {
            basis.push(BasisElement::new(format!("g{d}#{k}"), d));
            mats.push(m);
        }
    }
    let alg = GradedLieAlgebra::from_matrices(basis, &mats)?;
    Ok((alg, mats))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradingElements {
    pub e1: Matrix,
    pub e2: Matrix,
    /// `2 E2 − E1`
    pub etilde: Matrix,
}

/// Complex algebra `g ⊗ C`, its real form, and the matrices behind both bases.
#[derive(Clone, Debug)]
pub struct RealizedAlgebra {
    pub realization: MatrixRealization,
    pub complex: GradedLieAlgebra,
    pub complex_mats: Vec<Matrix>,
    pub real: GradedLieAlgebra,
    pub real_mats: Vec<Matrix>,
    /// For each real basis element the orbit `(a, min(b, a − b))` of its bidegree under σ.
    pub real_orbits: Vec<Bidegree>,
    real_coords: SpanCoords,
}

fn orbit_name(a: i64, b: i64) -> &'static str {
    match (a, b) {
        (0, -1) => "k",
        (0, 0) => "h",
        (-1, _) => "x",
        (-2, _) => "c",
        _ => "p",
    }
}

/// Builds `g ⊗ C` from the block structure, then the real form as the fixed points of σ.
pub fn classical_realization(family: Classical, params: &BTreeMap<String, i64>) -> Result<RealizedAlgebra> {
    let real = MatrixRealization::new(family, params.clone())?;
    let mut complex_basis = Vec::new();
    let mut complex_mats = Vec::new();
    for bd in real.bidegrees() {
        for (k, m) in real.complex_component_basis(bd).into_iter().enumerate() {
            complex_basis.push(BasisElement::bigraded(format!("g[{},{}]#{k}", bd.0, bd.1), bd));
            complex_mats.push(m);
        }
    }
    let complex_coords = SpanCoords::new(complex_mats.iter().map(Matrix::to_vec).collect())?;
    let complex = GradedLieAlgebra::from_matrices(complex_basis.clone(), &complex_mats)?;

    // conjugation in the complex basis, and its bidegree behaviour
    let n = complex_mats.len();
    let mut cmat = Matrix::zeros(n, n);
    for (j, m) in complex_mats.iter().enumerate() {
        let img = real.conjugation.apply(m);
        let c = complex_coords
            .coords(&img.to_vec())
            .ok_or_else(|| Error::Consistency("σ does not preserve the algebra".into()))?;
        let (a, b) = complex_basis[j].bidegree.expect("bigraded");
        for (k, x) in c.iter().enumerate() {
            if !x.is_zero() && complex_basis[k].bidegree != Some((a, a - b)) {
                return Err(Error::Consistency(format!(
                    "σ maps g[{a},{b}] outside g[{a},{}]",
                    a - b
                )));
            }
            cmat[(k, j)] = x.clone();
        }
    }
    let complex = complex.with_conjugation(cmat)?;

    // real basis orbit by orbit
    let mut real_mats = Vec::new();
    let mut real_basis = Vec::new();
    let mut real_orbits = Vec::new();
    let mut orbits: Vec<Bidegree> = real.bidegrees().into_iter().filter(|&(a, b)| 2 * b <= a).collect();
    orbits.sort();
    for (a, b) in orbits {
        let comp = real.complex_component_basis((a, b));
        if comp.is_empty() {
            continue;
        }
        let mut cands = Vec::new();
        for bm in &comp {
            let s = real.conjugation.apply(bm);
            cands.push(bm + &s);
            cands.push((bm - &s).scale(&Scalar::i()));
        }
        let flat: Vec<Vec<Scalar>> = cands.iter().map(|m| realify(&m.to_vec())).collect();
        let picked = independent_subset(&flat);
        let expected = if 2 * b == a { comp.len() } else { 2 * comp.len() };
        if picked.len() != expected {
            return Err(Error::Consistency(format!(
                "real form has dimension {} on orbit ({a},{b}), expected {expected}",
                picked.len()
            )));
        }
        let tag = orbit_name(a, b);
        for (k, &i) in picked.iter().enumerate() {
            real_basis.push(BasisElement::new(format!("{tag}{a}.{b}#{k}"), a));
            real_mats.push(cands[i].clone());
            real_orbits.push((a, b));
        }
    }
    if real_mats.len() != n {
        return Err(Error::Consistency("real form dimension differs from complex dimension".into()));
    }
    let real_alg = GradedLieAlgebra::from_matrices(real_basis, &real_mats)?;
    if !real_alg.is_real() {
        return Err(Error::Consistency("real form has non-real structure constants".into()));
    }
    let real_coords = SpanCoords::new(real_mats.iter().map(Matrix::to_vec).collect())?;
    Ok(RealizedAlgebra {
        realization: real,
        complex,
        complex_mats,
        real: real_alg,
        real_mats,
        real_orbits,
        real_coords,
    })
}

impl RealizedAlgebra {
    pub fn dim(&self) -> usize {
        self.real_mats.len()
    }

    pub fn indices_of_orbit(&self, orbit: Bidegree) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.real_orbits[i] == orbit).collect()
    }

    pub fn gminus_indices(&self) -> Vec<usize> {
        self.real.indices_where(|b| b.degree < 0)
    }

    pub fn kernel_indices(&self) -> Vec<usize> {
        self.indices_of_orbit((0, -1))
    }

    pub fn g0i_indices(&self) -> Vec<usize> {
        self.indices_of_orbit((0, 0))
    }

    pub fn depth(&self) -> i64 {
        -self.real.degrees()[0]
    }

    pub fn to_matrix(&self, coords: &[Scalar]) -> Matrix {
        let size = self.realization.size();
        Matrix::from_vec(size, size, self.real_coords.combine(coords))
    }

    /// Real coordinates of a matrix of the real form.
    pub fn real_coords(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        let c = self.real_coords.coords(&m.to_vec())?;
        c.iter().all(Scalar::is_real).then_some(c)
    }

    /// Coordinates in `g ⊗ C`.
    pub fn complex_coords(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        self.real_coords.coords(&m.to_vec())
    }

    pub fn sigma(&self, m: &Matrix) -> Matrix {
        self.realization.conjugation.apply(m)
    }

    /// `J = i (E1 − 2 E2)`; real because σ(E2) = E1 − E2.
    pub fn j_element(&self) -> Matrix {
        let r = &self.realization;
        (&r.e1_matrix() - &r.e2_matrix().scale(&Scalar::int(2))).scale(&Scalar::i())
    }

    /// `I X = i U + σ(i U)` for `X = U + σU`, `U` the `(−1,−1)` part.
    pub fn complex_structure_direct(&self, x: &Matrix) -> Matrix {
        let u = self.realization.project(x, |bd| bd == (-1, -1));
        let iu = u.scale(&Scalar::i());
        &iu + &self.sigma(&iu)
    }

    /// `I Y = i B + σ(i B)` for `Y ∈ k`, `B` the `(0,−1)` part.
    pub fn kernel_structure(&self, y: &Matrix) -> Matrix {
        let b = self.realization.project(y, |bd| bd == (0, -1));
        let ib = b.scale(&Scalar::i());
        &ib + &self.sigma(&ib)
    }

    /// Matrix of a real-linear map on the span of `indices`, given on matrices.
    pub fn restricted_map(&self, indices: &[usize], f: impl Fn(&Matrix) -> Matrix) -> Result<Matrix> {
        let m = indices.len();
        let mut out = Matrix::zeros(m, m);
        for (col, &i) in indices.iter().enumerate() {
            let img = f(&self.real_mats[i]);
            let c = self
                .real_coords(&img)
                .ok_or_else(|| Error::Consistency("image leaves the real form".into()))?;
            for (row, &k) in indices.iter().enumerate() {
                out[(row, col)] = c[k].clone();
            }
            for (k, x) in c.iter().enumerate() {
                if !x.is_zero() && !indices.contains(&k) {
                    return Err(Error::Consistency("image leaves the chosen subspace".into()));
                }
            }
        }
        Ok(out)
    }

    /// Second-order data `(g_−, I, k)` with `k` acting on `g_{−1}` by the bracket.
    pub fn levi_data(&self) -> Result<LeviData> {
        let gm = self.gminus_indices();
        let gminus = self.real.subalgebra(&gm)?;
        let g1: Vec<usize> = self.real.indices_of_degree(-1);
        let j = self.j_element();
        let i_minus1 = self.restricted_map(&g1, |x| j.commutator(x))?;
        let kidx = self.kernel_indices();
        let mut k_action = Vec::new();
        for &a in &kidx {
            let am = self.real_mats[a].clone();
            k_action.push(self.restricted_map(&g1, |x| am.commutator(x))?);
        }
        let i_k = self.restricted_map(&kidx, |y| self.kernel_structure(y))?;
        Ok(LeviData { gminus, i_minus1, k_action, i_k: Some(i_k) })
    }
}

/// Grading elements of a realization, with the eigenvalue and complex-structure checks.
pub fn grading_elements(alg: &RealizedAlgebra) -> Result<GradingElements> {
    let r = &alg.realization;
    let e1 = r.e1_matrix();
    let e2 = r.e2_matrix();
    for (name, e) in [("E1", &e1), ("E2", &e2)] {
        if !r.in_algebra(e) {
            return Err(Error::Consistency(format!("{name} is not in the algebra")));
        }
    }
    for (m, el) in alg.complex_mats.iter().zip(alg.complex.basis()) {
        let (a, b) = el.bidegree.expect("bigraded");
        if e1.commutator(m) != m.scale(&Scalar::int(a)) || e2.commutator(m) != m.scale(&Scalar::int(b)) {
            return Err(Error::Consistency(format!("block {} has the wrong eigenvalues", el.name)));
        }
    }
    let j = alg.j_element();
    for i in alg.real.indices_of_degree(-1) {
        let x = &alg.real_mats[i];
        if j.commutator(x) != alg.complex_structure_direct(x) {
            return Err(Error::Consistency(format!(
                "i ad(E1 - 2E2) differs from the block complex structure on {}",
                alg.real.basis()[i].name
            )));
        }
    }
    let etilde = &e2.scale(&Scalar::int(2)) - &e1;
    Ok(GradingElements { e1, e2, etilde })
}

pub fn params(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Sign of a rational as -1, 0 or 1.
pub(crate) fn sign_of(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
