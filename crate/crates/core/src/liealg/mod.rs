//! Finite-dimensional graded Lie algebras given by exact structure constants.

pub mod levi;
pub mod realization;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{Matrix, SpanCoords};
use crate::rootsys::Bidegree;
use crate::{Error, Result, Scalar};

pub use levi::{
    check_levi_tanaka, check_regularity, iota_map, irregular_fixture, levi_kernel,
    levi_signature, IotaMap, LeviData, LeviTanakaReport, RegularityReport, SecondOrderLT,
};
pub use realization::{
    classical_realization, graded_matrix_algebra, grading_elements, Classical, GradingElements, MatrixRealization,
    RealizedAlgebra,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<Bidegree>,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        BasisElement { name: name.into(), degree, bidegree: None }
    }

    pub fn bigraded(name: impl Into<String>, (a, b): Bidegree) -> Self {
        BasisElement { name: name.into(), degree: a, bidegree: Some((a, b)) }
    }
}

type Sparse = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq)]
pub struct GradedLieAlgebra {
    basis: Vec<BasisElement>,
    // table[i][j] = [e_i, e_j] as a sparse coordinate list
    table: Vec<Vec<Sparse>>,
    // column j holds the coordinates of σ(e_j); σ(Σ x_j e_j) = C · conj(x)
    conjugation: Option<Matrix>,
}

fn sparse(v: &[Scalar]) -> Sparse {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect()
}

impl GradedLieAlgebra {
    /// Builds from a dense table `table[i][j][k]` and runs all structural checks.
    pub fn from_dense(basis: Vec<BasisElement>, table: Vec<Vec<Vec<Scalar>>>) -> Result<Self> {
        let n = basis.len();
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::Input("structure constant table has wrong shape".into()));
        }
        let table = table.iter().map(|row| row.iter().map(|v| sparse(v)).collect()).collect();
        let alg = GradedLieAlgebra { basis, table, conjugation: None };
        alg.check()?;
        Ok(alg)
    }

    /// Structure constants from commutators of linearly independent matrices.
    pub fn from_matrices(basis: Vec<BasisElement>, mats: &[Matrix]) -> Result<Self> {
        if basis.len() != mats.len() {
            return Err(Error::Input("one matrix per basis element required".into()));
        }
        let coords = SpanCoords::new(mats.iter().map(Matrix::to_vec).collect())?;
        let n = mats.len();
        let mut table = vec![vec![Sparse::new(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = mats[i].commutator(&mats[j]);
                let v = coords.coords(&c.to_vec()).ok_or_else(|| {
                    Error::Consistency(format!(
                        "[{}, {}] leaves the span",
                        basis[i].name, basis[j].name
                    ))
                })?;
                let neg: Vec<Scalar> = v.iter().map(|x| -x).collect();
                table[i][j] = sparse(&v);
                table[j][i] = sparse(&neg);
            }
        }
        let alg = GradedLieAlgebra { basis, table, conjugation: None };
        alg.check()?;
        Ok(alg)
    }

    pub fn with_conjugation(mut self, c: Matrix) -> Result<Self> {
        if c.rows() != self.dim() || c.cols() != self.dim() {
            return Err(Error::Input("conjugation matrix has wrong size".into()));
        }
        self.conjugation = Some(c);
        self.check_conjugation()?;
        Ok(self)
    }

    pub fn conjugation(&self) -> Option<&Matrix> {
        self.conjugation.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn indices_of_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == d).collect()
    }

    pub fn indices_where(&self, pred: impl Fn(&BasisElement) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&i| pred(&self.basis[i])).collect()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (k, c) in &self.table[i][j] {
            out[*k] = c.clone();
        }
        out
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                if self.table[i][j].is_empty() {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &f * c;
                }
            }
        }
        out
    }

    /// Matrix of `ad(e_i)`: column `j` is `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for (k, c) in &self.table[i][j] {
                m[(*k, j)] = c.clone();
            }
        }
        m
    }

    pub fn ad_vec(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            m = &m + &self.ad(i).scale(xi);
        }
        m
    }

    pub fn unit(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }

    pub fn is_real(&self) -> bool {
        self.table.iter().flatten().flatten().all(|(_, c)| c.is_real())
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().flatten().all(Vec::is_empty)
    }

    pub fn check(&self) -> Result<()> {
        self.check_antisymmetry()?;
        self.check_grading()?;
        self.check_jacobi()
    }

    pub fn check_antisymmetry(&self) -> Result<()> {
        for i in 0..self.dim() {
            if !self.table[i][i].is_empty() {
                return Err(Error::Consistency(format!("[{0}, {0}] != 0", self.basis[i].name)));
            }
            for j in i + 1..self.dim() {
                let a = self.bracket_basis(i, j);
                let b = self.bracket_basis(j, i);
                if a.iter().zip(&b).any(|(x, y)| !(x + y).is_zero()) {
                    return Err(Error::Consistency(format!(
                        "antisymmetry fails for {} and {}",
                        self.basis[i].name, self.basis[j].name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn check_grading(&self) -> Result<()> {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let (bi, bj) = (&self.basis[i], &self.basis[j]);
                for (k, _) in &self.table[i][j] {
                    let bk = &self.basis[*k];
                    let ok = bk.degree == bi.degree + bj.degree
                        && match (bi.bidegree, bj.bidegree, bk.bidegree) {
                            (Some((a, b)), Some((c, d)), Some(e)) => e == (a + c, b + d),
                            _ => true,
                        };
                    if !ok {
                        return Err(Error::Consistency(format!(
                            "[{}, {}] has a component along {}",
                            bi.name, bj.name, bk.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let ij = self.bracket_basis(i, j);
                for k in j + 1..n {
                    let a = self.bracket(&ij, &self.unit(k));
                    let b = self.bracket(&self.bracket_basis(j, k), &self.unit(i));
                    let c = self.bracket(&self.bracket_basis(k, i), &self.unit(j));
                    if (0..n).any(|t| !(&(&a[t] + &b[t]) + &c[t]).is_zero()) {
                        return Err(Error::Consistency(format!(
                            "Jacobi fails on {}, {}, {}",
                            self.basis[i].name, self.basis[j].name, self.basis[k].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_conjugation(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let c = self.conjugation.as_ref()?;
        let xb: Vec<Scalar> = x.iter().map(Scalar::conj).collect();
        Some(c.mul_vec(&xb))
    }

    /// The conjugation must be an involutive antilinear automorphism.
    pub fn check_conjugation(&self) -> Result<()> {
        let Some(c) = &self.conjugation else { return Ok(()) };
        let n = self.dim();
        if &(c * &c.conj()) != &Matrix::identity(n) {
            return Err(Error::Consistency("conjugation is not an involution".into()));
        }
        let col = |j: usize| c.column(j);
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.apply_conjugation(&self.bracket_basis(i, j)).expect("present");
                let rhs = self.bracket(&col(i), &col(j));
                if lhs != rhs {
                    return Err(Error::Consistency(format!(
                        "conjugation is not an automorphism on {}, {}",
                        self.basis[i].name, self.basis[j].name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Restriction to a subset of basis elements, which must span a subalgebra.
    pub fn subalgebra(&self, indices: &[usize]) -> Result<Self> {
        let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let m = indices.len();
        let mut table = vec![vec![Sparse::new(); m]; m];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                let mut out = Sparse::new();
                for (k, c) in &self.table[i][j] {
                    match pos.get(k) {
                        Some(&kk) => out.push((kk, c.clone())),
                        None => {
                            return Err(Error::Consistency(format!(
                                "[{}, {}] leaves the chosen subspace",
                                self.basis[i].name, self.basis[j].name
                            )))
                        }
                    }
                }
                out.sort_by_key(|(k, _)| *k);
                table[a][b] = out;
            }
        }
        let basis = indices.iter().map(|&i| self.basis[i].clone()).collect();
        Ok(GradedLieAlgebra { basis, table, conjugation: None })
    }

    /// Same constants, basis listed in the order given by `perm` (new position -> old index).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.dim()).collect::<Vec<_>>() {
            return Err(Error::Input("not a permutation".into()));
        }
        self.subalgebra(perm)
    }
}

#[derive(Serialize, Deserialize)]
struct BracketEntry {
    i: usize,
    j: usize,
    k: usize,
    c: Scalar,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    basis: Vec<BasisElement>,
    brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conjugation: Option<Vec<Vec<Scalar>>>,
}

impl Serialize for GradedLieAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut brackets = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                for (k, c) in &self.table[i][j] {
                    brackets.push(BracketEntry { i, j, k: *k, c: c.clone() });
                }
            }
        }
        let conjugation = self
            .conjugation
            .as_ref()
            .map(|c| (0..c.rows()).map(|r| c.row(r)).collect());
        AlgebraRepr { basis: self.basis.clone(), brackets, conjugation }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedLieAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = AlgebraRepr::deserialize(d)?;
        let n = r.basis.len();
        let mut table = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for e in r.brackets {
            if e.i >= n || e.j >= n || e.k >= n {
                return Err(D::Error::custom("bracket index out of range"));
            }
            table[e.i][e.j][e.k] = e.c.clone();
            table[e.j][e.i][e.k] = -e.c;
        }
        let alg = GradedLieAlgebra::from_dense(r.basis, table).map_err(D::Error::custom)?;
        match r.conjugation {
            Some(rows) => alg.with_conjugation(Matrix::from_rows(rows)).map_err(D::Error::custom),
            None => Ok(alg),
        }
    }
}

/// The 3-dimensional Heisenberg algebra `[x, y] = z`, graded in degrees -1, -1, -2.
pub fn heisenberg3() -> GradedLieAlgebra {
    let mut t = vec![vec![vec![Scalar::zero(); 3]; 3]; 3];
    t[0][1][2] = Scalar::one();
    t[1][0][2] = -Scalar::one();
    GradedLieAlgebra::from_dense(
        vec![BasisElement::new("x", -1), BasisElement::new("y", -1), BasisElement::new("z", -2)],
        t,
    )
    .expect("heisenberg algebra is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> GradedLieAlgebra {
        let mats = [
            Matrix::from_int_rows(&[&[0, 0], &[1, 0]]),
            Matrix::from_int_rows(&[&[1, 0], &[0, -1]]),
            Matrix::from_int_rows(&[&[0, 1], &[0, 0]]),
        ];
        let basis = vec![
            BasisElement::new("f", -1),
            BasisElement::new("h", 0),
            BasisElement::new("e", 1),
        ];
        GradedLieAlgebra::from_matrices(basis, &mats).unwrap()
    }

    #[test]
    fn sl2_constants() {
        let g = sl2();
        assert_eq!(g.bracket_basis(1, 2), vec![Scalar::zero(), Scalar::zero(), Scalar::int(2)]);
        assert_eq!(g.bracket_basis(2, 0), vec![Scalar::zero(), Scalar::one(), Scalar::zero()]);
        assert!(g.is_real());
    }

    #[test]
    fn bad_grading_rejected() {
        let mut t = vec![vec![vec![Scalar::zero(); 3]; 3]; 3];
        t[0][1][2] = Scalar::one();
        t[1][0][2] = -Scalar::one();
        let basis = vec![BasisElement::new("x", -1), BasisElement::new("y", -1), BasisElement::new("z", -1)];
        assert!(GradedLieAlgebra::from_dense(basis, t).is_err());
    }

    #[test]
    fn jacobi_violation_detected() {
        // [a,b]=c, [b,c]=a, [c,a]=c fails Jacobi
        let mut t = vec![vec![vec![Scalar::zero(); 3]; 3]; 3];
        let mut set = |i: usize, j: usize, k: usize| {
            t[i][j][k] = Scalar::one();
            t[j][i][k] = -Scalar::one();
        };
        set(0, 1, 2);
        set(1, 2, 0);
        set(2, 0, 2);
        let basis = (0..3).map(|i| BasisElement::new(format!("e{i}"), 0)).collect();
        assert!(matches!(GradedLieAlgebra::from_dense(basis, t), Err(Error::Consistency(_))));
    }

    #[test]
    fn json_roundtrip() {
        let g = sl2();
        let s = serde_json::to_string(&g).unwrap();
        let back: GradedLieAlgebra = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn subalgebra_closure() {
        let g = sl2();
        assert!(g.subalgebra(&[1, 2]).is_ok());
        assert!(g.subalgebra(&[0, 2]).is_err());
    }

    #[test]
    fn complex_conjugation_on_sl2() {
        // standard conjugation fixes the real basis
        let g = sl2().with_conjugation(Matrix::identity(3)).unwrap();
        assert!(g.check_conjugation().is_ok());
        // f <-> e with a sign is an automorphism (Cartan involution composed with conj)
        let c = Matrix::from_int_rows(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]);
        assert!(sl2().with_conjugation(c).is_ok());
        let bad = Matrix::from_int_rows(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        assert!(sl2().with_conjugation(bad).is_err());
    }
}
