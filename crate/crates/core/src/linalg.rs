//! Dense matrices over Gaussian rationals with exact elimination.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::{Rational, Scalar};
use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Scalar>], len: usize) -> Self {
        Matrix::from_fn(len, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Scalar::is_real)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    pub fn adjoint(&self) -> Matrix {
        self.conj().transpose()
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        self.map(|x| x * s)
    }

    pub fn scale_rat(&self, q: &Rational) -> Matrix {
        self.map(|x| x.scale(q))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    pub fn block_diagonal(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_submatrix(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Row-major flattening, used as the coordinate vector of a matrix.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn pow(&self, k: u32) -> Matrix {
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }

    pub fn inverse(&self) -> Result<Matrix, Error> {
        if !self.is_square() {
            return Err(Error::Singular("non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        aug.set_submatrix(0, 0, self);
        aug.set_submatrix(0, n, &Matrix::identity(n));
        let red = rref(&aug);
        if red.pivots.len() < n || red.pivots[n - 1] >= n {
            return Err(Error::Singular(format!("{n}x{n} matrix has rank below {n}")));
        }
        Ok(red.matrix.submatrix(0, n, n, n))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det = det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] * &inv;
                for c in col..n {
                    let v = &m[(col, c)] * &f;
                    m[(r, c)] -= &v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Serialized as a list of rows.
impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Scalar>> = (0..self.rows).map(|r| self.row(r)).collect();
        rows.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Scalar>> = Vec::deserialize(d)?;
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != width) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let n = rows.len();
        Ok(Matrix::from_vec(n, width, rows.into_iter().flatten().collect()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|x| -x)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for Matrix {
            type Output = Matrix;
            fn $m(self, rhs: Matrix) -> Matrix {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Matrix> for Matrix {
            type Output = Matrix;
            fn $m(self, rhs: &Matrix) -> Matrix {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        -&self
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form by Gauss-Jordan elimination over the exact field.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = a[(r, c)].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for j in c..cols {
                if !a[(r, j)].is_zero() {
                    a[(r, j)] = &a[(r, j)] * &inv;
                }
            }
        }
        let pivot_row: Vec<(usize, Scalar)> = (c..cols)
            .filter(|&j| !a[(r, j)].is_zero())
            .map(|j| (j, a[(r, j)].clone()))
            .collect();
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for (j, v) in &pivot_row {
                let d = v * &f;
                a[(i, *j)] -= &d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, pivots }
}

/// Basis of the right nullspace `{x : m x = 0}`.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Scalar>> {
    let red = rref(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (row, &p) in red.pivots.iter().enumerate() {
            let e = &red.matrix[(row, free)];
            if !e.is_zero() {
                v[p] = -e;
            }
        }
        basis.push(v);
    }
    basis
}

/// Solves `m x = b`, returning one solution when the system is consistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows, b.len());
    let mut aug = Matrix::zeros(m.rows, m.cols + 1);
    aug.set_submatrix(0, 0, m);
    for (r, x) in b.iter().enumerate() {
        aug[(r, m.cols)] = x.clone();
    }
    let red = rref(&aug);
    if red.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); m.cols];
    for (row, &p) in red.pivots.iter().enumerate() {
        x[p] = red.matrix[(row, m.cols)].clone();
    }
    Some(x)
}

pub fn rank_of_vectors(vectors: &[Vec<Scalar>]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => Matrix::from_rows(vectors.to_vec()).rank().min(v.len().max(vectors.len())),
    }
}

/// Real-linear image of a complex vector: real parts followed by imaginary parts.
pub fn realify(v: &[Scalar]) -> Vec<Scalar> {
    v.iter()
        .map(Scalar::re_part)
        .chain(v.iter().map(Scalar::im_part))
        .collect()
}

/// Rank of the real span of complex vectors.
pub fn real_rank(vectors: &[Vec<Scalar>]) -> usize {
    let real: Vec<Vec<Scalar>> = vectors.iter().map(|v| realify(v)).collect();
    rank_of_vectors(&real)
}

/// Picks a maximal linearly independent subset, keeping input order.
pub fn independent_subset(vectors: &[Vec<Scalar>]) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let len = vectors[0].len();
    let m = Matrix::from_columns(vectors, len);
    rref(&m).pivots
}

/// Coordinates with respect to a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct SpanCoords {
    basis: Vec<Vec<Scalar>>,
    pivot_rows: Vec<usize>,
    inverse: Matrix,
}

impl SpanCoords {
    pub fn new(basis: Vec<Vec<Scalar>>) -> Result<Self, Error> {
        let n = basis.len();
        if n == 0 {
            return Ok(SpanCoords { basis, pivot_rows: Vec::new(), inverse: Matrix::zeros(0, 0) });
        }
        let len = basis[0].len();
        // rows of the column matrix that carry a pivot in the transpose
        let rows_as_cols = Matrix::from_columns(&basis, len).transpose();
        let red = rref(&rows_as_cols);
        if red.pivots.len() < n {
            return Err(Error::Singular("basis vectors are linearly dependent".into()));
        }
        let pivot_rows = red.pivots.clone();
        let square = Matrix::from_fn(n, n, |r, c| basis[c][pivot_rows[r]].clone());
        let inverse = square.inverse()?;
        Ok(SpanCoords { basis, pivot_rows, inverse })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Coordinates of `v`, assuming `v` lies in the span.
    pub fn coords_unchecked(&self, v: &[Scalar]) -> Vec<Scalar> {
        let picked: Vec<Scalar> = self.pivot_rows.iter().map(|&r| v[r].clone()).collect();
        self.inverse.mul_vec(&picked)
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c = self.coords_unchecked(v);
        let back = self.combine(&c);
        (back.as_slice() == v).then_some(c)
    }

    pub fn combine(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        let len = self.basis.first().map_or(0, Vec::len);
        let mut out = vec![Scalar::zero(); len];
        for (b, c) in self.basis.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o += x * c;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn arb_matrix(n: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec((-4i64..5, -4i64..5), n * n).prop_map(move |v| {
            Matrix::from_vec(n, n, v.into_iter().map(|(a, b)| Scalar::gauss(a, b)).collect())
        })
    }

    #[test]
    fn inverse_of_singular_fails() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(matches!(m.inverse(), Err(Error::Singular(_))));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = Matrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn real_rank_distinguishes_i_multiples() {
        let v = vec![Scalar::one(), Scalar::zero()];
        let iv = vec![Scalar::i(), Scalar::zero()];
        assert_eq!(rank_of_vectors(&[v.clone(), iv.clone()]), 1);
        assert_eq!(real_rank(&[v, iv]), 2);
    }

    #[test]
    fn span_coords_detects_outside() {
        let sc = SpanCoords::new(vec![vec![Scalar::one(), Scalar::one(), Scalar::zero()]]).unwrap();
        assert_eq!(sc.coords(&[Scalar::int(2), Scalar::int(2), Scalar::zero()]), Some(vec![Scalar::int(2)]));
        assert_eq!(sc.coords(&[Scalar::int(2), Scalar::int(1), Scalar::zero()]), None);
    }

    #[test]
    fn determinant_matches_hand_value() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::gauss(1, 1), Scalar::int(2)],
            vec![Scalar::frac(1, 2), Scalar::gauss(0, 3)],
        ]);
        // (1+i)(3i) - 2*(1/2) = 3i - 3 - 1
        assert_eq!(m.determinant(), Scalar::new(rat(-4, 1), rat(3, 1)));
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(m in arb_matrix(3)) {
            if let Ok(inv) = m.inverse() {
                prop_assert_eq!(&m * &inv, Matrix::identity(3));
                prop_assert!(!m.determinant().is_zero());
            } else {
                prop_assert!(m.determinant().is_zero());
            }
        }

        #[test]
        fn rank_nullity(m in arb_matrix(4)) {
            prop_assert_eq!(m.rank() + nullspace(&m).len(), 4);
        }
    }
}
