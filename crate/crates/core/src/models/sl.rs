//! Coordinates of the `sl(2n+2, R)` model in the block notation `X¹, Y¹, X², Y², c, Ξ`.

use crate::linalg::{solve, Matrix};
use crate::liealg::{Classical, MatrixRealization};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Real parameters of the `SL` model: columns `X¹, Y¹`, rows `X², Y²`, scalar `c` and complex `Ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlCoords {
    pub x1: Matrix,
    pub y1: Matrix,
    pub x2: Matrix,
    pub y2: Matrix,
    pub c: Scalar,
    pub xi: Matrix,
}

fn check_sl(real: &MatrixRealization) -> Result<usize> {
    if real.family != Classical::Sl {
        return Err(Error::Input(format!("{} is not the SL family", real.family)));
    }
    Ok(real.sizes[1])
}

fn i_times(m: &Matrix) -> Matrix {
    m.scale(&Scalar::i())
}

/// The real pair `(X, Y)` with `X_{1,0} = X¹ − iY¹`, `X_{2,0} = X¹ + iY¹`, `X_{3,0} = c`,
/// `X_{3,1} = X² + iY²`, `X_{3,2} = X² − iY²` and `Y = B + σB` for `B_{2,1} = Ξ`.
pub fn sl_input(real: &MatrixRealization, p: &SlCoords) -> Result<(Matrix, Matrix)> {
    let n = check_sl(real)?;
    let shapes = [(&p.x1, n, 1), (&p.y1, n, 1), (&p.x2, 1, n), (&p.y2, 1, n), (&p.xi, n, n)];
    if shapes.iter().any(|(m, r, c)| m.rows() != *r || m.cols() != *c) {
        return Err(Error::Input("block shapes do not match n".into()));
    }
    if ![&p.x1, &p.y1, &p.x2, &p.y2].iter().all(|m| m.is_real()) || !p.c.is_real() {
        return Err(Error::Input("X and Y blocks must be real".into()));
    }
    let o = real.offsets();
    let size = real.size();
    let mut x = Matrix::zeros(size, size);
    x.set_submatrix(o[1], 0, &(&p.x1 - &i_times(&p.y1)));
    x.set_submatrix(o[2], 0, &(&p.x1 + &i_times(&p.y1)));
    x[(o[3], 0)] = p.c.clone();
    x.set_submatrix(o[3], o[1], &(&p.x2 + &i_times(&p.y2)));
    x.set_submatrix(o[3], o[2], &(&p.x2 - &i_times(&p.y2)));
    let mut b = Matrix::zeros(size, size);
    b.set_submatrix(o[2], o[1], &p.xi);
    let y = &b + &real.conjugation.apply(&b);
    Ok((x, y))
}

/// The displayed forward formulas
/// `Z¹ = (id+Ξ)X¹ + i(id−Ξ)Y¹`, `Z² = X²(id+Ξ) + iY²(id−Ξ)`,
/// `w = c + (−X²Ξ − iY²(id−Ξ))X¹ + (iX²(id+Ξ) + Y²Ξ)Y¹`, returned as `(Z¹, Z², w)`.
pub fn sl_forward_printed(p: &SlCoords) -> (Matrix, Matrix, Scalar) {
    let id = Matrix::identity(p.xi.rows());
    let (plus, minus) = (&id + &p.xi, &id - &p.xi);
    let z1 = &(&plus * &p.x1) + &i_times(&(&minus * &p.y1));
    let z2 = &(&p.x2 * &plus) + &i_times(&(&p.y2 * &minus));
    let a = &(-(&p.x2 * &p.xi)) - &i_times(&(&p.y2 * &minus));
    let b = &i_times(&(&p.x2 * &plus)) + &(&p.y2 * &p.xi);
    let w = &(&(&a * &p.x1) + &(&b * &p.y1)) + &Matrix::diagonal(std::slice::from_ref(&p.c));
    (z1, z2, w[(0, 0)].clone())
}

/// `(Z¹, Z², w)` of `φ` in these coordinates. Agrees with the displayed formulas except
/// `Z¹ = (id−Ξ)X¹ + i(id+Ξ)Y¹`, since the `[V, B]` term contributes `−ΞV` to that block.
pub fn sl_forward(p: &SlCoords) -> (Matrix, Matrix, Scalar) {
    let (_, z2, w) = sl_forward_printed(p);
    let id = Matrix::identity(p.xi.rows());
    let z1 = &(&(&id - &p.xi) * &p.x1) + &i_times(&(&(&id + &p.xi) * &p.y1));
    (z1, z2, w)
}

/// The displayed inversion formulas with `M = (2id − ΞΞ̄ − Ξ̄Ξ)^{−1}`:
/// `X¹ = M((id+Ξ)Z̄¹ + (id+Ξ̄)Z¹)`, `X² = (Z̄²(id−Ξ) + Z²(id−Ξ̄))M`,
/// `Y¹ = iM((id−Ξ)Z̄¹ − (id−Ξ̄)Z¹)`, `Y² = i(Z̄²(id+Ξ) − Z²(id+Ξ̄))M`.
pub fn solve_back_sl(xi: &Matrix, z1: &Matrix, z2: &Matrix) -> Result<(Matrix, Matrix, Matrix, Matrix)> {
    let n = xi.rows();
    let id = Matrix::identity(n);
    let xb = xi.conj();
    let m = (&(&id.scale(&Scalar::int(2)) - &(xi * &xb)) - &(&xb * xi)).inverse()?;
    let (z1b, z2b) = (z1.conj(), z2.conj());
    let x1 = &m * &(&(&(&id + xi) * &z1b) + &(&(&id + &xb) * z1));
    let x2 = &(&(&z2b * &(&id - xi)) + &(z2 * &(&id - &xb))) * &m;
    let y1 = i_times(&(&m * &(&(&(&id - xi) * &z1b) - &(&(&id - &xb) * z1))));
    let y2 = i_times(&(&(&(&z2b * &(&id + xi)) - &(z2 * &(&id + &xb))) * &m));
    Ok((x1, x2, y1, y2))
}

/// Inverts [`sl_forward`] by solving the real-linear systems in `(X¹, Y¹)` and `(X², Y²)`.
pub fn solve_back_exact(xi: &Matrix, z1: &Matrix, z2: &Matrix) -> Result<(Matrix, Matrix, Matrix, Matrix)> {
    let n = xi.rows();
    let id = Matrix::identity(n);
    let (plus, minus) = (&id - xi, &id + xi);
    let i = Scalar::i();
    // Z¹ and its conjugate stacked: [[id−Ξ, i(id+Ξ)], [id−Ξ̄, −i(id+Ξ̄)]] (X¹; Y¹).
    let mut a = Matrix::zeros(2 * n, 2 * n);
    a.set_submatrix(0, 0, &plus);
    a.set_submatrix(0, n, &minus.scale(&i));
    a.set_submatrix(n, 0, &plus.conj());
    a.set_submatrix(n, n, &minus.conj().scale(&-i.clone()));
    let rhs1: Vec<Scalar> = z1.to_vec().into_iter().chain(z1.conj().to_vec()).collect();
    let s1 = solve(&a, &rhs1).ok_or_else(|| Error::Singular("Z¹ system".into()))?;
    if a.rank() < 2 * n {
        return Err(Error::Singular("Z¹ system is degenerate".into()));
    }
    // Z² transposed: (id+Ξ)ᵀ X²ᵀ + i(id−Ξ)ᵀ Y²ᵀ.
    let mut b = Matrix::zeros(2 * n, 2 * n);
    b.set_submatrix(0, 0, &minus.transpose());
    b.set_submatrix(0, n, &plus.transpose().scale(&i));
    b.set_submatrix(n, 0, &minus.transpose().conj());
    b.set_submatrix(n, n, &plus.transpose().conj().scale(&-i));
    let rhs2: Vec<Scalar> = z2.to_vec().into_iter().chain(z2.conj().to_vec()).collect();
    let s2 = solve(&b, &rhs2).ok_or_else(|| Error::Singular("Z² system".into()))?;
    if b.rank() < 2 * n {
        return Err(Error::Singular("Z² system is degenerate".into()));
    }
    let col = |v: &[Scalar]| Matrix::from_vec(n, 1, v.to_vec());
    let row = |v: &[Scalar]| Matrix::from_vec(1, n, v.to_vec());
    Ok((col(&s1[..n]), row(&s2[..n]), col(&s1[n..]), row(&s2[n..])))
}
