//! Levi kernel, the map ι, regularity and the Levi–Tanaka identities.

use serde::Serialize;

use crate::linalg::{nullspace, real_rank, solve, Matrix};
use crate::{Error, Result, Scalar};

use super::{BasisElement, GradedLieAlgebra};

/// Second-order data read off a graded algebra: `g_−`, `I` on `g_{−1}`, and the
/// kernel `k` acting on `g_{−1}`.
///
/// `i_minus1` and every `k_action` matrix use the coordinates of
/// `gminus.indices_of_degree(-1)`, in that order. `i_k` is `I` on `k` in the basis
/// indexing `k_action`.
#[derive(Clone, Debug)]
pub struct LeviData {
    pub gminus: GradedLieAlgebra,
    pub i_minus1: Matrix,
    pub k_action: Vec<Matrix>,
    pub i_k: Option<Matrix>,
}

/// `(g_−, I, k)` with `k` realized inside `gl(g_{−1})`.
#[derive(Clone, Debug)]
pub struct SecondOrderLT {
    pub gminus: GradedLieAlgebra,
    pub cstruct: Matrix,
    pub kernel: Vec<Matrix>,
}

#[derive(Clone, Debug)]
pub struct IotaMap {
    pub images: Vec<Matrix>,
    pub rank: usize,
    pub injective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub injective: bool,
    /// Per kernel element: does it extend to a degree-preserving derivation of `g_−`.
    pub extends: Vec<bool>,
    /// Triples `(a, b, c)` with `[[k_a, k_b], k_c]` outside `k`.
    pub closure_failures: Vec<(usize, usize, usize)>,
    pub regular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub claim: u8,
    pub statement: &'static str,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeviTanakaReport {
    pub claims: Vec<ClaimResult>,
}

impl LeviTanakaReport {
    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }

    pub fn claim(&self, n: u8) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.claim == n)
    }
}

fn square_check(m: &Matrix, n: usize, what: &str) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::Input(format!("{what} must be {n}x{n}")));
    }
    Ok(())
}

impl LeviData {
    pub fn new(gminus: GradedLieAlgebra, i_minus1: Matrix, k_action: Vec<Matrix>, i_k: Option<Matrix>) -> Result<Self> {
        if gminus.degrees().iter().any(|&d| d >= 0) {
            return Err(Error::Input("g_- must be negatively graded".into()));
        }
        let n1 = gminus.indices_of_degree(-1).len();
        square_check(&i_minus1, n1, "I on g_-1")?;
        if &i_minus1 * &i_minus1 != -Matrix::identity(n1) {
            return Err(Error::Precondition("I does not square to -1 on g_-1".into()));
        }
        for a in &k_action {
            square_check(a, n1, "kernel action")?;
        }
        if let Some(ik) = &i_k {
            square_check(ik, k_action.len(), "I on k")?;
        }
        Ok(LeviData { gminus, i_minus1, k_action, i_k })
    }

    pub fn g1(&self) -> Vec<usize> {
        self.gminus.indices_of_degree(-1)
    }

    pub fn dim_k(&self) -> usize {
        self.k_action.len()
    }

    /// Graded symbol `m = g_− ⊕ k` with `k` in degree −1 bracketing trivially, and `I` on `m_{−1}`.
    ///
    /// The `k` elements are appended after the basis of `g_−`; `I` on `m_{−1}` is listed in
    /// the order of `m.indices_of_degree(-1)`.
    pub fn symbol_algebra(&self) -> Result<(GradedLieAlgebra, Matrix)> {
        let n = self.gminus.dim();
        let kd = self.dim_k();
        let total = n + kd;
        let mut basis: Vec<BasisElement> = self
            .gminus
            .basis()
            .iter()
            .map(|b| BasisElement::new(b.name.clone(), b.degree))
            .collect();
        for a in 0..kd {
            basis.push(BasisElement::new(format!("k#{a}"), -1));
        }
        let mut table = vec![vec![vec![Scalar::zero(); total]; total]; total];
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.gminus.bracket_basis(i, j).into_iter().enumerate() {
                    table[i][j][k] = c;
                }
            }
        }
        let m = GradedLieAlgebra::from_dense(basis, table)?;
        let n1 = self.g1().len();
        let ik = match &self.i_k {
            Some(ik) => ik.clone(),
            None if kd == 0 => Matrix::zeros(0, 0),
            None => return Err(Error::Precondition("I on k is required for the symbol algebra".into())),
        };
        let mut i_m = Matrix::zeros(n1 + kd, n1 + kd);
        i_m.set_submatrix(0, 0, &self.i_minus1);
        i_m.set_submatrix(n1, n1, &ik);
        Ok((m, i_m))
    }

    pub fn second_order(&self) -> SecondOrderLT {
        SecondOrderLT { gminus: self.gminus.clone(), cstruct: self.i_minus1.clone(), kernel: self.k_action.clone() }
    }

    /// `I` applied to the kernel element with coordinates `coords`.
    fn i_on_k(&self, a: usize) -> Option<Matrix> {
        let ik = self.i_k.as_ref()?;
        let mut out = Matrix::zeros(self.i_minus1.rows(), self.i_minus1.rows());
        for (b, m) in self.k_action.iter().enumerate() {
            let c = &ik[(b, a)];
            if !c.is_zero() {
                out = &out + &m.scale(c);
            }
        }
        Some(out)
    }
}

/// The bracket `m_{−1} × m_{−1} → m_{−2}` as a list of matrices, one per `m_{−2}` basis element.
fn levi_pairing(m: &GradedLieAlgebra) -> (Vec<usize>, Vec<usize>, Vec<Matrix>) {
    let one = m.indices_of_degree(-1);
    let two = m.indices_of_degree(-2);
    let forms = two
        .iter()
        .map(|&t| Matrix::from_fn(one.len(), one.len(), |a, b| m.bracket_basis(one[a], one[b])[t].clone()))
        .collect();
    (one, two, forms)
}

/// Radical of the pairing `m_{−1} × m_{−1} → m_{−2}`, as vectors in `m_{−1}` coordinates.
pub fn levi_kernel(m: &GradedLieAlgebra) -> Vec<Vec<Scalar>> {
    let (one, _, forms) = levi_pairing(m);
    if one.is_empty() {
        return Vec::new();
    }
    if forms.is_empty() {
        return (0..one.len()).map(|i| unit(one.len(), i)).collect();
    }
    let rows: Vec<Vec<Scalar>> = forms.iter().flat_map(|f| (0..f.rows()).map(move |r| f.row(r))).collect();
    nullspace(&Matrix::from_rows(rows))
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect()
}

/// `ι(A) = ½(A + I A I)`, the antilinear part of each kernel endomorphism.
pub fn iota_map(slt: &SecondOrderLT) -> IotaMap {
    let i = &slt.cstruct;
    let half = Scalar::frac(1, 2);
    let images: Vec<Matrix> = slt.kernel.iter().map(|a| (a + &(&(i * a) * i)).scale(&half)).collect();
    let rank = real_rank(&images.iter().map(Matrix::to_vec).collect::<Vec<_>>());
    IotaMap { injective: rank == images.len(), rank, images }
}

/// Unique degree-preserving derivation of `g_−` restricting to `d` on `g_{−1}`, if any.
pub fn extend_derivation(gminus: &GradedLieAlgebra, d: &Matrix) -> Option<Matrix> {
    let n = gminus.dim();
    let one = gminus.indices_of_degree(-1);
    let mut d0 = Matrix::zeros(n, n);
    for (c, &j) in one.iter().enumerate() {
        for (r, &i) in one.iter().enumerate() {
            d0[(i, j)] = d[(r, c)].clone();
        }
    }
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let (bi, bj) = (&gminus.basis()[i], &gminus.basis()[j]);
            bi.degree == bj.degree && bi.degree <= -2
        })
        .collect();
    // residual of the Leibniz rule, linear in the derivation
    let residual = |dm: &Matrix| -> Vec<Scalar> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let br = gminus.bracket_basis(i, j);
                let lhs = dm.mul_vec(&br);
                let a = gminus.bracket(&dm.column(i), &gminus.unit(j));
                let b = gminus.bracket(&gminus.unit(i), &dm.column(j));
                for t in 0..n {
                    out.push(&(&lhs[t] - &a[t]) - &b[t]);
                }
            }
        }
        out
    };
    let r0 = residual(&d0);
    let sol = if unknowns.is_empty() {
        r0.iter().all(Scalar::is_zero).then(Vec::new)?
    } else {
        let cols: Vec<Vec<Scalar>> = unknowns
            .iter()
            .map(|&(i, j)| {
                let mut e = Matrix::zeros(n, n);
                e[(i, j)] = Scalar::one();
                residual(&e)
            })
            .collect();
        let a = Matrix::from_columns(&cols, r0.len());
        let rhs: Vec<Scalar> = r0.iter().map(|x| -x).collect();
        solve(&a, &rhs)?
    };
    let mut full = d0;
    for (&(i, j), v) in unknowns.iter().zip(sol) {
        full[(i, j)] = v;
    }
    Some(full)
}

/// Checks that `ι` is injective, that its image consists of derivations, and `[[k,k],k] ⊆ k`.
pub fn check_regularity(slt: &SecondOrderLT) -> RegularityReport {
    let iota = iota_map(slt);
    let ders: Vec<Option<Matrix>> = iota.images.iter().map(|a| extend_derivation(&slt.gminus, a)).collect();
    let extends: Vec<bool> = ders.iter().map(Option::is_some).collect();
    let mut closure_failures = Vec::new();
    if extends.iter().all(|&b| b) {
        let ders: Vec<Matrix> = ders.into_iter().flatten().collect();
        let span: Vec<Vec<Scalar>> = ders.iter().map(Matrix::to_vec).collect();
        let base = real_rank(&span);
        for a in 0..ders.len() {
            for b in a + 1..ders.len() {
                let ab = ders[a].commutator(&ders[b]);
                for (c, dc) in ders.iter().enumerate() {
                    let v = ab.commutator(dc).to_vec();
                    let mut with = span.clone();
                    with.push(v);
                    if real_rank(&with) != base {
                        closure_failures.push((a, b, c));
                    }
                }
            }
        }
    }
    let regular = iota.injective && extends.iter().all(|&b| b) && closure_failures.is_empty();
    RegularityReport { injective: iota.injective, extends, closure_failures, regular }
}

/// Evaluates the Levi–Tanaka identities on the symbol algebra of `data`:
/// 1. `L(IX, IY) = L(X, Y)` on `m_{−1}`;
/// 2. the Levi kernel is `I`-stable and the pairing on `g_{−1}` is nondegenerate;
/// 3. `L(ι(A)X, Y) + L(X, ι(A)Y) = 0`;
/// 4. `ι(IA) = I ∘ ι(A)`.
pub fn check_levi_tanaka(data: &LeviData) -> Result<LeviTanakaReport> {
    let (m, i_m) = data.symbol_algebra()?;
    let (one, _, forms) = levi_pairing(&m);
    let n1 = data.g1().len();
    let mut claims = Vec::new();

    // 1
    let mut witness = None;
    'outer: for a in 0..one.len() {
        for b in 0..one.len() {
            for f in &forms {
                let lhs = (&(&i_m.transpose() * f) * &i_m)[(a, b)].clone();
                if lhs != f[(a, b)] {
                    witness = Some(format!("({}, {})", m.basis()[one[a]].name, m.basis()[one[b]].name));
                    break 'outer;
                }
            }
        }
    }
    claims.push(ClaimResult {
        claim: 1,
        statement: "L(IX, IY) = L(X, Y) on m_-1",
        holds: witness.is_none(),
        witness,
    });

    // 2
    let kernel = levi_kernel(&m);
    let rad_g1: Vec<&Vec<Scalar>> = kernel.iter().filter(|v| v[n1..].iter().all(Scalar::is_zero)).collect();
    let stable = {
        let mut all = kernel.clone();
        all.extend(kernel.iter().map(|v| i_m.mul_vec(v)));
        real_rank(&all) == real_rank(&kernel)
    };
    let witness = if !rad_g1.is_empty() {
        Some("degenerate direction inside g_-1".to_string())
    } else if kernel.len() != data.dim_k() {
        Some(format!("kernel has dimension {} but k has {}", kernel.len(), data.dim_k()))
    } else if !stable {
        Some("kernel is not I-stable".to_string())
    } else {
        None
    };
    claims.push(ClaimResult {
        claim: 2,
        statement: "Levi kernel is I-stable with nondegenerate quotient",
        holds: witness.is_none(),
        witness,
    });

    // 3 and 4 work on g_-1 only
    let g1_forms: Vec<Matrix> = forms.iter().map(|f| f.submatrix(0, 0, n1, n1)).collect();
    let iota = iota_map(&data.second_order());
    let mut witness = None;
    for (a, ia) in iota.images.iter().enumerate() {
        for f in &g1_forms {
            let s = &(&ia.transpose() * f) + &(f * ia);
            if !s.is_zero() {
                witness = Some(format!("kernel element {a}"));
            }
        }
    }
    claims.push(ClaimResult {
        claim: 3,
        statement: "L(i(A)X, Y) + L(X, i(A)Y) = 0",
        holds: witness.is_none(),
        witness,
    });

    let mut witness = None;
    for a in 0..data.dim_k() {
        match data.i_on_k(a) {
            None => {
                witness = Some("I on k unavailable".into());
                break;
            }
            Some(ia_action) => {
                let lhs = iota_map(&SecondOrderLT {
                    gminus: data.gminus.clone(),
                    cstruct: data.i_minus1.clone(),
                    kernel: vec![ia_action],
                })
                .images
                .remove(0);
                if lhs != &data.i_minus1 * &iota.images[a] {
                    witness = Some(format!("kernel element {a}"));
                    break;
                }
            }
        }
    }
    claims.push(ClaimResult {
        claim: 4,
        statement: "i(IA) = I o i(A)",
        holds: witness.is_none(),
        witness,
    });
    Ok(LeviTanakaReport { claims })
}

/// Characteristic polynomial coefficients `c_0, …, c_n` (monic) by Faddeev–LeVerrier.
pub fn char_poly(a: &Matrix) -> Vec<Scalar> {
    let n = a.rows();
    let mut c = vec![Scalar::zero(); n + 1];
    c[n] = Scalar::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = &(a * &mk) + &Matrix::identity(n).scale(&c[n - k + 1]);
        let t = (a * &mk).trace();
        c[n - k] = -(t * Scalar::frac(1, k as i64));
    }
    c
}

fn sign_changes(coeffs: &[Scalar]) -> usize {
    let signs: Vec<i32> = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| super::realization::sign_of(&c.re))
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Inertia `(positive, negative, zero)` of a real symmetric matrix, exact.
///
/// All roots of the characteristic polynomial are real, so Descartes' rule counts them exactly.
pub fn inertia(g: &Matrix) -> Result<(usize, usize, usize)> {
    if !g.is_real() || g.transpose() != *g {
        return Err(Error::Precondition("inertia needs a real symmetric matrix".into()));
    }
    let c = char_poly(g);
    let zero = c.iter().position(|x| !x.is_zero()).unwrap_or(0);
    let pos = sign_changes(&c);
    let flipped: Vec<Scalar> = c.iter().enumerate().map(|(k, x)| if k % 2 == 1 { -x } else { x.clone() }).collect();
    let neg = sign_changes(&flipped);
    Ok((pos, neg, zero))
}

/// Hermitian signature `(p, q, r)` of the Levi form on `m_{−1}`, read through the real
/// functional `functional` on `g_{−2}`.
///
/// The symmetric form is `G(X, Y) = functional([X, I Y])`; each complex direction
/// contributes two real eigenvalues of the same sign, hence the halving.
pub fn levi_signature(data: &LeviData, functional: &[Scalar]) -> Result<(usize, usize, usize)> {
    let (m, i_m) = data.symbol_algebra()?;
    let (one, two, forms) = levi_pairing(&m);
    if functional.len() != two.len() {
        return Err(Error::Input("functional must have one entry per g_-2 basis element".into()));
    }
    let mut l = Matrix::zeros(one.len(), one.len());
    for (f, c) in forms.iter().zip(functional) {
        l = &l + &f.scale(c);
    }
    let g = &l * &i_m;
    let (p, q, z) = inertia(&g)?;
    if p % 2 != 0 || q % 2 != 0 || z % 2 != 0 {
        return Err(Error::Consistency("Levi form is not I-hermitian".into()));
    }
    Ok((p / 2, q / 2, z / 2))
}

/// `z ↦ S z̄` on `C^2`, as a real 4x4 matrix in the basis `(e1, e2, i e1, i e2)`.
fn antilinear(s: [[(i64, i64); 2]; 2]) -> Matrix {
    // S z̄ with z = x + i y: (Re S x + Im S y) + i (Im S x − Re S y)
    let re = |r: usize, c: usize| Scalar::int(s[r][c].0);
    let im = |r: usize, c: usize| Scalar::int(s[r][c].1);
    Matrix::from_fn(4, 4, |r, c| match (r < 2, c < 2) {
        (true, true) => re(r, c),
        (true, false) => im(r, c - 2),
        (false, true) => im(r - 2, c),
        (false, false) => -re(r - 2, c - 2),
    })
}

/// Heisenberg algebra on `C^2 ⊕ R` with `[z, w] = Im(z̄ᵀ w)`, real basis `(e1, e2, i e1, i e2, t)`.
pub fn heisenberg_c2() -> GradedLieAlgebra {
    let mut t = vec![vec![vec![Scalar::zero(); 5]; 5]; 5];
    // Im(z̄ᵀ w) pairs e_k with i e_k
    for k in 0..2 {
        t[k][k + 2][4] = Scalar::one();
        t[k + 2][k][4] = -Scalar::one();
    }
    let basis = vec![
        BasisElement::new("e1", -1),
        BasisElement::new("e2", -1),
        BasisElement::new("ie1", -1),
        BasisElement::new("ie2", -1),
        BasisElement::new("t", -2),
    ];
    GradedLieAlgebra::from_dense(basis, t).expect("valid Heisenberg algebra")
}

/// Multiplication by `i` on `C^2` in the basis of [`heisenberg_c2`].
pub fn complex_structure_c2() -> Matrix {
    Matrix::from_int_rows(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]])
}

/// Irregular second-order data: `k = span_C{z ↦ S z̄, z ↦ T z̄}` on `C^2` with
/// `S = E11` and `T` the swap matrix; the double bracket produces `z ↦ (2 E11 − 2 E22) z̄`.
pub fn irregular_fixture() -> LeviData {
    let s = [[(1, 0), (0, 0)], [(0, 0), (0, 0)]];
    let is = [[(0, 1), (0, 0)], [(0, 0), (0, 0)]];
    let t = [[(0, 0), (1, 0)], [(1, 0), (0, 0)]];
    let it = [[(0, 0), (0, 1)], [(0, 1), (0, 0)]];
    let k_action = vec![antilinear(s), antilinear(is), antilinear(t), antilinear(it)];
    // I(A_S) = A_{iS}
    let i_k = Matrix::from_int_rows(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
    LeviData::new(heisenberg_c2(), complex_structure_c2(), k_action, Some(i_k)).expect("fixture is well formed")
}
