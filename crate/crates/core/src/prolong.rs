//! Tanaka prolongation and Chevalley–Eilenberg cohomology with a homogeneity filter.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::liealg::{GradedLieAlgebra, RealizedAlgebra};
use crate::linalg::{nullspace, solve, Matrix};
use crate::{Error, Result, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProlongationResult {
    /// Dimension of `g_i` for `i ≥ 1` (and `g_0` when it had to be computed).
    pub dims: BTreeMap<i64, usize>,
    pub total_dim: usize,
    pub terminated: bool,
    pub reduction_applied: bool,
}

/// `I` on `g_{−1}` and on `k`, with the positions of `k` inside the degree-0 part of a base.
#[derive(Clone, Debug)]
pub struct ReductionData {
    /// Indices of the base algebra spanning `k`; the remaining degree-0 indices are the complement.
    pub k: Vec<usize>,
    /// `I` on `g_{−1}` in the order of `base.indices_of_degree(-1)`.
    pub i_minus1: Matrix,
    /// `I` on `k` in the order of `k`.
    pub i_k: Matrix,
}

impl ReductionData {
    /// Reduction data for the nonpositive part of a realized model, with base indices as in
    /// [`nonpositive_part`].
    pub fn from_realized(alg: &RealizedAlgebra) -> Result<Self> {
        let data = alg.levi_data()?;
        let base = nonpositive_indices(alg);
        let k: Vec<usize> = alg
            .kernel_indices()
            .iter()
            .map(|i| base.iter().position(|b| b == i).expect("k lies in the base"))
            .collect();
        let i_k = data.i_k.ok_or_else(|| Error::Consistency("missing I on k".into()))?;
        Ok(ReductionData { k, i_minus1: data.i_minus1, i_k })
    }
}

fn nonpositive_indices(alg: &RealizedAlgebra) -> Vec<usize> {
    alg.real.indices_where(|b| b.degree <= 0)
}

/// `g_− ⊕ g_0` of a realized model.
pub fn nonpositive_part(alg: &RealizedAlgebra) -> Result<GradedLieAlgebra> {
    alg.real.subalgebra(&nonpositive_indices(alg))
}

/// Whether `g_{−1}` generates the negative part.
pub fn is_bracket_generating(alg: &GradedLieAlgebra) -> bool {
    let neg = alg.indices_where(|b| b.degree < 0);
    let mut span: Vec<Vec<Scalar>> = alg.indices_of_degree(-1).iter().map(|&i| alg.unit(i)).collect();
    let mut frontier = span.clone();
    let generators = span.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &generators {
                let b = alg.bracket(g, f);
                let mut with = span.clone();
                with.push(b.clone());
                if crate::linalg::rank_of_vectors(&with) > crate::linalg::rank_of_vectors(&span) {
                    span.push(b.clone());
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    crate::linalg::rank_of_vectors(&span) == neg.len()
}

/// Working state: `g_−` from the base, then components `g_0, g_1, …` stored as maps on `g_−`.
struct Tower<'a> {
    base: &'a GradedLieAlgebra,
    neg: Vec<usize>,
    /// total coordinate ranges for g_− and each nonnegative component
    comps: Vec<Vec<usize>>,
    /// For nonnegative basis element `c` (total index) the values on each g_− basis element.
    maps: BTreeMap<usize, Vec<Vec<Scalar>>>,
    total: usize,
}

impl<'a> Tower<'a> {
    fn new(base: &'a GradedLieAlgebra) -> Self {
        let neg = base.indices_where(|b| b.degree < 0);
        let total = neg.len();
        Tower { base, neg, comps: vec![(0..total).collect()], maps: BTreeMap::new(), total }
    }

    fn degree_of_neg(&self, j: usize) -> i64 {
        self.base.basis()[self.neg[j]].degree
    }

    /// Total indices of the component of degree `d` (`d < 0` picks from g_−).
    fn component(&self, d: i64) -> Vec<usize> {
        if d < 0 {
            (0..self.neg.len()).filter(|&j| self.degree_of_neg(j) == d).collect()
        } else {
            self.comps.get(d as usize + 1).cloned().unwrap_or_default()
        }
    }

    fn pad(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = v.to_vec();
        out.resize(self.total, Scalar::zero());
        out
    }

    /// `[v, e_j]` for `v` in total coordinates and `e_j` the `j`-th element of g_−.
    fn bracket_with_neg(&self, v: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.total];
        let nn = self.neg.len();
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if c < nn {
                let b = self.base.bracket_basis(self.neg[c], self.neg[j]);
                for (k, &bi) in self.neg.iter().enumerate() {
                    if !b[bi].is_zero() {
                        out[k] += &b[bi] * x;
                    }
                }
            } else {
                for (k, y) in self.maps[&c][j].iter().enumerate() {
                    if !y.is_zero() {
                        out[k] += y * x;
                    }
                }
            }
        }
        out
    }

    /// `e_i, e_j` bracket inside g_− as coefficients over g_− indices.
    fn neg_bracket(&self, i: usize, j: usize) -> Vec<Scalar> {
        let b = self.base.bracket_basis(self.neg[i], self.neg[j]);
        self.neg.iter().map(|&k| b[k].clone()).collect()
    }

    /// Unknown layout for degree `t`: pairs `(j, target total index)`.
    fn unknowns(&self, t: i64) -> Vec<(usize, usize)> {
        let mut u = Vec::new();
        for j in 0..self.neg.len() {
            for c in self.component(self.degree_of_neg(j) + t) {
                u.push((j, c));
            }
        }
        u
    }

    /// Residual of the derivation rule for a map given by its values on g_−.
    fn residual(&self, f: &[Vec<Scalar>]) -> Vec<Scalar> {
        let nn = self.neg.len();
        let mut out = Vec::new();
        for i in 0..nn {
            for j in i + 1..nn {
                let br = self.neg_bracket(i, j);
                let mut lhs = vec![Scalar::zero(); self.total];
                for (k, c) in br.iter().enumerate() {
                    if !c.is_zero() {
                        for (o, x) in lhs.iter_mut().zip(&f[k]) {
                            if !x.is_zero() {
                                *o += x * c;
                            }
                        }
                    }
                }
                let a = self.bracket_with_neg(&f[i], j);
                let b = self.bracket_with_neg(&f[j], i);
                for t in 0..self.total {
                    out.push(&(&lhs[t] - &a[t]) + &b[t]);
                }
            }
        }
        out
    }

    fn map_from_unknowns(&self, unknowns: &[(usize, usize)], coeffs: &[Scalar]) -> Vec<Vec<Scalar>> {
        let mut f = vec![vec![Scalar::zero(); self.total]; self.neg.len()];
        for (&(j, c), x) in unknowns.iter().zip(coeffs) {
            f[j][c] = x.clone();
        }
        f
    }

    /// Solves for the degree-`t` component; returns maps.
    fn solve_component(&self, t: i64) -> Vec<Vec<Vec<Scalar>>> {
        let unknowns = self.unknowns(t);
        if unknowns.is_empty() {
            return Vec::new();
        }
        let cols: Vec<Vec<Scalar>> = (0..unknowns.len())
            .map(|u| {
                let mut e = vec![Scalar::zero(); unknowns.len()];
                e[u] = Scalar::one();
                self.residual(&self.map_from_unknowns(&unknowns, &e))
            })
            .collect();
        let rows = cols[0].len();
        let sol = if rows == 0 {
            (0..unknowns.len())
                .map(|u| {
                    let mut e = vec![Scalar::zero(); unknowns.len()];
                    e[u] = Scalar::one();
                    e
                })
                .collect()
        } else {
            nullspace(&Matrix::from_columns(&cols, rows))
        };
        sol.iter().map(|c| self.map_from_unknowns(&unknowns, c)).collect()
    }

    fn push_component(&mut self, maps: Vec<Vec<Vec<Scalar>>>) {
        let start = self.total;
        let idx: Vec<usize> = (start..start + maps.len()).collect();
        self.total += maps.len();
        for (c, m) in idx.iter().zip(maps) {
            let padded = m.iter().map(|v| self.pad(v)).collect();
            self.maps.insert(*c, padded);
        }
        for m in self.maps.values_mut() {
            for v in m.iter_mut() {
                v.resize(self.total, Scalar::zero());
            }
        }
        self.comps.push(idx);
    }

    /// Degree-0 part of the base as maps `ad(a)|_{g_−}`.
    fn base_zero(&self) -> Result<Vec<Vec<Vec<Scalar>>>> {
        let zero = self.base.indices_of_degree(0);
        let mut out = Vec::new();
        for &a in &zero {
            let mut m = Vec::new();
            for &j in &self.neg {
                let b = self.base.bracket_basis(a, j);
                for (k, x) in b.iter().enumerate() {
                    if !x.is_zero() && self.base.basis()[k].degree >= 0 {
                        return Err(Error::Precondition("[g_0, g_-] leaves g_-".into()));
                    }
                }
                m.push(self.neg.iter().map(|&k| b[k].clone()).collect::<Vec<_>>());
            }
            out.push(m);
        }
        let flat: Vec<Vec<Scalar>> = out.iter().map(|m| m.concat()).collect();
        if crate::linalg::rank_of_vectors(&flat) != flat.len() {
            return Err(Error::Precondition("g_0 does not act faithfully on g_-".into()));
        }
        Ok(out)
    }
}

fn flatten(m: &[Vec<Scalar>]) -> Vec<Scalar> {
    m.concat()
}

fn check_base(base: &GradedLieAlgebra, max_degree: i64) -> Result<()> {
    if max_degree < 1 {
        return Err(Error::Precondition("max_degree must be at least 1".into()));
    }
    if base.degrees().iter().any(|&d| d > 0) {
        return Err(Error::Precondition("base must be nonpositively graded".into()));
    }
    if !is_bracket_generating(base) {
        return Err(Error::Precondition("g_-1 does not bracket-generate g_-".into()));
    }
    Ok(())
}

fn run(
    base: &GradedLieAlgebra,
    max_degree: i64,
    reduction: Option<&ReductionData>,
) -> Result<ProlongationResult> {
    check_base(base, max_degree)?;
    let mut tower = Tower::new(base);
    let mut dims = BTreeMap::new();
    let zero = if base.indices_of_degree(0).is_empty() {
        let z = tower.solve_component(0);
        dims.insert(0, z.len());
        z
    } else {
        tower.base_zero()?
    };
    // base degree-0 indices map to total indices in order
    let base_zero_idx = base.indices_of_degree(0);
    let zero_len = zero.len();
    tower.push_component(zero);
    let mut terminated = false;
    for t in 1..=max_degree {
        let mut comp = tower.solve_component(t);
        if t == 1 {
            if let Some(red) = reduction {
                let k_total: Vec<usize> = red
                    .k
                    .iter()
                    .map(|&b| {
                        let pos = base_zero_idx.iter().position(|&z| z == b).expect("k inside g_0");
                        tower.comps[1][pos]
                    })
                    .collect();
                comp = reduce_first(&tower, comp, red, &k_total)?;
                debug_assert_eq!(tower.comps[1].len(), zero_len);
            }
        }
        if comp.is_empty() {
            terminated = true;
            break;
        }
        dims.insert(t, comp.len());
        tower.push_component(comp);
    }
    Ok(ProlongationResult {
        total_dim: tower.total,
        dims,
        terminated,
        reduction_applied: reduction.is_some(),
    })
}

/// Tanaka prolongation of a nonpositively graded base up to `max_degree`.
///
/// When the base has no degree-0 part, `g_0` is taken to be all degree-preserving derivations.
pub fn tanaka_prolong(base: &GradedLieAlgebra, max_degree: i64) -> Result<ProlongationResult> {
    run(base, max_degree, None)
}

/// Prolongation with the first component cut down by [`heisenberg_reduction`].
pub fn tanaka_prolong_reduced(
    base: &GradedLieAlgebra,
    reduction: &ReductionData,
    max_degree: i64,
) -> Result<ProlongationResult> {
    if !is_heisenberg(base) {
        return Err(Error::Precondition("reduction needs a Heisenberg g_-".into()));
    }
    run(base, max_degree, Some(reduction))
}

/// Dimension of the first prolongation before and after the reduction.
pub fn first_prolongation_dims(base: &GradedLieAlgebra, reduction: &ReductionData) -> Result<(usize, usize)> {
    check_base(base, 1)?;
    let mut tower = Tower::new(base);
    let zero = tower.base_zero()?;
    tower.push_component(zero);
    let full = tower.solve_component(1);
    let n = full.len();
    let k_total: Vec<usize> = reduction
        .k
        .iter()
        .map(|&b| {
            let pos = base.indices_of_degree(0).iter().position(|&z| z == b).expect("k inside g_0");
            tower.comps[1][pos]
        })
        .collect();
    let reduced = reduce_first(&tower, full, reduction, &k_total)?;
    Ok((n, reduced.len()))
}

/// `g_{−2}` one-dimensional with a nondegenerate pairing on `g_{−1}`, and nothing deeper.
pub fn is_heisenberg(base: &GradedLieAlgebra) -> bool {
    let one = base.indices_of_degree(-1);
    let two = base.indices_of_degree(-2);
    if two.len() != 1 || base.degrees().iter().any(|&d| d < -2) {
        return false;
    }
    let m = Matrix::from_fn(one.len(), one.len(), |a, b| base.bracket_basis(one[a], one[b])[two[0]].clone());
    m.rank() == one.len()
}

/// Subspace of the first prolongation whose `k`-part commutes with `I`, then the largest
/// `g_0`-invariant subspace inside it.
pub fn heisenberg_reduction(
    base: &GradedLieAlgebra,
    first: &[Vec<Vec<Scalar>>],
    reduction: &ReductionData,
) -> Result<Vec<Vec<Vec<Scalar>>>> {
    if !is_heisenberg(base) {
        return Err(Error::Precondition("reduction needs a Heisenberg g_-".into()));
    }
    let mut tower = Tower::new(base);
    let zero = tower.base_zero()?;
    tower.push_component(zero);
    let k_total: Vec<usize> = reduction
        .k
        .iter()
        .map(|&b| {
            let pos = base.indices_of_degree(0).iter().position(|&z| z == b).expect("k inside g_0");
            tower.comps[1][pos]
        })
        .collect();
    let first: Vec<Vec<Vec<Scalar>>> = first.iter().map(|m| m.iter().map(|v| tower.pad(v)).collect()).collect();
    reduce_first(&tower, first, reduction, &k_total)
}

fn reduce_first(
    tower: &Tower<'_>,
    first: Vec<Vec<Vec<Scalar>>>,
    red: &ReductionData,
    k_total: &[usize],
) -> Result<Vec<Vec<Vec<Scalar>>>> {
    if first.is_empty() {
        return Ok(first);
    }
    let g1: Vec<usize> = (0..tower.neg.len()).filter(|&j| tower.degree_of_neg(j) == -1).collect();
    if red.i_minus1.rows() != g1.len() || red.i_k.rows() != k_total.len() {
        return Err(Error::Input("reduction data does not match the base".into()));
    }
    // f(IX) as a map on g_-1 coordinates
    let f_of = |f: &[Vec<Scalar>], x: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); tower.total];
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                for (o, y) in out.iter_mut().zip(&f[g1[a]]) {
                    if !y.is_zero() {
                        *o += y * c;
                    }
                }
            }
        }
        out
    };
    let pi_k = |v: &[Scalar]| -> Vec<Scalar> { k_total.iter().map(|&c| v[c].clone()).collect() };
    // linear condition per basis element of `first`
    let cond = |f: &[Vec<Scalar>]| -> Vec<Scalar> {
        let mut out = Vec::new();
        for a in 0..g1.len() {
            let x: Vec<Scalar> = (0..g1.len()).map(|b| if a == b { Scalar::one() } else { Scalar::zero() }).collect();
            let ix = red.i_minus1.mul_vec(&x);
            let lhs = pi_k(&f_of(f, &ix));
            let rhs = red.i_k.mul_vec(&pi_k(&f_of(f, &x)));
            out.extend(lhs.iter().zip(&rhs).map(|(l, r)| l - r));
        }
        out
    };
    let cols: Vec<Vec<Scalar>> = first.iter().map(|f| cond(f)).collect();
    let coeffs = nullspace(&Matrix::from_columns(&cols, cols[0].len()));
    let combine = |c: &[Scalar]| -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); tower.total]; tower.neg.len()];
        for (f, x) in first.iter().zip(c) {
            if x.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(f) {
                for (oo, y) in o.iter_mut().zip(v) {
                    if !y.is_zero() {
                        *oo += y * x;
                    }
                }
            }
        }
        out
    };
    let mut space: Vec<Vec<Vec<Scalar>>> = coeffs.iter().map(|c| combine(c)).collect();

    // largest g_0-invariant subspace
    let zero_idx = tower.comps[1].clone();
    let full_flat: Vec<Vec<Scalar>> = first.iter().map(|f| flatten(f)).collect();
    let full_mat = Matrix::from_columns(&full_flat, full_flat[0].len());
    loop {
        if space.is_empty() {
            return Ok(space);
        }
        let flat: Vec<Vec<Scalar>> = space.iter().map(|f| flatten(f)).collect();
        // annihilator of the current space inside the ambient coordinates
        let ann = nullspace(&Matrix::from_rows(flat.clone()));
        let mut rows = Vec::new();
        for &a in &zero_idx {
            for f in &space {
                let af = act_zero_on_first(tower, a, f);
                let v = flatten(&af);
                if solve(&full_mat, &v).is_none() {
                    return Err(Error::Consistency("[g_0, g_1] left the first prolongation".into()));
                }
                rows.push(ann.iter().map(|w| w.iter().zip(&v).map(|(p, q)| p * q).sum::<Scalar>()).collect::<Vec<_>>());
            }
        }
        // rows[a * dim + m][w] holds <ann_w, [A_a, f_m]>; constraint on coefficients c of f
        let dim = space.len();
        let mut eqs = Vec::new();
        for chunk in rows.chunks(dim) {
            for w in 0..ann.len() {
                eqs.push(chunk.iter().map(|r| r[w].clone()).collect::<Vec<_>>());
            }
        }
        let keep = if eqs.is_empty() { None } else { Some(nullspace(&Matrix::from_rows(eqs))) };
        let keep = match keep {
            None => return Ok(space),
            Some(k) => k,
        };
        if keep.len() == dim {
            return Ok(space);
        }
        space = keep
            .iter()
            .map(|c| {
                let mut out = vec![vec![Scalar::zero(); tower.total]; tower.neg.len()];
                for (f, x) in space.iter().zip(c) {
                    for (o, v) in out.iter_mut().zip(f) {
                        for (oo, y) in o.iter_mut().zip(v) {
                            *oo += y * x;
                        }
                    }
                }
                out
            })
            .collect();
    }
}

/// `[A, f](X) = [A, f(X)] − f([A, X])` for `A` a degree-0 element (total index) and `f` in degree 1.
fn act_zero_on_first(tower: &Tower<'_>, a: usize, f: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let a_map = &tower.maps[&a];
    let nn = tower.neg.len();
    (0..nn)
        .map(|j| {
            // [A, f(e_j)]: f(e_j) has g_- and g_0 parts
            let v = &f[j];
            let mut out = vec![Scalar::zero(); tower.total];
            for (c, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                if c < nn {
                    for (o, y) in out.iter_mut().zip(&a_map[c]) {
                        if !y.is_zero() {
                            *o += y * x;
                        }
                    }
                } else {
                    // [A, B] for A, B in g_0 as maps: [A,B](X) = A(B X) − B(A X)
                    let b_map = &tower.maps[&c];
                    let comm = commutator_of_maps(tower, a_map, b_map);
                    let coords = zero_coords(tower, &comm);
                    for (o, y) in out.iter_mut().zip(coords) {
                        if !y.is_zero() {
                            *o += &y * x;
                        }
                    }
                }
            }
            // − f([A, e_j])
            for (k, y) in a_map[j].iter().enumerate().take(nn) {
                if !y.is_zero() {
                    for (o, z) in out.iter_mut().zip(&f[k]) {
                        if !z.is_zero() {
                            *o -= z * y;
                        }
                    }
                }
            }
            out
        })
        .collect()
}

fn apply_map(map: &[Vec<Scalar>], x: &[Scalar], nn: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); nn];
    for (j, c) in x.iter().enumerate().take(nn) {
        if !c.is_zero() {
            for (o, y) in out.iter_mut().zip(&map[j]) {
                if !y.is_zero() {
                    *o += y * c;
                }
            }
        }
    }
    out
}

fn commutator_of_maps(tower: &Tower<'_>, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let nn = tower.neg.len();
    (0..nn)
        .map(|j| {
            let ab = apply_map(a, &b[j][..nn], nn);
            let ba = apply_map(b, &a[j][..nn], nn);
            ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
        })
        .collect()
}

/// Total coordinates of a degree-0 map given on g_− (faithfulness makes them unique).
fn zero_coords(tower: &Tower<'_>, m: &[Vec<Scalar>]) -> Vec<Scalar> {
    let nn = tower.neg.len();
    let zero = &tower.comps[1];
    let cols: Vec<Vec<Scalar>> = zero
        .iter()
        .map(|c| tower.maps[c].iter().flat_map(|v| v[..nn].to_vec()).collect())
        .collect();
    let target: Vec<Scalar> = m.iter().flat_map(|v| v.clone()).collect();
    let mut out = vec![Scalar::zero(); tower.total];
    if let Some(sol) = solve(&Matrix::from_columns(&cols, target.len()), &target) {
        for (c, x) in zero.iter().zip(sol) {
            out[*c] = x;
        }
    } else {
        // [g_0, g_0] ⊆ g_0 holds for a subalgebra; reaching here means the base is inconsistent
        panic!("degree-0 part is not closed under commutators");
    }
    out
}

// ---------------------------------------------------------------------------
// Chevalley–Eilenberg cohomology

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyResult {
    pub degree: usize,
    pub homogeneity: i64,
    pub dim: usize,
    pub cochain_dim: usize,
}

/// A representation of `n` on a graded vector space: `action[i]` is `ρ(e_i)`.
#[derive(Clone, Debug)]
pub struct Module {
    pub weights: Vec<i64>,
    pub action: Vec<Matrix>,
}

/// `n` with a weight per basis element.
#[derive(Clone, Debug)]
pub struct WeightedAlgebra {
    pub algebra: GradedLieAlgebra,
    pub weights: Vec<i64>,
}

impl Module {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Checks `ρ([x, y]) = [ρ(x), ρ(y)]` on basis pairs and that weights add.
    pub fn check(&self, n: &WeightedAlgebra) -> Result<()> {
        let d = n.algebra.dim();
        if self.action.len() != d {
            return Err(Error::Input("one action matrix per basis element of n".into()));
        }
        for (i, a) in self.action.iter().enumerate() {
            if a.rows() != self.dim() || a.cols() != self.dim() {
                return Err(Error::Input("action matrix has wrong size".into()));
            }
            for r in 0..self.dim() {
                for c in 0..self.dim() {
                    if !a[(r, c)].is_zero() && self.weights[r] != self.weights[c] + n.weights[i] {
                        return Err(Error::Input(format!("action of basis element {i} breaks the weights")));
                    }
                }
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                let br = n.algebra.bracket_basis(i, j);
                let mut lhs = Matrix::zeros(self.dim(), self.dim());
                for (k, c) in br.iter().enumerate() {
                    if !c.is_zero() {
                        lhs = &lhs + &self.action[k].scale(c);
                    }
                }
                if lhs != self.action[i].commutator(&self.action[j]) {
                    return Err(Error::Input(format!("not a representation on the pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Basis of `C^k(h)`: pairs `(subset, module index)`.
fn cochain_basis(n: &WeightedAlgebra, m: &Module, k: usize, h: i64) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for s in subsets(n.algebra.dim(), k) {
        let ws: i64 = s.iter().map(|&i| n.weights[i]).sum();
        for (v, &wv) in m.weights.iter().enumerate() {
            if wv - ws == h {
                out.push((s.clone(), v));
            }
        }
    }
    out
}

/// Matrix of `d: C^k(h) → C^{k+1}(h)`.
pub fn differential(n: &WeightedAlgebra, m: &Module, k: usize, h: i64) -> Matrix {
    let src = cochain_basis(n, m, k, h);
    let dst = cochain_basis(n, m, k + 1, h);
    let src_idx: BTreeMap<(Vec<usize>, usize), usize> = src.iter().cloned().enumerate().map(|(a, b)| (b, a)).collect();
    let mut d = Matrix::zeros(dst.len(), src.len());
    // group target rows by subset
    let mut targets: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for (row, (t, v)) in dst.iter().enumerate() {
        targets.entry(t.clone()).or_default().push((row, *v));
    }
    for (t, rows) in &targets {
        // ρ(x_i) ω(..x̂_i..)
        for (i, &ti) in t.iter().enumerate() {
            let s: Vec<usize> = t.iter().copied().filter(|&x| x != ti).collect();
            let sign = if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            for &(row, v) in rows {
                for w in 0..m.dim() {
                    let a = &m.action[ti][(v, w)];
                    if a.is_zero() {
                        continue;
                    }
                    if let Some(&col) = src_idx.get(&(s.clone(), w)) {
                        d[(row, col)] += a * &sign;
                    }
                }
            }
        }
        // ω([x_i, x_j], ..)
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let br = n.algebra.bracket_basis(t[i], t[j]);
                let rest: Vec<usize> = t.iter().copied().filter(|&x| x != t[i] && x != t[j]).collect();
                let base_sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                for (l, c) in br.iter().enumerate() {
                    if c.is_zero() || rest.contains(&l) {
                        continue;
                    }
                    let pos = rest.iter().filter(|&&x| x < l).count();
                    let mut s = rest.clone();
                    s.insert(pos, l);
                    let sign = base_sign * if pos % 2 == 0 { 1 } else { -1 };
                    for &(row, v) in rows {
                        if let Some(&col) = src_idx.get(&(s.clone(), v)) {
                            d[(row, col)] += c * &Scalar::int(sign);
                        }
                    }
                }
            }
        }
    }
    d
}

fn check_inputs(n: &WeightedAlgebra, m: &Module) -> Result<()> {
    if n.weights.len() != n.algebra.dim() {
        return Err(Error::Input("one weight per basis element of n".into()));
    }
    for i in 0..n.algebra.dim() {
        for j in 0..n.algebra.dim() {
            for (k, c) in n.algebra.bracket_basis(i, j).iter().enumerate() {
                if !c.is_zero() && n.weights[k] != n.weights[i] + n.weights[j] {
                    return Err(Error::Input("bracket of n breaks the weights".into()));
                }
            }
        }
    }
    m.check(n)
}

/// `H^k` of `n` with values in `m`, restricted to homogeneity `h`.
pub fn ce_cohomology(n: &WeightedAlgebra, m: &Module, degree: usize, h: i64) -> Result<CohomologyResult> {
    if degree > 2 {
        return Err(Error::Input(format!("degree {degree} unsupported; use 0, 1 or 2")));
    }
    check_inputs(n, m)?;
    Ok(cohomology_unchecked(n, m, degree, h))
}

fn cohomology_unchecked(n: &WeightedAlgebra, m: &Module, degree: usize, h: i64) -> CohomologyResult {
    let dk = differential(n, m, degree, h);
    let rank_k = if dk.rows() == 0 || dk.cols() == 0 { 0 } else { dk.rank() };
    let rank_prev = if degree == 0 {
        0
    } else {
        let dp = differential(n, m, degree - 1, h);
        if dp.rows() == 0 || dp.cols() == 0 {
            0
        } else {
            dp.rank()
        }
    };
    let cochain_dim = cochain_basis(n, m, degree, h).len();
    CohomologyResult { degree, homogeneity: h, dim: cochain_dim - rank_k - rank_prev, cochain_dim }
}

/// Verifies `d ∘ d = 0` for degrees `0..=top` and the Euler characteristic identity over the
/// full complex at homogeneity `h`.
pub fn check_complex(n: &WeightedAlgebra, m: &Module, h: i64) -> Result<()> {
    check_inputs(n, m)?;
    let top = n.algebra.dim();
    for k in 0..top.saturating_sub(1) {
        let d1 = differential(n, m, k, h);
        let d2 = differential(n, m, k + 1, h);
        if d1.cols() > 0 && d2.rows() > 0 && !(&d2 * &d1).is_zero() {
            return Err(Error::Consistency(format!("d∘d ≠ 0 at degree {k}")));
        }
    }
    let mut chi_c = 0i64;
    let mut chi_h = 0i64;
    for k in 0..=top {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let c = cohomology_unchecked(n, m, k, h);
        chi_c += sign * c.cochain_dim as i64;
        chi_h += sign * c.dim as i64;
    }
    if chi_c != chi_h {
        return Err(Error::Consistency(format!("Euler characteristic mismatch {chi_c} vs {chi_h}")));
    }
    Ok(())
}

/// Which weight each bidegree `(a, b)` carries in the cohomology grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeightRule {
    /// `a + b`
    Total,
    /// `a`
    First,
    /// The pair `(a, b)` packed as `a·BIGRADED_BASE + b`; select a bihomogeneity with
    /// [`bihomogeneity`].
    Bigraded,
}

/// Packing base for [`WeightRule::Bigraded`]; second degrees of cochains stay well inside ±BASE/2.
pub const BIGRADED_BASE: i64 = 1 << 16;

/// The packed homogeneity `(k, l)` under [`WeightRule::Bigraded`].
pub fn bihomogeneity(k: i64, l: i64) -> i64 {
    k * BIGRADED_BASE + l
}

impl WeightRule {
    pub fn weight(self, (a, b): (i64, i64)) -> i64 {
        match self {
            WeightRule::Total => a + b,
            WeightRule::First => a,
            WeightRule::Bigraded => bihomogeneity(a, b),
        }
    }
}

/// `n = g_− ⊗ C ⊕ g_{0,−1}` inside `g ⊗ C` with the adjoint module `g ⊗ C`.
pub fn desk_complex(alg: &RealizedAlgebra, rule: WeightRule) -> Result<(WeightedAlgebra, Module)> {
    let c = &alg.complex;
    let bd = |i: usize| c.basis()[i].bidegree.expect("bigraded");
    let n_idx = c.indices_where(|b| {
        let (a, bb) = b.bidegree.expect("bigraded");
        a < 0 || (a, bb) == (0, -1)
    });
    let algebra = c.subalgebra(&n_idx)?;
    let weights = n_idx.iter().map(|&i| rule.weight(bd(i))).collect();
    let action = n_idx.iter().map(|&i| c.ad(i)).collect();
    let mweights = (0..c.dim()).map(|i| rule.weight(bd(i))).collect();
    Ok((WeightedAlgebra { algebra, weights }, Module { weights: mweights, action }))
}

/// `g_− ⊗ C ⊕ g_{0,−1}` (optionally with `g_{0,0}`) graded by `a + b`, as a prolongation base.
pub fn complex_base(alg: &RealizedAlgebra, with_g00: bool) -> Result<GradedLieAlgebra> {
    let c = &alg.complex;
    let idx = c.indices_where(|b| {
        let (a, bb) = b.bidegree.expect("bigraded");
        a < 0 || (a, bb) == (0, -1) || (with_g00 && (a, bb) == (0, 0))
    });
    let sub = c.subalgebra(&idx)?;
    let basis: Vec<crate::liealg::BasisElement> = sub
        .basis()
        .iter()
        .map(|b| {
            let (a, bb) = b.bidegree.expect("bigraded");
            crate::liealg::BasisElement::new(b.name.clone(), a + bb)
        })
        .collect();
    let n = sub.dim();
    let table = (0..n).map(|i| (0..n).map(|j| sub.bracket_basis(i, j)).collect()).collect();
    GradedLieAlgebra::from_dense(basis, table)
}
