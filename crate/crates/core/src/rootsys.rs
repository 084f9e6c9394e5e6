//! Root systems of the complex simple Lie algebras and the bigradings cut out by two
//! disjoint sets of simple roots.
//!
//! Simple roots use Bourbaki numbering throughout:
//!
//! * `A_n`: chain `1 - 2 - ... - n`
//! * `B_n`: chain with `α_n` short
//! * `C_n`: chain with `α_n` long
//! * `D_n`: chain `1 - ... - (n-2)` with both `α_{n-1}` and `α_n` attached to `α_{n-2}`
//! * `E_n`: chain `1 - 3 - 4 - ... - n` with `α_2` attached to `α_4`
//! * `F_4`: `α_1, α_2` long, `α_3, α_4` short
//! * `G_2`: `α_1` short

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "G" => Family::G,
            other => return Err(Error::InvalidRootSystem(format!("unknown family {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootSystemType {
    family: Family,
    rank: usize,
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(RootSystemType { family, rank })
        } else {
            Err(Error::InvalidRootSystem(format!("{family}{rank} is not a valid type")))
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the complex simple Lie algebra of this type.
    pub fn dim(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 2),
            Family::B | Family::C => n * (2 * n + 1),
            Family::D => n * (2 * n - 1),
            Family::E => [78, 133, 248][n - 6],
            Family::F => 52,
            Family::G => 14,
        }
    }

    /// Symmetrized Gram matrix of the simple roots, scaled to integers.
    fn gram(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut g = vec![vec![0i64; n]; n];
        let mut link = |i: usize, j: usize, v: i64| {
            g[i - 1][j - 1] = v;
            g[j - 1][i - 1] = v;
        };
        match self.family {
            Family::A => {
                for i in 1..n {
                    link(i, i + 1, -1);
                }
            }
            Family::B => {
                for i in 1..n {
                    link(i, i + 1, -2);
                }
            }
            Family::C => {
                for i in 1..n - 1 {
                    link(i, i + 1, -1);
                }
                link(n - 1, n, -2);
            }
            Family::D => {
                for i in 1..n - 1 {
                    link(i, i + 1, -1);
                }
                link(n - 2, n, -1);
            }
            Family::E => {
                link(1, 3, -1);
                link(2, 4, -1);
                for i in 3..n {
                    link(i, i + 1, -1);
                }
            }
            Family::F => {
                link(1, 2, -2);
                link(2, 3, -2);
                link(3, 4, -1);
            }
            Family::G => link(1, 2, -3),
        }
        for i in 0..n {
            g[i][i] = match self.family {
                Family::A | Family::D | Family::E => 2,
                Family::B => if i + 1 == n { 2 } else { 4 },
                Family::C => if i + 1 == n { 4 } else { 2 },
                Family::F => if i < 2 { 4 } else { 2 },
                Family::G => if i == 0 { 2 } else { 6 },
            };
        }
        g
    }

    /// Permutations of `1..=rank` induced by the Dynkin diagram automorphisms, identity first.
    pub fn diagram_automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.rank;
        let id: Vec<usize> = (1..=n).collect();
        let mut out = vec![id.clone()];
        match self.family {
            Family::A if n >= 2 => out.push((1..=n).rev().collect()),
            Family::D if n == 4 => {
                // permutations of the three outer nodes 1, 3, 4 around node 2
                let outer = [1usize, 3, 4];
                for p in permutations(&outer) {
                    if p == outer {
                        continue;
                    }
                    let mut m = id.clone();
                    for (k, &o) in outer.iter().enumerate() {
                        m[o - 1] = p[k];
                    }
                    out.push(m);
                }
            }
            Family::D if n >= 5 => {
                let mut m = id.clone();
                m.swap(n - 2, n - 1);
                out.push(m);
            }
            Family::E if n == 6 => out.push(vec![6, 2, 5, 4, 3, 1]),
            _ => {}
        }
        out
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A root written in the simple-root basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Root {
    coeffs: Vec<i64>,
}

impl Root {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        let pos = coeffs.iter().all(|&c| c >= 0);
        let neg = coeffs.iter().all(|&c| c <= 0);
        if !(pos || neg) || coeffs.iter().all(|&c| c == 0) {
            return Err(Error::InvalidRootSystem(format!("mixed-sign or zero root {coeffs:?}")));
        }
        Ok(Root { coeffs })
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut coeffs = vec![0; rank];
        coeffs[i - 1] = 1;
        Root { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn negate(&self) -> Root {
        Root { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Sum of the coefficients over a set of simple-root indices (1-based).
    pub fn height_over(&self, set: &SigmaSet) -> i64 {
        set.indices().map(|i| self.coeffs[i - 1]).sum()
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: RootSystemType,
    simple_roots: Vec<Root>,
    positive_roots: Vec<Root>,
    cartan: Vec<Vec<i64>>,
}

/// Positive roots by the root-string algorithm, sorted lexicographically.
pub fn build_root_system(ty: RootSystemType) -> RootSystem {
    let n = ty.rank();
    let gram = ty.gram();
    // cartan[i][j] = 2 (α_i, α_j) / (α_j, α_j)
    let cartan: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
        .collect();
    let simple: Vec<Vec<i64>> = (1..=n).map(|i| Root::simple(n, i).coeffs).collect();
    let mut known: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut layer = simple.clone();
    let mut all = simple.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // pairing <β, α_i^∨> = Σ_j c_j cartan[j][i]
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort();
    RootSystem {
        ty,
        simple_roots: simple.into_iter().map(|coeffs| Root { coeffs }).collect(),
        positive_roots: all.into_iter().map(|coeffs| Root { coeffs }).collect(),
        cartan,
    }
}

impl RootSystem {
    pub fn root_type(&self) -> RootSystemType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank()
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Positive roots followed by their negatives.
    pub fn all_roots(&self) -> impl Iterator<Item = Root> + '_ {
        self.positive_roots
            .iter()
            .cloned()
            .chain(self.positive_roots.iter().map(Root::negate))
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots.iter().max_by_key(|r| r.height()).expect("nonempty")
    }

    pub fn contains(&self, coeffs: &[i64]) -> bool {
        let abs: Vec<i64> = coeffs.iter().map(|c| c.abs()).collect();
        let r = Root { coeffs: abs };
        self.positive_roots.binary_search(&r).is_ok()
            && (coeffs.iter().all(|&c| c >= 0) || coeffs.iter().all(|&c| c <= 0))
    }
}

/// A nonempty set of simple-root indices, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SigmaSet(BTreeSet<usize>);

impl SigmaSet {
    pub fn new(indices: impl IntoIterator<Item = usize>, rank: usize) -> Result<Self> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidSigma("empty set".into()));
        }
        if let Some(bad) = set.iter().find(|&&i| i == 0 || i > rank) {
            return Err(Error::InvalidSigma(format!("index {bad} outside 1..={rank}")));
        }
        Ok(SigmaSet(set))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }

    pub fn map(&self, perm: &[usize]) -> SigmaSet {
        SigmaSet(self.0.iter().map(|&i| perm[i - 1]).collect())
    }
}

impl fmt::Display for SigmaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| format!("a{i}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub type Bidegree = (i64, i64);

#[derive(Clone, Debug)]
pub struct Bigrading {
    assignment: Vec<(Root, Bidegree)>,
    component_dims: BTreeMap<Bidegree, usize>,
}

impl Bigrading {
    pub fn assignment(&self) -> &[(Root, Bidegree)] {
        &self.assignment
    }

    pub fn component_dims(&self) -> &BTreeMap<Bidegree, usize> {
        &self.component_dims
    }

    pub fn dim(&self, a: i64, b: i64) -> usize {
        self.component_dims.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.component_dims.values().sum()
    }

    pub fn degree_of(&self, root: &Root) -> Option<Bidegree> {
        self.assignment.iter().find(|(r, _)| r == root).map(|(_, d)| *d)
    }
}

pub fn bigrade(rs: &RootSystem, sigma1: &SigmaSet, sigma2: &SigmaSet) -> Result<Bigrading> {
    let overlap: Vec<usize> = sigma1.indices().filter(|&i| sigma2.contains(i)).collect();
    if !overlap.is_empty() {
        return Err(Error::OverlappingSigma(overlap));
    }
    let rank = rs.rank();
    if sigma1.indices().chain(sigma2.indices()).any(|i| i > rank) {
        return Err(Error::InvalidSigma(format!("index outside 1..={rank}")));
    }
    let mut component_dims = BTreeMap::new();
    component_dims.insert((0, 0), rank);
    let mut assignment = Vec::new();
    for root in rs.all_roots() {
        let deg = (root.height_over(sigma1), root.height_over(sigma2));
        *component_dims.entry(deg).or_insert(0) += 1;
        assignment.push((root, deg));
    }
    Ok(Bigrading { assignment, component_dims })
}
