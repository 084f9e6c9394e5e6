//! Admissible bigradings of complex simple Lie algebras.
//!
//! A pair `(Σ1, Σ2)` is admissible when the bigrading it induces has exactly the component
//! pattern required of a 2-nondegenerate model: `g_{-1}` splits as `g_{-1,-1} ⊕ g_{-1,0}`,
//! `g_{-2} = g_{-2,-1}`, `g_0` has `b ∈ {-1, 0, 1}`, and the combined grading by `Σ1 ∪ Σ2`
//! puts only `g_{-2,-1}` in degree -3 and only `g_{-3,-1}` in degree -4.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::rootsys::{
    bigrade, build_root_system, Bidegree, Family, Root, RootSystem, RootSystemType, SigmaSet,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// `a = 0` forces `b ∈ {-1, 0, 1}`
    DegreeZero,
    /// `a = -1` forces `b ∈ {-1, 0}`
    DegreeMinusOne,
    /// `a = -2` forces `b = -1`
    DegreeMinusTwo,
    /// combined height -3 only at `(-2, -1)`
    CombinedMinusThree,
    /// combined height -4 only at `(-3, -1)`
    CombinedMinusFour,
    /// `Σ1` must give a grading of depth at least two
    Depth,
    /// `|Σ2| = 1`
    SingleSigma2,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::DegreeZero => "a=0 => b in {-1,0,1}",
            Condition::DegreeMinusOne => "a=-1 => b in {-1,0}",
            Condition::DegreeMinusTwo => "a=-2 => b=-1",
            Condition::CombinedMinusThree => "a+b=-3 => (a,b)=(-2,-1)",
            Condition::CombinedMinusFour => "a+b=-4 => (a,b)=(-3,-1)",
            Condition::Depth => "depth of sigma1 grading >= 2",
            Condition::SingleSigma2 => "|sigma2| = 1",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub witness: Option<Root>,
    pub bidegree: Option<Bidegree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub violations: Vec<Violation>,
}

/// Root-level admissibility test. Only negative roots are inspected; the positive side
/// follows by the symmetry `(a, b)(-α) = -(a, b)(α)`.
pub fn check_admissible(
    rs: &RootSystem,
    sigma1: &SigmaSet,
    sigma2: &SigmaSet,
) -> Result<AdmissibilityReport> {
    let bg = bigrade(rs, sigma1, sigma2)?;
    let mut violations = Vec::new();
    let mut first = BTreeMap::<Condition, (Root, Bidegree)>::new();
    let mut depth_two = false;
    for (root, (a, b)) in bg.assignment() {
        if root.is_positive() {
            continue;
        }
        let (a, b) = (*a, *b);
        if a == -2 {
            depth_two = true;
        }
        let mut bad = Vec::new();
        if a == 0 && !(-1..=1).contains(&b) {
            bad.push(Condition::DegreeZero);
        }
        if a == -1 && !(-1..=0).contains(&b) {
            bad.push(Condition::DegreeMinusOne);
        }
        if a == -2 && b != -1 {
            bad.push(Condition::DegreeMinusTwo);
        }
        if a + b == -3 && (a, b) != (-2, -1) {
            bad.push(Condition::CombinedMinusThree);
        }
        if a + b == -4 && (a, b) != (-3, -1) {
            bad.push(Condition::CombinedMinusFour);
        }
        for c in bad {
            first.entry(c).or_insert_with(|| (root.clone(), (a, b)));
        }
    }
    for (condition, (root, deg)) in first {
        violations.push(Violation { condition, witness: Some(root), bidegree: Some(deg) });
    }
    if !depth_two {
        violations.push(Violation { condition: Condition::Depth, witness: None, bidegree: None });
    }
    if sigma2.len() != 1 {
        violations.push(Violation {
            condition: Condition::SingleSigma2,
            witness: None,
            bidegree: None,
        });
    }
    violations.sort_by_key(|v| v.condition);
    Ok(AdmissibilityReport { admissible: violations.is_empty(), violations })
}

/// Positive roots of the subsystem spanned by a subset of simple roots, expressed in the
/// full simple-root basis. Uses the fact that a root with support in the subset is a root of
/// the subsystem.
fn subsystem_roots(rs: &RootSystem, nodes: &BTreeSet<usize>) -> Vec<Root> {
    rs.positive_roots()
        .iter()
        .filter(|r| r.coeffs().iter().enumerate().all(|(i, &c)| c == 0 || nodes.contains(&(i + 1))))
        .cloned()
        .collect()
}

fn components(rs: &RootSystem, nodes: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let cartan = rs.cartan_matrix();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in nodes {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if !comp.insert(v) {
                continue;
            }
            for &w in nodes {
                if w != v && cartan[v - 1][w - 1] != 0 && !comp.contains(&w) {
                    stack.push(w);
                }
            }
        }
        seen.extend(comp.iter().copied());
        out.push(comp);
    }
    out
}

/// Simple paths in the Dynkin diagram between every ordered pair of nodes.
fn dynkin_paths(rs: &RootSystem) -> Vec<Vec<usize>> {
    let n = rs.rank();
    let cartan = rs.cartan_matrix();
    let mut paths = Vec::new();
    fn walk(v: usize, path: &mut Vec<usize>, n: usize, cartan: &[Vec<i64>], out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        for w in 1..=n {
            if w != v && cartan[v - 1][w - 1] != 0 && !path.contains(&w) {
                path.push(w);
                walk(w, path, n, cartan, out);
                path.pop();
            }
        }
    }
    for v in 1..=n {
        walk(v, &mut vec![v], n, cartan, &mut paths);
    }
    paths
}

/// Diagram-level formulation: alternation of `Σ2` with the other marked nodes along every
/// path, `|1|`-gradings on the pieces left after deleting either set, depth at least two,
/// and the combined-height checks at -3 and -4.
pub fn alternation_predicate(rs: &RootSystem, sigma1: &SigmaSet, sigma2: &SigmaSet) -> bool {
    if sigma2.len() != 1 || sigma1.indices().any(|i| sigma2.contains(i)) {
        return false;
    }
    let marked: BTreeSet<usize> = sigma1.indices().chain(sigma2.indices()).collect();
    for path in dynkin_paths(rs) {
        let flags: Vec<bool> =
            path.iter().filter(|v| marked.contains(v)).map(|&v| sigma2.contains(v)).collect();
        if flags.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
    }
    let all: BTreeSet<usize> = (1..=rs.rank()).collect();
    let one_graded = |removed: &SigmaSet, kept: &SigmaSet| {
        let rest: BTreeSet<usize> = all.iter().copied().filter(|&i| !removed.contains(i)).collect();
        components(rs, &rest).into_iter().all(|comp| {
            let picked: Vec<usize> = kept.indices().filter(|i| comp.contains(i)).collect();
            if picked.len() > 1 {
                return false;
            }
            subsystem_roots(rs, &comp)
                .iter()
                .all(|r| picked.iter().all(|&i| r.coeffs()[i - 1] <= 1))
        })
    };
    if !one_graded(sigma2, sigma1) || !one_graded(sigma1, sigma2) {
        return false;
    }
    let highest = rs.highest_root();
    if highest.height_over(sigma1) < 2 {
        return false;
    }
    rs.positive_roots().iter().all(|r| {
        let (a, b) = (r.height_over(sigma1), r.height_over(sigma2));
        match a + b {
            3 => (a, b) == (2, 1),
            4 => (a, b) == (3, 1),
            _ => true,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CatalogEntry {
    pub root_type: RootSystemType,
    pub sigma1: SigmaSet,
    pub sigma2: SigmaSet,
    pub dims: BTreeMap<Bidegree, usize>,
}

#[derive(Serialize, Deserialize)]
struct CatalogEntryRepr {
    family: Family,
    rank: usize,
    sigma1: Vec<usize>,
    sigma2: Vec<usize>,
    dims: BTreeMap<String, usize>,
}

impl Serialize for CatalogEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CatalogEntryRepr {
            family: self.root_type.family(),
            rank: self.root_type.rank(),
            sigma1: self.sigma1.to_vec(),
            sigma2: self.sigma2.to_vec(),
            dims: self.dims.iter().map(|(&(a, b), &d)| (format!("{a},{b}"), d)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CatalogEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CatalogEntryRepr::deserialize(d)?;
        let ty = RootSystemType::new(r.family, r.rank).map_err(D::Error::custom)?;
        let sigma1 = SigmaSet::new(r.sigma1, r.rank).map_err(D::Error::custom)?;
        let sigma2 = SigmaSet::new(r.sigma2, r.rank).map_err(D::Error::custom)?;
        let mut dims = BTreeMap::new();
        for (k, v) in r.dims {
            let (a, b) = k.split_once(',').ok_or_else(|| D::Error::custom("bad dims key"))?;
            let a: i64 = a.trim().parse().map_err(D::Error::custom)?;
            let b: i64 = b.trim().parse().map_err(D::Error::custom)?;
            dims.insert((a, b), v);
        }
        Ok(CatalogEntry { root_type: ty, sigma1, sigma2, dims })
    }
}

impl CatalogEntry {
    pub fn key(&self) -> Instance {
        Instance {
            family: self.root_type.family(),
            rank: self.root_type.rank(),
            sigma1: self.sigma1.to_vec(),
            sigma2: self.sigma2.to_vec(),
        }
    }
}

/// A bare `(type, Σ1, Σ2)` triple used for comparisons.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub family: Family,
    pub rank: usize,
    pub sigma1: Vec<usize>,
    pub sigma2: Vec<usize>,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} {:?} {:?}", self.family, self.rank, self.sigma1, self.sigma2)
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub raw: Vec<CatalogEntry>,
    pub canonical: Vec<CatalogEntry>,
}

/// Exhaustive scan over singleton `Σ2` and nonempty disjoint `Σ1`.
pub fn enumerate_admissible(ty: RootSystemType) -> Catalog {
    let rs = build_root_system(ty);
    let n = ty.rank();
    let mut raw = Vec::new();
    for t in 1..=n {
        let sigma2 = SigmaSet::new([t], n).expect("valid index");
        let others: Vec<usize> = (1..=n).filter(|&i| i != t).collect();
        for mask in 1u32..(1 << others.len()) {
            let s1: Vec<usize> = others
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &i)| i)
                .collect();
            let sigma1 = SigmaSet::new(s1, n).expect("valid indices");
            let report = check_admissible(&rs, &sigma1, &sigma2).expect("disjoint by construction");
            if report.admissible {
                raw.push(entry(&rs, sigma1, sigma2.clone()));
            }
        }
    }
    raw.sort();
    let mut canonical: Vec<CatalogEntry> = raw.iter().map(canonicalize).collect();
    canonical.sort();
    canonical.dedup();
    Catalog { raw, canonical }
}

fn entry(rs: &RootSystem, sigma1: SigmaSet, sigma2: SigmaSet) -> CatalogEntry {
    let dims = bigrade(rs, &sigma1, &sigma2).expect("disjoint").component_dims().clone();
    CatalogEntry { root_type: rs.root_type(), sigma1, sigma2, dims }
}

/// Lexicographically smallest `(Σ1, Σ2)` in the orbit of the diagram automorphism group.
pub fn canonicalize(e: &CatalogEntry) -> CatalogEntry {
    let best = e
        .root_type
        .diagram_automorphisms()
        .iter()
        .map(|p| (e.sigma1.map(p), e.sigma2.map(p)))
        .min_by(|x, y| (x.0.to_vec(), x.1.to_vec()).cmp(&(y.0.to_vec(), y.1.to_vec())))
        .expect("identity always present");
    CatalogEntry { root_type: e.root_type, sigma1: best.0, sigma2: best.1, dims: e.dims.clone() }
}

pub fn canonical_instance(inst: &Instance) -> Result<Instance> {
    let ty = RootSystemType::new(inst.family, inst.rank)?;
    let s1 = SigmaSet::new(inst.sigma1.iter().copied(), inst.rank)?;
    let s2 = SigmaSet::new(inst.sigma2.iter().copied(), inst.rank)?;
    let rs = build_root_system(ty);
    let dims = match bigrade(&rs, &s1, &s2) {
        Ok(bg) => bg.component_dims().clone(),
        Err(_) => BTreeMap::new(),
    };
    Ok(canonicalize(&CatalogEntry { root_type: ty, sigma1: s1, sigma2: s2, dims }).key())
}

/// Types compared against the table transcription.
pub fn standard_types(rank_bound: usize) -> Vec<RootSystemType> {
    let mut out = Vec::new();
    let push = |out: &mut Vec<RootSystemType>, f, n| {
        if let Ok(t) = RootSystemType::new(f, n) {
            out.push(t);
        }
    };
    for n in 1..=rank_bound {
        push(&mut out, Family::A, n);
    }
    for n in 2..=rank_bound {
        push(&mut out, Family::B, n);
    }
    for n in 2..=rank_bound {
        push(&mut out, Family::C, n);
    }
    for n in 4..=rank_bound {
        push(&mut out, Family::D, n);
    }
    push(&mut out, Family::G, 2);
    push(&mut out, Family::F, 4);
    for n in 6..=8 {
        push(&mut out, Family::E, n);
    }
    out
}

// ---------------------------------------------------------------------------------------
// Table transcriptions

/// Either a literal integer or a linear expression in row variables such as `"r+2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexExpr {
    Lit(i64),
    Expr(String),
}

impl fmt::Display for IndexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexExpr::Lit(v) => write!(f, "{v}"),
            IndexExpr::Expr(s) => f.write_str(s),
        }
    }
}

impl IndexExpr {
    fn eval(&self, env: &BTreeMap<String, i64>) -> Result<i64> {
        match self {
            IndexExpr::Lit(v) => Ok(*v),
            IndexExpr::Expr(s) => eval_linear(s, env),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Labeling {
    #[default]
    Bourbaki,
    /// Exceptional labeling: nodes `1..n-1` along the longest path of the diagram, node `n`
    /// the branch node.
    Chain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: Family,
    pub rank: IndexExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    pub sigma1: Option<Vec<IndexExpr>>,
    pub sigma2: Option<Vec<IndexExpr>>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicitConstraint {
    pub constraints: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_form: Option<String>,
    pub algebra: AlgebraSpec,
    pub sigma1: Vec<IndexExpr>,
    pub sigma2: Vec<IndexExpr>,
    #[serde(default)]
    pub constraints: String,
    /// Ordered `(name, low, high)` ranges; later bounds may use earlier names.
    #[serde(default)]
    pub vars: Vec<(String, IndexExpr, IndexExpr)>,
    #[serde(default)]
    pub labeling: Labeling,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub erratum: Option<Erratum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implicit: Option<ImplicitConstraint>,
    /// Carried verbatim, not interpreted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restrictions: Option<String>,
}

pub fn load_table(path: &Path) -> Result<Vec<TableRow>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_table(&text)
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    let rows: Vec<TableRow> =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("table: {e}")))?;
    for row in &rows {
        check_constraint_syntax(&row.constraints)?;
        if let Some(imp) = &row.implicit {
            check_constraint_syntax(&imp.constraints)?;
        }
    }
    Ok(rows)
}

fn check_constraint_syntax(s: &str) -> Result<()> {
    let env = BTreeMap::new();
    for clause in clauses(s) {
        // evaluate with an environment that defaults every name to zero
        eval_clause(clause, &env, true)?;
    }
    Ok(())
}

/// Bourbaki index of a node given in the chain labeling.
pub fn chain_to_bourbaki(family: Family, rank: usize, i: usize) -> Result<usize> {
    let map: &[usize] = match (family, rank) {
        (Family::E, 6) => &[1, 3, 4, 5, 6, 2],
        (Family::E, 7) => &[7, 6, 5, 4, 3, 1, 2],
        (Family::E, 8) => &[8, 7, 6, 5, 4, 3, 1, 2],
        (Family::F, 4) | (Family::G, 2) => &[1, 2, 3, 4][..rank],
        _ => return Err(Error::Input(format!("chain labeling undefined for {family}{rank}"))),
    };
    map.get(i.wrapping_sub(1))
        .copied()
        .ok_or_else(|| Error::Input(format!("node {i} outside {family}{rank}")))
}

/// One concrete instance of a table row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expanded {
    pub row: usize,
    pub bindings: BTreeMap<String, i64>,
    pub instance: Instance,
    pub erratum_applied: bool,
}

/// Instantiates every row at all variable values with complex rank at most `rank_bound`.
/// Rows whose index sets collapse or leave `1..=rank` are skipped.
pub fn expand_rows(rows: &[TableRow], rank_bound: usize) -> Result<Vec<Expanded>> {
    let mut out = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut envs = vec![BTreeMap::new()];
        for (name, lo, hi) in &row.vars {
            let mut next = Vec::new();
            for env in envs {
                let (lo, hi) = (lo.eval(&env)?, hi.eval(&env)?);
                for v in lo..=hi {
                    let mut e = env.clone();
                    e.insert(name.clone(), v);
                    next.push(e);
                }
            }
            envs = next;
        }
        for env in envs {
            if !constraints_hold(&row.constraints, &env)? {
                continue;
            }
            if let Some(imp) = &row.implicit {
                if !constraints_hold(&imp.constraints, &env)? {
                    continue;
                }
            }
            let rank = row.algebra.rank.eval(&env)?;
            if rank < 1 || rank as usize > rank_bound {
                continue;
            }
            let rank = rank as usize;
            if RootSystemType::new(row.algebra.family, rank).is_err() {
                continue;
            }
            let (s1, s2, erratum_applied) = match &row.erratum {
                Some(er) => (
                    er.sigma1.as_ref().unwrap_or(&row.sigma1),
                    er.sigma2.as_ref().unwrap_or(&row.sigma2),
                    true,
                ),
                None => (&row.sigma1, &row.sigma2, false),
            };
            let resolve = |set: &[IndexExpr]| -> Result<Option<Vec<usize>>> {
                let mut v = BTreeSet::new();
                for e in set {
                    let i = e.eval(&env)?;
                    if i < 1 || i as usize > rank {
                        return Ok(None);
                    }
                    let i = match row.labeling {
                        Labeling::Bourbaki => i as usize,
                        Labeling::Chain => chain_to_bourbaki(row.algebra.family, rank, i as usize)?,
                    };
                    v.insert(i);
                }
                Ok((v.len() == set.len()).then(|| v.into_iter().collect()))
            };
            let (Some(sigma1), Some(sigma2)) = (resolve(s1)?, resolve(s2)?) else {
                continue;
            };
            out.push(Expanded {
                row: idx,
                bindings: env,
                instance: Instance { family: row.algebra.family, rank, sigma1, sigma2 },
                erratum_applied,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GoldenComparison {
    pub types_checked: usize,
    /// Canonical catalog entries no table row produces.
    pub missing_from_table: Vec<Instance>,
    /// Canonical table instances the enumeration does not produce.
    pub missing_from_catalog: Vec<Instance>,
    pub errata: Vec<String>,
}

impl GoldenComparison {
    pub fn matches(&self) -> bool {
        self.missing_from_table.is_empty() && self.missing_from_catalog.is_empty()
    }
}

/// Compares the enumeration against an expanded table, both canonicalized.
pub fn compare_with_table(types: &[RootSystemType], rows: &[TableRow]) -> Result<GoldenComparison> {
    let bound = types.iter().map(|t| t.rank()).max().unwrap_or(0);
    let expanded = expand_rows(rows, bound)?;
    let mut report = GoldenComparison { types_checked: types.len(), ..Default::default() };
    for (i, row) in rows.iter().enumerate() {
        if let Some(er) = &row.erratum {
            let used = expanded.iter().any(|e| e.row == i && e.erratum_applied);
            report.errata.push(format!(
                "row {i} ({}{}): {}{}",
                row.algebra.family,
                row.algebra.rank,
                er.note,
                if used { "" } else { " (not instantiated)" }
            ));
        }
    }
    for &ty in types {
        let catalog: BTreeSet<Instance> =
            enumerate_admissible(ty).canonical.iter().map(CatalogEntry::key).collect();
        let mut table = BTreeSet::new();
        for e in expanded
            .iter()
            .filter(|e| e.instance.family == ty.family() && e.instance.rank == ty.rank())
        {
            table.insert(canonical_instance(&e.instance)?);
        }
        report.missing_from_table.extend(catalog.difference(&table).cloned());
        report.missing_from_catalog.extend(table.difference(&catalog).cloned());
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossCheckMiss {
    pub row: usize,
    pub real_form: Option<String>,
    pub bindings: BTreeMap<String, i64>,
    pub instance: Instance,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub rows: usize,
    pub instances: usize,
    pub misses: Vec<CrossCheckMiss>,
}

/// Every instantiated real-table row must land in the canonical catalog of its
/// complexification.
pub fn crosscheck_real_tables(rows: &[TableRow], rank_bound: usize) -> Result<CrossCheckReport> {
    let expanded = expand_rows(rows, rank_bound)?;
    let mut catalogs: BTreeMap<(Family, usize), BTreeSet<Instance>> = BTreeMap::new();
    let mut misses = Vec::new();
    for e in &expanded {
        let key = (e.instance.family, e.instance.rank);
        let cat = catalogs.entry(key).or_insert_with(|| {
            let ty = RootSystemType::new(key.0, key.1).expect("validated during expansion");
            enumerate_admissible(ty).canonical.iter().map(CatalogEntry::key).collect()
        });
        let canon = canonical_instance(&e.instance)?;
        if !cat.contains(&canon) {
            misses.push(CrossCheckMiss {
                row: e.row,
                real_form: rows[e.row].real_form.clone(),
                bindings: e.bindings.clone(),
                instance: e.instance.clone(),
            });
        }
    }
    Ok(CrossCheckReport { rows: rows.len(), instances: expanded.len(), misses })
}

// ---------------------------------------------------------------------------------------
// Tiny constraint language: comma-separated clauses, each either a comparison chain such as
// `1<r<n-1` / `r<=s` / `n=2m+1` or a parity test `even(e)` / `odd(e)`.

fn clauses(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|c| !c.is_empty())
}

fn constraints_hold(s: &str, env: &BTreeMap<String, i64>) -> Result<bool> {
    for c in clauses(s) {
        if !eval_clause(c, env, false)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn eval_clause(c: &str, env: &BTreeMap<String, i64>, lenient: bool) -> Result<bool> {
    let lin = |e: &str| if lenient { eval_linear_lenient(e) } else { eval_linear(e, env) };
    for (tag, want) in [("even(", 0), ("odd(", 1)] {
        if let Some(inner) = c.strip_prefix(tag).and_then(|r| r.strip_suffix(')')) {
            return Ok(lin(inner)?.rem_euclid(2) == want);
        }
    }
    let mut terms = Vec::new();
    let mut ops = Vec::new();
    let mut cur = String::new();
    let mut chars = c.chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '<' | '>' | '=' => {
                let mut op = ch.to_string();
                if chars.peek() == Some(&'=') {
                    op.push(chars.next().unwrap());
                }
                terms.push(std::mem::take(&mut cur));
                ops.push(op);
            }
            _ => cur.push(ch),
        }
    }
    terms.push(cur);
    if ops.is_empty() {
        return Err(Error::Input(format!("constraint {c:?} has no comparison")));
    }
    let vals: Vec<i64> = terms.iter().map(|t| lin(t)).collect::<Result<_>>()?;
    let mut ok = true;
    for (k, op) in ops.iter().enumerate() {
        let (a, b) = (vals[k], vals[k + 1]);
        ok &= match op.as_str() {
            "<" => a < b,
            "<=" => a <= b,
            ">" => a > b,
            ">=" => a >= b,
            "=" | "==" => a == b,
            other => return Err(Error::Input(format!("bad operator {other:?}"))),
        };
    }
    Ok(ok)
}

fn eval_linear_lenient(s: &str) -> Result<i64> {
    let env: BTreeMap<String, i64> = BTreeMap::new();
    eval_linear_with(s, &|_| Some(0), &env)
}

/// Evaluates sums of terms `k`, `x`, `kx`, `k*x` with `+`/`-`.
pub fn eval_linear(s: &str, env: &BTreeMap<String, i64>) -> Result<i64> {
    eval_linear_with(s, &|name| env.get(name).copied(), env)
}

fn eval_linear_with(
    s: &str,
    lookup: &dyn Fn(&str) -> Option<i64>,
    _env: &BTreeMap<String, i64>,
) -> Result<i64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Input("empty expression".into()));
    }
    let mut total = 0i64;
    let mut term = String::new();
    let mut sign = 1i64;
    let flush = |term: &str, sign: i64, total: &mut i64| -> Result<()> {
        if term.is_empty() {
            return Err(Error::Input(format!("dangling operator in {s:?}")));
        }
        let split = term.find(|c: char| c.is_ascii_alphabetic()).unwrap_or(term.len());
        let (num, name) = term.split_at(split);
        let num = num.trim_end_matches('*');
        let k: i64 = if num.is_empty() {
            1
        } else {
            num.parse().map_err(|_| Error::Input(format!("bad coefficient in {term:?}")))?
        };
        let v = if name.is_empty() {
            1
        } else {
            if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Input(format!("bad name {name:?}")));
            }
            lookup(name).ok_or_else(|| Error::Input(format!("unbound variable {name:?}")))?
        };
        *total += sign * k * v;
        Ok(())
    };
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            flush(&term, sign, &mut total)?;
            term.clear();
            sign = if ch == '-' { -1 } else { 1 };
        } else if ch == '-' && i == 0 {
            sign = -1;
        } else if ch == '+' && i == 0 {
        } else {
            term.push(ch);
        }
    }
    flush(&term, sign, &mut total)?;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, n: usize) -> RootSystem {
        build_root_system(RootSystemType::new(f, n).unwrap())
    }

    fn sig(v: &[usize], n: usize) -> SigmaSet {
        SigmaSet::new(v.iter().copied(), n).unwrap()
    }

    #[test]
    fn sl4_examples() {
        let r = rs(Family::A, 3);
        assert!(check_admissible(&r, &sig(&[1, 3], 3), &sig(&[2], 3)).unwrap().admissible);
        let bad = check_admissible(&r, &sig(&[1, 2], 3), &sig(&[3], 3)).unwrap();
        assert!(!bad.admissible);
        let v = bad
            .violations
            .iter()
            .find(|v| v.condition == Condition::DegreeMinusTwo)
            .unwrap();
        assert_eq!(v.witness.as_ref().unwrap().coeffs(), &[-1, -1, 0]);
        assert_eq!(v.bidegree, Some((-2, 0)));
    }

    #[test]
    fn sp4_admissible() {
        let r = rs(Family::C, 2);
        assert!(check_admissible(&r, &sig(&[1], 2), &sig(&[2], 2)).unwrap().admissible);
    }

    #[test]
    fn overlap_is_an_error() {
        let r = rs(Family::A, 3);
        assert!(matches!(
            check_admissible(&r, &sig(&[1], 3), &sig(&[1], 3)),
            Err(Error::OverlappingSigma(_))
        ));
    }

    #[test]
    fn two_element_sigma2_flagged() {
        let r = rs(Family::A, 5);
        let rep = check_admissible(&r, &sig(&[1, 5], 5), &sig(&[2, 4], 5)).unwrap();
        assert!(rep.violations.iter().any(|v| v.condition == Condition::SingleSigma2));
    }

    #[test]
    fn small_enumerations() {
        let keys = |f, n| -> Vec<(Vec<usize>, Vec<usize>)> {
            enumerate_admissible(RootSystemType::new(f, n).unwrap())
                .canonical
                .iter()
                .map(|e| (e.sigma1.to_vec(), e.sigma2.to_vec()))
                .collect()
        };
        assert_eq!(keys(Family::G, 2), vec![(vec![1], vec![2])]);
        assert_eq!(keys(Family::B, 3), vec![(vec![1, 3], vec![2]), (vec![2], vec![1])]);
        assert!(keys(Family::A, 2).is_empty());
        assert_eq!(keys(Family::F, 4), vec![(vec![1, 3], vec![2]), (vec![2], vec![1])]);
    }

    #[test]
    fn canonicalize_examples() {
        let mk = |f, n, s1: &[usize], s2: &[usize]| CatalogEntry {
            root_type: RootSystemType::new(f, n).unwrap(),
            sigma1: sig(s1, n),
            sigma2: sig(s2, n),
            dims: BTreeMap::new(),
        };
        let a3 = mk(Family::A, 3, &[1, 3], &[2]);
        assert_eq!(canonicalize(&a3), a3);
        let a4 = canonicalize(&mk(Family::A, 4, &[1, 4], &[3]));
        assert_eq!((a4.sigma1.to_vec(), a4.sigma2.to_vec()), (vec![1, 4], vec![2]));
        let reps: BTreeSet<_> = [1, 3, 4]
            .iter()
            .map(|&t| canonicalize(&mk(Family::D, 4, &[2], &[t])).key())
            .collect();
        assert_eq!(reps.len(), 1);
    }

    #[test]
    fn alternation_agrees_with_root_test() {
        for ty in standard_types(6) {
            let r = build_root_system(ty);
            let n = ty.rank();
            for t in 1..=n {
                for mask in 1u32..(1 << n) {
                    if mask & (1 << (t - 1)) != 0 {
                        continue;
                    }
                    let s1: Vec<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                    let (s1, s2) = (sig(&s1, n), sig(&[t], n));
                    assert_eq!(
                        check_admissible(&r, &s1, &s2).unwrap().admissible,
                        alternation_predicate(&r, &s1, &s2),
                        "{ty} {s1} {s2}"
                    );
                }
            }
        }
    }

    #[test]
    fn canonicalization_idempotent_and_admissible() {
        for ty in standard_types(6) {
            let r = build_root_system(ty);
            for e in enumerate_admissible(ty).canonical {
                assert_eq!(canonicalize(&e), e);
                assert!(check_admissible(&r, &e.sigma1, &e.sigma2).unwrap().admissible);
            }
        }
    }

    #[test]
    fn linear_expressions() {
        let env: BTreeMap<String, i64> = [("r".to_string(), 3), ("n".to_string(), 7), ("q".to_string(), 1)]
            .into_iter()
            .collect();
        assert_eq!(eval_linear("r+2", &env).unwrap(), 5);
        assert_eq!(eval_linear("2r-n", &env).unwrap(), -1);
        assert_eq!(eval_linear("-n+2*q", &env).unwrap(), -5);
        assert!(eval_linear("x", &env).is_err());
        assert!(constraints_hold("1<r<n-1, odd(n)", &env).unwrap());
        assert!(!constraints_hold("r<q", &env).unwrap());
        assert!(constraints_hold("n=2r+q", &env).unwrap());
    }

    #[test]
    fn catalog_json_roundtrip() {
        let cat = enumerate_admissible(RootSystemType::new(Family::C, 3).unwrap());
        let s = serde_json::to_string(&cat.canonical).unwrap();
        assert!(s.contains("\"-2,-1\""));
        let back: Vec<CatalogEntry> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cat.canonical);
    }
}
