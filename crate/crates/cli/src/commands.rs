use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use crlab::classify::{compare_with_table, crosscheck_real_tables, enumerate_admissible, load_table, standard_types};
use crlab::liealg::{classical_realization, graded_matrix_algebra, Classical, GradedLieAlgebra};
use crlab::linalg::Matrix;
use crlab::models::{build_model, family};
use crlab::prolong::{
    ce_cohomology, complex_base, desk_complex, first_prolongation_dims, is_heisenberg, nonpositive_part,
    bihomogeneity, tanaka_prolong, tanaka_prolong_reduced, ProlongationResult, ReductionData, WeightRule,
};
use crlab::rootsys::{Family, RootSystemType};

use crate::config::{instance_key, parse_params, Format, RunConfig};
use crate::output::{csv_text, json, Report};
use crate::CliError;

/// Text to write and whether the command's checks passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn golden_dir() -> PathBuf {
    std::env::var_os("CRLAB_GOLDEN_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("golden"))
}

fn classical(name: &str) -> Result<Classical, CliError> {
    family(name)
        .map(|f| f.tag())
        .ok_or_else(|| CliError::Input(format!("unknown family {name:?}")))
}

fn reject_format(cfg: &RunConfig, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&cfg.format) {
        Ok(())
    } else {
        Err(CliError::Input(format!("format {:?} is not available for {command}", cfg.format)))
    }
}

// ---------------------------------------------------------------------------------------

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Root system family letter (A-G); omit together with --rank to scan every type up to the rank bound.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Compare against a table transcription (default: table3.json in the golden directory).
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub check: Option<String>,
    /// Check that every row of a real-form table lands in the catalog
    /// (default: tables12.json in the golden directory).
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub crosscheck: Option<String>,
}

#[derive(Serialize)]
struct ClassifyResult {
    types: Vec<String>,
    catalog: Vec<crlab::classify::CatalogEntry>,
    raw_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<crlab::classify::GoldenComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    crosscheck: Option<crlab::classify::CrossCheckReport>,
}

fn golden_path(given: &str, default: &str) -> PathBuf {
    if given.is_empty() {
        golden_dir().join(default)
    } else {
        PathBuf::from(given)
    }
}

fn load(path: &Path) -> Result<Vec<crlab::classify::TableRow>, CliError> {
    load_table(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn classify(args: &ClassifyArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    reject_format(cfg, &[Format::Json, Format::Csv], "classify")?;
    let types = match (&args.family, args.rank) {
        (Some(f), Some(r)) => {
            if r > cfg.rank_bound {
                return Err(CliError::Input(format!("rank {r} exceeds the rank bound {}", cfg.rank_bound)));
            }
            let fam: Family = f.parse()?;
            vec![RootSystemType::new(fam, r)?]
        }
        (None, None) => standard_types(cfg.rank_bound),
        _ => return Err(CliError::Input("--family and --rank go together".into())),
    };
    let mut catalog = Vec::new();
    let mut raw_count = 0;
    for &t in &types {
        let c = enumerate_admissible(t);
        raw_count += c.raw.len();
        catalog.extend(c.canonical);
    }
    let check = match &args.check {
        Some(p) => Some(compare_with_table(&types, &load(&golden_path(p, "table3.json"))?)?),
        None => None,
    };
    let crosscheck = match &args.crosscheck {
        Some(p) => Some(crosscheck_real_tables(&load(&golden_path(p, "tables12.json"))?, cfg.rank_bound)?),
        None => None,
    };
    let passed = check.as_ref().map_or(true, |c| c.matches()) && crosscheck.as_ref().map_or(true, |c| c.misses.is_empty());
    let text = match cfg.format {
        Format::Csv => csv_text(
            &["family", "rank", "sigma1", "sigma2", "dims"],
            catalog.iter().map(|e| {
                let dims: Vec<String> = e.dims.iter().map(|(&(a, b), d)| format!("{a},{b}:{d}")).collect();
                vec![
                    e.root_type.family().to_string(),
                    e.root_type.rank().to_string(),
                    format!("{:?}", e.sigma1.to_vec()),
                    format!("{:?}", e.sigma2.to_vec()),
                    dims.join(";"),
                ]
            }),
        )?,
        _ => json(&Report {
            command: "classify",
            config: cfg,
            result: ClassifyResult {
                types: types.iter().map(|t| t.to_string()).collect(),
                catalog,
                raw_count,
                check,
                crosscheck,
            },
        })?,
    };
    Ok(Outcome { text, passed })
}

// ---------------------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Base {
    /// `g_− ⊕ g_0` of the real form, with the Heisenberg reduction when it applies.
    Real,
    /// `g_− ⊗ C ⊕ g_{0,−1}` graded by `a + b`.
    Complex,
    /// As `complex`, together with `g_{0,0}`.
    ComplexG00,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Sl,
    Sp,
    So,
}

#[derive(Args, Debug)]
pub struct ProlongArgs {
    /// Model family (SL, SU, SO_hyp, SOstar_hyp, SO_hi, SOstar_hi, SP).
    #[arg(long, conflicts_with = "form")]
    pub family: Option<String>,
    #[arg(long, default_value = "")]
    pub params: String,
    #[arg(long, value_enum, default_value = "real")]
    pub base: Base,
    /// Split matrix algebra graded by `--grading` instead of a model family.
    #[arg(long, value_enum, requires = "grading")]
    pub form: Option<Form>,
    /// Eigenvalues of the diagonal grading element, e.g. `1,1,0,-1,-1,0`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub grading: Vec<i64>,
}

#[derive(Serialize)]
struct ProlongReport {
    source: String,
    params: BTreeMap<String, i64>,
    base: Base,
    dim_g: usize,
    max_degree: i64,
    heisenberg: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_prolongation: Option<FirstProlongation>,
    prolongation: ProlongationResult,
    matches_dim_g: bool,
}

#[derive(Serialize)]
struct FirstProlongation {
    unreduced: usize,
    reduced: usize,
}

fn form_matrix(form: Form, n: usize) -> Result<Option<Matrix>, CliError> {
    Ok(match form {
        Form::Sl => None,
        Form::So => Some(Matrix::from_fn(n, n, |i, j| {
            if i + j + 1 == n {
                crlab::Scalar::one()
            } else {
                crlab::Scalar::zero()
            }
        })),
        Form::Sp => {
            if n % 2 != 0 {
                return Err(CliError::Input("sp needs an even number of grading entries".into()));
            }
            let m = n / 2;
            Some(Matrix::from_fn(n, n, |i, j| {
                if j == i + m {
                    crlab::Scalar::one()
                } else if i == j + m {
                    -crlab::Scalar::one()
                } else {
                    crlab::Scalar::zero()
                }
            }))
        }
    })
}

fn max_degree(cfg: &RunConfig, base: &GradedLieAlgebra) -> i64 {
    let depth = -base.degrees().iter().copied().min().unwrap_or(0);
    cfg.max_prolong_degree.unwrap_or(depth + 3)
}

pub fn prolong(args: &ProlongArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    reject_format(cfg, &[Format::Json, Format::Csv], "prolong")?;
    let report = if let Some(form) = args.form {
        let f = form_matrix(form, args.grading.len())?;
        let (alg, _) = graded_matrix_algebra(f.as_ref(), &args.grading)?;
        let base = alg.subalgebra(&alg.indices_where(|b| b.degree <= 0))?;
        let md = max_degree(cfg, &base);
        let r = tanaka_prolong(&base, md)?;
        let grading: Vec<String> = args.grading.iter().map(i64::to_string).collect();
        ProlongReport {
            source: format!("{form:?} grading {}", grading.join(",")).to_lowercase(),
            params: BTreeMap::new(),
            base: Base::Real,
            dim_g: alg.dim(),
            max_degree: md,
            heisenberg: is_heisenberg(&base),
            first_prolongation: None,
            matches_dim_g: r.terminated && r.total_dim == alg.dim(),
            prolongation: r,
        }
    } else {
        let name = args.family.as_deref().ok_or_else(|| CliError::Input("--family or --form is required".into()))?;
        let params = parse_params(&args.params)?;
        let alg = classical_realization(classical(name)?, &params)?;
        let (base, heis, first, r) = match args.base {
            Base::Real => {
                let base = nonpositive_part(&alg)?;
                let md = max_degree(cfg, &base);
                if is_heisenberg(&base) {
                    let red = ReductionData::from_realized(&alg)?;
                    let (unreduced, reduced) = first_prolongation_dims(&base, &red)?;
                    let r = tanaka_prolong_reduced(&base, &red, md)?;
                    (base, true, Some(FirstProlongation { unreduced, reduced }), r)
                } else {
                    let r = tanaka_prolong(&base, md)?;
                    (base, false, None, r)
                }
            }
            Base::Complex | Base::ComplexG00 => {
                let base = complex_base(&alg, args.base == Base::ComplexG00)?;
                let r = tanaka_prolong(&base, max_degree(cfg, &base))?;
                (base, false, None, r)
            }
        };
        ProlongReport {
            source: name.to_string(),
            params,
            base: args.base,
            dim_g: alg.dim(),
            max_degree: max_degree(cfg, &base),
            heisenberg: heis,
            first_prolongation: first,
            matches_dim_g: r.terminated && r.total_dim == alg.dim(),
            prolongation: r,
        }
    };
    let passed = report.matches_dim_g;
    let text = match cfg.format {
        Format::Csv => csv_text(
            &["degree", "dim"],
            report.prolongation.dims.iter().map(|(d, n)| vec![d.to_string(), n.to_string()]),
        )?,
        _ => json(&Report { command: "prolong", config: cfg, result: report })?,
    };
    Ok(Outcome { text, passed })
}

// ---------------------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Weight {
    /// Homogeneity of `g_{a,b}` is `a + b`.
    Total,
    /// Homogeneity of `g_{a,b}` is `a`.
    First,
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value = "")]
    pub params: String,
    #[arg(long)]
    pub degree: usize,
    /// A single homogeneity `h` (see `--weight`) or a bihomogeneity `k,l`.
    #[arg(long, allow_hyphen_values = true)]
    pub homogeneity: String,
    #[arg(long, value_enum, default_value = "total")]
    pub weight: Weight,
}

#[derive(Serialize)]
struct CohomologyReport {
    family: String,
    params: BTreeMap<String, i64>,
    weight: WeightRule,
    cohomology: CohomologyLine,
}

#[derive(Serialize)]
struct CohomologyLine {
    degree: usize,
    homogeneity: String,
    dim: usize,
    cochain_dim: usize,
}

fn parse_homogeneity(text: &str, weight: Weight) -> Result<(WeightRule, i64), CliError> {
    let int = |t: &str| {
        t.trim().parse::<i64>().map_err(|_| CliError::Input(format!("bad homogeneity '{text}'")))
    };
    match text.split_once(',') {
        Some((k, l)) => Ok((WeightRule::Bigraded, bihomogeneity(int(k)?, int(l)?))),
        None => {
            let rule = match weight {
                Weight::Total => WeightRule::Total,
                Weight::First => WeightRule::First,
            };
            Ok((rule, int(text)?))
        }
    }
}

pub fn cohomology(args: &CohomologyArgs, cfg: &RunConfig) -> Result<Outcome, CliError> {
    reject_format(cfg, &[Format::Json, Format::Csv], "cohomology")?;
    if args.degree > 2 {
        return Err(CliError::Input(format!("degree {} unsupported; use 0, 1 or 2", args.degree)));
    }
    let params = parse_params(&args.params)?;
    let alg = classical_realization(classical(&args.family)?, &params)?;
    let (rule, h) = parse_homogeneity(&args.homogeneity, args.weight)?;
    let (n, m) = desk_complex(&alg, rule)?;
    let c = ce_cohomology(&n, &m, args.degree, h)?;
    let c = CohomologyLine {
        degree: c.degree,
        homogeneity: args.homogeneity.replace(' ', ""),
        dim: c.dim,
        cochain_dim: c.cochain_dim,
    };
    let text = match cfg.format {
        Format::Csv => csv_text(
            &["degree", "homogeneity", "dim", "cochain_dim"],
            [vec![c.degree.to_string(), c.homogeneity.clone(), c.dim.to_string(), c.cochain_dim.to_string()]],
        )?,
        _ => json(&Report {
            command: "cohomology",
            config: cfg,
            result: CohomologyReport { family: args.family.clone(), params, weight: rule, cohomology: c },
        })?,
    };
    Ok(Outcome { text, passed: true })
}

// ---------------------------------------------------------------------------------------

#[derive(Subcommand, Debug)]
pub enum ModelVerb {
    /// Samples on-model points and checks the defining equation exactly.
    Verify(ModelArgs),
    /// Prints the defining equation (`--format latex` or `--format json-ast`).
    Emit(ModelArgs),
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value = "")]
    pub params: String,
    /// For `emit --format latex`: print the general matrix form even when a scalar form exists.
    #[arg(long)]
    pub general: bool,
}

#[derive(Serialize)]
struct DigestCheck {
    /// `matched`, `mismatched`, `unlisted` or `no-golden-file`.
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    #[serde(flatten)]
    residuals: crlab::models::ResidualReport,
    golden_digest: DigestCheck,
    passed: bool,
}

fn digest_check(key: &str, digest: &str) -> Result<DigestCheck, CliError> {
    let path = golden_dir().join("equation_digests.json");
    if !path.exists() {
        return Ok(DigestCheck { status: "no-golden-file", expected: None });
    }
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let table: BTreeMap<String, String> =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(match table.get(key) {
        None => DigestCheck { status: "unlisted", expected: None },
        Some(d) if d == digest => DigestCheck { status: "matched", expected: None },
        Some(d) => DigestCheck { status: "mismatched", expected: Some(d.clone()) },
    })
}

pub fn model(verb: &ModelVerb, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match verb {
        ModelVerb::Verify(args) => {
            reject_format(cfg, &[Format::Json, Format::Csv], "model verify")?;
            let params = parse_params(&args.params)?;
            let m = build_model(&args.family, &params)?;
            let residuals = m.verify(cfg.seed, cfg.sample_count)?;
            let golden = digest_check(&instance_key(m.name(), &params), &residuals.equation_digest)?;
            let passed = residuals.passed() && golden.status != "mismatched";
            let text = match cfg.format {
                Format::Csv => csv_text(
                    &["index", "kind", "detail"],
                    residuals.failures.iter().map(|f| vec![f.index.to_string(), format!("{:?}", f.kind), f.detail.clone()]),
                )?,
                _ => json(&Report {
                    command: "model verify",
                    config: cfg,
                    result: VerifyReport { residuals, golden_digest: golden, passed },
                })?,
            };
            Ok(Outcome { text, passed })
        }
        ModelVerb::Emit(args) => {
            let params = parse_params(&args.params)?;
            let fam = family(&args.family).ok_or_else(|| CliError::Input(format!("unknown family {:?}", args.family)))?;
            fam.tag().validate(&params)?;
            let eq = fam.equation(&params);
            let text = match cfg.format {
                Format::Latex => match fam.simplified(&params).filter(|_| !args.general) {
                    Some(simple) => format!("{}\n", simple.latex()),
                    None => format!("{}\n", eq.latex()),
                },
                Format::JsonAst | Format::Json => format!("{}\n", eq.to_json()),
                Format::Csv => return Err(CliError::Input("model emit supports latex and json-ast".into())),
            };
            Ok(Outcome { text, passed: true })
        }
    }
}
