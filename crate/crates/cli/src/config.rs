use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Latex,
    /// The expression tree as JSON, for `model emit`.
    JsonAst,
}

/// Settings shared by every command; echoed verbatim into each report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub sample_count: usize,
    pub rank_bound: usize,
    /// `None` means depth + 3 of the algebra at hand.
    pub max_prolong_degree: Option<i64>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            sample_count: 100,
            rank_bound: 8,
            max_prolong_degree: None,
            output: None,
            format: Format::Json,
            threads: None,
        }
    }
}

/// Parses `n=1,p=0` into a sorted map.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, i64>, CliError> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("parameter {part:?} is not key=value")))?;
        let v: i64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("parameter {k} needs an integer value")))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(CliError::Input(format!("parameter {k} given twice")));
        }
    }
    Ok(out)
}

/// `SL n=1` style key used for golden digests.
pub fn instance_key(family: &str, params: &BTreeMap<String, i64>) -> String {
    let p: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{family} {}", p.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse_sorted() {
        let p = parse_params("p=0, n=1").unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![("n".to_string(), 1), ("p".to_string(), 0)]);
        assert!(parse_params("n").is_err());
        assert!(parse_params("n=x").is_err());
        assert!(parse_params("n=1,n=2").is_err());
        assert!(parse_params("").unwrap().is_empty());
    }

    #[test]
    fn key_format() {
        let p = parse_params("q=1,p=0").unwrap();
        assert_eq!(instance_key("SO_hyp", &p), "SO_hyp p=0,q=1");
    }
}
