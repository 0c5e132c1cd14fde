use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use sks_core::analytic::{LocalModel, ModelKind};
use sks_core::exact::IntMat2;
use sks_core::kodaira::FiberConfig;
use sks_core::modgroup::{parse_spec, SubgroupSpec};

use crate::error::CliError;
use crate::ConfigSource;

pub fn matrix(s: &str) -> Result<IntMat2, CliError> {
    Ok(s.parse::<IntMat2>()?)
}

pub fn group(s: &str) -> Result<SubgroupSpec, CliError> {
    Ok(parse_spec(s)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConfigFile {
    Config(FiberConfig),
    Matrices(Vec<IntMat2>),
}

pub fn config(src: &ConfigSource) -> Result<FiberConfig, CliError> {
    if let Some(path) = &src.file {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        return match serde_json::from_str(&text)? {
            ConfigFile::Config(c) => Ok(c),
            ConfigFile::Matrices(m) => Ok(FiberConfig::from_matrices(&m)),
        };
    }
    if src.matrix.is_empty() {
        return Err(CliError::Parse("give --file or at least one --matrix".into()));
    }
    let mats = src.matrix.iter().map(|m| matrix(m)).collect::<Result<Vec<_>, _>>()?;
    Ok(FiberConfig::from_matrices(&mats))
}

/// Inline JSON, a JSON file, or a bare model kind.
pub fn model(s: &str) -> Result<LocalModel, CliError> {
    let t = s.trim();
    if t.starts_with('{') {
        return Ok(serde_json::from_str(t)?);
    }
    let path = Path::new(t);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return Ok(serde_json::from_str(&text)?);
    }
    Ok(LocalModel::new(t.parse::<ModelKind>()?))
}

/// `re,im` or a bare real number.
pub fn point(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Parse(format!("bad point {s:?}, expected re,im"));
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "0"),
    };
    Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?))
}
