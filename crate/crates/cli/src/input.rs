//! Input files, built-in groups and tolerance resolution.

use std::fs;
use std::path::Path;

use equichar_core::activations::build_eta_activation;
use equichar_core::{ActivationFn, EtaProfile, GroupSpec, Matrix, Perm, DEFAULT_TOL};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable overriding the default tolerance.
pub const TOL_ENV: &str = "EQUICHAR_TOL";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecFile {
    pub name: String,
    pub dimension: usize,
    pub generators: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl GroupSpecFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: GroupSpecFile = serde_json::from_str(text).map_err(|e| CliError::parse(format!("group spec: {e}")))?;
        if file.generators.iter().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(CliError::parse("group spec: entries must be finite"));
        }
        if let Some(t) = file.tolerance {
            if !t.is_finite() || t < 0.0 {
                return Err(CliError::parse(format!("group spec: invalid tolerance {t}")));
            }
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read(path)?)
    }

    pub fn to_spec(&self, tol: f64) -> Result<GroupSpec, CliError> {
        let n = self.dimension;
        let mut mats = Vec::with_capacity(self.generators.len());
        for (k, rows) in self.generators.iter().enumerate() {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CliError::parse(format!("generator {k} is not {n} x {n}")));
            }
            mats.push(Matrix::from_rows(rows).map_err(|e| CliError::parse(format!("generator {k}: {e}")))?);
        }
        GroupSpec::new(self.name.clone(), n, mats, tol).map_err(|e| CliError::parse(e.to_string()))
    }

    pub fn from_spec(spec: &GroupSpec, tolerance: Option<f64>) -> Self {
        GroupSpecFile {
            name: spec.name().to_string(),
            dimension: spec.dim(),
            generators: spec.generators().iter().map(Matrix::to_rows).collect(),
            tolerance,
        }
    }
}

/// Parses `sym:n`, `cyclic:n`, `signed-sym:n`, `signed-cyclic:n` or `rotation:k`.
pub fn builtin_group(text: &str) -> Result<GroupSpec, CliError> {
    let (kind, arg) = text
        .split_once(':')
        .ok_or_else(|| CliError::parse(format!("builtin group `{text}`: expected kind:size")))?;
    let size: usize = arg
        .parse()
        .map_err(|_| CliError::parse(format!("builtin group `{text}`: bad size `{arg}`")))?;
    if size == 0 {
        return Err(CliError::parse(format!("builtin group `{text}`: size must be positive")));
    }
    Ok(match kind {
        "sym" => GroupSpec::symmetric(size),
        "cyclic" => GroupSpec::cyclic(size),
        "signed-sym" => GroupSpec::signed_symmetric(size),
        "signed-cyclic" => GroupSpec::signed_cyclic(size),
        "rotation" => GroupSpec::rotation(size),
        _ => return Err(CliError::parse(format!("unknown builtin group kind `{kind}`"))),
    })
}

/// `--tol`, then the file's `tolerance`, then `EQUICHAR_TOL`, then the default.
pub fn resolve_tol(flag: Option<f64>, file: Option<f64>, env: Option<&str>) -> Result<f64, CliError> {
    let env = match env {
        Some(s) => Some(
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::parse(format!("{TOL_ENV}: not a number: `{s}`")))?,
        ),
        None => None,
    };
    let tol = flag.or(file).or(env).unwrap_or(DEFAULT_TOL);
    if !tol.is_finite() || tol < 0.0 {
        return Err(CliError::parse(format!("invalid tolerance {tol}")));
    }
    Ok(tol)
}

pub fn env_tol() -> Option<String> {
    std::env::var(TOL_ENV).ok()
}

/// `{"generators": [[images...], ...]}` with 0-based images.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermGeneratorsFile {
    pub generators: Vec<Vec<usize>>,
}

pub fn load_perm_generators(path: &Path) -> Result<Vec<Perm>, CliError> {
    let file: PermGeneratorsFile =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::parse(format!("generators file: {e}")))?;
    file.generators
        .into_iter()
        .map(|g| Perm::new(g).map_err(|e| CliError::parse(e.to_string())))
        .collect()
}

/// Profile file: `{"b"?, "signed"?, "eta_plus": [[x, y], ...], "eta_minus"?: [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaFile {
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub signed: Option<bool>,
    pub eta_plus: Vec<[f64; 2]>,
    #[serde(default)]
    pub eta_minus: Option<Vec<[f64; 2]>>,
}

impl EtaFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        serde_json::from_str(&read(path)?).map_err(|e| CliError::parse(format!("eta profile: {e}")))
    }

    /// The base: `b_flag`, else the file's `b`, else the last abscissa of `eta_plus`.
    pub fn base(&self, b_flag: Option<f64>) -> Result<f64, CliError> {
        let last = self.eta_plus.last().map(|p| p[0]);
        let b = b_flag
            .or(self.b)
            .or(last)
            .ok_or_else(|| CliError::parse("eta profile: eta_plus is empty"))?;
        if let (Some(flag), Some(file)) = (b_flag, self.b) {
            if (flag - file).abs() > DEFAULT_TOL * flag.abs().max(1.0) {
                return Err(CliError::parse(format!("--b {flag} disagrees with the profile's b = {file}")));
            }
        }
        Ok(b)
    }

    /// `signed` defaults to the file's flag, else to "no negative profile given".
    pub fn activation(&self, b_flag: Option<f64>, signed_flag: bool, tol: f64) -> Result<ActivationFn, CliError> {
        let b = self.base(b_flag)?;
        let signed = signed_flag || self.signed.unwrap_or(self.eta_minus.is_none());
        let profile = |pts: &[[f64; 2]]| {
            let pairs: Vec<(f64, f64)> = pts.iter().map(|p| (p[0], p[1])).collect();
            EtaProfile::new(b, &pairs).map_err(CliError::from)
        };
        let plus = profile(&self.eta_plus)?;
        let minus = self.eta_minus.as_deref().map(profile).transpose()?;
        build_eta_activation(b, plus, minus, signed, tol).map_err(CliError::from)
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}
