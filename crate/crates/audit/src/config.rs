//! Audit configuration.
//!
//! A config is one JSON document; every field is optional. Defaults:
//!
//! | field          | default                                   |
//! |----------------|-------------------------------------------|
//! | `models`       | `["diagonal", "hardy:8", "hardy:16", "hardy:32"]` |
//! | `entries`      | every non-diagnostic entry (C01-C22, L2)  |
//! | `trials`       | 200                                       |
//! | `kinds`        | all five ensemble kinds                   |
//! | `dims`         | 2..=8 (expands bare `"diagonal"`)         |
//! | `seed`         | 42                                        |
//! | `grid`         | `{"radial": 24, "angular": 96, "maxRadius": 0.995}` |
//! | `refine_steps` | 3                                         |
//! | `threads`      | rayon default                             |
//! | `out_json`, `out_csv` | none                               |
//!
//! `entries` also accepts the string `"all"` (whole catalog, diagnostics
//! included).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use berezin::catalog::{list_catalog, lookup, EntryKind, SamplingPlan};
use berezin::ensemble::EnsembleKind;
use berezin::rkhs::{bergman_model, diagonal_model, hardy_model, RkhsModel, DEFAULT_MAX_RADIUS};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{AuditError, Result};

pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_REFINE: u32 = 3;
pub const DEFAULT_DIMS: [usize; 7] = [2, 3, 4, 5, 6, 7, 8];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub radial: u32,
    pub angular: u32,
    #[serde(rename = "maxRadius", alias = "max_radius")]
    pub max_radius: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { radial: 24, angular: 96, max_radius: DEFAULT_MAX_RADIUS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditConfig {
    pub models: Vec<String>,
    #[serde(deserialize_with = "one_or_many")]
    pub entries: Vec<String>,
    pub trials: usize,
    pub kinds: Vec<String>,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub grid: GridConfig,
    #[serde(alias = "refineSteps", alias = "refine")]
    pub refine_steps: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(alias = "outJson", skip_serializing_if = "Option::is_none")]
    pub out_json: Option<PathBuf>,
    #[serde(alias = "outCsv", skip_serializing_if = "Option::is_none")]
    pub out_csv: Option<PathBuf>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            models: ["diagonal", "hardy:8", "hardy:16", "hardy:32"].map(String::from).to_vec(),
            entries: default_entries(),
            trials: DEFAULT_TRIALS,
            kinds: EnsembleKind::ALL.iter().map(|k| k.as_str().to_string()).collect(),
            dims: DEFAULT_DIMS.to_vec(),
            seed: DEFAULT_SEED,
            grid: GridConfig::default(),
            refine_steps: DEFAULT_REFINE,
            threads: None,
            out_json: None,
            out_csv: None,
        }
    }
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(String),
        Many(Vec<String>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    })
}

/// Ids of every entry that is not a diagnostic.
pub fn default_entries() -> Vec<String> {
    list_catalog().iter().filter(|e| e.kind != EntryKind::Diagnostic).map(|e| e.id.to_string()).collect()
}

/// Expands `"all"` and validates ids, keeping the given order and dropping repeats.
pub fn resolve_entries(requested: &[String]) -> Result<Vec<&'static str>> {
    let mut out: Vec<&'static str> = Vec::new();
    for item in requested {
        let ids: Vec<&'static str> = if item.eq_ignore_ascii_case("all") {
            list_catalog().iter().map(|e| e.id).collect()
        } else {
            vec![lookup(&item.trim().to_ascii_uppercase()).map_err(|e| AuditError::Config(e.to_string()))?.id]
        };
        for id in ids {
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    Ok(out)
}

/// Splits `"a,b , c"` into trimmed non-empty items.
pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
}

/// Model descriptor as written on the command line or in a config.
///
/// Accepted forms: `hardy:32`, `hardy:32:0.99`, `bergman:16`, `diagonal:4`,
/// `diagonal` (expanded over `dims`), and the model names `hardy(32)` etc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Hardy { n: usize, max_radius: Option<f64> },
    Bergman { n: usize, max_radius: Option<f64> },
    Diagonal { n: Option<usize> },
}

impl FromStr for ModelSpec {
    type Err = AuditError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || AuditError::Config(format!("bad model descriptor {s:?}"));
        let norm = s.trim().to_ascii_lowercase().replace(['(', ')'], ":");
        let parts: Vec<&str> = norm.split(':').filter(|p| !p.is_empty()).collect();
        let (name, rest) = parts.split_first().ok_or_else(bad)?;
        let size = |i: usize| rest.get(i).map(|t| t.parse::<usize>().map_err(|_| bad())).transpose();
        let radius = || rest.get(1).map(|t| t.parse::<f64>().map_err(|_| bad())).transpose();
        let spec = match *name {
            "hardy" | "bergman" => {
                if rest.len() > 2 {
                    return Err(bad());
                }
                let n = size(0)?.ok_or_else(bad)?;
                let max_radius = radius()?;
                if *name == "hardy" {
                    ModelSpec::Hardy { n, max_radius }
                } else {
                    ModelSpec::Bergman { n, max_radius }
                }
            }
            "diagonal" if rest.len() <= 1 => ModelSpec::Diagonal { n: size(0)? },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, n, r) = match *self {
            ModelSpec::Hardy { n, max_radius } => ("hardy", Some(n), max_radius),
            ModelSpec::Bergman { n, max_radius } => ("bergman", Some(n), max_radius),
            ModelSpec::Diagonal { n } => ("diagonal", n, None),
        };
        write!(f, "{name}")?;
        if let Some(n) = n {
            write!(f, ":{n}")?;
        }
        if let Some(r) = r {
            write!(f, ":{r}")?;
        }
        Ok(())
    }
}

impl ModelSpec {
    /// Builds the model(s); a bare diagonal spec yields one model per entry of `dims`.
    pub fn build(&self, dims: &[usize], default_radius: f64) -> Result<Vec<RkhsModel>> {
        let core = |e: berezin::Error| AuditError::Config(format!("model {self}: {e}"));
        match *self {
            ModelSpec::Hardy { n, max_radius } => {
                Ok(vec![hardy_model(n, max_radius.unwrap_or(default_radius)).map_err(core)?])
            }
            ModelSpec::Bergman { n, max_radius } => {
                Ok(vec![bergman_model(n, max_radius.unwrap_or(default_radius)).map_err(core)?])
            }
            ModelSpec::Diagonal { n: Some(n) } => Ok(vec![diagonal_model(n).map_err(core)?]),
            ModelSpec::Diagonal { n: None } => dims.iter().map(|&d| diagonal_model(d).map_err(core)).collect(),
        }
    }
}

/// A config with every descriptor parsed and validated.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub entries: Vec<&'static str>,
    pub models: Vec<RkhsModel>,
    pub kinds: Vec<EnsembleKind>,
    pub plan: SamplingPlan,
}

impl AuditConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| AuditError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AuditError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            AuditError::Config(msg) => AuditError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn resolve(&self) -> Result<ResolvedConfig> {
        if self.dims.iter().any(|&d| d < 2) {
            return Err(AuditError::Config("dims must be at least 2".into()));
        }
        if self.grid.radial == 0 || self.grid.angular < 8 {
            return Err(AuditError::Config("grid needs radial >= 1 and angular >= 8".into()));
        }
        if !(self.grid.max_radius > 0.0 && self.grid.max_radius < 1.0) {
            return Err(AuditError::Config(format!("grid maxRadius {} is not in (0, 1)", self.grid.max_radius)));
        }
        if self.refine_steps > berezin::rkhs::MAX_REFINEMENT {
            return Err(AuditError::Config(format!("refine_steps is capped at {}", berezin::rkhs::MAX_REFINEMENT)));
        }
        if self.threads == Some(0) {
            return Err(AuditError::Config("threads must be at least 1".into()));
        }
        let entries = resolve_entries(&self.entries)?;
        let mut models = Vec::new();
        for desc in &self.models {
            for model in desc.parse::<ModelSpec>()?.build(&self.dims, self.grid.max_radius)? {
                if model.kind() == berezin::rkhs::ModelKind::Diagonal && model.dim() < 2 {
                    return Err(AuditError::Config(format!("{}: finite-point models need at least 2 points", model.name())));
                }
                if !models.contains(&model) {
                    models.push(model);
                }
            }
        }
        let kinds = self
            .kinds
            .iter()
            .map(|k| k.parse::<EnsembleKind>().map_err(|e| AuditError::Config(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        if kinds.is_empty() {
            return Err(AuditError::Config("kinds must not be empty".into()));
        }
        let plan = SamplingPlan {
            radial: self.grid.radial,
            angular: self.grid.angular,
            refine_steps: self.refine_steps,
            ..SamplingPlan::default()
        };
        Ok(ResolvedConfig { entries, models, kinds, plan })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = AuditConfig::from_json("{}").unwrap();
        assert_eq!(cfg, AuditConfig::default());
        let r = cfg.resolve().unwrap();
        let names: Vec<&str> = r.models.iter().map(|m| m.name()).collect();
        assert_eq!(names.len(), 10);
        assert_eq!(names[0], "diagonal(2)");
        assert_eq!(names[6], "diagonal(8)");
        assert!(names[7].starts_with("hardy(8"));
        assert_eq!(r.entries.len(), 23);
        assert_eq!(r.entries.last(), Some(&"L2"));
        assert_eq!(r.kinds.len(), 5);
        assert_eq!((r.plan.radial, r.plan.angular, r.plan.refine_steps), (24, 96, 3));
    }

    #[test]
    fn entries_accept_string_or_list() {
        let cfg = AuditConfig::from_json(r#"{"entries": "all"}"#).unwrap();
        assert_eq!(cfg.resolve().unwrap().entries.len(), list_catalog().len());
        let cfg = AuditConfig::from_json(r#"{"entries": ["C06", "c06", "L2"]}"#).unwrap();
        assert_eq!(cfg.resolve().unwrap().entries, vec!["C06", "L2"]);
    }

    #[test]
    fn bad_documents_are_config_errors() {
        for text in [
            "{",
            r#"{"trials": -1}"#,
            r#"{"unknown": 1}"#,
            r#"{"grid": {"maxRadius": 1.5}}"#,
            r#"{"entries": ["C99"]}"#,
            r#"{"kinds": ["wishart"]}"#,
            r#"{"models": ["sobolev:3"]}"#,
            r#"{"dims": [1]}"#,
            r#"{"kinds": []}"#,
        ] {
            let res = AuditConfig::from_json(text).and_then(|c| c.resolve());
            assert!(matches!(res, Err(AuditError::Config(_))), "{text}");
        }
    }

    #[test]
    fn model_specs_round_trip() {
        for (text, spec) in [
            ("hardy:32", ModelSpec::Hardy { n: 32, max_radius: None }),
            ("hardy:16:0.9", ModelSpec::Hardy { n: 16, max_radius: Some(0.9) }),
            ("bergman(6)", ModelSpec::Bergman { n: 6, max_radius: None }),
            ("diagonal", ModelSpec::Diagonal { n: None }),
            ("Diagonal:4", ModelSpec::Diagonal { n: Some(4) }),
        ] {
            assert_eq!(text.parse::<ModelSpec>().unwrap(), spec);
            assert_eq!(spec.to_string().parse::<ModelSpec>().unwrap(), spec);
        }
        for bad in ["", "hardy", "hardy:x", "diagonal:2:3", "hardy:8:0.9:1"] {
            assert!(bad.parse::<ModelSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn bare_diagonal_expands_over_dims() {
        let models = ModelSpec::Diagonal { n: None }.build(&[3, 5], 0.9).unwrap();
        let names: Vec<&str> = models.iter().map(|m| m.name()).collect();
        assert_eq!(names, ["diagonal(3)", "diagonal(5)"]);
        let hardy = ModelSpec::Hardy { n: 8, max_radius: None }.build(&[], 0.9).unwrap();
        assert_eq!(hardy[0].max_radius(), Some(0.9));
    }
}
