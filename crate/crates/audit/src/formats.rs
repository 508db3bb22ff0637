//! JSON and CSV encodings of library types.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use berezin::berezin::BerezinProfile;
use berezin::catalog::{CheckResult, GridSpec};
use berezin::matrix::ComplexMatrix;
use berezin::rkhs::{Domain, Point, RkhsModel};
use berezin::toeplitz::SymbolSeries;
use berezin::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::audit::{AuditReport, TrialRow};
use crate::error::{AuditError, Result};

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| AuditError::io(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> AuditError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => AuditError::io(path, io),
        other => AuditError::Parse(format!("{other:?}")),
    }
}

/// Writes `rows` as CSV with the given header, one record per row.
fn write_records<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| AuditError::io(path, e))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| AuditError::Parse(e.to_string()))?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| AuditError::io(path, e))
}

pub const AUDIT_CSV_HEADER: [&str; 10] = ["id", "model", "dim", "trial", "lhs", "rhs", "margin", "ratio", "outcome", "seed"];

pub fn trial_record(r: &TrialRow) -> Vec<String> {
    vec![
        r.id.clone(),
        r.model.clone(),
        r.dim.to_string(),
        r.trial.to_string(),
        r.lhs.to_string(),
        r.rhs.to_string(),
        r.margin.to_string(),
        r.ratio.to_string(),
        r.outcome.to_string(),
        r.seed.to_string(),
    ]
}

pub fn write_audit_csv(path: &Path, rows: &[TrialRow]) -> Result<()> {
    write_records(path, &AUDIT_CSV_HEADER, rows.iter().map(trial_record))
}

pub fn write_audit_json(path: &Path, report: &AuditReport) -> Result<()> {
    write_json(path, report)
}

/// Model descriptor `{name, kind, dim, maxRadius | labels}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub name: String,
    pub kind: String,
    pub dim: usize,
    #[serde(rename = "maxRadius", skip_serializing_if = "Option::is_none")]
    pub max_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&RkhsModel> for ModelDescriptor {
    fn from(m: &RkhsModel) -> Self {
        let (max_radius, labels) = match m.domain() {
            Domain::Disk { max_radius } => (Some(*max_radius), None),
            Domain::FinitePoints { labels } => (None, Some(labels.clone())),
        };
        ModelDescriptor { name: m.name().into(), kind: m.kind().as_str().into(), dim: m.dim(), max_radius, labels }
    }
}

pub const DISK_PROFILE_HEADER: [&str; 5] = ["re_lambda", "im_lambda", "re_symbol", "im_symbol", "abs_symbol"];
pub const LABEL_PROFILE_HEADER: [&str; 4] = ["label", "re_symbol", "im_symbol", "abs_symbol"];

/// Rows `(re(lambda), im(lambda) | label, re, im, |.|)` in sample order.
pub fn profile_records(model: &RkhsModel, profile: &BerezinProfile) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let labels = match model.domain() {
        Domain::FinitePoints { labels } => Some(labels),
        Domain::Disk { .. } => None,
    };
    let rows = profile
        .samples
        .iter()
        .map(|s| {
            let mut row = match s.point.point {
                Point::Disk(z) => vec![z.re.to_string(), z.im.to_string()],
                Point::Label(i) => vec![labels.and_then(|l| l.get(i)).cloned().unwrap_or_else(|| i.to_string())],
            };
            row.extend([s.value.re.to_string(), s.value.im.to_string(), s.value.norm().to_string()]);
            row
        })
        .collect();
    let header = if labels.is_some() { LABEL_PROFILE_HEADER.to_vec() } else { DISK_PROFILE_HEADER.to_vec() };
    (header, rows)
}

pub fn write_profile_csv(path: &Path, model: &RkhsModel, profile: &BerezinProfile) -> Result<()> {
    let (header, rows) = profile_records(model, profile);
    write_records(path, &header, rows)
}

/// Parses `{"k": [re, im], ...}`.
pub fn parse_symbol(text: &str) -> Result<SymbolSeries> {
    let raw: BTreeMap<String, [f64; 2]> =
        serde_json::from_str(text).map_err(|e| AuditError::Parse(format!("symbol: {e}")))?;
    let coeffs = raw
        .into_iter()
        .map(|(k, [re, im])| {
            let k = k.trim().parse::<i64>().map_err(|_| AuditError::Parse(format!("symbol: bad index {k:?}")))?;
            Ok((k, Complex64::new(re, im)))
        })
        .collect::<Result<Vec<_>>>()?;
    SymbolSeries::from_coeffs(coeffs).map_err(|e| AuditError::Parse(format!("symbol: {e}")))
}

pub fn symbol_to_json(s: &SymbolSeries) -> Value {
    let map: serde_json::Map<String, Value> =
        s.iter().map(|(k, c)| (k.to_string(), serde_json::json!([c.re, c.im]))).collect();
    Value::Object(map)
}

/// Parses a square matrix given as rows; each entry is a number or `[re, im]`.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Real(f64),
        Complex([f64; 2]),
    }
    let rows: Vec<Vec<Entry>> = serde_json::from_str(text).map_err(|e| AuditError::Parse(format!("matrix: {e}")))?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(AuditError::Parse(format!("matrix: expected a non-empty square array, got {n} rows")));
    }
    let data = rows
        .into_iter()
        .flatten()
        .map(|e| match e {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        })
        .collect();
    ComplexMatrix::from_row_major(n, data).map_err(|e| AuditError::Parse(format!("matrix: {e}")))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    let n = m.dim();
    Value::Array((0..n).map(|i| Value::Array(m.row(i).iter().map(|z| serde_json::json!([z.re, z.im])).collect())).collect())
}

/// `24x96x0.995`, or `-` for models without a grid.
pub fn grid_label(grid: Option<&GridSpec>) -> String {
    match grid {
        Some(g) => match g.max_radius {
            Some(r) => format!("{}x{}x{}", g.radial, g.angular, r),
            None => format!("{}x{}", g.radial, g.angular),
        },
        None => "-".into(),
    }
}

pub fn check_result_json(r: &CheckResult) -> Value {
    let links: Vec<Value> = r
        .links
        .iter()
        .map(|l| {
            serde_json::json!({
                "label": l.label, "lhs": l.lhs, "rhs": l.rhs, "margin": l.margin(),
                "ratio": l.ratio(), "tolerance": l.tolerance, "equality": l.equality, "passed": l.passed(),
            })
        })
        .collect();
    let pointwise = r.pointwise.as_ref().map(|p| {
        serde_json::json!({
            "points": p.points, "violations": p.violations, "max_ratio": p.max_ratio,
            "max_excess": p.max_excess, "tolerance": p.tolerance,
        })
    });
    let diagnostics: serde_json::Map<String, Value> =
        r.diagnostics.iter().map(|(k, v)| (k.clone(), serde_json::json!(v))).collect();
    serde_json::json!({
        "id": r.id,
        "model": r.model,
        "dims": r.dim,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "margin": r.margin,
        "ratio": r.ratio,
        "outcome": r.outcome.as_str(),
        "pass": r.pass,
        "tolerance": r.tolerance,
        "seed": r.seed,
        "grid": r.grid.as_ref().map(|g| serde_json::json!({"radial": g.radial, "angular": g.angular, "maxRadius": g.max_radius})),
        "refinement": r.refinement,
        "links": links,
        "pointwise": pointwise,
        "diagnostics": diagnostics,
        "note": r.note,
        "operands": r.operands,
    })
}

pub const CHECK_CSV_HEADER: [&str; 11] =
    ["id", "model", "dims", "lhs", "rhs", "margin", "ratio", "outcome", "seed", "grid", "refinement"];

pub fn check_record(r: &CheckResult) -> Vec<String> {
    vec![
        r.id.clone(),
        r.model.clone(),
        r.dim.to_string(),
        r.lhs.to_string(),
        r.rhs.to_string(),
        r.margin.to_string(),
        r.ratio.to_string(),
        r.outcome.as_str().to_string(),
        r.seed.map_or_else(String::new, |s| s.to_string()),
        grid_label(r.grid.as_ref()),
        r.refinement.to_string(),
    ]
}

pub fn write_checks_csv(path: &Path, results: &[CheckResult]) -> Result<()> {
    write_records(path, &CHECK_CSV_HEADER, results.iter().map(check_record))
}

pub fn write_json_value(path: &Path, value: &Value) -> Result<()> {
    write_json(path, value)
}

/// Writes arbitrary rows under `header`.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    write_records(path, header, rows.iter().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use berezin::rkhs::{diagonal_model, hardy_model};

    #[test]
    fn symbol_json_round_trip() {
        let s = parse_symbol(r#"{"1": [1, 0], "-2": [0.5, -0.25], "0": [0, 0]}"#).unwrap();
        assert_eq!(s.get(1), Complex64::new(1.0, 0.0));
        assert_eq!(s.get(-2), Complex64::new(0.5, -0.25));
        assert_eq!(s.support(), Some((-2, 1)));
        assert_eq!(parse_symbol(&symbol_to_json(&s).to_string()).unwrap(), s);
        assert!(parse_symbol(r#"{"x": [1, 0]}"#).is_err());
        assert!(parse_symbol(r#"{"1": [1]}"#).is_err());
    }

    #[test]
    fn matrix_json_forms() {
        let m = parse_matrix("[[0, 1], [0, 0]]").unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(1.0, 0.0));
        let z = parse_matrix("[[[1, 0], 0], [0, [0, 2]]]").unwrap();
        assert_eq!(z, ComplexMatrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]));
        assert_eq!(parse_matrix(&matrix_to_json(&z).to_string()).unwrap(), z);
        for bad in ["[]", "[[1, 2]]", "[[1], [2, 3]]", "{}", "[[\"a\"]]"] {
            assert!(matches!(parse_matrix(bad), Err(AuditError::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn model_descriptors() {
        let d = ModelDescriptor::from(&hardy_model(8, 0.995).unwrap());
        assert_eq!(
            serde_json::to_value(&d).unwrap(),
            serde_json::json!({"name": "hardy(8)", "kind": "hardy", "dim": 8, "maxRadius": 0.995})
        );
        let d = ModelDescriptor::from(&diagonal_model(2).unwrap());
        assert_eq!(
            serde_json::to_value(&d).unwrap(),
            serde_json::json!({"name": "diagonal(2)", "kind": "diagonal", "dim": 2, "labels": ["0", "1"]})
        );
    }

    #[test]
    fn grid_labels() {
        assert_eq!(grid_label(None), "-");
        let g = GridSpec { radial: 24, angular: 96, max_radius: Some(0.995) };
        assert_eq!(grid_label(Some(&g)), "24x96x0.995");
    }
}
