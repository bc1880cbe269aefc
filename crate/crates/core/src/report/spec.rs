use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dilation::DilationPath;
use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, C64};
use crate::operator::{OperatorCorner, WeightRule};
use crate::tolerance::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_ORDER: usize = 12;

/// Input operator: a finite matrix, or a scalar weighted shift given by a rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OperatorSpec {
    /// Row-major entries as `[re, im]` pairs.
    Dense { entries: Vec<Vec<[f64; 2]>> },
    Shift { rule: WeightRule },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    /// Corner size; required for shifts, optional (and checked) for dense input.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub n_blocks: usize,
    /// Horizon of the diagonal Q solver; defaults to `4N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorSpecFile {
    pub schema_version: u32,
    pub operator: OperatorSpec,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<DilationPath>,
    pub truncation: Truncation,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    schema_version: Option<u32>,
    operator: RawOperator,
    m: usize,
    #[serde(default)]
    path: Option<String>,
    truncation: Truncation,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    kind: String,
    #[serde(default)]
    entries: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    rule: Option<Value>,
}

fn parse_error(text: &str, e: serde_json::Error) -> Error {
    let line = e.line();
    let context = text
        .lines()
        .nth(line.saturating_sub(1))
        .map(|l| format!("\n  {line} | {}", l.trim_end()))
        .unwrap_or_default();
    Error::Parse(format!("line {line}, column {}: {e}{context}", e.column()))
}

fn parse_rule(value: Value) -> Result<WeightRule> {
    let name = value
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Validation("shift rule needs a string \"name\"".into()))?
        .to_string();
    if !WeightRule::NAMES.contains(&name.as_str()) {
        return Err(Error::Validation(format!(
            "unknown rule {name:?}; expected one of {}",
            WeightRule::NAMES.join(", ")
        )));
    }
    let rule: WeightRule =
        serde_json::from_value(value).map_err(|e| Error::Validation(format!("rule {name:?}: {e}")))?;
    rule.validate().map_err(|e| Error::Validation(e.to_string()))?;
    Ok(rule)
}

/// Parses and validates a JSON operator spec.
pub fn parse_spec(text: &str) -> Result<OperatorSpecFile> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| parse_error(text, e))?;
    let operator = match raw.operator.kind.as_str() {
        "dense" => {
            if raw.operator.rule.is_some() {
                return Err(Error::Validation("dense operator takes \"entries\", not \"rule\"".into()));
            }
            let entries = raw
                .operator
                .entries
                .ok_or_else(|| Error::Validation("dense operator needs \"entries\"".into()))?;
            OperatorSpec::Dense { entries }
        }
        "shift" => {
            if raw.operator.entries.is_some() {
                return Err(Error::Validation("shift operator takes \"rule\", not \"entries\"".into()));
            }
            let rule = raw
                .operator
                .rule
                .ok_or_else(|| Error::Validation("shift operator needs \"rule\"".into()))?;
            OperatorSpec::Shift { rule: parse_rule(rule)? }
        }
        other => {
            return Err(Error::Validation(format!(
                "unknown operator kind {other:?}; expected dense or shift"
            )))
        }
    };
    let path = match raw.path {
        None => None,
        Some(p) => Some(DilationPath::from_name(&p).ok_or_else(|| {
            Error::Validation(format!(
                "unknown path {p:?}; expected one of {}",
                DilationPath::NAMES.join(", ")
            ))
        })?),
    };
    let spec = OperatorSpecFile {
        schema_version: raw.schema_version.unwrap_or(SCHEMA_VERSION),
        operator,
        m: raw.m,
        path,
        truncation: raw.truncation,
        tolerances: raw.tolerances,
        seed: raw.seed,
    };
    spec.validate()?;
    Ok(spec)
}

/// Pretty JSON with a trailing newline.
pub fn emit_spec(spec: &OperatorSpecFile) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("spec serializes");
    s.push('\n');
    s
}

impl OperatorSpecFile {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::Validation(msg));
        if self.schema_version != SCHEMA_VERSION {
            return invalid(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let m = self.m;
        if !(2..=MAX_ORDER).contains(&m) {
            return invalid(format!("m = {m} must lie in 2..={MAX_ORDER}"));
        }
        let t = &self.truncation;
        if t.n_blocks < m + 2 {
            return invalid(format!("n_blocks = {} must be at least m + 2 = {}", t.n_blocks, m + 2));
        }
        match &self.operator {
            OperatorSpec::Shift { rule } => {
                rule.validate().map_err(|e| Error::Validation(e.to_string()))?;
                let Some(n) = t.n else {
                    return invalid("shift operator needs truncation.N".into());
                };
                if n < 2 * m + 2 {
                    return invalid(format!("N = {n} must be at least 2m + 2 = {}", 2 * m + 2));
                }
                if let Some(h) = t.horizon {
                    if h < n {
                        return invalid(format!("horizon = {h} must be at least N = {n}"));
                    }
                }
            }
            OperatorSpec::Dense { entries } => {
                let rows = entries.len();
                if rows == 0 || entries.iter().any(|r| r.len() != rows) {
                    return invalid("dense entries must form a nonempty square array".into());
                }
                if entries.iter().flatten().flatten().any(|x| !x.is_finite()) {
                    return invalid("dense entries must be finite".into());
                }
                if let Some(n) = t.n {
                    if n != rows {
                        return invalid(format!("truncation.N = {n} does not match the {rows}×{rows} matrix"));
                    }
                }
                if t.horizon.is_some() {
                    return invalid("horizon applies to shift operators only".into());
                }
            }
        }
        self.tolerance_set()?;
        if let Some(p) = self.path {
            let needed = match p {
                DilationPath::GeneralM => None,
                DilationPath::ThreeConcave => Some(3),
                DilationPath::Badea2Iso => Some(2),
            };
            if let Some(k) = needed.filter(|&k| k != m) {
                return invalid(format!("path {} requires m = {k}, got {m}", p.name()));
            }
        }
        Ok(())
    }

    /// Defaults with the spec's overrides applied.
    pub fn tolerance_set(&self) -> Result<Tolerances> {
        let mut tol = Tolerances::default();
        for (name, &value) in &self.tolerances {
            if !tol.set(name, value) {
                return Err(Error::Validation(format!(
                    "tolerance {name} = {value}: unknown name or non-positive value (known: {})",
                    Tolerances::NAMES.join(", ")
                )));
            }
        }
        Ok(tol)
    }

    pub fn corner(&self) -> Result<OperatorCorner> {
        match &self.operator {
            OperatorSpec::Shift { rule } => OperatorCorner::shift(rule.clone(), self.truncation.n.unwrap_or(0)),
            OperatorSpec::Dense { entries } => {
                let rows: Vec<Vec<C64>> = entries
                    .iter()
                    .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
                    .collect();
                OperatorCorner::finite(ComplexMatrix::from_rows(&rows)?)
            }
        }
    }

    pub fn h_dim(&self) -> usize {
        match &self.operator {
            OperatorSpec::Shift { .. } => self.truncation.n.unwrap_or(0),
            OperatorSpec::Dense { entries } => entries.len(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.truncation.horizon.unwrap_or(4 * self.h_dim())
    }

    /// Same spec with `N`, `n_blocks` and an explicit horizon multiplied by
    /// `factor`; finite operators keep their size.
    pub fn enlarged(&self, factor: usize) -> Self {
        let mut out = self.clone();
        out.truncation.n_blocks *= factor;
        if matches!(self.operator, OperatorSpec::Shift { .. }) {
            out.truncation.n = self.truncation.n.map(|n| n * factor);
            out.truncation.horizon = self.truncation.horizon.map(|h| h * factor);
        }
        out
    }
}
