//! Input records and option overrides.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use weilmot_core::Options;

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Pipeline settings: the core limits plus the largest power reported in batch mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub core: Options,
    pub report_power: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { core: Options::from_env(), report_power: 2 }
    }
}

const OPTION_KEYS: [&str; 6] = ["degree_cap", "max_power", "max_precision", "probe_bound", "report_power", "search_bound"];

impl RunOptions {
    pub fn to_json(&self) -> Value {
        json!({
            "degree_cap": self.core.degree_cap.to_string(),
            "max_power": self.core.max_power.to_string(),
            "max_precision": self.core.max_precision.to_string(),
            "probe_bound": self.core.probe_bound.to_string(),
            "report_power": self.report_power.to_string(),
            "search_bound": self.core.search_bound.to_string(),
        })
    }

    /// Short digest of the effective options.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().to_string().as_bytes()))[..16].to_string()
    }

    /// Applies per-record overrides; they win over global settings.
    pub fn with_overrides(&self, overrides: &Map<String, Value>) -> Result<Self, CliError> {
        let mut o = self.clone();
        for (k, v) in overrides {
            let n = as_u64(v).ok_or_else(|| CliError::Malformed(format!("option {k} must be a non-negative integer")))?;
            let small = |n: u64| u32::try_from(n).map_err(|_| CliError::Malformed(format!("option {k} is too large")));
            match k.as_str() {
                "search_bound" => o.core.search_bound = small(n)? as i64,
                "degree_cap" => o.core.degree_cap = small(n)? as usize,
                "max_precision" => o.core.max_precision = small(n)?,
                "max_power" => o.core.max_power = small(n)?,
                "probe_bound" => o.core.probe_bound = small(n)?,
                "report_power" => o.report_power = small(n)?,
                _ => {
                    return Err(CliError::Malformed(format!(
                        "unknown option {k} (expected one of {})",
                        OPTION_KEYS.join(", ")
                    )))
                }
            }
        }
        Ok(o)
    }
}

fn as_u64(v: &Value) -> Option<u64> {
    match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn as_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// One Weil polynomial to analyse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputRecord {
    pub label: Option<String>,
    pub q: BigInt,
    /// Ascending degree.
    pub coeffs: Vec<BigInt>,
    pub cm_assertion: Option<bool>,
    pub options: Map<String, Value>,
}

impl InputRecord {
    pub fn parse(line: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(line).map_err(|e| CliError::Malformed(format!("invalid JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let obj = v.as_object().ok_or_else(|| CliError::Malformed("record must be a JSON object".into()))?;
        for k in obj.keys() {
            if !["label", "q", "coeffs", "cm_assertion", "options"].contains(&k.as_str()) {
                return Err(CliError::Malformed(format!("unknown field {k}")));
            }
        }
        let label = match obj.get("label") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(CliError::Malformed("label must be a string".into())),
        };
        let q = obj.get("q").and_then(as_bigint).ok_or_else(|| CliError::Malformed("q must be an integer".into()))?;
        let coeffs = obj
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::Malformed("coeffs must be a list of integers".into()))?
            .iter()
            .map(|c| as_bigint(c).ok_or_else(|| CliError::Malformed(format!("coefficient {c} is not an integer"))))
            .collect::<Result<Vec<_>, _>>()?;
        let cm_assertion = match obj.get("cm_assertion") {
            None | Some(Value::Null) => None,
            Some(Value::Bool(b)) => Some(*b),
            Some(_) => return Err(CliError::Malformed("cm_assertion must be a boolean".into())),
        };
        let options = match obj.get("options") {
            None | Some(Value::Null) => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(CliError::Malformed("options must be an object".into())),
        };
        Ok(InputRecord { label, q, coeffs, cm_assertion, options })
    }

    /// Normalized echo: integers as strings, absent fields as null.
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "q": self.q.to_string(),
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "cm_assertion": self.cm_assertion,
        })
    }

    /// Deterministic digest of (input, tool version, effective options).
    pub fn content_key(&self, opts: &RunOptions) -> String {
        let canon = json!({ "input": self.to_json(), "options": opts.to_json(), "version": TOOL_VERSION });
        hex::encode(Sha256::digest(canon.to_string().as_bytes()))
    }
}

/// Key for a line that could not be parsed, so that reruns skip it too.
pub fn raw_line_key(line: &str, opts: &RunOptions) -> String {
    let canon = json!({ "raw": line, "options": opts.to_json(), "version": TOOL_VERSION });
    hex::encode(Sha256::digest(canon.to_string().as_bytes()))
}
