//! The two external file formats: the JSON interface specification of a
//! system under test and the space-separated test-input file.
//!
//! Interface files look like
//!
//! ```json
//! {
//!   "command": "bmi.sh",
//!   "parameters": [
//!     { "name": "height", "type": "double", "max": "100", "min": "-100" },
//!     { "name": "weight", "type": "double", "max": "100", "min": "-100" }
//!   ],
//!   "output": [ { "name": "output", "type": "double" } ]
//! }
//! ```
//!
//! Bounds may be JSON numbers or numeric strings. String parameters list
//! their admissible literals under `values`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value as Json};
use thiserror::Error;

use crate::value::{InputVector, Value, ValueKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("line {line}: {message}")]
    TestFile { line: usize, message: String },
    #[error("input {index} has {found} values, expected {expected}")]
    MixedArity {
        index: usize,
        expected: usize,
        found: usize,
    },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: ValueKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
}

impl ParamSpec {
    pub fn double(name: &str, min: f64, max: f64) -> Self {
        ParamSpec {
            name: name.to_string(),
            kind: ValueKind::Double,
            min: Some(min),
            max: Some(max),
            values: None,
        }
    }

    pub fn integer(name: &str, min: i64, max: i64) -> Self {
        ParamSpec {
            name: name.to_string(),
            kind: ValueKind::Integer,
            min: Some(min as f64),
            max: Some(max as f64),
            values: None,
        }
    }

    pub fn boolean(name: &str) -> Self {
        ParamSpec {
            name: name.to_string(),
            kind: ValueKind::Boolean,
            min: None,
            max: None,
            values: None,
        }
    }

    pub fn string(name: &str, values: &[&str]) -> Self {
        ParamSpec {
            name: name.to_string(),
            kind: ValueKind::String,
            min: None,
            max: None,
            values: Some(values.iter().map(|s| s.to_string()).collect()),
        }
    }

    /// Inclusive integer range; only meaningful for integer parameters.
    pub fn int_range(&self) -> (i64, i64) {
        (
            self.min.unwrap_or(0.0).trunc() as i64,
            self.max.unwrap_or(0.0).trunc() as i64,
        )
    }

    /// Checks that `value` has this parameter's kind and lies within its
    /// bounds or enumeration.
    pub fn admits(&self, value: &Value) -> bool {
        match (self.kind, value) {
            (ValueKind::Double, Value::Double(x)) => {
                self.min.is_none_or(|m| *x >= m) && self.max.is_none_or(|m| *x <= m)
            }
            (ValueKind::Integer, Value::Integer(i)) => {
                let (lo, hi) = self.int_range();
                (lo..=hi).contains(i)
            }
            (ValueKind::Boolean, Value::Boolean(_)) => true,
            (ValueKind::String, Value::Str(s)) => {
                self.values.as_ref().is_some_and(|vs| vs.iter().any(|v| v == s))
            }
            _ => false,
        }
    }

    /// Kind check plus enumeration membership for strings. Numeric bounds are
    /// not enforced: they constrain generation, while supplied tests may lie
    /// outside them.
    pub fn conforms(&self, value: &Value) -> bool {
        match (self.kind, value) {
            (ValueKind::Double, Value::Double(_))
            | (ValueKind::Integer, Value::Integer(_))
            | (ValueKind::Boolean, Value::Boolean(_)) => true,
            (ValueKind::String, Value::Str(_)) => self.admits(value),
            _ => false,
        }
    }

    /// Parses one token of a test file as a value of this parameter's kind.
    pub fn parse_token(&self, token: &str) -> Result<Value, String> {
        let value = match self.kind {
            ValueKind::Double => Value::Double(
                token
                    .parse::<f64>()
                    .map_err(|_| format!("`{token}` is not a double"))?,
            ),
            ValueKind::Integer => Value::Integer(
                token
                    .parse::<i64>()
                    .map_err(|_| format!("`{token}` is not an integer"))?,
            ),
            ValueKind::Boolean => match token.to_ascii_lowercase().as_str() {
                "true" => Value::Boolean(true),
                "false" => Value::Boolean(false),
                _ => return Err(format!("`{token}` is not a boolean")),
            },
            ValueKind::String => Value::Str(token.to_string()),
        };
        if !self.conforms(&value) {
            return Err(format!(
                "`{token}` is not an admissible value of `{}`",
                self.name
            ));
        }
        Ok(value)
    }
}

/// Declaration of the single numeric output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: ValueKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceSpec {
    pub command: String,
    pub parameters: Vec<ParamSpec>,
    pub output: OutputSpec,
}

impl InterfaceSpec {
    pub fn new(command: &str, parameters: Vec<ParamSpec>, output_kind: ValueKind) -> Result<Self, SpecError> {
        let spec = InterfaceSpec {
            command: command.to_string(),
            parameters,
            output: OutputSpec {
                name: "output".to_string(),
                kind: output_kind,
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn arity(&self) -> usize {
        self.parameters.len()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.parameters.iter().position(|p| p.name == name)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.command.trim().is_empty() {
            return Err(invalid("command", "must be a non-empty string"));
        }
        let mut seen = HashSet::new();
        for (i, p) in self.parameters.iter().enumerate() {
            let field = |f: &str| format!("parameters[{i}].{f}");
            if p.name.is_empty() || p.name.chars().any(|c| c.is_whitespace() || "(),\"".contains(c)) {
                return Err(invalid(field("name"), format!("`{}` is not a valid identifier", p.name)));
            }
            if !seen.insert(p.name.as_str()) {
                return Err(invalid(field("name"), format!("duplicate parameter name `{}`", p.name)));
            }
            match p.kind {
                ValueKind::Double | ValueKind::Integer => {
                    let min = p.min.ok_or_else(|| invalid(field("min"), "numeric parameters require `min`"))?;
                    let max = p.max.ok_or_else(|| invalid(field("max"), "numeric parameters require `max`"))?;
                    if !min.is_finite() {
                        return Err(invalid(field("min"), "must be finite"));
                    }
                    if !max.is_finite() {
                        return Err(invalid(field("max"), "must be finite"));
                    }
                    if min > max {
                        return Err(invalid(field("min"), format!("min {min} exceeds max {max}")));
                    }
                    if p.kind == ValueKind::Integer {
                        let (lo, hi) = p.int_range();
                        if lo > hi {
                            return Err(invalid(field("min"), "integer range is empty"));
                        }
                    }
                }
                ValueKind::String => {
                    let values = p.values.as_ref().filter(|v| !v.is_empty()).ok_or_else(|| {
                        invalid(field("values"), "string parameters require a non-empty `values` list")
                    })?;
                    if let Some(bad) = values.iter().find(|v| v.is_empty() || v.chars().any(char::is_whitespace)) {
                        return Err(invalid(field("values"), format!("`{bad}` must be non-empty and whitespace-free")));
                    }
                }
                ValueKind::Boolean => {}
            }
        }
        if !self.output.kind.is_numeric() {
            return Err(invalid("output[0].type", "output must be double or integer"));
        }
        Ok(())
    }

    /// Checks arity and kinds of an input vector, and enumeration membership
    /// of string values.
    pub fn check_input(&self, input: &InputVector) -> Result<(), String> {
        if input.len() != self.arity() {
            return Err(format!("expected {} values, found {}", self.arity(), input.len()));
        }
        for (p, v) in self.parameters.iter().zip(input.values()) {
            if !p.conforms(v) {
                return Err(format!("value `{v}` is not admissible for `{}`", p.name));
            }
        }
        Ok(())
    }

    /// Renders the spec in the same JSON layout it is read from.
    pub fn to_json(&self) -> String {
        let doc = serde_json::json!({
            "command": self.command,
            "parameters": self.parameters,
            "output": [self.output],
        });
        serde_json::to_string_pretty(&doc).expect("spec serializes")
    }
}

fn json_number(obj: &Map<String, Json>, key: &str, field: &str) -> Result<Option<f64>, SpecError> {
    match obj.get(key) {
        None | Some(Json::Null) => Ok(None),
        Some(Json::Number(n)) => n
            .as_f64()
            .map(Some)
            .ok_or_else(|| invalid(field, "number out of range")),
        Some(Json::String(s)) => s
            .trim()
            .parse::<f64>()
            .map(Some)
            .map_err(|_| invalid(field, format!("`{s}` is not a number"))),
        Some(_) => Err(invalid(field, "expected a number")),
    }
}

fn json_string(obj: &Map<String, Json>, key: &str, field: &str) -> Result<String, SpecError> {
    match obj.get(key) {
        Some(Json::String(s)) => Ok(s.clone()),
        Some(_) => Err(invalid(field, "expected a string")),
        None => Err(invalid(field, "missing")),
    }
}

fn json_kind(obj: &Map<String, Json>, field: &str) -> Result<ValueKind, SpecError> {
    let name = json_string(obj, "type", field)?;
    ValueKind::from_name(&name).ok_or_else(|| invalid(field, format!("unknown type `{name}`")))
}

fn parse_param(json: &Json, i: usize) -> Result<ParamSpec, SpecError> {
    let obj = json
        .as_object()
        .ok_or_else(|| invalid(format!("parameters[{i}]"), "expected an object"))?;
    let field = |f: &str| format!("parameters[{i}].{f}");
    let kind = json_kind(obj, &field("type"))?;
    let values = match obj.get("values") {
        None | Some(Json::Null) => None,
        Some(Json::Array(items)) => Some(
            items
                .iter()
                .map(|v| match v {
                    Json::String(s) => Ok(s.clone()),
                    _ => Err(invalid(field("values"), "expected string literals")),
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Some(_) => return Err(invalid(field("values"), "expected an array")),
    };
    Ok(ParamSpec {
        name: json_string(obj, "name", &field("name"))?,
        kind,
        min: json_number(obj, "min", &field("min"))?,
        max: json_number(obj, "max", &field("max"))?,
        values,
    })
}

/// Parses and validates an interface specification.
pub fn parse_interface_spec(text: &str) -> Result<InterfaceSpec, SpecError> {
    let doc: Json = serde_json::from_str(text).map_err(|e| SpecError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = doc
        .as_object()
        .ok_or_else(|| invalid("$", "expected a JSON object"))?;
    let command = json_string(obj, "command", "command")?;
    let parameters = match obj.get("parameters") {
        Some(Json::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, p)| parse_param(p, i))
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(invalid("parameters", "expected an array")),
        None => return Err(invalid("parameters", "missing")),
    };
    let output_obj = match obj.get("output") {
        Some(Json::Array(items)) if items.len() == 1 => items[0]
            .as_object()
            .ok_or_else(|| invalid("output[0]", "expected an object"))?,
        Some(Json::Array(_)) => return Err(invalid("output", "exactly one output must be declared")),
        Some(Json::Object(o)) => o,
        Some(_) => return Err(invalid("output", "expected an array")),
        None => return Err(invalid("output", "missing")),
    };
    let output = OutputSpec {
        name: match output_obj.get("name") {
            None => "output".to_string(),
            Some(_) => json_string(output_obj, "name", "output[0].name")?,
        },
        kind: json_kind(output_obj, "output[0].type")?,
    };
    let spec = InterfaceSpec {
        command,
        parameters,
        output,
    };
    spec.validate()?;
    Ok(spec)
}

/// Parses a test-input file. Blank lines and `#` comments are skipped; every
/// other line must hold one token per parameter, in parameter order.
pub fn parse_test_inputs(text: &str, spec: &InterfaceSpec) -> Result<Vec<InputVector>, SpecError> {
    let mut inputs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != spec.arity() {
            return Err(SpecError::TestFile {
                line,
                message: format!("expected {} columns, found {}", spec.arity(), tokens.len()),
            });
        }
        let values = spec
            .parameters
            .iter()
            .zip(&tokens)
            .map(|(p, t)| p.parse_token(t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|message| SpecError::TestFile { line, message })?;
        inputs.push(InputVector(values));
    }
    Ok(inputs)
}

/// Renders inputs in the test-file format, one line per input.
pub fn write_test_inputs(inputs: &[InputVector]) -> Result<String, SpecError> {
    let mut out = String::new();
    let expected = inputs.first().map_or(0, InputVector::len);
    for (index, input) in inputs.iter().enumerate() {
        if input.len() != expected {
            return Err(SpecError::MixedArity {
                index,
                expected,
                found: input.len(),
            });
        }
        out.push_str(&input.to_line());
        out.push('\n');
    }
    Ok(out)
}

/// Renders one observed output per line, for the file that accompanies a
/// generated suite.
pub fn write_outputs(outputs: &[f64]) -> String {
    outputs.iter().map(|y| format!("{y}\n")).collect()
}

/// Parses a file written by [`write_outputs`]. `inf`, `-inf` and `NaN` are accepted.
pub fn parse_outputs(text: &str) -> Result<Vec<f64>, SpecError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(n, l)| {
            l.trim().parse::<f64>().map_err(|_| SpecError::TestFile {
                line: n + 1,
                message: format!("`{}` is not a number", l.trim()),
            })
        })
        .collect()
}
