//! Primitive value kinds shared by interface specs, input vectors and
//! expression trees.

use std::fmt;

use serde::{Deserialize, Serialize};

/// The four primitive types a parameter, terminal or operator result can have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Double,
    Integer,
    Boolean,
    String,
}

impl ValueKind {
    pub const ALL: [ValueKind; 4] = [
        ValueKind::Double,
        ValueKind::Integer,
        ValueKind::Boolean,
        ValueKind::String,
    ];

    pub fn is_numeric(self) -> bool {
        matches!(self, ValueKind::Double | ValueKind::Integer)
    }

    /// Dense index, used for per-kind lookup tables.
    pub fn index(self) -> usize {
        match self {
            ValueKind::Double => 0,
            ValueKind::Integer => 1,
            ValueKind::Boolean => 2,
            ValueKind::String => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueKind::Double => "double",
            ValueKind::Integer => "integer",
            ValueKind::Boolean => "boolean",
            ValueKind::String => "string",
        }
    }

    pub fn from_name(name: &str) -> Option<ValueKind> {
        match name {
            "double" => Some(ValueKind::Double),
            "integer" | "int" => Some(ValueKind::Integer),
            "boolean" | "bool" => Some(ValueKind::Boolean),
            "string" => Some(ValueKind::String),
            _ => None,
        }
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Boolean(bool),
    Integer(i64),
    Double(f64),
    Str(String),
}

impl Value {
    pub fn kind(&self) -> ValueKind {
        match self {
            Value::Double(_) => ValueKind::Double,
            Value::Integer(_) => ValueKind::Integer,
            Value::Boolean(_) => ValueKind::Boolean,
            Value::Str(_) => ValueKind::String,
        }
    }

    /// Numeric view used by distance computations; booleans map to 0/1.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Double(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            Value::Boolean(b) => Some(if *b { 1.0 } else { 0.0 }),
            Value::Str(_) => None,
        }
    }
}

/// Renders a value as a single whitespace-free token of the test-file format.
/// Doubles use the shortest representation that parses back to the same bits.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Double(x) => write!(f, "{x}"),
            Value::Integer(i) => write!(f, "{i}"),
            Value::Boolean(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(s),
        }
    }
}

/// One test input: values aligned position-by-position with the parameters of
/// an interface spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InputVector(pub Vec<Value>);

impl InputVector {
    pub fn new(values: Vec<Value>) -> Self {
        InputVector(values)
    }

    pub fn doubles(values: &[f64]) -> Self {
        InputVector(values.iter().map(|&x| Value::Double(x)).collect())
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Space-separated rendering, identical to one line of a test file.
    pub fn to_line(&self) -> String {
        self.0
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for InputVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubles_render_shortest_round_trip() {
        assert_eq!(Value::Double(1.7).to_string(), "1.7");
        assert_eq!(Value::Double(50.0).to_string(), "50");
        assert_eq!(Value::Double(-1.1518922634307343).to_string(), "-1.1518922634307343");
        let x = 0.1 + 0.2;
        assert_eq!(x.to_string().parse::<f64>().unwrap(), x);
    }

    #[test]
    fn line_rendering() {
        assert_eq!(InputVector::doubles(&[1.7, 50.0]).to_line(), "1.7 50");
    }
}
