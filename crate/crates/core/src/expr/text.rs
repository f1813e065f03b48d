//! Prefix rendering of trees and the matching kind-directed parser.

use std::fmt::Write;

use crate::value::{Value, ValueKind};

use super::{ExprError, ExprTree, Op, Primitives, Terminal};

pub(super) fn render_into(tree: &ExprTree, prims: &Primitives, out: &mut String) {
    match tree {
        ExprTree::Leaf(Terminal::Var { index, .. }) => match prims.var_name(*index) {
            Some(name) => out.push_str(name),
            None => {
                let _ = write!(out, "${index}");
            }
        },
        ExprTree::Leaf(Terminal::Const(v) | Terminal::Free(v)) => match v {
            Value::Double(x) => {
                let _ = write!(out, "{x:?}");
            }
            Value::Str(s) => out.push_str(&serde_json::to_string(s).expect("string literal")),
            other => {
                let _ = write!(out, "{other}");
            }
        },
        ExprTree::Node { op, children } => {
            out.push_str(op.name());
            out.push('(');
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render_into(c, prims, out);
            }
            out.push(')');
        }
    }
}

fn op_named(name: &str, expected: ValueKind) -> Option<Op> {
    Some(match name {
        "Add" => Op::Add,
        "Sub" | "Subtract" => Op::Sub,
        "Mult" | "Mul" | "Multiply" => Op::Mul,
        "Div" | "Divide" => Op::Div,
        "Pow" | "Power" => Op::Pow,
        "Root" => Op::Root,
        "ToDouble" => Op::ToDouble,
        "Cos" => Op::Cos,
        "Exp" => Op::Exp,
        "Log" => Op::Log,
        "ToInt" => Op::ToInt,
        "And" => Op::And,
        "Or" => Op::Or,
        "LT" => Op::Lt,
        "GT" => Op::Gt,
        "EQ" => Op::Eq,
        "EQArith" => Op::EqArith,
        "EQString" => Op::EqString,
        "If" => Op::If(expected),
        _ => return None,
    })
}

/// Parses the prefix notation produced by [`ExprTree::render`]. Numeric
/// literals become the fixed constant when they equal `-1.0` (double) or `0`
/// (integer) and free constants otherwise; range checks are left to
/// [`Primitives::check`].
pub fn parse_tree(text: &str, kind: ValueKind, prims: &Primitives) -> Result<ExprTree, ExprError> {
    let mut p = Parser { text, pos: 0, prims };
    let tree = p.expr(kind)?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(tree)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    prims: &'a Primitives,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Parse {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> Result<(), ExprError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self, expected: ValueKind) -> Result<ExprTree, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.rest().starts_with('"') {
            return self.string_literal(expected);
        }
        let len = self
            .rest()
            .find(|c: char| c == '(' || c == ')' || c == ',' || c.is_whitespace())
            .unwrap_or(self.rest().len());
        let token = &self.text[start..start + len];
        if token.is_empty() {
            return Err(self.error("expected an expression"));
        }
        self.pos += len;
        self.skip_ws();
        if self.rest().starts_with('(') {
            let op = op_named(token, expected).ok_or_else(|| ExprError::Parse {
                pos: start,
                message: format!("unknown operator `{token}`"),
            })?;
            if op.result_kind() != expected {
                return Err(ExprError::Parse {
                    pos: start,
                    message: format!("{token} yields {}, expected {expected}", op.result_kind()),
                });
            }
            self.eat('(')?;
            let mut children = Vec::with_capacity(op.arity());
            for (i, &k) in op.arg_kinds().iter().enumerate() {
                if i > 0 {
                    self.eat(',')?;
                }
                children.push(self.expr(k)?);
            }
            self.eat(')')?;
            return Ok(ExprTree::Node { op, children });
        }
        self.terminal(token, start, expected)
    }

    fn terminal(&self, token: &str, start: usize, expected: ValueKind) -> Result<ExprTree, ExprError> {
        let err = |message: String| ExprError::Parse { pos: start, message };
        if let Some(index) = self.prims.var_index(token) {
            let kind = self.prims.var_kind(index).expect("known variable");
            if kind != expected {
                return Err(err(format!("variable `{token}` is {kind}, expected {expected}")));
            }
            return Ok(ExprTree::var(index, kind));
        }
        let leaf = match expected {
            ValueKind::Boolean => match token {
                "true" => Terminal::Const(Value::Boolean(true)),
                "false" => Terminal::Const(Value::Boolean(false)),
                _ => return Err(err(format!("`{token}` is not a boolean"))),
            },
            ValueKind::Double => {
                let x: f64 = token.parse().map_err(|_| err(format!("`{token}` is not a double")))?;
                Terminal::numeric(Value::Double(x))
            }
            ValueKind::Integer => {
                let i: i64 = token.parse().map_err(|_| err(format!("`{token}` is not an integer")))?;
                Terminal::numeric(Value::Integer(i))
            }
            ValueKind::String => return Err(err(format!("`{token}` is not a string literal"))),
        };
        Ok(ExprTree::Leaf(leaf))
    }

    fn string_literal(&mut self, expected: ValueKind) -> Result<ExprTree, ExprError> {
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut i = start + 1;
        while i < bytes.len() && bytes[i] != b'"' {
            i += if bytes[i] == b'\\' { 2 } else { 1 };
        }
        if i >= bytes.len() {
            return Err(self.error("unterminated string literal"));
        }
        let s: String = serde_json::from_str(&self.text[start..=i]).map_err(|e| self.error(e.to_string()))?;
        self.pos = i + 1;
        if expected != ValueKind::String {
            return Err(ExprError::Parse {
                pos: start,
                message: format!("string literal where {expected} was expected"),
            });
        }
        Ok(ExprTree::Leaf(Terminal::Const(Value::Str(s))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::random_tree;
    use crate::spec_io::{InterfaceSpec, ParamSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn renders_listing_style() {
        let p = crate::expr::tests::bmi_prims();
        let gp1 = parse_tree("Mult(weight,Exp(-1.1518922634307343))", ValueKind::Double, &p).unwrap();
        assert_eq!(gp1.render(&p), "Mult(weight,Exp(-1.1518922634307343))");
        let spaced = parse_tree(" Div( height , Exp(Sub(height, Log(weight))) )", ValueKind::Double, &p).unwrap();
        assert_eq!(spaced.render(&p), "Div(height,Exp(Sub(height,Log(weight))))");
    }

    #[test]
    fn rejects_bad_input() {
        let p = crate::expr::tests::bmi_prims();
        for bad in ["", "Mult(weight)", "Foo(1.0)", "LT(height,weight)", "Add(height,weight) x", "Cos(true)", "\"s\""] {
            assert!(parse_tree(bad, ValueKind::Double, &p).is_err(), "{bad}");
        }
    }

    #[test]
    fn render_parse_round_trip() {
        let spec = InterfaceSpec::new(
            "x",
            vec![
                ParamSpec::double("x", -5.0, 5.0),
                ParamSpec::integer("n", 0, 9),
                ParamSpec::boolean("flag"),
                ParamSpec::string("colour", &["red", "green"]),
            ],
            ValueKind::Double,
        )
        .unwrap();
        let p = Primitives::from_spec(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..2000 {
            let kind = ValueKind::ALL[i % 4];
            let t = random_tree(kind, 7, &p, &mut rng).unwrap();
            let text = t.render(&p);
            assert_eq!(parse_tree(&text, kind, &p).unwrap(), t, "{text}");
        }
    }
}
