//! Tree evaluation under IEEE double semantics.
//!
//! Numeric faults (division by zero, log of a negative, overflow) are not
//! masked here; they surface as non-finite results and are sanitized by the
//! callers that aggregate predictions.

use crate::value::{Value, ValueKind};

use super::{ExprError, ExprTree, Op, Primitives, Terminal};

/// Result of evaluating a tree. Integers are `None` when they were cast from
/// a non-finite or out-of-range double.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalResult {
    Double(f64),
    Integer(Option<i64>),
    Boolean(bool),
    Str(String),
}

impl EvalResult {
    /// False exactly when a numeric result is infinite, NaN or an undefined integer.
    pub fn is_finite(&self) -> bool {
        match self {
            EvalResult::Double(x) => x.is_finite(),
            EvalResult::Integer(i) => i.is_some(),
            EvalResult::Boolean(_) | EvalResult::Str(_) => true,
        }
    }

    /// Numeric prediction; undefined integers and non-numeric results are NaN.
    pub fn as_f64(&self) -> f64 {
        match self {
            EvalResult::Double(x) => *x,
            EvalResult::Integer(Some(i)) => *i as f64,
            _ => f64::NAN,
        }
    }
}

/// Evaluates `tree` with its variables bound positionally to `binding`.
pub fn evaluate(tree: &ExprTree, binding: &[Value], prims: &Primitives) -> Result<EvalResult, ExprError> {
    let env = Env {
        binding,
        eq_tolerance: prims.eq_tolerance(),
    };
    Ok(match tree.kind() {
        ValueKind::Double => EvalResult::Double(env.double(tree)?),
        ValueKind::Integer => EvalResult::Integer(env.integer(tree)?),
        ValueKind::Boolean => EvalResult::Boolean(env.boolean(tree)?),
        ValueKind::String => EvalResult::Str(env.string(tree)?.to_string()),
    })
}

/// Numeric prediction of a tree whose root is double- or integer-valued.
pub fn evaluate_f64(tree: &ExprTree, binding: &[Value], prims: &Primitives) -> Result<f64, ExprError> {
    let env = Env {
        binding,
        eq_tolerance: prims.eq_tolerance(),
    };
    match tree.kind() {
        ValueKind::Double => env.double(tree),
        ValueKind::Integer => Ok(env.integer(tree)?.map_or(f64::NAN, |i| i as f64)),
        k => Err(ExprError::IllTyped(format!("expected a numeric tree, found {k}"))),
    }
}

struct Env<'a> {
    binding: &'a [Value],
    eq_tolerance: f64,
}

fn truncate(x: f64) -> Option<i64> {
    // i64::MAX is not representable; 2^63 is the first out-of-range double.
    const LIMIT: f64 = 9_223_372_036_854_775_808.0;
    if x.is_finite() && (-LIMIT..LIMIT).contains(&x) {
        Some(x.trunc() as i64)
    } else {
        None
    }
}

fn ill_typed(op: Op) -> ExprError {
    ExprError::IllTyped(format!("unexpected operator {} for its position", op.name()))
}

impl<'a> Env<'a> {
    fn var(&self, index: usize, kind: ValueKind) -> Result<&'a Value, ExprError> {
        self.binding
            .get(index)
            .filter(|v| v.kind() == kind)
            .ok_or(ExprError::UnboundVariable { index, kind })
    }

    fn double(&self, tree: &ExprTree) -> Result<f64, ExprError> {
        match tree {
            ExprTree::Leaf(Terminal::Var { index, kind }) => match self.var(*index, *kind)? {
                Value::Double(x) => Ok(*x),
                _ => Err(ExprError::UnboundVariable { index: *index, kind: *kind }),
            },
            ExprTree::Leaf(Terminal::Const(Value::Double(x)) | Terminal::Free(Value::Double(x))) => Ok(*x),
            ExprTree::Leaf(t) => Err(ExprError::IllTyped(format!("{t:?} is not a double"))),
            ExprTree::Node { op, children } => {
                let c = children.as_slice();
                Ok(match (op, c) {
                    (Op::Add, [a, b]) => self.double(a)? + self.double(b)?,
                    (Op::Sub, [a, b]) => self.double(a)? - self.double(b)?,
                    (Op::Mul, [a, b]) => self.double(a)? * self.double(b)?,
                    (Op::Div, [a, b]) => self.double(a)? / self.double(b)?,
                    (Op::Pow, [a, b]) => self.double(a)?.powf(self.double(b)?),
                    (Op::Root, [a, b]) => self.double(a)?.powf(1.0 / self.double(b)?),
                    (Op::ToDouble, [a]) => self.integer(a)?.map_or(f64::NAN, |i| i as f64),
                    (Op::Cos, [a]) => self.double(a)?.cos(),
                    (Op::Exp, [a]) => self.double(a)?.exp(),
                    (Op::Log, [a]) => self.double(a)?.ln(),
                    (Op::If(ValueKind::Double), [c, t, e]) => {
                        if self.boolean(c)? {
                            self.double(t)?
                        } else {
                            self.double(e)?
                        }
                    }
                    _ => return Err(ill_typed(*op)),
                })
            }
        }
    }

    fn integer(&self, tree: &ExprTree) -> Result<Option<i64>, ExprError> {
        match tree {
            ExprTree::Leaf(Terminal::Var { index, kind }) => match self.var(*index, *kind)? {
                Value::Integer(i) => Ok(Some(*i)),
                _ => Err(ExprError::UnboundVariable { index: *index, kind: *kind }),
            },
            ExprTree::Leaf(Terminal::Const(Value::Integer(i)) | Terminal::Free(Value::Integer(i))) => Ok(Some(*i)),
            ExprTree::Leaf(t) => Err(ExprError::IllTyped(format!("{t:?} is not an integer"))),
            ExprTree::Node { op, children } => match (op, children.as_slice()) {
                (Op::ToInt, [a]) => Ok(truncate(self.double(a)?)),
                (Op::If(ValueKind::Integer), [c, t, e]) => {
                    if self.boolean(c)? {
                        self.integer(t)
                    } else {
                        self.integer(e)
                    }
                }
                _ => Err(ill_typed(*op)),
            },
        }
    }

    fn boolean(&self, tree: &ExprTree) -> Result<bool, ExprError> {
        match tree {
            ExprTree::Leaf(Terminal::Var { index, kind }) => match self.var(*index, *kind)? {
                Value::Boolean(b) => Ok(*b),
                _ => Err(ExprError::UnboundVariable { index: *index, kind: *kind }),
            },
            ExprTree::Leaf(Terminal::Const(Value::Boolean(b))) => Ok(*b),
            ExprTree::Leaf(t) => Err(ExprError::IllTyped(format!("{t:?} is not a boolean"))),
            ExprTree::Node { op, children } => Ok(match (op, children.as_slice()) {
                (Op::And, [a, b]) => self.boolean(a)? && self.boolean(b)?,
                (Op::Or, [a, b]) => self.boolean(a)? || self.boolean(b)?,
                (Op::Lt, [a, b]) => self.double(a)? < self.double(b)?,
                (Op::Gt, [a, b]) => self.double(a)? > self.double(b)?,
                (Op::Eq, [a, b]) => self.boolean(a)? == self.boolean(b)?,
                (Op::EqArith, [a, b]) => {
                    let (x, y) = (self.double(a)?, self.double(b)?);
                    (x - y).abs() <= self.eq_tolerance * 1f64.max(x.abs()).max(y.abs())
                }
                (Op::EqString, [a, b]) => self.string(a)? == self.string(b)?,
                (Op::If(ValueKind::Boolean), [c, t, e]) => {
                    if self.boolean(c)? {
                        self.boolean(t)?
                    } else {
                        self.boolean(e)?
                    }
                }
                _ => return Err(ill_typed(*op)),
            }),
        }
    }

    fn string<'t>(&self, tree: &'t ExprTree) -> Result<&'t str, ExprError>
    where
        'a: 't,
    {
        match tree {
            ExprTree::Leaf(Terminal::Var { index, kind }) => match self.var(*index, *kind)? {
                Value::Str(s) => Ok(s.as_str()),
                _ => Err(ExprError::UnboundVariable { index: *index, kind: *kind }),
            },
            ExprTree::Leaf(Terminal::Const(Value::Str(s))) => Ok(s.as_str()),
            ExprTree::Leaf(t) => Err(ExprError::IllTyped(format!("{t:?} is not a string"))),
            ExprTree::Node { op, children } => match (op, children.as_slice()) {
                (Op::If(ValueKind::String), [c, t, e]) => {
                    if self.boolean(c)? {
                        self.string(t)
                    } else {
                        self.string(e)
                    }
                }
                _ => Err(ill_typed(*op)),
            },
        }
    }
}
