use rand::Rng;

use crate::value::{Value, ValueKind};

use super::{ExprError, ExprTree, Primitives, Terminal};

/// Tree construction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowMethod {
    /// Non-terminals at every level above the depth cap.
    Full,
    /// Terminals and non-terminals mixed freely above the depth cap.
    Grow,
}

/// Draws one terminal of `kind` uniformly from the available terminal set.
pub fn random_terminal<R: Rng + ?Sized>(
    kind: ValueKind,
    prims: &Primitives,
    rng: &mut R,
) -> Result<Terminal, ExprError> {
    let count = prims.terminal_count(kind);
    if count == 0 {
        return Err(ExprError::NoTerminals(kind));
    }
    let vars = prims.vars_of(kind);
    let pick = rng.gen_range(0..count);
    if pick < vars.len() {
        return Ok(Terminal::Var { index: vars[pick], kind });
    }
    let rest = pick - vars.len();
    Ok(match kind {
        ValueKind::Double => match rest {
            0 => Terminal::Const(Value::Double(-1.0)),
            _ => Terminal::numeric(prims.sample_free(kind, rng)),
        },
        ValueKind::Integer => match rest {
            0 => Terminal::Const(Value::Integer(0)),
            _ => Terminal::numeric(prims.sample_free(kind, rng)),
        },
        ValueKind::Boolean => Terminal::Const(Value::Boolean(rest == 0)),
        ValueKind::String => Terminal::Const(Value::Str(prims.strings()[rest].clone())),
    })
}

/// Random well-typed tree of `kind` built with the grow method.
pub fn random_tree<R: Rng + ?Sized>(
    kind: ValueKind,
    max_depth: usize,
    prims: &Primitives,
    rng: &mut R,
) -> Result<ExprTree, ExprError> {
    random_tree_with(kind, max_depth, GrowMethod::Grow, prims, rng)
}

/// Random well-typed tree of `kind` whose depth never exceeds `max_depth`.
/// With [`GrowMethod::Full`] every branch reaches exactly `max_depth`.
pub fn random_tree_with<R: Rng + ?Sized>(
    kind: ValueKind,
    max_depth: usize,
    method: GrowMethod,
    prims: &Primitives,
    rng: &mut R,
) -> Result<ExprTree, ExprError> {
    assert!(max_depth >= 1, "max_depth must be positive");
    if prims.terminal_count(kind) == 0 {
        return Err(ExprError::NoTerminals(kind));
    }
    build(kind, max_depth, method, prims, rng)
}

fn build<R: Rng + ?Sized>(
    kind: ValueKind,
    remaining: usize,
    method: GrowMethod,
    prims: &Primitives,
    rng: &mut R,
) -> Result<ExprTree, ExprError> {
    let functions = prims.functions_of(kind);
    if remaining <= 1 || functions.is_empty() {
        return Ok(ExprTree::Leaf(random_terminal(kind, prims, rng)?));
    }
    let op = match method {
        GrowMethod::Full => functions[rng.gen_range(0..functions.len())],
        GrowMethod::Grow => {
            let terminals = prims.terminal_count(kind);
            let pick = rng.gen_range(0..terminals + functions.len());
            if pick < terminals {
                return Ok(ExprTree::Leaf(random_terminal(kind, prims, rng)?));
            }
            functions[pick - terminals]
        }
    };
    let children = op
        .arg_kinds()
        .iter()
        .map(|&k| build(k, remaining - 1, method, prims, rng))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExprTree::Node { op, children })
}
