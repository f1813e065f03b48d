//! Strongly-typed expression trees: the candidate models evolved by the GP
//! engine and evaluated by the committee.
//!
//! Every operator has a fixed signature over [`ValueKind`]s and every leaf
//! carries a kind, so a tree is well-typed when each child produces the kind
//! its parent's signature expects. Crossover and mutation only ever swap
//! subtrees of equal kind, which keeps the whole population well-typed.

mod eval;
mod random;
mod text;

use rand::Rng;
use thiserror::Error;

use crate::spec_io::InterfaceSpec;
use crate::value::{Value, ValueKind};

pub use eval::{evaluate, evaluate_f64, EvalResult};
pub use random::{random_terminal, random_tree, random_tree_with, GrowMethod};
pub use text::parse_tree;

use ValueKind::{Boolean as B, Double as D, Integer as I, String as S};

/// Maximum tree depth used unless configured otherwise.
pub const DEFAULT_MAX_DEPTH: usize = 10;

/// Free constants are sampled from this closed interval.
pub const FREE_CONSTANT_RANGE: (f64, f64) = (-2.0, 2.0);

/// Default relative tolerance of the `EQArith` comparison.
pub const DEFAULT_EQ_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("variable #{index} is not bound to a {kind} value")]
    UnboundVariable { index: usize, kind: ValueKind },
    #[error("no terminals of kind {0} are available")]
    NoTerminals(ValueKind),
    #[error("ill-typed tree: {0}")]
    IllTyped(String),
    #[error("tree depth {depth} exceeds the maximum {max}")]
    DepthExceeded { depth: usize, max: usize },
    #[error("cannot parse expression at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
}

/// Non-terminal symbols with their fixed signatures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Root,
    /// integer → double
    ToDouble,
    Cos,
    Exp,
    Log,
    /// double → integer, truncating toward zero
    ToInt,
    And,
    Or,
    Lt,
    Gt,
    /// boolean equality
    Eq,
    EqArith,
    EqString,
    /// if-then-else producing the given kind
    If(ValueKind),
}

impl Op {
    pub const ALL: [Op; 22] = [
        Op::Add,
        Op::Sub,
        Op::Mul,
        Op::Div,
        Op::Pow,
        Op::Root,
        Op::ToDouble,
        Op::Cos,
        Op::Exp,
        Op::Log,
        Op::ToInt,
        Op::And,
        Op::Or,
        Op::Lt,
        Op::Gt,
        Op::Eq,
        Op::EqArith,
        Op::EqString,
        Op::If(D),
        Op::If(I),
        Op::If(B),
        Op::If(S),
    ];

    pub fn arg_kinds(self) -> &'static [ValueKind] {
        match self {
            Op::Add | Op::Sub | Op::Mul | Op::Div | Op::Pow | Op::Root => &[D, D],
            Op::Lt | Op::Gt | Op::EqArith => &[D, D],
            Op::Cos | Op::Exp | Op::Log | Op::ToInt => &[D],
            Op::ToDouble => &[I],
            Op::And | Op::Or | Op::Eq => &[B, B],
            Op::EqString => &[S, S],
            Op::If(D) => &[B, D, D],
            Op::If(I) => &[B, I, I],
            Op::If(B) => &[B, B, B],
            Op::If(S) => &[B, S, S],
        }
    }

    pub fn arity(self) -> usize {
        self.arg_kinds().len()
    }

    pub fn result_kind(self) -> ValueKind {
        match self {
            Op::Add | Op::Sub | Op::Mul | Op::Div | Op::Pow | Op::Root => D,
            Op::ToDouble | Op::Cos | Op::Exp | Op::Log => D,
            Op::ToInt => I,
            Op::And | Op::Or | Op::Lt | Op::Gt | Op::Eq | Op::EqArith | Op::EqString => B,
            Op::If(k) => k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Add => "Add",
            Op::Sub => "Sub",
            Op::Mul => "Mult",
            Op::Div => "Div",
            Op::Pow => "Pow",
            Op::Root => "Root",
            Op::ToDouble => "ToDouble",
            Op::Cos => "Cos",
            Op::Exp => "Exp",
            Op::Log => "Log",
            Op::ToInt => "ToInt",
            Op::And => "And",
            Op::Or => "Or",
            Op::Lt => "LT",
            Op::Gt => "GT",
            Op::Eq => "EQ",
            Op::EqArith => "EQArith",
            Op::EqString => "EQString",
            Op::If(_) => "If",
        }
    }
}

/// Leaf symbols.
#[derive(Debug, Clone, PartialEq)]
pub enum Terminal {
    /// Positional reference to an interface parameter.
    Var { index: usize, kind: ValueKind },
    /// Fixed constant: `-1.0`, `0`, `true`, `false` or a declared string literal.
    Const(Value),
    /// Ephemeral constant drawn from [`FREE_CONSTANT_RANGE`] when created.
    Free(Value),
}

impl Terminal {
    /// Numeric literal terminal: the fixed constant when `value` equals it,
    /// a free constant otherwise.
    pub fn numeric(value: Value) -> Terminal {
        match value {
            Value::Double(-1.0) => Terminal::Const(Value::Double(-1.0)),
            Value::Integer(0) => Terminal::Const(Value::Integer(0)),
            v => Terminal::Free(v),
        }
    }

    pub fn kind(&self) -> ValueKind {
        match self {
            Terminal::Var { kind, .. } => *kind,
            Terminal::Const(v) | Terminal::Free(v) => v.kind(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprTree {
    Leaf(Terminal),
    Node { op: Op, children: Vec<ExprTree> },
}

impl ExprTree {
    pub fn leaf(t: Terminal) -> Self {
        ExprTree::Leaf(t)
    }

    pub fn node(op: Op, children: Vec<ExprTree>) -> Self {
        ExprTree::Node { op, children }
    }

    pub fn var(index: usize, kind: ValueKind) -> Self {
        ExprTree::Leaf(Terminal::Var { index, kind })
    }

    pub fn double(x: f64) -> Self {
        ExprTree::Leaf(Terminal::numeric(Value::Double(x)))
    }

    pub fn kind(&self) -> ValueKind {
        match self {
            ExprTree::Leaf(t) => t.kind(),
            ExprTree::Node { op, .. } => op.result_kind(),
        }
    }

    /// 1 for a leaf, otherwise one more than the deepest child.
    pub fn depth(&self) -> usize {
        match self {
            ExprTree::Leaf(_) => 1,
            ExprTree::Node { children, .. } => 1 + children.iter().map(ExprTree::depth).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            ExprTree::Leaf(_) => 1,
            ExprTree::Node { children, .. } => 1 + children.iter().map(ExprTree::size).sum::<usize>(),
        }
    }

    /// Kind and level (root = 1) of every node, in preorder.
    pub fn node_kinds(&self) -> Vec<(ValueKind, usize)> {
        fn walk(t: &ExprTree, level: usize, out: &mut Vec<(ValueKind, usize)>) {
            out.push((t.kind(), level));
            if let ExprTree::Node { children, .. } = t {
                for c in children {
                    walk(c, level + 1, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.size());
        walk(self, 1, &mut out);
        out
    }

    /// The subtree rooted at preorder position `index`.
    pub fn subtree(&self, index: usize) -> Option<&ExprTree> {
        fn find<'a>(t: &'a ExprTree, index: &mut usize) -> Option<&'a ExprTree> {
            if *index == 0 {
                return Some(t);
            }
            *index -= 1;
            if let ExprTree::Node { children, .. } = t {
                for c in children {
                    if let Some(hit) = find(c, index) {
                        return Some(hit);
                    }
                }
            }
            None
        }
        let mut i = index;
        find(self, &mut i)
    }

    /// Copy of this tree with the subtree at preorder position `index`
    /// replaced by `replacement`.
    pub fn replace(&self, index: usize, replacement: ExprTree) -> ExprTree {
        fn rebuild(t: &ExprTree, pos: &mut usize, target: usize, repl: &mut Option<ExprTree>) -> ExprTree {
            if repl.is_none() {
                return t.clone();
            }
            if *pos == target {
                return repl.take().expect("checked above");
            }
            *pos += 1;
            match t {
                ExprTree::Leaf(_) => t.clone(),
                ExprTree::Node { op, children } => ExprTree::Node {
                    op: *op,
                    children: children.iter().map(|c| rebuild(c, pos, target, repl)).collect(),
                },
            }
        }
        let mut pos = 0;
        let mut repl = Some(replacement);
        rebuild(self, &mut pos, index, &mut repl)
    }

    /// Human-readable prefix rendering, e.g. `Mult(weight,Exp(-1.1518922634307343))`.
    pub fn render(&self, prims: &Primitives) -> String {
        let mut out = String::new();
        text::render_into(self, prims, &mut out);
        out
    }
}

/// The terminal and non-terminal sets available for one interface spec.
#[derive(Debug, Clone)]
pub struct Primitives {
    var_names: Vec<String>,
    var_kinds: Vec<ValueKind>,
    vars_by_kind: [Vec<usize>; 4],
    strings: Vec<String>,
    functions_by_kind: [Vec<Op>; 4],
    eq_tolerance: f64,
    output_kind: ValueKind,
}

impl Primitives {
    /// Builds the primitive sets for a spec. String literals are the union of
    /// the declared values of all string parameters, in declaration order.
    pub fn from_spec(spec: &InterfaceSpec) -> Self {
        let var_names: Vec<String> = spec.parameters.iter().map(|p| p.name.clone()).collect();
        let var_kinds: Vec<ValueKind> = spec.parameters.iter().map(|p| p.kind).collect();
        let mut strings: Vec<String> = Vec::new();
        for p in &spec.parameters {
            for v in p.values.iter().flatten() {
                if !strings.contains(v) {
                    strings.push(v.clone());
                }
            }
        }
        Self::new(var_names, var_kinds, strings).with_output_kind(spec.output.kind)
    }

    pub fn new(var_names: Vec<String>, var_kinds: Vec<ValueKind>, strings: Vec<String>) -> Self {
        let mut vars_by_kind: [Vec<usize>; 4] = Default::default();
        for (i, k) in var_kinds.iter().enumerate() {
            vars_by_kind[k.index()].push(i);
        }
        let has_strings = !vars_by_kind[S.index()].is_empty() || !strings.is_empty();
        let mut functions_by_kind: [Vec<Op>; 4] = Default::default();
        for op in Op::ALL {
            if !has_strings && op.arg_kinds().contains(&S) {
                continue;
            }
            functions_by_kind[op.result_kind().index()].push(op);
        }
        Primitives {
            var_names,
            var_kinds,
            vars_by_kind,
            strings,
            functions_by_kind,
            eq_tolerance: DEFAULT_EQ_TOLERANCE,
            output_kind: D,
        }
    }

    /// Kind of the model root, i.e. of the SUT output.
    pub fn with_output_kind(mut self, kind: ValueKind) -> Self {
        self.output_kind = kind;
        self
    }

    pub fn output_kind(&self) -> ValueKind {
        self.output_kind
    }

    pub fn with_eq_tolerance(mut self, tolerance: f64) -> Self {
        self.eq_tolerance = tolerance;
        self
    }

    pub fn eq_tolerance(&self) -> f64 {
        self.eq_tolerance
    }

    pub fn var_name(&self, index: usize) -> Option<&str> {
        self.var_names.get(index).map(String::as_str)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|n| n == name)
    }

    pub fn var_kind(&self, index: usize) -> Option<ValueKind> {
        self.var_kinds.get(index).copied()
    }

    pub fn vars_of(&self, kind: ValueKind) -> &[usize] {
        &self.vars_by_kind[kind.index()]
    }

    pub fn strings(&self) -> &[String] {
        &self.strings
    }

    pub fn functions_of(&self, kind: ValueKind) -> &[Op] {
        &self.functions_by_kind[kind.index()]
    }

    /// Number of distinct terminal choices of a kind.
    pub fn terminal_count(&self, kind: ValueKind) -> usize {
        let vars = self.vars_of(kind).len();
        match kind {
            D | I => vars + 2,
            B => vars + 2,
            S => vars + self.strings.len(),
        }
    }

    /// Checks well-typedness, variable bindings, constant ranges and the
    /// depth cap.
    pub fn check(&self, tree: &ExprTree, max_depth: usize) -> Result<(), ExprError> {
        let depth = tree.depth();
        if depth > max_depth {
            return Err(ExprError::DepthExceeded { depth, max: max_depth });
        }
        self.check_node(tree)
    }

    fn check_node(&self, tree: &ExprTree) -> Result<(), ExprError> {
        match tree {
            ExprTree::Leaf(Terminal::Var { index, kind }) => {
                if self.var_kind(*index) != Some(*kind) {
                    return Err(ExprError::UnboundVariable { index: *index, kind: *kind });
                }
            }
            ExprTree::Leaf(Terminal::Const(v)) => {
                let ok = match v {
                    Value::Double(x) => *x == -1.0,
                    Value::Integer(i) => *i == 0,
                    Value::Boolean(_) => true,
                    Value::Str(s) => self.strings.contains(s),
                };
                if !ok {
                    return Err(ExprError::IllTyped(format!("`{v}` is not a constant terminal")));
                }
            }
            ExprTree::Leaf(Terminal::Free(v)) => {
                let (lo, hi) = FREE_CONSTANT_RANGE;
                let ok = match v {
                    Value::Double(x) => (lo..=hi).contains(x),
                    Value::Integer(i) => (lo as i64..=hi as i64).contains(i),
                    _ => false,
                };
                if !ok {
                    return Err(ExprError::IllTyped(format!("free constant `{v}` out of range")));
                }
            }
            ExprTree::Node { op, children } => {
                let expected = op.arg_kinds();
                if children.len() != expected.len() {
                    return Err(ExprError::IllTyped(format!(
                        "{} expects {} children, found {}",
                        op.name(),
                        expected.len(),
                        children.len()
                    )));
                }
                for (c, k) in children.iter().zip(expected) {
                    if c.kind() != *k {
                        return Err(ExprError::IllTyped(format!(
                            "{} expects a {k} argument, found {}",
                            op.name(),
                            c.kind()
                        )));
                    }
                    self.check_node(c)?;
                }
            }
        }
        Ok(())
    }

    /// Samples a fresh free constant of a numeric kind.
    pub fn sample_free<R: Rng + ?Sized>(&self, kind: ValueKind, rng: &mut R) -> Value {
        let (lo, hi) = FREE_CONSTANT_RANGE;
        match kind {
            I => Value::Integer(rng.gen_range(lo as i64..=hi as i64)),
            _ => Value::Double(rng.gen_range(lo..=hi)),
        }
    }
}
