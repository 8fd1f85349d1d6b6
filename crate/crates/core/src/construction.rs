//! Constructions: the inductive type of syntax trees, the encoding of
//! eval-free expressions into it, and its partial inverse.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::constants;
use crate::expr::{Const, Expr, ExprKind, TypeError, Var};
use crate::stdlib::builtin::{Builtin, BuiltinValue};
use crate::types::Type;

/// A syntax tree built from quoted atoms and the constructors `app`, `abs`
/// and `quo`. Proper and improper trees alike.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    QuotedVar(Var),
    QuotedConst(Const),
    App(Arc<Construction>, Arc<Construction>),
    Abs(Arc<Construction>, Arc<Construction>),
    Quo(Arc<Construction>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("cannot encode an expression containing an evaluation")]
    NotEvalFree,
    #[error("improper construction at {}: {reason}", fmt_path(.path))]
    ImproperConstruction { path: Vec<usize>, reason: String },
    #[error("not a construction literal: {0}")]
    NotAConstructionLiteral(String),
    #[error("expected a quoted variable, found {0}")]
    NotAQuotedVariable(String),
}

/// Result of checking whether a construction is in the range of the encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Properness {
    Proper {
        ty: Type,
        expr: Expr,
    },
    /// `path` indexes children: 0/1 for the operands of `app` and `abs`, 0
    /// for the operand of `quo`.
    Improper {
        path: Vec<usize>,
        reason: String,
    },
}

impl Properness {
    pub fn is_proper(&self) -> bool {
        matches!(self, Properness::Proper { .. })
    }

    pub fn proper_at(&self, target: &Type) -> Option<&Expr> {
        match self {
            Properness::Proper { ty, expr } if ty == target => Some(expr),
            _ => None,
        }
    }
}

pub(crate) fn fmt_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl Construction {
    pub fn app(a: Construction, b: Construction) -> Construction {
        Construction::App(Arc::new(a), Arc::new(b))
    }

    pub fn abs(a: Construction, b: Construction) -> Construction {
        Construction::Abs(Arc::new(a), Arc::new(b))
    }

    pub fn quo(a: Construction) -> Construction {
        Construction::Quo(Arc::new(a))
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            Construction::QuotedVar(_) | Construction::QuotedConst(_)
        )
    }

    pub fn as_quoted_var(&self) -> Option<&Var> {
        match self {
            Construction::QuotedVar(v) => Some(v),
            _ => None,
        }
    }

    /// Atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Construction::QuotedVar(_) | Construction::QuotedConst(_) => 1,
            Construction::App(a, b) | Construction::Abs(a, b) => 1 + a.depth().max(b.depth()),
            Construction::Quo(a) => 1 + a.depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Construction::QuotedVar(_) | Construction::QuotedConst(_) => 1,
            Construction::App(a, b) | Construction::Abs(a, b) => 1 + a.size() + b.size(),
            Construction::Quo(a) => 1 + a.size(),
        }
    }

    /// Whether `⌜v⌝` occurs anywhere in the tree.
    pub fn mentions_var(&self, v: &Var) -> bool {
        match self {
            Construction::QuotedVar(w) => w == v,
            Construction::QuotedConst(_) => false,
            Construction::App(a, b) | Construction::Abs(a, b) => {
                a.mentions_var(v) || b.mentions_var(v)
            }
            Construction::Quo(a) => a.mentions_var(v),
        }
    }

    /// All constructions of depth at most `max_depth` over the given atoms,
    /// ordered by depth and then structurally.
    pub fn enumerate(atoms: &[Construction], max_depth: usize) -> Vec<Construction> {
        if max_depth == 0 {
            return Vec::new();
        }
        // layers[d] holds the constructions of depth exactly d + 1.
        let mut layers: Vec<Vec<Construction>> = vec![atoms.to_vec()];
        for d in 1..max_depth {
            let below: Vec<&Construction> = layers.iter().flatten().collect();
            let prev = &layers[d - 1];
            let mut layer = Vec::new();
            for a in &below {
                for b in &below {
                    if a.depth() == d || b.depth() == d {
                        layer.push(Construction::app((*a).clone(), (*b).clone()));
                        layer.push(Construction::abs((*a).clone(), (*b).clone()));
                    }
                }
            }
            for a in prev {
                layer.push(Construction::quo(a.clone()));
            }
            layers.push(layer);
        }
        layers.into_iter().flatten().collect()
    }
}

/// The encoding of an eval-free expression as the construction representing
/// its syntax tree.
pub fn encode(e: &Expr) -> Result<Construction, ConstructionError> {
    if !e.is_eval_free() {
        return Err(ConstructionError::NotEvalFree);
    }
    Ok(encode_unchecked(e))
}

fn encode_unchecked(e: &Expr) -> Construction {
    match e.kind() {
        ExprKind::Var(v) => Construction::QuotedVar(v.clone()),
        ExprKind::Const(c) => Construction::QuotedConst(c.clone()),
        ExprKind::App(f, a) => Construction::app(encode_unchecked(f), encode_unchecked(a)),
        ExprKind::Abs(v, b) => {
            Construction::abs(Construction::QuotedVar(v.clone()), encode_unchecked(b))
        }
        ExprKind::Quote(b) => Construction::quo(encode_unchecked(b)),
        ExprKind::Eval(..) => unreachable!("checked eval-free"),
    }
}

/// Type reconstruction over a construction: proper exactly when it decodes
/// to a well-typed eval-free expression.
pub fn classify(c: &Construction) -> Properness {
    let mut path = Vec::new();
    match decode_at(c, &mut path) {
        Ok(expr) => Properness::Proper {
            ty: expr.ty().clone(),
            expr,
        },
        Err((path, reason)) => Properness::Improper { path, reason },
    }
}

fn decode_at(c: &Construction, path: &mut Vec<usize>) -> Result<Expr, (Vec<usize>, String)> {
    match c {
        Construction::QuotedVar(v) => Ok(Expr::var(v.clone())),
        Construction::QuotedConst(k) => Ok(Expr::constant(k.clone())),
        Construction::App(a, b) => {
            path.push(0);
            let f = decode_at(a, path)?;
            path.pop();
            path.push(1);
            let x = decode_at(b, path)?;
            path.pop();
            Expr::app(f, x).map_err(|e| (path.clone(), e.to_string()))
        }
        Construction::Abs(a, b) => {
            let Construction::QuotedVar(v) = &**a else {
                path.push(0);
                let here = path.clone();
                path.pop();
                return Err((here, "abstraction binder is not a quoted variable".into()));
            };
            path.push(1);
            let body = decode_at(b, path)?;
            path.pop();
            Ok(Expr::abs(v.clone(), body))
        }
        Construction::Quo(a) => {
            path.push(0);
            let body = decode_at(a, path)?;
            path.pop();
            Expr::quote(body).map_err(|e: TypeError| (path.clone(), e.to_string()))
        }
    }
}

/// Inverse of [`encode`] on proper constructions.
pub fn decode(c: &Construction) -> Result<Expr, ConstructionError> {
    match classify(c) {
        Properness::Proper { expr, .. } => Ok(expr),
        Properness::Improper { path, reason } => {
            Err(ConstructionError::ImproperConstruction { path, reason })
        }
    }
}

/// The type-`eps` expression spelling out a construction: quoted atoms and
/// applications of `app`, `abs` and `quo`.
pub fn as_expr(c: &Construction) -> Expr {
    match c {
        Construction::QuotedVar(v) => Expr::quote(Expr::var(v.clone())).expect("atom"),
        Construction::QuotedConst(k) => Expr::quote(Expr::constant(k.clone())).expect("atom"),
        Construction::App(a, b) => constants::binary(constants::app(), as_expr(a), as_expr(b)),
        Construction::Abs(a, b) => constants::binary(constants::abs(), as_expr(a), as_expr(b)),
        Construction::Quo(a) => constants::unary(constants::quo(), as_expr(a)),
    }
}

/// Reads a construction literal back. Only the literal shapes produced by
/// [`as_expr`] are accepted; nothing is unfolded or evaluated.
pub fn from_expr(e: &Expr) -> Result<Construction, ConstructionError> {
    literal(e).ok_or_else(|| ConstructionError::NotAConstructionLiteral(e.to_string()))
}

fn literal(e: &Expr) -> Option<Construction> {
    match e.kind() {
        ExprKind::Quote(b) => match b.kind() {
            ExprKind::Var(v) => Some(Construction::QuotedVar(v.clone())),
            ExprKind::Const(k) => Some(Construction::QuotedConst(k.clone())),
            _ => None,
        },
        ExprKind::App(..) => {
            let (head, args) = e.strip_apps();
            let head = head.as_const()?;
            match args.as_slice() {
                [a, b] if *head == constants::app() => {
                    Some(Construction::app(literal(a)?, literal(b)?))
                }
                [a, b] if *head == constants::abs() => {
                    Some(Construction::abs(literal(a)?, literal(b)?))
                }
                [a] if *head == constants::quo() => Some(Construction::quo(literal(a)?)),
                _ => None,
            }
        }
        _ => None,
    }
}

pub fn is_literal(e: &Expr) -> bool {
    literal(e).is_some()
}

/// Value of a closed construction-valued expression built from quotations,
/// syntax constructors and computable builtins, if it is one.
pub fn ground_value(e: &Expr) -> Option<Construction> {
    match e.kind() {
        ExprKind::Quote(b) => Some(encode_unchecked(b)),
        ExprKind::App(..) => {
            let (head, args) = e.strip_apps();
            let builtin = Builtin::of(head.as_const()?)?;
            if builtin.arity() != args.len() {
                return None;
            }
            let vals = args
                .iter()
                .map(|a| ground_value(a))
                .collect::<Option<Vec<_>>>()?;
            match builtin.compute(&vals)? {
                BuiltinValue::Constr(c) => Some(c),
                BuiltinValue::Truth(_) => None,
            }
        }
        _ => None,
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&as_expr(self), f)
    }
}

impl fmt::Debug for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&as_expr(self), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(name: &str, ty: Type) -> Construction {
        Construction::QuotedVar(Var::new(name, ty))
    }

    #[test]
    fn encodes_atoms_and_binders() {
        let x = Var::new("x", Type::Iota);
        assert_eq!(
            encode(&Expr::var(x.clone())).unwrap(),
            Construction::QuotedVar(x.clone())
        );
        let id = Expr::abs(x.clone(), Expr::var(x.clone()));
        assert_eq!(
            encode(&id).unwrap(),
            Construction::abs(qv("x", Type::Iota), qv("x", Type::Iota))
        );
        let c = Const::new("c", Type::Omicron);
        let q = Expr::quote(Expr::constant(c.clone())).unwrap();
        assert_eq!(
            encode(&q).unwrap(),
            Construction::quo(Construction::QuotedConst(c))
        );
    }

    #[test]
    fn refuses_evaluations() {
        let y = Expr::var(Var::new("y", Type::Epsilon));
        let e = Expr::eval(y, Type::Iota).unwrap();
        assert_eq!(encode(&e), Err(ConstructionError::NotEvalFree));
    }

    #[test]
    fn self_application_is_improper() {
        let xx = Construction::app(qv("x", Type::Iota), qv("x", Type::Iota));
        assert!(!classify(&xx).is_proper());
        assert!(matches!(
            decode(&xx),
            Err(ConstructionError::ImproperConstruction { .. })
        ));
    }

    #[test]
    fn abstraction_needs_a_quoted_variable_binder() {
        let q = qv("x", Type::Iota);
        let bad = Construction::abs(Construction::app(q.clone(), q.clone()), q.clone());
        match classify(&bad) {
            Properness::Improper { path, .. } => assert_eq!(path, vec![0]),
            other => panic!("expected improper, got {other:?}"),
        }
        let c = Construction::QuotedConst(Const::new("c", Type::Iota));
        assert!(!classify(&Construction::abs(c, q)).is_proper());
    }

    #[test]
    fn improper_reason_points_at_the_failing_node() {
        let x = Var::new("x", Type::Iota);
        let f = Var::new("f", Type::fun(Type::Iota, Type::Iota));
        let inner = Construction::app(
            Construction::QuotedVar(x.clone()),
            Construction::QuotedVar(x.clone()),
        );
        let c = Construction::app(Construction::QuotedVar(f), inner);
        match classify(&c) {
            Properness::Improper { path, .. } => assert_eq!(path, vec![1]),
            other => panic!("expected improper, got {other:?}"),
        }
    }

    #[test]
    fn classify_recovers_type_and_expression() {
        let x = Var::new("x", Type::Iota);
        let id = Expr::abs(x.clone(), Expr::var(x));
        let c = encode(&id).unwrap();
        assert_eq!(
            classify(&c),
            Properness::Proper {
                ty: Type::fun(Type::Iota, Type::Iota),
                expr: id
            }
        );
    }

    #[test]
    fn literal_embedding() {
        let x = Var::new("x", Type::Iota);
        let c = Construction::QuotedVar(x.clone());
        assert_eq!(as_expr(&c), Expr::quote(Expr::var(x)).unwrap());
        let y = Expr::var(Var::new("y", Type::Epsilon));
        assert!(matches!(
            from_expr(&y),
            Err(ConstructionError::NotAConstructionLiteral(_))
        ));
        let nested = Construction::quo(Construction::abs(c.clone(), c.clone()));
        assert_eq!(from_expr(&as_expr(&nested)).unwrap(), nested);
    }

    #[test]
    fn quote_of_compound_is_ground_but_not_literal() {
        let x = Var::new("x", Type::Iota);
        let id = Expr::abs(x.clone(), Expr::var(x));
        let q = Expr::quote(id.clone()).unwrap();
        assert!(!is_literal(&q));
        assert_eq!(ground_value(&q), Some(encode(&id).unwrap()));
        assert_eq!(ground_value(&Expr::var(Var::new("y", Type::Epsilon))), None);
    }

    #[test]
    fn enumeration_counts() {
        let atoms = vec![qv("x", Type::Iota), qv("y", Type::Iota)];
        assert_eq!(Construction::enumerate(&atoms, 1).len(), 2);
        // depth 2: 2 atoms, app/abs over 2x2 pairs, quo of each atom.
        assert_eq!(Construction::enumerate(&atoms, 2).len(), 2 + 8 + 2);
        // depth 3 adds 2 * (12^2 - 2^2) + 10 new trees.
        assert_eq!(Construction::enumerate(&atoms, 3).len(), 12 + 280 + 10);
    }
}
