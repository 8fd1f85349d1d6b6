//! Quasi-expressions: quotations with antiquotation holes, and their
//! translation into ordinary construction-valued expressions.

use thiserror::Error;

use crate::constants;
use crate::construction::ConstructionError;
use crate::expr::{Const, Expr, ExprKind, Var};
use crate::types::Type;

/// An expression with holes `,(A)` where `A` is any expression of type
/// `eps`. Holes may also stand in binder position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuasiExpr {
    AntiQuote(Expr),
    QVar(Var),
    QConst(Const),
    QApp(Box<QuasiExpr>, Box<QuasiExpr>),
    QAbsVar(Var, Box<QuasiExpr>),
    QAbsHole(Expr, Box<QuasiExpr>),
    QQuote(Box<QuasiExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasiError {
    #[error("antiquotation hole has type {0}, expected eps")]
    HoleNotEpsilon(Type),
}

impl QuasiExpr {
    /// Views an eval-free expression as a quasi-expression with no holes.
    pub fn embed(e: &Expr) -> Result<QuasiExpr, ConstructionError> {
        if !e.is_eval_free() {
            return Err(ConstructionError::NotEvalFree);
        }
        Ok(embed_unchecked(e))
    }

    pub fn hole(e: Expr) -> Result<QuasiExpr, QuasiError> {
        if *e.ty() != Type::Epsilon {
            return Err(QuasiError::HoleNotEpsilon(e.ty().clone()));
        }
        Ok(QuasiExpr::AntiQuote(e))
    }

    pub fn app(m: QuasiExpr, n: QuasiExpr) -> QuasiExpr {
        QuasiExpr::QApp(Box::new(m), Box::new(n))
    }

    pub fn hole_count(&self) -> usize {
        match self {
            QuasiExpr::AntiQuote(_) => 1,
            QuasiExpr::QVar(_) | QuasiExpr::QConst(_) => 0,
            QuasiExpr::QApp(m, n) => m.hole_count() + n.hole_count(),
            QuasiExpr::QAbsVar(_, n) | QuasiExpr::QQuote(n) => n.hole_count(),
            QuasiExpr::QAbsHole(_, n) => 1 + n.hole_count(),
        }
    }
}

fn embed_unchecked(e: &Expr) -> QuasiExpr {
    match e.kind() {
        ExprKind::Var(v) => QuasiExpr::QVar(v.clone()),
        ExprKind::Const(c) => QuasiExpr::QConst(c.clone()),
        ExprKind::App(f, a) => QuasiExpr::app(embed_unchecked(f), embed_unchecked(a)),
        ExprKind::Abs(v, b) => QuasiExpr::QAbsVar(v.clone(), Box::new(embed_unchecked(b))),
        ExprKind::Quote(b) => QuasiExpr::QQuote(Box::new(embed_unchecked(b))),
        ExprKind::Eval(..) => unreachable!("checked eval-free"),
    }
}

/// Translates a quasi-expression into the `eps`-typed expression it
/// abbreviates. Holes pass through unchanged; everything else becomes a
/// quoted atom or an application of `app`, `abs` or `quo`.
pub fn expand(m: &QuasiExpr) -> Result<Expr, QuasiError> {
    Ok(match m {
        QuasiExpr::AntiQuote(a) => {
            if *a.ty() != Type::Epsilon {
                return Err(QuasiError::HoleNotEpsilon(a.ty().clone()));
            }
            a.clone()
        }
        QuasiExpr::QVar(v) => Expr::quote(Expr::var(v.clone())).expect("atom"),
        QuasiExpr::QConst(c) => Expr::quote(Expr::constant(c.clone())).expect("atom"),
        QuasiExpr::QApp(a, b) => constants::binary(constants::app(), expand(a)?, expand(b)?),
        QuasiExpr::QAbsVar(v, b) => {
            let binder = Expr::quote(Expr::var(v.clone())).expect("atom");
            constants::binary(constants::abs(), binder, expand(b)?)
        }
        QuasiExpr::QAbsHole(h, b) => {
            if *h.ty() != Type::Epsilon {
                return Err(QuasiError::HoleNotEpsilon(h.ty().clone()));
            }
            constants::binary(constants::abs(), h.clone(), expand(b)?)
        }
        QuasiExpr::QQuote(b) => constants::unary(constants::quo(), expand(b)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{as_expr, encode};

    #[test]
    fn zero_holes_match_the_encoding() {
        let x = Var::new("x", Type::Iota);
        let e = Expr::abs(x.clone(), Expr::var(x));
        let q = QuasiExpr::embed(&e).unwrap();
        assert_eq!(q.hole_count(), 0);
        assert_eq!(expand(&q).unwrap(), as_expr(&encode(&e).unwrap()));
    }

    #[test]
    fn holes_pass_through() {
        let b = Expr::var(Var::new("B", Type::Epsilon));
        let a = QuasiExpr::QVar(Var::new("A", Type::Omicron));
        let conj = QuasiExpr::app(
            QuasiExpr::app(QuasiExpr::QConst(constants::and()), a),
            QuasiExpr::hole(b.clone()).unwrap(),
        );
        let neg = QuasiExpr::app(QuasiExpr::QConst(constants::not()), conj);
        let out = expand(&neg).unwrap();
        assert_eq!(*out.ty(), Type::Epsilon);
        // The hole is the last argument of the innermost `app`.
        let (_, args) = out.strip_apps();
        let (_, inner) = args[1].strip_apps();
        assert_eq!(*inner[1], b);
    }

    #[test]
    fn rejects_non_epsilon_holes() {
        let x = Expr::var(Var::new("x", Type::Iota));
        assert_eq!(
            QuasiExpr::hole(x.clone()),
            Err(QuasiError::HoleNotEpsilon(Type::Iota))
        );
        let raw = QuasiExpr::AntiQuote(x);
        assert_eq!(expand(&raw), Err(QuasiError::HoleNotEpsilon(Type::Iota)));
    }
}
