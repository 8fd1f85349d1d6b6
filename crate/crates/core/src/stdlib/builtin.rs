//! Constants with a computational meaning on constructions.

use crate::constants;
use crate::construction::{as_expr, classify, from_expr, Construction, Properness};
use crate::expr::{free_status, Const, Expr, FreeStatus};
use crate::stdlib::{peano, poly};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Equality at `eps`.
    EqEps,
    IsVar,
    IsCon,
    App,
    Abs,
    Quo,
    IsExpr(Type),
    IsPoly,
    IsPeano,
    PolyDiff,
    IsFreeIn,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinValue {
    Truth(bool),
    Constr(Construction),
}

impl BuiltinValue {
    pub fn to_expr(&self) -> Expr {
        match self {
            BuiltinValue::Truth(b) => constants::truth_expr(*b),
            BuiltinValue::Constr(c) => as_expr(c),
        }
    }
}

impl Builtin {
    pub fn of(c: &Const) -> Option<Builtin> {
        let b = match &*c.name {
            constants::EQ if c.ty == Type::relation(Type::Epsilon) => Builtin::EqEps,
            constants::IS_VAR => Builtin::IsVar,
            constants::IS_CON => Builtin::IsCon,
            constants::APP => Builtin::App,
            constants::ABS => Builtin::Abs,
            constants::QUO => Builtin::Quo,
            constants::IS_POLY => Builtin::IsPoly,
            constants::IS_PEANO => Builtin::IsPeano,
            constants::POLY_DIFF => Builtin::PolyDiff,
            constants::IS_FREE_IN => Builtin::IsFreeIn,
            name => Builtin::IsExpr(constants::is_expr_index(name)?),
        };
        (b.constant() == *c).then_some(b)
    }

    pub fn constant(&self) -> Const {
        match self {
            Builtin::EqEps => constants::eq(Type::Epsilon),
            Builtin::IsVar => constants::is_var(),
            Builtin::IsCon => constants::is_con(),
            Builtin::App => constants::app(),
            Builtin::Abs => constants::abs(),
            Builtin::Quo => constants::quo(),
            Builtin::IsExpr(ty) => constants::is_expr(ty),
            Builtin::IsPoly => constants::is_poly(),
            Builtin::IsPeano => constants::is_peano(),
            Builtin::PolyDiff => constants::poly_diff(),
            Builtin::IsFreeIn => constants::is_free_in(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Builtin::EqEps
            | Builtin::App
            | Builtin::Abs
            | Builtin::PolyDiff
            | Builtin::IsFreeIn => 2,
            _ => 1,
        }
    }

    /// The value on the given constructions. `None` only for `poly-diff`
    /// outside its domain, where the result is left unspecified.
    pub fn compute(&self, args: &[Construction]) -> Option<BuiltinValue> {
        use BuiltinValue::*;
        if args.len() != self.arity() {
            return None;
        }
        Some(match self {
            Builtin::EqEps => Truth(args[0] == args[1]),
            Builtin::IsVar => Truth(matches!(args[0], Construction::QuotedVar(_))),
            Builtin::IsCon => Truth(matches!(args[0], Construction::QuotedConst(_))),
            Builtin::App => Constr(Construction::app(args[0].clone(), args[1].clone())),
            Builtin::Abs => Constr(Construction::abs(args[0].clone(), args[1].clone())),
            Builtin::Quo => Constr(Construction::quo(args[0].clone())),
            Builtin::IsExpr(ty) => Truth(classify(&args[0]).proper_at(ty).is_some()),
            Builtin::IsPoly => Truth(poly::is_poly(&args[0])),
            Builtin::IsPeano => Truth(peano::is_peano(&args[0])),
            Builtin::PolyDiff => Constr(poly::poly_diff(&args[0], &args[1]).ok()?),
            Builtin::IsFreeIn => Truth(is_free_in_value(&args[0], &args[1])),
        })
    }
}

/// The interpretation of `is-free-in`: true exactly when the first argument
/// quotes a variable that is free in the expression the second represents.
pub fn is_free_in_value(xq: &Construction, c: &Construction) -> bool {
    let Construction::QuotedVar(x) = xq else {
        return false;
    };
    match classify(c) {
        Properness::Proper { expr, .. } => free_status(x, &expr) == FreeStatus::Free,
        Properness::Improper { .. } => false,
    }
}

/// One computation step at the root: a builtin applied to construction
/// literals, replaced by its value. Absent when the arguments are not
/// literals, when the builtin is undefined there, or when the redex is
/// already its own value (a literal built with `app`, `abs` or `quo`).
pub fn builtin_step(e: &Expr) -> Option<Expr> {
    let (head, args) = e.strip_apps();
    let b = Builtin::of(head.as_const()?)?;
    if args.len() != b.arity() {
        return None;
    }
    let vals = args
        .iter()
        .map(|a| from_expr(a).ok())
        .collect::<Option<Vec<_>>>()?;
    let out = b.compute(&vals)?.to_expr();
    (out != *e).then_some(out)
}
