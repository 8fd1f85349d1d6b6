//! Names and types of the constants the kernel knows about: the logical
//! constants, the defined connectives, arithmetic and the example constants.

use crate::expr::{Const, Expr};
use crate::types::Type;

pub const EQ: &str = "=";
pub const IS_VAR: &str = "is-var";
pub const IS_CON: &str = "is-con";
pub const APP: &str = "app";
pub const ABS: &str = "abs";
pub const QUO: &str = "quo";
pub const IS_EXPR_PREFIX: &str = "is-expr[";

pub const TRUE: &str = "T";
pub const FALSE: &str = "F";
pub const AND: &str = "/\\";
pub const OR: &str = "\\/";
pub const IMPLIES: &str = "=>";
pub const NOT: &str = "~";

pub const PLUS: &str = "+";
pub const TIMES: &str = "*";
pub const POW: &str = "^";
pub const SUCC: &str = "S";
pub const DERIV: &str = "deriv";

pub const MAKE_IMPLICATION: &str = "make-implication";
pub const IS_APP: &str = "is-app";
pub const IS_POLY: &str = "is-poly";
pub const IS_PEANO: &str = "is-peano";
pub const POLY_DIFF: &str = "poly-diff";
pub const IS_FREE_IN: &str = "is-free-in";

/// Constant used as the value of evaluations whose argument is improper or of
/// the wrong type, at type `eps`.
pub const UNSPECIFIED: &str = "unspecified";

pub fn eps() -> Type {
    Type::Epsilon
}

pub fn eps2() -> Type {
    Type::curried([Type::Epsilon, Type::Epsilon], Type::Epsilon)
}

pub fn eps_pred() -> Type {
    Type::fun(Type::Epsilon, Type::Omicron)
}

pub fn binop(ty: Type) -> Type {
    Type::curried([ty.clone(), ty.clone()], ty)
}

pub fn eq(ty: Type) -> Const {
    Const::new(EQ, Type::relation(ty))
}

pub fn app() -> Const {
    Const::new(APP, eps2())
}

pub fn abs() -> Const {
    Const::new(ABS, eps2())
}

pub fn quo() -> Const {
    Const::new(QUO, Type::fun(Type::Epsilon, Type::Epsilon))
}

pub fn is_var() -> Const {
    Const::new(IS_VAR, eps_pred())
}

pub fn is_con() -> Const {
    Const::new(IS_CON, eps_pred())
}

pub fn is_expr_name(ty: &Type) -> String {
    format!("{IS_EXPR_PREFIX}{ty}]")
}

pub fn is_expr(ty: &Type) -> Const {
    Const::new(is_expr_name(ty).as_str(), eps_pred())
}

/// Recovers the type index of an `is-expr[..]` constant name.
pub fn is_expr_index(name: &str) -> Option<Type> {
    let inner = name.strip_prefix(IS_EXPR_PREFIX)?.strip_suffix(']')?;
    crate::surface::parse_type(inner).ok()
}

pub fn truth() -> Const {
    Const::new(TRUE, Type::Omicron)
}

pub fn falsity() -> Const {
    Const::new(FALSE, Type::Omicron)
}

pub fn and() -> Const {
    Const::new(AND, binop(Type::Omicron))
}

pub fn or() -> Const {
    Const::new(OR, binop(Type::Omicron))
}

pub fn implies() -> Const {
    Const::new(IMPLIES, binop(Type::Omicron))
}

pub fn not() -> Const {
    Const::new(NOT, Type::fun(Type::Omicron, Type::Omicron))
}

pub fn plus() -> Const {
    Const::new(PLUS, binop(Type::Iota))
}

pub fn times() -> Const {
    Const::new(TIMES, binop(Type::Iota))
}

pub fn pow() -> Const {
    Const::new(POW, binop(Type::Iota))
}

pub fn succ() -> Const {
    Const::new(SUCC, Type::fun(Type::Iota, Type::Iota))
}

pub fn deriv() -> Const {
    let f = Type::fun(Type::Iota, Type::Iota);
    Const::new(DERIV, Type::fun(f.clone(), f))
}

pub fn numeral(n: u64) -> Const {
    Const::new(n.to_string().as_str(), Type::Iota)
}

pub fn is_numeral_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_digit())
}

pub fn numeral_value(c: &Const) -> Option<u64> {
    if c.ty == Type::Iota && is_numeral_name(&c.name) {
        c.name.parse().ok()
    } else {
        None
    }
}

pub fn make_implication() -> Const {
    Const::new(MAKE_IMPLICATION, eps2())
}

pub fn is_app() -> Const {
    Const::new(IS_APP, eps_pred())
}

pub fn is_poly() -> Const {
    Const::new(IS_POLY, eps_pred())
}

pub fn is_peano() -> Const {
    Const::new(IS_PEANO, eps_pred())
}

pub fn poly_diff() -> Const {
    Const::new(POLY_DIFF, eps2())
}

pub fn is_free_in() -> Const {
    Const::new(
        IS_FREE_IN,
        Type::curried([Type::Epsilon, Type::Epsilon], Type::Omicron),
    )
}

pub fn unspecified() -> Const {
    Const::new(UNSPECIFIED, Type::Epsilon)
}

/// `T` or `F` as an expression.
pub fn truth_expr(b: bool) -> Expr {
    Expr::constant(if b { truth() } else { falsity() })
}

/// Builds `c a b` for a binary constant; panics on ill-typed input, so use
/// only with arguments of the constant's declared types.
pub fn binary(c: Const, a: Expr, b: Expr) -> Expr {
    Expr::apps(Expr::constant(c), [a, b]).expect("binary constant applied at its type")
}

pub fn unary(c: Const, a: Expr) -> Expr {
    Expr::app(Expr::constant(c), a).expect("unary constant applied at its type")
}

/// `a = b`.
pub fn equals(a: Expr, b: Expr) -> Expr {
    let ty = a.ty().clone();
    binary(eq(ty), a, b)
}

/// Standard constants with a single fixed type, which the printer writes
/// without an ascription and the parser resolves from a bare name.
pub fn standard_fixed(name: &str) -> Option<Type> {
    let c = match name {
        TRUE => truth(),
        FALSE => falsity(),
        AND => and(),
        OR => or(),
        IMPLIES => implies(),
        NOT => not(),
        PLUS => plus(),
        TIMES => times(),
        POW => pow(),
        SUCC => succ(),
        DERIV => deriv(),
        APP => app(),
        ABS => abs(),
        QUO => quo(),
        IS_VAR => is_var(),
        IS_CON => is_con(),
        MAKE_IMPLICATION => make_implication(),
        IS_APP => is_app(),
        IS_POLY => is_poly(),
        IS_PEANO => is_peano(),
        POLY_DIFF => poly_diff(),
        IS_FREE_IN => is_free_in(),
        UNSPECIFIED => unspecified(),
        _ => return None,
    };
    Some(c.ty)
}
