//! Recognizer for formulas of first-order Peano arithmetic.

use crate::constants;
use crate::construction::{classify, Construction, Properness};
use crate::expr::{Expr, ExprKind};
use crate::types::Type;

/// True when the construction represents a first-order arithmetic formula,
/// or a predicate `\x:i . phi` over one.
pub fn is_peano(c: &Construction) -> bool {
    match classify(c) {
        Properness::Proper { expr, .. } => is_peano_expr(&expr),
        Properness::Improper { .. } => false,
    }
}

pub fn is_peano_expr(e: &Expr) -> bool {
    match e.kind() {
        ExprKind::Abs(v, body) if v.ty == Type::Iota => is_formula(body),
        _ => is_formula(e),
    }
}

fn is_formula(e: &Expr) -> bool {
    if *e.ty() != Type::Omicron {
        return false;
    }
    let (head, args) = e.strip_apps();
    let Some(c) = head.as_const() else {
        return false;
    };
    match args.as_slice() {
        [] => *c == constants::truth() || *c == constants::falsity(),
        [a] if *c == constants::not() => is_formula(a),
        [a, b] if *c == constants::and() || *c == constants::or() || *c == constants::implies() => {
            is_formula(a) && is_formula(b)
        }
        [a, b] if *c == constants::eq(Type::Iota) => is_term(a) && is_term(b),
        [a, b] if *c == constants::eq(Type::fun(Type::Iota, Type::Omicron)) => is_quantifier(a, b),
        _ => false,
    }
}

/// `(\x:i . T) = (\x:i . phi)`, the unfolded universal quantifier.
fn is_quantifier(lhs: &Expr, rhs: &Expr) -> bool {
    match (lhs.kind(), rhs.kind()) {
        (ExprKind::Abs(x, t), ExprKind::Abs(y, body)) => {
            x == y && x.ty == Type::Iota && *t == constants::truth_expr(true) && is_formula(body)
        }
        _ => false,
    }
}

fn is_term(e: &Expr) -> bool {
    if *e.ty() != Type::Iota {
        return false;
    }
    match e.kind() {
        ExprKind::Var(_) => true,
        ExprKind::Const(c) => *c == constants::numeral(0),
        ExprKind::App(..) => {
            let (head, args) = e.strip_apps();
            let Some(c) = head.as_const() else {
                return false;
            };
            match args.as_slice() {
                [a] if *c == constants::succ() => is_term(a),
                [a, b] if *c == constants::plus() || *c == constants::times() => {
                    is_term(a) && is_term(b)
                }
                _ => false,
            }
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::encode;
    use crate::expr::Var;

    fn forall(x: Var, body: Expr) -> Expr {
        constants::equals(
            Expr::abs(x.clone(), constants::truth_expr(true)),
            Expr::abs(x, body),
        )
    }

    #[test]
    fn accepts_successor_reflexivity() {
        let x = Var::new("x", Type::Iota);
        let sx = constants::unary(constants::succ(), Expr::var(x.clone()));
        let f = forall(x, constants::equals(sx.clone(), sx));
        assert!(is_peano(&encode(&f).unwrap()));
    }

    #[test]
    fn rejects_higher_order_quantifier() {
        let f = Var::new("f", Type::fun(Type::Iota, Type::Omicron));
        let x = Expr::var(Var::new("x", Type::Iota));
        let body = Expr::app(Expr::var(f.clone()), x).unwrap();
        let e = constants::equals(
            Expr::abs(f.clone(), constants::truth_expr(true)),
            Expr::abs(f, body),
        );
        assert!(!is_peano(&encode(&e).unwrap()));
    }

    #[test]
    fn rejects_other_numerals() {
        let one = Expr::constant(constants::numeral(1));
        let e = constants::equals(one.clone(), one);
        assert!(!is_peano(&encode(&e).unwrap()));
    }
}
