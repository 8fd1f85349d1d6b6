//! Polynomials over individuals and their symbolic derivative.

use thiserror::Error;

use crate::constants;
use crate::construction::{classify, encode, Construction, Properness};
use crate::expr::{Expr, ExprKind, Var};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("not a polynomial: {0}")]
    NotAPolynomial(String),
    #[error("not a quoted variable of type i: {0}")]
    NotAVariable(String),
}

/// Polynomial syntax: variables of type `i`, numerals, `+`, `*` and powers
/// with a numeral exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Poly {
    Num(u64),
    Var(Var),
    Add(Box<Poly>, Box<Poly>),
    Mul(Box<Poly>, Box<Poly>),
    Pow(Box<Poly>, u64),
}

use Poly::*;

fn add(a: Poly, b: Poly) -> Poly {
    Add(Box::new(a), Box::new(b))
}

fn mul(a: Poly, b: Poly) -> Poly {
    Mul(Box::new(a), Box::new(b))
}

impl Poly {
    /// Reads a polynomial off an expression, if it is one.
    pub fn from_expr(e: &Expr) -> Option<Poly> {
        if *e.ty() != Type::Iota {
            return None;
        }
        match e.kind() {
            ExprKind::Var(v) => Some(Var(v.clone())),
            ExprKind::Const(c) => constants::numeral_value(c).map(Num),
            ExprKind::App(..) => {
                let (head, args) = e.strip_apps();
                let c = head.as_const()?;
                if args.len() != 2 {
                    return None;
                }
                if *c == constants::plus() {
                    Some(add(Poly::from_expr(args[0])?, Poly::from_expr(args[1])?))
                } else if *c == constants::times() {
                    Some(mul(Poly::from_expr(args[0])?, Poly::from_expr(args[1])?))
                } else if *c == constants::pow() {
                    let n = constants::numeral_value(args[1].as_const()?)?;
                    Some(Pow(Box::new(Poly::from_expr(args[0])?), n))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            Num(n) => Expr::constant(constants::numeral(*n)),
            Var(v) => Expr::var(v.clone()),
            Add(a, b) => constants::binary(constants::plus(), a.to_expr(), b.to_expr()),
            Mul(a, b) => constants::binary(constants::times(), a.to_expr(), b.to_expr()),
            Pow(a, n) => constants::binary(
                constants::pow(),
                a.to_expr(),
                Expr::constant(constants::numeral(*n)),
            ),
        }
    }

    /// Derivative with respect to `x`, before simplification.
    pub fn diff(&self, x: &Var) -> Poly {
        match self {
            Num(_) => Num(0),
            Var(v) => Num(u64::from(v == x)),
            Add(a, b) => add(a.diff(x), b.diff(x)),
            Mul(a, b) => add(mul(a.diff(x), (**b).clone()), mul((**a).clone(), b.diff(x))),
            Pow(_, 0) => Num(0),
            Pow(u, n) => mul(mul(Num(*n), Pow(u.clone(), n - 1)), u.diff(x)),
        }
    }

    /// Rewrites to a fixpoint with unit absorption, numeral folding and
    /// collection of like terms. Folding stops at arithmetic overflow.
    pub fn simplify(&self) -> Poly {
        let mut cur = self.clone();
        loop {
            let next = simplify_once(&cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Value under an assignment of integers to variables.
    pub fn eval_f64(&self, env: &dyn Fn(&Var) -> f64) -> f64 {
        match self {
            Num(n) => *n as f64,
            Var(v) => env(v),
            Add(a, b) => a.eval_f64(env) + b.eval_f64(env),
            Mul(a, b) => a.eval_f64(env) * b.eval_f64(env),
            Pow(a, n) => a.eval_f64(env).powi(*n as i32),
        }
    }
}

fn split_coeff(p: &Poly) -> (u64, &Poly) {
    match p {
        Mul(a, b) => match **a {
            Num(n) => (n, b),
            _ => (1, p),
        },
        _ => (1, p),
    }
}

fn simplify_once(p: &Poly) -> Poly {
    match p {
        Num(_) | Var(_) => p.clone(),
        Add(a, b) => {
            let (a, b) = (simplify_once(a), simplify_once(b));
            match (&a, &b) {
                (Num(0), _) => b,
                (_, Num(0)) => a,
                (Num(x), Num(y)) => x.checked_add(*y).map(Num).unwrap_or_else(|| add(a, b)),
                _ => {
                    let ((n, u), (m, w)) = (split_coeff(&a), split_coeff(&b));
                    if u == w && !matches!(u, Num(_)) {
                        if let Some(k) = n.checked_add(m) {
                            return mul(Num(k), u.clone());
                        }
                    }
                    add(a, b)
                }
            }
        }
        Mul(a, b) => {
            let (a, b) = (simplify_once(a), simplify_once(b));
            match (&a, &b) {
                (Num(0), _) | (_, Num(0)) => Num(0),
                (Num(1), _) => b,
                (_, Num(1)) => a,
                (Num(x), Num(y)) => x.checked_mul(*y).map(Num).unwrap_or_else(|| mul(a, b)),
                (Num(n), Mul(c, u)) => match **c {
                    Num(m) => match n.checked_mul(m) {
                        Some(k) => mul(Num(k), (**u).clone()),
                        None => mul(a, b),
                    },
                    _ => mul(a, b),
                },
                (_, Num(_)) => mul(b, a),
                _ => mul(a, b),
            }
        }
        Pow(a, n) => {
            let a = simplify_once(a);
            match (&a, n) {
                (_, 0) => Num(1),
                (_, 1) => a,
                (Num(x), _) => match u32::try_from(*n).ok().and_then(|k| x.checked_pow(k)) {
                    Some(v) => Num(v),
                    None => Pow(Box::new(a), *n),
                },
                _ => Pow(Box::new(a), *n),
            }
        }
    }
}

/// True when the construction represents a polynomial of type `i`.
pub fn is_poly(c: &Construction) -> bool {
    match classify(c) {
        Properness::Proper { expr, .. } => Poly::from_expr(&expr).is_some(),
        Properness::Improper { .. } => false,
    }
}

/// Differentiates the polynomial represented by `v` with respect to the
/// variable quoted by `x`, returning the simplified derivative.
pub fn poly_diff(v: &Construction, x: &Construction) -> Result<Construction, PolyError> {
    let var = match x {
        Construction::QuotedVar(var) if var.ty == Type::Iota => var,
        other => return Err(PolyError::NotAVariable(other.to_string())),
    };
    let poly = match classify(v) {
        Properness::Proper { expr, .. } => Poly::from_expr(&expr),
        Properness::Improper { .. } => None,
    }
    .ok_or_else(|| PolyError::NotAPolynomial(v.to_string()))?;
    let d = poly.diff(var).simplify();
    Ok(encode(&d.to_expr()).expect("polynomials are eval-free"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Var {
        Var::new("x", Type::Iota)
    }

    fn qx() -> Construction {
        Construction::QuotedVar(x())
    }

    #[test]
    fn square_differentiates_to_twice_x() {
        let sq = Pow(Box::new(Var(x())), 2);
        let d = poly_diff(&encode(&sq.to_expr()).unwrap(), &qx()).unwrap();
        let expected = mul(Num(2), Var(x()));
        assert_eq!(d, encode(&expected.to_expr()).unwrap());
    }

    #[test]
    fn constants_differentiate_to_zero() {
        let d = poly_diff(&encode(&Num(7).to_expr()).unwrap(), &qx()).unwrap();
        assert_eq!(d, encode(&Num(0).to_expr()).unwrap());
    }

    #[test]
    fn like_terms_are_collected() {
        let p = add(mul(Var(x()), Var(x())), Var(x()));
        assert_eq!(p.diff(&x()).simplify(), add(mul(Num(2), Var(x())), Num(1)));
    }

    #[test]
    fn preconditions() {
        let id = Expr::abs(x(), Expr::var(x()));
        assert!(!is_poly(&encode(&id).unwrap()));
        assert!(matches!(
            poly_diff(&encode(&id).unwrap(), &qx()),
            Err(PolyError::NotAPolynomial(_))
        ));
        let c = Construction::QuotedConst(constants::numeral(1));
        assert!(matches!(
            poly_diff(&qx(), &c),
            Err(PolyError::NotAVariable(_))
        ));
    }
}
