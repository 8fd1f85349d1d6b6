//! Symbolic differentiation checked against numeric derivatives.

mod common;

use cttqe::construction::{decode, encode, Construction};
use cttqe::stdlib::poly::{is_poly, poly_diff};
use cttqe::{constants, Expr, ExprKind, Type, Var};
use rand::Rng;

use common::Gen;

/// Value of a polynomial expression with `x` at `at` and other variables
/// fixed.
fn eval(e: &Expr, at: f64) -> f64 {
    match e.kind() {
        ExprKind::Var(v) if &*v.name == "x" => at,
        ExprKind::Var(_) => 1.7,
        ExprKind::Const(c) => constants::numeral_value(c).expect("numeral") as f64,
        ExprKind::App(..) => {
            let (head, args) = e.strip_apps();
            let name = &*head.as_const().expect("operator").name;
            match (name, args.as_slice()) {
                ("+", [a, b]) => eval(a, at) + eval(b, at),
                ("*", [a, b]) => eval(a, at) * eval(b, at),
                ("^", [a, b]) => eval(a, at).powi(eval(b, at) as i32),
                ("S", [a]) => eval(a, at) + 1.0,
                _ => panic!("unexpected {e}"),
            }
        }
        _ => panic!("unexpected {e}"),
    }
}

fn numeric_derivative(e: &Expr, at: f64) -> f64 {
    let h = 1e-4;
    (eval(e, at + h) - eval(e, at - h)) / (2.0 * h)
}

fn generator() -> Gen {
    Gen::new(
        vec![Var::new("x", Type::Iota), Var::new("y", Type::Iota)],
        vec![
            constants::numeral(0),
            constants::numeral(1),
            constants::numeral(2),
            constants::numeral(3),
            constants::plus(),
            constants::times(),
            constants::pow(),
        ],
    )
}

#[test]
fn derivatives_match_central_differences() {
    let gen = generator();
    let x = Construction::QuotedVar(Var::new("x", Type::Iota));
    let mut rng = common::rng(44);
    let mut checked = 0;
    while checked < 500 {
        let depth = rng.gen_range(1..=5);
        let p = gen.expr(&mut rng, &Type::Iota, depth);
        let c = encode(&p).unwrap();
        if !is_poly(&c) {
            continue;
        }
        let d = decode(&poly_diff(&c, &x).unwrap()).unwrap();
        assert_eq!(*d.ty(), Type::Iota);
        for at in [-2.0, -0.5, 0.0, 1.0, 2.5] {
            let (want, got) = (numeric_derivative(&p, at), eval(&d, at));
            let tol = 1e-4 * want.abs().max(1.0);
            assert!(
                (want - got).abs() <= tol,
                "d/dx {p} = {d}: at {at} expected {want}, got {got}"
            );
        }
        checked += 1;
    }
}

#[test]
fn square_plus_identity() {
    let theory = cttqe::Theory::standard();
    let p = theory.parse("x:i * x:i + x:i").unwrap();
    let x = Construction::QuotedVar(Var::new("x", Type::Iota));
    let d = decode(&poly_diff(&encode(&p).unwrap(), &x).unwrap()).unwrap();
    for at in [-2.0, -1.0, 0.0, 1.0, 3.0] {
        assert_eq!(eval(&d, at), 2.0 * at + 1.0, "{d}");
    }
}

#[test]
fn exponents_must_be_literals() {
    let theory = cttqe::Theory::standard();
    let p = theory.parse("x:i ^ y:i").unwrap();
    assert!(!is_poly(&encode(&p).unwrap()));
    let q = theory.parse("\\x:i . x:i").unwrap();
    assert!(!is_poly(&encode(&q).unwrap()));
}
