//! Printing with infix sugar and minimal parentheses.

use crate::constants;
use crate::expr::{Const, Expr, ExprKind, Var};
use crate::surface::lexer::is_identifier;
use crate::types::Type;

const BINDER: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const EQ: u8 = 4;
const NOT: u8 = 5;
const ADD: u8 = 6;
const MUL: u8 = 7;
const POW: u8 = 8;
const APP: u8 = 9;
const ATOM: u8 = 10;

pub fn print_type_ascription(ty: &Type) -> String {
    if ty.is_fun() {
        format!("({ty})")
    } else {
        ty.to_string()
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut p = Printer {
        out: String::new(),
        bound: Vec::new(),
    };
    p.go(e, BINDER, true);
    p.out
}

struct Printer {
    out: String,
    bound: Vec<Var>,
}

enum View<'a> {
    Binder(Binderish<'a>),
    Infix(u8, &'static str, &'a Expr, &'a Expr),
    Not(&'a Expr),
    App(&'a Expr, &'a Expr),
    Atom,
}

enum Binderish<'a> {
    Lam(&'a Var, &'a Expr),
    Forall(&'a Var, &'a Expr),
    Exists(&'a Var, &'a Expr),
}

fn infix_op(c: &Const) -> Option<(u8, &'static str)> {
    if &*c.name == constants::EQ {
        return match c.ty.as_fun() {
            Some((a, rest)) if *rest == Type::fun(a.clone(), Type::Omicron) => Some((EQ, "=")),
            _ => None,
        };
    }
    let table = [
        (constants::and(), AND, constants::AND),
        (constants::or(), OR, constants::OR),
        (constants::implies(), IMP, constants::IMPLIES),
        (constants::plus(), ADD, constants::PLUS),
        (constants::times(), MUL, constants::TIMES),
        (constants::pow(), POW, constants::POW),
    ];
    table
        .into_iter()
        .find(|(k, _, _)| k == c)
        .map(|(_, lvl, s)| (lvl, s))
}

fn is_truth(e: &Expr) -> bool {
    e.as_const().is_some_and(|c| *c == constants::truth())
}

fn as_not(e: &Expr) -> Option<&Expr> {
    let (f, a) = e.as_app()?;
    (f.as_const()? == &constants::not()).then_some(a)
}

/// `(\x . T) = (\x . A)`, read back as a universal quantifier.
fn as_forall(e: &Expr) -> Option<(&Var, &Expr)> {
    let (head, args) = e.strip_apps();
    let c = head.as_const()?;
    if &*c.name != constants::EQ || args.len() != 2 || infix_op(c).is_none() {
        return None;
    }
    match (args[0].kind(), args[1].kind()) {
        (ExprKind::Abs(x, t), ExprKind::Abs(y, body))
            if x == y && is_truth(t) && *body.ty() == Type::Omicron =>
        {
            Some((x, body))
        }
        _ => None,
    }
}

fn view(e: &Expr) -> View<'_> {
    match e.kind() {
        ExprKind::Abs(v, b) => View::Binder(Binderish::Lam(v, b)),
        ExprKind::App(f, a) => {
            if let Some(inner) = as_not(e) {
                if let Some((x, body)) = as_forall(inner) {
                    if let Some(b) = as_not(body) {
                        return View::Binder(Binderish::Exists(x, b));
                    }
                }
                return View::Not(inner);
            }
            if let Some((x, body)) = as_forall(e) {
                return View::Binder(Binderish::Forall(x, body));
            }
            if let Some((g, l)) = f.as_app() {
                if let Some((lvl, sym)) = g.as_const().and_then(infix_op) {
                    return View::Infix(lvl, sym, l, a);
                }
            }
            View::App(f, a)
        }
        _ => View::Atom,
    }
}

fn level(v: &View) -> u8 {
    match v {
        View::Binder(_) => BINDER,
        View::Infix(l, ..) => *l,
        View::Not(_) => NOT,
        View::App(..) => APP,
        View::Atom => ATOM,
    }
}

impl Printer {
    /// Prints `e` where the context needs precedence at least `min`. `tail`
    /// says nothing follows before the enclosing delimiter, so a binder can
    /// extend to the right without parentheses.
    fn go(&mut self, e: &Expr, min: u8, tail: bool) {
        let v = view(e);
        let lvl = level(&v);
        let bare = lvl >= min || (lvl == BINDER && tail);
        if !bare {
            self.out.push('(');
        }
        let tail = tail || !bare;
        match v {
            View::Binder(b) => {
                let (kw, x, body) = match b {
                    Binderish::Lam(x, body) => ("\\", x, body),
                    Binderish::Forall(x, body) => ("forall ", x, body),
                    Binderish::Exists(x, body) => ("exists ", x, body),
                };
                self.out.push_str(kw);
                self.out.push_str(&x.name);
                self.out.push(':');
                self.out.push_str(&print_type_ascription(&x.ty));
                self.out.push_str(" . ");
                self.bound.push(x.clone());
                self.go(body, BINDER, true);
                self.bound.pop();
            }
            View::Infix(l, sym, a, b) => {
                let (lmin, rmin) = match l {
                    IMP => (OR, IMP),
                    POW => (APP, POW),
                    EQ => (NOT, NOT),
                    _ => (l, l + 1),
                };
                self.go(a, lmin, false);
                self.out.push(' ');
                self.out.push_str(sym);
                self.out.push(' ');
                self.go(b, rmin, tail);
            }
            View::Not(a) => {
                self.out.push('~');
                self.go(a, NOT, tail);
            }
            View::App(f, a) => {
                self.go(f, APP, false);
                self.out.push(' ');
                self.go(a, ATOM, tail);
            }
            View::Atom => self.atom(e),
        }
        if !bare {
            self.out.push(')');
        }
    }

    fn atom(&mut self, e: &Expr) {
        match e.kind() {
            ExprKind::Var(v) => {
                self.out.push_str(&v.name);
                self.out.push(':');
                self.out.push_str(&print_type_ascription(&v.ty));
            }
            ExprKind::Const(c) => self.constant(c),
            ExprKind::Quote(b) => {
                self.out.push_str("'[ ");
                self.go(b, BINDER, true);
                self.out.push_str(" ]");
            }
            ExprKind::Eval(a, ty) => {
                self.out.push_str("[[ ");
                self.go(a, BINDER, true);
                self.out.push_str(" ]]_");
                self.out.push_str(&print_type_ascription(ty));
            }
            ExprKind::App(..) | ExprKind::Abs(..) => unreachable!("not an atom"),
        }
    }

    fn constant(&mut self, c: &Const) {
        if constants::numeral_value(c).is_some() {
            self.out.push_str(&c.name);
            return;
        }
        if constants::is_expr_index(&c.name).is_some() && c.ty == constants::eps_pred() {
            self.out.push_str(&c.name);
            return;
        }
        let shadowed = self.bound.iter().any(|v| v.name == c.name);
        if is_identifier(&c.name)
            && !shadowed
            && constants::standard_fixed(&c.name).as_ref() == Some(&c.ty)
        {
            self.out.push_str(&c.name);
            return;
        }
        self.out.push_str(&c.name);
        self.out.push(':');
        self.out.push_str(&print_type_ascription(&c.ty));
    }
}
