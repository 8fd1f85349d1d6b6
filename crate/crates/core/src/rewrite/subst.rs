//! Capture-avoiding substitution in the presence of evaluations.

use std::collections::BTreeSet;

use crate::construction::{classify, ground_value, Properness};
use crate::expr::{free_status, Expr, ExprKind, FreeStatus, Name, Var};

use super::RewriteError;

/// Replaces the free occurrences of `x` in `b` by `a`.
///
/// Quotation bodies are never entered. An evaluation `[[ B ]]_t` becomes
/// `[[ B' ]]_t` only when `B'` (the argument after substitution) denotes a
/// ground construction whose expression does not have `x` free; otherwise
/// the value could depend on `x` through the evaluated syntax and the
/// substitution is blocked. Binders are renamed on capture, with the
/// smallest numeric suffix that keeps the name fresh.
pub fn substitute(b: &Expr, x: &Var, a: &Expr) -> Result<Expr, RewriteError> {
    substitute_many(b, &[(x.clone(), a.clone())])
}

/// Simultaneous substitution.
pub fn substitute_many(b: &Expr, pairs: &[(Var, Expr)]) -> Result<Expr, RewriteError> {
    for (x, a) in pairs {
        if &x.ty != a.ty() {
            return Err(RewriteError::SubstitutionType {
                var: x.clone(),
                found: a.ty().clone(),
            });
        }
    }
    let refs: Vec<(&Var, &Expr)> = pairs.iter().map(|(x, a)| (x, a)).collect();
    subst(b, &refs)
}

/// `base` followed by the smallest positive number not already in use.
pub fn fresh_name(base: &str, used: &BTreeSet<Name>) -> Name {
    (1u64..)
        .map(|n| Name::from(format!("{base}{n}").as_str()))
        .find(|n| !used.contains(n))
        .expect("unbounded supply")
}

fn blocked(x: &Var, e: &Expr) -> RewriteError {
    RewriteError::SubstitutionBlocked {
        var: x.clone(),
        at: e.clone(),
    }
}

fn subst(e: &Expr, pairs: &[(&Var, &Expr)]) -> Result<Expr, RewriteError> {
    if pairs.is_empty() {
        return Ok(e.clone());
    }
    match e.kind() {
        ExprKind::Var(v) => Ok(pairs
            .iter()
            .find(|(x, _)| *x == v)
            .map_or_else(|| e.clone(), |(_, a)| (*a).clone())),
        ExprKind::Const(_) | ExprKind::Quote(_) => Ok(e.clone()),
        ExprKind::App(f, g) => {
            let f2 = subst(f, pairs)?;
            let g2 = subst(g, pairs)?;
            if f2 == *f && g2 == *g {
                return Ok(e.clone());
            }
            Ok(Expr::app(f2, g2).expect("substitution preserves types"))
        }
        ExprKind::Abs(y, body) => {
            let live: Vec<(&Var, &Expr)> = pairs
                .iter()
                .filter(|(x, _)| *x != y && free_status(x, body) != FreeStatus::NotFree)
                .copied()
                .collect();
            if live.is_empty() {
                return Ok(e.clone());
            }
            let mut capture = false;
            for (x, a) in &live {
                match free_status(y, a) {
                    FreeStatus::NotFree => {}
                    FreeStatus::Unknown => return Err(blocked(x, e)),
                    FreeStatus::Free => capture = true,
                }
            }
            if !capture {
                return Ok(Expr::abs(y.clone(), subst(body, &live)?));
            }
            let mut used = BTreeSet::new();
            body.all_var_names(&mut used);
            used.insert(y.name.clone());
            for (x, a) in &live {
                a.all_var_names(&mut used);
                used.insert(x.name.clone());
            }
            let y2 = Var::new(fresh_name(&y.name, &used), y.ty.clone());
            if let Some((x, _)) = live
                .iter()
                .find(|(_, a)| free_status(&y2, a) != FreeStatus::NotFree)
            {
                return Err(blocked(x, e));
            }
            let fresh = Expr::var(y2.clone());
            let renamed = subst(body, &[(y, &fresh)])?;
            Ok(Expr::abs(y2, subst(&renamed, &live)?))
        }
        ExprKind::Eval(arg, target) => {
            let arg2 = subst(arg, pairs)?;
            let Some(c) = ground_value(&arg2) else {
                return Err(blocked(pairs[0].0, e));
            };
            if let Properness::Proper { ty, expr } = classify(&c) {
                if ty == *target {
                    if let Some((x, _)) = pairs
                        .iter()
                        .find(|(x, _)| free_status(x, &expr) != FreeStatus::NotFree)
                    {
                        return Err(blocked(x, e));
                    }
                }
            }
            if arg2 == *arg {
                return Ok(e.clone());
            }
            Ok(Expr::eval(arg2, target.clone()).expect("substitution preserves types"))
        }
    }
}

/// Whether the variable quoted by `xq` is free in the expression that `c`
/// represents. `Unknown` when either argument is not a ground construction
/// or `xq` does not quote a variable.
pub fn is_free_in(xq: &Expr, c: &Expr) -> FreeStatus {
    let (Some(xq), Some(c)) = (ground_value(xq), ground_value(c)) else {
        return FreeStatus::Unknown;
    };
    let Some(x) = xq.as_quoted_var() else {
        return FreeStatus::Unknown;
    };
    match classify(&c) {
        Properness::Proper { expr, .. } => free_status(x, &expr),
        Properness::Improper { .. } => {
            if c.mentions_var(x) {
                FreeStatus::Unknown
            } else {
                FreeStatus::NotFree
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_expr;
    use crate::types::Type;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn xi() -> Var {
        Var::new("x", Type::Iota)
    }

    #[test]
    fn replaces_free_occurrences_only() {
        assert_eq!(substitute(&p("x:i"), &xi(), &p("2")).unwrap(), p("2"));
        assert_eq!(
            substitute(&p("x:i + (\\x:i . x:i) x:i"), &xi(), &p("2")).unwrap(),
            p("2 + (\\x:i . x:i) 2")
        );
        let q = p("'[ x:i ]");
        assert_eq!(substitute(&q, &xi(), &p("2")).unwrap(), q);
    }

    #[test]
    fn renames_to_avoid_capture() {
        let e = p("\\y:i . x:i + y:i");
        let out = substitute(&e, &xi(), &p("y:i")).unwrap();
        assert_eq!(out, p("\\y1:i . y:i + y1:i"));
        let e = p("\\y:i . x:i + y:i + y1:i");
        let out = substitute(&e, &xi(), &p("y:i")).unwrap();
        assert_eq!(out, p("\\y2:i . y:i + y2:i + y1:i"));
    }

    #[test]
    fn evaluation_of_unknown_syntax_blocks() {
        let e = p("[[ y:eps ]]_i");
        assert!(matches!(
            substitute(&e, &xi(), &p("2")),
            Err(RewriteError::SubstitutionBlocked { .. })
        ));
        let e = p("[[ '[ x:i + 3 ] ]]_i");
        assert!(substitute(&e, &xi(), &p("2")).is_err());
        let e = p("[[ '[ z:i + 3 ] ]]_i");
        assert_eq!(substitute(&e, &xi(), &p("2")).unwrap(), e);
    }

    #[test]
    fn evaluation_argument_becomes_ground() {
        let x = Var::new("x", Type::Epsilon);
        let e = p("[[ x:eps ]]_o");
        let out = substitute(&e, &x, &p("'[ c:o ]")).unwrap();
        assert_eq!(out, p("[[ '[ c:o ] ]]_o"));
        assert!(substitute(&e, &x, &p("'[ x:eps = x:eps ]")).is_err());
    }

    #[test]
    fn simultaneous_substitution_swaps() {
        let (x, y) = (xi(), Var::new("y", Type::Iota));
        let out = substitute_many(&p("x:i + y:i"), &[(x, p("y:i")), (y, p("x:i"))]).unwrap();
        assert_eq!(out, p("y:i + x:i"));
    }

    #[test]
    fn free_in_construction() {
        assert_eq!(
            is_free_in(&p("'[ x:i ]"), &p("'[ \\x:i . x:i ]")),
            FreeStatus::NotFree
        );
        assert_eq!(
            is_free_in(&p("'[ x:i ]"), &p("'[ x:i + 1 ]")),
            FreeStatus::Free
        );
        assert_eq!(
            is_free_in(&p("'[ x:i ]"), &p("app y:eps '[ x:i ]")),
            FreeStatus::Unknown
        );
    }
}
