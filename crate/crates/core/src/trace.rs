//! Checking equational derivations one step at a time.
//!
//! A trace file lists numbered expressions. Every line after the first
//! carries a justification for its equality with the previous line:
//!
//! ```text
//! 1. deriv (\x:i . x:i ^ 2)
//! 2. symm disquote | deriv [[ '[ \x:i . x:i ^ 2 ] ]]_(i->i)
//! 3. rewrite quote-norm | deriv [[ abs '[ x:i ] '[ x:i ^ 2 ] ]]_(i->i)
//! 4. meaning poly-diff u := '[ x:i ], v := '[ x:i ^ 2 ] | ...
//! 5. unfold make-implication | ...
//! ```
//!
//! `rewrite R` and `symm R` hold when both sides have the same normal form
//! under rule `R` (quotations may always be normalized). `unfold c` expands
//! every occurrence of `c`. `meaning S b1, ..., bn` instantiates schema `S`
//! (`poly-diff`, `lem`, `lem-quasi` or `induction`), discharges its
//! hypotheses by computation and uses the resulting equation, in either
//! direction, at one position.

use std::fmt;

use thiserror::Error;

use crate::expr::{Expr, ExprKind};
use crate::rewrite::{instantiate_and_discharge, Delta, RewriteError, Rewriter, RuleId, RuleSet};
use crate::stdlib::{schema_constants, Theory};
use crate::surface::{self, ParseContext};
use crate::types::Type;

const STEP_FUEL: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Rewrite(RuleId),
    Symmetric(RuleId),
    Unfold(String),
    Meaning {
        schema: String,
        bindings: Vec<(String, Expr)>,
    },
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Rewrite(r) => write!(f, "rewrite {r}"),
            Justification::Symmetric(r) => write!(f, "symm {r}"),
            Justification::Unfold(n) => write!(f, "unfold {n}"),
            Justification::Meaning { schema, bindings } => {
                write!(f, "meaning {schema}")?;
                for (i, (n, e)) in bindings.iter().enumerate() {
                    let sep = if i == 0 { " " } else { ", " };
                    write!(f, "{sep}{n} := {e}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub justification: Justification,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqTrace {
    pub start: Expr,
    pub steps: Vec<TraceStep>,
}

impl EqTrace {
    pub fn expressions(&self) -> impl Iterator<Item = &Expr> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.expr))
    }

    pub fn last(&self) -> &Expr {
        self.steps.last().map_or(&self.start, |s| &s.expr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("expression has type {found}, but the trace is at type {expected}")]
    IllTyped { expected: Type, found: Type },
    #[error("hypothesis `{0}` does not hold")]
    HypothesisFailed(String),
    #[error("the two sides do not agree: {left} versus {right}")]
    MismatchAfterRewrite { left: Expr, right: Expr },
    #[error("{0}")]
    Rewrite(RewriteError),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceReport {
    Verified,
    /// The equality between lines `index - 1` and `index` (1-based) failed.
    FailedAtStep {
        index: usize,
        reason: TraceError,
    },
}

impl TraceReport {
    pub fn is_verified(&self) -> bool {
        matches!(self, TraceReport::Verified)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> TraceError {
    TraceError::Syntax {
        line,
        message: message.into(),
    }
}

/// Splits at commas outside brackets and parentheses.
fn top_level_commas(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

pub fn parse_trace(text: &str, theory: &Theory, file: Option<&str>) -> Result<EqTrace, TraceError> {
    let mut ctx = ParseContext::new(theory);
    if let Some(f) = file {
        ctx = ctx.with_file(f);
    }
    let parse = |s: &str, line: usize| {
        surface::parse_expr_in(s.trim(), &ctx).map_err(|e| syntax(line, e.to_string()))
    };
    let mut start = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (num, rest) = content
            .split_once('.')
            .ok_or_else(|| syntax(line, "expected `N. ...`"))?;
        let expected = steps.len() + 1 + usize::from(start.is_some());
        if num.trim().parse::<usize>().ok() != Some(expected) {
            return Err(syntax(line, format!("expected line number {expected}")));
        }
        if start.is_none() {
            start = Some(parse(rest, line)?);
            continue;
        }
        let (just, expr) = rest
            .split_once('|')
            .ok_or_else(|| syntax(line, "expected `justification | expression`"))?;
        let justification = parse_justification(just.trim(), line, &parse)?;
        steps.push(TraceStep {
            justification,
            expr: parse(expr, line)?,
        });
    }
    let start = start.ok_or_else(|| syntax(1, "empty trace"))?;
    Ok(EqTrace { start, steps })
}

fn parse_justification(
    text: &str,
    line: usize,
    parse: &dyn Fn(&str, usize) -> Result<Expr, TraceError>,
) -> Result<Justification, TraceError> {
    let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let rule = |s: &str| s.parse::<RuleId>().map_err(|m| syntax(line, m));
    match kw {
        "rewrite" => Ok(Justification::Rewrite(rule(rest)?)),
        "symm" => Ok(Justification::Symmetric(rule(rest)?)),
        "unfold" if !rest.is_empty() => Ok(Justification::Unfold(rest.to_string())),
        "meaning" => {
            let (schema, args) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let mut bindings = Vec::new();
            if !args.trim().is_empty() {
                for b in top_level_commas(args) {
                    let (name, value) = b
                        .split_once(":=")
                        .ok_or_else(|| syntax(line, "expected `name := expression`"))?;
                    bindings.push((name.trim().to_string(), parse(value, line)?));
                }
            }
            Ok(Justification::Meaning {
                schema: schema.to_string(),
                bindings,
            })
        }
        _ => Err(syntax(line, format!("unknown justification `{text}`"))),
    }
}

/// Verifies every step, reporting the first failure.
pub fn check_trace(t: &EqTrace, theory: &Theory) -> TraceReport {
    let ty = t.start.ty();
    let mut prev = &t.start;
    for (i, s) in t.steps.iter().enumerate() {
        let index = i + 2;
        let result = if s.expr.ty() != ty {
            Err(TraceError::IllTyped {
                expected: ty.clone(),
                found: s.expr.ty().clone(),
            })
        } else {
            check_step(prev, &s.expr, &s.justification, theory)
        };
        if let Err(reason) = result {
            return TraceReport::FailedAtStep { index, reason };
        }
        prev = &s.expr;
    }
    TraceReport::Verified
}

fn check_step(
    prev: &Expr,
    next: &Expr,
    j: &Justification,
    theory: &Theory,
) -> Result<(), TraceError> {
    match j {
        Justification::Rewrite(r) | Justification::Symmetric(r) => {
            let rw = Rewriter::new(theory)
                .with_delta(Delta::All)
                .with_rules(RuleSet::only(&[*r, RuleId::QuoteNorm]));
            let nf = |e: &Expr| {
                rw.normalize(e, STEP_FUEL)
                    .map(|r| r.result)
                    .map_err(TraceError::Rewrite)
            };
            let (l, r) = (nf(prev)?, nf(next)?);
            if l == r {
                Ok(())
            } else {
                Err(TraceError::MismatchAfterRewrite { left: l, right: r })
            }
        }
        Justification::Unfold(name) => {
            let body = theory
                .unfold(name)
                .map_err(|e| TraceError::Rewrite(RewriteError::Instantiation(e.to_string())))?;
            let (l, r) = (unfold_all(prev, name, &body), unfold_all(next, name, &body));
            if l == r {
                Ok(())
            } else {
                Err(TraceError::MismatchAfterRewrite { left: l, right: r })
            }
        }
        Justification::Meaning { schema, bindings } => {
            let lib = schema_constants(theory)
                .map_err(|e| TraceError::Rewrite(RewriteError::Instantiation(e.to_string())))?;
            let formula = match schema.as_str() {
                "poly-diff" => &lib.poly_diff_meaning,
                "lem" => &lib.lem,
                "lem-quasi" => &lib.lem_quasi,
                "induction" => &lib.induction,
                other => {
                    return Err(TraceError::Rewrite(RewriteError::Instantiation(format!(
                        "unknown schema `{other}`"
                    ))))
                }
            };
            let rw = Rewriter::new(theory);
            let conclusion = instantiate_and_discharge(formula, bindings, &rw, STEP_FUEL).map_err(
                |e| match e {
                    RewriteError::HypothesisFailed { name } => TraceError::HypothesisFailed(name),
                    other => TraceError::Rewrite(other),
                },
            )?;
            let (lhs, rhs) = as_equation(&conclusion).ok_or_else(|| {
                TraceError::Rewrite(RewriteError::Instantiation(
                    "the instantiated schema is not an equation".into(),
                ))
            })?;
            if replaces_once(prev, next, &lhs, &rhs) || replaces_once(prev, next, &rhs, &lhs) {
                Ok(())
            } else {
                Err(TraceError::MismatchAfterRewrite {
                    left: prev.clone(),
                    right: next.clone(),
                })
            }
        }
    }
}

fn as_equation(e: &Expr) -> Option<(Expr, Expr)> {
    let (head, args) = e.strip_apps();
    let c = head.as_const()?;
    (&*c.name == crate::constants::EQ && args.len() == 2)
        .then(|| (args[0].clone(), args[1].clone()))
}

/// Whether `next` is `prev` with one occurrence of `from` replaced by `to`.
fn replaces_once(prev: &Expr, next: &Expr, from: &Expr, to: &Expr) -> bool {
    let mut paths = Vec::new();
    occurrences(prev, from, &mut Vec::new(), &mut paths);
    paths
        .iter()
        .any(|p| prev.replace_at(p, to.clone()).is_ok_and(|e| e == *next))
}

fn occurrences(e: &Expr, target: &Expr, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if e == target {
        out.push(path.clone());
    }
    for i in 0..2 {
        if let Some(c) = e.child(i) {
            path.push(i);
            occurrences(c, target, path, out);
            path.pop();
        }
    }
}

fn unfold_all(e: &Expr, name: &str, body: &Expr) -> Expr {
    match e.kind() {
        ExprKind::Const(c) if &*c.name == name && c.ty == *body.ty() => body.clone(),
        ExprKind::App(..) | ExprKind::Abs(..) | ExprKind::Eval(..) => {
            let mut out = e.clone();
            for i in 0..2 {
                if let Some(c) = e.child(i) {
                    let new = unfold_all(c, name, body);
                    if new != *c {
                        out = out.with_child(i, new).expect("unfolding keeps types");
                    }
                }
            }
            out
        }
        _ => e.clone(),
    }
}

/// The bundled derivation of the derivative of `x^2`.
pub const POLYDIFF_TRACE: &str = include_str!("../data/polydiff.trace");

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(text: &str) -> EqTrace {
        parse_trace(text, Theory::standard_ref(), None).unwrap()
    }

    #[test]
    fn bundled_chain_verifies() {
        let t = trace(POLYDIFF_TRACE);
        assert_eq!(t.steps.len(), 6);
        assert_eq!(
            check_trace(&t, Theory::standard_ref()),
            TraceReport::Verified
        );
        assert_eq!(t.last().to_string(), "\\x:i . 2 * x:i");
    }

    #[test]
    fn reflexive_trace_verifies() {
        let t = trace("1. a:o\n");
        assert!(check_trace(&t, Theory::standard_ref()).is_verified());
    }

    #[test]
    fn wrong_derivative_is_rejected() {
        let bad = POLYDIFF_TRACE.replace("'[ 2 * x:i ] ]]", "'[ 3 * x:i ] ]]");
        let t = trace(&bad);
        assert!(matches!(
            check_trace(&t, Theory::standard_ref()),
            TraceReport::FailedAtStep { index: 5, .. }
        ));
    }

    #[test]
    fn failed_hypothesis_is_named() {
        let bad = POLYDIFF_TRACE.replace("u := '[ x:i ]", "u := '[ 0 ]");
        let t = trace(&bad);
        match check_trace(&t, Theory::standard_ref()) {
            TraceReport::FailedAtStep {
                index: 4,
                reason: TraceError::HypothesisFailed(n),
            } => {
                assert_eq!(n, "is-var")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unfold_steps() {
        let t = trace("1. [[ make-implication '[ A:o ] '[ B:o ] ]]_o\n2. unfold make-implication | [[ (\\x:eps . \\y:eps . app (app '[ =>:(o->o->o) ] x) y) '[ A:o ] '[ B:o ] ]]_o\n");
        assert!(check_trace(&t, Theory::standard_ref()).is_verified());
    }

    #[test]
    fn type_changes_are_rejected() {
        let t = trace("1. a:o\n2. rewrite beta | 0\n");
        assert!(matches!(
            check_trace(&t, Theory::standard_ref()),
            TraceReport::FailedAtStep {
                index: 2,
                reason: TraceError::IllTyped { .. }
            }
        ));
    }

    #[test]
    fn malformed_lines_report_their_number() {
        let e = parse_trace(
            "1. a:o\n3. rewrite beta | a:o\n",
            Theory::standard_ref(),
            None,
        )
        .unwrap_err();
        assert!(matches!(e, TraceError::Syntax { line: 2, .. }));
    }
}
