//! Worked examples: reasoning about syntax, excluded middle, the induction
//! schema, and symbolic differentiation.

use thiserror::Error;

use crate::construction::{as_expr, encode, Construction};
use crate::expr::Expr;
use crate::rewrite::{instantiate_and_discharge, RewriteError, Rewriter};
use crate::semantics::{quoted_atoms, valuate_with, Assignment, EpsBound, EvalOptions, Model};
use crate::stdlib::peano::is_peano;
use crate::stdlib::{schema_constants, Theory};
use crate::trace::{check_trace, parse_trace, TraceReport, POLYDIFF_TRACE};

pub const DEMOS: [&str; 4] = ["lem", "make-implication", "induction", "polydiff"];

const FUEL: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoOutput {
    pub name: &'static str,
    pub lines: Vec<String>,
    /// Whether every check in the demo came out as expected.
    pub ok: bool,
}

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("unknown demo `{0}`; expected one of lem, make-implication, induction, polydiff")]
    Unknown(String),
    #[error("{0}")]
    Failed(String),
}

fn fail(e: impl std::fmt::Display) -> DemoError {
    DemoError::Failed(e.to_string())
}

pub fn run_demo(name: &str) -> Result<DemoOutput, DemoError> {
    let theory = Theory::standard();
    match name {
        "lem" => lem(&theory),
        "make-implication" => make_implication(&theory),
        "induction" => induction(&theory),
        "polydiff" => polydiff(&theory),
        other => Err(DemoError::Unknown(other.to_string())),
    }
}

fn parse(theory: &Theory, s: &str) -> Result<Expr, DemoError> {
    theory.parse(s).map_err(fail)
}

fn lem(theory: &Theory) -> Result<DemoOutput, DemoError> {
    let lib = schema_constants(theory).map_err(fail)?;
    let rw = Rewriter::new(theory);
    let c = parse(theory, "p:o /\\ q:o")?;
    let quoted = Expr::quote(c.clone()).map_err(fail)?;
    let expected = parse(theory, "(p:o /\\ q:o) \\/ ~(p:o /\\ q:o)")?;
    let mut lines = vec![format!("schema: {}", lib.lem)];
    let mut ok = true;
    for (label, schema) in [("plain", &lib.lem), ("quasiquoted", &lib.lem_quasi)] {
        let inst = instantiate_and_discharge(schema, &[("x".into(), quoted.clone())], &rw, FUEL)
            .map_err(fail)?;
        let nf = rw.normalize(&inst, FUEL).map_err(fail)?.result;
        lines.push(format!(
            "{label} instance at {quoted}, hypothesis is-expr[o] computed to T"
        ));
        lines.push(format!("  {inst}"));
        lines.push(format!("  normalizes to {nf}"));
        ok &= nf == expected;
    }
    lines.push(expected.to_string());
    Ok(DemoOutput {
        name: "lem",
        lines,
        ok,
    })
}

fn make_implication(theory: &Theory) -> Result<DemoOutput, DemoError> {
    let rw = Rewriter::new(theory);
    let mut lines = Vec::new();
    let e = parse(theory, "make-implication '[ A:o ] '[ B:o ]")?;
    let nf = rw.normalize(&e, FUEL).map_err(fail)?.result;
    let target = as_expr(&encode(&parse(theory, "A:o => B:o")?).map_err(fail)?);
    lines.push(format!("{e}"));
    lines.push(format!("  normalizes to {nf}"));
    let mut ok = nf == target;
    lines.push(format!(
        "  which is the quotation of A:o => B:o: {}",
        nf == target
    ));
    let ev = parse(theory, "[[ make-implication '[ A:o ] '[ B:o ] ]]_o")?;
    let ev_nf = rw.normalize(&ev, FUEL).map_err(fail)?.result;
    lines.push(format!("{ev}"));
    lines.push(format!("  normalizes to {ev_nf}"));
    ok &= ev_nf == parse(theory, "A:o => B:o")?;

    let model = Model::new(2, theory.clone());
    for (text, expected) in [
        ("is-app (app '[ f:(i->i) ] '[ x:i ])", true),
        ("is-app '[ f:(i->i) (g:(i->i) x:i) ]", true),
        ("is-app '[ x:i ]", false),
        ("is-app '[ S ]", false),
    ] {
        let e = parse(theory, text)?;
        let mut atoms: Vec<Construction> = Vec::new();
        quoted_atoms(&e, &mut atoms);
        let opts = EvalOptions {
            eps_bound: Some(EpsBound { depth: 3, atoms }),
            ..EvalOptions::default()
        };
        let v = valuate_with(&e, &model, &Assignment::new(), &opts).map_err(fail)?;
        let got = v.value.as_truth() == Some(true);
        ok &= got == expected;
        lines.push(format!(
            "{e} is {} (constructions up to depth 3)",
            if got { "T" } else { "F" }
        ));
    }
    Ok(DemoOutput {
        name: "make-implication",
        lines,
        ok,
    })
}

/// Predicates for the induction demo: first-order arithmetic or not.
pub const INDUCTION_SAMPLES: [(&str, bool); 4] = [
    ("\\x:i . x + 0 = x", true),
    ("\\x:i . forall y:i . S x = S y => x = y", true),
    ("\\x:i . x ^ 2 = x * x", false),
    ("\\x:i . forall f:(i->i) . f x = x", false),
];

fn induction(theory: &Theory) -> Result<DemoOutput, DemoError> {
    let lib = schema_constants(theory).map_err(fail)?;
    let rw = Rewriter::new(theory);
    let mut lines = vec![
        format!("schema: {}", lib.induction),
        format!("  has type {}", lib.induction.ty()),
    ];
    let mut ok = *lib.induction.ty() == crate::types::Type::Omicron;
    for (text, peano) in INDUCTION_SAMPLES {
        let pred = parse(theory, text)?;
        let quoted = Expr::quote(pred).map_err(fail)?;
        let c = encode(&quoted).map_err(fail)?;
        let lit = match c {
            Construction::Quo(inner) => (*inner).clone(),
            _ => unreachable!("quotations encode to quo"),
        };
        let computed = is_peano(&lit);
        ok &= computed == peano;
        lines.push(format!(
            "is-peano {quoted} = {}",
            if computed { "T" } else { "F" }
        ));
        match instantiate_and_discharge(&lib.induction, &[("f".into(), quoted.clone())], &rw, FUEL)
        {
            Ok(inst) => {
                let nf = rw.normalize(&inst, FUEL).map_err(fail)?.result;
                lines.push(format!("  instance: {nf}"));
                ok &= peano;
            }
            Err(RewriteError::HypothesisFailed { name }) => {
                lines.push(format!("  no instance: hypothesis {name} fails"));
                ok &= !peano;
            }
            Err(e) => return Err(fail(e)),
        }
    }
    Ok(DemoOutput {
        name: "induction",
        lines,
        ok,
    })
}

fn polydiff(theory: &Theory) -> Result<DemoOutput, DemoError> {
    let t = parse_trace(POLYDIFF_TRACE, theory, Some("polydiff.trace")).map_err(fail)?;
    let report = check_trace(&t, theory);
    let mut lines = vec![format!("    {}", t.start)];
    for s in &t.steps {
        lines.push(format!("  = {}    [{}]", s.expr, s.justification));
    }
    let ok = report.is_verified();
    match &report {
        TraceReport::Verified => lines.push(format!("verified {} steps", t.steps.len())),
        TraceReport::FailedAtStep { index, reason } => {
            lines.push(format!("step {index} failed: {reason}"))
        }
    }
    lines.push(t.last().to_string());
    Ok(DemoOutput {
        name: "polydiff",
        lines,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_demo_succeeds() {
        for name in DEMOS {
            let out = run_demo(name).unwrap();
            assert!(out.ok, "{name}: {:#?}", out.lines);
        }
    }

    #[test]
    fn polydiff_ends_with_the_derivative() {
        let out = run_demo("polydiff").unwrap();
        assert_eq!(out.lines.last().unwrap(), "\\x:i . 2 * x:i");
    }
}
