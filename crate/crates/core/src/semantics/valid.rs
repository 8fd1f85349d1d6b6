//! Checking validity in a model over a finite family of assignments.

use crate::construction::{encode, Construction};
use crate::expr::{Expr, ExprKind, Var};
use crate::types::Type;

use super::{
    default_value, enumerate_domain, quoted_atoms, valuate_with, Assignment, EpsBound, EvalOptions,
    Func, Model, SemanticsError, Value,
};

/// How assignments and quantified constructions are chosen.
#[derive(Debug, Clone)]
pub struct Sampler {
    /// Depth bound for constructions, both for free `eps` variables and for
    /// equality and quantifiers over `eps`.
    pub eps_depth: usize,
    /// Atoms added to those quoted in the formula.
    pub atoms: Vec<Construction>,
    /// Largest number of assignments tried.
    pub max_samples: usize,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler {
            eps_depth: 3,
            atoms: Vec::new(),
            max_samples: 5000,
        }
    }
}

impl Sampler {
    pub fn with_depth(depth: usize) -> Self {
        Sampler {
            eps_depth: depth,
            ..Sampler::default()
        }
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    /// True under every assignment tried. `exhaustive` means every
    /// assignment to the free variables was tried; `approximate` means some
    /// domain of constructions was cut off at the depth bound.
    Holds {
        samples: usize,
        exhaustive: bool,
        approximate: bool,
    },
    /// False under this assignment.
    Fails { assignment: Vec<(Var, Value)> },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }
}

/// Atoms used when a formula quotes nothing.
fn fallback_atoms() -> Vec<Construction> {
    vec![
        Construction::QuotedVar(Var::new("p", Type::Omicron)),
        Construction::QuotedConst(crate::constants::truth()),
        Construction::QuotedConst(crate::constants::not()),
    ]
}

fn quoted_bodies(e: &Expr, out: &mut Vec<Construction>) {
    match e.kind() {
        ExprKind::Quote(b) => {
            if let Ok(c) = encode(b) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        ExprKind::App(f, a) => {
            quoted_bodies(f, out);
            quoted_bodies(a, out);
        }
        ExprKind::Abs(_, b) | ExprKind::Eval(b, _) => quoted_bodies(b, out),
        _ => {}
    }
}

/// Checks that a formula is true under the sampled assignments.
pub fn check_valid(f: &Expr, m: &Model, sampler: &Sampler) -> Result<Verdict, SemanticsError> {
    let mut atoms = Vec::new();
    quoted_atoms(f, &mut atoms);
    for a in &sampler.atoms {
        if !atoms.contains(a) {
            atoms.push(a.clone());
        }
    }
    if atoms.is_empty() {
        atoms = fallback_atoms();
    }
    let opts = EvalOptions {
        eps_bound: Some(EpsBound {
            depth: sampler.eps_depth,
            atoms: atoms.clone(),
        }),
        ..EvalOptions::default()
    };
    let mut targeted = Vec::new();
    quoted_bodies(f, &mut targeted);

    let vars: Vec<Var> = f.free_vars().into_iter().collect();
    let mut exhaustive = true;
    let mut approximate = false;
    let mut candidates = Vec::with_capacity(vars.len());
    for v in &vars {
        let (values, complete) = candidates_for(&v.ty, m, &opts, &targeted)?;
        if !complete {
            exhaustive = false;
            approximate = true;
        }
        candidates.push(values);
    }

    let total: u128 = candidates.iter().map(|c| c.len() as u128).product();
    let samples = total.min(sampler.max_samples as u128);
    if samples < total {
        exhaustive = false;
    }
    for i in 0..samples {
        // Spread the samples evenly over the full product.
        let mut code = i * total / samples;
        let mut phi = Assignment::new();
        let mut chosen = Vec::with_capacity(vars.len());
        for (v, cands) in vars.iter().zip(&candidates).rev() {
            let k = (code % cands.len() as u128) as usize;
            code /= cands.len() as u128;
            phi = phi.update(v.clone(), cands[k].clone());
            chosen.push((v.clone(), cands[k].clone()));
        }
        let r = valuate_with(f, m, &phi, &opts)?;
        approximate |= r.approximate;
        if r.value.as_truth() != Some(true) {
            chosen.reverse();
            return Ok(Verdict::Fails { assignment: chosen });
        }
    }
    Ok(Verdict::Holds {
        samples: samples as usize,
        exhaustive,
        approximate,
    })
}

/// Values tried for a variable of type `ty`, and whether they are the
/// whole domain.
fn candidates_for(
    ty: &Type,
    m: &Model,
    opts: &EvalOptions,
    targeted: &[Construction],
) -> Result<(Vec<Value>, bool), SemanticsError> {
    if ty.mentions_epsilon() {
        if *ty == Type::Epsilon {
            let mut values = enumerate_domain(ty, m, opts)?;
            for c in targeted {
                let v = Value::Constr(c.clone());
                if !values.iter().any(|w| w.same_first_order(&v)) {
                    values.push(v);
                }
            }
            return Ok((values, false));
        }
    } else if let Ok(values) = enumerate_domain(
        ty,
        m,
        &EvalOptions {
            enum_cap: 4096,
            ..opts.clone()
        },
    ) {
        return Ok((values, true));
    }
    // Too large or over constructions: constant functions only.
    let (dom, cod) = ty.as_fun().expect("only function types remain");
    let (outs, _) = candidates_for(cod, m, opts, targeted)?;
    let mut values: Vec<Value> = outs
        .into_iter()
        .map(|o| Value::Func(Func::new(dom.clone(), cod.clone(), move |_| Ok(o.clone()))))
        .collect();
    if values.is_empty() {
        values.push(default_value(ty));
    }
    Ok((values, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_expr;

    #[test]
    fn excluded_middle_holds_exhaustively() {
        let f = parse_expr("a:o \\/ ~a:o").unwrap();
        match check_valid(&f, &Model::standard(2), &Sampler::default()).unwrap() {
            Verdict::Holds {
                samples,
                exhaustive,
                approximate,
            } => {
                assert_eq!(samples, 2);
                assert!(exhaustive && !approximate);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn counterexample_is_reported() {
        let f = parse_expr("x:i = y:i").unwrap();
        match check_valid(&f, &Model::standard(2), &Sampler::default()).unwrap() {
            Verdict::Fails { assignment } => assert_eq!(assignment.len(), 2),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn quoted_excluded_middle_holds_on_bounded_constructions() {
        let f = parse_expr("forall x:eps . is-expr[o] x => [[ x ]]_o \\/ ~[[ x ]]_o").unwrap();
        let v = check_valid(&f, &Model::standard(2), &Sampler::with_depth(2)).unwrap();
        assert!(
            matches!(
                v,
                Verdict::Holds {
                    approximate: true,
                    ..
                }
            ),
            "{v:?}"
        );
    }
}
