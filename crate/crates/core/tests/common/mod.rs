//! Seeded, type-directed generators shared by the integration tests.
//!
//! The default corpus is in normal form: no beta redexes, no constants with
//! transparent definitions, no builtins that compute, and quotations only of
//! atoms. `nested_quotes` lifts the last restriction.

#![allow(dead_code)]

use std::collections::HashMap;

use cttqe::constants;
use cttqe::construction::{as_expr, Construction};
use cttqe::semantics::{enumerate_domain, Assignment, EpsBound, EvalOptions, Model, Value};
use cttqe::{Const, Expr, Theory, Type, Var};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn i() -> Type {
    Type::Iota
}
pub fn o() -> Type {
    Type::Omicron
}
pub fn eps() -> Type {
    Type::Epsilon
}
pub fn fun(a: Type, b: Type) -> Type {
    Type::fun(a, b)
}

/// Constants declared on top of the standard theory for the generators.
pub fn user_constants() -> Vec<Const> {
    vec![
        Const::new("c", i()),
        Const::new("k", eps()),
        Const::new("R", fun(eps(), o())),
    ]
}

pub fn theory() -> Theory {
    let mut t = Theory::standard();
    for c in user_constants() {
        t.declare(&c.name, c.ty.clone(), "test constant").unwrap();
    }
    t
}

pub fn vars() -> Vec<Var> {
    vec![
        Var::new("x", i()),
        Var::new("y", i()),
        Var::new("z", i()),
        Var::new("p", o()),
        Var::new("q", o()),
        Var::new("u", eps()),
        Var::new("w", eps()),
        Var::new("f", fun(i(), i())),
        Var::new("P", fun(i(), o())),
        Var::new("g", fun(o(), o())),
        Var::new("h", fun(i(), fun(i(), i()))),
    ]
}

pub fn consts() -> Vec<Const> {
    let mut out = vec![
        constants::numeral(0),
        constants::numeral(1),
        constants::truth(),
        constants::falsity(),
        constants::succ(),
        constants::plus(),
        constants::times(),
        constants::not(),
        constants::and(),
        constants::or(),
        constants::implies(),
        constants::eq(i()),
        constants::eq(o()),
        constants::deriv(),
        constants::app(),
        constants::quo(),
    ];
    out.extend(user_constants());
    out
}

/// Types with at least one atom, used as targets.
pub fn target_types() -> Vec<Type> {
    vec![
        i(),
        o(),
        eps(),
        fun(i(), i()),
        fun(i(), o()),
        fun(o(), o()),
        fun(i(), fun(i(), i())),
        fun(o(), fun(o(), o())),
        fun(eps(), eps()),
    ]
}

/// Result type after applying `k` arguments, with the argument types.
fn peel(ty: &Type, k: usize) -> Option<(Vec<Type>, Type)> {
    let mut args = Vec::new();
    let mut cur = ty.clone();
    for _ in 0..k {
        let (a, b) = cur.as_fun()?;
        args.push(a.clone());
        cur = b.clone();
    }
    Some((args, cur))
}

#[derive(Clone)]
pub struct Gen {
    pub vars: Vec<Var>,
    pub consts: Vec<Const>,
    pub nested_quotes: bool,
    /// Heads with their argument types, indexed by result type.
    spines: HashMap<Type, Vec<(Expr, Vec<Type>)>>,
}

impl Default for Gen {
    fn default() -> Self {
        Gen::new(vars(), consts())
    }
}

impl Gen {
    pub fn new(vars: Vec<Var>, consts: Vec<Const>) -> Gen {
        let mut spines: HashMap<Type, Vec<(Expr, Vec<Type>)>> = HashMap::new();
        let atoms = vars
            .iter()
            .map(|v| Expr::var(v.clone()))
            .chain(consts.iter().map(|c| Expr::constant(c.clone())));
        for a in atoms {
            let n = a.ty().arity();
            for k in 0..=n {
                let (args, res) = peel(a.ty(), k).expect("arity");
                spines.entry(res).or_default().push((a.clone(), args));
            }
        }
        Gen {
            vars,
            consts,
            nested_quotes: false,
            spines,
        }
    }

    pub fn nested(mut self) -> Gen {
        self.nested_quotes = true;
        self
    }

    fn atoms_of(&self, ty: &Type) -> Vec<Expr> {
        self.spines
            .get(ty)
            .map(|v| {
                v.iter()
                    .filter(|(_, a)| a.is_empty())
                    .map(|(e, _)| e.clone())
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn has_atom(&self, ty: &Type) -> bool {
        !self.atoms_of(ty).is_empty()
    }

    /// An expression of type `ty` with depth at most `depth`.
    pub fn expr(&self, rng: &mut TestRng, ty: &Type, depth: usize) -> Expr {
        let atoms = self.atoms_of(ty);
        if depth <= 1 || (!atoms.is_empty() && rng.gen_bool(0.2)) {
            if let Some(a) = atoms.choose(rng) {
                return a.clone();
            }
        }
        let mut options: Vec<u8> = Vec::new();
        let spines: Vec<&(Expr, Vec<Type>)> = self
            .spines
            .get(ty)
            .map(|v| v.iter().filter(|(_, a)| !a.is_empty()).collect())
            .unwrap_or_default();
        if !spines.is_empty() {
            options.extend([0, 0, 0]);
        }
        if let Some((a, _)) = ty.as_fun() {
            if self.vars.iter().any(|v| v.ty == *a) {
                options.extend([1, 1]);
            }
        }
        if *ty == Type::Epsilon {
            options.push(2);
        }
        match options.choose(rng) {
            Some(0) => {
                let (head, args) = spines.choose(rng).expect("nonempty");
                let mut e = head.clone();
                for a in args {
                    let arg = self.expr(rng, a, depth - 1);
                    e = Expr::app(e, arg).expect("typed");
                }
                if e.depth() > depth {
                    // A long spine overshot; fall back to something shallow.
                    return self.shallow(rng, ty, depth);
                }
                e
            }
            Some(1) => {
                let (a, b) = ty.as_fun().expect("function type");
                let binders: Vec<&Var> = self.vars.iter().filter(|v| v.ty == *a).collect();
                let x = (*binders.choose(rng).expect("binder")).clone();
                Expr::abs(x, self.expr(rng, b, depth - 1))
            }
            Some(2) => {
                let body = if self.nested_quotes && rng.gen_bool(0.6) {
                    let ty = target_types().choose(rng).unwrap().clone();
                    self.expr(rng, &ty, depth - 1)
                } else {
                    let pool: Vec<Expr> = self
                        .vars
                        .iter()
                        .map(|v| Expr::var(v.clone()))
                        .chain(self.consts.iter().map(|c| Expr::constant(c.clone())))
                        .collect();
                    pool.choose(rng).unwrap().clone()
                };
                Expr::quote(body).expect("eval-free")
            }
            _ => self.shallow(rng, ty, depth),
        }
    }

    fn shallow(&self, rng: &mut TestRng, ty: &Type, depth: usize) -> Expr {
        if let Some(a) = self.atoms_of(ty).choose(rng) {
            return a.clone();
        }
        assert!(depth >= 2, "no atom of type {ty}");
        let (a, b) = ty.as_fun().expect("function type");
        let x = self
            .vars
            .iter()
            .find(|v| v.ty == *a)
            .cloned()
            .expect("binder of the domain type");
        Expr::abs(x, self.expr(rng, b, depth - 1))
    }

    /// An expression of a random target type.
    pub fn any(&self, rng: &mut TestRng, depth: usize) -> Expr {
        let ty = target_types().choose(rng).unwrap().clone();
        self.expr(rng, &ty, depth)
    }
}

/// `n` distinct expressions of depth at most `max_depth`.
pub fn corpus(gen: &Gen, seed: u64, n: usize, max_depth: usize) -> Vec<Expr> {
    let mut rng = rng(seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let depth = rng.gen_range(1..=max_depth);
        let e = gen.any(&mut rng, depth);
        assert!(e.depth() <= max_depth);
        if seen.insert(e.clone()) {
            out.push(e);
        }
    }
    out
}

/// Quoted atoms for random constructions.
pub fn construction_atoms() -> Vec<Construction> {
    vec![
        Construction::QuotedVar(Var::new("x", i())),
        Construction::QuotedVar(Var::new("p", o())),
        Construction::QuotedVar(Var::new("f", fun(i(), i()))),
        Construction::QuotedConst(constants::numeral(0)),
        Construction::QuotedConst(constants::succ()),
        Construction::QuotedConst(constants::not()),
    ]
}

/// A random construction of depth at most `depth`, proper or not.
pub fn construction(rng: &mut TestRng, depth: usize) -> Construction {
    let atoms = construction_atoms();
    if depth <= 1 || rng.gen_bool(0.25) {
        return atoms.choose(rng).unwrap().clone();
    }
    match rng.gen_range(0..5) {
        0 | 1 => Construction::app(construction(rng, depth - 1), construction(rng, depth - 1)),
        2 | 3 => {
            let binder = if rng.gen_bool(0.8) {
                let vs: Vec<&Construction> = atoms
                    .iter()
                    .filter(|a| a.as_quoted_var().is_some())
                    .collect();
                (*vs.choose(rng).unwrap()).clone()
            } else {
                construction(rng, depth - 1)
            };
            Construction::abs(binder, construction(rng, depth - 1))
        }
        _ => Construction::quo(construction(rng, depth - 1)),
    }
}

/// A model over `iota_size` individuals interpreting the test constants.
pub fn model(iota_size: usize) -> Model {
    let theory = theory();
    let last = iota_size - 1;
    let quoted_x = Construction::QuotedVar(Var::new("x", i()));
    let consts = user_constants();
    Model::new(iota_size, theory)
        .with_constant(consts[0].clone(), Value::Individual(last))
        .with_constant(consts[1].clone(), Value::Constr(quoted_x.clone()))
        .with_constant(
            consts[2].clone(),
            Value::Func(cttqe::semantics::Func::new(eps(), o(), move |v| {
                Ok(Value::Truth(v.as_constr() == Some(&quoted_x)))
            })),
        )
}

/// Evaluation options bounding `eps` quantifiers over the given atoms.
pub fn bounded(depth: usize, atoms: Vec<Construction>) -> EvalOptions {
    EvalOptions {
        eps_bound: Some(EpsBound { depth, atoms }),
        ..EvalOptions::default()
    }
}

/// Random values for variables, with function tables cached per type.
pub struct Values {
    model: Model,
    tables: HashMap<Type, Vec<Value>>,
}

impl Values {
    pub fn new(model: Model) -> Values {
        Values {
            model,
            tables: HashMap::new(),
        }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn value(&mut self, rng: &mut TestRng, ty: &Type) -> Value {
        match ty {
            Type::Iota => Value::Individual(rng.gen_range(0..self.model.iota_size())),
            Type::Omicron => Value::Truth(rng.gen()),
            Type::Epsilon => Value::Constr(construction(rng, 3)),
            Type::Fun(..) => {
                let model = self.model.clone();
                let table = self.tables.entry(ty.clone()).or_insert_with(|| {
                    enumerate_domain(ty, &model, &EvalOptions::default())
                        .expect("finite function type")
                });
                table.choose(rng).unwrap().clone()
            }
        }
    }

    pub fn assignment(&mut self, rng: &mut TestRng, vars: &[Var]) -> Assignment {
        let mut phi = Assignment::new();
        for v in vars {
            let val = self.value(rng, &v.ty);
            phi = phi.update(v.clone(), val);
        }
        phi
    }
}

/// The literal of a construction, as an expression.
pub fn literal(c: &Construction) -> Expr {
    as_expr(c)
}
