//! Rewriting: beta-reduction, the quotation and disquotation laws,
//! evaluation through beta-redexes, builtin computation on construction
//! literals, and definition unfolding.
//!
//! Steps are found leftmost-outermost. Inside an evaluation argument,
//! builtin folds and quotation normalization are preferred, so that the
//! argument reaches literal form before the side conditions of the
//! evaluation rules are tested.

mod subst;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::constants;
use crate::construction::{as_expr, classify, encode, from_expr, ground_value, Properness};
use crate::expr::{free_status, Expr, ExprKind, FreeStatus, TypeError, Var};
use crate::stdlib::{builtin_step, ConstKind, Theory};
use crate::types::Type;

pub use subst::{fresh_name, is_free_in, substitute, substitute_many};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Beta,
    Disquote,
    QuoteNorm,
    EvalBeta,
    BuiltinFold,
    DefUnfold,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [
        RuleId::Beta,
        RuleId::Disquote,
        RuleId::QuoteNorm,
        RuleId::EvalBeta,
        RuleId::BuiltinFold,
        RuleId::DefUnfold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Beta => "beta",
            RuleId::Disquote => "disquote",
            RuleId::QuoteNorm => "quote-norm",
            RuleId::EvalBeta => "eval-beta",
            RuleId::BuiltinFold => "builtin-fold",
            RuleId::DefUnfold => "def-unfold",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            RuleId::Beta => "(\\x . B) A  ~>  B[x := A]",
            RuleId::Disquote => "[[ '[ A ] ]]_t  ~>  A, also for literals denoting A",
            RuleId::QuoteNorm => "'[ A ]  ~>  the construction literal of A",
            RuleId::EvalBeta => {
                "(\\x . [[ B ]]_t) A  ~>  [[ (\\x . B) A ]]_t when x is not free in what B denotes"
            }
            RuleId::BuiltinFold => "builtin applied to literals  ~>  its value",
            RuleId::DefUnfold => "defined constant  ~>  its definiens",
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// A set of enabled rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSet(u8);

impl RuleSet {
    pub fn all() -> Self {
        RuleSet(0x3f)
    }

    pub fn only(rules: &[RuleId]) -> Self {
        RuleSet(rules.iter().fold(0, |acc, r| acc | r.bit()))
    }

    pub fn contains(self, r: RuleId) -> bool {
        self.0 & r.bit() != 0
    }

    fn intersect(self, other: RuleSet) -> RuleSet {
        RuleSet(self.0 & other.0)
    }
}

/// Which definitions unfold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delta {
    None,
    /// Definitions not marked opaque.
    Transparent,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleId,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteReport {
    pub result: Expr,
    pub steps: Vec<Step>,
    pub fuel_used: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(
        "substituting for {var} is blocked at {at}: its freeness under evaluation is not decided"
    )]
    SubstitutionBlocked { var: Var, at: Expr },
    #[error("cannot substitute an expression of type {found} for {var}")]
    SubstitutionType { var: Var, found: Type },
    #[error("normalization ran out of fuel after {} steps", .0.fuel_used)]
    FuelExhausted(Box<RewriteReport>),
    #[error("no {rule} redex at path {path:?}")]
    NoRedex { rule: RuleId, path: Vec<usize> },
    #[error("hypothesis `{name}` does not hold")]
    HypothesisFailed { name: String },
    #[error("{0}")]
    Instantiation(String),
    #[error("{0}")]
    Type(#[from] TypeError),
}

pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub fuel: usize,
    pub delta: Delta,
    pub rules: RuleSet,
}

impl NormalizeOptions {
    /// Fuel from `CTTQE_FUEL` when set to a positive number.
    pub fn default_fuel() -> usize {
        std::env::var("CTTQE_FUEL")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n| n > 0)
            .unwrap_or(DEFAULT_FUEL)
    }
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            fuel: NormalizeOptions::default_fuel(),
            delta: Delta::Transparent,
            rules: RuleSet::all(),
        }
    }
}

/// Rewriting relative to a theory.
#[derive(Clone, Copy)]
pub struct Rewriter<'a> {
    pub theory: &'a Theory,
    pub delta: Delta,
    pub rules: RuleSet,
}

struct Found {
    rule: RuleId,
    path: Vec<usize>,
    result: Expr,
}

const PRIORITY_IN_EVAL: RuleSet =
    RuleSet(1 << RuleId::BuiltinFold as u8 | 1 << RuleId::QuoteNorm as u8);
const SIDE_CONDITION_FUEL: usize = 1000;

impl<'a> Rewriter<'a> {
    pub fn new(theory: &'a Theory) -> Self {
        Rewriter {
            theory,
            delta: Delta::Transparent,
            rules: RuleSet::all(),
        }
    }

    pub fn with_delta(mut self, delta: Delta) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_rules(mut self, rules: RuleSet) -> Self {
        self.rules = rules;
        self
    }

    /// One leftmost-outermost step.
    pub fn step(&self, e: &Expr) -> Option<(Expr, Step)> {
        let mut path = Vec::new();
        let f = self.find(e, self.rules, &mut path)?;
        let out = e
            .replace_at(&f.path, f.result)
            .expect("contracta keep their type");
        Some((
            out,
            Step {
                rule: f.rule,
                path: f.path,
            },
        ))
    }

    /// Contracts the redex for `rule` at `path`.
    pub fn contract_at(
        &self,
        e: &Expr,
        path: &[usize],
        rule: RuleId,
    ) -> Result<Expr, RewriteError> {
        let none = || RewriteError::NoRedex {
            rule,
            path: path.to_vec(),
        };
        let sub = e.at_path(path).ok_or_else(none)?;
        let rules = RuleSet::only(&[rule]);
        let result = match sub.kind() {
            ExprKind::Eval(arg, target) => self.eval_root(arg, target, rules),
            _ => self.root(sub, rules),
        };
        match result {
            Some((r, x)) if r == rule => Ok(e.replace_at(path, x)?),
            _ => Err(none()),
        }
    }

    pub fn normalize(&self, e: &Expr, fuel: usize) -> Result<RewriteReport, RewriteError> {
        let mut cur = e.clone();
        let mut steps = Vec::new();
        loop {
            match self.step(&cur) {
                None => {
                    return Ok(RewriteReport {
                        result: cur,
                        fuel_used: steps.len(),
                        steps,
                    })
                }
                Some(_) if steps.len() >= fuel => {
                    return Err(RewriteError::FuelExhausted(Box::new(RewriteReport {
                        result: cur,
                        fuel_used: steps.len(),
                        steps,
                    })))
                }
                Some((next, s)) => {
                    cur = next;
                    steps.push(s);
                }
            }
        }
    }

    fn find(&self, e: &Expr, rules: RuleSet, path: &mut Vec<usize>) -> Option<Found> {
        if let ExprKind::Eval(arg, target) = e.kind() {
            if rules.contains(RuleId::Disquote) {
                if let ExprKind::Quote(a) = arg.kind() {
                    if a.ty() == target {
                        return Some(self.found(RuleId::Disquote, path, a.clone()));
                    }
                }
            }
            path.push(0);
            let inner = self.find(arg, rules.intersect(PRIORITY_IN_EVAL), path);
            path.pop();
            if inner.is_some() {
                return inner;
            }
        }
        if let Some((rule, result)) = match e.kind() {
            ExprKind::Eval(arg, target) => self.eval_root(arg, target, rules),
            _ => self.root(e, rules),
        } {
            return Some(self.found(rule, path, result));
        }
        let children: &[usize] = match e.kind() {
            ExprKind::App(..) => &[0, 1],
            ExprKind::Abs(..) | ExprKind::Eval(..) => &[0],
            _ => &[],
        };
        for &i in children {
            path.push(i);
            let r = self.find(e.child(i).expect("child exists"), rules, path);
            path.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }

    fn found(&self, rule: RuleId, path: &[usize], result: Expr) -> Found {
        Found {
            rule,
            path: path.to_vec(),
            result,
        }
    }

    fn eval_root(&self, arg: &Expr, target: &Type, rules: RuleSet) -> Option<(RuleId, Expr)> {
        if !rules.contains(RuleId::Disquote) {
            return None;
        }
        if let ExprKind::Quote(a) = arg.kind() {
            return (a.ty() == target).then(|| (RuleId::Disquote, a.clone()));
        }
        let c = from_expr(arg).ok()?;
        match classify(&c) {
            Properness::Proper { ty, expr } if ty == *target => Some((RuleId::Disquote, expr)),
            _ => None,
        }
    }

    fn root(&self, e: &Expr, rules: RuleSet) -> Option<(RuleId, Expr)> {
        match e.kind() {
            ExprKind::App(f, a) => {
                if let ExprKind::Abs(x, body) = f.kind() {
                    if rules.contains(RuleId::Beta) {
                        if let Ok(r) = substitute(body, x, a) {
                            return Some((RuleId::Beta, r));
                        }
                    }
                    if rules.contains(RuleId::EvalBeta) {
                        if let Some(r) = self.eval_beta(x, body, a) {
                            return Some((RuleId::EvalBeta, r));
                        }
                    }
                }
                if rules.contains(RuleId::BuiltinFold) {
                    if let Some(r) = builtin_step(e) {
                        return Some((RuleId::BuiltinFold, r));
                    }
                }
                None
            }
            ExprKind::Quote(a) if rules.contains(RuleId::QuoteNorm) && !a.is_atom() => {
                let c = encode(a).expect("quotations are eval-free");
                Some((RuleId::QuoteNorm, as_expr(&c)))
            }
            ExprKind::Const(c) if rules.contains(RuleId::DefUnfold) => {
                let (body, opaque) = self.theory.definition(c)?;
                let unfold = match self.delta {
                    Delta::None => false,
                    Delta::Transparent => !opaque,
                    Delta::All => true,
                };
                unfold.then(|| (RuleId::DefUnfold, body.clone()))
            }
            _ => None,
        }
    }

    /// `(\x . [[ B ]]_t) A ~> [[ (\x . B) A ]]_t`, when `(\x . B) A` folds
    /// to a literal denoting an expression of type `t` without `x` free.
    fn eval_beta(&self, x: &Var, body: &Expr, a: &Expr) -> Option<Expr> {
        let ExprKind::Eval(b, target) = body.kind() else {
            return None;
        };
        let redex = Expr::app(Expr::abs(x.clone(), b.clone()), a.clone()).ok()?;
        let side = Rewriter {
            theory: self.theory,
            delta: self.delta,
            rules: RuleSet::all(),
        };
        let folded = side.normalize(&redex, SIDE_CONDITION_FUEL).ok()?.result;
        let c = ground_value(&folded)?;
        match classify(&c) {
            Properness::Proper { ty, expr }
                if ty == *target && free_status(x, &expr) == FreeStatus::NotFree =>
            {
                Expr::eval(redex, target.clone()).ok()
            }
            _ => None,
        }
    }
}

/// One step against the standard theory, unfolding transparent definitions.
pub fn step(e: &Expr) -> Option<(Expr, Step)> {
    Rewriter::new(Theory::standard_ref()).step(e)
}

pub fn normalize(e: &Expr, opts: &NormalizeOptions) -> Result<RewriteReport, RewriteError> {
    normalize_in(e, Theory::standard_ref(), opts)
}

pub fn normalize_in(
    e: &Expr,
    theory: &Theory,
    opts: &NormalizeOptions,
) -> Result<RewriteReport, RewriteError> {
    Rewriter::new(theory)
        .with_delta(opts.delta)
        .with_rules(opts.rules)
        .normalize(e, opts.fuel)
}

/// Re-applies recorded steps; used to check reports.
pub fn replay(e: &Expr, steps: &[Step], rw: &Rewriter) -> Result<Expr, RewriteError> {
    steps
        .iter()
        .try_fold(e.clone(), |cur, s| rw.contract_at(&cur, &s.path, s.rule))
}

/// The binders and body of `forall x1 ... xn . body`.
pub fn strip_foralls(e: &Expr) -> (Vec<Var>, Expr) {
    let mut vars = Vec::new();
    let mut cur = e.clone();
    loop {
        let (head, args) = cur.strip_apps();
        let is_eq = head.as_const().is_some_and(|c| &*c.name == constants::EQ) && args.len() == 2;
        if !is_eq {
            break;
        }
        let next = match (args[0].kind(), args[1].kind()) {
            (ExprKind::Abs(x, t), ExprKind::Abs(y, body))
                if x == y
                    && t.as_const() == Some(&constants::truth())
                    && *body.ty() == Type::Omicron =>
            {
                vars.push(x.clone());
                body.clone()
            }
            _ => break,
        };
        cur = next;
    }
    (vars, cur)
}

/// Instantiates the leading universal variables of a schema by name.
pub fn instantiate_schema(
    schema: &Expr,
    bindings: &[(String, Expr)],
) -> Result<Expr, RewriteError> {
    let (body, pairs) = schema_pairs(schema, bindings)?;
    substitute_many(&body, &pairs)
}

/// Instantiates a schema of the form `forall ... . H => B`, checks that the
/// instance of `H` computes to `T`, and returns the instance of `B`. The
/// hypotheses are checked before the conclusion is instantiated.
pub fn instantiate_and_discharge(
    schema: &Expr,
    bindings: &[(String, Expr)],
    rw: &Rewriter,
    fuel: usize,
) -> Result<Expr, RewriteError> {
    let (body, pairs) = schema_pairs(schema, bindings)?;
    let (head, args) = body.strip_apps();
    if head.as_const() != Some(&constants::implies()) || args.len() != 2 {
        return substitute_many(&body, &pairs);
    }
    let hyp = substitute_many(args[0], &pairs)?;
    check_hypotheses(&hyp, rw, fuel)?;
    substitute_many(args[1], &pairs)
}

fn schema_pairs(
    schema: &Expr,
    bindings: &[(String, Expr)],
) -> Result<(Expr, Vec<(Var, Expr)>), RewriteError> {
    let (vars, body) = strip_foralls(schema);
    let mut pairs = Vec::new();
    for (name, value) in bindings {
        let v = vars
            .iter()
            .find(|v| &*v.name == name.as_str())
            .ok_or_else(|| {
                RewriteError::Instantiation(format!("schema has no variable `{name}`"))
            })?;
        pairs.push((v.clone(), value.clone()));
    }
    for v in &vars {
        if !bindings.iter().any(|(n, _)| n.as_str() == &*v.name) {
            return Err(RewriteError::Instantiation(format!(
                "no value given for `{}`",
                v.name
            )));
        }
    }
    Ok((body, pairs))
}

fn conjuncts(e: &Expr, out: &mut Vec<Expr>) {
    let (head, args) = e.strip_apps();
    if head.as_const() == Some(&constants::and()) && args.len() == 2 {
        conjuncts(args[0], out);
        conjuncts(args[1], out);
    } else {
        out.push(e.clone());
    }
}

/// For `H => B`, checks that each conjunct of `H` computes to `T` and
/// returns `B`. Other formulas are returned unchanged.
pub fn discharge_hypotheses(e: &Expr, rw: &Rewriter, fuel: usize) -> Result<Expr, RewriteError> {
    let (head, args) = e.strip_apps();
    if head.as_const() != Some(&constants::implies()) || args.len() != 2 {
        return Ok(e.clone());
    }
    check_hypotheses(args[0], rw, fuel)?;
    Ok(args[1].clone())
}

fn check_hypotheses(h: &Expr, rw: &Rewriter, fuel: usize) -> Result<(), RewriteError> {
    let mut hyps = Vec::new();
    conjuncts(h, &mut hyps);
    let truth = constants::truth_expr(true);
    for h in hyps {
        let value = rw.normalize(&h, fuel)?.result;
        if value != truth {
            let (hd, _) = h.strip_apps();
            let name = hd
                .as_const()
                .map(|c| c.name.to_string())
                .unwrap_or_else(|| h.to_string());
            return Err(RewriteError::HypothesisFailed { name });
        }
    }
    Ok(())
}

/// Whether `c` names a constant the theory can unfold under `delta`.
pub fn unfoldable(theory: &Theory, name: &str, delta: Delta) -> bool {
    match theory.get(name).map(|d| &d.kind) {
        Some(ConstKind::Defined { opaque, .. }) => match delta {
            Delta::None => false,
            Delta::Transparent => !opaque,
            Delta::All => true,
        },
        _ => false,
    }
}
