//! Finite standard models and the valuation function.
//!
//! The domain of individuals has a chosen finite size; truth values and
//! constructions are fixed; function domains contain all total functions.
//! Function values are closures, so functions over constructions are
//! representable. Equality at a function type compares pointwise, which
//! needs the domain enumerated: exact over `i` and `o`, bounded by depth
//! over `eps` when a bound is supplied (the result is then approximate).

mod model_file;
mod valid;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::constants;
use crate::construction::{classify, encode, Construction, Properness};
use crate::expr::{Const, Expr, ExprKind, Var};
use crate::stdlib::{Builtin, BuiltinValue, ConstKind, Theory};
use crate::types::Type;

pub use model_file::{parse_assignment, parse_model, parse_value};
pub use valid::{check_valid, Sampler, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("cannot decide equality at type {0} without a bound on constructions")]
    UnsupportedEquality(Type),
    #[error("domain of type {0} is too large to enumerate")]
    DomainTooLarge(Type),
    #[error("valuation exceeded its depth bound")]
    FuelExhausted,
    #[error("model file line {line}: {message}")]
    ModelSyntax { line: usize, message: String },
}

type Res<T> = Result<T, SemanticsError>;

pub type FnImpl = dyn Fn(&Value) -> Res<Value> + Send + Sync;

/// A total function between domains.
#[derive(Clone)]
pub struct Func {
    pub domain: Type,
    pub codomain: Type,
    imp: Arc<FnImpl>,
}

impl Func {
    pub fn new(
        domain: Type,
        codomain: Type,
        f: impl Fn(&Value) -> Res<Value> + Send + Sync + 'static,
    ) -> Func {
        Func {
            domain,
            codomain,
            imp: Arc::new(f),
        }
    }

    pub fn apply(&self, arg: &Value) -> Res<Value> {
        (self.imp)(arg)
    }
}

#[derive(Clone)]
pub enum Value {
    Individual(usize),
    Truth(bool),
    Constr(Construction),
    Func(Func),
}

impl Value {
    pub fn as_truth(&self) -> Option<bool> {
        match self {
            Value::Truth(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_constr(&self) -> Option<&Construction> {
        match self {
            Value::Constr(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_func(&self) -> Option<&Func> {
        match self {
            Value::Func(f) => Some(f),
            _ => None,
        }
    }

    /// Structural equality on first-order values; functions compare by
    /// identity. Use [`Model::equal`] for extensional equality.
    pub fn same_first_order(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Individual(a), Value::Individual(b)) => a == b,
            (Value::Truth(a), Value::Truth(b)) => a == b,
            (Value::Constr(a), Value::Constr(b)) => a == b,
            (Value::Func(a), Value::Func(b)) => Arc::ptr_eq(&a.imp, &b.imp),
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Individual(i) => write!(f, "{i}"),
            Value::Truth(true) => f.write_str("T"),
            Value::Truth(false) => f.write_str("F"),
            Value::Constr(c) => write!(f, "{c}"),
            Value::Func(func) => write!(
                f,
                "<function {}>",
                Type::fun(func.domain.clone(), func.codomain.clone())
            ),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A bound on the constructions enumerated for equality and quantifiers
/// over `eps`: all constructions over `atoms` of depth at most `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsBound {
    pub depth: usize,
    pub atoms: Vec<Construction>,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub eps_bound: Option<EpsBound>,
    /// Limit on nested valuation calls.
    pub max_depth: usize,
    /// Largest function domain tabulated for equality.
    pub enum_cap: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            eps_bound: None,
            max_depth: 512,
            enum_cap: 100_000,
        }
    }
}

#[derive(Clone)]
struct ModelInner {
    iota_size: usize,
    theory: Theory,
    table: HashMap<Const, Value>,
}

/// An interpretation of the constants over a frame with `iota_size`
/// individuals. Logical and built-in constants have their fixed meaning;
/// numerals, `S`, `+`, `*` and `^` default to arithmetic modulo the size;
/// other primitive constants take a value from the table or the default of
/// their type.
#[derive(Clone)]
pub struct Model {
    inner: Arc<ModelInner>,
}

impl Model {
    pub fn new(iota_size: usize, theory: Theory) -> Model {
        assert!(iota_size > 0, "the domain of individuals is nonempty");
        Model {
            inner: Arc::new(ModelInner {
                iota_size,
                theory,
                table: HashMap::new(),
            }),
        }
    }

    pub fn standard(iota_size: usize) -> Model {
        Model::new(iota_size, Theory::standard())
    }

    pub fn iota_size(&self) -> usize {
        self.inner.iota_size
    }

    pub fn theory(&self) -> &Theory {
        &self.inner.theory
    }

    /// Sets the value of a primitive constant.
    pub fn with_constant(mut self, c: Const, v: Value) -> Model {
        Arc::make_mut(&mut self.inner).table.insert(c, v);
        self
    }

    pub fn constant_value(&self, c: &Const) -> Option<&Value> {
        self.inner.table.get(c)
    }

    /// The fixed value used for evaluations with no natural value, and the
    /// default for unassigned variables and uninterpreted constants.
    pub fn default_value(&self, ty: &Type) -> Value {
        default_value(ty)
    }

    /// Extensional equality at `ty` under the given options.
    pub fn equal(&self, a: &Value, b: &Value, ty: &Type, opts: &EvalOptions) -> Res<bool> {
        let ctx = Ctx::new(self.clone(), opts.clone());
        let out = eq_values(a, b, ty, &ctx);
        ctx.release();
        out
    }
}

pub fn default_value(ty: &Type) -> Value {
    match ty {
        Type::Iota => Value::Individual(0),
        Type::Omicron => Value::Truth(false),
        Type::Epsilon => Value::Constr(Construction::QuotedConst(constants::unspecified())),
        Type::Fun(a, b) => {
            let out = default_value(b);
            Value::Func(Func::new((**a).clone(), (**b).clone(), move |_| {
                Ok(out.clone())
            }))
        }
    }
}

/// A variable assignment: explicit values over per-type defaults.
#[derive(Clone, Default)]
pub struct Assignment {
    map: Arc<BTreeMap<Var, Value>>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn get(&self, v: &Var) -> Value {
        self.map
            .get(v)
            .cloned()
            .unwrap_or_else(|| default_value(&v.ty))
    }

    /// `phi[x -> d]`.
    pub fn update(&self, x: Var, d: Value) -> Assignment {
        let mut map = (*self.map).clone();
        map.insert(x, d);
        Assignment { map: Arc::new(map) }
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&Var, &Value)> {
        self.map.iter()
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter()).finish()
    }
}

/// A value with a flag saying whether a bounded enumeration of
/// constructions was involved.
#[derive(Debug, Clone)]
pub struct Valuation {
    pub value: Value,
    pub approximate: bool,
}

struct Ctx {
    model: Model,
    opts: EvalOptions,
    approximate: AtomicBool,
    domains: Mutex<HashMap<Type, Arc<Vec<Value>>>>,
    defined: Mutex<HashMap<Const, Value>>,
}

impl Ctx {
    fn new(model: Model, opts: EvalOptions) -> Arc<Ctx> {
        Arc::new(Ctx {
            model,
            opts,
            approximate: AtomicBool::new(false),
            domains: Mutex::new(HashMap::new()),
            defined: Mutex::new(HashMap::new()),
        })
    }

    /// Drops the caches, whose entries may hold the context itself.
    fn release(&self) {
        self.domains.lock().expect("lock").clear();
        self.defined.lock().expect("lock").clear();
    }
}

/// Valuation with no bound on constructions.
pub fn valuate(e: &Expr, m: &Model, phi: &Assignment) -> Res<Value> {
    valuate_with(e, m, phi, &EvalOptions::default()).map(|v| v.value)
}

pub fn valuate_with(e: &Expr, m: &Model, phi: &Assignment, opts: &EvalOptions) -> Res<Valuation> {
    let ctx = Ctx::new(m.clone(), opts.clone());
    let value = val(e, phi, &ctx, 0);
    ctx.release();
    Ok(Valuation {
        value: value?,
        approximate: ctx.approximate.load(Ordering::Relaxed),
    })
}

fn val(e: &Expr, phi: &Assignment, ctx: &Arc<Ctx>, depth: usize) -> Res<Value> {
    if depth > ctx.opts.max_depth {
        return Err(SemanticsError::FuelExhausted);
    }
    match e.kind() {
        ExprKind::Var(v) => Ok(phi.get(v)),
        ExprKind::Const(c) => constant(c, ctx, depth),
        ExprKind::App(f, a) => {
            let fv = val(f, phi, ctx, depth + 1)?;
            let av = val(a, phi, ctx, depth + 1)?;
            match fv {
                Value::Func(func) => func.apply(&av),
                _ => unreachable!("well-typed application"),
            }
        }
        ExprKind::Abs(x, body) => {
            let (x, body, phi, ctx2) = (x.clone(), body.clone(), phi.clone(), ctx.clone());
            let cod = body.ty().clone();
            Ok(Value::Func(Func::new(x.ty.clone(), cod, move |d| {
                val(&body, &phi.update(x.clone(), d.clone()), &ctx2, depth + 1)
            })))
        }
        ExprKind::Quote(a) => Ok(Value::Constr(encode(a).expect("quotations are eval-free"))),
        ExprKind::Eval(a, target) => {
            let Value::Constr(c) = val(a, phi, ctx, depth + 1)? else {
                unreachable!("evaluation arguments have type eps")
            };
            match classify(&c) {
                Properness::Proper { ty, expr } if ty == *target => val(&expr, phi, ctx, depth + 1),
                _ => Ok(default_value(target)),
            }
        }
    }
}

fn truth(b: bool) -> Value {
    Value::Truth(b)
}

fn curried2(
    a: Type,
    b: Type,
    c: Type,
    f: impl Fn(&Value, &Value) -> Res<Value> + Send + Sync + 'static,
) -> Value {
    let f = Arc::new(f);
    let inner_ty = (b.clone(), c.clone());
    Value::Func(Func::new(a, Type::fun(b, c), move |x| {
        let (f, x) = (f.clone(), x.clone());
        Ok(Value::Func(Func::new(
            inner_ty.0.clone(),
            inner_ty.1.clone(),
            move |y| f(&x, y),
        )))
    }))
}

fn bool_op(f: fn(bool, bool) -> bool) -> Value {
    curried2(Type::Omicron, Type::Omicron, Type::Omicron, move |x, y| {
        Ok(truth(f(x.as_truth().expect("o"), y.as_truth().expect("o"))))
    })
}

fn ind_op(n: usize, f: fn(u128, u128, u128) -> u128) -> Value {
    curried2(Type::Iota, Type::Iota, Type::Iota, move |x, y| {
        match (x, y) {
            (Value::Individual(a), Value::Individual(b)) => Ok(Value::Individual(f(
                *a as u128, *b as u128, n as u128,
            )
                as usize)),
            _ => unreachable!("i"),
        }
    })
}

fn pow_mod(mut base: u128, mut exp: u128, n: u128) -> u128 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % n;
        }
        base = base * base % n;
        exp >>= 1;
    }
    acc
}

/// Native meanings of the defined connectives. Each agrees with the
/// valuation of its definiens; tests check this.
fn native_connective(c: &Const) -> Option<Value> {
    Some(if *c == constants::truth() {
        truth(true)
    } else if *c == constants::falsity() {
        truth(false)
    } else if *c == constants::and() {
        bool_op(|a, b| a && b)
    } else if *c == constants::or() {
        bool_op(|a, b| a || b)
    } else if *c == constants::implies() {
        bool_op(|a, b| !a || b)
    } else if *c == constants::not() {
        Value::Func(Func::new(Type::Omicron, Type::Omicron, |x| {
            Ok(truth(!x.as_truth().expect("o")))
        }))
    } else {
        return None;
    })
}

fn builtin_value(b: Builtin, c: &Const) -> Value {
    let cod = c.ty.as_fun().expect("builtins are functions").1.clone();
    if b.arity() == 1 {
        let cod2 = cod.clone();
        return Value::Func(Func::new(Type::Epsilon, cod, move |x| {
            let arg = x.as_constr().expect("eps").clone();
            Ok(builtin_result(b.compute(&[arg]), &cod2))
        }));
    }
    let (b2, result) = cod
        .as_fun()
        .map(|(b2, r)| (b2.clone(), r.clone()))
        .expect("binary");
    let result2 = result.clone();
    curried2(Type::Epsilon, b2, result, move |x, y| {
        let args = [
            x.as_constr().expect("eps").clone(),
            y.as_constr().expect("eps").clone(),
        ];
        Ok(builtin_result(b.compute(&args), &result2))
    })
}

fn builtin_result(v: Option<BuiltinValue>, ty: &Type) -> Value {
    match v {
        Some(BuiltinValue::Truth(b)) => truth(b),
        Some(BuiltinValue::Constr(c)) => Value::Constr(c),
        None => default_value(ty),
    }
}

fn numeral_mod(name: &str, n: usize) -> usize {
    name.bytes().fold(0u128, |acc, d| {
        (acc * 10 + u128::from(d - b'0')) % n as u128
    }) as usize
}

fn constant(c: &Const, ctx: &Arc<Ctx>, depth: usize) -> Res<Value> {
    let model = &ctx.model;
    let n = model.iota_size();
    if let Some(v) = model.inner.table.get(c) {
        return Ok(v.clone());
    }
    if let Some(v) = native_connective(c) {
        return Ok(v);
    }
    if &*c.name == constants::EQ {
        let ty = c.ty.as_fun().expect("relation").0.clone();
        let ctx2 = ctx.clone();
        let t2 = ty.clone();
        return Ok(curried2(ty.clone(), ty, Type::Omicron, move |a, b| {
            Ok(truth(eq_values(a, b, &t2, &ctx2)?))
        }));
    }
    if let Some(b) = Builtin::of(c) {
        return Ok(builtin_value(b, c));
    }
    if constants::numeral_value(c).is_some()
        || (c.ty == Type::Iota && constants::is_numeral_name(&c.name))
    {
        return Ok(Value::Individual(numeral_mod(&c.name, n)));
    }
    if *c == constants::plus() {
        return Ok(ind_op(n, |a, b, n| (a + b) % n));
    }
    if *c == constants::times() {
        return Ok(ind_op(n, |a, b, n| a * b % n));
    }
    if *c == constants::pow() {
        return Ok(ind_op(n, pow_mod));
    }
    if *c == constants::succ() {
        return Ok(Value::Func(Func::new(
            Type::Iota,
            Type::Iota,
            move |x| match x {
                Value::Individual(a) => Ok(Value::Individual((a + 1) % n)),
                _ => unreachable!("i"),
            },
        )));
    }
    if let Some((body, _)) = model.theory().definition(c) {
        if let Some(v) = ctx.defined.lock().expect("lock").get(c) {
            return Ok(v.clone());
        }
        let body = body.clone();
        let v = val(&body, &Assignment::new(), ctx, depth + 1)?;
        ctx.defined
            .lock()
            .expect("lock")
            .insert(c.clone(), v.clone());
        return Ok(v);
    }
    Ok(default_value(&c.ty))
}

fn eq_values(a: &Value, b: &Value, ty: &Type, ctx: &Arc<Ctx>) -> Res<bool> {
    match (a, b) {
        (Value::Func(f), Value::Func(g)) => {
            if Arc::ptr_eq(&f.imp, &g.imp) {
                return Ok(true);
            }
            let (dom, cod) = ty.as_fun().expect("function type");
            let domain = domain_values(dom, ctx)?;
            for d in domain.iter() {
                if !eq_values(&f.apply(d)?, &g.apply(d)?, cod, ctx)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(a.same_first_order(b)),
    }
}

/// The elements of a domain, exactly or up to the construction bound.
fn domain_values(ty: &Type, ctx: &Arc<Ctx>) -> Res<Arc<Vec<Value>>> {
    if let Some(v) = ctx.domains.lock().expect("lock").get(ty) {
        if ty.mentions_epsilon() {
            ctx.approximate.store(true, Ordering::Relaxed);
        }
        return Ok(v.clone());
    }
    let values: Vec<Value> = match ty {
        Type::Iota => (0..ctx.model.iota_size()).map(Value::Individual).collect(),
        Type::Omicron => vec![truth(false), truth(true)],
        Type::Epsilon => {
            let bound = ctx
                .opts
                .eps_bound
                .as_ref()
                .ok_or_else(|| SemanticsError::UnsupportedEquality(ty.clone()))?;
            ctx.approximate.store(true, Ordering::Relaxed);
            Construction::enumerate(&bound.atoms, bound.depth)
                .into_iter()
                .map(Value::Constr)
                .collect()
        }
        Type::Fun(a, b) => {
            let da = domain_values(a, ctx)?;
            let db = domain_values(b, ctx)?;
            let count = (db.len() as f64).powf(da.len() as f64);
            if count > ctx.opts.enum_cap as f64 {
                return Err(if ty.mentions_epsilon() {
                    SemanticsError::UnsupportedEquality(ty.clone())
                } else {
                    SemanticsError::DomainTooLarge(ty.clone())
                });
            }
            tabulated_functions(a, b, &da, &db, ctx)
        }
    };
    let values = Arc::new(values);
    ctx.domains
        .lock()
        .expect("lock")
        .insert(ty.clone(), values.clone());
    Ok(values)
}

fn tabulated_functions(
    a: &Type,
    b: &Type,
    da: &Arc<Vec<Value>>,
    db: &Arc<Vec<Value>>,
    ctx: &Arc<Ctx>,
) -> Vec<Value> {
    let count = db.len().pow(da.len() as u32);
    (0..count)
        .map(|mut code| {
            let choice: Vec<usize> = (0..da.len())
                .map(|_| {
                    let c = code % db.len();
                    code /= db.len();
                    c
                })
                .collect();
            let (da, db, a2, b2, ctx) = (da.clone(), db.clone(), a.clone(), b.clone(), ctx.clone());
            Value::Func(Func::new(a.clone(), b.clone(), move |x| {
                for (i, d) in da.iter().enumerate() {
                    if eq_values(x, d, &a2, &ctx)? {
                        return Ok(db[choice[i]].clone());
                    }
                }
                ctx.approximate.store(true, Ordering::Relaxed);
                Ok(default_value(&b2))
            }))
        })
        .collect()
}

/// The elements of a type's domain, as enumerated for validity checking.
pub fn enumerate_domain(ty: &Type, m: &Model, opts: &EvalOptions) -> Res<Vec<Value>> {
    let ctx = Ctx::new(m.clone(), opts.clone());
    let v = domain_values(ty, &ctx);
    let out = v.map(|v| (*v).clone());
    ctx.release();
    out
}

/// Quoted atoms occurring anywhere in an expression, including inside
/// quotations.
pub fn quoted_atoms(e: &Expr, out: &mut Vec<Construction>) {
    fn inside(e: &Expr, out: &mut Vec<Construction>) {
        let atom = match e.kind() {
            ExprKind::Var(v) => Some(Construction::QuotedVar(v.clone())),
            ExprKind::Const(c) => Some(Construction::QuotedConst(c.clone())),
            _ => None,
        };
        if let Some(a) = atom {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        match e.kind() {
            ExprKind::App(f, a) => {
                inside(f, out);
                inside(a, out);
            }
            ExprKind::Abs(v, b) => {
                let a = Construction::QuotedVar(v.clone());
                if !out.contains(&a) {
                    out.push(a);
                }
                inside(b, out);
            }
            ExprKind::Quote(b) | ExprKind::Eval(b, _) => inside(b, out),
            _ => {}
        }
    }
    match e.kind() {
        ExprKind::Quote(b) => inside(b, out),
        ExprKind::App(f, a) => {
            quoted_atoms(f, out);
            quoted_atoms(a, out);
        }
        ExprKind::Abs(_, b) | ExprKind::Eval(b, _) => quoted_atoms(b, out),
        _ => {}
    }
}

/// True when `c` names a constant whose meaning a model may not change.
pub fn is_logical(c: &Const, theory: &Theory) -> bool {
    if &*c.name == constants::EQ || Builtin::of(c).is_some() || native_connective(c).is_some() {
        return true;
    }
    matches!(
        theory.get(&c.name).map(|d| &d.kind),
        Some(ConstKind::Defined { .. }) | Some(ConstKind::Builtin)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::as_expr;
    use crate::surface::parse_expr;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn truth_of(e: &Expr, m: &Model) -> bool {
        valuate(e, m, &Assignment::new())
            .unwrap()
            .as_truth()
            .unwrap()
    }

    #[test]
    fn construction_literals_denote_themselves() {
        let c = Construction::app(
            Construction::QuotedVar(Var::new("x", Type::Iota)),
            Construction::QuotedVar(Var::new("x", Type::Iota)),
        );
        let v = valuate(&as_expr(&c), &Model::standard(2), &Assignment::new()).unwrap();
        assert_eq!(v.as_constr(), Some(&c));
    }

    #[test]
    fn disquotation_reads_through_the_assignment() {
        let m = Model::standard(3);
        let phi = Assignment::new().update(Var::new("x", Type::Iota), Value::Individual(2));
        let e = p("[[ '[ x:i ] ]]_i");
        assert!(matches!(
            valuate(&e, &m, &phi).unwrap(),
            Value::Individual(2)
        ));
    }

    #[test]
    fn improper_evaluation_gets_the_default() {
        let m = Model::standard(2);
        let bad = Construction::app(
            Construction::QuotedVar(Var::new("x", Type::Iota)),
            Construction::QuotedVar(Var::new("x", Type::Iota)),
        );
        let x = Var::new("x", Type::Epsilon);
        let phi = Assignment::new().update(x, Value::Constr(bad));
        let e = p("[[ x:eps ]]_o");
        assert_eq!(valuate(&e, &m, &phi).unwrap().as_truth(), Some(false));
        // The wrong type also yields the default.
        let e = p("[[ '[ T ] ]]_i");
        assert!(matches!(
            valuate(&e, &m, &Assignment::new()).unwrap(),
            Value::Individual(0)
        ));
    }

    #[test]
    fn native_connectives_agree_with_their_definitions() {
        let m = Model::standard(1);
        let theory = Theory::standard();
        for name in ["T", "F", "/\\", "\\/", "=>", "~"] {
            let c = Const::new(name, constants::standard_fixed(name).unwrap());
            let body = theory.unfold(name).unwrap();
            let native = valuate(&Expr::constant(c.clone()), &m, &Assignment::new()).unwrap();
            let unfolded = valuate(&body, &m, &Assignment::new()).unwrap();
            assert!(
                m.equal(&native, &unfolded, &c.ty, &EvalOptions::default())
                    .unwrap(),
                "{name}"
            );
        }
    }

    #[test]
    fn arithmetic_is_modular() {
        let m = Model::standard(5);
        assert!(truth_of(&p("3 + 4 = 2"), &m));
        assert!(truth_of(&p("2 ^ 3 = 3"), &m));
        assert!(truth_of(&p("S 4 = 0"), &m));
    }

    #[test]
    fn function_equality_needs_a_bound_over_eps() {
        let m = Model::standard(2);
        let e = p("(\\x:eps . T) = (\\x:eps . is-var x)");
        assert_eq!(
            valuate(&e, &m, &Assignment::new()).unwrap_err(),
            SemanticsError::UnsupportedEquality(Type::Epsilon)
        );
        let opts = EvalOptions {
            eps_bound: Some(EpsBound {
                depth: 2,
                atoms: vec![Construction::QuotedVar(Var::new("x", Type::Iota))],
            }),
            ..EvalOptions::default()
        };
        let v = valuate_with(&e, &m, &Assignment::new(), &opts).unwrap();
        assert_eq!(v.value.as_truth(), Some(false));
        assert!(v.approximate);
    }

    #[test]
    fn assignment_update_law() {
        let x = Var::new("x", Type::Iota);
        let y = Var::new("y", Type::Iota);
        let phi = Assignment::new().update(y.clone(), Value::Individual(1));
        let psi = phi.update(x.clone(), Value::Individual(2));
        assert!(matches!(psi.get(&x), Value::Individual(2)));
        assert!(matches!(psi.get(&y), Value::Individual(1)));
    }
}
