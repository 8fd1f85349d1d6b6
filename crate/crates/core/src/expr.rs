//! Typed expressions.
//!
//! Every [`Expr`] is well formed by construction: the smart constructors
//! check the formation rules and refuse anything else, so downstream code can
//! treat `ty()` as total. Nodes are reference counted and immutable.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::construction;
use crate::span::SourceSpan;
use crate::types::Type;

pub type Name = Arc<str>;

/// A typed variable symbol. `x:i` and `x:o` are different variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Name,
    pub ty: Type,
}

impl Var {
    pub fn new(name: impl Into<Name>, ty: Type) -> Self {
        Var {
            name: name.into(),
            ty,
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}",
            self.name,
            crate::surface::print_type_ascription(&self.ty)
        )
    }
}

/// A typed constant symbol.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Const {
    pub name: Name,
    pub ty: Type,
}

impl Const {
    pub fn new(name: impl Into<Name>, ty: Type) -> Self {
        Const {
            name: name.into(),
            ty,
        }
    }
}

impl fmt::Debug for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch: function of type {fun} cannot take an argument of type {arg}")]
    TypeMismatch { fun: Type, arg: Type },
    #[error("cannot apply an expression of non-function type {0}")]
    NotAFunction(Type),
    #[error("quotation body contains an evaluation")]
    QuoteNotEvalFree,
    #[error("evaluation argument has type {0}, expected eps")]
    EvalArgNotEpsilon(Type),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Var(Var),
    Const(Const),
    App(Expr, Expr),
    Abs(Var, Expr),
    Quote(Expr),
    /// Evaluation of an `eps` argument at the target type.
    Eval(Expr, Type),
}

struct Node {
    kind: ExprKind,
    ty: Type,
    eval_free: bool,
    span: Option<SourceSpan>,
}

/// A well-typed expression.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state)
    }
}

impl Expr {
    fn mk(kind: ExprKind, ty: Type, eval_free: bool) -> Expr {
        Expr(Arc::new(Node {
            kind,
            ty,
            eval_free,
            span: None,
        }))
    }

    pub fn var(v: Var) -> Expr {
        let ty = v.ty.clone();
        Expr::mk(ExprKind::Var(v), ty, true)
    }

    pub fn constant(c: Const) -> Expr {
        let ty = c.ty.clone();
        Expr::mk(ExprKind::Const(c), ty, true)
    }

    pub fn app(fun: Expr, arg: Expr) -> Result<Expr, TypeError> {
        let ty = match fun.ty() {
            Type::Fun(dom, cod) if **dom == *arg.ty() => (**cod).clone(),
            Type::Fun(..) => {
                return Err(TypeError::TypeMismatch {
                    fun: fun.ty().clone(),
                    arg: arg.ty().clone(),
                })
            }
            other => return Err(TypeError::NotAFunction(other.clone())),
        };
        let eval_free = fun.is_eval_free() && arg.is_eval_free();
        Ok(Expr::mk(ExprKind::App(fun, arg), ty, eval_free))
    }

    /// Left-nested application `f a1 a2 ...`.
    pub fn apps<I>(fun: Expr, args: I) -> Result<Expr, TypeError>
    where
        I: IntoIterator<Item = Expr>,
    {
        args.into_iter().try_fold(fun, Expr::app)
    }

    pub fn abs(binder: Var, body: Expr) -> Expr {
        let ty = Type::fun(binder.ty.clone(), body.ty().clone());
        let eval_free = body.is_eval_free();
        Expr::mk(ExprKind::Abs(binder, body), ty, eval_free)
    }

    pub fn quote(body: Expr) -> Result<Expr, TypeError> {
        if !body.is_eval_free() {
            return Err(TypeError::QuoteNotEvalFree);
        }
        Ok(Expr::mk(ExprKind::Quote(body), Type::Epsilon, true))
    }

    pub fn eval(arg: Expr, target: Type) -> Result<Expr, TypeError> {
        if *arg.ty() != Type::Epsilon {
            return Err(TypeError::EvalArgNotEpsilon(arg.ty().clone()));
        }
        let ty = target.clone();
        Ok(Expr::mk(ExprKind::Eval(arg, target), ty, false))
    }

    /// Attaches a source span. Spans never take part in equality.
    pub fn with_span(self, span: SourceSpan) -> Expr {
        let node = Node {
            kind: self.0.kind.clone(),
            ty: self.0.ty.clone(),
            eval_free: self.0.eval_free,
            span: Some(span),
        };
        Expr(Arc::new(node))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    pub fn ty(&self) -> &Type {
        &self.0.ty
    }

    pub fn span(&self) -> Option<&SourceSpan> {
        self.0.span.as_ref()
    }

    pub fn is_eval_free(&self) -> bool {
        self.0.eval_free
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self.kind() {
            ExprKind::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&Const> {
        match self.kind() {
            ExprKind::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Expr, &Expr)> {
        match self.kind() {
            ExprKind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self.kind(), ExprKind::Var(_) | ExprKind::Const(_))
    }

    /// Splits `f a1 ... an` into the head and its arguments.
    pub fn strip_apps(&self) -> (&Expr, Vec<&Expr>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let ExprKind::App(f, a) = cur.kind() {
            args.push(a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Number of nodes, not descending into nothing special.
    pub fn size(&self) -> usize {
        match self.kind() {
            ExprKind::Var(_) | ExprKind::Const(_) => 1,
            ExprKind::App(f, a) => 1 + f.size() + a.size(),
            ExprKind::Abs(_, b) | ExprKind::Quote(b) | ExprKind::Eval(b, _) => 1 + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.kind() {
            ExprKind::Var(_) | ExprKind::Const(_) => 1,
            ExprKind::App(f, a) => 1 + f.depth().max(a.depth()),
            ExprKind::Abs(_, b) | ExprKind::Quote(b) | ExprKind::Eval(b, _) => 1 + b.depth(),
        }
    }

    /// Free variables by the ordinary syntactic definition. Quotations
    /// contribute nothing; evaluation arguments are scanned as ordinary
    /// subexpressions, so the result says nothing about variables the
    /// evaluated construction may denote (see [`free_status`]).
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name occurring anywhere, including binders and quoted
    /// material. Used to pick fresh names.
    pub fn all_var_names(&self, out: &mut BTreeSet<Name>) {
        match self.kind() {
            ExprKind::Var(v) => {
                out.insert(v.name.clone());
            }
            ExprKind::Const(_) => {}
            ExprKind::App(f, a) => {
                f.all_var_names(out);
                a.all_var_names(out);
            }
            ExprKind::Abs(v, b) => {
                out.insert(v.name.clone());
                b.all_var_names(out);
            }
            ExprKind::Quote(b) | ExprKind::Eval(b, _) => b.all_var_names(out),
        }
    }

    /// Subexpression at a path of child indices (see [`Expr::child`]).
    pub fn at_path(&self, path: &[usize]) -> Option<&Expr> {
        path.iter().try_fold(self, |e, &i| e.child(i))
    }

    /// Children visible to rewriting: `App` has 0 (function) and 1
    /// (argument), `Abs` has 0 (body), `Eval` has 0 (argument). Quotations
    /// have no rewritable children.
    pub fn child(&self, index: usize) -> Option<&Expr> {
        match (self.kind(), index) {
            (ExprKind::App(f, _), 0) => Some(f),
            (ExprKind::App(_, a), 1) => Some(a),
            (ExprKind::Abs(_, b), 0) => Some(b),
            (ExprKind::Eval(a, _), 0) => Some(a),
            _ => None,
        }
    }

    /// Rebuilds `self` with the child at `index` replaced.
    pub fn with_child(&self, index: usize, new: Expr) -> Result<Expr, TypeError> {
        match (self.kind(), index) {
            (ExprKind::App(_, a), 0) => Expr::app(new, a.clone()),
            (ExprKind::App(f, _), 1) => Expr::app(f.clone(), new),
            (ExprKind::Abs(v, _), 0) => Ok(Expr::abs(v.clone(), new)),
            (ExprKind::Eval(_, t), 0) => Expr::eval(new, t.clone()),
            _ => panic!("no child {index} in {self:?}"),
        }
    }

    /// Replaces the subexpression at `path`.
    pub fn replace_at(&self, path: &[usize], new: Expr) -> Result<Expr, TypeError> {
        match path.split_first() {
            None => Ok(new),
            Some((&i, rest)) => {
                let child = self
                    .child(i)
                    .unwrap_or_else(|| panic!("invalid path into {self:?}"));
                let replaced = child.replace_at(rest, new)?;
                self.with_child(i, replaced)
            }
        }
    }
}

fn collect_free(e: &Expr, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match e.kind() {
        ExprKind::Var(v) => {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
        ExprKind::Const(_) | ExprKind::Quote(_) => {}
        ExprKind::App(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
        ExprKind::Abs(v, b) => {
            bound.push(v.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
        ExprKind::Eval(a, _) => collect_free(a, bound, out),
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::surface::print_expr(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::surface::print_expr(self))
    }
}

/// The free-variable status of a variable in an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FreeStatus {
    Free,
    NotFree,
    /// Freeness depends on what an evaluation argument denotes and could not
    /// be settled syntactically.
    Unknown,
}

impl FreeStatus {
    /// Status of a compound whose parts have the given statuses.
    pub fn join(self, other: FreeStatus) -> FreeStatus {
        use FreeStatus::*;
        match (self, other) {
            (Free, _) | (_, Free) => Free,
            (Unknown, _) | (_, Unknown) => Unknown,
            (NotFree, NotFree) => NotFree,
        }
    }
}

/// Decides whether `x` is free in `e`.
///
/// Eval-free expressions get the ordinary syntactic answer. Under an
/// evaluation `[[ A ]]_b`, the argument must reduce to a ground construction
/// (quotations, syntax constructors and computable builtins only); then the
/// answer is read off the expression it denotes, or `NotFree` when that
/// construction is improper or of another type. Any other evaluation
/// argument yields `Unknown`.
pub fn free_status(x: &Var, e: &Expr) -> FreeStatus {
    match e.kind() {
        ExprKind::Var(v) => {
            if v == x {
                FreeStatus::Free
            } else {
                FreeStatus::NotFree
            }
        }
        ExprKind::Const(_) | ExprKind::Quote(_) => FreeStatus::NotFree,
        ExprKind::App(f, a) => {
            let left = free_status(x, f);
            if left == FreeStatus::Free {
                return left;
            }
            left.join(free_status(x, a))
        }
        ExprKind::Abs(v, b) => {
            if v == x {
                FreeStatus::NotFree
            } else {
                free_status(x, b)
            }
        }
        ExprKind::Eval(arg, target) => match construction::ground_value(arg) {
            Some(c) => match construction::classify(&c) {
                construction::Properness::Proper { ty, expr } if ty == *target => {
                    free_status(x, &expr)
                }
                _ => FreeStatus::NotFree,
            },
            None => FreeStatus::Unknown,
        },
    }
}

pub fn is_eval_free(e: &Expr) -> bool {
    e.is_eval_free()
}

pub fn type_of(e: &Expr) -> Type {
    e.ty().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_i() -> Var {
        Var::new("x", Type::Iota)
    }

    fn plus() -> Expr {
        Expr::constant(Const::new(
            "+",
            Type::curried([Type::Iota, Type::Iota], Type::Iota),
        ))
    }

    fn three() -> Expr {
        Expr::constant(Const::new("3", Type::Iota))
    }

    fn x_plus_3() -> Expr {
        Expr::apps(plus(), [Expr::var(x_i()), three()]).unwrap()
    }

    #[test]
    fn formation_rules_assign_types() {
        let x = Expr::var(x_i());
        assert_eq!(type_of(&x), Type::Iota);
        let id = Expr::abs(x_i(), x.clone());
        assert_eq!(type_of(&id), Type::fun(Type::Iota, Type::Iota));
        let a = Expr::var(Var::new("A", Type::Omicron));
        let ev = Expr::eval(Expr::quote(a).unwrap(), Type::Omicron).unwrap();
        assert_eq!(type_of(&ev), Type::Omicron);
    }

    #[test]
    fn self_application_is_rejected() {
        let x = Expr::var(x_i());
        assert_eq!(
            Expr::app(x.clone(), x),
            Err(TypeError::NotAFunction(Type::Iota))
        );
        let f = Expr::var(Var::new("f", Type::fun(Type::Omicron, Type::Iota)));
        assert!(matches!(
            Expr::app(f, Expr::var(x_i())),
            Err(TypeError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn quote_and_eval_side_conditions() {
        let y = Expr::var(Var::new("y", Type::Epsilon));
        let ev = Expr::eval(y.clone(), Type::Iota).unwrap();
        assert_eq!(Expr::quote(ev), Err(TypeError::QuoteNotEvalFree));
        assert_eq!(
            Expr::eval(Expr::var(x_i()), Type::Iota),
            Err(TypeError::EvalArgNotEpsilon(Type::Iota))
        );
    }

    #[test]
    fn eval_freeness() {
        let x = Expr::var(x_i());
        assert!(is_eval_free(&x));
        assert!(is_eval_free(&Expr::quote(x.clone()).unwrap()));
        let xo = Expr::var(Var::new("x", Type::Omicron));
        let ev = Expr::eval(Expr::quote(xo).unwrap(), Type::Omicron).unwrap();
        assert!(!is_eval_free(&ev));
    }

    #[test]
    fn quotations_hide_variables() {
        let q = Expr::quote(x_plus_3()).unwrap();
        assert_eq!(free_status(&x_i(), &q), FreeStatus::NotFree);
        assert_eq!(free_status(&x_i(), &Expr::var(x_i())), FreeStatus::Free);
        assert!(q.free_vars().is_empty());
    }

    #[test]
    fn evaluation_of_quoted_term_exposes_its_variables() {
        let ev = Expr::eval(Expr::quote(x_plus_3()).unwrap(), Type::Iota).unwrap();
        assert_eq!(free_status(&x_i(), &ev), FreeStatus::Free);
        let y = Var::new("y", Type::Iota);
        assert_eq!(free_status(&y, &ev), FreeStatus::NotFree);
        // At the wrong type the evaluation is unspecified and constant.
        let wrong = Expr::eval(Expr::quote(x_plus_3()).unwrap(), Type::Omicron).unwrap();
        assert_eq!(free_status(&x_i(), &wrong), FreeStatus::NotFree);
    }

    #[test]
    fn evaluation_of_variable_is_unknown() {
        let ev = Expr::eval(Expr::var(Var::new("y", Type::Epsilon)), Type::Iota).unwrap();
        assert_eq!(free_status(&x_i(), &ev), FreeStatus::Unknown);
        // An ordinary free occurrence still wins.
        let pair = Expr::apps(plus(), [Expr::var(x_i()), ev]).unwrap();
        assert_eq!(free_status(&x_i(), &pair), FreeStatus::Free);
    }

    #[test]
    fn paths_address_children() {
        let e = Expr::abs(x_i(), x_plus_3());
        assert_eq!(e.at_path(&[0, 1]), Some(&three()));
        let r = e.replace_at(&[0, 1], Expr::var(x_i())).unwrap();
        assert_eq!(r.at_path(&[0, 1]), Some(&Expr::var(x_i())));
    }

    #[test]
    fn spans_do_not_affect_equality() {
        let x = Expr::var(x_i());
        let spanned = x.clone().with_span(SourceSpan::new(1, 1, 3));
        assert_eq!(x, spanned);
        assert!(spanned.span().is_some());
    }
}
