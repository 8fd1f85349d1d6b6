//! Recursive-descent parser producing an untyped syntax tree, and the
//! elaborator that turns it into typed expressions.

use std::collections::HashMap;

use crate::constants;
use crate::expr::{Const, Expr, TypeError, Var};
use crate::quasi::{self, QuasiExpr};
use crate::span::SourceSpan;
use crate::stdlib::{ConstLookup, Theory};
use crate::surface::lexer::{Tok, Token};
use crate::surface::{ParseError, ParseErrorKind};
use crate::types::Type;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Eq,
    And,
    Or,
    Implies,
    Not,
    Plus,
    Times,
    Pow,
}

impl Op {
    fn of(tok: &Tok) -> Option<Op> {
        Some(match tok {
            Tok::Eq => Op::Eq,
            Tok::And => Op::And,
            Tok::Or => Op::Or,
            Tok::Implies => Op::Implies,
            Tok::Not => Op::Not,
            Tok::Plus => Op::Plus,
            Tok::Star => Op::Times,
            Tok::Caret => Op::Pow,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Op::Eq => constants::EQ,
            Op::And => constants::AND,
            Op::Or => constants::OR,
            Op::Implies => constants::IMPLIES,
            Op::Not => constants::NOT,
            Op::Plus => constants::PLUS,
            Op::Times => constants::TIMES,
            Op::Pow => constants::POW,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Binder {
    Var(String, Type),
    Hole(Box<Syn>),
}

#[derive(Debug, Clone)]
pub enum SynKind {
    Name(String, Option<Type>),
    Sym(Op, Type),
    Num(String),
    IsExpr(Type),
    App(Box<Syn>, Box<Syn>),
    Infix(Op, Box<Syn>, Box<Syn>),
    Not(Box<Syn>),
    Lam(Binder, Box<Syn>),
    Forall(String, Type, Box<Syn>),
    Exists(String, Type, Box<Syn>),
    Quote(Box<Syn>),
    Eval(Box<Syn>, Type),
    Hole(Box<Syn>),
}

#[derive(Debug, Clone)]
pub struct Syn {
    pub kind: SynKind,
    pub span: SourceSpan,
}

impl Syn {
    /// Whether an antiquotation occurs at this quotation level, looking
    /// through nested quotations but not into holes.
    fn has_hole(&self) -> bool {
        match &self.kind {
            SynKind::Hole(_) | SynKind::Lam(Binder::Hole(_), _) => true,
            SynKind::Name(..) | SynKind::Sym(..) | SynKind::Num(_) | SynKind::IsExpr(_) => false,
            SynKind::App(a, b) | SynKind::Infix(_, a, b) => a.has_hole() || b.has_hole(),
            SynKind::Not(a)
            | SynKind::Lam(_, a)
            | SynKind::Forall(_, _, a)
            | SynKind::Exists(_, _, a)
            | SynKind::Quote(a)
            | SynKind::Eval(a, _) => a.has_hole(),
        }
    }
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

fn syntax(msg: impl Into<String>, span: &SourceSpan) -> ParseError {
    ParseError::new(ParseErrorKind::Syntax(msg.into()), span.clone())
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(syntax(
                format!(
                    "expected `{}`, found {}",
                    tok.symbol(),
                    self.peek().describe()
                ),
                &self.span(),
            ))
        }
    }

    pub fn expect_eof(&self) -> PResult<()> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(syntax(
                format!("unexpected {}", self.peek().describe()),
                &self.span(),
            ))
        }
    }

    fn ident(&mut self) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                let t = self.bump();
                Ok((s, t.span))
            }
            other => Err(syntax(
                format!("expected an identifier, found {}", other.describe()),
                &self.span(),
            )),
        }
    }

    pub fn parse_type(&mut self) -> PResult<Type> {
        let dom = self.type_atom()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let cod = self.parse_type()?;
            Ok(Type::fun(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn type_atom(&mut self) -> PResult<Type> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(s) => {
                let ty = match s.as_str() {
                    "i" => Type::Iota,
                    "o" => Type::Omicron,
                    "eps" => Type::Epsilon,
                    _ => return Err(syntax(format!("unknown type `{s}`"), &span)),
                };
                self.bump();
                Ok(ty)
            }
            Tok::LParen => {
                self.bump();
                let ty = self.parse_type()?;
                self.expect(Tok::RParen)?;
                Ok(ty)
            }
            other => Err(syntax(
                format!("expected a type, found {}", other.describe()),
                &span,
            )),
        }
    }

    fn mk(&self, kind: SynKind, start: &SourceSpan) -> Syn {
        Syn {
            kind,
            span: start.to(&self.prev_span()),
        }
    }

    fn at_binder(&self) -> bool {
        match self.peek() {
            Tok::Lambda => true,
            Tok::Ident(s) => s == "forall" || s == "exists",
            _ => false,
        }
    }

    fn at_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s),
            Tok::Num(_)
            | Tok::IsExpr(_)
            | Tok::LParen
            | Tok::QuoteOpen
            | Tok::EvalOpen
            | Tok::HoleOpen => true,
            t => Op::of(t).is_some() && *self.peek_at(1) == Tok::Colon,
        }
    }

    pub fn parse_expr(&mut self) -> PResult<Syn> {
        if self.at_binder() {
            self.binder()
        } else {
            self.implication()
        }
    }

    fn operand(&mut self, next: fn(&mut Parser) -> PResult<Syn>) -> PResult<Syn> {
        if self.at_binder() {
            self.binder()
        } else {
            next(self)
        }
    }

    fn binder(&mut self) -> PResult<Syn> {
        let start = self.span();
        let head = self.bump();
        match head.tok {
            Tok::Lambda => {
                if *self.peek() == Tok::HoleOpen {
                    let hstart = self.span();
                    self.bump();
                    let inner = self.parse_expr()?;
                    self.expect(Tok::RParen)?;
                    let hole = self.mk(SynKind::Hole(Box::new(inner)), &hstart);
                    self.expect(Tok::Dot)?;
                    let body = self.parse_expr()?;
                    return Ok(self.mk(
                        SynKind::Lam(Binder::Hole(Box::new(hole)), Box::new(body)),
                        &start,
                    ));
                }
                let (name, ty) = self.typed_binder()?;
                let body = self.parse_expr()?;
                Ok(self.mk(SynKind::Lam(Binder::Var(name, ty), Box::new(body)), &start))
            }
            Tok::Ident(kw) => {
                let (name, ty) = self.typed_binder()?;
                let body = Box::new(self.parse_expr()?);
                let kind = if kw == "forall" {
                    SynKind::Forall(name, ty, body)
                } else {
                    SynKind::Exists(name, ty, body)
                };
                Ok(self.mk(kind, &start))
            }
            _ => unreachable!("checked by at_binder"),
        }
    }

    fn typed_binder(&mut self) -> PResult<(String, Type)> {
        let (name, _) = self.ident()?;
        if *self.peek() != Tok::Colon {
            return Err(syntax(
                format!("binder `{name}` needs a type ascription"),
                &self.span(),
            ));
        }
        self.bump();
        let ty = self.parse_type()?;
        self.expect(Tok::Dot)?;
        Ok((name, ty))
    }

    fn infix(&mut self, op: Op, lhs: Syn, rhs: Syn) -> Syn {
        let span = lhs.span.to(&rhs.span);
        Syn {
            kind: SynKind::Infix(op, Box::new(lhs), Box::new(rhs)),
            span,
        }
    }

    fn at_infix(&self, tok: Tok) -> bool {
        *self.peek() == tok && *self.peek_at(1) != Tok::Colon
    }

    fn implication(&mut self) -> PResult<Syn> {
        let lhs = self.disjunction()?;
        if self.at_infix(Tok::Implies) {
            self.bump();
            let rhs = self.operand(Parser::implication)?;
            return Ok(self.infix(Op::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Syn> {
        let mut lhs = self.conjunction()?;
        while self.at_infix(Tok::Or) {
            self.bump();
            let rhs = self.operand(Parser::conjunction)?;
            lhs = self.infix(Op::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Syn> {
        let mut lhs = self.equation()?;
        while self.at_infix(Tok::And) {
            self.bump();
            let rhs = self.operand(Parser::equation)?;
            lhs = self.infix(Op::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn equation(&mut self) -> PResult<Syn> {
        let lhs = self.negation()?;
        if self.at_infix(Tok::Eq) {
            self.bump();
            let rhs = self.operand(Parser::negation)?;
            if self.at_infix(Tok::Eq) {
                return Err(syntax(
                    "`=` does not associate; add parentheses",
                    &self.span(),
                ));
            }
            return Ok(self.infix(Op::Eq, lhs, rhs));
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> PResult<Syn> {
        if self.at_infix(Tok::Not) {
            let start = self.span();
            self.bump();
            let body = self.operand(Parser::negation)?;
            return Ok(self.mk(SynKind::Not(Box::new(body)), &start));
        }
        self.sum()
    }

    fn sum(&mut self) -> PResult<Syn> {
        let mut lhs = self.product()?;
        while self.at_infix(Tok::Plus) {
            self.bump();
            let rhs = self.operand(Parser::product)?;
            lhs = self.infix(Op::Plus, lhs, rhs);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Syn> {
        let mut lhs = self.power()?;
        while self.at_infix(Tok::Star) {
            self.bump();
            let rhs = self.operand(Parser::power)?;
            lhs = self.infix(Op::Times, lhs, rhs);
        }
        Ok(lhs)
    }

    fn power(&mut self) -> PResult<Syn> {
        let lhs = self.application()?;
        if self.at_infix(Tok::Caret) {
            self.bump();
            let rhs = self.operand(Parser::power)?;
            return Ok(self.infix(Op::Pow, lhs, rhs));
        }
        Ok(lhs)
    }

    fn application(&mut self) -> PResult<Syn> {
        let mut f = self.atom()?;
        loop {
            // An unparenthesized binder extends to the right and ends the
            // application.
            let (arg, trailing_binder) = if self.at_atom() {
                (self.atom()?, false)
            } else if self.at_binder() {
                (self.binder()?, true)
            } else {
                break;
            };
            let span = f.span.to(&arg.span);
            f = Syn {
                kind: SynKind::App(Box::new(f), Box::new(arg)),
                span,
            };
            if trailing_binder {
                break;
            }
        }
        Ok(f)
    }

    fn atom(&mut self) -> PResult<Syn> {
        let start = self.span();
        let tok = self.peek().clone();
        match tok {
            Tok::Ident(name) if !is_keyword(&name) => {
                self.bump();
                let ty = if *self.peek() == Tok::Colon {
                    self.bump();
                    Some(self.parse_type()?)
                } else {
                    None
                };
                Ok(self.mk(SynKind::Name(name, ty), &start))
            }
            Tok::Num(n) => {
                self.bump();
                if *self.peek() == Tok::Colon {
                    self.bump();
                    let ty = self.parse_type()?;
                    if ty != Type::Iota {
                        return Err(ParseError::new(
                            ParseErrorKind::ConstantTypeMismatch {
                                name: n,
                                declared: "i".into(),
                                found: ty,
                            },
                            start.to(&self.prev_span()),
                        ));
                    }
                }
                Ok(self.mk(SynKind::Num(n), &start))
            }
            Tok::IsExpr(inner) => {
                self.bump();
                let ty = crate::surface::parse_type(&inner)
                    .map_err(|e| ParseError::new(e.kind, start.clone()))?;
                if *self.peek() == Tok::Colon {
                    self.bump();
                    let asc = self.parse_type()?;
                    if asc != constants::eps_pred() {
                        return Err(ParseError::new(
                            ParseErrorKind::ConstantTypeMismatch {
                                name: constants::is_expr_name(&ty),
                                declared: constants::eps_pred().to_string(),
                                found: asc,
                            },
                            start.to(&self.prev_span()),
                        ));
                    }
                }
                Ok(self.mk(SynKind::IsExpr(ty), &start))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen)?;
                Ok(Syn {
                    kind: inner.kind,
                    span: start.to(&self.prev_span()),
                })
            }
            Tok::QuoteOpen => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(Tok::QuoteClose)?;
                Ok(self.mk(SynKind::Quote(Box::new(inner)), &start))
            }
            Tok::EvalOpen => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(Tok::EvalClose)?;
                let ty = self.parse_type()?;
                Ok(self.mk(SynKind::Eval(Box::new(inner), ty), &start))
            }
            Tok::HoleOpen => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen)?;
                Ok(self.mk(SynKind::Hole(Box::new(inner)), &start))
            }
            t if Op::of(&t).is_some() && *self.peek_at(1) == Tok::Colon => {
                let op = Op::of(&t).expect("checked");
                self.bump();
                self.bump();
                let ty = self.parse_type()?;
                Ok(self.mk(SynKind::Sym(op, ty), &start))
            }
            other => Err(syntax(
                format!("expected an expression, found {}", other.describe()),
                &start,
            )),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "forall" | "exists")
}

/// Name resolution and typing.
pub struct Elaborator<'a> {
    pub theory: &'a Theory,
    pub macros: Option<&'a HashMap<String, Expr>>,
    scope: Vec<Var>,
    quote_base: Option<usize>,
}

enum Resolved {
    Var(Var),
    Const(Const),
    Macro(Expr),
}

fn type_err(e: TypeError, span: &SourceSpan) -> ParseError {
    ParseError::new(ParseErrorKind::Type(e), span.clone())
}

impl<'a> Elaborator<'a> {
    pub fn new(theory: &'a Theory, macros: Option<&'a HashMap<String, Expr>>) -> Self {
        Elaborator {
            theory,
            macros,
            scope: Vec::new(),
            quote_base: None,
        }
    }

    fn resolve(&self, name: &str, ty: Option<&Type>, span: &SourceSpan) -> PResult<Resolved> {
        match ty {
            None => {
                if let Some(v) = self.scope.iter().rev().find(|v| &*v.name == name) {
                    return Ok(Resolved::Var(v.clone()));
                }
                if let Some(e) = self.macros.and_then(|m| m.get(name)) {
                    return Ok(Resolved::Macro(e.clone()));
                }
                match self.theory.lookup(name, None) {
                    ConstLookup::Found(c) => Ok(Resolved::Const(c)),
                    ConstLookup::NeedsType => Err(ParseError::new(
                        ParseErrorKind::Syntax(format!(
                            "constant `{name}` needs a type ascription"
                        )),
                        span.clone(),
                    )),
                    _ => Err(ParseError::new(
                        ParseErrorKind::UnknownName(name.to_string()),
                        span.clone(),
                    )),
                }
            }
            Some(ty) => {
                if let Some(v) = self
                    .scope
                    .iter()
                    .rev()
                    .find(|v| &*v.name == name && v.ty == *ty)
                {
                    return Ok(Resolved::Var(v.clone()));
                }
                match self.theory.lookup(name, Some(ty)) {
                    ConstLookup::Found(c) => Ok(Resolved::Const(c)),
                    ConstLookup::WrongType(declared) => Err(ParseError::new(
                        ParseErrorKind::ConstantTypeMismatch {
                            name: name.to_string(),
                            declared,
                            found: ty.clone(),
                        },
                        span.clone(),
                    )),
                    ConstLookup::NeedsType | ConstLookup::NotConstant => {
                        Ok(Resolved::Var(Var::new(name, ty.clone())))
                    }
                }
            }
        }
    }

    fn symbol(&self, op: Op, ty: &Type, span: &SourceSpan) -> PResult<Const> {
        match self.theory.lookup(op.name(), Some(ty)) {
            ConstLookup::Found(c) => Ok(c),
            ConstLookup::WrongType(declared) => Err(ParseError::new(
                ParseErrorKind::ConstantTypeMismatch {
                    name: op.name().to_string(),
                    declared,
                    found: ty.clone(),
                },
                span.clone(),
            )),
            _ => Err(ParseError::new(
                ParseErrorKind::UnknownName(op.name().to_string()),
                span.clone(),
            )),
        }
    }

    fn fixed_op(&self, op: Op, span: &SourceSpan) -> PResult<Const> {
        let c = match op {
            Op::And => constants::and(),
            Op::Or => constants::or(),
            Op::Implies => constants::implies(),
            Op::Not => constants::not(),
            Op::Plus => constants::plus(),
            Op::Times => constants::times(),
            Op::Pow => constants::pow(),
            Op::Eq => unreachable!("equality is typed by its operands"),
        };
        self.symbol(op, &c.ty.clone(), span)
    }

    fn numeral(&self, n: &str, span: &SourceSpan) -> PResult<Const> {
        match self.theory.lookup(n, Some(&Type::Iota)) {
            ConstLookup::Found(c) => Ok(c),
            _ => Err(ParseError::new(
                ParseErrorKind::UnknownName(n.to_string()),
                span.clone(),
            )),
        }
    }

    fn spanned(e: Expr, span: &SourceSpan) -> Expr {
        e.with_span(span.clone())
    }

    pub fn expr(&mut self, s: &Syn) -> PResult<Expr> {
        let sp = &s.span;
        let e = match &s.kind {
            SynKind::Name(n, ty) => match self.resolve(n, ty.as_ref(), sp)? {
                Resolved::Var(v) => Expr::var(v),
                Resolved::Const(c) => Expr::constant(c),
                Resolved::Macro(e) => e,
            },
            SynKind::Sym(op, ty) => Expr::constant(self.symbol(*op, ty, sp)?),
            SynKind::Num(n) => Expr::constant(self.numeral(n, sp)?),
            SynKind::IsExpr(ty) => Expr::constant(constants::is_expr(ty)),
            SynKind::App(f, a) => {
                let f = self.expr(f)?;
                let a = self.expr(a)?;
                Expr::app(f, a).map_err(|e| type_err(e, sp))?
            }
            SynKind::Infix(Op::Eq, a, b) => {
                let a = self.expr(a)?;
                let b = self.expr(b)?;
                let eq = self.symbol(Op::Eq, &Type::relation(a.ty().clone()), sp)?;
                Expr::apps(Expr::constant(eq), [a, b]).map_err(|e| type_err(e, sp))?
            }
            SynKind::Infix(op, a, b) => {
                let c = self.fixed_op(*op, sp)?;
                let a = self.expr(a)?;
                let b = self.expr(b)?;
                Expr::apps(Expr::constant(c), [a, b]).map_err(|e| type_err(e, sp))?
            }
            SynKind::Not(a) => {
                let c = self.fixed_op(Op::Not, sp)?;
                let a = self.expr(a)?;
                Expr::app(Expr::constant(c), a).map_err(|e| type_err(e, sp))?
            }
            SynKind::Lam(Binder::Var(name, ty), body) => {
                let v = Var::new(name.as_str(), ty.clone());
                self.scope.push(v.clone());
                let body = self.expr(body);
                self.scope.pop();
                Expr::abs(v, body?)
            }
            SynKind::Lam(Binder::Hole(h), _) => {
                return Err(ParseError::new(
                    ParseErrorKind::HoleOutsideQuote,
                    h.span.clone(),
                ))
            }
            SynKind::Forall(name, ty, body) | SynKind::Exists(name, ty, body) => {
                let exists = matches!(s.kind, SynKind::Exists(..));
                let v = Var::new(name.as_str(), ty.clone());
                self.scope.push(v.clone());
                let body = self.expr(body);
                self.scope.pop();
                let body = body?;
                if *body.ty() != Type::Omicron {
                    return Err(type_err(
                        TypeError::TypeMismatch {
                            fun: Type::fun(Type::Omicron, Type::Omicron),
                            arg: body.ty().clone(),
                        },
                        sp,
                    ));
                }
                if exists {
                    let not = Expr::constant(self.fixed_op(Op::Not, sp)?);
                    let neg = Expr::app(not.clone(), body).expect("typed");
                    let all = self.forall(v, neg, sp)?;
                    Expr::app(not, all).expect("typed")
                } else {
                    self.forall(v, body, sp)?
                }
            }
            SynKind::Quote(body) => {
                let outer = self.quote_base;
                if outer.is_none() {
                    self.quote_base = Some(self.scope.len());
                }
                let out = if body.has_hole() {
                    self.quasi(body).and_then(|(q, _)| {
                        quasi::expand(&q)
                            .map_err(|e| ParseError::new(ParseErrorKind::Quasi(e), sp.clone()))
                    })
                } else {
                    self.expr(body)
                        .and_then(|b| Expr::quote(b).map_err(|e| type_err(e, sp)))
                };
                self.quote_base = outer;
                out?
            }
            SynKind::Eval(arg, ty) => {
                let arg = self.expr(arg)?;
                Expr::eval(arg, ty.clone()).map_err(|e| type_err(e, sp))?
            }
            SynKind::Hole(_) => {
                return Err(ParseError::new(
                    ParseErrorKind::HoleOutsideQuote,
                    sp.clone(),
                ))
            }
        };
        Ok(Self::spanned(e, sp))
    }

    fn forall(&self, v: Var, body: Expr, sp: &SourceSpan) -> PResult<Expr> {
        let t = self.truth(sp)?;
        let lhs = Expr::abs(v.clone(), t);
        let rhs = Expr::abs(v, body);
        let eq = self.symbol(Op::Eq, &Type::relation(lhs.ty().clone()), sp)?;
        Expr::apps(Expr::constant(eq), [lhs, rhs]).map_err(|e| type_err(e, sp))
    }

    fn truth(&self, sp: &SourceSpan) -> PResult<Expr> {
        match self.theory.lookup(constants::TRUE, Some(&Type::Omicron)) {
            ConstLookup::Found(c) => Ok(Expr::constant(c)),
            _ => Err(ParseError::new(
                ParseErrorKind::UnknownName(constants::TRUE.into()),
                sp.clone(),
            )),
        }
    }

    /// Elaborates the body of a quotation containing holes. Types are
    /// tracked where known; a hole's type is the unknown type of the
    /// expression it will denote.
    fn quasi(&mut self, s: &Syn) -> PResult<(QuasiExpr, Option<Type>)> {
        let sp = &s.span;
        Ok(match &s.kind {
            SynKind::Name(n, ty) => match self.resolve(n, ty.as_ref(), sp)? {
                Resolved::Var(v) => {
                    let t = v.ty.clone();
                    (QuasiExpr::QVar(v), Some(t))
                }
                Resolved::Const(c) => {
                    let t = c.ty.clone();
                    (QuasiExpr::QConst(c), Some(t))
                }
                Resolved::Macro(e) => {
                    let t = e.ty().clone();
                    let q = QuasiExpr::embed(&e)
                        .map_err(|_| type_err(TypeError::QuoteNotEvalFree, sp))?;
                    (q, Some(t))
                }
            },
            SynKind::Sym(op, ty) => {
                let c = self.symbol(*op, ty, sp)?;
                (QuasiExpr::QConst(c), Some(ty.clone()))
            }
            SynKind::Num(n) => (QuasiExpr::QConst(self.numeral(n, sp)?), Some(Type::Iota)),
            SynKind::IsExpr(ty) => (
                QuasiExpr::QConst(constants::is_expr(ty)),
                Some(constants::eps_pred()),
            ),
            SynKind::App(f, a) => {
                let (qf, tf) = self.quasi(f)?;
                let (qa, ta) = self.quasi(a)?;
                (QuasiExpr::app(qf, qa), apply_type(tf, ta))
            }
            SynKind::Infix(Op::Eq, a, b) => {
                let (qa, ta) = self.quasi(a)?;
                let (qb, tb) = self.quasi(b)?;
                let Some(t) = ta.or(tb) else {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax(
                            "cannot tell the type of this equation; write the equality as `=:(type)`"
                                .into(),
                        ),
                        sp.clone(),
                    ));
                };
                let eq = self.symbol(Op::Eq, &Type::relation(t), sp)?;
                (
                    QuasiExpr::app(QuasiExpr::app(QuasiExpr::QConst(eq), qa), qb),
                    Some(Type::Omicron),
                )
            }
            SynKind::Infix(op, a, b) => {
                let c = self.fixed_op(*op, sp)?;
                let (qa, ta) = self.quasi(a)?;
                let (qb, tb) = self.quasi(b)?;
                let t = apply_type(apply_type(Some(c.ty.clone()), ta), tb);
                (
                    QuasiExpr::app(QuasiExpr::app(QuasiExpr::QConst(c), qa), qb),
                    t,
                )
            }
            SynKind::Not(a) => {
                let c = self.fixed_op(Op::Not, sp)?;
                let (qa, ta) = self.quasi(a)?;
                let t = apply_type(Some(c.ty.clone()), ta);
                (QuasiExpr::app(QuasiExpr::QConst(c), qa), t)
            }
            SynKind::Lam(Binder::Var(name, ty), body) => {
                let v = Var::new(name.as_str(), ty.clone());
                self.scope.push(v.clone());
                let out = self.quasi(body);
                self.scope.pop();
                let (qb, tb) = out?;
                let t = tb.map(|b| Type::fun(ty.clone(), b));
                (QuasiExpr::QAbsVar(v, Box::new(qb)), t)
            }
            SynKind::Lam(Binder::Hole(h), body) => {
                let SynKind::Hole(inner) = &h.kind else {
                    unreachable!("binder holes are holes")
                };
                let he = self.hole_expr(inner, &h.span)?;
                let (qb, _) = self.quasi(body)?;
                (QuasiExpr::QAbsHole(he, Box::new(qb)), None)
            }
            SynKind::Forall(name, ty, body) | SynKind::Exists(name, ty, body) => {
                let exists = matches!(s.kind, SynKind::Exists(..));
                let v = Var::new(name.as_str(), ty.clone());
                self.scope.push(v.clone());
                let out = self.quasi(body);
                self.scope.pop();
                let (mut qb, _) = out?;
                let not = QuasiExpr::QConst(self.fixed_op(Op::Not, sp)?);
                if exists {
                    qb = QuasiExpr::app(not.clone(), qb);
                }
                let t = match self.truth(sp)?.kind() {
                    crate::expr::ExprKind::Const(c) => QuasiExpr::QConst(c.clone()),
                    _ => unreachable!("constant"),
                };
                let pred = Type::fun(ty.clone(), Type::Omicron);
                let eq = self.symbol(Op::Eq, &Type::relation(pred), sp)?;
                let lhs = QuasiExpr::QAbsVar(v.clone(), Box::new(t));
                let rhs = QuasiExpr::QAbsVar(v, Box::new(qb));
                let mut all = QuasiExpr::app(QuasiExpr::app(QuasiExpr::QConst(eq), lhs), rhs);
                if exists {
                    all = QuasiExpr::app(not, all);
                }
                (all, Some(Type::Omicron))
            }
            SynKind::Quote(body) => {
                let (qb, _) = self.quasi(body)?;
                (QuasiExpr::QQuote(Box::new(qb)), Some(Type::Epsilon))
            }
            SynKind::Eval(..) => return Err(type_err(TypeError::QuoteNotEvalFree, sp)),
            SynKind::Hole(inner) => (QuasiExpr::AntiQuote(self.hole_expr(inner, sp)?), None),
        })
    }

    /// Elaborates the contents of a hole in the scope outside the quotation.
    fn hole_expr(&mut self, inner: &Syn, sp: &SourceSpan) -> PResult<Expr> {
        let base = self.quote_base.expect("holes are elaborated inside quotes");
        let saved = self.scope.split_off(base);
        self.quote_base = None;
        let out = self.expr(inner);
        self.quote_base = Some(base);
        self.scope.extend(saved);
        let e = out?;
        if *e.ty() != Type::Epsilon {
            return Err(ParseError::new(
                ParseErrorKind::Quasi(quasi::QuasiError::HoleNotEpsilon(e.ty().clone())),
                sp.clone(),
            ));
        }
        Ok(e)
    }
}

fn apply_type(f: Option<Type>, a: Option<Type>) -> Option<Type> {
    match f? {
        Type::Fun(dom, cod) => match a {
            Some(a) if *dom != a => None,
            _ => Some((*cod).clone()),
        },
        _ => None,
    }
}
