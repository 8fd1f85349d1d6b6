//! Concrete syntax.
//!
//! Types are `i`, `o`, `eps` and `a -> b` (right associative). Atoms carry
//! their type as `name:type`; a bare name refers to the nearest enclosing
//! binder or to a constant with a single declared type. Quotation is
//! `'[ e ]`, evaluation `[[ e ]]_t`, and `,( e )` is a hole inside a
//! quotation. Binding forms are `\x:t . e`, `forall x:t . e` and
//! `exists x:t . e`, each extending as far right as possible.
//!
//! Infix operators from loosest to tightest: `=>` (right), `\/`, `/\`, `=`
//! (non-associative), prefix `~`, `+`, `*`, `^` (right), then application.
//! An operator symbol followed by `:type` is the constant itself, as in
//! `=:(o->o->o)`.

mod lexer;
mod parser;
mod printer;
pub mod theory_file;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::expr::{Expr, TypeError};
use crate::quasi::QuasiError;
use crate::span::SourceSpan;
use crate::stdlib::Theory;
use crate::types::Type;

pub use lexer::is_identifier;
pub use printer::{print_expr, print_type_ascription};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("antiquotation outside a quotation")]
    HoleOutsideQuote,
    #[error("unknown name `{0}`; add a type ascription to use it as a variable")]
    UnknownName(String),
    #[error("`{name}` is a constant of type {declared}, not {found}")]
    ConstantTypeMismatch {
        name: String,
        declared: String,
        found: Type,
    },
    #[error("{0}")]
    Type(TypeError),
    #[error("{0}")]
    Quasi(QuasiError),
}

/// A parse or elaboration failure at a source location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, span: SourceSpan) -> Self {
        ParseError { kind, span }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.kind)
    }
}

impl std::error::Error for ParseError {}

/// What names resolve against while parsing.
#[derive(Clone, Copy)]
pub struct ParseContext<'a> {
    pub theory: &'a Theory,
    pub macros: Option<&'a HashMap<String, Expr>>,
    pub file: Option<&'a str>,
}

impl<'a> ParseContext<'a> {
    pub fn new(theory: &'a Theory) -> Self {
        ParseContext {
            theory,
            macros: None,
            file: None,
        }
    }

    pub fn with_macros(mut self, macros: &'a HashMap<String, Expr>) -> Self {
        self.macros = Some(macros);
        self
    }

    pub fn with_file(mut self, file: &'a str) -> Self {
        self.file = Some(file);
        self
    }

    fn file(&self) -> Option<Arc<str>> {
        self.file.map(Arc::from)
    }
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let toks = lexer::tokenize(text, None)?;
    let mut p = parser::Parser::new(toks);
    let ty = p.parse_type()?;
    p.expect_eof()?;
    Ok(ty)
}

/// Parses an expression against the standard theory.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    parse_expr_in(text, &ParseContext::new(Theory::standard_ref()))
}

pub fn parse_expr_in(text: &str, ctx: &ParseContext) -> Result<Expr, ParseError> {
    let toks = lexer::tokenize(text, ctx.file())?;
    let mut p = parser::Parser::new(toks);
    let syn = p.parse_expr()?;
    p.expect_eof()?;
    parser::Elaborator::new(ctx.theory, ctx.macros).expr(&syn)
}

/// Parses a source line starting at the given 1-based line and column, so
/// spans point into the enclosing file.
pub(crate) fn parse_expr_at(
    text: &str,
    ctx: &ParseContext,
    line: usize,
    column: usize,
) -> Result<Expr, ParseError> {
    let shift = |mut e: ParseError| {
        if e.span.line == 1 {
            e.span.column += column - 1;
        }
        e.span.line += line - 1;
        e
    };
    parse_expr_in(text, ctx).map_err(shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;
    use crate::construction::{as_expr, encode};
    use crate::expr::{ExprKind, Var};

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn quoted_identity() {
        let x = Var::new("x", Type::Iota);
        let expected = Expr::quote(Expr::abs(x.clone(), Expr::var(x))).unwrap();
        assert_eq!(p("'[ \\x:i . x:i ]"), expected);
        assert_eq!(p("'[ \\x:i . x ]"), expected);
    }

    #[test]
    fn evaluation_of_quotation() {
        let a = Expr::var(Var::new("A", Type::Omicron));
        let expected = Expr::eval(Expr::quote(a).unwrap(), Type::Omicron).unwrap();
        assert_eq!(p("[[ '[ A:o ] ]]_o"), expected);
    }

    #[test]
    fn self_application_reports_span() {
        let err = parse_expr("'[ (x:i x:i) ]").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Type(_)));
        assert_eq!((err.span.line, err.span.column), (1, 4));
    }

    #[test]
    fn holes_only_inside_quotes() {
        let err = parse_expr(",(y:eps)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::HoleOutsideQuote);
        let err = parse_expr("'[ ,(x:i) ]").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Quasi(_)));
    }

    #[test]
    fn quasiquotation_expands() {
        let e = p("'[ ~(A:o /\\ ,(B:eps)) ]");
        let b = Expr::var(Var::new("B", Type::Epsilon));
        let qa = Expr::quote(Expr::var(Var::new("A", Type::Omicron))).unwrap();
        let q = |c| Expr::quote(Expr::constant(c)).unwrap();
        let app = |f, a| constants::binary(constants::app(), f, a);
        let expected = app(q(constants::not()), app(app(q(constants::and()), qa), b));
        assert_eq!(e, expected);
    }

    #[test]
    fn holes_see_outer_binders_only() {
        let e = p("\\y:eps . '[ \\y:i . ,(y) ]");
        let ExprKind::Abs(outer, body) = e.kind() else {
            panic!()
        };
        let (_, args) = body.strip_apps();
        assert_eq!(args[1].as_var(), Some(outer));
    }

    #[test]
    fn sugar_elaborates_to_table_forms() {
        assert_eq!(
            p("A:o /\\ B:o"),
            constants::binary(
                constants::and(),
                Expr::var(Var::new("A", Type::Omicron)),
                Expr::var(Var::new("B", Type::Omicron))
            )
        );
        let forall = p("forall x:i . x:i = x:i");
        let x = Var::new("x", Type::Iota);
        let body = constants::equals(Expr::var(x.clone()), Expr::var(x.clone()));
        let expected = constants::equals(
            Expr::abs(x.clone(), constants::truth_expr(true)),
            Expr::abs(x, body),
        );
        assert_eq!(forall, expected);
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "\\x:i . x:i",
            "\\x:i . 2 * x:i",
            "deriv \\x:i . x:i ^ 2",
            "[[ '[ \\x:i . x:i ^ 2 ] ]]_(i->i)",
            "forall x:eps . is-expr[o] x:eps => [[ x:eps ]]_o \\/ ~[[ x:eps ]]_o",
            "exists y:i . y:i = 0",
            "~(y:i = 0)",
            "~a:o = b:o",
            "=:(o->o->o) = =:(o->o->o)",
            "f:(i->i) (g:(i->i) x:i) + 1 * 2",
            "(a:o => b:o) => c:o",
            "a:o /\\ (\\x:i . x:i) = \\x:i . x:i",
            "/\\:(o->o->o) a:o",
            "'[ '[ x:i ] ]",
            "deriv (\\z:i . z:i) 0",
        ] {
            let e = p(s);
            assert_eq!(print_expr(&e), s, "printing {s}");
            assert_eq!(p(&print_expr(&e)), e);
        }
    }

    #[test]
    fn literals_print_with_named_constructors() {
        let x = Var::new("x", Type::Iota);
        let c = encode(&Expr::abs(x.clone(), Expr::var(x))).unwrap();
        assert_eq!(print_expr(&as_expr(&c)), "abs '[ x:i ] '[ x:i ]");
    }

    #[test]
    fn constants_at_wrong_type_are_rejected() {
        let err = parse_expr("S:o").unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::ConstantTypeMismatch { .. }
        ));
        assert!(matches!(
            parse_expr("nope").unwrap_err().kind,
            ParseErrorKind::UnknownName(_)
        ));
    }

    #[test]
    fn types_parse_right_associated() {
        assert_eq!(
            parse_type("i -> o -> eps").unwrap(),
            Type::curried([Type::Iota, Type::Omicron], Type::Epsilon)
        );
        assert_eq!(parse_type("(i->i)->o").unwrap().to_string(), "(i->i)->o");
    }
}
