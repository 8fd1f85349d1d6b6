//! A kernel for Church's type theory with quotation and evaluation.
//!
//! Expressions are typed trees over `i`, `o` and the type `eps` of
//! constructions. A quotation `'[ A ]` denotes the syntax tree of `A`, and an
//! evaluation `[[ C ]]_t` denotes the value of the expression the
//! construction `C` represents. The crate provides the expression kernel,
//! the encoding of syntax as constructions, a finite-model valuator, a
//! rewriter with the quotation laws, a derivation checker, and a parser and
//! printer for the concrete syntax.

pub mod constants;
pub mod construction;
pub mod demos;
pub mod expr;
pub mod quasi;
pub mod rewrite;
pub mod semantics;
pub mod span;
pub mod stdlib;
pub mod surface;
pub mod trace;
pub mod types;

pub use construction::{classify, decode, encode, Construction, Properness};
pub use expr::{free_status, Const, Expr, ExprKind, FreeStatus, TypeError, Var};
pub use stdlib::Theory;
pub use surface::{parse_expr, parse_type, print_expr};
pub use types::Type;
