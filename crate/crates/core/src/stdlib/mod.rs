//! The standard theory: logical constants, the defined connectives,
//! arithmetic, and the example constants for reasoning about syntax.

pub mod builtin;
pub mod peano;
pub mod poly;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::constants;
use crate::expr::{Const, Expr};
use crate::surface::{self, ParseContext, ParseError};
use crate::types::Type;

pub use builtin::{builtin_step, Builtin, BuiltinValue};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Signature {
    Fixed(Type),
    /// `=` at every type `a -> a -> o`.
    EqualityFamily,
    /// `is-expr[a]` at type `eps -> o`, for every `a`.
    IsExprFamily,
    /// Decimal numerals at type `i`.
    Numerals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstKind {
    Primitive,
    /// `opaque` definitions unfold only on request.
    Defined {
        body: Expr,
        opaque: bool,
    },
    /// Computes on construction literals.
    Builtin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantDef {
    pub name: String,
    pub signature: Signature,
    pub kind: ConstKind,
    pub doc: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("`{0}` is not a defined constant")]
    NotDefined(String),
    #[error("constant `{0}` is already declared")]
    DuplicateConstant(String),
    #[error("the theory lacks `{0}`")]
    MissingConstant(String),
    #[error("definition of `{name}` has type {found}, declared {declared}")]
    DefinitionType {
        name: String,
        declared: Type,
        found: Type,
    },
    #[error("definition of `{0}` has free variables")]
    NotClosed(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Outcome of resolving a constant name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstLookup {
    Found(Const),
    /// Declared, but at the given other type.
    WrongType(String),
    /// A family that needs an explicit type.
    NeedsType,
    NotConstant,
}

#[derive(Debug, Clone, Default)]
pub struct Theory {
    defs: BTreeMap<String, ConstantDef>,
    order: Vec<String>,
}

impl Theory {
    /// A theory with no constants at all.
    pub fn empty() -> Theory {
        Theory::default()
    }

    pub fn standard() -> Theory {
        Theory::standard_ref().clone()
    }

    pub fn standard_ref() -> &'static Theory {
        static STANDARD: OnceLock<Theory> = OnceLock::new();
        STANDARD.get_or_init(build_standard)
    }

    pub fn get(&self, name: &str) -> Option<&ConstantDef> {
        self.defs.get(name)
    }

    /// Constants in declaration order.
    pub fn constants(&self) -> impl Iterator<Item = &ConstantDef> {
        self.order.iter().map(|n| &self.defs[n])
    }

    pub fn lookup(&self, name: &str, ty: Option<&Type>) -> ConstLookup {
        if constants::is_numeral_name(name) {
            if !self.defs.contains_key("0") {
                return ConstLookup::NotConstant;
            }
            return match ty {
                None | Some(Type::Iota) => ConstLookup::Found(Const::new(name, Type::Iota)),
                Some(_) => ConstLookup::WrongType("i".into()),
            };
        }
        if constants::is_expr_index(name).is_some() {
            return match ty {
                Some(t) if *t != constants::eps_pred() => {
                    ConstLookup::WrongType(constants::eps_pred().to_string())
                }
                _ => ConstLookup::Found(Const::new(name, constants::eps_pred())),
            };
        }
        let Some(def) = self.defs.get(name) else {
            return ConstLookup::NotConstant;
        };
        match (&def.signature, ty) {
            (Signature::Fixed(t), None) => ConstLookup::Found(Const::new(name, t.clone())),
            (Signature::Fixed(t), Some(u)) if t == u => {
                ConstLookup::Found(Const::new(name, u.clone()))
            }
            (Signature::Fixed(t), Some(_)) => ConstLookup::WrongType(t.to_string()),
            (Signature::EqualityFamily, None) => ConstLookup::NeedsType,
            (Signature::EqualityFamily, Some(u)) => match u.as_fun() {
                Some((a, rest)) if *rest == Type::fun(a.clone(), Type::Omicron) => {
                    ConstLookup::Found(Const::new(name, u.clone()))
                }
                _ => ConstLookup::WrongType("a->a->o".into()),
            },
            (Signature::IsExprFamily, _) | (Signature::Numerals, _) => ConstLookup::NotConstant,
        }
    }

    fn insert(&mut self, def: ConstantDef) -> Result<(), TheoryError> {
        if self.defs.contains_key(&def.name) {
            return Err(TheoryError::DuplicateConstant(def.name));
        }
        self.order.push(def.name.clone());
        self.defs.insert(def.name.clone(), def);
        Ok(())
    }

    fn add(&mut self, name: &str, signature: Signature, kind: ConstKind, doc: &str) {
        self.insert(ConstantDef {
            name: name.to_string(),
            signature,
            kind,
            doc: doc.to_string(),
        })
        .expect("standard names are distinct");
    }

    pub fn declare(&mut self, name: &str, ty: Type, doc: &str) -> Result<(), TheoryError> {
        self.insert(ConstantDef {
            name: name.to_string(),
            signature: Signature::Fixed(ty),
            kind: ConstKind::Primitive,
            doc: doc.to_string(),
        })
    }

    /// Adds a definition whose body is already elaborated.
    pub fn define_expr(
        &mut self,
        name: &str,
        ty: Type,
        body: Expr,
        opaque: bool,
        doc: &str,
    ) -> Result<(), TheoryError> {
        check_body(name, &ty, &body)?;
        self.insert(ConstantDef {
            name: name.to_string(),
            signature: Signature::Fixed(ty),
            kind: ConstKind::Defined { body, opaque },
            doc: doc.to_string(),
        })
    }

    /// Parses `text` against the theory so far and adds it as a definition.
    pub fn define(
        &mut self,
        name: &str,
        ty: Type,
        text: &str,
        opaque: bool,
        doc: &str,
    ) -> Result<(), TheoryError> {
        let body = surface::parse_expr_in(text, &ParseContext::new(self))?;
        self.define_expr(name, ty, body, opaque, doc)
    }

    /// The definiens of a defined constant.
    pub fn unfold(&self, name: &str) -> Result<Expr, TheoryError> {
        match self.defs.get(name).map(|d| &d.kind) {
            Some(ConstKind::Defined { body, .. }) => Ok(body.clone()),
            _ => Err(TheoryError::NotDefined(name.to_string())),
        }
    }

    /// Definiens and opacity for an occurrence of a defined constant.
    pub fn definition(&self, c: &Const) -> Option<(&Expr, bool)> {
        match &self.defs.get(&*c.name)?.kind {
            ConstKind::Defined { body, opaque } if *body.ty() == c.ty => Some((body, *opaque)),
            _ => None,
        }
    }

    pub fn require(&self, name: &str) -> Result<(), TheoryError> {
        if self.defs.contains_key(name) {
            Ok(())
        } else {
            Err(TheoryError::MissingConstant(name.to_string()))
        }
    }

    pub fn parse(&self, text: &str) -> Result<Expr, ParseError> {
        surface::parse_expr_in(text, &ParseContext::new(self))
    }
}

fn check_body(name: &str, ty: &Type, body: &Expr) -> Result<(), TheoryError> {
    if body.ty() != ty {
        return Err(TheoryError::DefinitionType {
            name: name.to_string(),
            declared: ty.clone(),
            found: body.ty().clone(),
        });
    }
    if !body.free_vars().is_empty() {
        return Err(TheoryError::NotClosed(name.to_string()));
    }
    Ok(())
}

/// The unfolding of a defined constant.
pub fn unfold(name: &str, theory: &Theory) -> Result<Expr, TheoryError> {
    theory.unfold(name)
}

const TABLE3: [(&str, &str, &str); 6] = [
    (constants::TRUE, "=:(o->o->o) = =:(o->o->o)", "truth"),
    (constants::FALSE, "(\\x:o . T) = (\\x:o . x)", "falsity"),
    (
        constants::AND,
        "\\x:o . \\y:o . (\\g:(o->o->o) . g T T) = (\\g:(o->o->o) . g x y)",
        "conjunction",
    ),
    (
        constants::IMPLIES,
        "\\x:o . \\y:o . x = (x /\\ y)",
        "implication",
    ),
    (constants::NOT, "=:(o->o->o) F", "negation"),
    (constants::OR, "\\x:o . \\y:o . ~(~x /\\ ~y)", "disjunction"),
];

fn build_standard() -> Theory {
    use ConstKind::*;
    use Signature::*;
    let mut t = Theory::empty();
    let fixed = |c: Const| Fixed(c.ty);

    t.add(
        constants::EQ,
        EqualityFamily,
        Primitive,
        "equality at each type",
    );
    t.add(
        constants::IS_VAR,
        fixed(constants::is_var()),
        Builtin,
        "holds of quoted variables",
    );
    t.add(
        constants::IS_CON,
        fixed(constants::is_con()),
        Builtin,
        "holds of quoted constants",
    );
    t.add(
        constants::APP,
        fixed(constants::app()),
        Builtin,
        "application node",
    );
    t.add(
        constants::ABS,
        fixed(constants::abs()),
        Builtin,
        "abstraction node",
    );
    t.add(
        constants::QUO,
        fixed(constants::quo()),
        Builtin,
        "quotation node",
    );
    t.add(
        "is-expr",
        IsExprFamily,
        Builtin,
        "is-expr[a] holds of constructions representing expressions of type a",
    );

    // The connectives are declared first so each definiens can mention the
    // ones before it; the bodies replace the declarations in order.
    for (name, _, doc) in TABLE3 {
        let ty = constants::standard_fixed(name).expect("standard");
        t.add(name, Fixed(ty), Primitive, doc);
    }
    for (name, text, _) in TABLE3 {
        let ty = constants::standard_fixed(name).expect("standard");
        let body = t.parse(text).expect("standard definitions parse");
        check_body(name, &ty, &body).expect("standard definitions typecheck");
        t.defs.get_mut(name).expect("declared").kind = Defined { body, opaque: true };
    }

    t.add("0", Numerals, Primitive, "decimal numerals");
    t.add(
        constants::SUCC,
        fixed(constants::succ()),
        Primitive,
        "successor",
    );
    t.add(
        constants::PLUS,
        fixed(constants::plus()),
        Primitive,
        "addition",
    );
    t.add(
        constants::TIMES,
        fixed(constants::times()),
        Primitive,
        "multiplication",
    );
    t.add(constants::POW, fixed(constants::pow()), Primitive, "power");
    t.add(
        constants::DERIV,
        fixed(constants::deriv()),
        Primitive,
        "derivative of a function",
    );
    t.add(
        constants::UNSPECIFIED,
        fixed(constants::unspecified()),
        Primitive,
        "value of evaluations at type eps that have no natural value",
    );

    t.define(
        constants::MAKE_IMPLICATION,
        constants::eps2(),
        "\\x:eps . \\y:eps . app (app '[ =>:(o->o->o) ] x) y",
        false,
        "builds the implication of two formulas",
    )
    .expect("standard definition");
    t.define(
        constants::IS_APP,
        constants::eps_pred(),
        "\\x:eps . exists y:eps . exists z:eps . x = app y z",
        false,
        "holds of application nodes",
    )
    .expect("standard definition");
    t.add(
        constants::IS_POLY,
        fixed(constants::is_poly()),
        Builtin,
        "holds of polynomials",
    );
    t.add(
        constants::IS_PEANO,
        fixed(constants::is_peano()),
        Builtin,
        "holds of first-order arithmetic formulas",
    );
    t.add(
        constants::POLY_DIFF,
        fixed(constants::poly_diff()),
        Builtin,
        "symbolic derivative of a polynomial",
    );
    t.add(
        constants::IS_FREE_IN,
        fixed(constants::is_free_in()),
        Builtin,
        "holds when a quoted variable is free in the represented expression",
    );
    t
}

/// Closed formulas ready to instantiate.
#[derive(Debug, Clone)]
pub struct SchemaLibrary {
    /// Excluded middle over represented formulas.
    pub lem: Expr,
    /// The same, written with a quasiquotation.
    pub lem_quasi: Expr,
    /// Induction over formulas of first-order arithmetic.
    pub induction: Expr,
    /// Relates `poly-diff` on representations to `deriv` on functions.
    pub poly_diff_meaning: Expr,
}

pub const LEM: &str = "forall x:eps . is-expr[o] x => [[ x ]]_o \\/ ~[[ x ]]_o";
pub const LEM_QUASI: &str = "forall x:eps . is-expr[o] x => [[ '[ ,(x) \\/ ~,(x) ] ]]_o";
pub const INDUCTION: &str = "forall f:eps . (is-expr[i->o] f /\\ is-peano f) => \
    (([[ f ]]_(i->o) 0 /\\ (forall x:i . [[ f ]]_(i->o) x => [[ f ]]_(i->o) (S x))) \
    => forall x:i . [[ f ]]_(i->o) x)";
pub const POLY_DIFF_MEANING: &str = "forall u:eps . forall v:eps . \
    (is-var u /\\ is-expr[i] u /\\ is-poly v) => \
    deriv [[ abs u v ]]_(i->i) = [[ abs u (poly-diff v u) ]]_(i->i)";

pub fn schema_constants(theory: &Theory) -> Result<SchemaLibrary, TheoryError> {
    for name in [
        constants::TRUE,
        constants::IMPLIES,
        constants::OR,
        constants::NOT,
        constants::AND,
        "0",
        constants::SUCC,
        constants::PLUS,
        constants::TIMES,
        constants::DERIV,
        constants::IS_PEANO,
        constants::IS_POLY,
        constants::POLY_DIFF,
        constants::ABS,
        constants::IS_VAR,
    ] {
        theory.require(name)?;
    }
    Ok(SchemaLibrary {
        lem: theory.parse(LEM)?,
        lem_quasi: theory.parse(LEM_QUASI)?,
        induction: theory.parse(INDUCTION)?,
        poly_diff_meaning: theory.parse(POLY_DIFF_MEANING)?,
    })
}
