//! The type grammar: individuals, truth values, constructions and
//! function types.

use std::fmt;
use std::sync::Arc;

/// A type of the logic.
///
/// Function types nest explicitly; the surface syntax reads `a -> b -> c` as
/// `a -> (b -> c)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    /// `i`, the type of individuals.
    Iota,
    /// `o`, the type of truth values.
    Omicron,
    /// `eps`, the type of constructions.
    Epsilon,
    /// `a -> b`.
    Fun(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn fun(domain: Type, codomain: Type) -> Type {
        Type::Fun(Arc::new(domain), Arc::new(codomain))
    }

    /// Builds `a1 -> a2 -> ... -> result`.
    pub fn curried<I>(args: I, result: Type) -> Type
    where
        I: IntoIterator<Item = Type>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| Type::fun(arg, acc))
    }

    pub fn is_fun(&self) -> bool {
        matches!(self, Type::Fun(..))
    }

    pub fn as_fun(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Fun(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// `a -> a -> o`, the type of equality at `a`.
    pub fn relation(ty: Type) -> Type {
        Type::curried([ty.clone(), ty], Type::Omicron)
    }

    /// Number of arrows along the codomain spine.
    pub fn arity(&self) -> usize {
        match self {
            Type::Fun(_, b) => 1 + b.arity(),
            _ => 0,
        }
    }

    /// True when the type mentions `eps` anywhere.
    pub fn mentions_epsilon(&self) -> bool {
        match self {
            Type::Epsilon => true,
            Type::Iota | Type::Omicron => false,
            Type::Fun(a, b) => a.mentions_epsilon() || b.mentions_epsilon(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, nested_left: bool) -> fmt::Result {
        match self {
            Type::Iota => f.write_str("i"),
            Type::Omicron => f.write_str("o"),
            Type::Epsilon => f.write_str("eps"),
            Type::Fun(a, b) => {
                if nested_left {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, true)?;
                f.write_str("->")?;
                b.fmt_prec(f, false)?;
                if nested_left {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrows_print_right_associated() {
        let t = Type::curried([Type::Iota, Type::Omicron], Type::Epsilon);
        assert_eq!(t.to_string(), "i->o->eps");
        let h = Type::fun(Type::fun(Type::Iota, Type::Iota), Type::Omicron);
        assert_eq!(h.to_string(), "(i->i)->o");
    }

    #[test]
    fn equality_is_structural() {
        assert_eq!(
            Type::fun(Type::Iota, Type::Iota),
            Type::fun(Type::Iota, Type::Iota)
        );
        assert_ne!(
            Type::fun(Type::Iota, Type::Omicron),
            Type::fun(Type::Omicron, Type::Iota)
        );
        assert_eq!(Type::relation(Type::Omicron).arity(), 2);
    }
}
