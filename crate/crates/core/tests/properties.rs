mod common;

use std::collections::BTreeSet;

use cttqe::construction::{as_expr, classify, decode, encode, from_expr, Properness};
use cttqe::rewrite::{fresh_name, substitute, Rewriter};
use cttqe::semantics::{valuate_with, EvalOptions};
use cttqe::surface::{parse_expr_in, print_expr, ParseContext};
use cttqe::{Expr, Type, Var};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::{Gen, Values};

/// A generated expression, reproducible from its seed.
fn expr(seed: u64, nested: bool) -> Expr {
    let mut rng = common::rng(seed);
    let gen = if nested {
        Gen::default().nested()
    } else {
        Gen::default()
    };
    let depth = rng.gen_range(1..=7);
    gen.any(&mut rng, depth)
}

proptest! {
    #[test]
    fn printing_then_parsing_is_the_identity(seed in any::<u64>()) {
        let theory = common::theory();
        let e = expr(seed, true);
        let text = print_expr(&e);
        let back = parse_expr_in(&text, &ParseContext::new(&theory))
            .map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn encoding_is_inverted_by_decoding(seed in any::<u64>()) {
        let e = expr(seed, true);
        let c = encode(&e).unwrap();
        prop_assert_eq!(decode(&c).unwrap(), e.clone());
        prop_assert_eq!(from_expr(&as_expr(&c)).unwrap(), c.clone());
        match classify(&c) {
            Properness::Proper { ty, .. } => prop_assert_eq!(&ty, e.ty()),
            Properness::Improper { .. } => prop_assert!(false, "encoding classified improper"),
        }
    }

    #[test]
    fn proper_constructions_reencode(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let c = common::construction(&mut rng, 5);
        if let Properness::Proper { expr, .. } = classify(&c) {
            prop_assert_eq!(encode(&expr).unwrap(), c);
        }
    }

    #[test]
    fn fresh_names_are_fresh(names in proptest::collection::btree_set("[xyz][0-9]{0,2}", 0..20), base in "[xyz]") {
        let used: BTreeSet<std::sync::Arc<str>> = names.iter().map(|n| n.as_str().into()).collect();
        let fresh = fresh_name(&base, &used);
        prop_assert!(!used.contains(&fresh));
        prop_assert!(fresh.starts_with(base.as_str()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    /// The value of `B[x := A]` is the value of `B` with `x` bound to the
    /// value of `A`.
    #[test]
    fn substitution_respects_valuation(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let gen = Gen::default().nested();
        let x = common::vars().choose(&mut rng).unwrap().clone();
        let ty = common::target_types().choose(&mut rng).unwrap().clone();
        let bd = rng.gen_range(1..=5);
        let b = gen.expr(&mut rng, &ty, bd);
        let ad = rng.gen_range(1..=3);
        let a = gen.expr(&mut rng, &x.ty, ad);
        let result = substitute(&b, &x, &a).unwrap();
        prop_assert_eq!(result.ty(), b.ty());

        let size = rng.gen_range(1..=3);
        let mut values = Values::new(common::model(size));
        let opts = common::bounded(2, common::construction_atoms());
        let vars: Vec<Var> = b.free_vars().union(&a.free_vars()).cloned().collect();
        for _ in 0..4 {
            let phi = values.assignment(&mut rng, &vars);
            let m = values.model();
            let va = valuate_with(&a, m, &phi, &opts).unwrap().value;
            let lhs = valuate_with(&result, m, &phi, &opts).unwrap().value;
            let rhs = valuate_with(&b, m, &phi.update(x.clone(), va), &opts).unwrap().value;
            prop_assert!(m.equal(&lhs, &rhs, b.ty(), &opts).unwrap(), "{} [{} := {}] = {}", b, x, a, result);
        }
    }

    /// Substituting into an evaluation either blocks or agrees with the
    /// semantics.
    #[test]
    fn substitution_under_evaluation_is_sound(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let gen = Gen::default();
        let u = Var::new("u", Type::Epsilon);
        let ty = [Type::Iota, Type::Omicron].choose(&mut rng).unwrap().clone();
        let bd = rng.gen_range(1..=4);
        let arg = gen.expr(&mut rng, &Type::Epsilon, bd);
        let b = cttqe::constants::binary(
            cttqe::constants::eq(ty.clone()),
            Expr::eval(arg, ty.clone()).unwrap(),
            gen.expr(&mut rng, &ty, 2),
        );
        let nested = Gen::default().nested();
        let target = common::target_types().choose(&mut rng).unwrap().clone();
        let ad = rng.gen_range(1..=3);
        let a = Expr::quote(nested.expr(&mut rng, &target, ad)).unwrap();
        let Ok(result) = substitute(&b, &u, &a) else { return Ok(()) };

        let mut values = Values::new(common::model(2));
        let opts = common::bounded(2, common::construction_atoms());
        let vars: Vec<Var> = b.free_vars().union(&result.free_vars()).cloned().collect();
        for _ in 0..4 {
            let phi = values.assignment(&mut rng, &vars);
            let m = values.model();
            let va = valuate_with(&a, m, &phi, &opts).unwrap().value;
            let lhs = valuate_with(&result, m, &phi, &opts).unwrap().value;
            let rhs = valuate_with(&b, m, &phi.update(u.clone(), va), &opts).unwrap().value;
            prop_assert!(lhs.same_first_order(&rhs), "{} [u := {}] = {}", b, a, result);
        }
    }

    /// Normalization preserves type and value, and is idempotent.
    #[test]
    fn normalization_is_sound(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let theory = common::theory();
        let e = redex_laden(&mut rng);
        let rw = Rewriter::new(&theory);
        let nf = rw.normalize(&e, 10_000).unwrap().result;
        prop_assert_eq!(nf.ty(), e.ty());
        prop_assert_eq!(rw.normalize(&nf, 10_000).unwrap().steps.len(), 0);

        let mut values = Values::new(common::model(2));
        let opts = EvalOptions::default();
        let vars: Vec<Var> = e.free_vars().union(&nf.free_vars()).cloned().collect();
        for _ in 0..4 {
            let phi = values.assignment(&mut rng, &vars);
            let m = values.model();
            let before = valuate_with(&e, m, &phi, &opts).unwrap().value;
            let after = valuate_with(&nf, m, &phi, &opts).unwrap().value;
            prop_assert!(m.equal(&before, &after, e.ty(), &opts).unwrap(), "{} ~> {}", e, nf);
        }
    }
}

/// A base-type expression sprinkled with beta redexes, quotations and
/// evaluations of quotations.
fn redex_laden(rng: &mut common::TestRng) -> Expr {
    let gen = Gen::default().nested();
    let ty = [Type::Iota, Type::Omicron].choose(rng).unwrap().clone();
    let depth = rng.gen_range(2..=5);
    let mut e = gen.expr(rng, &ty, depth);
    for _ in 0..rng.gen_range(1..=3) {
        match rng.gen_range(0..3) {
            0 => {
                // Abstract a variable and apply to a fresh argument.
                let x = common::vars()
                    .into_iter()
                    .filter(|v| v.ty != Type::Epsilon)
                    .collect::<Vec<_>>();
                let x = x.choose(rng).unwrap().clone();
                let ad = rng.gen_range(1..=3);
                let a = gen.expr(rng, &x.ty, ad);
                e = Expr::app(Expr::abs(x, e), a).unwrap();
            }
            1 if e.is_eval_free() => {
                let ty = e.ty().clone();
                e = Expr::eval(Expr::quote(e).unwrap(), ty).unwrap();
            }
            _ => {
                let doubled = if *e.ty() == Type::Omicron {
                    cttqe::constants::binary(cttqe::constants::and(), e.clone(), e)
                } else {
                    cttqe::constants::binary(cttqe::constants::plus(), e.clone(), e)
                };
                e = doubled;
            }
        }
    }
    e
}
