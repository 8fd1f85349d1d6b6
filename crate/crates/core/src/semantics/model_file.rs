//! Model files.
//!
//! ```text
//! # three individuals
//! iota 3
//! c:i = 2
//! p:o = T
//! f:(i->i) = [1, 2, 0]
//! q:eps = '[ x:i ]
//! ```
//!
//! A function value over `i` or `o` lists its results in domain order
//! (`0, 1, ...` for individuals, `F, T` for truth values). Values of type
//! `eps` are expressions denoting a construction.

use crate::construction::ground_value;
use crate::expr::Var;
use crate::stdlib::{ConstLookup, Theory};
use crate::surface::{is_identifier, parse_type, ParseContext};
use crate::types::Type;

use super::{is_logical, Func, Model, SemanticsError, Value};

fn syntax(line: usize, message: impl Into<String>) -> SemanticsError {
    SemanticsError::ModelSyntax {
        line,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Reads a model over `theory`.
pub fn parse_model(text: &str, theory: &Theory) -> Result<Model, SemanticsError> {
    let mut size = None;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if let Some(rest) = line.strip_prefix("iota") {
            if size.is_some() {
                return Err(syntax(i + 1, "`iota` given twice"));
            }
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| syntax(i + 1, "expected `iota N`"))?;
            if n == 0 {
                return Err(syntax(i + 1, "the domain of individuals must be nonempty"));
            }
            size = Some(n);
        }
    }
    let mut model = Model::new(size.unwrap_or(1), theory.clone());
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() || line.starts_with("iota") {
            continue;
        }
        let err = |m: String| syntax(i + 1, m);
        let (lhs, rhs) = line
            .split_once('=')
            .ok_or_else(|| err("expected `name:type = value`".into()))?;
        let (name, ty) = split_ascription(lhs).map_err(err)?;
        let c = match theory.lookup(&name, Some(&ty)) {
            ConstLookup::Found(c) => c,
            ConstLookup::WrongType(t) => {
                return Err(err(format!("`{name}` is a constant of type {t}")))
            }
            _ => return Err(err(format!("`{name}` is not a declared constant"))),
        };
        if is_logical(&c, theory) {
            return Err(err(format!("the meaning of `{name}` is fixed")));
        }
        let v = parse_value(rhs.trim(), &ty, &model).map_err(err)?;
        model = model.with_constant(c, v);
    }
    Ok(model)
}

fn split_ascription(text: &str) -> Result<(String, Type), String> {
    let (name, ty) = text
        .split_once(':')
        .ok_or_else(|| format!("expected `name:type`, found `{}`", text.trim()))?;
    let name = name.trim();
    if name.is_empty() {
        return Err("missing name".into());
    }
    let ty = parse_type(ty.trim()).map_err(|e| e.kind.to_string())?;
    Ok((name.to_string(), ty))
}

/// Reads `x:type=value` as a variable binding.
pub fn parse_assignment(text: &str, m: &Model) -> Result<(Var, Value), String> {
    let (lhs, rhs) = text
        .split_once('=')
        .ok_or_else(|| format!("expected `name:type=value`, found `{text}`"))?;
    let (name, ty) = split_ascription(lhs)?;
    if !is_identifier(&name) {
        return Err(format!("`{name}` is not a variable name"));
    }
    let v = parse_value(rhs.trim(), &ty, m)?;
    Ok((Var::new(name.as_str(), ty), v))
}

/// Splits a bracketed list at top-level commas.
fn list_items(text: &str) -> Option<Vec<&str>> {
    let inner = text.strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    let mut items = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in inner.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push(inner[start..].trim());
    Some(items)
}

/// Reads a value of type `ty` in model `m`.
pub fn parse_value(text: &str, ty: &Type, m: &Model) -> Result<Value, String> {
    match ty {
        Type::Iota => {
            let k: usize = text
                .parse()
                .map_err(|_| format!("expected an individual, found `{text}`"))?;
            if k >= m.iota_size() {
                return Err(format!("individual {k} is outside 0..{}", m.iota_size()));
            }
            Ok(Value::Individual(k))
        }
        Type::Omicron => match text {
            "T" | "true" => Ok(Value::Truth(true)),
            "F" | "false" => Ok(Value::Truth(false)),
            _ => Err(format!("expected T or F, found `{text}`")),
        },
        Type::Epsilon => {
            let e = crate::surface::parse_expr_in(text, &ParseContext::new(m.theory()))
                .map_err(|e| e.to_string())?;
            ground_value(&e)
                .map(Value::Constr)
                .ok_or_else(|| format!("`{text}` does not denote a construction"))
        }
        Type::Fun(a, b) => {
            let size = match **a {
                Type::Iota => m.iota_size(),
                Type::Omicron => 2,
                _ => return Err(format!("cannot tabulate a function on {a}")),
            };
            let items = list_items(text)
                .ok_or_else(|| format!("expected a table `[...]`, found `{text}`"))?;
            if items.len() != size {
                return Err(format!(
                    "table has {} entries, expected {size}",
                    items.len()
                ));
            }
            let outs = items
                .into_iter()
                .map(|s| parse_value(s, b, m))
                .collect::<Result<Vec<_>, _>>()?;
            let index = |v: &Value| match v {
                Value::Individual(k) => *k,
                Value::Truth(t) => usize::from(*t),
                _ => unreachable!("tabulated domains are first-order"),
            };
            Ok(Value::Func(Func::new(
                (**a).clone(),
                (**b).clone(),
                move |x| Ok(outs[index(x)].clone()),
            )))
        }
    }
}
