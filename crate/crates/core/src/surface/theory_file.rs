//! Theory files: constant declarations and definitions layered on a base
//! theory.
//!
//! ```text
//! # comment
//! const c : i
//! def double : i -> i := \x:i . x + x
//! opaque def big : i := double (double 2)
//! ```
//!
//! A statement starts at a line beginning with `const`, `def` or `opaque`;
//! any following lines that do not start a statement continue it.

use crate::stdlib::{Theory, TheoryError};
use crate::surface::{self, is_identifier, ParseContext};

struct Statement {
    line: usize,
    text: String,
}

fn statements(text: &str) -> Result<Vec<Statement>, TheoryError> {
    let mut out: Vec<Statement> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            if let Some(last) = out.last_mut() {
                last.text.push('\n');
            }
            continue;
        }
        let first = line.split_whitespace().next().unwrap_or("");
        if matches!(first, "const" | "def" | "opaque") {
            out.push(Statement {
                line: i + 1,
                text: line.to_string(),
            });
        } else if let Some(last) = out.last_mut() {
            last.text.push('\n');
            last.text.push_str(line);
        } else {
            return Err(TheoryError::Syntax {
                line: i + 1,
                message: "expected `const`, `def` or `opaque def`".into(),
            });
        }
    }
    Ok(out)
}

/// Extends `base` with the declarations in `text`.
pub fn load_theory(text: &str, file: Option<&str>, base: &Theory) -> Result<Theory, TheoryError> {
    let mut theory = base.clone();
    for st in statements(text)? {
        let err = |message: String| TheoryError::Syntax {
            line: st.line,
            message,
        };
        let mut rest = st.text.trim_start();
        let opaque = if let Some(r) = rest.strip_prefix("opaque") {
            rest = r.trim_start();
            if !rest.starts_with("def") {
                return Err(err("expected `def` after `opaque`".into()));
            }
            true
        } else {
            false
        };
        let (is_def, after) = if let Some(r) = rest.strip_prefix("const") {
            (false, r)
        } else if let Some(r) = rest.strip_prefix("def") {
            (true, r)
        } else {
            return Err(err("expected `const` or `def`".into()));
        };
        let (name, after) = after
            .split_once(':')
            .ok_or_else(|| err("expected `name : type`".into()))?;
        let name = name.trim();
        if !is_identifier(name) || surface::parse_type(name).is_ok() {
            return Err(err(format!("`{name}` cannot name a constant")));
        }
        if !is_def {
            let ty = surface::parse_type(after.trim()).map_err(|e| err(e.kind.to_string()))?;
            theory.declare(name, ty, "")?;
            continue;
        }
        let (ty_text, body) = after
            .split_once(":=")
            .ok_or_else(|| err("expected `:=` in definition".into()))?;
        let ty = surface::parse_type(ty_text.trim()).map_err(|e| err(e.kind.to_string()))?;
        let offset = st.text.len() - body.len();
        let column = offset + 1;
        let mut ctx = ParseContext::new(&theory);
        if let Some(f) = file {
            ctx = ctx.with_file(f);
        }
        let expr = surface::parse_expr_at(body, &ctx, st.line, column)?;
        theory.define_expr(name, ty, expr, opaque, "")?;
    }
    Ok(theory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stdlib::ConstKind;

    #[test]
    fn loads_declarations_and_definitions() {
        let text = "# numbers\nconst c : i\ndef double : i -> i :=\n  \\x:i . x + x\nopaque def two : i := double 1\n";
        let t = load_theory(text, None, &Theory::standard()).unwrap();
        assert!(t.get("c").is_some());
        assert!(matches!(
            t.get("two").unwrap().kind,
            ConstKind::Defined { opaque: true, .. }
        ));
        assert_eq!(
            t.unfold("double").unwrap(),
            t.parse("\\x:i . x:i + x:i").unwrap()
        );
    }

    #[test]
    fn reports_errors_with_lines() {
        let e = load_theory("const c : i\nconst c : o\n", None, &Theory::standard()).unwrap_err();
        assert_eq!(e, TheoryError::DuplicateConstant("c".into()));
        let e = load_theory("def d : o := x:i\n", None, &Theory::standard()).unwrap_err();
        assert!(matches!(e, TheoryError::DefinitionType { .. }));
        let e =
            load_theory("\n\ndef d : o := (\n", Some("t.cttqe"), &Theory::standard()).unwrap_err();
        match e {
            TheoryError::Parse(p) => assert_eq!(p.span.line, 3),
            other => panic!("{other:?}"),
        }
    }
}
