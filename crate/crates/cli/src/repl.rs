//! A line-oriented loop over standard input.
//!
//! ```text
//! let name = expr      bind a name, expanded when later lines are parsed
//! :type expr           print the type
//! :encode expr         print the construction literal
//! :decode expr         decode a construction
//! :steps expr          normalize, printing each step
//! :quit
//! expr                 normalize
//! ```

use std::collections::HashMap;
use std::io::{BufRead, Write};

use cttqe::rewrite::NormalizeOptions;
use cttqe::stdlib::Theory;
use cttqe::surface::{is_identifier, parse_expr_in, ParseContext};
use cttqe::Expr;

use crate::{decode_cmd, diagnostic, encode_cmd, normalize_cmd, Fatal, Outcome};

struct Session<'a> {
    theory: &'a Theory,
    macros: HashMap<String, Expr>,
}

impl Session<'_> {
    fn parse(&self, text: &str) -> Result<Expr, Fatal> {
        let ctx = ParseContext::new(self.theory)
            .with_macros(&self.macros)
            .with_file("<repl>");
        parse_expr_in(text, &ctx).map_err(|e| Fatal(diagnostic(text, &e)))
    }

    fn line(&mut self, line: &str) -> Result<Option<Vec<String>>, Fatal> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(Some(Vec::new()));
        }
        if line == ":quit" || line == ":q" {
            return Ok(None);
        }
        if let Some(rest) = line.strip_prefix("let ") {
            let (name, body) = rest
                .split_once('=')
                .ok_or_else(|| Fatal("expected `let name = expr`".into()))?;
            let name = name.trim();
            if !is_identifier(name) {
                return Err(Fatal(format!("`{name}` is not a name")));
            }
            let e = self.parse(body)?;
            let shown = format!("{name} : {}", e.ty());
            self.macros.insert(name.to_string(), e);
            return Ok(Some(vec![shown]));
        }
        let (cmd, rest) = match line.split_once(char::is_whitespace) {
            Some((c, r)) if c.starts_with(':') => (c, r),
            _ if line.starts_with(':') => (line, ""),
            _ => ("", line),
        };
        let opts = NormalizeOptions::default();
        let out: Outcome = match cmd {
            ":type" => {
                let e = self.parse(rest)?;
                return Ok(Some(vec![e.ty().to_string()]));
            }
            ":encode" => encode_cmd(&self.parse(rest)?)?,
            ":decode" => decode_cmd(&self.parse(rest)?)?,
            ":steps" => normalize_cmd(&self.parse(rest)?, self.theory, &opts, true)?,
            "" => normalize_cmd(&self.parse(rest)?, self.theory, &opts, false)?,
            other => return Err(Fatal(format!("unknown command `{other}`"))),
        };
        Ok(Some(out.text))
    }
}

pub fn run(theory: &Theory, input: impl BufRead, mut output: impl Write) -> Result<(), Fatal> {
    let mut session = Session {
        theory,
        macros: HashMap::new(),
    };
    for line in input.lines() {
        let line = line?;
        match session.line(&line) {
            Ok(None) => break,
            Ok(Some(lines)) => {
                for l in lines {
                    writeln!(output, "{l}")?;
                }
            }
            Err(Fatal(msg)) => writeln!(output, "error: {msg}")?,
        }
        output.flush()?;
    }
    Ok(())
}
