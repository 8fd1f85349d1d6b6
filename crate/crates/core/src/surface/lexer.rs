use std::sync::Arc;

use crate::span::SourceSpan;
use crate::surface::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    /// `is-expr[...]`, holding the text between the brackets.
    IsExpr(String),
    LParen,
    RParen,
    Colon,
    Dot,
    Lambda,
    QuoteOpen,
    QuoteClose,
    EvalOpen,
    /// `]]_`, which must be followed by a type.
    EvalClose,
    HoleOpen,
    Arrow,
    Eq,
    And,
    Or,
    Implies,
    Not,
    Plus,
    Star,
    Caret,
    Assign,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(s) => format!("numeral `{s}`"),
            Tok::IsExpr(s) => format!("`is-expr[{s}]`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Lambda => "\\",
            Tok::QuoteOpen => "'[",
            Tok::QuoteClose => "]",
            Tok::EvalOpen => "[[",
            Tok::EvalClose => "]]_",
            Tok::HoleOpen => ",(",
            Tok::Arrow => "->",
            Tok::Eq => "=",
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Implies => "=>",
            Tok::Not => "~",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::Caret => "^",
            Tok::Assign => ":=",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// True when `name` lexes as a single identifier.
pub fn is_identifier(name: &str) -> bool {
    let chars: Vec<char> = name.chars().collect();
    let Some(&first) = chars.first() else {
        return false;
    };
    if !is_ident_start(first) {
        return false;
    }
    for (i, &c) in chars.iter().enumerate().skip(1) {
        let ok = is_ident_char(c)
            || (c == '-' && chars.get(i + 1).is_some_and(|&n| n.is_ascii_alphanumeric()));
        if !ok {
            return false;
        }
    }
    true
}

pub fn tokenize(text: &str, file: Option<Arc<str>>) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let span = |line, col, len| SourceSpan::new(line, col, len).with_file(file.clone());
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest = &chars[i..];
        let starts = |s: &str| {
            let s: Vec<char> = s.chars().collect();
            rest.len() >= s.len() && rest[..s.len()] == s[..]
        };
        let (tok, len) = if is_ident_start(c) {
            let mut j = i + 1;
            while j < chars.len() {
                let d = chars[j];
                if is_ident_char(d)
                    || (d == '-' && chars.get(j + 1).is_some_and(|n| n.is_ascii_alphanumeric()))
                {
                    j += 1;
                } else {
                    break;
                }
            }
            let word: String = chars[i..j].iter().collect();
            if word == "is-expr" && chars.get(j) == Some(&'[') {
                let mut depth = 0usize;
                let mut k = j;
                loop {
                    match chars.get(k) {
                        Some('[') => depth += 1,
                        Some(']') => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        Some('\n') | None => {
                            return Err(ParseError::new(
                                ParseErrorKind::Syntax("unterminated `is-expr[`".into()),
                                span(line, col, j - i + 1),
                            ))
                        }
                        _ => {}
                    }
                    k += 1;
                }
                let inner: String = chars[j + 1..k].iter().collect();
                (Tok::IsExpr(inner), k + 1 - i)
            } else {
                let len = j - i;
                (Tok::Ident(word), len)
            }
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            (Tok::Num(chars[i..j].iter().collect()), j - i)
        } else if starts("]]_") {
            (Tok::EvalClose, 3)
        } else if starts("[[") {
            (Tok::EvalOpen, 2)
        } else if starts("'[") {
            (Tok::QuoteOpen, 2)
        } else if starts(",(") {
            (Tok::HoleOpen, 2)
        } else if starts("->") {
            (Tok::Arrow, 2)
        } else if starts("/\\") {
            (Tok::And, 2)
        } else if starts("\\/") {
            (Tok::Or, 2)
        } else if starts("=>") {
            (Tok::Implies, 2)
        } else if starts(":=") {
            (Tok::Assign, 2)
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                '\\' => Tok::Lambda,
                ']' => Tok::QuoteClose,
                '=' => Tok::Eq,
                '~' => Tok::Not,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                _ => {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
                        span(line, col, 1),
                    ))
                }
            };
            (tok, 1)
        };
        out.push(Token {
            tok,
            span: span(line, col, len),
        });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(line, col, 0),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s, None)
            .unwrap()
            .into_iter()
            .map(|t| t.tok)
            .collect()
    }

    #[test]
    fn eval_close_needs_underscore() {
        assert_eq!(
            toks("]]]_o"),
            vec![
                Tok::QuoteClose,
                Tok::EvalClose,
                Tok::Ident("o".into()),
                Tok::Eof
            ]
        );
        assert_eq!(
            toks("] ]"),
            vec![Tok::QuoteClose, Tok::QuoteClose, Tok::Eof]
        );
    }

    #[test]
    fn hyphenated_identifiers() {
        assert_eq!(
            toks("make-implication x-y"),
            vec![
                Tok::Ident("make-implication".into()),
                Tok::Ident("x-y".into()),
                Tok::Eof
            ]
        );
        assert_eq!(
            toks("is-expr[i->o]"),
            vec![Tok::IsExpr("i->o".into()), Tok::Eof]
        );
        assert!(tokenize("x - y", None).is_err());
    }

    #[test]
    fn lambda_versus_or() {
        assert_eq!(
            toks("\\x \\/"),
            vec![Tok::Lambda, Tok::Ident("x".into()), Tok::Or, Tok::Eof]
        );
    }

    #[test]
    fn spans_track_lines() {
        let t = tokenize("a\n  b", None).unwrap();
        assert_eq!((t[1].span.line, t[1].span.column), (2, 3));
    }

    #[test]
    fn identifier_check() {
        assert!(is_identifier("poly-diff"));
        assert!(!is_identifier("x-"));
        assert!(!is_identifier("2x"));
        assert!(!is_identifier(""));
    }
}
