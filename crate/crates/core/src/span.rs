use std::fmt;
use std::sync::Arc;

/// A region of source text. Lines and columns are 1-based; `length` counts
/// characters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SourceSpan {
    pub file: Option<Arc<str>>,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        SourceSpan {
            file: None,
            line,
            column,
            length,
        }
    }

    pub fn with_file(mut self, file: Option<Arc<str>>) -> Self {
        self.file = file;
        self
    }

    /// Smallest span covering both, assuming `self` starts first on the same
    /// line or `other` ends later.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        let length = if other.line == self.line {
            (other.column + other.length).saturating_sub(self.column)
        } else {
            self.length
        };
        SourceSpan {
            file: self.file.clone(),
            line: self.line,
            column: self.column,
            length: length.max(1),
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(file) => write!(f, "{}:{}:{}", file, self.line, self.column),
            None => write!(f, "{}:{}", self.line, self.column),
        }
    }
}
