//! The knowledge-base text format.
//!
//! ```text
//! #sorts
//! actor baja, krasnovia.
//! operation worm123.
//! #em
//! govCybLab(baja) : 0.8 +- 0.1.
//! #ic
//! oneOf{a, b}.
//! #am
//! theta1 : fact evidOf(baja,worm123).
//! phi1 : presume hasMseInvest(baja).
//! omega1 : neg condOp(Y,O) <- condOp(X,O), X != Y.
//! delta1 : condOp(X,O) -< evidOf(X,O).
//! #af
//! phi1 : govCybLab(baja).
//! ```
//!
//! An optional `#universe` section lists the environmental atoms worlds
//! range over. `%` starts a comment.

mod assemble;
mod lexer;
mod parser;
mod render;

use std::fmt;

pub use assemble::{assemble, load, LoadOptions};
pub use parser::{parse_evidence, parse_formula, parse_kb, parse_literal, parse_world};
pub use render::render;

use crate::am::ElementKind;
use crate::em::{IntegrityConstraint, ProbabilisticFormula};
use crate::language::{Atom, Formula, Role, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub snippet: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.snippet.is_empty() {
            write!(
                f,
                "\n  | {}\n  | {}^",
                self.snippet,
                " ".repeat(self.column.saturating_sub(1))
            )?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

/// A value with the position it was parsed from. Equality ignores the
/// position.
#[derive(Debug, Clone)]
pub struct Spanned<T> {
    pub value: T,
    pub span: Span,
}

impl<T> Spanned<T> {
    pub fn new(value: T, span: Span) -> Self {
        Spanned { value, span }
    }

    pub fn unspanned(value: T) -> Self {
        Spanned {
            value,
            span: Span::default(),
        }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<T: Eq> Eq for Spanned<T> {}

/// A labelled, possibly schematic analytical-model statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmStatement {
    pub label: String,
    pub kind: ElementKind,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AfStatement {
    pub label: String,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortDecl {
    pub role: Role,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbDocument {
    pub sorts: Vec<Spanned<SortDecl>>,
    /// `None` when the file has no `#universe` section.
    pub universe: Option<Vec<Spanned<Atom>>>,
    pub em: Vec<Spanned<ProbabilisticFormula>>,
    pub ic: Vec<Spanned<IntegrityConstraint>>,
    pub am: Vec<Spanned<AmStatement>>,
    pub af: Vec<Spanned<AfStatement>>,
}

impl fmt::Display for KbDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
