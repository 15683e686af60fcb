//! Exact rational expressions over the Gaussian rationals.

mod expr;
mod parse;
mod poly;
mod scalar;
mod table;

pub use expr::Expr;
pub use parse::parse_expr;
pub use poly::{Monomial, Poly, Sym};
pub use scalar::Scalar;
pub use table::{SymbolKind, SymbolTable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("undeclared symbol `{name}` at byte {pos}")]
    Undeclared { name: String, pos: usize },
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("division by an identically zero expression")]
    ZeroDenominator,
    #[error("auxiliary symbol `{0}` is unbound while its radicand is substituted")]
    UnboundAux(String),
    #[error("auxiliary symbol `{0}` has no rational value at the expansion point")]
    IrrationalAux(String),
}

pub type Result<T> = std::result::Result<T, SymbolicError>;
