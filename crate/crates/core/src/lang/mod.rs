//! Concrete syntax for the loop-free probabilistic language.
//!
//! ```text
//! P := bernoulli(1/2);
//! if (P = 1) { R := 1 } else { R := bernoulli(1/2) };
//! observe(R = 1)
//! ```

mod ast;
mod lexer;
mod parser;

pub use ast::{free_vars, Program, Rhs, Stmt};
pub use parser::{parse, ParseError};

pub use crate::guard::{Cmp, Guard};
