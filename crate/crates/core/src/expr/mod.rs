//! Expression language for entire functions of one complex variable.
//!
//! The language is deliberately closed over entire functions: division is
//! only allowed by constant subexpressions and the function set is
//! `exp`, `sin`, `cos`, `sinh`, `cosh`. Every accepted expression therefore
//! denotes a function holomorphic on all of ℂ.

mod ast;
mod eval;
mod parser;
mod pretty;

pub use ast::{EntireFunction, ExprNode};
pub use eval::{evaluate, evaluate_state, log_magnitude, EvalValue, PointState};
pub use parser::{parse_function, ParseError, ParseErrorKind};
pub use pretty::pretty;
