//! ASP-Core-2 subset: syntax tree, parser, printer, safety checking and
//! grounding against a finite atom set.

pub mod ast;
pub mod ground;
pub(crate) mod lexer;
pub mod parser;
pub mod printer;
pub mod safety;

pub use ast::*;
pub use ground::{ground_instantiations, GroundError};
pub use parser::{parse_atom, parse_program, ParseError, ParseErrorKind};
pub use printer::print_program;
