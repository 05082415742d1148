//! Parser, interpreter and report emitter for `.jac` scripts.

pub mod ast;
pub mod emit;
pub mod eval;
pub mod parse;
pub mod print;

pub use emit::{emit_json, emit_text, exit_code};
pub use eval::{run, Options, Record, Run};
pub use parse::{parse, ParseError};
