//! Token alphabet, dialects and program validation.

mod dialect;
mod program;
mod token;

pub use dialect::{Dialect, DialectConfig, DialectError, LoopMode};
pub use program::{program_lines, NotABracket, Program, ValidationError};
pub use token::{render_tokens, Token, MAX_SHORTHANDS};
