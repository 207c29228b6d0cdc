use std::fmt;

use thiserror::Error;

use super::dialect::Dialect;
use super::token::Token;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("unknown character {ch:?} at position {pos}")]
    UnknownToken { pos: usize, ch: char },
    #[error("command '{token}' at position {pos} is disabled in this dialect")]
    DisabledToken { pos: usize, token: Token },
    #[error("unmatched '{bracket}' at position {pos}")]
    UnmatchedBracket { pos: usize, bracket: char },
}

impl ValidationError {
    pub fn position(&self) -> usize {
        match *self {
            ValidationError::UnknownToken { pos, .. }
            | ValidationError::DisabledToken { pos, .. }
            | ValidationError::UnmatchedBracket { pos, .. } => pos,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ValidationError::UnknownToken { .. } => "UnknownToken",
            ValidationError::DisabledToken { .. } => "DisabledToken",
            ValidationError::UnmatchedBracket { .. } => "UnmatchedBracket",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("token at position {0} is not a bracket")]
pub struct NotABracket(pub usize);

/// A validated BF++ program with its bracket pairing precomputed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Program {
    tokens: Vec<Token>,
    source: String,
    // partner[i] is the matching bracket for brackets and i otherwise
    partner: Vec<usize>,
}

impl Program {
    /// Tokenize and validate `text`. Reports the error with the smallest position.
    pub fn parse(text: &str, dialect: &Dialect) -> Result<Program, ValidationError> {
        let mut tokens = Vec::with_capacity(text.len());
        let mut first_char_err: Option<ValidationError> = None;
        for (pos, ch) in text.chars().enumerate() {
            match Token::from_char(ch) {
                Some(t) if dialect.is_enabled(t) => tokens.push(t),
                Some(t) => {
                    first_char_err.get_or_insert(ValidationError::DisabledToken { pos, token: t });
                    tokens.push(t);
                }
                None => {
                    first_char_err.get_or_insert(ValidationError::UnknownToken { pos, ch });
                    // keep positions aligned for the bracket scan
                    tokens.push(Token::Inc);
                }
            }
        }
        let bracket = pair_brackets(&tokens);
        match (first_char_err, bracket) {
            (None, Ok(partner)) => Ok(Program { tokens, source: text.to_string(), partner }),
            (Some(e), Ok(_)) => Err(e),
            (None, Err(e)) => Err(e),
            (Some(a), Err(b)) => Err(if b.position() < a.position() { b } else { a }),
        }
    }

    /// Validate an already tokenized sequence.
    pub fn from_tokens(tokens: Vec<Token>, dialect: &Dialect) -> Result<Program, ValidationError> {
        if let Some((pos, &token)) = tokens.iter().enumerate().find(|(_, t)| !dialect.is_enabled(**t)) {
            let disabled = ValidationError::DisabledToken { pos, token };
            return Err(match pair_brackets(&tokens) {
                Err(b) if b.position() < pos => b,
                _ => disabled,
            });
        }
        let partner = pair_brackets(&tokens)?;
        let source = tokens.iter().map(|t| t.to_char()).collect();
        Ok(Program { tokens, source, partner })
    }

    pub fn empty() -> Program {
        Program { tokens: Vec::new(), source: String::new(), partner: Vec::new() }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Exact source text.
    pub fn render(&self) -> &str {
        &self.source
    }

    pub fn matching_bracket(&self, index: usize) -> Result<usize, NotABracket> {
        match self.tokens.get(index) {
            Some(t) if t.is_bracket() => Ok(self.partner[index]),
            _ => Err(NotABracket(index)),
        }
    }

    /// Partner lookup without the bracket check, for the interpreter hot loop.
    #[inline]
    pub(crate) fn jump_target(&self, index: usize) -> usize {
        self.partner[index]
    }

    /// True when every token is enabled under `dialect`.
    pub fn fits(&self, dialect: &Dialect) -> bool {
        self.tokens.iter().all(|t| dialect.is_enabled(*t))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Program({:?})", self.source)
    }
}

fn pair_brackets(tokens: &[Token]) -> Result<Vec<usize>, ValidationError> {
    let mut partner: Vec<usize> = (0..tokens.len()).collect();
    let mut stack = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        match t {
            Token::LoopStart => stack.push(i),
            Token::LoopEnd => match stack.pop() {
                Some(open) => {
                    partner[open] = i;
                    partner[i] = open;
                }
                None => return Err(ValidationError::UnmatchedBracket { pos: i, bracket: ']' }),
            },
            _ => {}
        }
    }
    match stack.first() {
        Some(&pos) => Err(ValidationError::UnmatchedBracket { pos, bracket: '[' }),
        None => Ok(partner),
    }
}

/// Parse a program file: one program per line, blank lines and `#` comments skipped.
/// Yields `(1-based line number, program text)`.
pub fn program_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}
