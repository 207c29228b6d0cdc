use crate::lang::{Dialect, Program, Token};

use super::SynthError;

/// Writer-agent vocabulary: the dialect's enabled tokens followed by EOS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<Token>,
}

impl Vocabulary {
    pub fn for_dialect(dialect: &Dialect) -> Self {
        Vocabulary { tokens: dialect.tokens() }
    }

    /// Number of symbols including EOS.
    pub fn size(&self) -> usize {
        self.tokens.len() + 1
    }

    pub fn eos(&self) -> usize {
        self.tokens.len()
    }

    pub fn token(&self, symbol: usize) -> Option<Token> {
        self.tokens.get(symbol).copied()
    }

    pub fn index(&self, token: Token) -> Option<usize> {
        self.tokens.iter().position(|&t| t == token)
    }

    /// Symbols for a token sequence, EOS excluded.
    pub fn encode(&self, tokens: &[Token]) -> Result<Vec<usize>, SynthError> {
        tokens
            .iter()
            .enumerate()
            .map(|(pos, &t)| self.index(t).ok_or(SynthError::TokenOutsideVocabulary { pos, token: t }))
            .collect()
    }

    pub fn encode_program(&self, program: &Program) -> Result<Vec<usize>, SynthError> {
        self.encode(program.tokens())
    }

    /// Tokens for symbols; EOS and out-of-range symbols are dropped.
    pub fn decode(&self, symbols: &[usize]) -> Vec<Token> {
        symbols.iter().filter_map(|&s| self.token(s)).collect()
    }

    pub fn render(&self, symbols: &[usize]) -> String {
        self.decode(symbols).iter().map(|t| t.to_char()).collect()
    }
}
