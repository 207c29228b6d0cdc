use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::token::{Token, MAX_SHORTHANDS};

/// Condition under which `[` skips its body and `]` jumps back.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopMode {
    /// `[` skips when cell >= 0, `]` repeats when cell < 0.
    #[default]
    Negative,
    /// `[` skips when cell > 0, `]` repeats when cell <= 0.
    NonPositive,
    /// Textbook behaviour: `[` skips when cell == 0, `]` repeats when cell != 0.
    ClassicZero,
}

impl LoopMode {
    /// True when the loop body should run (or run again) for `cell`.
    #[inline]
    pub fn enters(self, cell: i64) -> bool {
        match self {
            LoopMode::Negative => cell < 0,
            LoopMode::NonPositive => cell <= 0,
            LoopMode::ClassicZero => cell != 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LoopMode::Negative => "negative",
            LoopMode::NonPositive => "non_positive",
            LoopMode::ClassicZero => "classic_zero",
        }
    }
}

impl FromStr for LoopMode {
    type Err = DialectError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "negative" => Ok(LoopMode::Negative),
            "non_positive" | "nonpositive" => Ok(LoopMode::NonPositive),
            "classic_zero" | "classic" | "zero" => Ok(LoopMode::ClassicZero),
            _ => Err(DialectError::UnknownLoopMode(s.to_string())),
        }
    }
}

impl fmt::Display for LoopMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DialectError {
    #[error("'{0}' is not an optional BF++ command")]
    NotOptional(char),
    #[error("value and pointer shorthands must be enabled in equal, contiguous numbers")]
    AsymmetricShorthands,
    #[error("at most {MAX_SHORTHANDS} shorthands of each kind are supported")]
    TooManyShorthands,
    #[error("unknown loop mode '{0}'")]
    UnknownLoopMode(String),
    #[error("unknown dialect preset '{0}'")]
    UnknownPreset(String),
}

/// Which optional commands are enabled and how loops test the active cell.
///
/// The core commands `> < + - [ ] . , !` are always enabled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DialectConfig", into = "DialectConfig")]
pub struct Dialect {
    pub random: bool,
    pub goto: bool,
    pub negate: bool,
    /// Number of value shorthands (`0..`) and, equally, pointer shorthands (`a..`).
    pub shorthands: u8,
    pub loop_mode: LoopMode,
}

impl Default for Dialect {
    fn default() -> Self {
        Dialect::full()
    }
}

impl Dialect {
    /// All 22 commands.
    pub fn full() -> Self {
        Dialect { random: true, goto: true, negate: true, shorthands: 5, loop_mode: LoopMode::Negative }
    }

    /// Core commands only.
    pub fn core() -> Self {
        Dialect { random: false, goto: false, negate: false, shorthands: 0, loop_mode: LoopMode::Negative }
    }

    pub fn without_shorthands() -> Self {
        Dialect { shorthands: 0, ..Dialect::full() }
    }

    /// Shorthands kept, `@ ^ ~` removed.
    pub fn without_special() -> Self {
        Dialect { random: false, goto: false, negate: false, ..Dialect::full() }
    }

    pub fn with_loop_mode(self, loop_mode: LoopMode) -> Self {
        Dialect { loop_mode, ..self }
    }

    /// Named presets: `bf++`, `bf+no-shorthands`, `bf+no-special`, `core`.
    pub fn preset(name: &str) -> Result<Self, DialectError> {
        match name {
            "bf++" | "full" => Ok(Dialect::full()),
            "bf+no-shorthands" | "no-shorthands" => Ok(Dialect::without_shorthands()),
            "bf+no-special" | "no-special" => Ok(Dialect::without_special()),
            "core" | "bf" => Ok(Dialect::core()),
            _ => Err(DialectError::UnknownPreset(name.to_string())),
        }
    }

    /// Build from the list of enabled optional commands.
    pub fn from_optional(enabled: &[char], loop_mode: LoopMode) -> Result<Self, DialectError> {
        let mut d = Dialect::core().with_loop_mode(loop_mode);
        let mut values = [false; MAX_SHORTHANDS as usize];
        let mut cells = [false; MAX_SHORTHANDS as usize];
        for &c in enabled {
            match Token::from_char(c) {
                Some(Token::Random) => d.random = true,
                Some(Token::Goto) => d.goto = true,
                Some(Token::Negate) => d.negate = true,
                Some(Token::Value(v)) => values[v as usize] = true,
                Some(Token::Cell(v)) => cells[v as usize] = true,
                _ => return Err(DialectError::NotOptional(c)),
            }
        }
        if values != cells {
            return Err(DialectError::AsymmetricShorthands);
        }
        let count = values.iter().take_while(|&&b| b).count();
        if values[count..].iter().any(|&b| b) {
            return Err(DialectError::AsymmetricShorthands);
        }
        d.shorthands = count as u8;
        Ok(d)
    }

    /// Enabled optional commands in canonical order.
    pub fn optional_chars(&self) -> Vec<char> {
        self.tokens().into_iter().filter(|t| !t.is_core()).map(Token::to_char).collect()
    }

    pub fn is_enabled(&self, token: Token) -> bool {
        match token {
            Token::Random => self.random,
            Token::Goto => self.goto,
            Token::Negate => self.negate,
            Token::Value(v) | Token::Cell(v) => v < self.shorthands,
            _ => true,
        }
    }

    /// Enabled commands in canonical order `><^@+~-[].,!` then values then pointers.
    pub fn tokens(&self) -> Vec<Token> {
        let mut out = Vec::with_capacity(12 + 2 * self.shorthands as usize);
        for t in [
            Token::Right,
            Token::Left,
            Token::Goto,
            Token::Random,
            Token::Inc,
            Token::Negate,
            Token::Dec,
            Token::LoopStart,
            Token::LoopEnd,
            Token::Append,
            Token::Read,
            Token::Push,
        ] {
            if self.is_enabled(t) {
                out.push(t);
            }
        }
        out.extend((0..self.shorthands).map(Token::Value));
        out.extend((0..self.shorthands).map(Token::Cell));
        out
    }

    /// True when every command enabled here is also enabled in `other`.
    pub fn is_subset_of(&self, other: &Dialect) -> bool {
        self.tokens().into_iter().all(|t| other.is_enabled(t))
    }
}

/// Config-file form of a [`Dialect`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialectConfig {
    pub enabled: Vec<String>,
    #[serde(default)]
    pub loop_mode: LoopMode,
}

impl TryFrom<DialectConfig> for Dialect {
    type Error = DialectError;

    fn try_from(cfg: DialectConfig) -> Result<Self, Self::Error> {
        let mut chars = Vec::new();
        for s in &cfg.enabled {
            chars.extend(s.chars());
        }
        Dialect::from_optional(&chars, cfg.loop_mode)
    }
}

impl From<Dialect> for DialectConfig {
    fn from(d: Dialect) -> Self {
        DialectConfig {
            enabled: d.optional_chars().into_iter().map(String::from).collect(),
            loop_mode: d.loop_mode,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_dialect_has_22_commands() {
        let tokens = Dialect::full().tokens();
        assert_eq!(tokens.len(), 22);
        let text: String = tokens.iter().map(|t| t.to_char()).collect();
        assert_eq!(text, "><^@+~-[].,!01234abcde");
    }

    #[test]
    fn core_is_always_enabled() {
        let d = Dialect::core();
        for t in Token::CORE {
            assert!(d.is_enabled(t));
        }
        assert_eq!(d.tokens().len(), 9);
    }

    #[test]
    fn optional_list_round_trip() {
        let d = Dialect::from_optional(&['@', '0', 'a', '1', 'b'], LoopMode::ClassicZero).unwrap();
        assert!(d.random && !d.goto && !d.negate);
        assert_eq!(d.shorthands, 2);
        let cfg = DialectConfig::from(d);
        assert_eq!(Dialect::try_from(cfg).unwrap(), d);
    }

    #[test]
    fn shorthands_must_be_symmetric() {
        assert_eq!(
            Dialect::from_optional(&['0', '1', 'a'], LoopMode::Negative),
            Err(DialectError::AsymmetricShorthands)
        );
        assert_eq!(
            Dialect::from_optional(&['1', 'b'], LoopMode::Negative),
            Err(DialectError::AsymmetricShorthands)
        );
        assert_eq!(Dialect::from_optional(&['+'], LoopMode::Negative), Err(DialectError::NotOptional('+')));
    }

    #[test]
    fn extended_shorthands_use_later_digits_and_letters() {
        let d = Dialect { shorthands: 7, ..Dialect::full() };
        assert!(d.is_enabled(Token::Value(6)));
        assert!(d.is_enabled(Token::Cell(6)));
        assert!(!d.is_enabled(Token::Value(7)));
        assert_eq!(d.tokens().len(), 12 + 14);
    }

    #[test]
    fn serde_uses_token_list() {
        let json = serde_json::to_string(&Dialect::without_special()).unwrap();
        assert!(json.contains("\"loop_mode\":\"negative\""));
        let back: Dialect = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Dialect::without_special());
        let err = serde_json::from_str::<Dialect>(r#"{"enabled":["0"],"loop_mode":"negative"}"#);
        assert!(err.is_err());
    }

    #[test]
    fn loop_mode_parsing() {
        assert_eq!("classic-zero".parse::<LoopMode>().unwrap(), LoopMode::ClassicZero);
        assert_eq!("NON_POSITIVE".parse::<LoopMode>().unwrap(), LoopMode::NonPositive);
        assert!("sideways".parse::<LoopMode>().is_err());
    }
}
