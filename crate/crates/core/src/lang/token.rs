use std::fmt;

/// Largest number of value/pointer shorthands a dialect may enable
/// (`0..9` and `a..j`).
pub const MAX_SHORTHANDS: u8 = 10;

/// One BF++ command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    /// `>`
    Right,
    /// `<`
    Left,
    /// `^`: memory pointer jumps to the address held in the active cell.
    Goto,
    /// `@`
    Random,
    /// `+`
    Inc,
    /// `~`
    Negate,
    /// `-`
    Dec,
    /// `[`
    LoopStart,
    /// `]`
    LoopEnd,
    /// `.`: append the active cell to the bottom of the action queue.
    Append,
    /// `,`
    Read,
    /// `!`: push the active cell onto the top of the action queue.
    Push,
    /// `0`..`9`: write the constant into the active cell.
    Value(u8),
    /// `a`..`j`: move the memory pointer to the absolute cell.
    Cell(u8),
}

impl Token {
    /// Core commands, always enabled, in canonical order.
    pub const CORE: [Token; 9] = [
        Token::Right,
        Token::Left,
        Token::Inc,
        Token::Dec,
        Token::LoopStart,
        Token::LoopEnd,
        Token::Append,
        Token::Read,
        Token::Push,
    ];

    pub fn from_char(c: char) -> Option<Token> {
        Some(match c {
            '>' => Token::Right,
            '<' => Token::Left,
            '^' => Token::Goto,
            '@' => Token::Random,
            '+' => Token::Inc,
            '~' => Token::Negate,
            '-' => Token::Dec,
            '[' => Token::LoopStart,
            ']' => Token::LoopEnd,
            '.' => Token::Append,
            ',' => Token::Read,
            '!' => Token::Push,
            '0'..='9' => Token::Value(c as u8 - b'0'),
            'a'..='j' => Token::Cell(c as u8 - b'a'),
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        match self {
            Token::Right => '>',
            Token::Left => '<',
            Token::Goto => '^',
            Token::Random => '@',
            Token::Inc => '+',
            Token::Negate => '~',
            Token::Dec => '-',
            Token::LoopStart => '[',
            Token::LoopEnd => ']',
            Token::Append => '.',
            Token::Read => ',',
            Token::Push => '!',
            Token::Value(v) => (b'0' + v) as char,
            Token::Cell(c) => (b'a' + c) as char,
        }
    }

    pub fn is_bracket(self) -> bool {
        matches!(self, Token::LoopStart | Token::LoopEnd)
    }

    pub fn is_core(self) -> bool {
        Token::CORE.contains(&self)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

pub fn render_tokens(tokens: &[Token]) -> String {
    tokens.iter().map(|t| t.to_char()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_round_trip() {
        for c in "><^@+~-[].,!0123456789abcdefghij".chars() {
            assert_eq!(Token::from_char(c).unwrap().to_char(), c);
        }
        assert_eq!(Token::from_char('k'), None);
        assert_eq!(Token::from_char(' '), None);
    }
}
