//! On-air symbols.
//!
//! The channel carries three symbol levels: two energized ones and silence.
//! RBN payload digits map one-to-one (`+1`, `-1`, `0`). Binary header and
//! trailer bits use the two energized levels (`1` as `+`, `0` as `-`), so
//! every binary field is energy-based and only RBN zeros are silent.

use alloc::string::String;
use alloc::vec::Vec;

use crate::rbn::{ParseError, RbnDigit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Plus,
    Silent,
    Minus,
}

impl Symbol {
    pub fn is_energized(self) -> bool {
        self != Self::Silent
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Self::Plus
        } else {
            Self::Minus
        }
    }

    /// Binary reading of an energized symbol; `None` for silence.
    pub fn to_bit(self) -> Option<bool> {
        match self {
            Self::Plus => Some(true),
            Self::Minus => Some(false),
            Self::Silent => None,
        }
    }

    pub fn from_digit(d: RbnDigit) -> Self {
        match d {
            RbnDigit::Pos => Self::Plus,
            RbnDigit::Zero => Self::Silent,
            RbnDigit::Neg => Self::Minus,
        }
    }

    pub fn to_digit(self) -> RbnDigit {
        match self {
            Self::Plus => RbnDigit::Pos,
            Self::Silent => RbnDigit::Zero,
            Self::Minus => RbnDigit::Neg,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Self::Plus => '+',
            Self::Silent => '0',
            Self::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '+' => Some(Self::Plus),
            '0' => Some(Self::Silent),
            '-' => Some(Self::Minus),
            _ => None,
        }
    }
}

/// Sidecar text form: one character per symbol from `{+, 0, -}`.
pub fn format_symbols(symbols: &[Symbol]) -> String {
    symbols.iter().map(|s| s.to_char()).collect()
}

/// Inverse of [`format_symbols`]; whitespace is skipped.
pub fn parse_symbols(text: &str) -> Result<Vec<Symbol>, ParseError> {
    text.char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(offset, ch)| Symbol::from_char(ch).ok_or(ParseError::InvalidChar { ch, offset }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_text() {
        let s = [Symbol::Plus, Symbol::Silent, Symbol::Minus];
        assert_eq!(format_symbols(&s), "+0-");
        assert_eq!(parse_symbols("+0\n-").unwrap(), s);
        assert!(parse_symbols("+x").is_err());
    }

    #[test]
    fn levels() {
        assert!(Symbol::from_bit(false).is_energized());
        assert_eq!(Symbol::from_bit(true).to_bit(), Some(true));
        assert_eq!(Symbol::Silent.to_bit(), None);
        for d in [RbnDigit::Neg, RbnDigit::Zero, RbnDigit::Pos] {
            assert_eq!(Symbol::from_digit(d).to_digit(), d);
        }
    }
}
