//! Binary to redundant-binary recoding.
//!
//! A redundant binary number (RBN) uses radix 2 with the digit set
//! {-1, 0, +1}. A run of `k > 1` ones starting at bit `i` has value
//! `2^(k+i) - 2^i`, so it can be sent as a single `+1` at position `k + i`
//! and a single `-1` at position `i` with silence in between. When zero
//! symbols cost no transmit energy this removes `k - 2` energized symbols
//! per run.
//!
//! The encoder runs two single lsb-to-msb passes:
//!
//! 1. [`replace_runs`]: every maximal run of `k > 1` ones becomes
//!    `+1 0 .. 0 -1`; isolated ones are copied.
//! 2. [`fold_pairs`]: every `-1` sitting directly above a `+1` (the pattern
//!    `1̄1`, msb-left) becomes `0 1̄`.
//!
//! Encoder output always has exactly `n + 1` digits for an `n`-bit input;
//! the top digit is the carry slot and is `0` unless a run ends at the msb.
//! [`decode_rbn`] inverts the encoder with a one-flag state machine and
//! drops the carry slot again.
//!
//! Digit sequences are stored lsb-first (index 0 is the least significant
//! position). Text forms are msb-left.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};

/// UTF-8 rendering of the digit `-1`: `1` followed by a combining macron.
pub const NEG_ONE_TEXT: &str = "1\u{0304}";

/// ASCII alias accepted (and optionally emitted) for `-1`.
pub const NEG_ONE_ASCII: char = 'T';

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("invalid character {ch:?} at offset {offset}")]
    InvalidChar { ch: char, offset: usize },
    #[error("invalid hex input")]
    InvalidHex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    /// Opposite-sign digits are adjacent; the encoder never emits this.
    #[error("non-canonical digit pair above position {0}")]
    NonCanonical(usize),
    /// The run flag was still set after the msb: the string has a negative value.
    #[error("run flag still set after the most significant digit")]
    UnterminatedRun,
    /// The decoded value does not fit below the carry slot.
    #[error("value overflows the carry slot")]
    CarryOverflow,
    /// Encoder output always carries at least the carry slot.
    #[error("empty RBN string has no carry slot")]
    MissingCarrySlot,
}

/// A finite binary string, index 0 = least significant bit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: alloc::vec![false; len] }
    }

    pub fn ones(len: usize) -> Self {
        Self { bits: alloc::vec![true; len] }
    }

    /// Builds from bits given lsb-first.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self { bits: bits.into_iter().collect() }
    }

    /// The low `len` bits of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        Self::from_bits((0..len).map(|i| i < 64 && (value >> i) & 1 == 1))
    }

    /// Raw octets: bit 0 of octet 0 is the lsb of the string.
    pub fn from_octets(octets: &[u8]) -> Self {
        Self::from_bits(octets.iter().flat_map(|&b| (0..8).map(move |j| (b >> j) & 1 == 1)))
    }

    /// Parses msb-left `0`/`1` text. ASCII whitespace and `_` are ignored.
    pub fn parse_msb(text: &str) -> Result<Self, ParseError> {
        let mut bits = Vec::with_capacity(text.len());
        for (offset, ch) in text.char_indices() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_ascii_whitespace() || c == '_' => {}
                c => return Err(ParseError::InvalidChar { ch: c, offset }),
            }
        }
        bits.reverse();
        Ok(Self { bits })
    }

    /// Parses hex octets (`"ab01"`), same octet order as [`from_octets`](Self::from_octets).
    pub fn parse_hex(text: &str) -> Result<Self, ParseError> {
        let digits: Vec<u8> = text
            .chars()
            .filter(|c| !c.is_ascii_whitespace() && *c != ':')
            .map(|c| c.to_digit(16).map(|d| d as u8).ok_or(ParseError::InvalidHex))
            .collect::<Result<_, _>>()?;
        if digits.len() % 2 != 0 {
            return Err(ParseError::InvalidHex);
        }
        let octets: Vec<u8> = digits.chunks(2).map(|p| (p[0] << 4) | p[1]).collect();
        Ok(Self::from_octets(&octets))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + ExactSizeIterator + '_ {
        self.bits.iter().copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Sub-string `[start, end)` in lsb-first indexing.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        Self { bits: self.bits[start..end].to_vec() }
    }

    /// Splits into consecutive frames of `frame_bits`; the last one may be short.
    pub fn frames(&self, frame_bits: usize) -> impl Iterator<Item = BitString> + '_ {
        assert!(frame_bits > 0, "frame size must be positive");
        self.bits.chunks(frame_bits).map(|c| BitString { bits: c.to_vec() })
    }

    /// Packs into octets, zero-padding the final octet.
    pub fn to_octets(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|c| c.iter().enumerate().fold(0u8, |acc, (j, &b)| acc | ((b as u8) << j)))
            .collect()
    }

    pub fn into_vec(self) -> Vec<bool> {
        self.bits
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_msb(s)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bits(iter)
    }
}

/// One redundant-binary digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(i8)]
pub enum RbnDigit {
    Neg = -1,
    Zero = 0,
    Pos = 1,
}

impl RbnDigit {
    pub fn value(self) -> i8 {
        self as i8
    }

    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            -1 => Some(Self::Neg),
            0 => Some(Self::Zero),
            1 => Some(Self::Pos),
            _ => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Self::Zero
    }

    pub fn negate(self) -> Self {
        match self {
            Self::Neg => Self::Pos,
            Self::Zero => Self::Zero,
            Self::Pos => Self::Neg,
        }
    }
}

impl From<bool> for RbnDigit {
    fn from(bit: bool) -> Self {
        if bit {
            Self::Pos
        } else {
            Self::Zero
        }
    }
}

/// A redundant-binary string, index 0 = least significant digit.
///
/// `canonical` is set only by [`encode_rbn`]; strings built by hand or parsed
/// from text start out non-canonical even when they happen to satisfy the
/// adjacency rule (see [`RbnString::has_canonical_form`]).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RbnString {
    digits: Vec<RbnDigit>,
    canonical: bool,
}

impl RbnString {
    pub fn from_digits<I: IntoIterator<Item = RbnDigit>>(digits: I) -> Self {
        Self { digits: digits.into_iter().collect(), canonical: false }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_digits(core::iter::repeat(RbnDigit::Zero).take(len))
    }

    /// Parses msb-left text over `0`, `1`, `1̄` and `T`. Whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut digits = Vec::with_capacity(text.len());
        let mut chars = text.char_indices().peekable();
        while let Some((offset, ch)) = chars.next() {
            match ch {
                '0' => digits.push(RbnDigit::Zero),
                '1' => {
                    if matches!(chars.peek(), Some((_, '\u{0304}'))) {
                        chars.next();
                        digits.push(RbnDigit::Neg);
                    } else {
                        digits.push(RbnDigit::Pos);
                    }
                }
                NEG_ONE_ASCII => digits.push(RbnDigit::Neg),
                c if c.is_whitespace() || c == '_' => {}
                c => return Err(ParseError::InvalidChar { ch: c, offset }),
            }
        }
        digits.reverse();
        Ok(Self::from_digits(digits))
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn digits(&self) -> &[RbnDigit] {
        &self.digits
    }

    pub fn get(&self, index: usize) -> Option<RbnDigit> {
        self.digits.get(index).copied()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = RbnDigit> + ExactSizeIterator + '_ {
        self.digits.iter().copied()
    }

    /// Position of the lower digit of the first adjacent opposite-sign pair.
    pub fn first_forbidden_pair(&self) -> Option<usize> {
        self.digits.windows(2).position(|w| w[0].value() * w[1].value() == -1)
    }

    /// True when no `+1` is adjacent to a `-1`.
    pub fn has_canonical_form(&self) -> bool {
        self.first_forbidden_pair().is_none()
    }

    /// msb-left text with `T` for `-1`.
    pub fn to_ascii_string(&self) -> String {
        self.digits
            .iter()
            .rev()
            .map(|d| match d {
                RbnDigit::Neg => NEG_ONE_ASCII,
                RbnDigit::Zero => '0',
                RbnDigit::Pos => '1',
            })
            .collect()
    }

    pub fn into_digits(self) -> Vec<RbnDigit> {
        self.digits
    }
}

impl fmt::Display for RbnString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits.iter().rev() {
            f.write_str(match d {
                RbnDigit::Neg => NEG_ONE_TEXT,
                RbnDigit::Zero => "0",
                RbnDigit::Pos => "1",
            })?;
        }
        Ok(())
    }
}

impl FromStr for RbnString {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Replaces every maximal run of `k > 1` ones starting at bit `i` by `+1` at
/// `i + k` and `-1` at `i`. Output has `input.len() + 1` digits.
///
/// One lsb-to-msb pass; a `+1` placed by a run is not merged with an
/// isolated one directly above it (`1011` becomes `0110T`).
pub fn replace_runs(input: &BitString) -> RbnString {
    let bits = input.as_slice();
    let n = bits.len();
    let mut out = alloc::vec![RbnDigit::Zero; n + 1];
    let mut i = 0;
    while i < n {
        if !bits[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && bits[i] {
            i += 1;
        }
        if i - start == 1 {
            out[start] = RbnDigit::Pos;
        } else {
            out[start] = RbnDigit::Neg;
            out[i] = RbnDigit::Pos;
        }
    }
    RbnString::from_digits(out)
}

/// Rewrites each `-1` at `p + 1` over `+1` at `p` into `0` over `-1`, in a
/// single lsb-to-msb pass. Value-preserving; never adds non-zero digits.
pub fn fold_pairs(input: &RbnString) -> RbnString {
    let mut digits = input.digits.clone();
    for p in 0..digits.len().saturating_sub(1) {
        if digits[p + 1] == RbnDigit::Neg && digits[p] == RbnDigit::Pos {
            digits[p + 1] = RbnDigit::Zero;
            digits[p] = RbnDigit::Neg;
        }
    }
    RbnString::from_digits(digits)
}

/// Recodes an `n`-bit frame into its canonical `n + 1`-digit RBN form.
pub fn encode_rbn(input: &BitString) -> RbnString {
    let mut out = fold_pairs(&replace_runs(input));
    assert!(out.has_canonical_form(), "encoder produced an opposite-sign adjacency for {input}");
    out.canonical = true;
    out
}

/// Encodes each `frame_bits`-sized frame on its own; runs never span frames.
pub fn encode_framed(input: &BitString, frame_bits: usize) -> Vec<RbnString> {
    input.frames(frame_bits).map(|f| encode_rbn(&f)).collect()
}

/// Output of the bare run-flag state machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDecode {
    /// One bit per input digit, carry slot included.
    pub bits: BitString,
    /// Run flag after the last digit; set means the value was negative.
    pub runflag: bool,
}

/// Runs the receiver's run-flag scan without any validation.
///
/// The flag is a borrow: a `-1` opens a run (emits 1), zeros inside a run
/// emit 1, a `+1` closes it (emits 0). A `-1` inside a run emits 0 and keeps
/// the run open, which undoes the fold step.
pub fn decode_raw(input: &RbnString) -> RawDecode {
    let mut runflag = false;
    let mut bits = Vec::with_capacity(input.len());
    for d in input.iter() {
        let bit = match (d, runflag) {
            (RbnDigit::Neg, false) => {
                runflag = true;
                true
            }
            (RbnDigit::Neg, true) => false,
            (RbnDigit::Pos, true) => {
                runflag = false;
                false
            }
            (RbnDigit::Pos, false) => true,
            (RbnDigit::Zero, flag) => flag,
        };
        bits.push(bit);
    }
    RawDecode { bits: BitString { bits }, runflag }
}

/// Converts canonical encoder output back to the original `n`-bit frame,
/// dropping the carry slot.
pub fn decode_rbn(input: &RbnString) -> Result<BitString, DecodeError> {
    if input.is_empty() {
        return Err(DecodeError::MissingCarrySlot);
    }
    if let Some(p) = input.first_forbidden_pair() {
        return Err(DecodeError::NonCanonical(p));
    }
    let RawDecode { mut bits, runflag } = decode_raw(input);
    if runflag {
        return Err(DecodeError::UnterminatedRun);
    }
    if bits.bits.pop() == Some(true) {
        return Err(DecodeError::CarryOverflow);
    }
    Ok(bits)
}

/// `Σ b_i 2^i`.
pub fn value_of_bits(input: &BitString) -> BigUint {
    BigUint::from_bytes_le(&input.to_octets())
}

/// `Σ d_i 2^i`, summed independently of the decoder.
pub fn value_of_rbn(input: &RbnString) -> BigInt {
    let pos = BitString::from_bits(input.iter().map(|d| d == RbnDigit::Pos));
    let neg = BitString::from_bits(input.iter().map(|d| d == RbnDigit::Neg));
    BigInt::from(value_of_bits(&pos)) - BigInt::from(value_of_bits(&neg))
}

/// Number of non-zero digits.
pub fn weight(input: &RbnString) -> usize {
    input.iter().filter(|d| !d.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use num_bigint::BigInt;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn rbn(s: &str) -> RbnString {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip_and_aliases() {
        let r = rbn("10T100T");
        assert_eq!(r.to_string(), "101\u{304}1001\u{304}");
        assert_eq!(rbn(&r.to_string()), r);
        assert_eq!(r.to_ascii_string(), "10T100T");
        assert_eq!(rbn("1 0 1\u{304}"), rbn("10T"));
        assert!(matches!(RbnString::parse("12"), Err(ParseError::InvalidChar { ch: '2', offset: 1 })));
        assert_eq!(bits("110").get(0), Some(false));
        assert_eq!(bits("110").get(2), Some(true));
    }

    #[test]
    fn octet_bit_order() {
        let b = BitString::from_octets(&[0x01, 0x80]);
        assert_eq!(b.len(), 16);
        assert_eq!(b.get(0), Some(true));
        assert_eq!(b.get(15), Some(true));
        assert_eq!(b.to_octets(), [0x01, 0x80]);
        assert_eq!(BitString::parse_hex("01 80").unwrap(), b);
        assert_eq!(BitString::parse_hex("1"), Err(ParseError::InvalidHex));
    }

    #[test]
    fn replace_runs_examples() {
        assert_eq!(replace_runs(&bits("110111")), rbn("10T100T"));
        assert_eq!(replace_runs(&bits("111")), rbn("100T"));
        assert_eq!(replace_runs(&BitString::zeros(8)), RbnString::zeros(9));
        // carry-created +1 is not merged with the isolated 1 above it
        assert_eq!(replace_runs(&bits("1011")), rbn("0110T"));
        assert_eq!(replace_runs(&BitString::new()), rbn("0"));
    }

    #[test]
    fn fold_pairs_examples() {
        assert_eq!(fold_pairs(&rbn("10T100T")), rbn("100T00T"));
        assert_eq!(fold_pairs(&rbn("0101T")), rbn("0101T"));
        assert_eq!(fold_pairs(&rbn("T10T1")), rbn("0T00T"));
    }

    #[test]
    fn encode_examples() {
        let e = encode_rbn(&bits("110111"));
        assert_eq!(e, {
            let mut r = rbn("100T00T");
            r.canonical = true;
            r
        });
        assert!(e.is_canonical());
        assert_eq!(encode_rbn(&BitString::zeros(8)).to_ascii_string(), "000000000");
        let e = encode_rbn(&bits("100010110"));
        assert_eq!(e.to_ascii_string(), "01000110T0");
        assert_eq!(value_of_rbn(&e), BigInt::from(278));
    }

    #[test]
    fn weight_of_11011011() {
        // 256 - 32 - 4 - 1: four non-zero digits
        let e = encode_rbn(&bits("11011011"));
        assert_eq!(e.to_ascii_string(), "100T00T0T");
        assert_eq!(value_of_rbn(&e), BigInt::from(219));
        assert_eq!(weight(&e), 4);
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_rbn(&rbn("100T")).unwrap(), bits("111"));
        assert_eq!(decode_rbn(&RbnString::zeros(5)).unwrap(), BitString::zeros(4));
        assert_eq!(decode_rbn(&rbn("100T00T")).unwrap(), bits("110111"));
    }

    #[test]
    fn decode_rejects_foreign_strings() {
        assert_eq!(decode_rbn(&rbn("01T")), Err(DecodeError::NonCanonical(0)));
        assert_eq!(decode_rbn(&rbn("0T0")), Err(DecodeError::UnterminatedRun));
        assert_eq!(decode_rbn(&rbn("10")), Err(DecodeError::CarryOverflow));
        assert_eq!(decode_rbn(&RbnString::default()), Err(DecodeError::MissingCarrySlot));
        assert!(decode_raw(&rbn("T")).runflag);
    }

    #[test]
    fn values() {
        assert_eq!(value_of_bits(&bits("111")), BigUint::from(7u32));
        assert_eq!(value_of_bits(&BitString::new()), BigUint::from(0u32));
        assert_eq!(value_of_bits(&bits("100010110")), BigUint::from(278u32));
        assert_eq!(value_of_rbn(&rbn("100T")), BigInt::from(7));
        assert_eq!(value_of_rbn(&RbnString::zeros(3)), BigInt::from(0));
        assert_eq!(value_of_rbn(&rbn("T")), BigInt::from(-1));
        assert_eq!(weight(&rbn("100T")), 2);
        assert_eq!(weight(&RbnString::zeros(4)), 0);
    }

    #[test]
    fn framed_encoding_is_per_frame() {
        let x = bits("1111_0000_1111_1111");
        let frames = encode_framed(&x, 8);
        assert_eq!(frames.len(), 2);
        assert_eq!(frames[0], encode_rbn(&bits("11111111")));
        assert_eq!(frames[1], encode_rbn(&bits("11110000")));
    }
}
