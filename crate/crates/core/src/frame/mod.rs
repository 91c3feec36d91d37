//! Data and control frame formats.
//!
//! Data frame, in transmission order:
//!
//! ```text
//! preamble  2 octets  0xAA 0xAA
//! dest      6 octets
//! src       6 octets
//! type      1 octet   code in the two high bits, low six bits zero
//! length    2 octets  payload octets before encoding, big-endian
//! sync      2 octets  0xAA 0xAA
//! payload   8·length + 1 RBN digits, most significant first
//! checksum  4 octets  CRC-32 of the payload bits, big-endian
//! ```
//!
//! Control frames (RTS, CTS, ACK) are entirely binary:
//! `preamble | dest | src | type | length | checksum`, with the CRC taken over
//! dest through length.
//!
//! Octets go on air least significant bit first, one energized symbol per
//! bit (see [`crate::symbol`]).

mod address;
mod crc;

use alloc::vec::Vec;

pub use address::{Address, AddressParseError};
pub use crc::{crc32, crc32_octets};

use crate::energy::DeviceProfile;
use crate::rbn::{decode_raw, decode_rbn, encode_rbn, BitString, DecodeError, RbnString};
use crate::symbol::Symbol;

pub const PREAMBLE: [u8; 2] = [0xAA, 0xAA];
pub const SYNC: [u8; 2] = [0xAA, 0xAA];
pub const MAX_PAYLOAD_OCTETS: usize = 1500;

/// preamble + dest + src + type + length + sync
pub const DATA_HEADER_OCTETS: usize = 2 + 6 + 6 + 1 + 2 + 2;
pub const DATA_HEADER_BITS: usize = 8 * DATA_HEADER_OCTETS;
pub const TRAILER_OCTETS: usize = 4;
pub const TRAILER_BITS: usize = 8 * TRAILER_OCTETS;
/// preamble + dest + src + type + length + checksum
pub const CONTROL_OCTETS: usize = 2 + 6 + 6 + 1 + 2 + 4;
pub const CONTROL_SYMBOLS: usize = 8 * CONTROL_OCTETS;

/// On-air symbols of a data frame carrying `payload_octets`.
pub const fn data_frame_symbols(payload_octets: usize) -> usize {
    DATA_HEADER_BITS + 8 * payload_octets + 1 + TRAILER_BITS
}

/// Longest possible frame in symbols.
pub const MAX_FRAME_SYMBOLS: usize = data_frame_symbols(MAX_PAYLOAD_OCTETS);

/// Duration of the longest possible frame, in microseconds.
pub fn max_frame_duration(profile: &DeviceProfile) -> f64 {
    MAX_FRAME_SYMBOLS as f64 * profile.symbol_duration_us
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameType {
    Data,
    Rts,
    Cts,
    Ack,
}

impl FrameType {
    pub fn code(self) -> u8 {
        match self {
            Self::Data => 0b00,
            Self::Rts => 0b01,
            Self::Cts => 0b10,
            Self::Ack => 0b11,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0b00 => Some(Self::Data),
            0b01 => Some(Self::Rts),
            0b10 => Some(Self::Cts),
            0b11 => Some(Self::Ack),
            _ => None,
        }
    }

    /// The on-air type octet: code in the two high bits.
    pub fn octet(self) -> u8 {
        self.code() << 6
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Data => "DATA",
            Self::Rts => "RTS",
            Self::Cts => "CTS",
            Self::Ack => "ACK",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrameError {
    #[error("bad preamble")]
    BadPreamble,
    #[error("bad sync field")]
    BadSync,
    #[error("bad length: expected {expected} symbols, got {actual}")]
    BadLength { expected: usize, actual: usize },
    #[error("checksum mismatch: frame carries {received:#010x}, computed {computed:#010x}")]
    CrcMismatch { received: u32, computed: u32 },
    #[error("type octet {0:#04x} has reserved bits set")]
    BadTypeOctet(u8),
    #[error("expected a {expected} frame, found {found}")]
    WrongType { expected: &'static str, found: &'static str },
    #[error("silent symbol at offset {0} inside a binary field")]
    SilentSymbol(usize),
    #[error("payload of {0} octets exceeds the 1500-octet limit")]
    Oversize(usize),
    #[error("payload of {0} bits is not octet-aligned")]
    Unaligned(usize),
    #[error("payload digits do not decode: {0}")]
    BadPayload(DecodeError),
    #[error("payload digits are not the encoder's form of the decoded bits")]
    NonEncoderPayload,
}

/// A data frame; `payload` is the canonical encoding of `payload_bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataFrame {
    pub dest: Address,
    pub src: Address,
    pub payload_bits: BitString,
    pub payload: RbnString,
    pub checksum: u32,
}

impl DataFrame {
    pub fn length(&self) -> u16 {
        (self.payload_bits.len() / 8) as u16
    }

    /// Header octets: preamble through sync.
    pub fn header_octets(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(DATA_HEADER_OCTETS);
        out.extend_from_slice(&PREAMBLE);
        out.extend_from_slice(&self.dest.0);
        out.extend_from_slice(&self.src.0);
        out.push(FrameType::Data.octet());
        out.extend_from_slice(&self.length().to_be_bytes());
        out.extend_from_slice(&SYNC);
        out
    }

    pub fn trailer_octets(&self) -> [u8; 4] {
        self.checksum.to_be_bytes()
    }

    /// The frame as buffered before encoding: header, binary payload, trailer.
    pub fn octets(&self) -> Vec<u8> {
        let mut out = self.header_octets();
        out.extend(self.payload_bits.to_octets());
        out.extend_from_slice(&self.trailer_octets());
        out
    }

    /// On-air stream: binary header, RBN payload msb first, binary trailer.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(data_frame_symbols(self.payload_bits.len() / 8));
        push_octets(&mut out, &self.header_octets());
        out.extend(self.payload.iter().rev().map(Symbol::from_digit));
        push_octets(&mut out, &self.trailer_octets());
        out
    }
}

/// An RTS, CTS or ACK frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ControlFrame {
    pub kind: FrameType,
    pub dest: Address,
    pub src: Address,
    /// Payload octets the sender intends to send; zero when none.
    pub length: u16,
    pub checksum: u32,
}

impl ControlFrame {
    fn covered_octets(kind: FrameType, dest: Address, src: Address, length: u16) -> [u8; 15] {
        let mut out = [0u8; 15];
        out[..6].copy_from_slice(&dest.0);
        out[6..12].copy_from_slice(&src.0);
        out[12] = kind.octet();
        out[13..].copy_from_slice(&length.to_be_bytes());
        out
    }

    pub fn octets(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(CONTROL_OCTETS);
        out.extend_from_slice(&PREAMBLE);
        out.extend_from_slice(&Self::covered_octets(self.kind, self.dest, self.src, self.length));
        out.extend_from_slice(&self.checksum.to_be_bytes());
        out
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(CONTROL_SYMBOLS);
        push_octets(&mut out, &self.octets());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Frame {
    Data(DataFrame),
    Control(ControlFrame),
}

impl Frame {
    pub fn kind(&self) -> FrameType {
        match self {
            Frame::Data(_) => FrameType::Data,
            Frame::Control(c) => c.kind,
        }
    }

    pub fn dest(&self) -> Address {
        match self {
            Frame::Data(d) => d.dest,
            Frame::Control(c) => c.dest,
        }
    }

    pub fn src(&self) -> Address {
        match self {
            Frame::Data(d) => d.src,
            Frame::Control(c) => c.src,
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        match self {
            Frame::Data(d) => d.symbols(),
            Frame::Control(c) => c.symbols(),
        }
    }
}

fn push_octets(out: &mut Vec<Symbol>, octets: &[u8]) {
    for &b in octets {
        out.extend((0..8).map(|j| Symbol::from_bit((b >> j) & 1 == 1)));
    }
}

/// Reads one lsb-first octet; `Err(offset)` on a silent symbol.
fn read_octet(symbols: &[Symbol], at: usize) -> Result<u8, usize> {
    let mut b = 0u8;
    for j in 0..8 {
        match symbols[at + j].to_bit() {
            Some(bit) => b |= (bit as u8) << j,
            None => return Err(at + j),
        }
    }
    Ok(b)
}

fn read_octets<const N: usize>(symbols: &[Symbol], at: usize) -> Result<[u8; N], usize> {
    let mut out = [0u8; N];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = read_octet(symbols, at + 8 * i)?;
    }
    Ok(out)
}

pub fn build_data_frame(
    dest: Address,
    src: Address,
    payload_bits: &BitString,
) -> Result<DataFrame, FrameError> {
    let n = payload_bits.len();
    if n % 8 != 0 {
        return Err(FrameError::Unaligned(n));
    }
    if n / 8 > MAX_PAYLOAD_OCTETS {
        return Err(FrameError::Oversize(n / 8));
    }
    Ok(DataFrame {
        dest,
        src,
        payload_bits: payload_bits.clone(),
        payload: encode_rbn(payload_bits),
        checksum: crc32(payload_bits),
    })
}

pub fn build_control_frame(kind: FrameType, dest: Address, src: Address, length: u16) -> ControlFrame {
    assert!(kind != FrameType::Data, "data frames are built with build_data_frame");
    let checksum = crc32_octets(&ControlFrame::covered_octets(kind, dest, src, length));
    ControlFrame { kind, dest, src, length, checksum }
}

struct Header {
    dest: Address,
    src: Address,
    kind: FrameType,
    length: u16,
}

/// Parses the fields shared by both frame classes, up to and including length.
fn parse_common_header(symbols: &[Symbol]) -> Result<Header, FrameError> {
    const COMMON: usize = 8 * (2 + 6 + 6 + 1 + 2);
    if symbols.len() < COMMON {
        return Err(FrameError::BadLength { expected: COMMON, actual: symbols.len() });
    }
    let preamble: [u8; 2] = read_octets(symbols, 0).map_err(|_| FrameError::BadPreamble)?;
    if preamble != PREAMBLE {
        return Err(FrameError::BadPreamble);
    }
    let fields: [u8; 15] = read_octets(symbols, 16).map_err(FrameError::SilentSymbol)?;
    let type_octet = fields[12];
    if type_octet & 0x3F != 0 {
        return Err(FrameError::BadTypeOctet(type_octet));
    }
    let kind = FrameType::from_code(type_octet >> 6).expect("two-bit code");
    Ok(Header {
        dest: Address(fields[..6].try_into().unwrap()),
        src: Address(fields[6..12].try_into().unwrap()),
        kind,
        length: u16::from_be_bytes([fields[13], fields[14]]),
    })
}

pub fn parse_data_frame(symbols: &[Symbol]) -> Result<DataFrame, FrameError> {
    let header = parse_common_header(symbols)?;
    if header.kind != FrameType::Data {
        return Err(FrameError::WrongType { expected: "DATA", found: header.kind.name() });
    }
    let octets = header.length as usize;
    if octets > MAX_PAYLOAD_OCTETS {
        return Err(FrameError::Oversize(octets));
    }
    let expected = data_frame_symbols(octets);
    if symbols.len() != expected {
        return Err(FrameError::BadLength { expected, actual: symbols.len() });
    }
    let sync: [u8; 2] = read_octets(symbols, DATA_HEADER_BITS - 16).map_err(|_| FrameError::BadSync)?;
    if sync != SYNC {
        return Err(FrameError::BadSync);
    }
    let payload_end = DATA_HEADER_BITS + 8 * octets + 1;
    let payload =
        RbnString::from_digits(symbols[DATA_HEADER_BITS..payload_end].iter().rev().map(|s| s.to_digit()));
    let received = u32::from_be_bytes(read_octets(symbols, payload_end).map_err(FrameError::SilentSymbol)?);

    // CRC first, over the bits the run-flag scan yields, so that garbled
    // digits surface as a checksum failure.
    let raw = decode_raw(&payload);
    let computed = crc32(&raw.bits.slice(0, 8 * octets));
    if computed != received {
        return Err(FrameError::CrcMismatch { received, computed });
    }
    let payload_bits = decode_rbn(&payload).map_err(FrameError::BadPayload)?;
    let canonical = encode_rbn(&payload_bits);
    if canonical.digits() != payload.digits() {
        return Err(FrameError::NonEncoderPayload);
    }
    Ok(DataFrame { dest: header.dest, src: header.src, payload_bits, payload: canonical, checksum: received })
}

pub fn parse_control_frame(symbols: &[Symbol]) -> Result<ControlFrame, FrameError> {
    let header = parse_common_header(symbols)?;
    if header.kind == FrameType::Data {
        return Err(FrameError::WrongType { expected: "control", found: "DATA" });
    }
    if symbols.len() != CONTROL_SYMBOLS {
        return Err(FrameError::BadLength { expected: CONTROL_SYMBOLS, actual: symbols.len() });
    }
    let received = u32::from_be_bytes(
        read_octets(symbols, CONTROL_SYMBOLS - TRAILER_BITS).map_err(FrameError::SilentSymbol)?,
    );
    let computed =
        crc32_octets(&ControlFrame::covered_octets(header.kind, header.dest, header.src, header.length));
    if computed != received {
        return Err(FrameError::CrcMismatch { received, computed });
    }
    Ok(ControlFrame {
        kind: header.kind,
        dest: header.dest,
        src: header.src,
        length: header.length,
        checksum: received,
    })
}

/// Parses either frame class, dispatching on the type field.
pub fn parse_frame(symbols: &[Symbol]) -> Result<Frame, FrameError> {
    match parse_common_header(symbols)?.kind {
        FrameType::Data => parse_data_frame(symbols).map(Frame::Data),
        _ => parse_control_frame(symbols).map(Frame::Control),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::format_symbols;

    fn addr(id: u64) -> Address {
        Address::from_id(id)
    }

    #[test]
    fn layout_sizes() {
        assert_eq!(DATA_HEADER_BITS, 152);
        assert_eq!(CONTROL_SYMBOLS, 168);
        assert_eq!(MAX_FRAME_SYMBOLS, 152 + 32 + 12001);
    }

    #[test]
    fn max_duration_maxim_2820() {
        assert_eq!(max_frame_duration(&DeviceProfile::maxim_2820()), 243_700.0);
        for p in DeviceProfile::builtin() {
            let zero = data_frame_symbols(0) as f64 * p.symbol_duration_us;
            assert!(zero < max_frame_duration(&p));
            assert_eq!(max_frame_duration(&p) / p.symbol_duration_us, MAX_FRAME_SYMBOLS as f64);
        }
    }

    #[test]
    fn ff_payload() {
        let f = build_data_frame(addr(2), addr(1), &BitString::from_octets(&[0xFF])).unwrap();
        assert_eq!(f.length(), 1);
        assert_eq!(f.payload.to_ascii_string(), "10000000T");
        let syms = f.symbols();
        let payload = &syms[DATA_HEADER_BITS..DATA_HEADER_BITS + 9];
        assert_eq!(format_symbols(payload), "+0000000-");
    }

    #[test]
    fn empty_payload() {
        let f = build_data_frame(addr(2), addr(1), &BitString::new()).unwrap();
        assert_eq!(f.length(), 0);
        assert_eq!(f.payload.len(), 1);
        assert_eq!(f.checksum, crc32(&BitString::new()));
        assert_eq!(parse_data_frame(&f.symbols()).unwrap(), f);
    }

    #[test]
    fn build_errors() {
        let err = build_data_frame(addr(2), addr(1), &BitString::zeros(12));
        assert_eq!(err, Err(FrameError::Unaligned(12)));
        let err = build_data_frame(addr(2), addr(1), &BitString::zeros(8 * 1501));
        assert_eq!(err, Err(FrameError::Oversize(1501)));
        assert!(build_data_frame(addr(2), addr(1), &BitString::zeros(8 * 1500)).is_ok());
    }

    #[test]
    fn parse_errors_are_distinct() {
        let f = build_data_frame(addr(2), addr(1), &BitString::from_octets(&[0x12, 0x34])).unwrap();
        let good = f.symbols();

        let mut s = good.clone();
        s[3] = s[3].to_bit().map(|b| Symbol::from_bit(!b)).unwrap();
        assert_eq!(parse_data_frame(&s), Err(FrameError::BadPreamble));

        let mut s = good.clone();
        s[DATA_HEADER_BITS - 1] = Symbol::Silent;
        assert_eq!(parse_data_frame(&s), Err(FrameError::BadSync));

        let s = &good[..good.len() - 5];
        assert!(matches!(parse_data_frame(s), Err(FrameError::BadLength { .. })));
        assert!(matches!(parse_data_frame(&good[..40]), Err(FrameError::BadLength { .. })));

        let mut s = good.clone();
        let i = s.len() - 1;
        s[i] = Symbol::from_bit(s[i] != Symbol::Plus);
        assert!(matches!(parse_data_frame(&s), Err(FrameError::CrcMismatch { .. })));

        let mut s = good.clone();
        s[16 + 96 + 1] = Symbol::Plus; // reserved bit of the type octet
        assert!(matches!(parse_data_frame(&s), Err(FrameError::BadTypeOctet(_))));

        let rts = build_control_frame(FrameType::Rts, addr(2), addr(1), 2).symbols();
        assert!(matches!(parse_data_frame(&rts), Err(FrameError::WrongType { .. })));
    }

    #[test]
    fn nonzero_payload_symbol_dropped_to_silence_fails_crc() {
        let f = build_data_frame(addr(2), addr(1), &BitString::from_octets(&[0xAB, 0x7E, 0x01])).unwrap();
        let good = f.symbols();
        let payload = DATA_HEADER_BITS..DATA_HEADER_BITS + f.payload.len();
        for i in payload.filter(|&i| good[i].is_energized()) {
            let mut s = good.clone();
            s[i] = Symbol::Silent;
            assert!(matches!(parse_data_frame(&s), Err(FrameError::CrcMismatch { .. })), "symbol {i}");
        }
    }

    #[test]
    fn foreign_payload_with_matching_crc_is_rejected() {
        // 0111 and 100T both carry the value 7
        let bits = BitString::from_octets(&[0x07]);
        let f = build_data_frame(addr(2), addr(1), &bits).unwrap();
        let mut s = f.symbols();
        let start = DATA_HEADER_BITS;
        let foreign = "000000111";
        for (i, c) in foreign.chars().enumerate() {
            s[start + i] = if c == '1' { Symbol::Plus } else { Symbol::Silent };
        }
        assert_eq!(parse_data_frame(&s), Err(FrameError::NonEncoderPayload));
    }

    #[test]
    fn control_frames() {
        for kind in [FrameType::Rts, FrameType::Cts, FrameType::Ack] {
            let c = build_control_frame(kind, addr(7), addr(9), 1500);
            let s = c.symbols();
            assert_eq!(s.len(), CONTROL_SYMBOLS);
            assert_eq!(parse_control_frame(&s).unwrap(), c);
            assert_eq!(parse_frame(&s).unwrap(), Frame::Control(c));
        }
        let ack = build_control_frame(FrameType::Ack, addr(1), addr(2), 0);
        assert_eq!(parse_control_frame(&ack.symbols()).unwrap().length, 0);

        let data = build_data_frame(addr(1), addr(2), &BitString::new()).unwrap();
        assert!(matches!(parse_control_frame(&data.symbols()), Err(FrameError::WrongType { .. })));

        let mut s = ack.symbols();
        s[20] = Symbol::from_bit(s[20] != Symbol::Plus);
        assert!(matches!(parse_control_frame(&s), Err(FrameError::CrcMismatch { .. })));
    }
}
