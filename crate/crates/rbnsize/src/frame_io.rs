//! Text forms for frames: hex dumps of the buffered octets and the
//! `.symbols` sidecar of the on-air stream.

use rbnsize_core::frame::{
    crc32, Address, DataFrame, FrameType, DATA_HEADER_OCTETS, MAX_PAYLOAD_OCTETS, PREAMBLE, SYNC,
    TRAILER_OCTETS,
};
use rbnsize_core::rbn::{encode_rbn, BitString};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HexDumpError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BufferError {
    #[error("buffer of {0} octets is shorter than a data frame header and trailer")]
    Short(usize),
    #[error("bad preamble")]
    BadPreamble,
    #[error("bad sync field")]
    BadSync,
    #[error("type octet {0:#04x} is not a data frame")]
    NotData(u8),
    #[error("length field says {field} payload octets, buffer holds {actual}")]
    Length { field: usize, actual: usize },
    #[error("checksum mismatch: buffer carries {received:#010x}, computed {computed:#010x}")]
    Crc { received: u32, computed: u32 },
}

/// `offset: xx xx ...` lines of 16 octets.
pub fn format_hex_dump(octets: &[u8]) -> String {
    let mut out = String::new();
    for (i, chunk) in octets.chunks(16).enumerate() {
        out.push_str(&format!("{:08x}:", i * 16));
        for b in chunk {
            out.push_str(&format!(" {b:02x}"));
        }
        out.push('\n');
    }
    out
}

/// Reads a dump written by [`format_hex_dump`]. Offsets are optional but
/// must be consistent when present; `#` starts a comment.
pub fn parse_hex_dump(text: &str) -> Result<Vec<u8>, HexDumpError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let bad = |msg: String| HexDumpError::Malformed { line, msg };
        let mut body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some((offset, rest)) = body.split_once(':') {
            let offset = usize::from_str_radix(offset.trim(), 16)
                .map_err(|_| bad(format!("bad offset {offset:?}")))?;
            if offset != out.len() {
                return Err(bad(format!("offset {offset:#x} but {:#x} octets read so far", out.len())));
            }
            body = rest;
        }
        for tok in body.split_whitespace() {
            if tok.len() != 2 {
                return Err(bad(format!("expected two hex digits, got {tok:?}")));
            }
            out.push(u8::from_str_radix(tok, 16).map_err(|_| bad(format!("bad octet {tok:?}")))?);
        }
    }
    Ok(out)
}

/// Rebuilds a data frame from its buffered octets (header, binary payload,
/// trailer), checking every fixed field and the checksum.
pub fn data_frame_from_octets(octets: &[u8]) -> Result<DataFrame, BufferError> {
    if octets.len() < DATA_HEADER_OCTETS + TRAILER_OCTETS {
        return Err(BufferError::Short(octets.len()));
    }
    if octets[..2] != PREAMBLE {
        return Err(BufferError::BadPreamble);
    }
    if octets[14] != FrameType::Data.octet() {
        return Err(BufferError::NotData(octets[14]));
    }
    if octets[17..19] != SYNC {
        return Err(BufferError::BadSync);
    }
    let field = u16::from_be_bytes([octets[15], octets[16]]) as usize;
    let actual = octets.len() - DATA_HEADER_OCTETS - TRAILER_OCTETS;
    if field != actual || field > MAX_PAYLOAD_OCTETS {
        return Err(BufferError::Length { field, actual });
    }
    let payload_bits = BitString::from_octets(&octets[DATA_HEADER_OCTETS..DATA_HEADER_OCTETS + actual]);
    let tail = &octets[octets.len() - TRAILER_OCTETS..];
    let received = u32::from_be_bytes(tail.try_into().expect("four octets"));
    let computed = crc32(&payload_bits);
    if received != computed {
        return Err(BufferError::Crc { received, computed });
    }
    Ok(DataFrame {
        dest: Address(octets[2..8].try_into().unwrap()),
        src: Address(octets[8..14].try_into().unwrap()),
        payload: encode_rbn(&payload_bits),
        payload_bits,
        checksum: received,
    })
}

/// Wraps sidecar text at `width` characters per line.
pub fn wrap(text: &str, width: usize) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len() + text.len() / width + 1);
    for line in chars.chunks(width) {
        out.extend(line);
        out.push('\n');
    }
    out
}
