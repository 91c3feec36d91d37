//! IEEE 802.3 CRC-32: polynomial 0x04C11DB7, reflected input and output,
//! initial value and final XOR all ones.

use crate::rbn::BitString;

/// Reversed form of 0x04C11DB7.
const POLY_REFLECTED: u32 = 0xEDB8_8320;

const TABLE: [u32; 256] = {
    let mut table = [0u32; 256];
    let mut i = 0;
    while i < 256 {
        let mut c = i as u32;
        let mut j = 0;
        while j < 8 {
            c = if c & 1 != 0 { (c >> 1) ^ POLY_REFLECTED } else { c >> 1 };
            j += 1;
        }
        table[i] = c;
        i += 1;
    }
    table
};

/// Bit-serial CRC over a bit string, lsb first. Agrees with [`crc32_octets`]
/// on octet-aligned input and also covers lengths that are not multiples of 8.
pub fn crc32(bits: &BitString) -> u32 {
    let mut crc = u32::MAX;
    for bit in bits.iter() {
        crc ^= bit as u32;
        crc = if crc & 1 != 0 { (crc >> 1) ^ POLY_REFLECTED } else { crc >> 1 };
    }
    !crc
}

/// Table-driven CRC over octets.
pub fn crc32_octets(octets: &[u8]) -> u32 {
    let crc = octets.iter().fold(u32::MAX, |crc, &b| TABLE[((crc ^ b as u32) & 0xFF) as usize] ^ (crc >> 8));
    !crc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_values() {
        assert_eq!(crc32_octets(b"123456789"), 0xCBF4_3926);
        assert_eq!(crc32(&BitString::from_octets(b"123456789")), 0xCBF4_3926);
        assert_eq!(crc32_octets(&[]), 0);
        assert_eq!(crc32(&BitString::new()), 0);
    }

    #[test]
    fn every_single_bit_flip_changes_the_crc() {
        let data = b"redundant binary";
        let reference = crc32_octets(data);
        let bits = BitString::from_octets(data);
        for i in 0..bits.len() {
            let flipped: BitString = bits.iter().enumerate().map(|(j, b)| b ^ (i == j)).collect();
            assert_ne!(crc32(&flipped), reference, "flip at bit {i}");
        }
    }
}
