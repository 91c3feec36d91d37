use core::fmt;
use core::str::FromStr;

/// Six-octet station address. The high-order bit of the first octet marks
/// a group address; all ones is broadcast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Address(pub [u8; 6]);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed address, expected six colon-separated hex octets")]
pub struct AddressParseError;

impl Address {
    pub const BROADCAST: Address = Address([0xFF; 6]);

    /// Ordinary address carrying `id` in its low 40 bits.
    pub fn from_id(id: u64) -> Self {
        let b = (id & 0xFF_FFFF_FFFF).to_be_bytes();
        Address([0, b[3], b[4], b[5], b[6], b[7]])
    }

    pub fn octets(&self) -> [u8; 6] {
        self.0
    }

    pub fn is_group(&self) -> bool {
        self.0[0] & 0x80 != 0
    }

    pub fn is_broadcast(&self) -> bool {
        *self == Self::BROADCAST
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.0;
        write!(f, "{:02X}:{:02X}:{:02X}:{:02X}:{:02X}:{:02X}", o[0], o[1], o[2], o[3], o[4], o[5])
    }
}

impl FromStr for Address {
    type Err = AddressParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = [0u8; 6];
        let mut parts = s.trim().split([':', '-']);
        for slot in out.iter_mut() {
            let part = parts.next().ok_or(AddressParseError)?;
            if part.len() != 2 {
                return Err(AddressParseError);
            }
            *slot = u8::from_str_radix(part, 16).map_err(|_| AddressParseError)?;
        }
        if parts.next().is_some() {
            return Err(AddressParseError);
        }
        Ok(Address(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parse_and_display() {
        let a: Address = "00:00:00:00:00:01".parse().unwrap();
        assert_eq!(a, Address::from_id(1));
        assert_eq!(a.to_string(), "00:00:00:00:00:01");
        assert!("ff-ff-ff-ff-ff-ff".parse::<Address>().unwrap().is_broadcast());
        assert!("00:00:00:00:00".parse::<Address>().is_err());
        assert!("00:00:00:00:00:00:00".parse::<Address>().is_err());
        assert!("0g:00:00:00:00:00".parse::<Address>().is_err());
    }

    #[test]
    fn group_bit() {
        assert!(Address::BROADCAST.is_group());
        assert!(Address([0x80, 0, 0, 0, 0, 0]).is_group());
        assert!(!Address::from_id(0xFF_FFFF_FFFF).is_group());
    }
}
