//! Silent-zero transmission of redundant-binary (RBN) encoded data.
//!
//! Binary frames are recoded over the digits {-1, 0, +1} so that long runs
//! of ones collapse to two non-zero digits, and zero digits are sent as
//! silence. The crate covers the recoding itself ([`rbn`]), exhaustive
//! run-length statistics ([`runs`]), radio energy pricing ([`energy`]), the
//! MAC frame formats ([`frame`]) and a deterministic discrete-event
//! simulation of the CSMA/CA protocol that carries them ([`sim`]).
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod energy;
pub mod frame;
pub mod rbn;
pub mod runs;
pub mod sim;
pub mod symbol;

pub use rbn::{decode_rbn, encode_rbn, BitString, RbnDigit, RbnString};
pub use symbol::Symbol;
