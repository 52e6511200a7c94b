//! SHA3-256 derivations with fixed ASCII domain tags.

use alloc::vec::Vec;

use num_bigint::BigUint;
use sha3::{Digest, Sha3_256};

pub const TAG_P: &[u8] = b"IBC.p";
pub const TAG_K: &[u8] = b"IBC.K";
pub const TAG_C: &[u8] = b"IBC.C";
pub const TAG_T: &[u8] = b"IBC.t";
pub const TAG_B: &[u8] = b"IBC.B";
pub const TAG_Q: &[u8] = b"IBC.q";
pub const TAG_CHECK: &[u8] = b"IBC.check";
pub const TAG_OSC_PHI: &[u8] = b"IBC.osc.phi";
pub const TAG_OSC_PSI: &[u8] = b"IBC.osc.psi";
pub const TAG_PRF: &[u8] = b"IBC.prf";

pub type Digest32 = [u8; 32];

/// `SHA3-256(part_0 ‖ part_1 ‖ …)`.
pub fn sha3_concat(parts: &[&[u8]]) -> Digest32 {
    let mut h = Sha3_256::new();
    for p in parts {
        h.update(p);
    }
    h.finalize().into()
}

/// `H(tag ‖ S ‖ z)` read as a big-endian integer.
pub fn tagged_int(tag: &[u8], secret: &[u8], nonce: &[u8]) -> BigUint {
    BigUint::from_bytes_be(&sha3_concat(&[tag, secret, nonce]))
}

/// Length-prefixed (u16, big-endian) minimal encoding of an integer, so that
/// concatenated integers stay unambiguous.
pub fn encode_uint(v: &BigUint) -> Vec<u8> {
    let raw = if v.bits() == 0 { Vec::new() } else { v.to_bytes_be() };
    let len = u16::try_from(raw.len()).expect("integer wider than 65535 bytes");
    let mut out = Vec::with_capacity(raw.len() + 2);
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(&raw);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha3_empty_vector() {
        let d = sha3_concat(&[]);
        assert_eq!(d[..4], [0xa7, 0xff, 0xc6, 0xf8]);
        assert_eq!(d[28..], [0x80, 0xf8, 0x43, 0x4a]);
    }

    #[test]
    fn concatenation_is_plain() {
        assert_eq!(sha3_concat(&[b"ab", b"c"]), sha3_concat(&[b"abc"]));
    }

    #[test]
    fn uint_encoding() {
        assert_eq!(encode_uint(&BigUint::from(0u8)), [0, 0]);
        assert_eq!(encode_uint(&BigUint::from(258u16)), [0, 2, 1, 2]);
    }
}
