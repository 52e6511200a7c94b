//! Antiperiodic pseudorandom oscillators on the grid `(1/K)·Z`.
//!
//! A seed of `P = K·C` values covers one antiperiod. Index `j` maps to
//! `(-1)^⌊j/P⌋ · seed[j mod P]` with Euclidean division, so
//! `f(j + P) = -f(j)` and `f(j + 2P) = f(j)` hold on all of `Z`.
//!
//! Seeds come either from a precomputed table or from a keyed PRF evaluated
//! per index. Both read entry `r` as `SHA3-256(key ‖ enc(r)) mod M`, so the
//! two modes agree everywhere.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::grid::EvalPoint;
use crate::kdf::{self, Digest32};
use crate::modmath::{FieldElem, Modulus};

/// Largest table (in entries) the table mode will materialize.
pub const MAX_TABLE_LEN: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OscError {
    #[error("oscillator table of {0} entries exceeds the {MAX_TABLE_LEN}-entry limit")]
    SeedTooLarge(BigUint),
    #[error("seed has {got} values, expected P = K·C = {expected}")]
    LengthMismatch { expected: BigUint, got: usize },
    #[error("grid parameters K and C must be positive")]
    ZeroPeriod,
    #[error("line {line}: not a decimal integer")]
    Parse { line: usize },
}

/// Which of the two oscillators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscLabel {
    Phi,
    Psi,
}

impl OscLabel {
    pub fn tag(self) -> &'static [u8] {
        match self {
            OscLabel::Phi => kdf::TAG_OSC_PHI,
            OscLabel::Psi => kdf::TAG_OSC_PSI,
        }
    }
}

/// How [`generate`] should realize the oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeChoice {
    Table,
    OnDemand,
    /// Table when `P <= table_limit` (capped at [`MAX_TABLE_LEN`]).
    Auto {
        table_limit: u64,
    },
}

/// An explicit seed table `values[0..P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OscSeed {
    values: Vec<FieldElem>,
    k: BigUint,
    c: BigUint,
}

impl OscSeed {
    pub fn new(values: Vec<FieldElem>, k: BigUint, c: BigUint) -> Result<Self, OscError> {
        if k.is_zero() || c.is_zero() {
            return Err(OscError::ZeroPeriod);
        }
        let expected = &k * &c;
        if BigUint::from(values.len()) != expected {
            return Err(OscError::LengthMismatch { expected, got: values.len() });
        }
        Ok(OscSeed { values, k, c })
    }

    /// Seed from small signed integers, reduced into `Z_M`.
    pub fn from_signed(values: &[i64], k: u64, c: u64, modulus: &Modulus) -> Result<Self, OscError> {
        let values = values.iter().map(|&v| modulus.elem_i64(v)).collect();
        Self::new(values, BigUint::from(k), BigUint::from(c))
    }

    pub fn values(&self) -> &[FieldElem] {
        &self.values
    }

    /// One canonical decimal value per line.
    pub fn to_decimal_lines(&self) -> String {
        let mut out = String::new();
        for v in &self.values {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    /// Parses decimal integers (signed allowed), one per non-empty line.
    pub fn from_decimal_lines(text: &str, k: BigUint, c: BigUint, modulus: &Modulus) -> Result<Self, OscError> {
        let mut values = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v = BigInt::parse_bytes(line.as_bytes(), 10).ok_or(OscError::Parse { line: idx + 1 })?;
            values.push(modulus.elem(&v));
        }
        Self::new(values, k, c)
    }
}

/// Per-index keyed PRF: entry `r` is `SHA3-256(key ‖ enc(r)) mod M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OscPrf {
    key: Digest32,
    k: BigUint,
    c: BigUint,
    modulus: Modulus,
}

impl OscPrf {
    pub fn new(key: Digest32, k: BigUint, c: BigUint, modulus: Modulus) -> Result<Self, OscError> {
        if k.is_zero() || c.is_zero() {
            return Err(OscError::ZeroPeriod);
        }
        Ok(OscPrf { key, k, c, modulus })
    }

    /// Oscillator key `H(tag ‖ S ‖ z)`.
    pub fn derive_key(secret: &[u8], nonce: &[u8], label: OscLabel) -> Digest32 {
        kdf::sha3_concat(&[label.tag(), secret, nonce])
    }

    /// Seed entry at `r ∈ [0, P)`.
    pub fn entry(&self, r: &BigUint) -> FieldElem {
        let digest = kdf::sha3_concat(&[&self.key, &kdf::encode_uint(r)]);
        self.modulus.elem_from_be_bytes(&digest)
    }

    /// Materializes the whole antiperiod as a table.
    pub fn to_table(&self) -> Result<OscSeed, OscError> {
        let p = &self.k * &self.c;
        let len = p.to_u64().filter(|&n| n <= MAX_TABLE_LEN).ok_or_else(|| OscError::SeedTooLarge(p.clone()))?;
        let values = (0..len).map(|r| self.entry(&BigUint::from(r))).collect();
        OscSeed::new(values, self.k.clone(), self.c.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OscMode {
    Table(OscSeed),
    OnDemand(OscPrf),
}

/// Builds the oscillator for `label` from `(S, z)`.
pub fn generate(
    secret: &[u8],
    nonce: &[u8],
    label: OscLabel,
    k: &BigUint,
    c: &BigUint,
    modulus: &Modulus,
    choice: ModeChoice,
) -> Result<OscMode, OscError> {
    let prf = OscPrf::new(OscPrf::derive_key(secret, nonce, label), k.clone(), c.clone(), modulus.clone())?;
    let p = k * c;
    let use_table = match choice {
        ModeChoice::Table => true,
        ModeChoice::OnDemand => false,
        ModeChoice::Auto { table_limit } => p <= BigUint::from(table_limit.min(MAX_TABLE_LEN)),
    };
    if use_table {
        Ok(OscMode::Table(prf.to_table()?))
    } else {
        Ok(OscMode::OnDemand(prf))
    }
}

impl OscMode {
    pub fn k(&self) -> &BigUint {
        match self {
            OscMode::Table(s) => &s.k,
            OscMode::OnDemand(p) => &p.k,
        }
    }

    pub fn c(&self) -> &BigUint {
        match self {
            OscMode::Table(s) => &s.c,
            OscMode::OnDemand(p) => &p.c,
        }
    }

    /// Antiperiod length `P = K·C` in grid steps.
    pub fn period_len(&self) -> BigUint {
        self.k() * self.c()
    }

    pub fn is_table(&self) -> bool {
        matches!(self, OscMode::Table(_))
    }

    fn seed_at(&self, r: &BigUint) -> FieldElem {
        match self {
            OscMode::Table(s) => {
                let idx = r.to_usize().expect("table index below P");
                s.values[idx].clone()
            }
            OscMode::OnDemand(p) => p.entry(r),
        }
    }

    /// Value at integer grid index `j`.
    pub fn eval_index(&self, j: &BigInt) -> FieldElem {
        let p = BigInt::from_biguint(Sign::Plus, self.period_len());
        let (block, r) = j.div_mod_floor(&p);
        let v = self.seed_at(&r.to_biguint().expect("mod_floor is non-negative"));
        if block.is_odd() {
            -v
        } else {
            v
        }
    }

    /// Value at argument `C·t`, i.e. index `C·n` for `t = n/K`.
    ///
    /// Panics if `t` lives on a different grid than the oscillator.
    pub fn eval_at(&self, t: &EvalPoint) -> FieldElem {
        assert_eq!(t.denom(), self.k(), "evaluation point is not on the oscillator grid");
        let c = BigInt::from_biguint(Sign::Plus, self.c().clone());
        self.eval_index(&(c * t.numer()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEED: [i64; 8] = [2, -1, 0, 3, -2, 1, 1, -3];

    fn m257() -> Modulus {
        Modulus::from_u64(257).unwrap()
    }

    fn example_osc() -> OscMode {
        OscMode::Table(OscSeed::from_signed(&SEED, 4, 2, &m257()).unwrap())
    }

    /// Explicit two-antiperiod table `[seed, -seed]`, indexed by `j mod 2P`.
    fn unrolled(j: i64) -> i64 {
        let full: Vec<i64> = SEED.iter().copied().chain(SEED.iter().map(|v| -v)).collect();
        full[j.rem_euclid(16) as usize]
    }

    #[test]
    fn example_index_366() {
        let m = m257();
        let v = example_osc().eval_index(&BigInt::from(366));
        assert_eq!(v, m.elem_i64(-1));
        assert_eq!(v.to_u64(), Some(256));
    }

    #[test]
    fn matches_unrolled_table() {
        let m = m257();
        let osc = example_osc();
        assert_eq!(osc.eval_index(&BigInt::from(0)).to_u64(), Some(2));
        for j in -40i64..40 {
            assert_eq!(osc.eval_index(&BigInt::from(j)), m.elem_i64(unrolled(j)), "j={j}");
        }
        assert_eq!(osc.eval_index(&BigInt::from(-2)), m.elem_i64(unrolled(-2)));
        assert_eq!(unrolled(-2), -1);
    }

    #[test]
    fn eval_at_uses_c_times_numerator() {
        let m = m257();
        let osc = example_osc();
        let t = EvalPoint::new(BigInt::from(183), BigUint::from(4u8), &m).unwrap();
        assert_eq!(osc.eval_at(&t), m.elem_i64(-1));
        let t = EvalPoint::new(BigInt::from(0), BigUint::from(4u8), &m).unwrap();
        assert_eq!(osc.eval_at(&t).to_u64(), Some(2));
        let t = EvalPoint::new(BigInt::from(3), BigUint::from(4u8), &m).unwrap();
        assert_eq!(osc.eval_at(&t), m.elem_i64(unrolled(6)));
        assert_eq!(unrolled(6), 1);
    }

    #[test]
    fn generation_is_deterministic_and_label_separated() {
        let m = m257();
        let (k, c) = (BigUint::from(4u8), BigUint::from(2u8));
        let a = generate(b"secret-S", b"nonce-z", OscLabel::Phi, &k, &c, &m, ModeChoice::Table).unwrap();
        let b = generate(b"secret-S", b"nonce-z", OscLabel::Phi, &k, &c, &m, ModeChoice::Table).unwrap();
        assert_eq!(a, b);
        let psi = generate(b"secret-S", b"nonce-z", OscLabel::Psi, &k, &c, &m, ModeChoice::Table).unwrap();
        assert_ne!(a, psi);
    }

    #[test]
    fn table_limit_enforced() {
        let m = m257();
        let k = BigUint::from(1u64 << 11);
        let c = BigUint::from(1u64 << 10);
        let err = generate(b"S", b"z", OscLabel::Phi, &k, &c, &m, ModeChoice::Table).unwrap_err();
        assert!(matches!(err, OscError::SeedTooLarge(_)));
        let auto = generate(b"S", b"z", OscLabel::Phi, &k, &c, &m, ModeChoice::Auto { table_limit: u64::MAX }).unwrap();
        assert!(!auto.is_table());
    }

    #[test]
    fn seed_length_checked() {
        let err = OscSeed::from_signed(&SEED[..7], 4, 2, &m257()).unwrap_err();
        assert!(matches!(err, OscError::LengthMismatch { got: 7, .. }));
    }

    #[test]
    fn decimal_lines_round_trip() {
        let m = m257();
        let seed = OscSeed::from_signed(&SEED, 4, 2, &m).unwrap();
        let text = seed.to_decimal_lines();
        assert!(text.starts_with("2\n256\n0\n3\n"));
        let back = OscSeed::from_decimal_lines(&text, BigUint::from(4u8), BigUint::from(2u8), &m).unwrap();
        assert_eq!(back, seed);
        let signed = "2\n-1\n0\n3\n-2\n1\n1\n-3\n";
        let parsed = OscSeed::from_decimal_lines(signed, BigUint::from(4u8), BigUint::from(2u8), &m).unwrap();
        assert_eq!(parsed, seed);
        let bad = OscSeed::from_decimal_lines("1\nx\n", BigUint::from(1u8), BigUint::from(2u8), &m);
        assert_eq!(bad.unwrap_err(), OscError::Parse { line: 2 });
    }
}
