//! The symmetric scheme: session derivation from `(S, z)`, Alice's message
//! generation, Bob's verification and recovery of `v`, and the 132-byte
//! wire format.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::genfunc::{s_m, ExpConvention, GenError, GenParams, MaskKey};
use crate::grid::EvalPoint;
use crate::invariant::{check_denominator, eval_invariant, recover_v, InvError, InvariantTuple, TupleSource};
use crate::kdf::{self, Digest32};
use crate::modmath::{FieldElem, ModError, Modulus};
use crate::oscillator::{generate, ModeChoice, OscError, OscLabel, OscMode};

pub const NONCE_LEN: usize = 32;
pub const FIELD_LEN: usize = 32;
pub const MESSAGE_LEN: usize = 2 * FIELD_LEN + 4 + NONCE_LEN + 32;

pub type Nonce = [u8; NONCE_LEN];

/// Smallest prime at or above `SHA3-256("IBC.production.M") | 2^255`.
pub const PRODUCTION_MODULUS: &str = "87073689487629259140321112705567283474780311981956865896781770502992906054797";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("modulus must be a prime below 2^256")]
    BadModulus,
    #[error("{0} range is empty or starts below 2")]
    BadRange(&'static str),
    #[error("u_bits must be in 1..=32 and v_bits in 1..=64")]
    BadBits,
    #[error("unsupported hash {0:?}")]
    UnsupportedHash(String),
    #[error(transparent)]
    Mod(#[from] ModError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error("secret must be at least {min} bytes, got {got}")]
    SecretTooShort { min: usize, got: usize },
    #[error("abort: fractional index i = 0")]
    AbortZeroIndex,
    #[error("abort: evaluation point is 0 mod M")]
    AbortSingular,
    #[error("abort: value not invertible mod M")]
    AbortNonInvertible,
    #[error("u must be in [1, 2^{bits})")]
    URange { bits: u32 },
    #[error("v must be below 2^{bits}")]
    VRange { bits: u32 },
    #[error(transparent)]
    Oscillator(#[from] OscError),
}

impl From<GenError> for ProtocolError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::SingularPoint => ProtocolError::AbortSingular,
            GenError::MissingRoot | GenError::Mod(_) => ProtocolError::AbortNonInvertible,
        }
    }
}

impl From<ModError> for ProtocolError {
    fn from(_: ModError) -> Self {
        ProtocolError::AbortNonInvertible
    }
}

/// Why Bob refused a message.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Reject {
    #[error("recovery denominator is not invertible")]
    Denominator,
    #[error("check hash mismatch")]
    Hash,
    #[error("recovered value or spacing out of range")]
    Range,
    #[error("session re-derivation failed: {0}")]
    Session(ProtocolError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("message must be {MESSAGE_LEN} bytes, got {0}")]
    BadLength(usize),
    #[error("field value is not below M")]
    FieldOverflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub name: String,
    pub modulus: Modulus,
    pub k_min: BigUint,
    pub k_max: BigUint,
    pub c_min: BigUint,
    pub c_max: BigUint,
    pub u_bits: u32,
    pub v_bits: u32,
    pub hash: String,
    pub min_secret_len: usize,
    pub osc_mode: ModeChoice,
}

pub const HASH_SHA3_256: &str = "sha3-256";

impl Profile {
    /// `M = 257`, `K ∈ [2, 2^16]`, `C ∈ [2, 2^10]`, 16-bit `u` and `v`.
    pub fn toy() -> Self {
        Profile {
            name: "toy".into(),
            modulus: Modulus::prime(BigUint::from(257u32)).expect("257 is prime"),
            k_min: BigUint::from(2u32),
            k_max: BigUint::one() << 16u32,
            c_min: BigUint::from(2u32),
            c_max: BigUint::one() << 10u32,
            u_bits: 16,
            v_bits: 16,
            hash: HASH_SHA3_256.into(),
            min_secret_len: 8,
            osc_mode: ModeChoice::Auto { table_limit: 1 << 12 },
        }
    }

    /// `M = 17` with every range small enough for exhaustive sweeps.
    pub fn mini() -> Self {
        Profile {
            name: "mini".into(),
            modulus: Modulus::prime(BigUint::from(17u32)).expect("17 is prime"),
            k_min: BigUint::from(2u32),
            k_max: BigUint::from(16u32),
            c_min: BigUint::from(2u32),
            c_max: BigUint::from(16u32),
            u_bits: 8,
            v_bits: 8,
            hash: HASH_SHA3_256.into(),
            min_secret_len: 8,
            osc_mode: ModeChoice::Table,
        }
    }

    /// 256-bit prime, `K ∈ [2^160, 2^256]`, `C ∈ [2^24, 2^32]`.
    pub fn production() -> Self {
        let m: BigUint = PRODUCTION_MODULUS.parse().expect("decimal constant");
        Profile {
            name: "production".into(),
            modulus: Modulus::prime(m).expect("pinned modulus is prime"),
            k_min: BigUint::one() << 160u32,
            k_max: BigUint::one() << 256u32,
            c_min: BigUint::one() << 24u32,
            c_max: BigUint::one() << 32u32,
            u_bits: 32,
            v_bits: 64,
            hash: HASH_SHA3_256.into(),
            min_secret_len: 32,
            osc_mode: ModeChoice::OnDemand,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "toy" => Some(Self::toy()),
            "mini" => Some(Self::mini()),
            "production" => Some(Self::production()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if !self.modulus.is_prime() || self.modulus.bits() > 8 * FIELD_LEN as u64 {
            return Err(ProfileError::BadModulus);
        }
        let two = BigUint::from(2u32);
        if self.k_min < two || self.k_min > self.k_max {
            return Err(ProfileError::BadRange("K"));
        }
        if self.c_min < two || self.c_min > self.c_max {
            return Err(ProfileError::BadRange("C"));
        }
        if !(1..=32).contains(&self.u_bits) || !(1..=64).contains(&self.v_bits) {
            return Err(ProfileError::BadBits);
        }
        if self.hash != HASH_SHA3_256 {
            return Err(ProfileError::UnsupportedHash(self.hash.clone()));
        }
        Ok(())
    }

    pub fn u_limit(&self) -> u64 {
        1u64 << self.u_bits
    }

    /// `2^v_bits`.
    pub fn v_limit(&self) -> u128 {
        1u128 << self.v_bits
    }
}

/// Which amplitude pair an evaluation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Amplitudes {
    /// `(q1, q2)` for `s0`, `s1`.
    First,
    /// `(q3, q4)` for `s2`, `s3`.
    Second,
}

/// All values derived from `(S, z)` under one profile.
#[derive(Debug, Clone)]
pub struct Session {
    secret: Vec<u8>,
    nonce: Nonce,
    u_bits: u32,
    v_bits: u32,
    pub p: FieldElem,
    pub b: FieldElem,
    pub k: BigUint,
    pub c: BigUint,
    pub i: BigUint,
    pub t: EvalPoint,
    pub q: [FieldElem; 4],
    pub phi: OscMode,
    pub psi: OscMode,
    pub conv: ExpConvention,
}

fn draw_range(tag: &[u8], secret: &[u8], nonce: &[u8], lo: &BigUint, hi: &BigUint) -> BigUint {
    let span = hi - lo + 1u32;
    kdf::tagged_int(tag, secret, nonce) % span + lo
}

/// Derives the session. Fails with an abort on `i = 0` or a singular base point.
pub fn derive_session(secret: &[u8], nonce: &Nonce, profile: &Profile) -> Result<Session, ProtocolError> {
    if secret.len() < profile.min_secret_len {
        return Err(ProtocolError::SecretTooShort { min: profile.min_secret_len, got: secret.len() });
    }
    let m = &profile.modulus;
    let two = BigUint::from(2u32);
    let p = m.elem_biguint(&(kdf::tagged_int(kdf::TAG_P, secret, nonce) % (m.value() - &two) + &two));
    let k = draw_range(kdf::TAG_K, secret, nonce, &profile.k_min, &profile.k_max);
    let c = draw_range(kdf::TAG_C, secret, nonce, &profile.c_min, &profile.c_max);
    if (&k % m.value()).is_zero() {
        return Err(ProtocolError::AbortNonInvertible);
    }
    let i = kdf::tagged_int(kdf::TAG_T, secret, nonce) % &k;
    if i.is_zero() {
        return Err(ProtocolError::AbortZeroIndex);
    }
    let b_raw = kdf::tagged_int(kdf::TAG_B, secret, nonce) % m.value();
    let b = m.elem_biguint(&b_raw);
    let t = EvalPoint::from_parts(&BigInt::from(b_raw), &BigInt::from(i.clone()), &k, m)?;
    if t.is_singular() {
        return Err(ProtocolError::AbortSingular);
    }
    let q = core::array::from_fn(|idx| {
        let d = kdf::sha3_concat(&[kdf::TAG_Q, secret, nonce, &[idx as u8 + 1]]);
        m.elem_from_be_bytes(&d)
    });
    let phi = generate(secret, nonce, OscLabel::Phi, &k, &c, m, profile.osc_mode)?;
    let psi = generate(secret, nonce, OscLabel::Psi, &k, &c, m, profile.osc_mode)?;
    Ok(Session {
        secret: secret.to_vec(),
        nonce: *nonce,
        u_bits: profile.u_bits,
        v_bits: profile.v_bits,
        p,
        b,
        k,
        c,
        i,
        t,
        q,
        phi,
        psi,
        conv: ExpConvention::PrfMasked(MaskKey::derive(secret, nonce)),
    })
}

impl Session {
    pub fn nonce(&self) -> &Nonce {
        &self.nonce
    }

    pub fn modulus(&self) -> &Modulus {
        self.p.modulus()
    }

    /// `s_M(t + offset)` with the chosen amplitude pair.
    pub fn eval(&self, offset: &BigUint, amps: Amplitudes) -> Result<FieldElem, GenError> {
        let (q_i, q_j) = match amps {
            Amplitudes::First => (&self.q[0], &self.q[1]),
            Amplitudes::Second => (&self.q[2], &self.q[3]),
        };
        let gp = GenParams { p: &self.p, q_i, q_j, phi: &self.phi, psi: &self.psi, conv: &self.conv };
        let point = self.t.shifted(&BigInt::from_biguint(Sign::Plus, offset.clone()));
        s_m(&gp, &point)
    }

    /// `s0 = s_M(t)`.
    pub fn s0(&self) -> Result<FieldElem, GenError> {
        self.eval(&BigUint::zero(), Amplitudes::First)
    }

    /// `s2 = s_M(t + 2u)`.
    pub fn s2(&self, u: u64) -> Result<FieldElem, GenError> {
        self.eval(&(BigUint::from(u) << 1u32), Amplitudes::Second)
    }

    /// `H("IBC.check" ‖ S ‖ v ‖ s1 ‖ s3 ‖ u ‖ z)` with fixed-width fields.
    pub fn check_hash(&self, v: u64, s1: &FieldElem, s3: &FieldElem, u: u32) -> Digest32 {
        check_hash(&self.secret, v, s1, s3, u, &self.nonce)
    }
}

impl TupleSource for Session {
    fn tuple(&self, u: u64, v: u64) -> Result<InvariantTuple, GenError> {
        let d1 = BigUint::from(v) * 2u32 + 1u32;
        let d2 = BigUint::from(u) << 1u32;
        let d3 = &d2 + &d1;
        let s = [
            self.s0()?,
            self.eval(&d1, Amplitudes::First)?,
            self.eval(&d2, Amplitudes::Second)?,
            self.eval(&d3, Amplitudes::Second)?,
        ];
        Ok(InvariantTuple { s, t: self.t.image().clone(), u, v })
    }
}

pub fn check_hash(secret: &[u8], v: u64, s1: &FieldElem, s3: &FieldElem, u: u32, nonce: &Nonce) -> Digest32 {
    let s1b = s1.to_be_bytes_padded(FIELD_LEN).expect("field element fits 32 bytes");
    let s3b = s3.to_be_bytes_padded(FIELD_LEN).expect("field element fits 32 bytes");
    kdf::sha3_concat(&[kdf::TAG_CHECK, secret, &v.to_be_bytes(), &s1b, &s3b, &u.to_be_bytes(), nonce])
}

/// The transmitted tuple `⟨s1, s3, u, z, H_check⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub s1: FieldElem,
    pub s3: FieldElem,
    pub u: u32,
    pub z: Nonce,
    pub h_check: Digest32,
}

impl Message {
    /// `s1 ‖ s3 ‖ u ‖ z ‖ h`, all big-endian.
    pub fn to_bytes(&self) -> [u8; MESSAGE_LEN] {
        let mut out = [0u8; MESSAGE_LEN];
        let s1 = self.s1.to_be_bytes_padded(FIELD_LEN).expect("field element fits 32 bytes");
        let s3 = self.s3.to_be_bytes_padded(FIELD_LEN).expect("field element fits 32 bytes");
        out[..32].copy_from_slice(&s1);
        out[32..64].copy_from_slice(&s3);
        out[64..68].copy_from_slice(&self.u.to_be_bytes());
        out[68..100].copy_from_slice(&self.z);
        out[100..].copy_from_slice(&self.h_check);
        out
    }

    pub fn from_bytes(bytes: &[u8], modulus: &Modulus) -> Result<Self, DecodeError> {
        if bytes.len() != MESSAGE_LEN {
            return Err(DecodeError::BadLength(bytes.len()));
        }
        let field = |b: &[u8]| modulus.try_elem(BigUint::from_bytes_be(b)).ok_or(DecodeError::FieldOverflow);
        let mut z = [0u8; NONCE_LEN];
        z.copy_from_slice(&bytes[68..100]);
        let mut h_check = [0u8; 32];
        h_check.copy_from_slice(&bytes[100..]);
        Ok(Message {
            s1: field(&bytes[..32])?,
            s3: field(&bytes[32..64])?,
            u: u32::from_be_bytes(bytes[64..68].try_into().expect("4 bytes")),
            z,
            h_check,
        })
    }
}

/// Alice's steps: evaluate the four points, check invertibility, bind with the hash.
pub fn alice_generate(sess: &Session, u: u64, v: u64) -> Result<Message, ProtocolError> {
    if u == 0 || u >= (1u64 << sess.u_bits) {
        return Err(ProtocolError::URange { bits: sess.u_bits });
    }
    if u128::from(v) >= (1u128 << sess.v_bits) {
        return Err(ProtocolError::VRange { bits: sess.v_bits });
    }
    let tu = sess.tuple(u, v)?;
    if !check_denominator(tu.s1(), tu.s3(), &sess.p, u) || eval_invariant(&tu).is_err() {
        return Err(ProtocolError::AbortNonInvertible);
    }
    let u32v = u as u32;
    let h_check = sess.check_hash(v, tu.s1(), tu.s3(), u32v);
    Ok(Message { s1: tu.s1().clone(), s3: tu.s3().clone(), u: u32v, z: sess.nonce, h_check })
}

/// Integers below `limit` congruent to `v_mod` modulo `M`, in increasing order.
pub fn lift_candidates(v_mod: &FieldElem, limit: u128) -> impl Iterator<Item = u64> {
    let m = v_mod.modulus().value().clone();
    let start = v_mod.value().clone();
    let limit = BigUint::from(limit);
    let step = m;
    let mut cur = Some(start);
    core::iter::from_fn(move || {
        let c = cur.take()?;
        if c >= limit {
            return None;
        }
        let out = u64::try_from(&c).ok()?;
        cur = Some(&c + &step);
        Some(out)
    })
}

/// First lifted `v` whose check hash matches, if any.
pub fn match_lifted(
    sess: &Session,
    v_mod: &FieldElem,
    s1: &FieldElem,
    s3: &FieldElem,
    u: u32,
    h_check: &Digest32,
) -> Result<u64, Reject> {
    let mut any = false;
    for v in lift_candidates(v_mod, 1u128 << sess.v_bits) {
        any = true;
        if sess.check_hash(v, s1, s3, u) == *h_check {
            return Ok(v);
        }
    }
    if any {
        Err(Reject::Hash)
    } else {
        Err(Reject::Range)
    }
}

/// Recomputes the session from `(S, z)` and recovers `v`.
///
/// `v` is solved modulo `M`; when `2^v_bits > M` every lift below the bound
/// is tried against the hash.
pub fn bob_verify(secret: &[u8], msg: &Message, profile: &Profile) -> Result<u64, Reject> {
    let sess = derive_session(secret, &msg.z, profile).map_err(Reject::Session)?;
    let u = u64::from(msg.u);
    if u == 0 || u >= profile.u_limit() {
        return Err(Reject::Range);
    }
    let s0 = sess.s0().map_err(|e| Reject::Session(e.into()))?;
    let s2 = sess.s2(u).map_err(|e| Reject::Session(e.into()))?;
    let v_mod = match recover_v(&s0, &msg.s1, &s2, &msg.s3, sess.t.image(), u, &sess.p) {
        Ok(v) => v,
        Err(InvError::SingularDenominator) => return Err(Reject::Denominator),
        Err(InvError::Mod(e)) => return Err(Reject::Session(e.into())),
    };
    match_lifted(&sess, &v_mod, &msg.s1, &msg.s3, msg.u, &msg.h_check)
}
