//! The masked generating function
//! `s_M(t) = (p^t + q_i·φ(Ct) + q_j·ψ(Ct)) / t  (mod M)`.
//!
//! `p^t` is not defined for fractional `t`, so it is fixed by a convention.
//! Each convention keeps `p^(t+Δ) = p^t · p^Δ` for integer `Δ`, which is all
//! the invariant needs.

use num_bigint::BigUint;

use crate::grid::EvalPoint;
use crate::kdf::{self, Digest32};
use crate::modmath::{kth_root, FieldElem, ModError, Modulus, RootSearch};
use crate::oscillator::OscMode;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("evaluation point is congruent to 0 mod M")]
    SingularPoint,
    #[error("p has no constructible K-th root mod M")]
    MissingRoot,
    #[error(transparent)]
    Mod(#[from] ModError),
}

/// Key for the fractional-exponent mask `PRF(i, K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskKey(Digest32);

impl MaskKey {
    pub fn from_bytes(key: Digest32) -> Self {
        MaskKey(key)
    }

    /// `H("IBC.prf" ‖ S ‖ z)`.
    pub fn derive(secret: &[u8], nonce: &[u8]) -> Self {
        MaskKey(kdf::sha3_concat(&[kdf::TAG_PRF, secret, nonce]))
    }

    /// `PRF(i, K) = (H(key ‖ enc(i) ‖ enc(K)) mod (M-1)) + 1`, never zero.
    pub fn mask(&self, i: &BigUint, k: &BigUint, modulus: &Modulus) -> FieldElem {
        let digest = kdf::sha3_concat(&[&self.0, &kdf::encode_uint(i), &kdf::encode_uint(k)]);
        let span = modulus.value() - 1u32;
        modulus.elem_biguint(&(BigUint::from_bytes_be(&digest) % span + 1u32))
    }
}

/// How `p^t` is assigned on the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpConvention {
    /// `p^(n/K) := r^n` with `r^K ≡ p`.
    RootBased(FieldElem),
    /// `p^t := A · p^⌊t⌋` for a fixed anchor `A`.
    RelativeScale(FieldElem),
    /// `p^t := p^⌊t⌋ · PRF(i, K)`.
    PrfMasked(MaskKey),
}

impl ExpConvention {
    pub fn root_based(p: &FieldElem, k: &BigUint) -> Result<Self, GenError> {
        match kth_root(p, k)? {
            RootSearch::Found(r) => Ok(ExpConvention::RootBased(r)),
            RootSearch::Absent | RootSearch::Unknown => Err(GenError::MissingRoot),
        }
    }

    pub fn relative_scale(anchor: FieldElem) -> Result<Self, GenError> {
        if !anchor.is_invertible() {
            return Err(ModError::NonInvertible(anchor.value().clone(), anchor.modulus().value().clone()).into());
        }
        Ok(ExpConvention::RelativeScale(anchor))
    }
}

/// `p^⌊t⌋ · mask`.
pub fn masked_exp(p: &FieldElem, t: &EvalPoint, mask: &FieldElem) -> Result<FieldElem, GenError> {
    Ok(p.pow_signed(&t.floor())? * mask)
}

/// `p^t` under `conv`.
pub fn exp_at(conv: &ExpConvention, p: &FieldElem, t: &EvalPoint) -> Result<FieldElem, GenError> {
    match conv {
        ExpConvention::RootBased(r) => Ok(r.pow_signed(t.numer())?),
        ExpConvention::RelativeScale(anchor) => masked_exp(p, t, anchor),
        ExpConvention::PrfMasked(key) => {
            let mask = key.mask(&t.frac_numer(), t.denom(), p.modulus());
            masked_exp(p, t, &mask)
        }
    }
}

/// Everything `s_M` needs for one pair of amplitudes.
#[derive(Debug, Clone, Copy)]
pub struct GenParams<'a> {
    pub p: &'a FieldElem,
    pub q_i: &'a FieldElem,
    pub q_j: &'a FieldElem,
    pub phi: &'a OscMode,
    pub psi: &'a OscMode,
    pub conv: &'a ExpConvention,
}

/// `(p^t + q_i·φ(Ct) + q_j·ψ(Ct)) · (t mod M)^{-1}`.
pub fn s_m(gp: &GenParams<'_>, t: &EvalPoint) -> Result<FieldElem, GenError> {
    if t.is_singular() {
        return Err(GenError::SingularPoint);
    }
    let numer = exp_at(gp.conv, gp.p, t)? + gp.q_i * &gp.phi.eval_at(t) + gp.q_j * &gp.psi.eval_at(t);
    Ok(numer * t.image().inv()?)
}

/// `H(s) · p^i`, the salt-anchored exponential progression.
pub fn salt_generator(h_salt: &FieldElem, p: &FieldElem, i: &BigUint) -> Result<FieldElem, GenError> {
    if !h_salt.is_invertible() {
        return Err(ModError::NonInvertible(h_salt.value().clone(), h_salt.modulus().value().clone()).into());
    }
    Ok(h_salt * &p.pow(i))
}
