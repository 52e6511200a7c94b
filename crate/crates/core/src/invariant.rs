//! The four-point invariant
//!
//! ```text
//! I = (s0·t + s1·(t+2v+1)) / (s2·(t+2u) + s3·(t+2u+2v+1)) ≡ p^(-2u)  (mod M)
//! ```
//!
//! with `s0..s3` the generating function at `t`, `t+2v+1`, `t+2u`,
//! `t+2u+2v+1`. Oscillator terms cancel pairwise because each pair is an
//! odd number of antiperiods apart.

pub mod analytic;

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::genfunc::GenError;
use crate::modmath::{FieldElem, ModError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvError {
    #[error("invariant denominator is not invertible mod M")]
    SingularDenominator,
    #[error(transparent)]
    Mod(#[from] ModError),
}

/// Four evaluations plus the offsets that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTuple {
    pub s: [FieldElem; 4],
    /// Field image of the base point `t`.
    pub t: FieldElem,
    pub u: u64,
    pub v: u64,
}

impl InvariantTuple {
    pub fn s0(&self) -> &FieldElem {
        &self.s[0]
    }
    pub fn s1(&self) -> &FieldElem {
        &self.s[1]
    }
    pub fn s2(&self) -> &FieldElem {
        &self.s[2]
    }
    pub fn s3(&self) -> &FieldElem {
        &self.s[3]
    }
}

/// Anything that can produce honest tuples for given spacings.
pub trait TupleSource {
    fn tuple(&self, u: u64, v: u64) -> Result<InvariantTuple, GenError>;
}

pub fn eval_invariant(tu: &InvariantTuple) -> Result<FieldElem, InvError> {
    let m = tu.t.modulus();
    let t = &tu.t;
    let d1 = m.elem_biguint(&(BigUint::from(tu.v) * 2u32 + 1u32));
    let d2 = m.elem_biguint(&(BigUint::from(tu.u) * 2u32));
    let d3 = &d2 + &d1;
    let num = tu.s0() * t + tu.s1() * &(t + &d1);
    let den = tu.s2() * &(t + &d2) + tu.s3() * &(t + &d3);
    let den_inv = den.inv().map_err(|_| InvError::SingularDenominator)?;
    Ok(num * den_inv)
}

/// `p^(-2u) mod M`.
pub fn expected_constant(p: &FieldElem, u: u64) -> Result<FieldElem, ModError> {
    p_pow_2u(p, u).inv()
}

fn p_pow_2u(p: &FieldElem, u: u64) -> FieldElem {
    p.pow(&(BigUint::from(u) << 1u32))
}

fn recovery_denominator(s1: &FieldElem, s3: &FieldElem, p2u: &FieldElem) -> FieldElem {
    let two = s1.modulus().elem_u64(2);
    two * (s1 * p2u - s3)
}

/// True iff `D = 2(s1·p^(2u) - s3)` is a unit mod `M`.
pub fn check_denominator(s1: &FieldElem, s3: &FieldElem, p: &FieldElem, u: u64) -> bool {
    recovery_denominator(s1, s3, &p_pow_2u(p, u)).is_invertible()
}

/// Solves the invariant for `v`:
///
/// ```text
/// v ≡ (-s0·p^{2u}·t - s1·p^{2u}·(t+1) + s2·(t+2u) + s3·(t+2u+1)) / (2(s1·p^{2u} - s3))
/// ```
pub fn recover_v(
    s0: &FieldElem,
    s1: &FieldElem,
    s2: &FieldElem,
    s3: &FieldElem,
    t: &FieldElem,
    u: u64,
    p: &FieldElem,
) -> Result<FieldElem, InvError> {
    let m = t.modulus();
    let p2u = p_pow_2u(p, u);
    let den_inv = recovery_denominator(s1, s3, &p2u).inv().map_err(|_| InvError::SingularDenominator)?;
    let one = m.one();
    let two_u = m.elem_biguint(&(BigUint::from(u) << 1u32));
    let t_2u = t + &two_u;
    let num = s2 * &t_2u + s3 * &(&t_2u + &one) - &p2u * &(s0 * t + s1 * &(t + &one));
    Ok(num * den_inv)
}

/// The `(s1, s3)` pairs for each `v` in `v_list`; all share the invariant
/// value `p^(-2u)` with the session's `s0`, `s2`.
pub fn enumerate_fiber<S: TupleSource + ?Sized>(
    src: &S,
    u: u64,
    v_list: &[u64],
) -> Result<Vec<(FieldElem, FieldElem)>, GenError> {
    v_list.iter().map(|&v| src.tuple(u, v).map(|tu| (tu.s1().clone(), tu.s3().clone()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modmath::Modulus;

    fn m257() -> Modulus {
        Modulus::from_u64(257).unwrap()
    }

    /// Builds an honest tuple directly from the closed form, with arbitrary
    /// oscillator contributions that cancel in pairs.
    fn closed_form_tuple(m: &Modulus, p: u64, base: u64, t: u64, u: u64, v: u64, osc: [u64; 2]) -> InvariantTuple {
        let p = m.elem_u64(p);
        let t = m.elem_u64(t);
        let base = m.elem_u64(base);
        let offsets = [0, 2 * v + 1, 2 * u, 2 * u + 2 * v + 1];
        let oscs = [m.elem_u64(osc[0]), -m.elem_u64(osc[0]), m.elem_u64(osc[1]), -m.elem_u64(osc[1])];
        let s = core::array::from_fn(|k| {
            let point = &t + &m.elem_u64(offsets[k]);
            (&base * &p.pow_u64(offsets[k]) + oscs[k].clone()) * point.inv().unwrap()
        });
        InvariantTuple { s, t, u, v }
    }

    #[test]
    fn expected_constant_examples() {
        let m = m257();
        let c = expected_constant(&m.elem_u64(3), 1).unwrap();
        assert_eq!(c.to_u64(), Some(200));
        assert_eq!(9 * 200 % 257, 1);
        assert!(expected_constant(&m.one(), 17).unwrap().is_one());
        let c = expected_constant(&m.elem_u64(3), 5).unwrap();
        let p10 = (0..10).fold(1u64, |a, _| a * 3 % 257);
        let oracle = (1..257u64).find(|x| x * p10 % 257 == 1).unwrap();
        assert_eq!(c.to_u64(), Some(oracle));
        assert!(expected_constant(&m.zero(), 1).is_err());
    }

    #[test]
    fn closed_form_tuple_satisfies_invariant_and_recovers() {
        let m = m257();
        for (t, u, v) in [(10u64, 5u64, 17u64), (3, 1, 0), (200, 7, 100)] {
            let tu = closed_form_tuple(&m, 3, 77, t, u, v, [11, 40]);
            assert_eq!(eval_invariant(&tu).unwrap(), expected_constant(&m.elem_u64(3), u).unwrap());
            let got = recover_v(tu.s0(), tu.s1(), tu.s2(), tu.s3(), &tu.t, u, &m.elem_u64(3)).unwrap();
            assert_eq!(got.to_u64(), Some(v % 257));
        }
    }

    #[test]
    fn singular_denominators() {
        let m = m257();
        let tu = InvariantTuple { s: [m.one(), m.one(), m.zero(), m.zero()], t: m.elem_u64(5), u: 1, v: 0 };
        assert_eq!(eval_invariant(&tu), Err(InvError::SingularDenominator));

        let p = m.elem_u64(3);
        let s1 = m.elem_u64(42);
        let s3 = &s1 * &p.pow_u64(2);
        assert!(!check_denominator(&s1, &s3, &p, 1));
        assert!(check_denominator(&s1, &(&s3 + &m.one()), &p, 1));
        let err = recover_v(&m.one(), &s1, &m.one(), &s3, &m.elem_u64(5), 1, &p);
        assert_eq!(err, Err(InvError::SingularDenominator));
    }

    #[test]
    fn tampered_s3_changes_recovery() {
        let m = m257();
        let tu = closed_form_tuple(&m, 5, 9, 21, 4, 13, [3, 250]);
        let bad = tu.s3() + &m.one();
        let got = recover_v(tu.s0(), tu.s1(), tu.s2(), &bad, &tu.t, 4, &m.elem_u64(5)).unwrap();
        assert_ne!(got.to_u64(), Some(13));
    }
}
