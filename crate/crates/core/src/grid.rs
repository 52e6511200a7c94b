//! Points of the rational grid `Z + (1/K)·Z`, kept both as an exact
//! fraction (for oscillator indexing) and as a field image (for arithmetic).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;

use crate::modmath::{FieldElem, ModError, Modulus};

/// `t = numer / denom` together with `t mod M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPoint {
    numer: BigInt,
    denom: BigUint,
    image: FieldElem,
}

impl EvalPoint {
    /// Grid point `numer / denom`; requires `gcd(denom, M) = 1`.
    pub fn new(numer: BigInt, denom: BigUint, modulus: &Modulus) -> Result<Self, ModError> {
        let image = crate::modmath::reduce_rational(&BigInt::from(0), &numer, &denom, modulus)?;
        Ok(EvalPoint { numer, denom, image })
    }

    /// The point `B + i/K`, i.e. numerator `B·K + i`.
    pub fn from_parts(b: &BigInt, i: &BigInt, k: &BigUint, modulus: &Modulus) -> Result<Self, ModError> {
        let image = crate::modmath::reduce_rational(b, i, k, modulus)?;
        let numer = b * BigInt::from_biguint(Sign::Plus, k.clone()) + i;
        Ok(EvalPoint { numer, denom: k.clone(), image })
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    /// `t mod M`.
    pub fn image(&self) -> &FieldElem {
        &self.image
    }

    pub fn is_singular(&self) -> bool {
        self.image.is_zero()
    }

    /// `⌊t⌋`, Euclidean.
    pub fn floor(&self) -> BigInt {
        self.numer.div_floor(&self.denom_int())
    }

    /// Fractional numerator `i = n - ⌊t⌋·K`, always in `[0, K)`.
    pub fn frac_numer(&self) -> BigUint {
        self.numer.mod_floor(&self.denom_int()).to_biguint().expect("mod_floor is non-negative")
    }

    /// `t + delta` for an integer shift.
    pub fn shifted(&self, delta: &BigInt) -> EvalPoint {
        let numer = &self.numer + delta * self.denom_int();
        let image = &self.image + &self.image.modulus().elem(delta);
        EvalPoint { numer, denom: self.denom.clone(), image }
    }

    pub fn shifted_u64(&self, delta: u64) -> EvalPoint {
        self.shifted(&BigInt::from(delta))
    }

    fn denom_int(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.denom.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_grid_point() {
        let m = Modulus::from_u64(257).unwrap();
        let t = EvalPoint::new(BigInt::from(3), BigUint::from(4u8), &m).unwrap();
        assert_eq!(t.image().to_u64(), Some(65));
        let t1 = t.shifted_u64(35);
        assert_eq!(t1.numer(), &BigInt::from(143));
        assert_eq!(t1.floor(), BigInt::from(35));
        assert_eq!(t1.frac_numer(), BigUint::from(3u8));
        let direct = EvalPoint::from_parts(&BigInt::from(35), &BigInt::from(3), &BigUint::from(4u8), &m).unwrap();
        assert_eq!(direct, t1);
    }

    #[test]
    fn negative_points_floor_down() {
        let m = Modulus::from_u64(257).unwrap();
        let t = EvalPoint::new(BigInt::from(-3), BigUint::from(4u8), &m).unwrap();
        assert_eq!(t.floor(), BigInt::from(-1));
        assert_eq!(t.frac_numer(), BigUint::from(1u8));
        assert_eq!((t.image() * &m.elem_u64(4)).to_u64(), Some(254));
    }
}
