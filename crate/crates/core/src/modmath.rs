//! Exact arithmetic in the residue ring `Z_M`.
//!
//! Every [`FieldElem`] carries a handle to its [`Modulus`] and is kept in
//! canonical form `0 <= value < M`. Signed intermediates are reduced with
//! Euclidean remainder, so `-1` always maps to `M - 1`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sha3::{Digest, Sha3_256};

/// Rounds of Miller–Rabin used for large moduli (error below `2^-128`).
pub const MILLER_RABIN_ROUNDS: usize = 64;

/// Moduli below this bound get an exhaustive k-th root search.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModError {
    #[error("modulus must be at least 3")]
    ModulusTooSmall,
    #[error("modulus {0} is not prime")]
    NotPrime(BigUint),
    #[error("{0} is not invertible modulo {1}")]
    NonInvertible(BigUint, BigUint),
    #[error("operation requires a prime modulus")]
    Unsupported,
}

struct ModulusInner {
    value: BigUint,
    prime: bool,
    byte_len: usize,
}

/// The modulus `M` of the ring all protocol arithmetic runs in.
#[derive(Clone)]
pub struct Modulus(Arc<ModulusInner>);

impl Modulus {
    /// Wraps `value`, recording whether it passes the primality test.
    pub fn new(value: BigUint) -> Result<Self, ModError> {
        if value < BigUint::from(3u8) {
            return Err(ModError::ModulusTooSmall);
        }
        let prime = is_probable_prime(&value);
        let byte_len = value.bits().div_ceil(8) as usize;
        Ok(Modulus(Arc::new(ModulusInner { value, prime, byte_len })))
    }

    /// Like [`Modulus::new`] but rejects composite values.
    pub fn prime(value: BigUint) -> Result<Self, ModError> {
        let m = Self::new(value)?;
        if !m.is_prime() {
            return Err(ModError::NotPrime(m.value().clone()));
        }
        Ok(m)
    }

    pub fn from_u64(value: u64) -> Result<Self, ModError> {
        Self::new(BigUint::from(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.0.value
    }

    pub fn is_prime(&self) -> bool {
        self.0.prime
    }

    pub fn bits(&self) -> u64 {
        self.0.value.bits()
    }

    /// Minimal big-endian width of `M - 1`.
    pub fn byte_len(&self) -> usize {
        self.0.byte_len
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { value: BigUint::zero(), modulus: self.clone() }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { value: BigUint::one(), modulus: self.clone() }
    }

    pub fn elem_u64(&self, v: u64) -> FieldElem {
        self.elem_biguint(&BigUint::from(v))
    }

    pub fn elem_i64(&self, v: i64) -> FieldElem {
        self.elem(&BigInt::from(v))
    }

    pub fn elem_biguint(&self, v: &BigUint) -> FieldElem {
        FieldElem { value: v % self.value(), modulus: self.clone() }
    }

    /// Reduces a signed integer to its canonical representative.
    pub fn elem(&self, v: &BigInt) -> FieldElem {
        let m = BigInt::from_biguint(Sign::Plus, self.value().clone());
        let r = v.mod_floor(&m);
        FieldElem { value: r.to_biguint().expect("mod_floor is non-negative"), modulus: self.clone() }
    }

    /// Interprets `bytes` as a big-endian integer and reduces it.
    pub fn elem_from_be_bytes(&self, bytes: &[u8]) -> FieldElem {
        self.elem_biguint(&BigUint::from_bytes_be(bytes))
    }

    /// Accepts `value` only if it is already canonical.
    pub fn try_elem(&self, value: BigUint) -> Option<FieldElem> {
        (value < *self.value()).then(|| FieldElem { value, modulus: self.clone() })
    }
}

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.value == other.0.value
    }
}

impl Eq for Modulus {}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Modulus").field("value", &self.0.value).field("prime", &self.0.prime).finish()
    }
}

/// A canonical residue `0 <= value < M`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    value: BigUint,
    modulus: Modulus,
}

impl FieldElem {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// True when `gcd(value, M) = 1`.
    pub fn is_invertible(&self) -> bool {
        self.value.gcd(self.modulus.value()).is_one()
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<FieldElem, ModError> {
        mod_inv(self)
    }

    /// `self^exp` for a non-negative exponent; `x^0 = 1` (including `0^0`).
    pub fn pow(&self, exp: &BigUint) -> FieldElem {
        FieldElem { value: self.value.modpow(exp, self.modulus.value()), modulus: self.modulus.clone() }
    }

    pub fn pow_u64(&self, exp: u64) -> FieldElem {
        self.pow(&BigUint::from(exp))
    }

    /// Signed exponent; negative powers go through the inverse.
    pub fn pow_signed(&self, exp: &BigInt) -> Result<FieldElem, ModError> {
        if exp.is_negative() {
            Ok(self.inv()?.pow(exp.magnitude()))
        } else {
            Ok(self.pow(exp.magnitude()))
        }
    }

    /// Big-endian encoding left-padded to `width` bytes, or `None` if the
    /// value does not fit.
    pub fn to_be_bytes_padded(&self, width: usize) -> Option<Vec<u8>> {
        let raw = if self.value.is_zero() { Vec::new() } else { self.value.to_bytes_be() };
        if raw.len() > width {
            return None;
        }
        let mut out = alloc::vec![0u8; width - raw.len()];
        out.extend_from_slice(&raw);
        Some(out)
    }

    fn check_same(&self, other: &FieldElem) {
        debug_assert!(self.modulus == other.modulus, "mixed moduli in field arithmetic");
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.value())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &'a FieldElem) -> FieldElem {
        self.check_same(rhs);
        let mut v = &self.value + &rhs.value;
        if v >= *self.modulus.value() {
            v -= self.modulus.value();
        }
        FieldElem { value: v, modulus: self.modulus.clone() }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &'a FieldElem) -> FieldElem {
        self.check_same(rhs);
        let v = if self.value >= rhs.value {
            &self.value - &rhs.value
        } else {
            self.modulus.value() - &rhs.value + &self.value
        };
        FieldElem { value: v, modulus: self.modulus.clone() }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &'a FieldElem) -> FieldElem {
        self.check_same(rhs);
        FieldElem { value: (&self.value * &rhs.value) % self.modulus.value(), modulus: self.modulus.clone() }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        if self.value.is_zero() {
            return self.clone();
        }
        FieldElem { value: self.modulus.value() - &self.value, modulus: self.modulus.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &'a FieldElem) -> FieldElem {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<FieldElem> for &'a FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

/// Extended Euclid: returns `(g, x)` with `a*x ≡ g (mod m)`.
fn ext_euclid(a: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), m.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = core::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = core::mem::replace(&mut s, next_s);
    }
    (old_r, old_s)
}

/// `a^{-1} mod M`, failing with [`ModError::NonInvertible`] when
/// `gcd(a, M) != 1`.
pub fn mod_inv(a: &FieldElem) -> Result<FieldElem, ModError> {
    let m = BigInt::from_biguint(Sign::Plus, a.modulus.value().clone());
    let (g, x) = ext_euclid(&BigInt::from_biguint(Sign::Plus, a.value.clone()), &m);
    if !g.is_one() {
        return Err(ModError::NonInvertible(a.value.clone(), a.modulus.value().clone()));
    }
    Ok(a.modulus.elem(&x))
}

/// `base^exp mod M`.
pub fn mod_pow(base: &FieldElem, exp: &BigUint) -> FieldElem {
    base.pow(exp)
}

/// Field image of the grid point `B + i/K`, i.e. `((B mod M)·K + i)·K^{-1}`.
pub fn reduce_rational(b: &BigInt, i: &BigInt, k: &BigUint, modulus: &Modulus) -> Result<FieldElem, ModError> {
    let k_elem = modulus.elem_biguint(k);
    let k_inv = k_elem.inv().map_err(|_| ModError::NonInvertible(k.clone(), modulus.value().clone()))?;
    let scaled = &modulus.elem(b) * &k_elem + modulus.elem(i);
    Ok(scaled * k_inv)
}

/// Outcome of a k-th root search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootSearch {
    Found(FieldElem),
    /// Proven not to exist.
    Absent,
    /// A root exists but this implementation cannot construct it.
    Unknown,
}

impl RootSearch {
    pub fn found(self) -> Option<FieldElem> {
        match self {
            RootSearch::Found(r) => Some(r),
            _ => None,
        }
    }
}

/// Searches for `r` with `r^K ≡ p (mod M)`.
///
/// Small moduli (`M < 2^16`) are searched exhaustively. Otherwise the
/// existence criterion `p^((M-1)/d) ≡ 1`, `d = gcd(K, M-1)`, decides
/// absence; a root is then constructed when `d` is a power of two, by
/// reducing to a `d`-th root and taking iterated square roots.
pub fn kth_root(p: &FieldElem, k: &BigUint) -> Result<RootSearch, ModError> {
    let modulus = p.modulus();
    if !modulus.is_prime() {
        return Err(ModError::Unsupported);
    }
    if p.is_zero() {
        return Err(ModError::NonInvertible(p.value.clone(), modulus.value().clone()));
    }
    if let Some(m) = modulus.value().to_u64().filter(|&m| m < EXHAUSTIVE_ROOT_LIMIT) {
        let hit = (1..m).map(|r| modulus.elem_u64(r)).find(|r| r.pow(k) == *p);
        return Ok(hit.map_or(RootSearch::Absent, RootSearch::Found));
    }

    let n = modulus.value() - 1u32;
    let d = k.gcd(&n);
    if !p.pow(&(&n / &d)).is_one() {
        return Ok(RootSearch::Absent);
    }
    // a·K ≡ d (mod n), so (y^a)^K = y^d whenever y^n = 1.
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let k_red = BigInt::from_biguint(Sign::Plus, k % &n);
    let (_, a) = ext_euclid(&k_red, &n_int);
    let a = a.mod_floor(&n_int).to_biguint().expect("non-negative");

    let y = if d.is_one() {
        p.clone()
    } else if d.count_ones() == 1 {
        match iterated_sqrt(p, d.trailing_zeros().unwrap_or(0)) {
            Some(y) => y,
            None => return Ok(RootSearch::Unknown),
        }
    } else {
        return Ok(RootSearch::Unknown);
    };
    let r = y.pow(&a);
    if r.pow(k) == *p {
        Ok(RootSearch::Found(r))
    } else {
        Ok(RootSearch::Unknown)
    }
}

/// Takes `levels` successive square roots, choosing at each step the branch
/// that keeps enough 2-power residuosity for the remaining steps.
fn iterated_sqrt(p: &FieldElem, levels: u64) -> Option<FieldElem> {
    let modulus = p.modulus();
    let n = modulus.value() - 1u32;
    let mut cur = p.clone();
    for step in 0..levels {
        let r = tonelli_shanks(&cur)?;
        let remaining = levels - step - 1;
        if remaining == 0 {
            cur = r;
            break;
        }
        let shift = &n >> remaining;
        let ok = |x: &FieldElem| x.pow(&shift).is_one();
        cur = if ok(&r) {
            r
        } else {
            let alt = -&r;
            if !ok(&alt) {
                return None;
            }
            alt
        };
    }
    Some(cur)
}

/// Square root modulo an odd prime, `None` for non-residues.
fn tonelli_shanks(a: &FieldElem) -> Option<FieldElem> {
    let modulus = a.modulus();
    if a.is_zero() {
        return Some(a.clone());
    }
    let p = modulus.value();
    let n = p - 1u32;
    if !a.pow(&(&n >> 1)).is_one() {
        return None;
    }
    let s = n.trailing_zeros().unwrap_or(0);
    let q = &n >> s;
    let mut z = modulus.elem_u64(2);
    while z.pow(&(&n >> 1)).is_one() {
        z = &z + &modulus.one();
    }
    let mut m = s;
    let mut c = z.pow(&q);
    let mut t = a.pow(&q);
    let mut r = a.pow(&((&q + 1u32) >> 1));
    while !t.is_one() {
        let mut i = 0u64;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = &t2 * &t2;
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = c.pow(&(BigUint::one() << (m - i - 1)));
        m = i;
        c = &b * &b;
        t = &t * &c;
        r = &r * &b;
    }
    Some(r)
}

const SMALL_PRIMES: [u32; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

/// Miller–Rabin. Deterministic bases below `3.3·10^24`, otherwise
/// [`MILLER_RABIN_ROUNDS`] bases drawn from a SHA3 stream keyed by `n`.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u8) {
        return false;
    }
    for &sp in SMALL_PRIMES.iter() {
        let sp = BigUint::from(sp);
        if *n == sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    // Jaeschke / Sorenson–Webster bound for the first 13 prime bases.
    let deterministic_bound = BigUint::parse_bytes(b"3317044064679887385961981", 10).expect("literal");
    if *n < deterministic_bound {
        return !SMALL_PRIMES[..13].iter().any(|&a| witness(&BigUint::from(a)));
    }
    let span = n - 3u32;
    let n_bytes = n.to_bytes_be();
    for round in 0..MILLER_RABIN_ROUNDS as u32 {
        let digest =
            Sha3_256::new().chain_update(b"IBC.mr").chain_update(&n_bytes).chain_update(round.to_be_bytes()).finalize();
        let a = BigUint::from_bytes_be(&digest) % &span + 2u32;
        if witness(&a) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m257() -> Modulus {
        Modulus::from_u64(257).unwrap()
    }

    fn exhaustive_inverse(a: u64, m: u64) -> Option<u64> {
        (1..m).find(|x| a * x % m == 1)
    }

    fn naive_pow(base: u64, exp: u64, m: u64) -> u64 {
        (0..exp).fold(1 % m, |acc, _| acc * base % m)
    }

    #[test]
    fn inverse_examples() {
        let m = m257();
        assert_eq!(m.elem_u64(1).inv().unwrap().to_u64(), Some(1));
        // 143 · 133 = 19019 = 74·257 + 1
        assert_eq!(exhaustive_inverse(143, 257), Some(133));
        assert_eq!(m.elem_u64(143).inv().unwrap().to_u64(), Some(133));
        assert_eq!(exhaustive_inverse(4, 257), Some(193));
        assert_eq!(m.elem_u64(4).inv().unwrap().to_u64(), Some(193));
    }

    #[test]
    fn inverse_of_non_unit_fails() {
        let m = Modulus::from_u64(15).unwrap();
        assert!(!m.is_prime());
        assert!(matches!(m.elem_u64(6).inv(), Err(ModError::NonInvertible(..))));
        assert!(matches!(m257().zero().inv(), Err(ModError::NonInvertible(..))));
    }

    #[test]
    fn pow_examples() {
        let m = m257();
        let three = m.elem_u64(3);
        assert!(three.pow_u64(0).is_one());
        assert_eq!(naive_pow(3, 64, 257), 241);
        assert_eq!(three.pow_u64(64).to_u64(), Some(241));
        assert_eq!(three.pow_u64(35).to_u64(), Some(naive_pow(3, 35, 257)));
    }

    #[test]
    fn pow_matches_naive_small_grid() {
        for m in [17u64, 257] {
            let modulus = Modulus::from_u64(m).unwrap();
            for base in 0..50 {
                for exp in 0..50 {
                    assert_eq!(
                        modulus.elem_u64(base).pow_u64(exp).to_u64(),
                        Some(naive_pow(base % m, exp, m)),
                        "{base}^{exp} mod {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn negative_values_reduce_euclidean() {
        let m = m257();
        assert_eq!(m.elem_i64(-1).to_u64(), Some(256));
        assert_eq!(m.elem_i64(-258).to_u64(), Some(256));
        assert_eq!((-m.elem_u64(3)).to_u64(), Some(254));
        assert_eq!((m.elem_u64(3) - m.elem_u64(5)).to_u64(), Some(255));
    }

    #[test]
    fn rational_reduction_examples() {
        let m = m257();
        let k = BigUint::from(4u8);
        let t = reduce_rational(&BigInt::zero(), &BigInt::from(3), &k, &m).unwrap();
        // exhaustive: the unique x with 4x ≡ 3
        let oracle = (0..257u64).find(|x| x * 4 % 257 == 3).unwrap();
        assert_eq!(t.to_u64(), Some(oracle));
        assert_eq!(oracle, 65);
        let t = reduce_rational(&BigInt::from(5), &BigInt::zero(), &k, &m).unwrap();
        assert_eq!(t.to_u64(), Some(5));
        let t = reduce_rational(&BigInt::from(35), &BigInt::from(3), &k, &m).unwrap();
        let oracle = (0..257u64).find(|x| x * 4 % 257 == 143).unwrap();
        assert_eq!(t.to_u64(), Some(oracle));
    }

    #[test]
    fn rational_reduction_rejects_shared_factor() {
        let m = Modulus::from_u64(15).unwrap();
        let err = reduce_rational(&BigInt::one(), &BigInt::one(), &BigUint::from(3u8), &m);
        assert!(matches!(err, Err(ModError::NonInvertible(..))));
    }

    #[test]
    fn kth_root_examples() {
        let m = m257();
        let four = BigUint::from(4u8);
        let r = kth_root(&m.one(), &four).unwrap().found().unwrap();
        assert!(r.pow(&four).is_one());
        assert_eq!(kth_root(&m.elem_u64(3), &four).unwrap(), RootSearch::Absent);
        assert!((1..257u64).all(|r| naive_pow(r, 4, 257) != 3));
        // the value 16 is a fourth root of unity, not of 3
        assert_eq!(naive_pow(16, 4, 257), 1);
        let two = BigUint::from(2u8);
        let r = kth_root(&m.elem_u64(16), &two).unwrap().found().unwrap();
        assert_eq!(r.pow(&two).to_u64(), Some(16));
    }

    #[test]
    fn kth_root_matches_exhaustive_presence() {
        let m = m257();
        for k in [2u64, 4, 8] {
            let kb = BigUint::from(k);
            for p in 1..257u64 {
                let exists = (1..257u64).any(|r| naive_pow(r, k, 257) == p);
                match kth_root(&m.elem_u64(p), &kb).unwrap() {
                    RootSearch::Found(r) => {
                        assert!(exists);
                        assert_eq!(r.pow(&kb).to_u64(), Some(p));
                    }
                    RootSearch::Absent => assert!(!exists, "p={p} k={k}"),
                    RootSearch::Unknown => panic!("exhaustive search never reports unknown"),
                }
            }
        }
    }

    #[test]
    fn kth_root_large_prime_paths() {
        // 2^127 - 1 is prime; M - 1 = 2·(2^126 - 1) has 2-adic valuation 1.
        let m = Modulus::prime((BigUint::one() << 127u32) - 1u32).unwrap();
        let x = m.elem_u64(123_456_789);
        for k in [5u64, 2, 4, 10] {
            let kb = BigUint::from(k);
            let p = x.pow(&kb);
            let r = kth_root(&p, &kb).unwrap().found().expect("root of a k-th power");
            assert_eq!(r.pow(&kb), p);
        }
        // 3 | M - 1, so cube roots exist but are not constructed here
        let three = BigUint::from(3u8);
        assert_eq!(kth_root(&x.pow(&three), &three).unwrap(), RootSearch::Unknown);
        // a quadratic non-residue has no square root
        let mut nr = m.elem_u64(2);
        while nr.pow(&((m.value() - 1u32) >> 1)).is_one() {
            nr = &nr + &m.one();
        }
        assert_eq!(kth_root(&nr, &BigUint::from(2u8)).unwrap(), RootSearch::Absent);
    }

    #[test]
    fn kth_root_needs_prime() {
        let m = Modulus::from_u64(15).unwrap();
        assert_eq!(kth_root(&m.elem_u64(4), &BigUint::from(2u8)), Err(ModError::Unsupported));
    }

    #[test]
    fn primality() {
        let primes = [3u64, 17, 257, 65_537, 2_147_483_647, 1_000_000_007];
        for p in primes {
            assert!(is_probable_prime(&BigUint::from(p)), "{p}");
        }
        // Carmichael numbers and a strong pseudoprime to base 2
        for c in [561u64, 1105, 1729, 2047, 3_215_031_751, 65_536] {
            assert!(!is_probable_prime(&BigUint::from(c)), "{c}");
        }
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m127 * BigUint::from(3u8))));
        assert!(Modulus::prime(BigUint::from(91u8)).is_err());
        assert_eq!(Modulus::from_u64(2).unwrap_err(), ModError::ModulusTooSmall);
    }

    #[test]
    fn padded_bytes() {
        let m = m257();
        assert_eq!(m.elem_u64(256).to_be_bytes_padded(4).unwrap(), [0, 0, 1, 0]);
        assert_eq!(m.zero().to_be_bytes_padded(2).unwrap(), [0, 0]);
        assert!(m.elem_u64(256).to_be_bytes_padded(1).is_none());
    }
}
