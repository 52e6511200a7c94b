//! Real-line reference for the four-point identity with
//! `s(t) = (p^t + q1·sin(r1·π·t) + q2·cos(r2·π·t)) / t`.
//!
//! For odd `r1`, `r2` the ratio equals `1/p²` exactly. Evaluation runs in
//! 192-bit binary floating point and is rounded to `f64` once at the end;
//! plain `f64` loses the identity whenever `p^t` is small next to the
//! oscillator amplitudes.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

/// Working precision in bits.
pub const PRECISION: usize = 192;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum AnalyticError {
    #[error("t + k must be nonzero for k = 0..3")]
    ExcludedPoint,
    #[error("p must be positive and all inputs finite")]
    DomainError,
    #[error("extended-precision evaluation failed")]
    Precision,
}

/// Oscillating generator parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealGenerator {
    pub p: f64,
    pub q1: f64,
    pub q2: f64,
    pub r1: i64,
    pub r2: i64,
}

/// `(s(t)·t + s(t+1)·(t+1)) / (s(t+2)·(t+2) + s(t+3)·(t+3))`.
pub fn analytic_invariant_check(gen: &RealGenerator, t: f64) -> Result<f64, AnalyticError> {
    let finite = [gen.p, gen.q1, gen.q2, t].iter().all(|x| x.is_finite());
    if !finite || gen.p <= 0.0 {
        return Err(AnalyticError::DomainError);
    }
    if [0.0, 1.0, 2.0, 3.0].iter().any(|k| t + k == 0.0) {
        return Err(AnalyticError::ExcludedPoint);
    }
    let mut cc = Consts::new().map_err(|_| AnalyticError::Precision)?;
    let pi = cc.pi(PRECISION, RM);
    let big = |x: f64| BigFloat::from_f64(x, PRECISION);
    let (p, q1, q2) = (big(gen.p), big(gen.q1), big(gen.q2));
    let w1 = pi.mul(&big(gen.r1 as f64), PRECISION, RM);
    let w2 = pi.mul(&big(gen.r2 as f64), PRECISION, RM);
    let t0 = big(t);

    let mut weighted = |k: f64| {
        let tk = t0.add(&big(k), PRECISION, RM);
        let exp = p.pow(&tk, PRECISION, RM, &mut cc);
        let sin = w1.mul(&tk, PRECISION, RM).sin(PRECISION, RM, &mut cc);
        let cos = w2.mul(&tk, PRECISION, RM).cos(PRECISION, RM, &mut cc);
        let numer =
            exp.add(&q1.mul(&sin, PRECISION, RM), PRECISION, RM).add(&q2.mul(&cos, PRECISION, RM), PRECISION, RM);
        let s = numer.div(&tk, PRECISION, RM);
        s.mul(&tk, PRECISION, RM)
    };
    let top = weighted(0.0).add(&weighted(1.0), PRECISION, RM);
    let bottom = weighted(2.0).add(&weighted(3.0), PRECISION, RM);
    let ratio = top.div(&bottom, PRECISION, RM);
    to_f64(&ratio).ok_or(AnalyticError::Precision)
}

/// Relative deviation of the ratio from `1/p²`.
pub fn relative_deviation(gen: &RealGenerator, t: f64) -> Result<f64, AnalyticError> {
    let ratio = analytic_invariant_check(gen, t)?;
    let target = 1.0 / (gen.p * gen.p);
    Ok(((ratio - target) / target).abs())
}

fn to_f64(x: &BigFloat) -> Option<f64> {
    if x.is_zero() {
        return Some(0.0);
    }
    let (words, _bits, sign, exp, _) = x.as_raw_parts()?;
    let top = *words.last()?;
    let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
    // value = 0.mantissa · 2^exp, with the top word most significant
    let hi = libm::ldexp(top as f64, exp - 64);
    let lo = libm::ldexp(next as f64, exp - 128);
    let mag = hi + lo;
    Some(if sign == Sign::Neg { -mag } else { mag })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(p: f64, q1: f64, q2: f64, r1: i64, r2: i64) -> RealGenerator {
        RealGenerator { p, q1, q2, r1, r2 }
    }

    #[test]
    fn conversion_to_f64() {
        for v in [1.5, 0.25, -3.0, 1.0 / 9.0, 1e-12, -7.25e8] {
            assert_eq!(to_f64(&BigFloat::from_f64(v, PRECISION)), Some(v));
        }
    }

    #[test]
    fn pure_exponential() {
        let r = analytic_invariant_check(&gen(2.0, 0.0, 0.0, 1, 1), 1.0).unwrap();
        assert!((r - 0.25).abs() < 1e-15);
    }

    #[test]
    fn odd_frequencies_cancel() {
        let g = gen(3.0, 1.5, -2.0, 3, 5);
        let r = analytic_invariant_check(&g, 0.7).unwrap();
        assert!(((r - 1.0 / 9.0) * 9.0).abs() < 1e-9);
    }

    #[test]
    fn extreme_corner_still_exact() {
        // p^t ≈ 1e-12 next to amplitude 10
        let g = gen(4.0, 10.0, -10.0, 7, 9);
        assert!(relative_deviation(&g, -19.93).unwrap() < 1e-9);
    }

    #[test]
    fn even_frequency_breaks_identity() {
        let g = gen(3.0, 1.5, -2.0, 2, 5);
        assert!(relative_deviation(&g, 0.7).unwrap() > 1e-3);
    }

    #[test]
    fn excluded_points() {
        let g = gen(2.0, 1.0, 1.0, 1, 1);
        for t in [0.0, -1.0, -2.0, -3.0] {
            assert_eq!(analytic_invariant_check(&g, t), Err(AnalyticError::ExcludedPoint));
        }
        assert_eq!(analytic_invariant_check(&gen(0.0, 1.0, 1.0, 1, 1), 0.5), Err(AnalyticError::DomainError));
        assert_eq!(analytic_invariant_check(&g, f64::NAN), Err(AnalyticError::DomainError));
    }
}
