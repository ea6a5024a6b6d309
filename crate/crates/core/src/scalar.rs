//! Scalar abstraction for the geometry kernel.
//!
//! The kernel is generic over an ordered field. Certified paths instantiate
//! it at arbitrary-precision rationals; the optimizer's search proxy reuses
//! the same code at `f64`, where results are advisory only.

use std::fmt::Debug;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use num_traits::Num;

/// An ordered field the kernel can compute over.
///
/// `BigRational` gives exact results; `f64` gives fast approximations for
/// search heuristics. Nothing certified may depend on the `f64` instance.
pub trait Scalar: Num + Signed + PartialOrd + Clone + Debug + 'static {
    fn from_int(v: i64) -> Self;

    /// Exact integer [`Scalar`] built from a numerator/denominator pair.
    fn from_fraction(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn to_f64(&self) -> f64;

    /// Largest integer `<= self`, as a machine integer.
    ///
    /// Panics if the value does not fit; callers only use this on bounded
    /// enumeration ranges.
    fn floor_int(&self) -> i64;

    /// Rescale a direction vector to a canonical representative of its ray.
    ///
    /// Rescaling by a positive factor only. For rationals this produces the
    /// primitive integer vector, which keeps double-description intermediates
    /// small; for floats it normalizes by the largest magnitude entry.
    fn canonicalize_direction(v: &mut [Self]);

    /// Whether arithmetic in this type is exact (no rounding).
    const EXACT: bool;
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn floor_int(&self) -> i64 {
        self.floor() as i64
    }

    fn canonicalize_direction(v: &mut [Self]) {
        let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if max > 0.0 {
            for x in v.iter_mut() {
                *x /= max;
            }
        }
    }

    const EXACT: bool = false;
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn floor_int(&self) -> i64 {
        let f = self.floor();
        int_to_i64(f.numer()).expect("floor does not fit in i64")
    }

    fn canonicalize_direction(v: &mut [Self]) {
        // lcm of denominators, then gcd of numerators: primitive integer vector.
        let mut den_lcm = BigInt::one();
        for x in v.iter() {
            den_lcm = den_lcm.lcm(x.denom());
        }
        let mut num_gcd = BigInt::zero();
        for x in v.iter() {
            num_gcd = num_gcd.gcd(&(x.numer() * &den_lcm / x.denom()));
        }
        if num_gcd.is_zero() {
            return;
        }
        let factor = BigRational::new(den_lcm, num_gcd);
        for x in v.iter_mut() {
            *x = x.clone() * &factor;
        }
    }

    const EXACT: bool = true;
}

/// Convert a big rational to the nearest `f64`, saturating on overflow.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Direct conversion is fine while both parts fit; otherwise scale down.
    if let (Some(n), Some(d)) = (int_to_i64(r.numer()), int_to_i64(r.denom())) {
        return n as f64 / d as f64;
    }
    let bits_n = r.numer().bits() as i64;
    let bits_d = r.denom().bits() as i64;
    let shift = (bits_n.max(bits_d) - 52).max(0) as u64;
    let n = r.numer() >> shift;
    let d = r.denom() >> shift;
    let nf = n.to_string().parse::<f64>().unwrap_or(f64::MAX);
    let df = d.to_string().parse::<f64>().unwrap_or(f64::MAX);
    if df == 0.0 {
        if nf >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    } else {
        nf / df
    }
}

fn int_to_i64(i: &BigInt) -> Option<i64> {
    let (sign, digits) = i.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => {
            let mag = digits[0];
            match sign {
                Sign::Minus => {
                    if mag <= (i64::MAX as u64) + 1 {
                        Some(-(mag as i128) as i64)
                    } else {
                        None
                    }
                }
                _ => i64::try_from(mag).ok(),
            }
        }
        _ => None,
    }
}

/// Exact conversion of an `f64` (finite) to a rational.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn floor_int_matches_integer_division() {
        assert_eq!(rat(7, 2).floor_int(), 3);
        assert_eq!(rat(-7, 2).floor_int(), -4);
        assert_eq!(rat(6, 3).floor_int(), 2);
    }

    #[test]
    fn canonical_direction_is_primitive() {
        let mut v = vec![rat(2, 3), rat(-4, 3), rat(0, 1)];
        BigRational::canonicalize_direction(&mut v);
        assert_eq!(v, vec![rat(1, 1), rat(-2, 1), rat(0, 1)]);
    }

    #[test]
    fn f64_roundtrip_is_exact() {
        let x = 0.1_f64 + 0.2_f64;
        let r = rational_from_f64(x).unwrap();
        assert_eq!(r.to_f64(), x);
    }
}
