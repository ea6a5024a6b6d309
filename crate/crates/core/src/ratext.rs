//! Rational helpers: binomials, exact roots, decimal rendering, parsing,
//! and float rationalization.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::scalar::rational_from_f64;

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact positive n-th root of a nonnegative rational, if it is rational.
pub fn exact_nth_root(value: &BigRational, n: u32) -> Option<BigRational> {
    if value.is_negative() {
        return None;
    }
    if value.is_zero() {
        return Some(BigRational::zero());
    }
    let num_root = value.numer().nth_root(n);
    let den_root = value.denom().nth_root(n);
    if num_root.pow(n) == *value.numer() && den_root.pow(n) == *value.denom() {
        Some(BigRational::new(num_root, den_root))
    } else {
        None
    }
}

/// Exact decimal string for rationals whose denominator is 2^a·5^b; `None`
/// when the expansion does not terminate.
pub fn exact_decimal(value: &BigRational) -> Option<String> {
    let mut den = value.denom().clone();
    let mut pow10: u32 = 0;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    pow10 = pow10.max(twos).max(fives);
    let scaled = value.numer() * BigInt::from(10u32).pow(pow10) / value.denom();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let s = if pow10 == 0 {
        digits
    } else {
        let pad = (pow10 as usize + 1).saturating_sub(digits.len());
        let padded = format!("{}{}", "0".repeat(pad), digits);
        let split = padded.len() - pow10 as usize;
        format!("{}.{}", &padded[..split], &padded[split..])
    };
    Some(if neg { format!("-{s}") } else { s })
}

/// Parse "p/q", "p", or "-p/q" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("bad rational numerator {num:?}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("bad rational denominator {den:?}"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

/// Best rational approximation to `x` with denominator at most `max_den`,
/// by continued-fraction truncation. Exact when `x` already fits.
pub fn rationalize(x: f64, max_den: u64) -> BigRational {
    assert!(x.is_finite());
    let exact = rational_from_f64(x).expect("finite float");
    if *exact.denom() <= BigInt::from(max_den) {
        return exact;
    }
    let cap = BigInt::from(max_den);
    // Convergents p/q of the continued fraction of x.
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (exact.floor().to_integer(), BigInt::one());
    let mut frac = &exact - BigRational::from_integer(p1.clone());
    while !frac.is_zero() {
        let inv = frac.recip();
        let a = inv.floor().to_integer();
        frac = inv - BigRational::from_integer(a.clone());
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > cap {
            // Semiconvergent: largest multiplier keeping the cap.
            let t = (&cap - &q0).div_floor(&q1);
            if t.is_positive() {
                let ps = &t * &p1 + &p0;
                let qs = &t * &q1 + &q0;
                let cand = BigRational::new(ps, qs);
                let best = BigRational::new(p1.clone(), q1.clone());
                return if (cand - &exact).abs() < (best - &exact).abs() {
                    BigRational::new(&t * &p1 + &p0, &t * &q1 + &q0)
                } else {
                    BigRational::new(p1, q1)
                };
            }
            return BigRational::new(p1, q1);
        }
        (p0, q0) = (p1, q1);
        (p1, q1) = (p2, q2);
    }
    BigRational::new(p1, q1)
}
