//! Exact arithmetic on quantities of the form `r·√q` and their sums.
//!
//! Surface measures of rational polytopes are sums of rational multiples of
//! square roots of square-free integers. Sums over distinct square-free
//! radicands are linearly independent over the rationals, so the zero test is
//! a coefficient test and sign evaluation terminates by interval refinement.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::scalar::Scalar;

/// Split `n >= 0` as `s² · f` with `f` square-free.
fn square_free_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative(), "radicand must be nonnegative");
    if n.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let mut rest = n.clone();
    let mut square_part = BigInt::one();
    let mut free_part = BigInt::one();
    let mut d = BigInt::from(2);
    while &d * &d <= rest {
        let mut exp = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            exp += 1;
        }
        if exp > 0 {
            for _ in 0..exp / 2 {
                square_part *= &d;
            }
            if exp % 2 == 1 {
                free_part *= &d;
            }
        }
        d += 1;
    }
    if rest > BigInt::one() {
        free_part *= rest;
    }
    (square_part, free_part)
}

/// A single term `scale · √radicand` with `radicand` square-free positive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SqrtQuantity {
    scale: BigRational,
    radicand: BigInt,
}

impl SqrtQuantity {
    pub fn zero() -> Self {
        SqrtQuantity {
            scale: BigRational::zero(),
            radicand: BigInt::one(),
        }
    }

    pub fn rational(value: BigRational) -> Self {
        SqrtQuantity {
            scale: value,
            radicand: BigInt::one(),
        }
    }

    /// `scale · √radicand` for a rational `radicand >= 0`, normalized so the
    /// stored radicand is a square-free integer.
    pub fn new(scale: BigRational, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative());
        if scale.is_zero() || radicand.is_zero() {
            return SqrtQuantity::zero();
        }
        // √(p/q) = √(p·q) / q
        let inner = radicand.numer() * radicand.denom();
        let (sq, free) = square_free_decompose(&inner);
        SqrtQuantity {
            scale: scale * BigRational::new(sq, radicand.denom().clone()),
            radicand: free,
        }
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        self.scale.to_f64() * bigint_f64(&self.radicand).sqrt()
    }
}

impl fmt::Display for SqrtQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.scale)
        } else {
            write!(f, "{}*sqrt({})", self.scale, self.radicand)
        }
    }
}

fn bigint_f64(i: &BigInt) -> f64 {
    i.to_string().parse::<f64>().unwrap_or(f64::MAX)
}

/// A finite sum of `r·√q` terms keyed by square-free radicand.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RadicalSum {
    terms: BTreeMap<BigInt, BigRational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        RadicalSum::default()
    }

    pub fn rational(value: BigRational) -> Self {
        RadicalSum::from(SqrtQuantity::rational(value))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_assign(&mut self, q: &SqrtQuantity) {
        if q.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(q.radicand.clone())
            .or_insert_with(BigRational::zero);
        *entry += q.scale.clone();
        if entry.is_zero() {
            self.terms.remove(&q.radicand);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (rad, coef) in &other.terms {
            out.add_assign(&SqrtQuantity {
                scale: coef.clone(),
                radicand: rad.clone(),
            });
        }
        out
    }

    pub fn scale_by(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return RadicalSum::zero();
        }
        RadicalSum {
            terms: self
                .terms
                .iter()
                .map(|(rad, coef)| (rad.clone(), coef * s))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale_by(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact zero test (coefficient test, by linear independence of square
    /// roots of distinct square-free integers).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact sign: -1, 0, or 1.
    pub fn sign(&self) -> i8 {
        match self.terms.len() {
            0 => 0,
            1 => {
                let coef = self.terms.values().next().unwrap();
                if coef.is_positive() {
                    1
                } else {
                    -1
                }
            }
            2 => {
                let mut it = self.terms.iter();
                let (r1, c1) = it.next().unwrap();
                let (r2, c2) = it.next().unwrap();
                if c1.is_positive() == c2.is_positive() {
                    return if c1.is_positive() { 1 } else { -1 };
                }
                // sign decided by the larger of c1²·r1 vs c2²·r2
                let m1 = c1 * c1 * BigRational::from_integer(r1.clone());
                let m2 = c2 * c2 * BigRational::from_integer(r2.clone());
                match m1.cmp(&m2) {
                    Ordering::Greater => {
                        if c1.is_positive() {
                            1
                        } else {
                            -1
                        }
                    }
                    Ordering::Less => {
                        if c2.is_positive() {
                            1
                        } else {
                            -1
                        }
                    }
                    // distinct square-free radicands cannot tie
                    Ordering::Equal => unreachable!("tied radical magnitudes"),
                }
            }
            _ => self.sign_by_refinement(),
        }
    }

    fn sign_by_refinement(&self) -> i8 {
        // Nonzero by the independence theorem, so refinement terminates.
        let mut precision: u32 = 16;
        loop {
            let mut lo = BigRational::zero();
            let mut hi = BigRational::zero();
            let denom = BigInt::one() << precision;
            for (rad, coef) in &self.terms {
                let scaled = rad * (&denom * &denom);
                let root_lo = scaled.sqrt(); // floor of the true root
                let root_hi = &root_lo + BigInt::one();
                let b_lo = BigRational::new(root_lo, denom.clone());
                let b_hi = BigRational::new(root_hi, denom.clone());
                if coef.is_positive() {
                    lo += coef * &b_lo;
                    hi += coef * &b_hi;
                } else {
                    lo += coef * &b_hi;
                    hi += coef * &b_lo;
                }
            }
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            precision = precision.checked_mul(2).expect("precision overflow");
            assert!(precision <= 1 << 20, "radical sign refinement diverged");
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match self.sub(other).sign() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(rad, coef)| coef.to_f64() * bigint_f64(rad).sqrt())
            .sum()
    }
}

impl From<SqrtQuantity> for RadicalSum {
    fn from(q: SqrtQuantity) -> Self {
        let mut s = RadicalSum::zero();
        s.add_assign(&q);
        s
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(rad, coef)| {
                if rad.is_one() {
                    format!("{coef}")
                } else {
                    format!("{coef}*sqrt({rad})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
