use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LatticeError;

pub type Rat = Ratio<i64>;

/// A point of the circle `R/Z`, stored as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct RationalAngle(Rat);

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle(Ratio::new_raw(0, 1));

    pub fn new(num: i64, den: i64) -> Self {
        Self::from_ratio(Rat::new(num, den))
    }

    pub fn from_ratio(r: Rat) -> Self {
        let f = r - Rat::from_integer(r.floor().to_integer());
        RationalAngle(f)
    }

    pub fn value(&self) -> Rat {
        self.0
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Distance to the nearest integer of `self - other`, in `[0, 1/2]`.
    pub fn dist(&self, other: &RationalAngle) -> Rat {
        let d = (*self - *other).0;
        let half = Rat::new(1, 2);
        if d > half {
            Rat::one() - d
        } else {
            d
        }
    }

    /// `|e^{2 pi i self} - e^{2 pi i other}| < eps`, decided exactly.
    pub fn chord_lt(&self, other: &RationalAngle, eps: Rat) -> bool {
        chord_lt(self.dist(other), eps)
    }
}

impl Add for RationalAngle {
    type Output = RationalAngle;
    fn add(self, rhs: RationalAngle) -> RationalAngle {
        RationalAngle::from_ratio(self.0 + rhs.0)
    }
}

impl Sub for RationalAngle {
    type Output = RationalAngle;
    fn sub(self, rhs: RationalAngle) -> RationalAngle {
        RationalAngle::from_ratio(self.0 - rhs.0)
    }
}

impl Neg for RationalAngle {
    type Output = RationalAngle;
    fn neg(self) -> RationalAngle {
        RationalAngle::from_ratio(-self.0)
    }
}

impl Mul<i64> for RationalAngle {
    type Output = RationalAngle;
    fn mul(self, rhs: i64) -> RationalAngle {
        let den = *self.0.denom();
        let num = (*self.0.numer() as i128 * rhs as i128).rem_euclid(den as i128) as i64;
        RationalAngle(Rat::new(num, den))
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for RationalAngle {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(RationalAngle::from_ratio)
    }
}

/// Parses `"p/q"` or an integer literal.
pub fn parse_rational(s: &str) -> Result<Rat, LatticeError> {
    let bad = || LatticeError::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => t.parse::<i64>().map(Rat::from_integer).map_err(|_| bad()),
    }
}

pub fn format_rational(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Serialize for RationalAngle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalAngle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact test of `2 sin(pi d) < eps` for `d` in `[0, 1/2]`.
///
/// By Niven's theorem `sin(pi d)` is rational only at `d` in `{0, 1/6, 1/2}`, so
/// outside those ties the two sides differ and a refining enclosure terminates.
pub fn chord_lt(d: Rat, eps: Rat) -> bool {
    assert!(d >= Rat::zero() && d <= Rat::new(1, 2), "angular distance out of range");
    if eps <= Rat::zero() {
        return false;
    }
    if d.is_zero() {
        return true;
    }
    let s = eps / 2;
    if s >= Rat::one() {
        return !(s == Rat::one() && d == Rat::new(1, 2));
    }
    if s == Rat::new(1, 2) && d == Rat::new(1, 6) {
        return false;
    }
    let approx = (std::f64::consts::PI * d.to_f64().unwrap()).sin();
    let target = s.to_f64().unwrap();
    if (approx - target).abs() > 1e-9 {
        return approx < target;
    }
    let d = big(d);
    let s = big(s);
    let mut terms = 12;
    loop {
        let (lo, hi) = sin_pi_enclosure(&d, terms);
        if hi < s {
            return true;
        }
        if lo >= s {
            return false;
        }
        terms *= 2;
    }
}

fn big(r: Rat) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Alternating-series partial sums `(lower, upper)` of `atan(1/n)`.
fn atan_inv_bounds(n: i64, terms: usize) -> (BigRational, BigRational) {
    let x = BigRational::new(BigInt::one(), BigInt::from(n));
    let x2 = &x * &x;
    let mut pow = x.clone();
    let mut sum = BigRational::zero();
    for i in 0..terms {
        let term = &pow / BigInt::from(2 * i as i64 + 1);
        if i % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        pow *= &x2;
    }
    let next = &pow / BigInt::from(2 * terms as i64 + 1);
    if terms.is_multiple_of(2) {
        let hi = &sum + &next;
        (sum, hi)
    } else {
        let lo = &sum - &next;
        (lo, sum)
    }
}

fn pi_bounds(terms: usize) -> (BigRational, BigRational) {
    let (a_lo, a_hi) = atan_inv_bounds(5, terms);
    let (b_lo, b_hi) = atan_inv_bounds(239, terms);
    let sixteen = BigRational::from_integer(BigInt::from(16));
    let four = BigRational::from_integer(BigInt::from(4));
    (&sixteen * &a_lo - &four * &b_hi, &sixteen * &a_hi - &four * &b_lo)
}

/// Taylor partial sums bracketing `sin(x)` for `0 <= x <= 2`.
fn sin_bounds(x: &BigRational, terms: usize) -> (BigRational, BigRational) {
    let x2 = x * x;
    let mut term = x.clone();
    let mut sum = BigRational::zero();
    for i in 0..terms {
        if i % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        let k = 2 * i as i64 + 2;
        term = &term * &x2 / BigInt::from(k * (k + 1));
    }
    if terms.is_multiple_of(2) {
        let hi = &sum + &term;
        (sum, hi)
    } else {
        let lo = &sum - &term;
        (lo, sum)
    }
}

fn sin_pi_enclosure(d: &BigRational, terms: usize) -> (BigRational, BigRational) {
    let (pi_lo, pi_hi) = pi_bounds(terms);
    let x_lo = &pi_lo * d;
    let x_hi = &pi_hi * d;
    let half_pi_lo = &pi_lo / BigInt::from(2);
    let lo = sin_bounds(&x_lo, terms).0;
    let hi = if x_hi <= half_pi_lo { sin_bounds(&x_hi, terms).1 } else { BigRational::one() };
    (lo.max(BigRational::zero()), hi)
}
