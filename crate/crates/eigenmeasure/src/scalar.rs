//! Exact arithmetic in real quadratic fields Q(sqrt(d)).
//!
//! A [`QuadScalar`] is a number a + b*sqrt(d) with rational a, b and
//! square-free d. Comb parameters (modulation r, translate s) and lattice
//! constants all live here, so support and frequency comparisons stay
//! decidable. A value with b = 0 is kept field-agnostic (d = 1) and is
//! compatible with any radicand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Splits n = f^2 * d with d square-free. Rejects n = 0.
pub fn normalize_radicand(n: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::ZeroAmbient);
    }
    let mut f = 1u64;
    let mut d = n;
    let mut k = 2u64;
    while k * k <= d {
        while d % (k * k) == 0 {
            d /= k * k;
            f *= k;
        }
        k += 1;
    }
    Ok((f, d))
}

/// An element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)).
///
/// Invariants: d is square-free, and b == 0 iff d == 1 (rational values
/// are stored with d = 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    a: BigRational,
    b: BigRational,
    d: u64,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadScalar {
    /// Builds a + b*sqrt(n), normalizing the radicand so that the stored
    /// d is square-free (and folding sqrt(1) into the rational part).
    pub fn new(a: BigRational, b: BigRational, n: u64) -> Result<Self> {
        let (f, d) = normalize_radicand(n.max(1))?;
        let b = b * BigRational::from_integer(BigInt::from(f));
        if b.is_zero() || d == 1 {
            Ok(Self { a: a + b, b: BigRational::zero(), d: 1 })
        } else {
            Ok(Self { a, b, d })
        }
    }

    pub fn rational(a: BigRational) -> Self {
        Self { a, b: BigRational::zero(), d: 1 }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::rational(big(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// p/q * sqrt(n); the radicand is normalized.
    pub fn sqrt_term(p: i64, q: i64, n: u64) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::new(BigInt::from(p), BigInt::from(q)), n)
    }

    /// sqrt(n) itself.
    pub fn sqrt(n: u64) -> Result<Self> {
        Self::sqrt_term(1, 1, n)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The common radicand of two values, or an error when both carry
    /// distinct nontrivial radicands.
    fn join_radicand(&self, other: &Self) -> Result<u64> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => Ok(other.d),
            (false, true) => Ok(self.d),
            (false, false) if self.d == other.d => Ok(self.d),
            (false, false) => Err(Error::RadicandMismatch(self.d, other.d)),
        }
    }

    /// Checks that `other` lives in the same field (or is rational).
    pub fn compatible(&self, other: &Self) -> bool {
        self.join_radicand(other).is_ok()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.join_radicand(other)?;
        Self::new(&self.a + &other.a, &self.b + &other.b, d)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.join_radicand(other)?;
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &other.a + &self.b * &other.b * dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Self::new(a, b, d)
    }

    /// Multiplicative inverse; errors on zero.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Invalid("division by zero".into()));
        }
        // 1/(a + b sqrt(d)) = (a - b sqrt(d)) / (a^2 - b^2 d)
        let dd = BigRational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - &self.b * &self.b * dd;
        Self::new(&self.a / &norm, -&self.b / &norm, self.d)
    }

    /// Exact sign of a + b*sqrt(d).
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (s, 0) | (0, s) => s,
            (s, t) if s == t => s,
            _ => {
                // opposite signs: compare a^2 against b^2 d
                let dd = BigRational::from_integer(BigInt::from(self.d));
                let diff = &self.a * &self.a - &self.b * &self.b * dd;
                sa * sign_of(&diff)
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    /// Largest integer <= self, exact (a float guess corrected by exact
    /// comparisons).
    pub fn floor_int(&self) -> BigInt {
        let mut g = BigInt::from(self.to_f64().floor() as i64);
        while QuadScalar::rational(BigRational::from_integer(&g + 1)).cmp(self) != Ordering::Greater
        {
            g += 1;
        }
        while QuadScalar::rational(BigRational::from_integer(g.clone())).cmp(self)
            == Ordering::Greater
        {
            g -= 1;
        }
        g
    }

    pub fn ceil_int(&self) -> BigInt {
        -(-self.clone()).floor_int()
    }

    /// Scales by an integer.
    pub fn scale_int(&self, m: &BigInt) -> Self {
        let m = BigRational::from_integer(m.clone());
        Self::new(&self.a * &m, &self.b * &m, self.d).expect("radicand already square-free")
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for &QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &QuadScalar) -> QuadScalar {
        self.checked_add(rhs).expect("radicand mismatch in addition")
    }
}

impl Sub for &QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &QuadScalar) -> QuadScalar {
        self + &(-rhs.clone())
    }
}

impl Mul for &QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &QuadScalar) -> QuadScalar {
        self.checked_mul(rhs).expect("radicand mismatch in multiplication")
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar { a: -self.a, b: -self.b, d: self.d }
    }
}

impl PartialOrd for QuadScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadScalar {
    /// Total order by the real value a + b*sqrt(d). Values from
    /// incompatible fields compare by (value approximation is never
    /// needed: incompatible nontrivial radicands cannot both appear in
    /// one canonical expression, see `MeasureExpr`).
    fn cmp(&self, other: &Self) -> Ordering {
        if let Ok(d) = self.join_radicand(other) {
            let diff = QuadScalar::new(&self.a - &other.a, &self.b - &other.b, d)
                .expect("radicand already normalized");
            match diff.signum() {
                s if s < 0 => Ordering::Less,
                0 => Ordering::Equal,
                _ => Ordering::Greater,
            }
        } else {
            // fall back to an unambiguous structural order
            (self.d, &self.a, &self.b).cmp(&(other.d, &other.a, &other.b))
        }
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

/// Splits x as x' + m*L with x' in the half-open interval (-L/2, L/2].
///
/// Ties at L/2 map to L/2, matching the fundamental domains J_r and J_s.
pub fn reduce_mod(x: &QuadScalar, modulus: &QuadScalar) -> Result<(QuadScalar, BigInt)> {
    if !modulus.is_positive() {
        return Err(Error::NonPositiveModulus);
    }
    if !x.compatible(modulus) {
        return Err(Error::RadicandMismatch(x.radicand(), modulus.radicand()));
    }
    // m = ceil(x/L - 1/2) is the unique integer with x - mL in (-L/2, L/2]
    let t = x.checked_mul(&modulus.recip()?)?;
    let shifted = t.checked_add(&QuadScalar::from_ratio(-1, 2))?;
    let m = shifted.ceil_int();
    let reduced = x.checked_add(&(-modulus.scale_int(&m)))?;
    Ok((reduced, m))
}

/// The unimodular number e^{2 pi i theta}, kept as an exact exponent.
///
/// Canonical form has the rational part of theta in [0, 1); the surd part
/// stays exact so products of phases reduce to sums of exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseExponent {
    theta: QuadScalar,
}

impl PhaseExponent {
    pub fn new(theta: QuadScalar) -> Self {
        // reduce the rational part mod 1 into [0, 1)
        let a = theta.rational_part();
        let frac = a - a.floor();
        Self {
            theta: QuadScalar::new(frac, theta.surd_part().clone(), theta.radicand())
                .expect("radicand already square-free"),
        }
    }

    pub fn zero() -> Self {
        Self::new(QuadScalar::zero())
    }

    pub fn exponent(&self) -> &QuadScalar {
        &self.theta
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.theta.checked_add(&other.theta)?))
    }

    /// Numeric value e^{2 pi i theta}. Quarter-turn rational exponents
    /// come out exactly as +-1 or +-i.
    pub fn value(&self) -> Complex64 {
        if self.theta.is_rational() {
            let a = self.theta.rational_part();
            let quarter = a * BigRational::from_integer(BigInt::from(4));
            if quarter.is_integer() {
                let four = BigInt::from(4);
                let q: BigInt = quarter.to_integer();
                let q = (((q % &four) + &four) % &four).to_i64().unwrap_or(0);
                return match q {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
            }
        }
        let t = 2.0 * std::f64::consts::PI * self.theta.to_f64();
        Complex64::new(t.cos(), t.sin())
    }
}

impl Serialize for QuadScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            a: String,
            b: String,
            d: u64,
        }
        Repr { a: self.a.to_string(), b: self.b.to_string(), d: self.d }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            a: String,
            b: String,
            d: u64,
        }
        let r = Repr::deserialize(deserializer)?;
        let a: BigRational = r.a.parse().map_err(D::Error::custom)?;
        let b: BigRational = r.b.parse().map_err(D::Error::custom)?;
        QuadScalar::new(a, b, r.d).map_err(D::Error::custom)
    }
}
