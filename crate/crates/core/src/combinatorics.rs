//! Exact integers, exact rationals, and the zero-extended binomial coefficient.
//!
//! Every scalar that the planner touches (channel strengths, qualities, loads,
//! power exponents, delivery times) lives in [`Rational`]; counts of subsets
//! and messages live in [`BigNat`]. Both are arbitrary precision, so nothing
//! in the crate ever rounds. The canonical text form is `p/q` in lowest terms
//! with the `/q` dropped when the denominator is one; this rendering is
//! bit-exact and used in every file format the CLI emits.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

/// An arbitrary-precision non-negative integer; the result type of [`binom`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigNat(BigUint);

/// Error produced by [`rational_of`] naming the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in rational {0:?}")]
    ZeroDenominator(String),
}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Builds `numer/denom` from machine integers. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "rational denominator must be nonzero");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// True when the value is an integer (denominator one).
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Reciprocal. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "cannot invert zero");
        Rational(self.0.recip())
    }

    /// Nearest `f64`; only used for plotting-oriented output and the
    /// finite-power rendering.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact decimal rendering with `sig` significant digits (round half away
    /// from zero), computed by big-integer long division so it never goes
    /// through floating point. `sig` must be at least 1.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let num = self.0.numer().magnitude().clone();
        let den = self.0.denom().magnitude().clone();

        // Find the decimal exponent e with 10^e <= num/den < 10^(e+1).
        let mut exp: i64 = 0;
        let ten = BigUint::from(10u32);
        let mut scaled_num = num.clone();
        let mut scaled_den = den.clone();
        while scaled_num < scaled_den {
            scaled_num *= &ten;
            exp -= 1;
        }
        while scaled_num >= &scaled_den * &ten {
            scaled_den *= &ten;
            exp += 1;
        }

        // digits = round(num/den * 10^(sig-1-e)) with exactly `sig` digits.
        let shift = sig as i64 - 1 - exp;
        let (mut n, mut d) = (num, den);
        if shift >= 0 {
            n *= ten.pow(shift as u32);
        } else {
            d *= ten.pow((-shift) as u32);
        }
        let (q, r) = n.div_rem(&d);
        let mut digits = q;
        if &r * 2u32 >= d {
            digits += 1u32;
        }
        let mut s = digits.to_string();
        // Rounding can carry into one extra digit (e.g. 999.6 -> 1000).
        let mut carry_exp = exp;
        if s.len() > sig {
            s.truncate(sig);
            carry_exp += 1;
        }

        let point = carry_exp + 1; // digits before the decimal point
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if point <= 0 {
            out.push_str("0.");
            for _ in 0..(-point) {
                out.push('0');
            }
            out.push_str(&s);
        } else if (point as usize) >= s.len() {
            out.push_str(&s);
            for _ in 0..(point as usize - s.len()) {
                out.push('0');
            }
        } else {
            out.push_str(&s[..point as usize]);
            out.push('.');
            out.push_str(&s[point as usize..]);
        }
        out
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        rational_of(s)
    }
}

impl From<BigNat> for Rational {
    fn from(n: BigNat) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n.0)))
    }
}

impl From<&BigNat> for Rational {
    fn from(n: &BigNat) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n.0.clone())))
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl BigNat {
    pub fn zero() -> Self {
        BigNat(BigUint::zero())
    }

    pub fn one() -> Self {
        BigNat(BigUint::one())
    }

    pub fn from_u64(n: u64) -> Self {
        BigNat(BigUint::from(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for BigNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for BigNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for BigNat {
    type Output = BigNat;
    fn add(self, rhs: BigNat) -> BigNat {
        BigNat(self.0 + rhs.0)
    }
}

impl PartialEq<u64> for BigNat {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl PartialOrd<u64> for BigNat {
    fn partial_cmp(&self, other: &u64) -> Option<std::cmp::Ordering> {
        self.0.partial_cmp(&BigUint::from(*other))
    }
}

/// Binomial coefficient `n choose k` under the zero-extension convention:
/// `n!/((n-k)! k!)` when `n >= k`, and `0` when `n < k`.
///
/// Computed by multiplicative accumulation, dividing out each step exactly,
/// so intermediate values never leave the integers.
pub fn binom(n: u64, k: u64) -> BigNat {
    if k > n {
        return BigNat::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    BigNat(acc)
}

/// Binomial coefficient as a [`Rational`], for use inside load formulas.
pub fn binom_r(n: u64, k: u64) -> Rational {
    Rational::from(binom(n, k))
}

/// Parses `p`, `p/q`, or a terminating decimal into an exact [`Rational`].
///
/// Decimals are expanded exactly (`"0.8"` is `4/5`, not a float). A leading
/// `-` is accepted on the whole token; anything else malformed, and any zero
/// denominator, is reported with the offending token.
pub fn rational_of(text: &str) -> Result<Rational, ParseRationalError> {
    let token = text.trim();
    let malformed = || ParseRationalError::Malformed(text.to_string());
    if token.is_empty() {
        return Err(malformed());
    }
    let (neg, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    if body.is_empty() {
        return Err(malformed());
    }

    let value = if let Some((num, den)) = body.split_once('/') {
        let num: BigInt = parse_digits(num).ok_or_else(malformed)?;
        let den: BigInt = parse_digits(den).ok_or_else(malformed)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(text.to_string()));
        }
        BigRational::new(num, den)
    } else if let Some((int, frac)) = body.split_once('.') {
        if int.is_empty() && frac.is_empty() {
            return Err(malformed());
        }
        let int: BigInt = if int.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(int).ok_or_else(malformed)?
        };
        let frac_digits = frac.len() as u32;
        let frac: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(frac).ok_or_else(malformed)?
        };
        let scale = BigInt::from(10u32).pow(frac_digits);
        BigRational::new(int * &scale + frac, scale)
    } else {
        BigRational::from_integer(parse_digits(body).ok_or_else(malformed)?)
    };

    Ok(Rational(if neg { -value } else { value }))
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
