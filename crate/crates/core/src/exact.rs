//! Exact scalar helpers: generalized binomial coefficients, p-adic valuations
//! and the string encoding used for every rational the crate prints.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::{Error, Integer, Rational, Result, Scalar};

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// `base^exp` as an exact integer.
pub fn pow_int(base: i64, exp: u64) -> Integer {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Generalized binomial coefficient `binom(x, k) = prod_{i=1..k} (x - i + 1) / i`.
///
/// Works for any top `x`; the product is accumulated incrementally so no
/// factorial is ever formed.
pub fn binom<T: Scalar>(x: &T, k: u64) -> T {
    let mut acc = T::one();
    let mut top = x.clone();
    for i in 1..=k {
        acc = acc * top.clone() / T::from_int(i as i64);
        top = top - T::one();
    }
    acc
}

pub fn binom_rational(x: &Rational, k: u64) -> Rational {
    // Integer tops below k give an exact zero at factor x - x.
    if x.is_integer() && !x.is_negative() && x.to_integer() < BigInt::from(k) {
        return Rational::zero();
    }
    binom(x, k)
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn int_valuation(p: u64, n: &Integer) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return Some(v);
        }
        n = quot;
        v += 1;
    }
}

/// The p-adic valuation of a nonzero rational; negative when `p` divides the
/// denominator. The caller is responsible for `p` being prime.
pub fn valuation(p: u64, x: &Rational) -> Result<i64> {
    let num = int_valuation(p, x.numer()).ok_or(Error::ZeroValuation)?;
    let den = int_valuation(p, x.denom()).expect("denominator is positive");
    Ok(num as i64 - den as i64)
}

/// Whether `p` divides `x` in the p-adic sense: `x = 0` or `v_p(x) >= 1`.
pub fn divides(p: u64, x: &Rational) -> bool {
    valuation(p, x).map_or(true, |v| v >= 1)
}

/// `v_p(k!)` by Legendre's formula `sum_i floor(k / p^i)`.
pub fn legendre_valuation(p: u64, k: u64) -> u64 {
    assert!(p >= 2, "Legendre's formula needs p >= 2");
    let mut total = 0;
    let mut quot = k;
    while quot > 0 {
        quot /= p;
        total += quot;
    }
    total
}

/// Trial-division primality test, adequate for the small primes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn factorial(k: u64) -> Integer {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Inverse of [`format_rational`]; also accepts unreduced fractions.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}
