//! Exact rational scalars.
//!
//! Sizes, interval boundaries and coordinates are machine-word rationals
//! (`Rat`, backed by `i128`); their denominators stay small by construction.
//! Aggregates whose denominators can grow without bound (weight totals,
//! objective values, volume sums) use arbitrary precision (`BigRat`).

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use std::fmt::Write as _;

pub type Rat = Ratio<i128>;
pub type BigRat = BigRational;

/// Shorthand for a reduced `p/q`.
pub fn rat(p: i128, q: i128) -> Rat {
    Ratio::new(p, q)
}

pub fn big(r: &Rat) -> BigRat {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

/// Parses `p/q`, an integer, or a decimal literal into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let s = s.trim();
    let err = || ParseRatError(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| err())?;
        let q: i128 = q.trim().parse().map_err(|_| err())?;
        if q == 0 {
            return Err(err());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let neg = int.starts_with('-');
        let int_part: i128 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| err())?
        };
        let num: i128 = frac.parse().map_err(|_| err())?;
        let den = 10i128.checked_pow(frac.len() as u32).ok_or_else(err)?;
        let frac_part = Ratio::new(num, den);
        let abs = Ratio::from_integer(int_part.abs()) + frac_part;
        return Ok(if neg || int_part < 0 { -abs } else { abs });
    }
    let v: i128 = s.parse().map_err(|_| err())?;
    Ok(Ratio::from_integer(v))
}

pub fn parse_big(s: &str) -> Result<BigRat, ParseRatError> {
    parse_rat(s).map(|r| big(&r))
}

/// `x^d` for small dimension exponents.
pub fn pow_d(x: &Rat, d: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..d {
        acc *= *x;
    }
    acc
}

pub fn pow_d_big(x: &BigRat, d: u32) -> BigRat {
    let mut acc = BigRat::one();
    for _ in 0..d {
        acc *= x;
    }
    acc
}

/// Rounds to `sig` significant decimal digits, without a float detour.
pub fn to_decimal_string(x: &BigRat, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let mut v = x.abs();
    // Find exponent e with 10^e <= v < 10^(e+1).
    let ten = BigRat::from_integer(10.into());
    let mut e: i64 = 0;
    while v >= ten {
        v /= &ten;
        e += 1;
    }
    while v < BigRat::one() {
        v *= &ten;
        e -= 1;
    }
    // v in [1, 10); scale so that `sig` digits sit left of the point.
    let mut scaled = v;
    for _ in 1..sig {
        scaled *= &ten;
    }
    let mut digits = (scaled.numer() + scaled.denom() / 2u8) / scaled.denom();
    let mut ds = digits.to_string();
    if ds.len() > sig {
        // rounding carried into an extra digit (e.g. 9.99.. -> 10.0)
        e += 1;
        ds.truncate(sig);
        digits = ds.parse().unwrap();
    }
    let ds = digits.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e >= 0 && (e as usize) < sig {
        let ip = e as usize + 1;
        out.push_str(&ds[..ip]);
        let frac = ds[ip..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    } else if e < 0 && e >= -4 {
        out.push_str("0.");
        for _ in 0..(-e - 1) {
            out.push('0');
        }
        out.push_str(ds.trim_end_matches('0'));
    } else {
        out.push_str(&ds[..1]);
        let frac = ds[1..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        write!(out, "e{}", e).unwrap();
    }
    out
}

pub fn to_f64(x: &BigRat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    (*x.numer() as f64) / (*x.denom() as f64)
}
