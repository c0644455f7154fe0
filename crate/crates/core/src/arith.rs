//! Exact integer and rational helpers: cached binomials, generalized
//! binomials, multinomials and decimal rendering of rationals.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

const TABLE_ROWS: usize = 320;

fn pascal() -> &'static Vec<Vec<BigInt>> {
    static TABLE: OnceLock<Vec<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(TABLE_ROWS);
        rows.push(vec![BigInt::one()]);
        for u in 1..TABLE_ROWS {
            let prev = &rows[u - 1];
            let mut row = Vec::with_capacity(u + 1);
            row.push(BigInt::one());
            for l in 1..u {
                row.push(&prev[l - 1] + &prev[l]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        rows
    })
}

/// C(u, l) for non-negative u; zero when l > u.
pub fn binom(u: u64, l: u64) -> BigInt {
    if l > u {
        return BigInt::zero();
    }
    if (u as usize) < TABLE_ROWS {
        return pascal()[u as usize][l as usize].clone();
    }
    let l = l.min(u - l);
    let mut acc = BigInt::one();
    for j in 0..l {
        acc *= u - j;
        acc /= j + 1;
    }
    acc
}

/// Generalized binomial u(u-1)...(u-l+1)/l! for any integer u.
/// A negative lower index gives 0.
pub fn binom_signed(u: i64, l: i64) -> BigInt {
    if l < 0 {
        return BigInt::zero();
    }
    if u >= 0 {
        return binom(u as u64, l as u64);
    }
    // C(u, l) = (-1)^l C(l - u - 1, l)
    let v = binom((l - u - 1) as u64, l as u64);
    if l % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Binomial on signed arguments with the plain combinatorial convention:
/// zero unless 0 <= l <= u.
pub fn binom_i(u: i64, l: i64) -> BigInt {
    if u < 0 || l < 0 || l > u {
        BigInt::zero()
    } else {
        binom(u as u64, l as u64)
    }
}

/// n! / (a! b! c!) with b = n - a - c; zero outside the simplex.
pub fn trinomial(n: i64, a: i64, c: i64) -> BigInt {
    let b = n - a - c;
    if a < 0 || c < 0 || b < 0 {
        return BigInt::zero();
    }
    binom(n as u64, a as u64) * binom((n - a) as u64, c as u64)
}

/// x (x-1) ... (x-w+1).
pub fn falling(x: u64, w: u64) -> BigInt {
    if w > x {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..w {
        acc *= x - j;
    }
    acc
}

pub fn factorial(x: u64) -> BigInt {
    falling(x, x)
}

/// Renders a rational as "p/q" (always with a denominator).
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses "p/q" or a plain integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("`{s}`: zero denominator")));
            }
            Ok(BigRational::new(parse_int(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Fixed-point decimal with `places` digits after the point, truncated toward zero.
pub fn to_fixed(r: &BigRational, places: usize) -> String {
    let neg = r.is_negative();
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = (r.numer().abs() * &scale).div_floor(r.denom());
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let mut out = String::new();
    if neg && !scaled.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if places > 0 {
        let frac = frac_part.to_string();
        out.push('.');
        out.push_str(&"0".repeat(places - frac.len()));
        out.push_str(&frac);
    }
    out
}

/// Scientific notation with `digits` significant digits, truncated.
pub fn to_scientific(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    // find e with 10^e <= num/den < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10u32);
    let pow = |x: i64| ten.pow(x.unsigned_abs() as u32);
    let ge = |e: i64| {
        if e >= 0 {
            num >= &den * pow(e)
        } else {
            &num * pow(e) >= den
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let mantissa = if shift >= 0 {
        (&num * pow(shift)).div_floor(&den)
    } else {
        num.div_floor(&(&den * pow(shift)))
    };
    let m = mantissa.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&m[..1]);
    if m.len() > 1 {
        out.push('.');
        out.push_str(&m[1..]);
    }
    out.push_str(&format!("e{e}"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binom(4, 2), BigInt::from(6));
        assert_eq!(binom(5, 0), BigInt::from(1));
        assert_eq!(binom(3, 5), BigInt::zero());
        assert_eq!(binom(400, 2), BigInt::from(79800));
        assert_eq!(binom(400, 398), BigInt::from(79800));
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binom_signed(-2, 2), BigInt::from(3));
        assert_eq!(binom_signed(5, -1), BigInt::zero());
        for k in 0..8 {
            let want = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(binom_signed(-1, k), BigInt::from(want));
        }
        // falling product definition
        for u in -6i64..7 {
            for l in 0i64..6 {
                let mut p = BigRational::one();
                for j in 0..l {
                    p *= BigRational::from_integer(BigInt::from(u - j));
                    p /= BigRational::from_integer(BigInt::from(j + 1));
                }
                assert_eq!(
                    BigRational::from_integer(binom_signed(u, l)),
                    p,
                    "C({u},{l})"
                );
            }
        }
    }

    #[test]
    fn trinomials() {
        assert_eq!(trinomial(9, 5, 1), BigInt::from(504));
        assert_eq!(trinomial(3, 1, 1), BigInt::from(6));
        assert_eq!(trinomial(3, 3, 1), BigInt::zero());
    }

    #[test]
    fn rational_round_trip() {
        let r = BigRational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(fmt_rational(&r), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), r);
        assert_eq!(
            parse_rational("7").unwrap(),
            BigRational::from_integer(7.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimals() {
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(to_fixed(&third, 5), "0.33333");
        assert_eq!(to_fixed(&-third.clone(), 2), "-0.33");
        assert_eq!(to_scientific(&third, 3), "3.33e-1");
        let big = BigRational::from_integer(12345.into());
        assert_eq!(to_scientific(&big, 2), "1.2e4");
        let tiny = BigRational::new(15.into(), BigInt::from(10).pow(28));
        assert_eq!(to_scientific(&tiny, 2), "1.5e-27");
    }
}
