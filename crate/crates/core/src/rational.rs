//! Exact rational helpers: strict `p/q` parsing, canonical printing, floor and
//! ceiling, and fixed-precision decimal rendering for plotting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qz(n: &Z) -> Q {
    Q::from_integer(n.clone())
}

/// Parses `p` or `p/q`. The fraction must already be in lowest terms with a
/// positive denominator, so every rational has exactly one accepted spelling.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::RationalFormat(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let num = parse_int_strict(num).ok_or_else(bad)?;
    match den {
        None => Ok(Q::from_integer(num)),
        Some(d) => {
            let d = parse_int_strict(d).ok_or_else(bad)?;
            if !d.is_positive() || d.is_one() || !num.gcd(&d).is_one() {
                return Err(bad());
            }
            Ok(Q::new_raw(num, d))
        }
    }
}

fn parse_int_strict(s: &str) -> Option<Z> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    if s.starts_with('-') && digits == "0" {
        return None;
    }
    s.parse().ok()
}

/// Parses a comma separated list of rationals.
pub fn parse_q_list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(parse_q).collect()
}

pub fn parse_z_list(s: &str) -> Result<Vec<Z>> {
    s.split(',')
        .map(|t| parse_int_strict(t.trim()).ok_or_else(|| Error::RationalFormat(t.to_string())))
        .collect()
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_q_list(xs: &[Q]) -> String {
    xs.iter().map(fmt_q).collect::<Vec<_>>().join(",")
}

pub fn floor_q(x: &Q) -> Z {
    x.floor().to_integer()
}

pub fn ceil_q(x: &Q) -> Z {
    x.ceil().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac_q(x: &Q) -> Q {
    x - x.floor()
}

/// `ceil(a / b)` for `b > 0`.
pub fn ceil_div(a: &Z, b: &Z) -> Z {
    debug_assert!(b.is_positive());
    let (d, r) = a.div_mod_floor(b);
    if r.is_zero() {
        d
    } else {
        d + 1
    }
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Z {
    xs.into_iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()))
}

/// Decimal rendering with `digits` significant digits, truncated toward zero.
/// Only used for plotting coordinates.
pub fn to_decimal(x: &Q, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    let int_part = a.trunc().to_integer();
    let int_str = int_part.to_string();
    let mut frac = a - Q::from_integer(int_part.clone());
    let used = if int_part.is_zero() { 0 } else { int_str.len() };
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int_str);
    if used >= digits || frac.is_zero() {
        return out;
    }
    out.push('.');
    let mut significant = used;
    let mut emitted = 0usize;
    let ten = Q::from_integer(Z::from(10));
    while significant < digits && !frac.is_zero() {
        frac *= &ten;
        let d = frac.trunc().to_integer();
        frac -= Q::from_integer(d.clone());
        out.push_str(&d.to_string());
        emitted += 1;
        if significant > 0 || !d.is_zero() {
            significant += 1;
        }
        if emitted > 4 * digits + 64 {
            break;
        }
    }
    out
}
