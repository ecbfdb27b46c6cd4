//! Precision helpers over `rug` floats and complex numbers.

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

pub fn float(prec: u32, value: impl Into<f64>) -> Float {
    Float::with_val(prec, value.into())
}

pub fn float_from_rational(prec: u32, value: &Rational) -> Float {
    Float::with_val(prec, value)
}

pub fn complex_from_rational(prec: u32, value: &Rational) -> Complex {
    Complex::with_val(prec, (value, 0))
}

pub fn complex_zero(prec: u32) -> Complex {
    Complex::new(prec)
}

pub fn complex_one(prec: u32) -> Complex {
    Complex::with_val(prec, 1)
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Natural log of `|z|`, as `f64`; `-inf` for zero.
pub fn ln_abs(z: &Complex) -> f64 {
    let a = abs(z);
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    a.ln().to_f64()
}

pub fn ln_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    Float::with_val(x.prec(), x.ln_ref()).to_f64()
}

pub fn ln_rational(x: &Rational) -> f64 {
    if *x == 0 {
        return f64::NEG_INFINITY;
    }
    let f = Float::with_val(128, x);
    f.abs().ln().to_f64()
}

/// Euclidean norm of a complex vector.
pub fn norm(v: &[Complex]) -> Float {
    let prec = v.first().map(|z| z.prec().0).unwrap_or(DEFAULT_PRECISION);
    let mut s = Float::new(prec);
    for z in v {
        s += Float::with_val(prec, z.norm_ref());
    }
    s.sqrt()
}

/// Hermitian product `sum u_i * conj(v_i)`.
pub fn hermitian(u: &[Complex], v: &[Complex]) -> Complex {
    let prec = u.first().map(|z| z.prec().0).unwrap_or(DEFAULT_PRECISION);
    let mut s = Complex::new(prec);
    for (a, b) in u.iter().zip(v) {
        s += Complex::with_val(prec, a * Complex::with_val(prec, b.conj_ref()));
    }
    s
}

/// Norm of `u ∧ v`.
pub fn wedge_norm(u: &[Complex], v: &[Complex]) -> Float {
    let prec = u.first().map(|z| z.prec().0).unwrap_or(DEFAULT_PRECISION);
    let mut s = Float::new(prec);
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let t = Complex::with_val(prec, &u[i] * &v[j]) - Complex::with_val(prec, &u[j] * &v[i]);
            s += Float::with_val(prec, t.norm_ref());
        }
    }
    s.sqrt()
}

/// Parses `"p/q"`, an integer, or a decimal with optional exponent as an exact rational.
/// The second component counts significant decimal digits (`None` for fractions and integers).
pub fn parse_rational(text: &str) -> Result<(Rational, Option<u32>)> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: Integer = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: Integer = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok((Rational::from((p, q)), None));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("no digits in {s:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad decimal {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(digits.parse::<Integer>().unwrap_or_default());
    let shift = exponent - frac_part.len() as i64;
    let ten = Rational::from(10);
    if shift >= 0 {
        value *= ten.pow(shift as i32);
    } else {
        value /= ten.pow((-shift) as i32);
    }
    if neg {
        value = -value;
    }
    let significant = digits.trim_start_matches('0').len() as u32;
    let is_decimal = !frac_part.is_empty() || exponent != 0;
    Ok((value, if is_decimal { Some(significant.max(1)) } else { None }))
}

/// Bits needed to carry `digits` decimal digits plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

/// Binomial coefficient as `f64` log.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn ln_factorial(n: u64) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}
