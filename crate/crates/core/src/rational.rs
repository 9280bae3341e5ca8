//! Exact rational arithmetic and its text representation.
//!
//! Coefficients are stored as `Ratio<i128>`. Text form is a plain decimal
//! whenever the value has a terminating decimal expansion (`-3`, `2.5`,
//! `0.125`) and `p/q` otherwise, so every value round-trips exactly.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use crate::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn int(value: i128) -> Rational {
    Rational::from_integer(value)
}

pub fn to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// Formats `value` as an exact decimal when possible, `p/q` otherwise.
pub fn format(value: &Rational) -> String {
    let numer = *value.numer();
    let denom = *value.denom();
    if denom == 1 {
        return numer.to_string();
    }
    let mut rest = denom;
    let (mut twos, mut fives) = (0u32, 0u32);
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    if rest != 1 {
        return format!("{numer}/{denom}");
    }
    let digits = twos.max(fives);
    // numer/denom == numer * (10^digits / denom) / 10^digits
    let Some(scale) = 10i128.checked_pow(digits) else {
        return format!("{numer}/{denom}");
    };
    let Some(scaled) = numer.checked_mul(scale / denom) else {
        return format!("{numer}/{denom}");
    };
    let sign = if scaled < 0 { "-" } else { "" };
    let magnitude = scaled.unsigned_abs();
    let scale = scale as u128;
    format!(
        "{sign}{}.{:0width$}",
        magnitude / scale,
        magnitude % scale,
        width = digits as usize
    )
}

/// Parses an integer, a plain decimal (`-0.25`), or a fraction (`7/3`).
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::Format(format!("invalid rational '{text}'"));
    let text = text.trim();
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = text.split_once('/') {
        let n: i128 = parse_integer(n).ok_or_else(bad)?;
        let d: i128 = parse_integer(d).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let magnitude: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let scale = 10i128
        .checked_pow(u32::try_from(frac.len()).map_err(|_| bad())?)
        .ok_or_else(bad)?;
    let value = Rational::new(magnitude, scale);
    Ok(if negative { -value } else { value })
}

fn parse_integer(text: &str) -> Option<i128> {
    let text = text.trim();
    let body = text.strip_prefix('-').unwrap_or(text);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Result<i128> {
    let mut lcm: i128 = 1;
    for v in values {
        let d = *v.denom();
        let g = lcm.gcd(&d);
        lcm = (lcm / g)
            .checked_mul(d)
            .ok_or_else(|| Error::InvalidModel("coefficient denominators overflow".into()))?;
    }
    Ok(lcm)
}

/// Larger of `D` and `D * sum |v|`, where `D` is the common denominator of
/// `values`, or `None` on overflow. Bounds every numerator and denominator
/// that exact evaluation can produce.
pub(crate) fn scaled_magnitude<'a>(values: impl IntoIterator<Item = &'a Rational> + Clone) -> Option<i128> {
    let scale = common_denominator(values.clone()).ok()?;
    let total = values.into_iter().try_fold(0i128, |acc, v| {
        let term = v.numer().checked_abs()?.checked_mul(scale / v.denom())?;
        acc.checked_add(term)
    })?;
    Some(total.max(scale))
}

/// `value * scale` as an integer; `scale` must be a multiple of the denominator.
pub(crate) fn scaled_integer(value: &Rational, scale: i128) -> i128 {
    let scaled = value * int(scale);
    debug_assert!(scaled.is_integer());
    scaled.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_terminating_decimals() {
        assert_eq!(format(&int(-3)), "-3");
        assert_eq!(format(&Rational::new(5, 2)), "2.5");
        assert_eq!(format(&Rational::new(-1, 8)), "-0.125");
        assert_eq!(format(&Rational::new(3, 20)), "0.15");
        assert_eq!(format(&Rational::new(7, 3)), "7/3");
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(parse("0.5").unwrap(), Rational::new(1, 2));
        assert_eq!(parse("-.25").unwrap(), Rational::new(-1, 4));
        assert_eq!(parse("7/3").unwrap(), Rational::new(7, 3));
        assert_eq!(parse("+2.").unwrap(), int(2));
        for bad in ["", "-", ".", "1/0", "abc", "1e5", "1.2.3", "--1", "1/ 2x"] {
            assert!(parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    proptest! {
        #[test]
        fn text_round_trip(n in -1_000_000i128..1_000_000, d in 1i128..5_000) {
            let value = Rational::new(n, d);
            prop_assert_eq!(parse(&format(&value)).unwrap(), value);
        }
    }
}
