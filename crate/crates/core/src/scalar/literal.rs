//! Text literals for scalars.
//!
//! ```text
//! rational := ["+" | "-"] digits ["/" digits]
//! cyclo    := ["+" | "-"] term (("+" | "-") term)*
//! term     := unsigned-rational ["*" zpow] | zpow
//! zpow     := "z" ["^" digits]
//! ```
//!
//! Whitespace is ignored. `z` denotes a primitive fifth root of unity and
//! any exponent is accepted (reduced mod 5).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Cyclo5, Rational, ScalarError};

fn err(literal: &str, reason: impl Into<String>) -> ScalarError {
    ScalarError::Parse { literal: literal.to_string(), reason: reason.into() }
}

fn parse_unsigned(literal: &str, s: &str) -> Result<Rational, ScalarError> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(n) || !digits(d) {
        return Err(err(literal, format!("malformed number {s:?}")));
    }
    let n: BigInt = n.parse().map_err(|_| err(literal, "bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| err(literal, "bad denominator"))?;
    if d.is_zero() {
        return Err(err(literal, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Parses `"n"` or `"n/d"` with an optional sign.
pub fn parse_rational(literal: &str) -> Result<Rational, ScalarError> {
    let s: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, &s[..]),
    };
    let q = parse_unsigned(literal, body)?;
    Ok(if neg { -q } else { q })
}

/// Parses a polynomial in `z`, e.g. `"1+2*z^3"` or `"-z/1"`.
pub fn parse_cyclo(literal: &str) -> Result<Cyclo5, ScalarError> {
    let s: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err(literal, "empty literal"));
    }
    // Split into signed terms.
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !s[..i].ends_with('^') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);

    let mut powers: [Rational; 5] = Default::default();
    for term in terms {
        let (neg, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(err(literal, "dangling sign"));
        }
        let (coeff, zpart) = match body.find('z') {
            None => (parse_unsigned(literal, body)?, None),
            Some(0) => (Rational::one(), Some(&body[1..])),
            Some(pos) => {
                let c = body[..pos].strip_suffix('*').ok_or_else(|| err(literal, "expected '*' before z"))?;
                (parse_unsigned(literal, c)?, Some(&body[pos + 1..]))
            }
        };
        let exp: u64 = match zpart {
            None => 0,
            Some("") => 1,
            Some(rest) => rest.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or_else(|| err(literal, format!("bad exponent in {term:?}")))?,
        };
        let k = (exp % 5) as usize;
        powers[k] += if neg { -coeff } else { coeff };
    }
    Ok(Cyclo5::from_powers(&powers))
}
