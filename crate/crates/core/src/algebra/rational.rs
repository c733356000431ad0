//! Exact rationals and their canonical string form.

use dashu_int::IBig;
pub use dashu_ratio::RBig as Rational;

use crate::error::{Error, Result};

pub fn int(n: i64) -> Rational {
    Rational::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::from(n) / Rational::from(d)
}

pub fn from_ibig(n: IBig) -> Rational {
    Rational::from(n)
}

pub fn is_zero(q: &Rational) -> bool {
    *q == Rational::ZERO
}

pub fn is_integer(q: &Rational) -> bool {
    q.denominator().is_one()
}

/// `q` as a machine integer if it is one and fits.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if !is_integer(q) {
        return None;
    }
    i64::try_from(q.numerator().clone()).ok()
}

/// Nonnegative least common multiple.
pub fn lcm(a: &IBig, b: &IBig) -> IBig {
    use dashu_base::Gcd;
    if *a == IBig::ZERO || *b == IBig::ZERO {
        return IBig::ZERO;
    }
    let g = IBig::from(a.gcd(b));
    let l = a * b / g;
    if l < IBig::ZERO {
        -l
    } else {
        l
    }
}

pub fn pow(q: &Rational, n: usize) -> Rational {
    q.pow(n as isize)
}

/// Accepts `p`, `p/q`, optional sign, ASCII or U+2212 minus, surrounding spaces.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let cleaned: String = s.trim().replace('\u{2212}', "-").chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (cleaned.as_str(), None),
    };
    let n: IBig = num.trim_start_matches('+').parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    let d: IBig = match den {
        Some(d) => d.trim_start_matches('+').parse().map_err(|_| Error::Parse(format!("bad rational '{s}'")))?,
        None => IBig::ONE,
    };
    if d == IBig::ZERO {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(Rational::from(n) / Rational::from(d))
}

pub fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

/// Canonical `p/q` form, `p` when `q = 1`.
pub fn fmt(q: &Rational) -> String {
    if is_integer(q) {
        q.numerator().to_string()
    } else {
        format!("{}/{}", q.numerator(), q.denominator())
    }
}

pub fn fmt_list(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(fmt).collect()
}

pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(qs.iter().map(fmt))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(fmt(&rat(6, -4)), "-3/2");
        assert_eq!(fmt(&rat(8, 4)), "2");
        assert_eq!(fmt(&int(0)), "0");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("\u{2212}274").unwrap(), int(-274));
        assert_eq!(parse_rational(" 3/-6 ").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_list("0,1/2,-3").unwrap(), vec![int(0), rat(1, 2), int(-3)]);
    }

    #[test]
    fn roundtrip() {
        for q in [rat(-7, 3), int(12), rat(1, 1000)] {
            assert_eq!(parse_rational(&fmt(&q)).unwrap(), q);
        }
    }
}
