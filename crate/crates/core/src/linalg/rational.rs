use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar. `BigRational` keeps values reduced with a positive
/// denominator after every operation.
pub type Rational = BigRational;

pub fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Floor of a rational as an `i64`. Panics only if the value does not fit.
pub fn floor_i64(r: &Rational) -> i64 {
    let f = r.floor().to_integer();
    i64::try_from(f).expect("rational floor out of i64 range")
}

/// Reduces a rational into `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"3"`, `"-1/2"` and the like.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}

/// Serde adapter storing rationals as strings such as `"-3/4"`.
pub mod serde_rational {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(int(n)),
            Raw::Str(s) => {
                parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
            }
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "super::serde_rational")] Rational);

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<W> = v.iter().cloned().map(W).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let w: Vec<W> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|W(r)| r).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-2/4"), Some(q(-1, 2)));
        assert_eq!(parse_rational(" 7 "), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(fmt_rational(&q(6, -4)), "-3/2");
        assert_eq!(fmt_rational(&int(5)), "5");
    }

    #[test]
    fn floor_and_frac() {
        assert_eq!(floor_i64(&q(-1, 3)), -1);
        assert_eq!(frac(&q(-1, 3)), q(2, 3));
        assert_eq!(frac(&q(7, 2)), q(1, 2));
    }
}
