//! Exact rational scalars used throughout the crate.
//!
//! Every quantity in the model and solver layers is a [`Rat`]
//! (arbitrary-precision `num_rational::BigRational`). There is no
//! floating-point mode anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Rational `p/q`. Panics on `q = 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `p/q` or a plain integer, e.g. `"1/2"`, `"-3"`, `"7"`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let t = text.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::BadRational(t.to_string()))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::BadRational(t.to_string()))?;
            if q == BigInt::from(0) {
                return Err(Error::BadRational(t.to_string()));
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| Error::BadRational(t.to_string()))?;
            Ok(Rat::from_integer(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-3").unwrap(), rat_int(-3));
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" 4 / 6 ").unwrap(), rat(2, 3));
        assert_eq!(parse_rat("-1/2").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn display_round_trip() {
        for r in [rat(1, 2), rat_int(5), rat(-7, 3)] {
            assert_eq!(parse_rat(&r.to_string()).unwrap(), r);
        }
    }
}
