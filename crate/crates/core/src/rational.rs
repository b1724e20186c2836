//! Exact rationals and their textual form.
//!
//! Every rational that leaves the crate is written as `p/q` with `q > 0` and
//! `gcd(|p|, q) = 1`; the parser accepts `p/q` as well as bare integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::MvError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Formats as `p/q`, including `q = 1`.
pub fn to_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Short human form: integers without the `/1`.
pub fn to_short(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        to_text(r)
    }
}

pub fn parse(s: &str) -> Result<Rational, MvError> {
    let s = s.trim();
    let bad = || MvError::Parse {
        line: 0,
        message: format!("not an exact rational: `{s}`"),
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Smallest integer `>= r`.
pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for (p, q) in [(0, 1), (1, 2), (-3, 4), (6, 4), (5, 1)] {
            let r = rat(p, q);
            assert_eq!(parse(&to_text(&r)).unwrap(), r);
        }
        assert_eq!(to_text(&rat(6, 4)), "3/2");
        assert_eq!(to_text(&int(2)), "2/1");
        assert_eq!(to_short(&int(2)), "2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse("1.5").is_err());
    }

    #[test]
    fn denominators() {
        let v = [rat(1, 4), rat(1, 6), int(3)];
        assert_eq!(common_denominator(v.iter()), BigInt::from(12));
        assert_eq!(ceil(&rat(7, 3)), BigInt::from(3));
    }
}
