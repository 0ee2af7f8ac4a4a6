//! Exact scalars: rationals, elements of cyclotomic fields, Bernoulli numbers.

mod bernoulli;
mod cyclotomic;

pub use bernoulli::{bernoulli, zeta_at_one_minus};
pub use cyclotomic::{cyclotomic_polynomial, CycNumber};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, `p`, or a finite decimal such as `-0.125`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::invalid(format!("bad decimal `{text}`")));
        }
        let digits = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let num: BigInt = digits.parse().map_err(|_| Error::invalid(format!("bad decimal `{text}`")))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(num, den);
        return Ok(if negative { -q } else { q });
    }
    text.parse::<Rational>().map_err(|_| Error::invalid(format!("bad rational `{text}`")))
}

/// `p/q`, with `/q` omitted when `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
