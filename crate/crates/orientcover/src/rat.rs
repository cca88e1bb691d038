//! Exact rational scalars.
//!
//! Every quantity the algorithms compare against a threshold (LP values,
//! slacks, costs, the 1/6 rounding bar) is a [`Rat`]. There is no floating
//! point anywhere in the solver core: tightness detection and the rounding
//! threshold are exact comparisons.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rat = num_rational::BigRational;

/// Builds a rational from an integer numerator and denominator.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational from an integer.
pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Sum of a slice of rationals.
pub fn rat_sum<'a, I: IntoIterator<Item = &'a Rat>>(vals: I) -> Rat {
    let mut acc = Rat::zero();
    for v in vals {
        acc += v;
    }
    acc
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a decimal approximation with the given number of fractional digits.
///
/// Only for display; never used in comparisons.
pub fn fmt_rat_decimal(r: &Rat, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * Rat::from_integer(scale.clone())).round();
    let v = scaled.numer().clone();
    let negative = v.is_negative();
    let abs = v.abs();
    let (int_part, frac_part) = (abs.clone() / &scale, abs % &scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{frac:0>width$}",
            frac = frac_part,
            width = digits as usize
        )
    }
}

/// Parses the `p/q` (or plain integer) form produced by [`fmt_rat`].
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.trim().parse().ok()?;
            let den: BigInt = q.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Rat::new(num, den))
            }
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(num))
        }
    }
}

/// `1/6`, the rounding threshold used by the iterative solver.
pub fn one_sixth() -> Rat {
    rat(1, 6)
}

/// The multiplicative guarantee of the iterative solver: `6`.
pub fn approximation_factor() -> Rat {
    rat_int(6)
}

#[allow(unused_imports)]
pub(crate) use num_traits::{One as _, Zero as _};
