//! The coefficient field every algebraic type is generic over.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An exact, totally ordered field of rationals.
///
/// Canonical forms rely on structural equality meaning mathematical
/// equality, so floating-point types are deliberately not scalars; they only
/// appear at the numeric evaluation boundary (see
/// [`RationalFunc::eval_float`](crate::RationalFunc::eval_float)).
pub trait Scalar:
    Clone + Debug + Display + FromStr + Ord + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Smallest integer `>= self`, if non-negative and representable as an index.
    fn ceil_index(&self) -> Option<u64>;

    /// Image in `Z/p` for a prime `p < 2^32`; `None` if the denominator vanishes there.
    fn residue(&self, p: u64) -> Option<u64>;

    /// The scalar value of a sequence index.
    fn from_index(n: u64) -> Self {
        Self::from_u64(n).expect("sequence index does not fit the scalar type")
    }
}

impl<I> Scalar for Ratio<I>
where
    I: Clone + Integer + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static,
    Ratio<I>: Display + FromStr + Num + Signed + FromPrimitive + ToPrimitive,
{
    fn ceil_index(&self) -> Option<u64> {
        if self.is_negative() {
            return None;
        }
        self.ceil().to_integer().to_u64()
    }

    fn residue(&self, p: u64) -> Option<u64> {
        let m = I::from_u64(p)?;
        let num = self.numer().mod_floor(&m).to_u64()?;
        let den = self.denom().mod_floor(&m).to_u64()?;
        (den != 0).then(|| num * mod_inverse(den, p) % p)
    }
}

/// Inverse of a nonzero `a` modulo the prime `p`, by Fermat.
pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Parses an integer or `p/q` literal, with an optional leading minus sign.
pub(crate) fn parse_scalar<T: Scalar>(text: &str) -> Option<T> {
    let text = text.trim();
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, text),
    };
    let valid = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let ok = match body.split_once('/') {
        Some((p, q)) => valid(p) && valid(q) && q.bytes().any(|b| b != b'0'),
        None => valid(body),
    };
    if !ok {
        return None;
    }
    let value: T = body.parse().ok()?;
    Some(if neg { -value } else { value })
}
