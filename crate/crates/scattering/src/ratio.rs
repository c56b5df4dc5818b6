//! Exact rational scalars and small helpers shared across the crate.
//!
//! All coefficients in this crate are arbitrary-precision rationals kept in
//! lowest terms; nothing here ever touches floating point.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed};

/// The scalar type used everywhere: an arbitrary-precision rational.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n / d` as a rational in lowest terms.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Generalized binomial coefficient `binom(s, k)` for rational `s`:
/// `s (s-1) ... (s-k+1) / k!`.
pub fn binom_rat(s: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc *= (s - rat(i64::from(i))) / rat(i64::from(i) + 1);
    }
    acc
}

/// Integer binomial coefficient as a rational.
pub fn binom_int(n: u64, k: u32) -> Rat {
    binom_rat(&rat(n as i64), k)
}

/// `k!` as a rational.
pub fn factorial(k: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 1..=i64::from(k) {
        acc *= rat(i);
    }
    acc
}

/// True iff `r` is an integer.
pub fn is_integer(r: &Rat) -> bool {
    r.is_integer()
}

/// True iff `r` is a nonnegative integer.
pub fn is_nonneg_integer(r: &Rat) -> bool {
    r.is_integer() && !r.is_negative()
}

/// Renders a rational as `p/q` in lowest terms, or `p` when the denominator
/// is one. This is the canonical on-disk form.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the canonical `p/q` (or `p`) form.
pub fn parse_rat(s: &str) -> crate::Result<Rat> {
    s.parse::<Rat>()
        .map_err(|e| crate::Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Serde adapter serializing a [`Rat`] as its canonical string form.
pub mod serde_rat {
    use super::{format_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// `gcd` on unsigned 64-bit integers, with `gcd(x, 0) = x`.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num::integer::gcd(a, b)
}

pub use num::traits::{One as RatOne, Zero as RatZero};
