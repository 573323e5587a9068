//! Exact integer and rational linear algebra.
//!
//! Everything downstream (modular matrices, lattices of vertex groups,
//! abelianization ranks) depends on exact arithmetic: monodromy finiteness
//! and lattice membership are brittle under rounding, so no floating point
//! appears anywhere in this crate.

mod lattice;
mod matrix;
mod normal_form;

pub use lattice::Lattice;
pub use matrix::{IntMatrix, RatMatrix};
pub use normal_form::{hnf, int_kernel, int_solve, snf, Snf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with positive
/// denominator (canonical zero is 0/1). `BigRational` maintains exactly
/// this invariant.
pub type Rat = BigRational;

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Serializes a rational as `"p/q"`, omitting `/q` when the denominator is 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `"p/q"` (or plain `"p"`) rational format.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: Int = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: Int = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Least common multiple of the denominators of an iterator of rationals.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rat>>(it: I) -> Int {
    let mut l = Int::one();
    for r in it {
        l = num_integer::lcm(l, r.denom().clone());
    }
    l.abs()
}
