//! Exact arithmetic kernel.
//!
//! Everything above this module is written against the [`Ring`] and [`Field`]
//! traits so the same code runs over `Q`, over `Q(n)` and over `Q(n)(k)`.
//! Floating point scalars are deliberately not implemented: every algorithm in
//! the crate decides equality with zero.

mod linalg;
mod poly;
mod ratfunc;
mod roots;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use linalg::{solve_linear, LinearError, LinearSolution};
pub use poly::UniPoly;
pub use ratfunc::RatFunc;
pub use roots::{integer_roots, integer_roots_rational};

/// Commutative ring with exact division of multiples.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// `self / other` where the quotient is known to lie in the ring.
    ///
    /// Panics if `other` is zero or does not divide `self`.
    fn exact_div(&self, other: &Self) -> Self;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A field that embeds `Z` and can be specialized to `Q` at an integer point.
///
/// `specialize` maps every parameter of the field (the `n` of `Q(n)`, and so
/// on up a tower) to the same integer; it returns `None` where a denominator
/// vanishes.
pub trait Field: Ring + Div<Output = Self> + fmt::Display {
    fn inv(&self) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn specialize(&self, at: &BigInt) -> Option<BigRational>;
    /// The value as an integer, if it is a constant integer.
    fn as_integer(&self) -> Option<BigInt>;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    /// Nesting depth in the tower: 0 for `Q`, 1 for `Q(n)`, 2 for `Q(n)(k)`.
    const DEPTH: usize = 0;

    /// Greatest common divisor of two polynomials over this field, up to a unit.
    ///
    /// Plain Euclid by default; rational function fields override it with a
    /// fraction-free variant that keeps coefficient growth in check.
    fn poly_gcd(a: &UniPoly<Self>, b: &UniPoly<Self>) -> UniPoly<Self>
    where
        Self: Sized,
    {
        poly::euclid_gcd(a, b)
    }
}

impl Ring for BigRational {
    fn exact_div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero rational");
        self / other
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        self.recip()
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn specialize(&self, _at: &BigInt) -> Option<BigRational> {
        Some(self.clone())
    }

    fn as_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.to_integer())
    }
}

/// Parse `p/q` or `p` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Canonical text of a rational: `p` or `p/q`.
pub fn rational_text(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Integer as a rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
