//! Half-integers, stored exactly as twice their value.
//!
//! Corepresentation levels of SU_q(2) and the row/column labels of matrix
//! coefficients live in ½ℤ. Storing `2x` as an `i32` keeps every comparison
//! and arithmetic operation exact.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An element of ½ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    /// Construct from twice the value, so `from_twice(3)` is 3/2.
    pub fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    /// Twice the value (always an integer).
    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// True when `self - other` is an integer (same parity of doubles).
    pub fn same_parity(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    pub fn abs(self) -> HalfInt {
        HalfInt(self.0.abs())
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
