//! Count scalars.
//!
//! Subword counts and Parikh matrix entries are nonnegative integers that
//! grow quickly with word length. Counting code is generic over [`Count`],
//! which only asks for checked addition and multiplication so that overflow
//! surfaces as [`Error::Overflow`](crate::Error::Overflow) instead of
//! wrapping. Fixed-width unsigned integers and `BigUint` all qualify.

use std::fmt::{Debug, Display};

use num_traits::{CheckedAdd, CheckedMul, One, Zero};

use crate::error::{Error, Result};

pub trait Count:
    Clone + Ord + Debug + Display + Zero + One + CheckedAdd + CheckedMul + Send + Sync
{
    #[inline]
    fn add_checked(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(rhs).ok_or(Error::Overflow)
    }

    #[inline]
    fn mul_checked(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(rhs).ok_or(Error::Overflow)
    }
}

impl<T> Count for T where
    T: Clone + Ord + Debug + Display + Zero + One + CheckedAdd + CheckedMul + Send + Sync
{
}

/// Converts an unsigned count into `i64`, for signed differences.
pub(crate) fn to_signed(count: u64) -> Result<i64> {
    i64::try_from(count).map_err(|_| Error::Overflow)
}
