//! Exact, unreduced ratios of counts.

use std::cmp::Ordering;
use std::fmt;

/// `count / total`, kept unreduced so both counts stay visible.
///
/// Equality and ordering compare the rational values, not the raw counts.
#[derive(Clone, Copy, Debug)]
pub struct Fraction {
    pub count: u64,
    pub total: u64,
}

impl Fraction {
    /// Panics if `total` is zero.
    pub fn new(count: u64, total: u64) -> Self {
        assert!(total > 0, "fraction with zero denominator");
        Fraction { count, total }
    }

    pub fn zero() -> Self {
        Fraction { count: 0, total: 1 }
    }

    pub fn as_f64(self) -> f64 {
        self.count as f64 / self.total as f64
    }

    /// Percentage with exactly two decimals, rounded half up, computed in integers.
    pub fn percent_2dp(self) -> String {
        let scaled = (self.count as u128 * 10_000 * 2 + self.total as u128) / (2 * self.total as u128);
        format!("{}.{:02}", scaled / 100, scaled % 100)
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.count as u128 * other.total as u128).cmp(&(other.count as u128 * self.total as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.count, self.total)
    }
}
