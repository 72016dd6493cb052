//! Value types shared by the I-side and K-side bound families.

use std::fmt;

/// Which side of the ratio a bound sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    /// The recurrence map swaps sides.
    pub fn flipped(self) -> Side {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Lower => write!(f, "lower"),
            Side::Upper => write!(f, "upper"),
        }
    }
}

/// Verdict of a validity-table lookup, with the governing condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    /// The condition that grants validity, or the one that fails.
    pub reason: &'static str,
}

impl Validity {
    pub fn valid(reason: &'static str) -> Self {
        Validity {
            valid: true,
            reason,
        }
    }

    pub fn invalid(reason: &'static str) -> Self {
        Validity {
            valid: false,
            reason,
        }
    }
}

/// A single evaluated bound at a query point.
///
/// `value > 0` for every family and every `x > 0`; nothing stronger is
/// promised in general (upper bounds may exceed 1 near the bottom of the
/// order range).
#[derive(Debug, Clone)]
pub struct BoundValue<S> {
    pub value: f64,
    pub spec: S,
    pub validity: Validity,
    pub nu: f64,
    pub x: f64,
    /// Compact family tag for reports, e.g. `b0`, `Btilde2`, `cf1(B0)`.
    pub label: String,
}

/// A paired lower/upper bound.
#[derive(Debug, Clone)]
pub struct Enclosure<S> {
    pub lower: BoundValue<S>,
    pub upper: BoundValue<S>,
}

impl<S> Enclosure<S> {
    pub fn width(&self) -> f64 {
        self.upper.value - self.lower.value
    }

    /// Relative gap `upper/lower - 1`, the sharpness measure used throughout.
    pub fn gap(&self) -> f64 {
        self.upper.value / self.lower.value - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_flips() {
        assert_eq!(Side::Lower.flipped(), Side::Upper);
        assert_eq!(Side::Upper.flipped(), Side::Lower);
    }
}
