//! Rule numbering for the nine-neighborhood linear rules.
//!
//! A rule number is a 9-bit mask. Bit `k` selects the fundamental rule of weight
//! `2^k`, which makes the next state of a cell depend on one neighbor:
//!
//! ```text
//!  64 128 256
//!  32   1   2
//!  16   8   4
//! ```
//!
//! Offsets are `(dr, dc)` with `dr = +1` one row down and `dc = +1` one column right.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One of the nine single-neighbor rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fundamental(u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NeighborOffset {
    pub dr: i8,
    pub dc: i8,
}

impl NeighborOffset {
    pub const fn new(dr: i8, dc: i8) -> Self {
        Self { dr, dc }
    }

    pub fn negated(self) -> Self {
        Self::new(-self.dr, -self.dc)
    }
}

impl fmt::Display for NeighborOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+}, {:+})", self.dr, self.dc)
    }
}

// Indexed by bit position.
const OFFSETS: [NeighborOffset; 9] = [
    NeighborOffset::new(0, 0),
    NeighborOffset::new(0, 1),
    NeighborOffset::new(1, 1),
    NeighborOffset::new(1, 0),
    NeighborOffset::new(1, -1),
    NeighborOffset::new(0, -1),
    NeighborOffset::new(-1, -1),
    NeighborOffset::new(-1, 0),
    NeighborOffset::new(-1, 1),
];

impl Fundamental {
    pub const ALL: [Fundamental; 9] = [
        Fundamental(1),
        Fundamental(2),
        Fundamental(4),
        Fundamental(8),
        Fundamental(16),
        Fundamental(32),
        Fundamental(64),
        Fundamental(128),
        Fundamental(256),
    ];

    /// The five fundamentals the other four are transposes of.
    pub const BASIC: [Fundamental; 5] = [
        Fundamental(1),
        Fundamental(2),
        Fundamental(4),
        Fundamental(8),
        Fundamental(16),
    ];

    pub fn from_weight(weight: u32) -> Result<Self> {
        if weight.is_power_of_two() && weight <= 256 {
            Ok(Fundamental(weight as u16))
        } else {
            Err(Error::NotFundamental(weight))
        }
    }

    pub fn weight(self) -> u16 {
        self.0
    }

    /// Bit position of this fundamental inside a rule number.
    pub fn bit(self) -> u32 {
        self.0.trailing_zeros()
    }

    pub fn offset(self) -> NeighborOffset {
        OFFSETS[self.bit() as usize]
    }

    /// The fundamental whose rule matrix is the transpose of this one's.
    pub fn transpose_partner(self) -> Fundamental {
        match self.0 {
            1 => self,
            w @ (2 | 4 | 8 | 16) => Fundamental(w << 4),
            w => Fundamental(w >> 4),
        }
    }

    pub fn as_rule(self) -> RuleNumber {
        RuleNumber(self.0)
    }
}

impl fmt::Display for Fundamental {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A linear rule, `0..=511`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RuleNumber(u16);

impl RuleNumber {
    pub const MAX: u16 = 511;

    pub fn new(value: u32) -> Result<Self> {
        if value <= Self::MAX as u32 {
            Ok(RuleNumber(value as u16))
        } else {
            Err(Error::RuleOutOfRange(value))
        }
    }

    pub fn value(self) -> u16 {
        self.0
    }

    /// Every rule number in ascending order.
    pub fn all() -> impl Iterator<Item = RuleNumber> {
        (0..=Self::MAX).map(RuleNumber)
    }

    /// Fundamentals whose weights sum to this rule, ascending.
    pub fn decompose(self) -> Vec<Fundamental> {
        self.fundamentals().collect()
    }

    pub fn fundamentals(self) -> impl Iterator<Item = Fundamental> {
        Fundamental::ALL
            .into_iter()
            .filter(move |f| self.0 & f.0 != 0)
    }

    pub fn compose(fundamentals: &[Fundamental]) -> Result<Self> {
        let mut mask = 0u16;
        for f in fundamentals {
            if mask & f.0 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "fundamental {f} given more than once"
                )));
            }
            mask |= f.0;
        }
        Ok(RuleNumber(mask))
    }

    pub fn contains(self, f: Fundamental) -> bool {
        self.0 & f.0 != 0
    }

    /// Number of neighbors an interior cell depends on.
    pub fn neighbor_count(self) -> u32 {
        self.0.count_ones()
    }

    /// The rule obtained by replacing each fundamental with its transpose partner.
    /// Its rule matrix is the transpose of this rule's matrix.
    pub fn transpose_partner(self) -> RuleNumber {
        RuleNumber(
            self.fundamentals()
                .map(|f| f.transpose_partner().0)
                .fold(0, |acc, w| acc | w),
        )
    }

    /// The nine-bit binary form, most significant (256) first.
    pub fn binary(self) -> String {
        format!("{:09b}", self.0)
    }
}

impl fmt::Display for RuleNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Fundamental> for RuleNumber {
    fn from(f: Fundamental) -> Self {
        f.as_rule()
    }
}

impl FromStr for RuleNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value: u32 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("`{s}` is not a decimal rule number")))?;
        RuleNumber::new(value)
    }
}
