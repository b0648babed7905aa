//! Rank-two logarithmic values.
//!
//! The value group of a boundary end is `r^Q x gamma^Z` with `0 < r < 1` the
//! radii and `gamma` the canonical parameter at the end. We store an element
//! `h = (r^a, gamma^k)` of that group through its negated logarithm
//! `(-log_q h) = (a, k)`, called `flat` and `sharp` below. Because `r` and
//! `gamma` are both smaller than one, `h < h'` holds exactly when `(a, k)` is
//! lexicographically *larger* than `(a', k')`.

use std::cmp::Ordering;

use crate::{Rat, ratz};

/// `-log` of an element of the rank-two value group of a boundary end.
///
/// `flat` is the divisible coordinate (a rational number of radii), `sharp`
/// the discrete coordinate (an integer power of the parameter at the end).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogPair {
    pub flat: Rat,
    pub sharp: i64,
}

impl LogPair {
    pub fn new(flat: Rat, sharp: i64) -> Self {
        LogPair { flat, sharp }
    }

    /// The logarithm of the identity value `h = 1`.
    pub fn zero() -> Self {
        LogPair { flat: ratz(0), sharp: 0 }
    }

    /// Compares the *underlying values* `h`, not the stored logarithms.
    ///
    /// A value deeper in the filtration (more contraction, larger `-log`)
    /// is *smaller*. Lexicographic: the flat part dominates, the sharp part
    /// breaks ties.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match self.flat.cmp(&other.flat) {
            Ordering::Equal => other.sharp.cmp(&self.sharp),
            o => o.reverse(),
        }
    }

    /// Multiplies the sharp component by the degree of a covering.
    ///
    /// Pulling a value back along a finite map of degree `d` between ends
    /// fixes the flat part and multiplies the parameter exponent by `d`.
    pub fn scale_sharp(&self, d: i64) -> Self {
        LogPair { flat: self.flat.clone(), sharp: self.sharp * d }
    }

    /// Transports the value to the end of the subannulus at depth `s`.
    ///
    /// Moving the end inward by `s` (in `-log_q` of the outer radius) turns
    /// `(a, k)` into `(a + k s, k)`. The flat part of a group element's value
    /// can become zero or negative this way; that is how elements leave the
    /// inertia group during a radius sweep.
    pub fn slide(&self, s: &Rat) -> Self {
        LogPair { flat: &self.flat + ratz(self.sharp) * s, sharp: self.sharp }
    }

    /// Lexicographic key of the stored logarithm, largest value first when
    /// sorted ascending. Jumps of a filtration are listed in this order.
    pub fn log_key(&self) -> (Rat, i64) {
        (self.flat.clone(), self.sharp)
    }
}

impl PartialOrd for LogPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

/// A jump of the filtration in upper numbering.
///
/// The sharp component is genuinely rational here: the Herbrand averages
/// divide by subgroup indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperJump {
    pub flat: Rat,
    pub sharp: Rat,
}
