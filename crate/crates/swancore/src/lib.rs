//! Exact arithmetic for the ramification theory of one-dimensional formal
//! module deformation spaces with level structure.
//!
//! The crate computes, over the residue rings `O/pi^n` of a local field with
//! residue cardinality `q`:
//!
//! * the higher ramification filtration of the stabilizer of a boundary end
//!   of the level-`pi^n` covering of the open unit disk, in both lower and
//!   upper numbering ([`ramify`]);
//! * character tables of the relevant finite matrix groups by the
//!   Dixon-Burnside method, with exact cyclotomic values ([`dixon`]);
//! * Swan and discriminant conductors of the sheaves attached to
//!   representations of those groups, by two independent routes that are
//!   checked against each other ([`conductor`]);
//! * radius sweeps of the discriminant profile on the family of subdisks
//!   ([`profile`]);
//! * Newton polygon data for the defining polynomials of the coverings
//!   ([`newton`]).
//!
//! Everything is exact: rationals are [`num::BigRational`], character values
//! are elements of cyclotomic fields with rational coefficients. There is no
//! floating point anywhere and no tolerance in any comparison.

pub mod classfn;
pub mod conductor;
pub mod cyclotomic;
pub mod dixon;
pub mod gl2;
pub mod group;
pub mod logpair;
pub mod newton;
pub mod profile;
pub mod ramify;
pub mod reptypes;
pub mod ring;

/// Exact rational scalar used throughout the crate.
pub type Rat = num::BigRational;

/// Convenience constructor for a `Rat` from an integer pair.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "rational denominator must be nonzero");
    Rat::new(n.into(), d.into())
}

/// Convenience constructor for an integral `Rat`.
pub fn ratz(n: i64) -> Rat {
    Rat::from_integer(n.into())
}
