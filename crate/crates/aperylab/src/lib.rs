//! Factorization invariants of numerical semigroups restricted to Apéry
//! sets.
//!
//! A numerical semigroup is a cofinite additive subsemigroup of the
//! nonnegative integers containing 0. This crate computes, exactly:
//!
//! - membership, minimal generators, Frobenius number, genus, and the
//!   Apéry set ([`semigroup`]);
//! - factorization length sets, elasticity, the Apéry half-factorial
//!   property (AHF), the half-factorial fraction (AHFF), and the mean
//!   Apéry elasticity (MAE), all as exact rationals ([`factorization`]);
//! - the Apéry poset with its Hasse covers, gradedness, width, and DOT
//!   export ([`poset`]);
//! - parametric families with predicted invariants ([`families`]);
//! - an exhaustive genus-tree census with per-(genus, multiplicity) AHF
//!   counts ([`census`]);
//! - theorem verification sweeps over those families and censuses
//!   ([`verify`]).

pub mod census;
pub mod error;
pub mod factorization;
pub mod families;
pub mod poset;
pub mod rational;
pub mod semigroup;
pub mod verify;

pub use error::{Error, Result};
pub use poset::AperyPoset;
pub use rational::Rational;
pub use semigroup::NumericalSemigroup;
