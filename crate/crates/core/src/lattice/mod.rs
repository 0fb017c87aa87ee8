//! Integer lattices, rational points of tori and closed subsets of the circle.

mod angle;
mod circle;
mod convergence;
pub mod matrix;
mod subgroup;

use thiserror::Error;

pub use angle::{chord_lt, format_rational, parse_rational, Rat, RationalAngle};
pub use circle::{Arc, CircleSet, Region};
pub use convergence::{converges_along, tail_start, Sample, SampleSet};
pub use matrix::{hermite_normal_form, smith_normal_form, IMatrix, Snf};
pub use subgroup::{annihilator, char_eq_on, CharacterSpace, CharacterVector, IntSubgroup, TorusSubgroupDesc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("expected a vector of length {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("not a rational number: {0:?}")]
    BadRational(String),
    #[error("region is not closed")]
    NotClosed,
    #[error("sample list is empty")]
    EmptySamples,
}
