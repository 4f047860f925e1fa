//! Certified real-analysis kernels over exact rationals.
//!
//! Every certified result is an [`Enclosure`] or a [`Verdict`] computed with
//! exact arithmetic; metadata attached to a [`FnDescriptor`] is trusted as
//! the caller's contract.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod accumulator;
pub mod approx;
pub mod calculus;
pub mod enclosure;
pub mod error;
pub mod function;
pub mod integration;
pub mod poly;
pub mod powerseries;
pub mod rational;
pub mod real;
pub mod sequences;
pub mod series;
pub mod verdict;

pub use accumulator::SumAccumulator;
pub use enclosure::{combine, Combine, Enclosure};
pub use error::{Error, Result};
pub use function::{CellRange, Direction, FnDescriptor, MonotoneClaim, Piece, Smoothness};
pub use poly::Poly;
pub use rational::Rational;
pub use verdict::{Assurance, Certificate, Status, TestKind, TraceEntry, Verdict, Witness};
