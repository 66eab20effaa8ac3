//! Solvers for Nim, Slow Nim, their extended and monotonic variants, and
//! Diet Chomp.
//!
//! [`solver`] computes nimbers and outcomes by brute force, [`closedforms`]
//! holds the known characterizations, and [`analysis`] scans 3-column Diet
//! Chomp outcome lattices for periodicity.

pub mod analysis;
pub mod closedforms;
pub mod error;
pub mod games;
pub mod position;
pub mod solver;
pub mod sweep;
pub mod theorems;

pub use error::{Error, Result};
pub use position::{
    canonicalize, is_terminal, moves, successors, Family, GrundyValue, MoveKind, MoveRecord,
    Outcome, PlayConvention, Position, RuleSet,
};
pub use solver::{Domain, MemoTable, VerificationReport};
