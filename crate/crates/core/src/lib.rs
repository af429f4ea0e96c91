//! Conjugation-based key exchange over pluggable platform groups.
//!
//! The crate has five layers:
//!
//! - [`words`]: free-group word algebra, the syntactic substrate everything
//!   else is written in.
//! - [`platform`]: the platform-group contract (canonical forms, equality,
//!   length) with free, symmetric and braid instances; braids use the Garside
//!   left-normal form.
//! - [`protocols`]: the Ko–Lee commuting-conjugation exchange and the
//!   Anshel–Anshel–Goldfeld commutator exchange, key derivation, transcripts
//!   and the multi-round mode.
//! - [`attacks`]: conjugacy-search solvers — breadth-first brute force, a
//!   length-based beam heuristic, and their deterministic interleaved
//!   composite — plus transcript replay.
//! - [`bench`]: length-invariant instance sampling, solver racing campaigns,
//!   expected-time accounting, polynomial extrapolation and genericity
//!   classification.

pub mod attacks;
pub mod bench;
pub mod error;
pub mod platform;
pub mod protocols;
pub mod words;

pub use error::{Error, Result};
pub use platform::{Element, Platform};
pub use words::{Letter, Word};
