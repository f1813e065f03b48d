//! Black-box test generation for numeric programs by committees of inferred
//! models.
//!
//! A campaign repeatedly infers a population of candidate models from the
//! executions seen so far (strongly-typed genetic programming, [`gp`]), scores
//! a pool of random inputs by how much the fittest models disagree on them
//! ([`qbc`]), and executes the most contested inputs on the system under test
//! ([`sut`]). Random and adaptive random baselines live in [`generators`];
//! [`harness`] compares all three against seeded mutants.

pub mod cli;
pub mod expr;
pub mod generators;
pub mod gp;
pub mod harness;
pub mod qbc;
pub mod spec_io;
pub mod sut;
pub mod value;

pub use value::{InputVector, Value, ValueKind};

/// Seeded random source used throughout; reproducible across platforms.
pub type SeededRng = rand_chacha::ChaCha8Rng;
