//! Discrete Morse theory on finite posets and regular CW face posets.
//!
//! A discrete Morse function on a 2-wide, parity-graded, downward Eulerian
//! poset can be realized as a height function on an embedding of the order
//! complex, with a critical element's barycenter getting Banchoff index
//! `(-1)^μ` and an ordinary one getting 0. This crate computes both sides of
//! that statement exactly and checks them against each other:
//!
//! * [`poset`]: Hasse diagrams, chains, order complexes, Euler characteristics
//!   and the structural property checks.
//! * [`morse`]: validation, classification and normalization of discrete
//!   Morse functions.
//! * [`chain_index`]: indices as signed chain counts and the report that
//!   compares them with the predicted values.
//! * [`geometry`]: the explicit embedding and indices read off from it.
//! * [`cw_ingest`]: face posets of simplicial and cell complexes.
//! * [`generate`]: seeded random complexes and Morse functions.

pub mod chain_index;
pub mod cw_ingest;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod morse;
pub mod poset;
pub mod rational;

pub use error::{Error, Hypothesis, Result};
pub use morse::MorseFunction;
pub use poset::Poset;
pub use rational::Rational;
