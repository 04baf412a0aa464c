//! Exact enumeration of dessins d'enfants (hypermaps) by degree, genus and type.
//!
//! The weighted counts `N_{k,l}(m)` are the coefficients of a generating
//! function built degree by degree in [`evolution`]; [`specialize`] collapses
//! them to the genus-by-degree table, [`kp`] checks the result against the
//! first KP equations and [`oracle`] recounts small degrees by brute force
//! over pairs of permutations.

pub mod cache;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod kp;
pub mod oracle;
pub mod partition;
pub mod series;
pub mod specialize;

pub use error::{Error, Result};
pub use evolution::{coeff_recursion_rhs, compute_f, partition_function, EngineState};
pub use partition::Partition;
pub use series::{genus_of, GradedSeries, MonomialKey, Rational};
pub use specialize::CountTable;
