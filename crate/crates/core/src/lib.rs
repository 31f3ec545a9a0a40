//! Census of automorphic orbits of cyclic subgroups of free groups.
//!
//! The crate enumerates one shortlex-minimal generator per
//! `Aut(F_r)`-orbit of cyclic subgroups at a given length, computes the
//! imprimitivity rank of each representative by a Stallings-graph search,
//! and runs a cascade of decidable hyperbolicity checks on the associated
//! one-relator group.
//!
//! ```
//! use relcensus::{Rank, enumeration::enumerate_orbit_reps};
//!
//! let reps = enumerate_orbit_reps(Rank::new(2).unwrap(), 4, true);
//! assert_eq!(reps.len(), 2);
//! ```

pub mod census;
pub mod enumeration;
pub mod error;
pub mod hyperbolicity;
pub mod stallings;
pub mod whitehead;
pub mod word;

pub use error::{Error, Result};
pub use word::{CyclicWord, Letter, PowerDecomposition, Rank, Word};
