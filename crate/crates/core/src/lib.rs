//! Sieves, Grothendieck topologies, filters, and convergence on finite categories.
//!
//! Everything here is exhaustively checkable: categories are fully materialized,
//! sieve lattices are enumerated, and the classical theorems about ultrafilters,
//! cluster points, and closure are audited by brute force instead of assumed.
//! All values are immutable after construction and all operations are pure, so
//! they can be shared freely across threads.

pub mod convergence;
pub mod corpus;
pub mod filters;
pub mod fincat;
pub mod frames;
pub mod sieve;
pub mod topology;

pub use filters::{Filter, FilterBase, FilterSubbase};
pub use fincat::{CategorySpec, FiniteCategory, MorId, ObjId, Point};
pub use sieve::Sieve;
pub use topology::GrothendieckTopology;
