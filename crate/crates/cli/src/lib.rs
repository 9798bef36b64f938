//! Document schema and report rendering for the `sievekit` binary, exposed
//! as a library so integration tests can drive the same code paths.

pub mod document;
pub mod report;
