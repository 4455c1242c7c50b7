//! Support code for the `hiersep` binary: input loading, output manifests
//! and the acceptance suites.

pub mod io;
pub mod suites;
