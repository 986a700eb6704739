//! Customer-to-feeder path identification for low-voltage networks.
//!
//! The pipeline: load a [`network::Network`], generate candidate paths per
//! customer with [`search`], lay them out as incidence [`matrices`], build the
//! 0/1 program in [`ilp`], solve it exactly with [`solver`], and report what
//! the data cannot explain with [`diagnostics`]. [`io`] wraps all of it for
//! files and the command line.

pub mod diagnostics;
pub mod fixtures;
pub mod ilp;
pub mod io;
pub mod matrices;
pub mod network;
pub mod path;
pub mod search;
pub mod solver;
pub mod synthetic;
