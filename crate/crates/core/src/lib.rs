//! Simulation of an adiabatic quantum algorithm that decides whether a graph
//! is graceful and finds graceful labellings.
//!
//! Pipeline: a [`graph::Graph`] is extended to `e + 1` vertices, vertex
//! relabellings are encoded as bit strings ([`encoding`]), the total cost of
//! every string becomes the diagonal of the problem Hamiltonian
//! ([`hamiltonian`]), and the state vector is evolved from the transverse
//! field ground state along a linear schedule ([`dynamics`]). [`oracle`]
//! provides brute-force ground truth and [`experiments`] reproduces the
//! reference tables.

pub mod dynamics;
pub mod encoding;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod hamiltonian;
pub mod oracle;
pub mod output;
pub mod par;
pub mod spectrum;

pub use error::{Error, Result};
