//! Multiparameter discrete Morse theory on finite simplicial complexes:
//! vector fields and their flows, Morse decompositions, Conley indices,
//! multiparameter discrete Morse functions and sublevel collapses.

pub mod cli;
pub mod complex;
pub mod components;
pub mod dynamics;
mod error;
pub mod field;
mod graph;
pub mod homology;
pub mod io;
pub mod mdm;
pub mod morse;

pub use error::{Error, Result};
