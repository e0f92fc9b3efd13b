//! Extracts the hierarchical structure of a web query form from the
//! geometry of its rendered elements.
//!
//! The pipeline: measure pairwise visual proximity between fields
//! ([`geometry`]), cluster fields level by level ([`cluster`]), and read
//! the resulting hierarchy as a query tree ([`model`]). Around the core
//! sit layout/manifest IO ([`layout`]), a seeded corpus generator
//! ([`synth`]), gold-tree evaluation ([`eval`]), an SVG view of a
//! clustering run ([`svg`]), and the command-line front end ([`cli`]).
//!
//! The `examples/` directory walks through each capability end to end.

pub mod cli;
pub mod cluster;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod layout;
pub mod model;
pub mod svg;
pub mod synth;

pub use error::{Error, Result};
