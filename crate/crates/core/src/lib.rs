//! Linear rules of two-dimensional nine-neighborhood cellular automata.
//!
//! Every one of the 512 linear rules is modelled three ways:
//!
//! * direct evolution of a binary grid, where each next-state cell is the XOR of a
//!   fixed subset of its 3×3 neighborhood ([`engine`]),
//! * the `mn × mn` rule matrix over GF(2) acting on the row-major flattening of the
//!   grid ([`rulematrix`], [`gf2`]),
//! * a directed graph whose adjacency matrix is the rule matrix, with every edge
//!   colored by the fundamental rule that contributed it ([`graph`]).
//!
//! [`verify`] cross-checks the three models against each other and against a corpus
//! of published matrices; [`cli`] exposes everything as a command-line tool.

pub mod cli;
pub mod engine;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod grid;
pub mod rng;
pub mod rulematrix;
pub mod rules;
pub mod verify;

pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, MatrixFormat};
pub use graph::{EdgeColor, GraphStats, RuleGraph};
pub use grid::{BitVector, Grid, GridFormat};
pub use rules::{Fundamental, NeighborOffset, RuleNumber};
pub use verify::VerificationReport;
