//! Homological filling norms of simplicial complexes over normed coefficient rings.
//!
//! The crate is organised bottom-up:
//!
//! - [`rings`]: coefficient rings with the discrete or absolute-value norm;
//! - [`chains`]: finite simplicial complexes, sparse chains and the boundary operator;
//! - [`builders`]: Cayley-graph balls, Rips complexes, grids, trees and δ-hyperbolicity;
//! - [`solver`]: exact minimal fillings by branch-and-bound over a growing search region;
//! - [`hypfill`]: the constructive linear filler for Rips complexes of hyperbolic spaces;
//! - [`profiler`]: isoperimetric profiles, growth classification and axiom checks;
//! - [`io`]: the line-oriented text formats used by the command-line tool.

pub mod builders;
pub mod chains;
pub mod error;
pub mod hypfill;
pub mod io;
mod linalg;
pub mod profiler;
pub mod rings;
pub mod solver;

pub use chains::{Cell, Chain, Complex, Subcomplex};
pub use error::{Error, Result};
pub use rings::{Coefficient, NormKind, NormedRing, RingKind};
