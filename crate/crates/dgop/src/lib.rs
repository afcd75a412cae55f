//! Exact computations with dg operads over a field: chain complexes,
//! symmetric sequences, free and quasi-free operads, coalgebras over operads,
//! dual Schur functors and cofree coalgebras, and the Barratt–Eccles
//! structure on simplicial chains.

pub mod barratt_eccles;
pub mod coalgebra;
pub mod complex;
pub mod dual_schur;
pub mod error;
pub mod graded;
pub mod io;
pub mod linalg;
pub mod multilinear;
pub mod operad;
pub mod perm;
pub mod random;
pub mod report;
pub mod scalar;
pub mod simplicial;
pub mod symseq;
pub mod tree;

pub use error::{Error, Result};
pub use graded::{ChainComplex, GradedSpace, LinearMap, Window};
pub use linalg::Vector;
pub use scalar::{Field, Scalar};
