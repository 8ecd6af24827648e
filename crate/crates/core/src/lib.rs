//! Computational toolkit for the free-by-cyclic groups `G_{m,k}`.
//!
//! Modules follow the natural pipeline: free group [`words`], the group
//! family and its monodromy ([`family`]), automorphism [`growth`], the
//! [`abelian`]ized linear algebra, the permutation representation
//! ([`permrep`]), square [`complexes`] and their [`walls`], and the Bieri
//! double ([`bieri`]). [`reproduce`] runs the acceptance matrix and [`cli`]
//! drives the `gmk` binary.

pub mod abelian;
pub mod bieri;
pub mod cli;
pub mod complexes;
pub mod error;
pub mod family;
pub mod growth;
pub mod permrep;
pub mod reproduce;
pub mod walls;
pub mod words;

pub use error::{GmkError, Result};
