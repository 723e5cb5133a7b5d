//! Finite models of local subgroupoids, their globalisation, and the sheaf and
//! holonomy constructions built on top of them.
//!
//! Everything is finite and fully enumerable: spaces are lattices of open sets
//! over at most 64 points, presheaves are tables of finite sets, and groupoids
//! are explicit composition tables.

pub mod bits;
pub mod error;
pub mod fintop;
pub mod foliate;
pub mod groupoid;
pub mod gsheaf;
pub mod holonomy;
pub mod localsub;
pub mod presheaf;

pub use bits::Bits;
pub use error::{Error, Result};
pub use fintop::{Cover, FinSpace, PointMap};
