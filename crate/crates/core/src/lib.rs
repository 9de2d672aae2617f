//! Homomorphism-count query algorithms over finite relational structures.

pub mod algorithms;
pub mod analysis;
pub mod catalog;
pub mod datalog;
pub mod error;
pub mod experiments;
pub mod format;
pub mod hom;
pub mod iso;
pub mod oracle;
pub mod query;
pub mod structure;

pub use error::{Error, Result};
pub use hom::{hom_count, hom_exists, HomCount, Semiring};
pub use iso::isomorphic;
pub use structure::{Signature, Structure, Tuple};
