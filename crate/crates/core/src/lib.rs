//! Deciding ultrahomogeneity and weak ultrahomogeneity of countable structures
//! given by finite presentations, with a brute-force oracle for small models.

pub mod backforth;
pub mod deciders;
pub mod enumerate;
pub mod error;
pub mod generators;
pub mod ext;
pub mod oracle;
pub mod presentations;
pub mod search;
pub mod structure;

pub use error::{Error, Result};
pub use ext::{ExtCount, Fin, Omega};
pub use structure::{Family, FiniteStructure, PartialMap};
