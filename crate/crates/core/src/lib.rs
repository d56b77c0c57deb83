//! Computational model of coniveau and strong coniveau on the mod-p
//! cohomology of classifying spaces: truncated algebras, Steenrod
//! operations, transfers and the DH report.

pub mod catalog;
pub mod cli;
pub mod coniveau;
pub mod entry;
pub mod error;
pub mod fplinalg;
pub mod gralg;
pub mod margolis;
pub mod ops;
pub mod transfer;

pub use entry::Entry;
pub use error::{Error, Result};
