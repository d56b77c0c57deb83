//! Degree-truncated graded-commutative algebras over F_p.

mod compiled;
mod element;
mod expr;
mod presentation;
mod text;

pub use compiled::CompiledAlgebra;
pub use element::{monomial_product, Element, Flagged, Monomial, Product};
pub use expr::{format_element, format_monomial, parse_raw, ExprError};
pub use presentation::{AlgebraPresentation, Designated, GenKind, Generator, Metadata, OperationSpec};
pub use text::{parse_presentation, DivisorDecl, PresentationFile, TableDecl, TransferDecl};
