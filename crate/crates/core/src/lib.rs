//! Finite relations as constraints on morphisms.
//!
//! [`relcat`] is the category of finite relations between labelled sets. The
//! other modules attach a satisfaction predicate between relations and
//! morphisms of some target category: block matrices ([`sectorial`]),
//! stochastic channels ([`signalling`]), block-respecting functions
//! ([`funcrel`]), monoid elements ([`monoidrel`]) and set-based CSPs
//! ([`cspcat`]). [`constrained`] pairs constraints with morphisms and carries
//! certificates through composition.

pub mod circuit;
pub mod constrained;
pub mod cspcat;
pub mod error;
pub mod funcrel;
pub mod gen;
pub mod io;
pub mod laws;
pub mod matrix;
pub mod monoidrel;
pub mod oracle;
pub mod rational;
pub mod relcat;
pub mod sectorial;
pub mod signalling;
pub mod witness;

pub use constrained::{Constrained, ConstrainedCategory, Encoding};
pub use error::{Error, Result};
pub use relcat::{FiniteRelation, LabelList};
pub use witness::Violation;
