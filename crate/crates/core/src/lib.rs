//! Short presentations of crystallographic groups, coset enumeration, and
//! periodic-graph analysis.

pub mod affine;
pub mod cayley;
pub mod corpus;
pub mod coset;
pub mod error;
pub mod finite;
pub mod group;
pub mod hnf;
pub mod periodic;
pub mod pipeline;
pub mod rational;
pub mod symop;
pub mod tietze;
pub mod words;

pub use affine::{hnf_lattice, point_group_image, AffineIsometry, PointGroupElement, TranslationLattice};
pub use error::{Error, Result};
pub use rational::Rational;
pub use symop::{format_symop, parse_generating_set, parse_symop, GeneratingSetDocument, NamedGenerator};
pub use words::{cyclic_reduce, evaluate, format_word, free_reduce, parse_word, Letter, Presentation, Word};
