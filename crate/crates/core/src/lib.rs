//! Local permutation polynomials over finite fields: construction, verification,
//! enumeration and the Latin squares they describe.

pub mod enumerate;
pub mod error;
pub mod gf;
pub mod klenian;
pub mod lpp;
pub mod mpoly;
pub mod ortho;
pub mod perm;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement, FieldSpec};
pub use klenian::{EKlenianGroup, Indexing};
pub use lpp::LatinSquare;
pub use mpoly::{Degree, MPoly};
pub use ortho::MolsSet;
pub use perm::{PermTuple, Permutation};
