//! Split f4 as the derivation algebra of the split Albert algebra, computed
//! exactly over the rationals and over prime fields.

pub mod albert;
pub mod dersolve;
pub mod lie;
pub mod linalg;
pub mod octonion;
pub mod paperparam;
pub mod scalars;

pub use albert::{AlbertElement, BasisElement, Coord27};
pub use octonion::Octonion;
pub use scalars::{FieldSpec, Scalar, ScalarError};
