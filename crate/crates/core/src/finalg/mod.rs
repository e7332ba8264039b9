//! Finite algebras given by operation tables.

mod algebra;
mod closure;
mod dense;
mod hom;
mod logic;
mod subalgebra;

pub use algebra::{direct_product, Elem, FiniteAlgebra, TermProgram};
pub(crate) use algebra::increment;
pub(crate) use closure::{close, Closed};
pub use closure::{Provenance, TupleClosure};
pub use hom::{AlgebraView, HomSearch, Homomorphism, PowerEmbedding, Separation};
pub use logic::{filter_points, sweep_points, PointCodec, QuasiIdentity};
pub use subalgebra::{Generation, Subalgebra};
