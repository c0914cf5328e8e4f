//! Matrix Lie algebras, order-4 automorphisms and the induced Z4 gradings.

mod algebra;
mod automorphism;
mod grading;
pub mod matrices;
mod pair;
mod semidirect;
mod tau;

pub use algebra::{make_algebra, LieAlgebraBasis};
pub use automorphism::LinearAutomorphism;
pub use grading::{check_grading, z4_decompose, Z4Grading};
pub use pair::{inner_product_m, CurvatureTensor, SymmetricPair};
pub use semidirect::{affine_element, semidirect};
pub use tau::{compute_g0, curvature_invariance_check, der_m, tau_from_j0, TauExtension};
