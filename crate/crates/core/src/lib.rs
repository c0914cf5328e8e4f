//! Twistor lifts of surfaces through 4-symmetric bundles.
//!
//! * [`quatgeom`]: quaternions, oriented planes of `R^4`, `Gr2(R^4) = S^2 x S^2`.
//! * [`liecore`]: matrix Lie algebras, order-4 automorphisms, Z4 gradings.
//! * [`fourbundle`]: concrete 4-symmetric spaces and their twistor embeddings.
//! * [`connection`]: discrete Maurer-Cartan forms, λ-families and harmonicity residuals.
//! * [`surfaces`]: immersions into `R^4`, Gauss-map components and their lifts.

pub mod connection;
pub mod error;
pub mod fourbundle;
pub mod io;
pub mod liecore;
pub mod linalg;
pub mod quatgeom;
pub mod report;
pub mod scalar;
pub mod surfaces;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type Quaternion64 = quatgeom::Quaternion<f64>;
pub type Quaternion32 = quatgeom::Quaternion<f32>;
pub type OrientedPlane64 = quatgeom::OrientedPlane<f64>;
pub type LieAlgebra64 = liecore::LieAlgebraBasis<f64>;
pub type LieAlgebra32 = liecore::LieAlgebraBasis<f32>;
pub type Grading64 = liecore::Z4Grading<f64>;
pub type Spec64 = fourbundle::FourSymmetricSpec<f64>;
pub type FrameGrid64 = connection::FrameGrid<f64>;
pub type LiftedImmersion64 = surfaces::LiftedImmersion<f64>;
