mod extrinsic;
mod flatness;
mod form;
mod graded;
mod grid;
pub mod gridio;
mod harmonic;
mod integrate;
mod system;

pub use extrinsic::{
    dual_path_agreement, extrinsic_vertical_laplacian, predicted_vertical, DualPathReport, ExtrinsicLaplacian,
    ANTI_INVOLUTION_TOL, DUAL_PATH_FACTOR,
};
pub use flatness::{coefficient_bookkeeping, BookkeepingReport, 
    bookkeeping_lambdas, curvature, curvature_real, default_lambdas, lambda_flatness, laurent_coefficients, star_form,
    LambdaReport, MARGIN,
};
pub use form::{maurer_cartan, ComplexOneForm, DiscreteOneForm, FrameGrid, McOptions};
pub use graded::{extend, grade_split, grade_split_complex, lambda_weights, reassembly_residual, GradedForm};
pub use grid::{Grid2D, GridValue};
pub use harmonic::{harmonicity_residuals, SplitTable, C_HARM, SPLIT_SLACK, vertical_harmonicity_field, vertical_harmonicity_residual, HarmonicityReport};
pub use integrate::{default_plaquette_tol, integrate_flat, max_frame_error, IntegrationReport};
pub use system::{
    admissibility, d_z, d_zbar, residual_a, residual_b, residual_c, system_residuals, AdmissibilityReport,
    SystemResiduals, FLOOR_IMM,
};
