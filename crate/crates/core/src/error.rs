use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vectors are not orthonormal (defect {0:e})")]
    NotOrthonormal(f64),
    #[error("quaternion is not a unit (|q| = {0})")]
    NotUnit(f64),
    #[error("linear map is not an anti-involution in the expected class: {0}")]
    NotAntiInvolution(String),

    #[error("basis is linearly dependent (smallest singular value {0:e})")]
    DependentBasis(f64),
    #[error("span is not closed under the bracket (residual {0:e})")]
    NotClosed(f64),
    #[error("map is not an automorphism of the required order: {0}")]
    NotAutomorphism(String),
    #[error("eigenspace dimensions {dims:?} do not sum to {total}")]
    GradingMismatch { dims: [usize; 4], total: usize },
    #[error("grading check failed (residual {0:e})")]
    ToleranceFailure(f64),
    #[error("conjugation by J0 does not preserve ad(h) (residual {0:e})")]
    NotInvariant(f64),
    #[error("J0 is not a complex structure (residual {0:e})")]
    NotComplexStructure(f64),
    #[error("g0 from grading and from centralizer disagree: {0}")]
    InconsistentGrading(String),
    #[error("action matrices do not match the vector space: {0}")]
    ActionMismatch(String),
    #[error("inner product is not positive definite or not invariant: {0}")]
    BadInnerProduct(String),

    #[error("parity condition violated: {0}")]
    ParityViolation(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("pair is not in Sigma(m) ∩ Aut(m): {0}")]
    NotInSigmaAut(String),

    #[error("frame is singular at node ({0}, {1})")]
    SingularFrame(usize, usize),
    #[error("Maurer-Cartan form leaves the Lie algebra (residual {0:e})")]
    ProjectionResidual(f64),
    #[error("lambda must be non-zero")]
    ZeroLambda,
    #[error("form is not flat enough to integrate (plaquette defect {defect:e} > {tol:e})")]
    CurvatureTooLarge { defect: f64, tol: f64 },
    #[error("grid shapes or algebra dimensions do not match: {0}")]
    ShapeMismatch(String),

    #[error("consecutive sphere points are antipodal at node ({0}, {1})")]
    AntipodalStep(usize, usize),
    #[error("surface is degenerate at node ({0}, {1})")]
    Degenerate(usize, usize),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
