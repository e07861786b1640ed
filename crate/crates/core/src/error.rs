//! Error type shared across the crate.
//!
//! Validation *checks* (Jacobi, ad-skewness, h-invariance, the phi
//! positivity condition) return report values with residuals rather than
//! errors; `Error` is reserved for contract violations that make a
//! computation meaningless (wrong dimensions, degenerate inputs, objects
//! that fail their construction invariants).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("direction is degenerate for the norm (a(y,y) = 0)")]
    DegenerateDirection,

    #[error("structure constants are not antisymmetric at (i,j,k) = ({i},{j},{k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },

    #[error("combined (h, m) basis is singular; not a direct-sum decomposition")]
    SingularBasis,

    #[error("h is not closed under the bracket (residual {residual:.3e})")]
    NotSubalgebra { residual: f64 },

    #[error("[h, m] leaves m; decomposition is not reductive (residual {residual:.3e})")]
    NotReductive { residual: f64 },

    #[error("vector does not lie in m (h-component {residual:.3e})")]
    NotInSubspace { residual: f64 },

    #[error("matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("inner product is tagged {found}, but the decomposition requires {expected}")]
    DomainTagMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("phi({s}) = {value} is not positive")]
    PhiNotPositive { s: f64, value: f64 },

    #[error("phi derivative of order {order} disagrees with finite differences at s = {s} (analytic {analytic:.6e}, numeric {numeric:.6e})")]
    DerivativeMismatch {
        order: u8,
        s: f64,
        analytic: f64,
        numeric: f64,
    },

    #[error("s = {s} leaves the domain (-{b0}, {b0}) of phi")]
    PhiDomainExceeded { s: f64, b0: f64 },

    #[error("b0 = {b0} is not a valid domain radius")]
    InvalidB0 { b0: f64 },

    #[error("requested bound b = {b} is not inside [0, b0 = {b0})")]
    BoundOutOfRange { b: f64, b0: f64 },

    #[error("|X|_a = {norm} must be strictly below b0 = {b0}")]
    NormExceedsB0 { norm: f64, b0: f64 },

    #[error("phi positivity condition fails on [-b, b], b = {b}: minimum {min:.6e} at s = {at:.6}")]
    PhiConditionFailed { b: f64, min: f64, at: f64 },

    #[error("unknown catalog entry '{name}'")]
    UnknownCatalog { name: String },

    #[error("flag is not a-orthonormal (residual {residual:.3e}); orthonormalize explicitly")]
    NonOrthonormalFlag { residual: f64 },

    #[error("flag vectors are linearly dependent (Gram determinant {gram:.3e})")]
    DependentFlag { gram: f64 },

    #[error("curvature denominator theta = {theta:.6e} is not positive")]
    ThetaNotPositive { theta: f64 },

    #[error("inner product is not bi-invariant (ad-skewness residual {residual:.3e})")]
    NotBiInvariant { residual: f64 },

    #[error("X is not central (max |[e_i, X]| = {residual:.3e})")]
    NotCentral { residual: f64 },

    #[error("operation requires an ambient inner product (trivial isotropy)")]
    RequiresAmbientForm,

    #[error("exhaustive sphere scan supports dimension <= {max}, got {dim}")]
    DimensionTooLarge { dim: usize, max: usize },
}
