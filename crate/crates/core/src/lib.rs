//! Invariant (alpha,beta)-Finsler metrics on Lie groups and reductive
//! homogeneous spaces.
//!
//! The crate works at the Lie-algebra level: a homogeneous space G/H is
//! given by structure constants for g, a reductive decomposition
//! g = h (+) m, and an Ad(H)-invariant inner product a on m. An
//! (alpha,beta)-metric is built from that data plus an invariant vector
//! field X in m and a profile function phi, as
//! F(y) = alpha(y) * phi(beta(y) / alpha(y)) with alpha(y) = sqrt(a(y,y))
//! and beta(y) = a(X, y). On top of the metric the crate provides the
//! fundamental tensor g_y (closed form and an independent finite-difference
//! route), geodesic-vector criteria and an exhaustive sphere search, and
//! flag curvature for bi-invariant metrics (curvature-tensor route and the
//! closed orthonormal-flag formula).
//!
//! Every closed-form quantity has a brute-force counterpart; `verify`
//! bundles those cross-checks into a reportable suite.

pub mod alpha_beta;
pub mod curvature;
pub mod error;
pub mod geodesic;
pub mod lie;
pub mod metric;
pub mod phi;
pub mod sample;
pub mod verify;

pub use alpha_beta::{AlphaBetaMetric, FD_STEP, RICHARDSON_TRIGGER};
pub use curvature::{
    check_biinvariance_lemma, check_biinvariance_lemma_with, flag_curvature_closed,
    flag_curvature_general, is_berwald_candidate, riemann_biinvariant, BiInvarianceLemmaReport,
    ClosedFlagCurvature, Flag, ORTHONORMAL_TOL,
};
pub use error::{Error, Result};
pub use geodesic::{
    check_conditional_equivalence, check_point_equivalence, find_geodesic_vectors_finsler,
    find_geodesic_vectors_riemannian, geodesic_report, is_geodesic_finsler,
    is_geodesic_riemannian, ConditionalEquivalence, GeodesicReport, GeodesicVectorSet,
    PointEquivalence, PredicateOutcome, Quantifier, SearchOptions, SolutionPoint, Verdict,
    CLUSTER_RADIUS,
};
pub use lie::{catalog, JacobiReport, LieAlgebra, ReductiveDecomposition, Vector, DEFAULT_TOL};
pub use metric::{
    check_ad_skew, check_h_invariance, HInvarianceReport, InnerProduct, IpDomain, SkewReport,
};
pub use phi::{check_phi_condition, PhiConditionReport, PhiFunction, PHI_CONDITION_GRID};
pub use verify::{run_verification, CheckRow};
