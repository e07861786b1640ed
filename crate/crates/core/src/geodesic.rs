//! Geodesic-vector criteria and an exhaustive search over the unit sphere.
//!
//! A nonzero X in g is a geodesic vector when the canonical spray fixes the
//! corresponding direction at the origin. At the algebra level this is a
//! finite family of bracket equations:
//!
//! * Riemannian (profile phi == 1): a([X, Y]_m, X_m) = 0 for all Y in m.
//! * Finsler: g_{X_m}(X_m, [X, Z]_m) = 0 with Z ranging over all of g, or
//!   equivalently over m when the stronger hypotheses of the equivalence
//!   results hold; [`Quantifier`] picks the range.
//!
//! Vectors whose m-component vanishes are reported as
//! [`Verdict::Degenerate`] by both predicates: the Finsler form has no base
//! direction there, and a vacuous Riemannian pass would break the
//! phi == 1 collapse property. The brute-force solver works on raw
//! residuals instead and does report such directions (they are genuine
//! zeros of the residual system), matching the hand-derived solution sets.

use crate::alpha_beta::AlphaBetaMetric;
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, ReductiveDecomposition, Vector};
use crate::metric::InnerProduct;
use nalgebra::{DMatrix, DVector};

/// Angular radius used when merging refined solutions into clusters.
pub const CLUSTER_RADIUS: f64 = 1e-3;

/// Relative threshold below which an m-component counts as zero.
const DEGENERATE_EPS: f64 = 1e-12;

/// Basis range of the Finsler criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    /// Z runs over the full ambient basis of g.
    OverG,
    /// Z runs over the m-basis only.
    OverM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Geodesic,
    NotGeodesic,
    /// The vector's m-component vanishes; the criterion does not apply.
    Degenerate,
}

/// One predicate evaluation: the worst bracket-equation residual and the
/// verdict at the tolerance used.
#[derive(Debug, Clone)]
pub struct PredicateOutcome {
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl PredicateOutcome {
    fn decide(residual: f64, tolerance: f64) -> Self {
        let verdict = if residual <= tolerance {
            Verdict::Geodesic
        } else {
            Verdict::NotGeodesic
        };
        PredicateOutcome {
            residual,
            tolerance,
            verdict,
        }
    }

    fn degenerate(tolerance: f64) -> Self {
        PredicateOutcome {
            residual: 0.0,
            tolerance,
            verdict: Verdict::Degenerate,
        }
    }
}

fn m_component_vanishes(x: &Vector, xm: &[f64]) -> bool {
    let scale = 1.0 + x.inf_norm();
    xm.iter().all(|c| c.abs() <= DEGENERATE_EPS * scale)
}

/// Riemannian geodesic-vector test: worst |a([x, Y]_m, x_m)| over the
/// m-basis.
pub fn is_geodesic_riemannian(
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    a: &InnerProduct,
    x: &Vector,
    tol: f64,
) -> Result<PredicateOutcome> {
    if x.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: x.dim(),
        });
    }
    if x.inf_norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    if a.dim() != dec.m_dim() {
        return Err(Error::DimensionMismatch {
            expected: dec.m_dim(),
            found: a.dim(),
        });
    }
    let xm = dec.m_coords(x)?;
    if m_component_vanishes(x, &xm) {
        return Ok(PredicateOutcome::degenerate(tol));
    }
    let mut residual = 0.0f64;
    for basis_vec in dec.m_basis() {
        let bracket = alg.bracket(x, basis_vec)?;
        let bm = dec.m_coords(&bracket)?;
        residual = residual.max(a.eval_slices(&bm, &xm).abs());
    }
    Ok(PredicateOutcome::decide(residual, tol))
}

/// Finsler geodesic-vector test: worst |g_{X_m}(X_m, [X, Z]_m)| over the
/// chosen basis range.
pub fn is_geodesic_finsler(
    metric: &AlphaBetaMetric,
    x: &Vector,
    tol: f64,
    quantifier: Quantifier,
) -> Result<PredicateOutcome> {
    let alg = metric.algebra();
    let dec = metric.decomposition();
    if x.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: x.dim(),
        });
    }
    if x.inf_norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let xm = dec.m_coords(x)?;
    if m_component_vanishes(x, &xm) {
        return Ok(PredicateOutcome::degenerate(tol));
    }
    let dim = alg.dim();
    let ambient_basis: Vec<Vector>;
    let range: &[Vector] = match quantifier {
        Quantifier::OverG => {
            ambient_basis = (0..dim)
                .map(|i| Vector::basis(dim, i).expect("index in range"))
                .collect();
            &ambient_basis
        }
        Quantifier::OverM => dec.m_basis(),
    };
    let mut residual = 0.0f64;
    for z in range {
        let bracket = alg.bracket(x, z)?;
        let bm = dec.m_coords(&bracket)?;
        residual = residual.max(metric.fundamental_form_m(&xm, &xm, &bm)?.abs());
    }
    Ok(PredicateOutcome::decide(residual, tol))
}

/// Both predicates on the same vector.
#[derive(Debug, Clone)]
pub struct GeodesicReport {
    pub vector: Vector,
    pub riemannian: PredicateOutcome,
    pub finsler: PredicateOutcome,
}

/// Runs the Riemannian test (with the metric's own a) and the Finsler test
/// (over g) on one vector.
pub fn geodesic_report(metric: &AlphaBetaMetric, x: &Vector, tol: f64) -> Result<GeodesicReport> {
    let riemannian = is_geodesic_riemannian(
        metric.algebra(),
        metric.decomposition(),
        metric.inner_product(),
        x,
        tol,
    )?;
    let finsler = is_geodesic_finsler(metric, x, tol, Quantifier::OverG)?;
    Ok(GeodesicReport {
        vector: x.clone(),
        riemannian,
        finsler,
    })
}

/// Result of checking the pointwise equivalence identity at the metric's
/// own X: g_{X_m}(X_m, [X,Z]_m) = a(X_m, [X,Z]_m) phi^2(sqrt(a(X,X))) over
/// the m-basis. The identity is unconditional, so geodesic verdicts for F
/// and for the underlying a must coincide at X.
#[derive(Debug, Clone)]
pub struct PointEquivalence {
    pub identity_residual: f64,
    pub riemannian: PredicateOutcome,
    pub finsler: PredicateOutcome,
    pub verdicts_agree: bool,
    pub tolerance: f64,
}

pub fn check_point_equivalence(metric: &AlphaBetaMetric, tol: f64) -> Result<PointEquivalence> {
    let x = metric.x();
    if x.inf_norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let alg = metric.algebra();
    let dec = metric.decomposition();
    let a = metric.inner_product();
    let xm = metric.x_m();
    let rho = a.alpha_norm_slice(xm);
    if rho == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let phi_sq = metric.phi().eval(rho)?.powi(2);
    let mut identity_residual = 0.0f64;
    for z in dec.m_basis() {
        let bracket = alg.bracket(x, z)?;
        let bm = dec.m_coords(&bracket)?;
        let lhs = metric.fundamental_form_m(xm, xm, &bm)?;
        let rhs = a.eval_slices(xm, &bm) * phi_sq;
        identity_residual = identity_residual.max((lhs - rhs).abs());
    }
    let riemannian = is_geodesic_riemannian(alg, dec, a, x, tol)?;
    let finsler = is_geodesic_finsler(metric, x, tol, Quantifier::OverM)?;
    let verdicts_agree = riemannian.verdict == finsler.verdict;
    Ok(PointEquivalence {
        identity_residual,
        riemannian,
        finsler,
        verdicts_agree,
        tolerance: tol,
    })
}

/// Result of the conditional equivalence check at an arbitrary direction Y.
///
/// The underlying identity, always checkable, is
///
///   g_{Y_m}(Y_m, [Y,Z]_m) = a(Y_m, [Y,Z]_m) (phi^2 - phi phi' r_m)
///                         + a(X, [Y,Z]_m) phi phi' |Y_m|_a,
///
/// phi at r_m = a(X, Y_m)/|Y_m|_a. Under the hypotheses (a) phi''(r_m) <= 0
/// and (b) a(X, [Y,Z]_m) = 0 for all Z in the m-basis, the second term
/// drops, the factor phi^2 - phi phi' r_m is strictly positive, and the
/// Finsler and Riemannian geodesic verdicts at Y must agree.
#[derive(Debug, Clone)]
pub struct ConditionalEquivalence {
    pub hypotheses_hold: bool,
    /// phi''(r_m); hypothesis (a) is that this is <= 0.
    pub phi_dd_at_rm: f64,
    /// Worst |a(X, [Y,Z]_m)| over the m-basis; hypothesis (b) is that this
    /// vanishes.
    pub x_bracket_residual: f64,
    /// Worst deviation from the full identity above.
    pub identity_residual: f64,
    /// Worst deviation from the reduced identity (X-term dropped); only
    /// meaningful when the hypotheses hold.
    pub reduced_residual: Option<f64>,
    /// Positivity of phi^2 - phi phi' r_m; only checked under the
    /// hypotheses, where it is a consequence of the convexity condition.
    pub factor_positive: Option<bool>,
    pub riemannian: PredicateOutcome,
    pub finsler: PredicateOutcome,
    pub verdicts_agree: bool,
    pub tolerance: f64,
}

pub fn check_conditional_equivalence(
    metric: &AlphaBetaMetric,
    y: &Vector,
    tol: f64,
) -> Result<ConditionalEquivalence> {
    let alg = metric.algebra();
    let dec = metric.decomposition();
    let a = metric.inner_product();
    if y.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: y.dim(),
        });
    }
    if y.inf_norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let ym = dec.m_coords(y)?;
    if m_component_vanishes(y, &ym) {
        return Err(Error::DegenerateDirection);
    }
    let norm_ym = a.alpha_norm_slice(&ym);
    let r_m = a.eval_slices(metric.x_m(), &ym) / norm_ym;
    let (p, p1, p2) = metric.phi().eval_all(r_m)?;

    let mut x_bracket_residual = 0.0f64;
    let mut identity_residual = 0.0f64;
    let mut reduced_residual = 0.0f64;
    for z in dec.m_basis() {
        let bracket = alg.bracket(y, z)?;
        let bm = dec.m_coords(&bracket)?;
        let a_xb = a.eval_slices(metric.x_m(), &bm);
        x_bracket_residual = x_bracket_residual.max(a_xb.abs());
        let lhs = metric.fundamental_form_m(&ym, &ym, &bm)?;
        let first = a.eval_slices(&ym, &bm) * (p * p - p * p1 * r_m);
        identity_residual = identity_residual.max((lhs - (first + a_xb * p * p1 * norm_ym)).abs());
        reduced_residual = reduced_residual.max((lhs - first).abs());
    }

    let hypotheses_hold = p2 <= 0.0 && x_bracket_residual <= tol;
    let (reduced, factor_positive) = if hypotheses_hold {
        (Some(reduced_residual), Some(p * p - p * p1 * r_m > 0.0))
    } else {
        (None, None)
    };
    let riemannian = is_geodesic_riemannian(alg, dec, a, y, tol)?;
    let finsler = is_geodesic_finsler(metric, y, tol, Quantifier::OverM)?;
    Ok(ConditionalEquivalence {
        hypotheses_hold,
        phi_dd_at_rm: p2,
        x_bracket_residual,
        identity_residual,
        reduced_residual: reduced,
        factor_positive,
        verdicts_agree: riemannian.verdict == finsler.verdict,
        riemannian,
        finsler,
        tolerance: tol,
    })
}

/// Options for [`find_geodesic_vectors_riemannian`] /
/// [`find_geodesic_vectors_finsler`].
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Minimum number of sphere points scanned.
    pub resolution: usize,
    /// Seed for the dimension >= 4 grid (lower dimensions use closed-form
    /// quasi-uniform grids and ignore it).
    pub seed: u64,
    /// A refined point is accepted as a solution when its worst residual
    /// is at most this.
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            resolution: 10_000,
            seed: 0,
            tol: 1e-9,
        }
    }
}

/// One reported solution direction (unit vector).
#[derive(Debug, Clone)]
pub struct SolutionPoint {
    pub direction: Vector,
    pub residual: f64,
    /// Number of refined grid points merged into this representative.
    pub cluster_size: usize,
}

#[derive(Debug, Clone)]
pub enum GeodesicVectorSet {
    /// More than 99% of raw grid points already satisfy the criterion:
    /// every direction is geodesic (bi-invariant case).
    All { passing_fraction: f64 },
    /// Cluster representatives. The Riemannian residual is even in x, so
    /// +-X are the same solution and are reported once, first nonzero
    /// coordinate positive. The same folding applies to a reversible
    /// Finsler metric; a non-reversible one (odd terms in phi, X nonzero)
    /// genuinely distinguishes orientations, so +X and -X are listed
    /// separately when both pass.
    Representatives(Vec<SolutionPoint>),
}

/// Scans the unit sphere of g for zeros of the Riemannian criterion.
pub fn find_geodesic_vectors_riemannian(
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    a: &InnerProduct,
    opts: &SearchOptions,
) -> Result<GeodesicVectorSet> {
    if a.dim() != dec.m_dim() {
        return Err(Error::DimensionMismatch {
            expected: dec.m_dim(),
            found: a.dim(),
        });
    }
    let residuals = |coords: &[f64]| -> Option<Vec<f64>> {
        let x = Vector::new(coords.to_vec());
        let xm = dec.m_coords(&x).ok()?;
        let mut out = Vec::with_capacity(dec.m_dim());
        for basis_vec in dec.m_basis() {
            let bracket = alg.bracket(&x, basis_vec).ok()?;
            let bm = dec.m_coords(&bracket).ok()?;
            out.push(a.eval_slices(&bm, &xm));
        }
        Some(out)
    };
    sphere_scan(alg.dim(), &residuals, opts, true)
}

/// Scans the unit sphere of g for zeros of the Finsler criterion. Grid
/// points whose m-component vanishes cannot be evaluated and are skipped as
/// starts; they can still be *limits* of refined points.
pub fn find_geodesic_vectors_finsler(
    metric: &AlphaBetaMetric,
    quantifier: Quantifier,
    opts: &SearchOptions,
) -> Result<GeodesicVectorSet> {
    let alg = metric.algebra();
    let dec = metric.decomposition();
    let dim = alg.dim();
    let ambient_basis: Vec<Vector> = (0..dim)
        .map(|i| Vector::basis(dim, i).expect("index in range"))
        .collect();
    let range: Vec<Vector> = match quantifier {
        Quantifier::OverG => ambient_basis,
        Quantifier::OverM => dec.m_basis().to_vec(),
    };
    let residuals = |coords: &[f64]| -> Option<Vec<f64>> {
        let x = Vector::new(coords.to_vec());
        let xm = dec.m_coords(&x).ok()?;
        let mut out = Vec::with_capacity(range.len());
        for z in &range {
            let bracket = alg.bracket(&x, z).ok()?;
            let bm = dec.m_coords(&bracket).ok()?;
            out.push(metric.fundamental_form_m(&xm, &xm, &bm).ok()?);
        }
        Some(out)
    };
    sphere_scan(dim, &residuals, opts, metric.is_reversible())
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, r| m.max(r.abs()))
}

fn sphere_scan(
    dim: usize,
    residuals: &dyn Fn(&[f64]) -> Option<Vec<f64>>,
    opts: &SearchOptions,
    fold_signs: bool,
) -> Result<GeodesicVectorSet> {
    const MAX_DIM: usize = 5;
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
    }
    let grid = sphere_grid(dim, opts.resolution.max(2), opts.seed);

    // Raw pass fraction decides the "everything is geodesic" shortcut.
    let mut passing = 0usize;
    let mut evaluated = 0usize;
    for point in &grid {
        if let Some(r) = residuals(point) {
            evaluated += 1;
            if max_abs(&r) <= opts.tol {
                passing += 1;
            }
        }
    }
    if evaluated > 0 {
        let fraction = passing as f64 / grid.len() as f64;
        if fraction > 0.99 {
            return Ok(GeodesicVectorSet::All {
                passing_fraction: fraction,
            });
        }
    }

    // Refine every start; solution manifolds are recovered by density, not
    // by hoping a coarse grid point lands on them.
    let mut clusters: Vec<SolutionPoint> = Vec::new();
    for point in &grid {
        let Some((solution, residual)) = refine_on_sphere(point, residuals, opts.tol) else {
            continue;
        };
        let canonical = if fold_signs {
            canonical_sign(&solution)
        } else {
            solution
        };
        let mut merged = false;
        for cluster in &mut clusters {
            let angle = if fold_signs {
                folded_angle(&canonical, cluster.direction.coords())
            } else {
                plain_angle(&canonical, cluster.direction.coords())
            };
            if angle < CLUSTER_RADIUS {
                cluster.cluster_size += 1;
                if residual < cluster.residual {
                    cluster.residual = residual;
                }
                merged = true;
                break;
            }
        }
        if !merged {
            clusters.push(SolutionPoint {
                direction: Vector::new(canonical),
                residual,
                cluster_size: 1,
            });
        }
    }
    Ok(GeodesicVectorSet::Representatives(clusters))
}

/// Quasi-uniform grid on S^{dim-1} with at least `count` points.
fn sphere_grid(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect(),
        3 => {
            // Fibonacci sphere: uniform in z, golden-angle azimuths.
            let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let rho = (1.0 - z * z).max(0.0).sqrt();
                    let theta = golden * k as f64;
                    vec![rho * theta.cos(), rho * theta.sin(), z]
                })
                .collect()
        }
        _ => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut points = Vec::with_capacity(count);
            while points.len() < count {
                let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                if n > 0.1 && n <= 1.0 {
                    points.push(v.into_iter().map(|c| c / n).collect());
                }
            }
            points
        }
    }
}

/// Damped Gauss-Newton on the sphere. Returns the refined unit vector and
/// its worst residual when that residual reaches `tol`.
fn refine_on_sphere(
    start: &[f64],
    residuals: &dyn Fn(&[f64]) -> Option<Vec<f64>>,
    tol: f64,
) -> Option<(Vec<f64>, f64)> {
    const MAX_ITER: usize = 60;
    const JAC_STEP: f64 = 1e-6;
    let n = start.len();
    let mut x = start.to_vec();
    let mut r = residuals(&x)?;
    let mut fval: f64 = r.iter().map(|t| t * t).sum();
    let mut lambda = 1e-3;
    let target = 0.05 * tol;

    for _ in 0..MAX_ITER {
        if max_abs(&r) <= target {
            break;
        }
        let tangent = tangent_basis(&x);
        let m = r.len();
        let cols = tangent.len();
        // Central-difference Jacobian along the tangent frame. Residuals
        // are polynomial in x, so the truncation error is negligible next
        // to the Newton contraction.
        let mut jac = DMatrix::zeros(m, cols);
        let mut ok = true;
        for (c, dir) in tangent.iter().enumerate() {
            let xp: Vec<f64> = x.iter().zip(dir).map(|(a, d)| a + JAC_STEP * d).collect();
            let xm: Vec<f64> = x.iter().zip(dir).map(|(a, d)| a - JAC_STEP * d).collect();
            let (Some(rp), Some(rm)) = (residuals(&xp), residuals(&xm)) else {
                ok = false;
                break;
            };
            for i in 0..m {
                jac[(i, c)] = (rp[i] - rm[i]) / (2.0 * JAC_STEP);
            }
        }
        if !ok {
            break;
        }
        let jt = jac.transpose();
        let rhs = -(&jt * DVector::from_column_slice(&r));
        let mut lhs = &jt * &jac;
        for i in 0..cols {
            lhs[(i, i)] += lambda;
        }
        let Some(step) = lhs.lu().solve(&rhs) else {
            lambda *= 10.0;
            if lambda > 1e10 {
                break;
            }
            continue;
        };
        let mut trial: Vec<f64> = x.clone();
        for (c, dir) in tangent.iter().enumerate() {
            for i in 0..n {
                trial[i] += step[c] * dir[i];
            }
        }
        let norm = trial.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        for c in trial.iter_mut() {
            *c /= norm;
        }
        match residuals(&trial) {
            Some(rt) => {
                let ft: f64 = rt.iter().map(|t| t * t).sum();
                if ft < fval {
                    x = trial;
                    r = rt;
                    fval = ft;
                    lambda = (lambda * 0.3).max(1e-12);
                } else {
                    lambda *= 10.0;
                    if lambda > 1e10 {
                        break;
                    }
                }
            }
            None => break,
        }
    }
    let final_residual = max_abs(&r);
    (final_residual <= tol).then_some((x, final_residual))
}

/// Orthonormal basis of the tangent space at a unit vector x: the standard
/// basis minus its most x-parallel member, Gram-Schmidt against x and each
/// other.
fn tangent_basis(x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let skip = (0..n)
        .max_by(|&i, &j| x[i].abs().partial_cmp(&x[j].abs()).expect("finite"))
        .unwrap_or(0);
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for i in 0..n {
        if i == skip {
            continue;
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        let xv: f64 = v.iter().zip(x).map(|(a, b)| a * b).sum();
        for (c, xc) in v.iter_mut().zip(x) {
            *c -= xv * xc;
        }
        for prev in &frame {
            let pv: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum();
            for (c, pc) in v.iter_mut().zip(prev) {
                *c -= pv * pc;
            }
        }
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for c in v.iter_mut() {
                *c /= norm;
            }
            frame.push(v);
        }
    }
    frame
}

/// Flips the sign so the first coordinate above noise is positive; +-X name
/// the same direction.
fn canonical_sign(v: &[f64]) -> Vec<f64> {
    for &c in v {
        if c.abs() > 1e-9 {
            if c < 0.0 {
                return v.iter().map(|t| -t).collect();
            }
            return v.to_vec();
        }
    }
    v.to_vec()
}

/// Angle between the lines spanned by two unit vectors.
fn folded_angle(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    dot.abs().min(1.0).acos()
}

/// Angle between two unit vectors, orientation kept.
fn plain_angle(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    dot.clamp(-1.0, 1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;
    use crate::metric::IpDomain;
    use crate::phi::PhiFunction;
    use approx::assert_abs_diff_eq;

    fn heis3_randers(x: Vec<f64>) -> AlphaBetaMetric {
        let (alg, dec) = catalog("heis3").unwrap();
        AlphaBetaMetric::new(
            &alg,
            &dec,
            InnerProduct::identity(3, IpDomain::Ambient),
            Vector::new(x),
            PhiFunction::randers(),
        )
        .unwrap()
    }

    #[test]
    fn heis3_center_is_geodesic_axis_is_not() {
        let (alg, dec) = catalog("heis3").unwrap();
        let a = InnerProduct::identity(3, IpDomain::Ambient);
        let center = Vector::basis(3, 2).unwrap();
        let outcome = is_geodesic_riemannian(&alg, &dec, &a, &center, 1e-12).unwrap();
        assert_eq!(outcome.verdict, Verdict::Geodesic);

        // x = e1 + e3 has residual |a([x,e2], x)| = |a(e3, x)| = 1.
        let mixed = Vector::new(vec![1.0, 0.0, 1.0]);
        let outcome = is_geodesic_riemannian(&alg, &dec, &a, &mixed, 1e-12).unwrap();
        assert_eq!(outcome.verdict, Verdict::NotGeodesic);
        assert_abs_diff_eq!(outcome.residual, 1.0);

        // Anything in the x3 = 0 plane is geodesic.
        let planar = Vector::new(vec![0.6, -0.8, 0.0]);
        let outcome = is_geodesic_riemannian(&alg, &dec, &a, &planar, 1e-12).unwrap();
        assert_eq!(outcome.verdict, Verdict::Geodesic);
    }

    #[test]
    fn randers_term_shifts_the_heis3_geodesic_set() {
        // With X = 0.5 e3 the Finsler criterion reduces to
        // (1 + s)(y3 + 0.5) = 0 on unit vectors (s = 0.5 y3), plus the
        // always-geodesic +-e3. The Riemannian circle y3 = 0 moves to
        // y3 = -0.5, and the set stops being symmetric under y -> -y.
        let m = heis3_randers(vec![0.0, 0.0, 0.5]);
        let t = 1e-10;

        let planar = Vector::new(vec![0.6, -0.8, 0.0]);
        let fin = is_geodesic_finsler(&m, &planar, t, Quantifier::OverG).unwrap();
        assert_eq!(fin.verdict, Verdict::NotGeodesic);
        // worst residual: |[y,e1]| factor 0.8 times g_y(y,e3) = 0.5.
        assert_abs_diff_eq!(fin.residual, 0.4, epsilon = 1e-14);
        let rie =
            is_geodesic_riemannian(m.algebra(), m.decomposition(), m.inner_product(), &planar, t)
                .unwrap();
        assert_eq!(rie.verdict, Verdict::Geodesic);

        let rho = 0.75f64.sqrt();
        let shifted = Vector::new(vec![rho, 0.0, -0.5]);
        let fin = is_geodesic_finsler(&m, &shifted, t, Quantifier::OverG).unwrap();
        assert_eq!(fin.verdict, Verdict::Geodesic);
        let reversed = shifted.scale(-1.0);
        let fin = is_geodesic_finsler(&m, &reversed, t, Quantifier::OverG).unwrap();
        assert_eq!(fin.verdict, Verdict::NotGeodesic);

        for sign in [1.0, -1.0] {
            let axis = Vector::new(vec![0.0, 0.0, sign]);
            let fin = is_geodesic_finsler(&m, &axis, t, Quantifier::OverG).unwrap();
            assert_eq!(fin.verdict, Verdict::Geodesic);
        }
    }

    #[test]
    fn degenerate_m_component_is_flagged_by_both_predicates() {
        let (alg, dec) = catalog("so3_so2").unwrap();
        let a = InnerProduct::identity(2, IpDomain::MRestricted);
        let m = AlphaBetaMetric::new(
            &alg,
            &dec,
            a.clone(),
            Vector::new(vec![0.3, 0.0, 0.0]),
            PhiFunction::randers(),
        )
        .unwrap();
        let isotropy = Vector::basis(3, 2).unwrap();
        let rie = is_geodesic_riemannian(&alg, &dec, &a, &isotropy, 1e-12).unwrap();
        assert_eq!(rie.verdict, Verdict::Degenerate);
        let fin = is_geodesic_finsler(&m, &isotropy, 1e-12, Quantifier::OverG).unwrap();
        assert_eq!(fin.verdict, Verdict::Degenerate);
    }

    #[test]
    fn zero_vector_is_an_error() {
        let m = heis3_randers(vec![0.0, 0.0, 0.5]);
        assert!(matches!(
            is_geodesic_finsler(&m, &Vector::zero(3), 1e-12, Quantifier::OverG),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn point_equivalence_on_geodesic_and_non_geodesic_x() {
        // X in the x3 = 0 plane: a geodesic vector of heis3.
        let m = heis3_randers(vec![0.4, 0.3, 0.0]);
        let eq = check_point_equivalence(&m, 1e-10).unwrap();
        assert!(eq.identity_residual <= 1e-10);
        assert!(eq.verdicts_agree);
        assert_eq!(eq.riemannian.verdict, Verdict::Geodesic);

        // X with mixed components: not geodesic, verdicts still agree.
        let m = heis3_randers(vec![0.5, 0.0, 0.5]);
        let eq = check_point_equivalence(&m, 1e-10).unwrap();
        assert!(eq.identity_residual <= 1e-10);
        assert!(eq.verdicts_agree);
        assert_eq!(eq.riemannian.verdict, Verdict::NotGeodesic);
    }

    #[test]
    fn point_equivalence_with_nontrivial_isotropy() {
        // Weighted central direction: a = diag(1,1,2) on m = {e1,e2,e4},
        // X = 0.3 e4 commutes with everything, so X is geodesic for both
        // structures and the identity holds to roundoff.
        let (alg, dec) = catalog("so3r_so2").unwrap();
        let a = InnerProduct::from_diag(&[1.0, 1.0, 2.0], IpDomain::MRestricted).unwrap();
        let m = AlphaBetaMetric::new(
            &alg,
            &dec,
            a,
            Vector::new(vec![0.0, 0.0, 0.0, 0.3]),
            PhiFunction::randers(),
        )
        .unwrap();
        let eq = check_point_equivalence(&m, 1e-12).unwrap();
        assert!(eq.identity_residual <= 1e-12);
        assert!(eq.verdicts_agree);
        assert_eq!(eq.riemannian.verdict, Verdict::Geodesic);
        assert_eq!(eq.finsler.verdict, Verdict::Geodesic);
    }

    #[test]
    fn conditional_equivalence_hypotheses_and_identity() {
        // so3r_so2 with the invariant diag form and central X = 0.3 e4:
        // brackets of m-directions land in span{e1,e2}, orthogonal to X,
        // and the Randers profile has phi'' = 0, so the hypotheses hold for
        // directions in the so(3) block.
        let (alg, dec) = catalog("so3r_so2").unwrap();
        let a = InnerProduct::from_diag(&[1.0, 1.0, 1.0], IpDomain::MRestricted).unwrap();
        let m = AlphaBetaMetric::new(
            &alg,
            &dec,
            a,
            Vector::new(vec![0.0, 0.0, 0.0, 0.3]),
            PhiFunction::randers(),
        )
        .unwrap();
        let y = Vector::new(vec![1.0, 0.5, -0.2, 0.0]);
        let out = check_conditional_equivalence(&m, &y, 1e-10).unwrap();
        assert!(out.hypotheses_hold);
        assert!(out.identity_residual <= 1e-10);
        assert!(out.reduced_residual.unwrap() <= 1e-10);
        assert_eq!(out.factor_positive, Some(true));
        assert!(out.verdicts_agree);

        // A strictly convex profile (phi'' > 0) breaks hypothesis (a); the
        // raw identity still holds.
        let phi = PhiFunction::polynomial(vec![1.0, 1.0, 0.1], 1.0).unwrap();
        let a = InnerProduct::from_diag(&[1.0, 1.0, 1.0], IpDomain::MRestricted).unwrap();
        let m = AlphaBetaMetric::new(
            &alg,
            &dec,
            a,
            Vector::new(vec![0.0, 0.0, 0.0, 0.3]),
            phi,
        )
        .unwrap();
        let out = check_conditional_equivalence(&m, &y, 1e-10).unwrap();
        assert!(!out.hypotheses_hold);
        assert!(out.reduced_residual.is_none());
        assert!(out.identity_residual <= 1e-10);
    }

    #[test]
    fn solver_reports_all_for_biinvariant_su2() {
        let (alg, dec) = catalog("su2").unwrap();
        let a = InnerProduct::identity(3, IpDomain::Ambient);
        let opts = SearchOptions {
            resolution: 2000,
            ..Default::default()
        };
        match find_geodesic_vectors_riemannian(&alg, &dec, &a, &opts).unwrap() {
            GeodesicVectorSet::All { passing_fraction } => {
                assert!(passing_fraction > 0.99)
            }
            GeodesicVectorSet::Representatives(reps) => {
                panic!("expected All, got {} representatives", reps.len())
            }
        }
    }

    #[test]
    fn solver_recovers_heis3_families_at_small_resolution() {
        let (alg, dec) = catalog("heis3").unwrap();
        let a = InnerProduct::identity(3, IpDomain::Ambient);
        let opts = SearchOptions {
            resolution: 4000,
            seed: 1,
            tol: 1e-9,
        };
        let GeodesicVectorSet::Representatives(reps) =
            find_geodesic_vectors_riemannian(&alg, &dec, &a, &opts).unwrap()
        else {
            panic!("heis3 is not bi-invariant; expected representatives");
        };
        assert!(!reps.is_empty());
        for rep in &reps {
            assert!(rep.residual <= 1e-9);
            // Every representative lies in one of the two hand families.
            let c = rep.direction.coords();
            let in_plane = c[2].abs() < 1e-6;
            let on_axis = (c[0].abs() < 1e-6) && (c[1].abs() < 1e-6);
            assert!(in_plane || on_axis, "stray representative {c:?}");
        }
        // Both families are present.
        assert!(reps.iter().any(|r| r.direction.coords()[2].abs() < 1e-6));
        assert!(reps
            .iter()
            .any(|r| r.direction.coords()[2].abs() > 1.0 - 1e-6));
    }

    #[test]
    fn solver_is_deterministic() {
        let (alg, dec) = catalog("heis3").unwrap();
        let a = InnerProduct::identity(3, IpDomain::Ambient);
        let opts = SearchOptions {
            resolution: 1500,
            seed: 9,
            tol: 1e-9,
        };
        let run = || match find_geodesic_vectors_riemannian(&alg, &dec, &a, &opts).unwrap() {
            GeodesicVectorSet::Representatives(reps) => reps
                .iter()
                .flat_map(|r| r.direction.coords().to_vec())
                .collect::<Vec<f64>>(),
            GeodesicVectorSet::All { .. } => panic!("unexpected All"),
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn finsler_search_agrees_with_riemannian_for_trivial_profile() {
        let (alg, dec) = catalog("heis3").unwrap();
        let a = InnerProduct::identity(3, IpDomain::Ambient);
        let m = AlphaBetaMetric::new(
            &alg,
            &dec,
            a,
            Vector::zero(3),
            PhiFunction::riemannian(),
        )
        .unwrap();
        let opts = SearchOptions {
            resolution: 800,
            seed: 3,
            tol: 1e-9,
        };
        let GeodesicVectorSet::Representatives(fin) =
            find_geodesic_vectors_finsler(&m, Quantifier::OverG, &opts).unwrap()
        else {
            panic!("expected representatives");
        };
        assert!(!fin.is_empty());
        for rep in &fin {
            let c = rep.direction.coords();
            assert!(
                c[2].abs() < 1e-6 || (c[0].abs() < 1e-6 && c[1].abs() < 1e-6),
                "stray representative {c:?}"
            );
        }
    }

    #[test]
    fn finsler_search_keeps_orientations_apart_for_randers() {
        // Solution set {y3 = -0.5} union {+-e3}: not closed under sign, so
        // the scan must not fold. Every representative must land in one of
        // the families and both poles must appear as separate entries.
        let m = heis3_randers(vec![0.0, 0.0, 0.5]);
        let opts = SearchOptions {
            resolution: 4000,
            seed: 5,
            tol: 1e-9,
        };
        let GeodesicVectorSet::Representatives(reps) =
            find_geodesic_vectors_finsler(&m, Quantifier::OverG, &opts).unwrap()
        else {
            panic!("expected representatives");
        };
        for rep in &reps {
            let c = rep.direction.coords();
            assert!(rep.residual <= 1e-9);
            assert!(
                (c[2] + 0.5).abs() < 1e-6 || c[2].abs() > 1.0 - 1e-6,
                "stray representative {c:?}"
            );
        }
        assert!(reps.iter().any(|r| (r.direction.coords()[2] + 0.5).abs() < 1e-6));
        assert!(reps.iter().any(|r| r.direction.coords()[2] > 1.0 - 1e-6));
        assert!(reps.iter().any(|r| r.direction.coords()[2] < -1.0 + 1e-6));
    }

    #[test]
    fn dimension_guard() {
        let (alg, dec) = catalog("abelian(6)").unwrap();
        let a = InnerProduct::identity(6, IpDomain::Ambient);
        assert!(matches!(
            find_geodesic_vectors_riemannian(&alg, &dec, &a, &SearchOptions::default()),
            Err(Error::DimensionTooLarge { .. })
        ));
    }
}
