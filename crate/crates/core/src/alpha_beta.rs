//! (alpha,beta)-metrics F = alpha * phi(beta/alpha) and their fundamental
//! tensors.
//!
//! The metric data is a reductive decomposition, an inner product a on m,
//! an invariant vector X in m with |X|_a < b0, and a profile phi whose
//! strong-convexity condition holds at b = |X|_a. For a nonzero direction
//! y in m write alpha = sqrt(a(y,y)), r = a(X,y)/alpha. The fundamental
//! tensor is the second s,t-derivative of F^2(y + s u + t v)/2 at the
//! origin; expanding it through phi gives, with w(t) = a(X,t) - r a(y,t)/alpha,
//!
//!   g_y(u,v) = phi^2 a(u,v) + (phi'^2 + phi phi'') w(u) w(v)
//!            + (phi phi'/alpha) [ a(y,u) a(X,v) + a(X,u) a(y,v)
//!                                 - a(X,y) (a(y,u) a(y,v)/a(y,y) + a(u,v)) ]
//!
//! (phi and derivatives at r). Every closed-form value can be cross-checked
//! against [`AlphaBetaMetric::fundamental_form_fd`], a mixed central
//! difference of F^2 that shares no code with the expansion above; that
//! finite-difference route is the oracle all downstream identities are
//! certified against.

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, ReductiveDecomposition, Vector, DEFAULT_TOL};
use crate::metric::{InnerProduct, IpDomain};
use crate::phi::{check_phi_condition, PhiFunction};

/// Default step for the finite-difference route.
pub const FD_STEP: f64 = 1e-4;

/// If the plain stencil at h and h/2 self-disagrees beyond this (relative
/// to value size), the Richardson extrapolation of the two is returned.
pub const RICHARDSON_TRIGGER: f64 = 1e-7;

/// Invariant (alpha,beta)-metric on a homogeneous space, expressed at the
/// Lie-algebra level. Construction enforces every admissibility invariant:
/// X lies in m, |X|_a stays below b0, and the profile's strong-convexity
/// condition holds on [-|X|_a, |X|_a].
#[derive(Debug, Clone)]
pub struct AlphaBetaMetric {
    alg: LieAlgebra,
    dec: ReductiveDecomposition,
    a: InnerProduct,
    x: Vector,
    x_m: Vec<f64>,
    phi: PhiFunction,
    b: f64,
}

impl AlphaBetaMetric {
    pub fn new(
        alg: &LieAlgebra,
        dec: &ReductiveDecomposition,
        a: InnerProduct,
        x: Vector,
        phi: PhiFunction,
    ) -> Result<Self> {
        if dec.dim() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: dec.dim(),
            });
        }
        if a.dim() != dec.m_dim() {
            return Err(Error::DimensionMismatch {
                expected: dec.m_dim(),
                found: a.dim(),
            });
        }
        let expected_domain = if dec.is_trivial() {
            IpDomain::Ambient
        } else {
            IpDomain::MRestricted
        };
        if a.domain() != expected_domain {
            return Err(Error::DomainTagMismatch {
                expected: domain_name(expected_domain),
                found: domain_name(a.domain()),
            });
        }
        let x_m = dec.m_coords_checked(&x, DEFAULT_TOL)?;
        let b = a.alpha_norm_slice(&x_m);
        if !(b < phi.b0()) {
            return Err(Error::NormExceedsB0 { norm: b, b0: phi.b0() });
        }
        let condition = check_phi_condition(&phi, b)?;
        if !condition.pass {
            return Err(Error::PhiConditionFailed {
                b,
                min: condition.min_value,
                at: condition.argmin,
            });
        }
        Ok(AlphaBetaMetric {
            alg: alg.clone(),
            dec: dec.clone(),
            a,
            x,
            x_m,
            phi,
            b,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn decomposition(&self) -> &ReductiveDecomposition {
        &self.dec
    }

    pub fn inner_product(&self) -> &InnerProduct {
        &self.a
    }

    pub fn x(&self) -> &Vector {
        &self.x
    }

    /// m-coordinates of X.
    pub fn x_m(&self) -> &[f64] {
        &self.x_m
    }

    pub fn phi(&self) -> &PhiFunction {
        &self.phi
    }

    /// |X|_a, the bound at which the convexity condition was validated.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// True when F(-v) = F(v): the profile is even, or X vanishes so the
    /// linear term is identically zero. Non-reversible metrics have
    /// direction-dependent geodesics; +-y must then be treated as distinct.
    pub fn is_reversible(&self) -> bool {
        self.b == 0.0 || self.phi.is_even()
    }

    fn to_m(&self, v: &Vector) -> Result<Vec<f64>> {
        self.dec.m_coords_checked(v, DEFAULT_TOL)
    }

    /// a(u, v) for ambient vectors in m.
    pub fn inner_m(&self, u: &Vector, v: &Vector) -> Result<f64> {
        let um = self.to_m(u)?;
        let vm = self.to_m(v)?;
        Ok(self.a.eval_slices(&um, &vm))
    }

    /// F(y) for an ambient y in m. F(0) is 0 by convention (the metric is
    /// only positively homogeneous, so the origin carries no information).
    pub fn eval_f(&self, y: &Vector) -> Result<f64> {
        let ym = self.to_m(y)?;
        self.eval_f_m(&ym)
    }

    fn eval_f_m(&self, ym: &[f64]) -> Result<f64> {
        let alpha = self.a.alpha_norm_slice(ym);
        if alpha == 0.0 {
            return Ok(0.0);
        }
        let s = self.a.eval_slices(&self.x_m, ym) / alpha;
        Ok(alpha * self.phi.eval(s)?)
    }

    /// F(y)^2; the quantity the finite-difference route differentiates.
    pub fn eval_f_squared(&self, y: &Vector) -> Result<f64> {
        Ok(self.eval_f(y)?.powi(2))
    }

    /// Fundamental tensor g_y(u, v) by the closed expansion. All three
    /// arguments are ambient vectors in m; y must be nonzero.
    pub fn fundamental_form(&self, y: &Vector, u: &Vector, v: &Vector) -> Result<f64> {
        let ym = self.to_m(y)?;
        let um = self.to_m(u)?;
        let vm = self.to_m(v)?;
        self.fundamental_form_m(&ym, &um, &vm)
    }

    pub(crate) fn fundamental_form_m(&self, ym: &[f64], um: &[f64], vm: &[f64]) -> Result<f64> {
        let ayy = self.a.eval_slices(ym, ym);
        if ayy <= 0.0 {
            return Err(Error::DegenerateDirection);
        }
        let alpha = ayy.sqrt();
        let axy = self.a.eval_slices(&self.x_m, ym);
        let r = axy / alpha;
        let (p, p1, p2) = self.phi.eval_all(r)?;

        let a_uv = self.a.eval_slices(um, vm);
        let a_yu = self.a.eval_slices(ym, um);
        let a_yv = self.a.eval_slices(ym, vm);
        let a_xu = self.a.eval_slices(&self.x_m, um);
        let a_xv = self.a.eval_slices(&self.x_m, vm);

        let w_u = a_xu - axy * a_yu / ayy;
        let w_v = a_xv - axy * a_yv / ayy;

        Ok(p * p * a_uv
            + (p1 * p1 + p * p2) * w_u * w_v
            + (p * p1 / alpha)
                * (a_yu * a_xv + a_xu * a_yv - axy * (a_yu * a_yv / ayy + a_uv)))
    }

    /// Fundamental tensor by mixed central differences of F^2 at the
    /// default step. Independent of [`fundamental_form`]: it never touches
    /// the expansion, only F itself.
    ///
    /// [`fundamental_form`]: AlphaBetaMetric::fundamental_form
    pub fn fundamental_form_fd(&self, y: &Vector, u: &Vector, v: &Vector) -> Result<f64> {
        self.fundamental_form_fd_with(y, u, v, FD_STEP)
    }

    /// Same with an explicit step. The stencil is evaluated at h and h/2;
    /// if the two disagree beyond [`RICHARDSON_TRIGGER`] (relative), their
    /// Richardson extrapolation (4 D(h/2) - D(h))/3 is returned instead.
    pub fn fundamental_form_fd_with(
        &self,
        y: &Vector,
        u: &Vector,
        v: &Vector,
        h: f64,
    ) -> Result<f64> {
        let ym = self.to_m(y)?;
        let um = self.to_m(u)?;
        let vm = self.to_m(v)?;
        if self.a.alpha_norm_slice(&ym) == 0.0 {
            return Err(Error::DegenerateDirection);
        }
        let d1 = self.fd_stencil(&ym, &um, &vm, h)?;
        let d2 = self.fd_stencil(&ym, &um, &vm, 0.5 * h)?;
        if (d1 - d2).abs() <= RICHARDSON_TRIGGER * (1.0 + d2.abs()) {
            Ok(d1)
        } else {
            Ok((4.0 * d2 - d1) / 3.0)
        }
    }

    fn fd_stencil(&self, ym: &[f64], um: &[f64], vm: &[f64], h: f64) -> Result<f64> {
        let k = ym.len();
        let mut point = vec![0.0; k];
        let mut corner = |su: f64, sv: f64| -> Result<f64> {
            for i in 0..k {
                point[i] = ym[i] + su * h * um[i] + sv * h * vm[i];
            }
            Ok(self.eval_f_m(&point)?.powi(2))
        };
        let fpp = corner(1.0, 1.0)?;
        let fpm = corner(1.0, -1.0)?;
        let fmp = corner(-1.0, 1.0)?;
        let fmm = corner(-1.0, -1.0)?;
        Ok(0.5 * (fpp - fpm - fmp + fmm) / (4.0 * h * h))
    }

    /// g_y(y, [y, z]) through the inner-product identity
    ///
    ///   g_y(y,[y,z]) = a(y,[y,z]) (phi^2 - phi phi' r)
    ///               + a(X,[y,z]) phi phi' sqrt(a(y,y)),
    ///
    /// phi at r = a(X,y)/alpha(y). Requires [y, z] to lie in the form's
    /// domain, which on a group (trivial isotropy) is automatic.
    pub fn g_y_y_bracket(&self, y: &Vector, z: &Vector) -> Result<f64> {
        let bracket = self.alg.bracket(y, z)?;
        let bm = self.to_m(&bracket)?;
        let ym = self.to_m(y)?;
        let ayy = self.a.eval_slices(&ym, &ym);
        if ayy <= 0.0 {
            return Err(Error::DegenerateDirection);
        }
        let alpha = ayy.sqrt();
        let r = self.a.eval_slices(&self.x_m, &ym) / alpha;
        let (p, p1, _) = self.phi.eval_all(r)?;
        let a_yb = self.a.eval_slices(&ym, &bm);
        let a_xb = self.a.eval_slices(&self.x_m, &bm);
        Ok(a_yb * (p * p - p * p1 * r) + a_xb * p * p1 * alpha)
    }
}

fn domain_name(d: IpDomain) -> &'static str {
    match d {
        IpDomain::Ambient => "ambient",
        IpDomain::MRestricted => "m-restricted",
    }
}
