//! Profile functions phi for (alpha,beta)-metrics.
//!
//! phi is a positive smooth function on (-b0, b0); the metric
//! F = alpha * phi(beta/alpha) is strongly convex exactly when
//!
//!   phi(s) - s phi'(s) + (b^2 - s^2) phi''(s) > 0   for |s| <= b < b0,
//!
//! which [`check_phi_condition`] evaluates on a sign-symmetric grid.
//! Built-in kinds: the Riemannian profile phi == 1 (b0 = infinity), the
//! Randers profile phi = 1 + s (b0 = 1), and polynomials in s. Custom
//! closures are accepted too; for polynomials and custom closures the
//! stated first and second derivatives are cross-checked against central
//! finite differences at construction, so a profile whose derivatives lie
//! about it never enters the system.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Grid size used when validating the positivity condition at metric
/// construction.
pub const PHI_CONDITION_GRID: usize = 201;

/// Relative tolerance for the construction-time derivative cross-check.
pub const DERIVATIVE_CHECK_TOL: f64 = 1e-6;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum PhiRepr {
    Riemannian,
    Randers,
    /// phi(s) = sum_i coeffs[i] * s^i.
    Polynomial { coeffs: Vec<f64> },
    Custom {
        name: String,
        f: ScalarFn,
        d1: ScalarFn,
        d2: ScalarFn,
    },
}

/// Profile function with its domain radius b0.
#[derive(Clone)]
pub struct PhiFunction {
    repr: PhiRepr,
    b0: f64,
}

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiFunction")
            .field("kind", &self.kind_name())
            .field("b0", &self.b0)
            .finish()
    }
}

impl PartialEq for PhiFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.b0.to_bits() != other.b0.to_bits() {
            return false;
        }
        match (&self.repr, &other.repr) {
            (PhiRepr::Riemannian, PhiRepr::Riemannian) => true,
            (PhiRepr::Randers, PhiRepr::Randers) => true,
            (PhiRepr::Polynomial { coeffs: a }, PhiRepr::Polynomial { coeffs: b }) => {
                a.len() == b.len()
                    && a.iter()
                        .zip(b)
                        .all(|(x, y)| x.to_bits() == y.to_bits())
            }
            (
                PhiRepr::Custom { f: f1, d1: a1, d2: b1, .. },
                PhiRepr::Custom { f: f2, d1: a2, d2: b2, .. },
            ) => Arc::ptr_eq(f1, f2) && Arc::ptr_eq(a1, a2) && Arc::ptr_eq(b1, b2),
            _ => false,
        }
    }
}

impl PhiFunction {
    /// phi == 1: the metric degenerates to the Riemannian norm alpha.
    pub fn riemannian() -> Self {
        PhiFunction {
            repr: PhiRepr::Riemannian,
            b0: f64::INFINITY,
        }
    }

    /// phi(s) = 1 + s, positive exactly on (-1, 1).
    pub fn randers() -> Self {
        PhiFunction {
            repr: PhiRepr::Randers,
            b0: 1.0,
        }
    }

    /// phi(s) = sum coeffs[i] s^i on (-b0, b0). b0 must be finite and
    /// positive, and phi must be positive on the sampled domain.
    pub fn polynomial(coeffs: Vec<f64>, b0: f64) -> Result<Self> {
        if !(b0.is_finite() && b0 > 0.0) {
            return Err(Error::InvalidB0 { b0 });
        }
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidB0 { b0 });
        }
        let phi = PhiFunction {
            repr: PhiRepr::Polynomial { coeffs },
            b0,
        };
        phi.validate_positivity()?;
        phi.validate_derivatives()?;
        Ok(phi)
    }

    /// Arbitrary profile given by closures for phi, phi', phi''. The
    /// derivatives are trusted only after they survive the finite-difference
    /// cross-check.
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        b0: f64,
    ) -> Result<Self> {
        if !(b0.is_finite() && b0 > 0.0) {
            return Err(Error::InvalidB0 { b0 });
        }
        let phi = PhiFunction {
            repr: PhiRepr::Custom {
                name: name.into(),
                f: Arc::new(f),
                d1: Arc::new(d1),
                d2: Arc::new(d2),
            },
            b0,
        };
        phi.validate_positivity()?;
        phi.validate_derivatives()?;
        Ok(phi)
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn kind_name(&self) -> String {
        match &self.repr {
            PhiRepr::Riemannian => "riemannian".to_string(),
            PhiRepr::Randers => "randers".to_string(),
            PhiRepr::Polynomial { coeffs } => {
                let list: Vec<String> = coeffs.iter().map(|c| format!("{c}")).collect();
                format!("poly:{}", list.join(","))
            }
            PhiRepr::Custom { name, .. } => format!("custom:{name}"),
        }
    }

    /// Polynomial coefficients if this is a polynomial profile.
    pub fn coefficients(&self) -> Option<&[f64]> {
        match &self.repr {
            PhiRepr::Polynomial { coeffs } => Some(coeffs),
            _ => None,
        }
    }

    pub fn is_riemannian(&self) -> bool {
        matches!(self.repr, PhiRepr::Riemannian)
    }

    fn in_domain(&self, s: f64) -> bool {
        s.is_finite() && s.abs() < self.b0
    }

    fn raw(&self, s: f64) -> f64 {
        match &self.repr {
            PhiRepr::Riemannian => 1.0,
            PhiRepr::Randers => 1.0 + s,
            PhiRepr::Polynomial { coeffs } => horner(coeffs, s),
            PhiRepr::Custom { f, .. } => f(s),
        }
    }

    fn raw_d1(&self, s: f64) -> f64 {
        match &self.repr {
            PhiRepr::Riemannian => 0.0,
            PhiRepr::Randers => 1.0,
            PhiRepr::Polynomial { coeffs } => horner_d1(coeffs, s),
            PhiRepr::Custom { d1, .. } => d1(s),
        }
    }

    fn raw_d2(&self, s: f64) -> f64 {
        match &self.repr {
            PhiRepr::Riemannian => 0.0,
            PhiRepr::Randers => 0.0,
            PhiRepr::Polynomial { coeffs } => horner_d2(coeffs, s),
            PhiRepr::Custom { d2, .. } => d2(s),
        }
    }

    /// phi(s); s must lie inside (-b0, b0).
    pub fn eval(&self, s: f64) -> Result<f64> {
        if !self.in_domain(s) {
            return Err(Error::PhiDomainExceeded { s, b0: self.b0 });
        }
        Ok(self.raw(s))
    }

    /// phi'(s).
    pub fn d1(&self, s: f64) -> Result<f64> {
        if !self.in_domain(s) {
            return Err(Error::PhiDomainExceeded { s, b0: self.b0 });
        }
        Ok(self.raw_d1(s))
    }

    /// phi''(s).
    pub fn d2(&self, s: f64) -> Result<f64> {
        if !self.in_domain(s) {
            return Err(Error::PhiDomainExceeded { s, b0: self.b0 });
        }
        Ok(self.raw_d2(s))
    }

    /// phi, phi', phi'' at once; the common case in tensor formulas.
    pub fn eval_all(&self, s: f64) -> Result<(f64, f64, f64)> {
        if !self.in_domain(s) {
            return Err(Error::PhiDomainExceeded { s, b0: self.b0 });
        }
        Ok((self.raw(s), self.raw_d1(s), self.raw_d2(s)))
    }

    /// True when phi(-s) = phi(s) is known structurally. Even profiles give
    /// absolutely homogeneous norms (F(-v) = F(v)); odd terms, as in the
    /// Randers profile, make the norm direction-dependent. Custom profiles
    /// report false: evenness cannot be certified from samples.
    pub fn is_even(&self) -> bool {
        match &self.repr {
            PhiRepr::Riemannian => true,
            PhiRepr::Randers => false,
            PhiRepr::Polynomial { coeffs } => {
                coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0)
            }
            PhiRepr::Custom { .. } => false,
        }
    }

    fn validate_positivity(&self) -> Result<()> {
        // The domain is open; sample just inside its ends.
        let reach = 0.995 * self.b0;
        for i in 0..PHI_CONDITION_GRID {
            let t = i as f64 / (PHI_CONDITION_GRID - 1) as f64;
            let s = -reach + 2.0 * reach * t;
            let value = self.raw(s);
            if !(value > 0.0) {
                return Err(Error::PhiNotPositive { s, value });
            }
        }
        Ok(())
    }

    fn validate_derivatives(&self) -> Result<()> {
        let reach = 0.9 * self.b0;
        let h = (1e-5 * self.b0.max(1.0)).min(0.05 * self.b0);
        for i in 0..21 {
            let t = i as f64 / 20.0;
            let s = -reach + 2.0 * reach * t;
            let fd1 = (self.raw(s + h) - self.raw(s - h)) / (2.0 * h);
            let an1 = self.raw_d1(s);
            if (fd1 - an1).abs() > DERIVATIVE_CHECK_TOL * (1.0 + an1.abs()) {
                return Err(Error::DerivativeMismatch {
                    order: 1,
                    s,
                    analytic: an1,
                    numeric: fd1,
                });
            }
            let fd2 = (self.raw_d1(s + h) - self.raw_d1(s - h)) / (2.0 * h);
            let an2 = self.raw_d2(s);
            if (fd2 - an2).abs() > DERIVATIVE_CHECK_TOL * (1.0 + an2.abs()) {
                return Err(Error::DerivativeMismatch {
                    order: 2,
                    s,
                    analytic: an2,
                    numeric: fd2,
                });
            }
        }
        Ok(())
    }
}

fn horner(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
}

fn horner_d1(coeffs: &[f64], s: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * s + i as f64 * c)
}

fn horner_d2(coeffs: &[f64], s: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(2)
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * s + (i * (i - 1)) as f64 * c)
}

/// Outcome of sampling phi(s) - s phi'(s) + (b^2 - s^2) phi''(s) over
/// [-b, b]. Strict positivity of the sampled minimum is the pass criterion.
#[derive(Debug, Clone)]
pub struct PhiConditionReport {
    pub b: f64,
    pub min_value: f64,
    pub argmin: f64,
    pub grid_points: usize,
    pub pass: bool,
}

/// Checks the strong-convexity condition on a grid of the default size.
pub fn check_phi_condition(phi: &PhiFunction, b: f64) -> Result<PhiConditionReport> {
    check_phi_condition_with(phi, b, PHI_CONDITION_GRID)
}

pub fn check_phi_condition_with(
    phi: &PhiFunction,
    b: f64,
    grid_points: usize,
) -> Result<PhiConditionReport> {
    if !(b >= 0.0 && b < phi.b0()) {
        return Err(Error::BoundOutOfRange { b, b0: phi.b0() });
    }
    let n = grid_points.max(2);
    let mut min_value = f64::INFINITY;
    let mut argmin = 0.0;
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let s = -b + 2.0 * b * t;
        let (p, p1, p2) = phi.eval_all(s)?;
        let value = p - s * p1 + (b * b - s * s) * p2;
        if value < min_value {
            min_value = value;
            argmin = s;
        }
    }
    Ok(PhiConditionReport {
        b,
        min_value,
        argmin,
        grid_points: n,
        pass: min_value > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn randers_basics() {
        let phi = PhiFunction::randers();
        assert_eq!(phi.b0(), 1.0);
        assert_abs_diff_eq!(phi.eval(0.3).unwrap(), 1.3);
        assert_abs_diff_eq!(phi.d1(0.3).unwrap(), 1.0);
        assert_abs_diff_eq!(phi.d2(0.3).unwrap(), 0.0);
        assert!(matches!(
            phi.eval(1.0),
            Err(Error::PhiDomainExceeded { .. })
        ));
        // 1 + s - s = 1 on any admissible interval.
        let report = check_phi_condition(&phi, 0.95).unwrap();
        assert!(report.pass);
        assert_abs_diff_eq!(report.min_value, 1.0);
    }

    #[test]
    fn riemannian_has_unbounded_domain() {
        let phi = PhiFunction::riemannian();
        assert_abs_diff_eq!(phi.eval(123.0).unwrap(), 1.0);
        assert!(check_phi_condition(&phi, 50.0).unwrap().pass);
    }

    #[test]
    fn polynomial_derivatives_and_domain() {
        let phi = PhiFunction::polynomial(vec![1.0, 1.0, 0.1], 1.0).unwrap();
        assert_abs_diff_eq!(phi.eval(0.5).unwrap(), 1.525);
        assert_abs_diff_eq!(phi.d1(0.5).unwrap(), 1.1);
        assert_abs_diff_eq!(phi.d2(0.5).unwrap(), 0.2);
        // Condition value is 1 - 0.3 s^2 + 0.2 b^2, minimized at s = +-b.
        let report = check_phi_condition(&phi, 0.8).unwrap();
        assert!(report.pass);
        assert_abs_diff_eq!(report.min_value, 1.0 - 0.1 * 0.64, epsilon = 1e-12);
        assert_abs_diff_eq!(report.argmin.abs(), 0.8);
    }

    #[test]
    fn frozen_failing_condition_case() {
        // phi = 1 - 2 s^2 at b = 0.6: the sampled expression is
        // 6 s^2 - 0.44, negative at the center.
        let phi = PhiFunction::polynomial(vec![1.0, 0.0, -2.0], 0.7).unwrap();
        let report = check_phi_condition(&phi, 0.6).unwrap();
        assert!(!report.pass);
        assert_abs_diff_eq!(report.min_value, -0.44, epsilon = 1e-12);
        assert_abs_diff_eq!(report.argmin, 0.0);
    }

    #[test]
    fn positivity_rejects_vanishing_profiles() {
        // 1 - 2 s^2 crosses zero at ~0.707, inside a claimed b0 of 0.8.
        assert!(matches!(
            PhiFunction::polynomial(vec![1.0, 0.0, -2.0], 0.8),
            Err(Error::PhiNotPositive { .. })
        ));
    }

    #[test]
    fn lying_derivatives_rejected() {
        let err = PhiFunction::custom(
            "bad-d1",
            |s| 1.0 + s,
            |_| 2.0, // wrong: should be 1
            |_| 0.0,
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DerivativeMismatch { order: 1, .. }));

        let err = PhiFunction::custom(
            "bad-d2",
            |s| 1.0 + 0.3 * s * s,
            |s| 0.6 * s,
            |_| 0.0, // wrong: should be 0.6
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DerivativeMismatch { order: 2, .. }));
    }

    #[test]
    fn honest_custom_profile_accepted() {
        let phi = PhiFunction::custom(
            "exp-like",
            |s| (0.4 * s).exp(),
            |s| 0.4 * (0.4 * s).exp(),
            |s| 0.16 * (0.4 * s).exp(),
            2.0,
        )
        .unwrap();
        assert_abs_diff_eq!(phi.eval(0.0).unwrap(), 1.0);
        assert!(check_phi_condition(&phi, 1.0).unwrap().pass);
    }

    #[test]
    fn condition_bound_must_stay_below_b0() {
        let phi = PhiFunction::randers();
        assert!(matches!(
            check_phi_condition(&phi, 1.0),
            Err(Error::BoundOutOfRange { .. })
        ));
        assert!(matches!(
            check_phi_condition(&phi, -0.1),
            Err(Error::BoundOutOfRange { .. })
        ));
    }

    #[test]
    fn invalid_b0_rejected() {
        assert!(matches!(
            PhiFunction::polynomial(vec![1.0], 0.0),
            Err(Error::InvalidB0 { .. })
        ));
        assert!(matches!(
            PhiFunction::polynomial(vec![1.0], f64::INFINITY),
            Err(Error::InvalidB0 { .. })
        ));
    }
}
