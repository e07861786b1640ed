//! Inner products on g or on the m-factor of a reductive decomposition,
//! and the invariance checks that qualify them.
//!
//! A form tagged [`IpDomain::Ambient`] lives on all of g in standard
//! coordinates; one tagged [`IpDomain::MRestricted`] is expressed in the
//! coordinates of a decomposition's m-basis, in basis order. The struct
//! itself is coordinate-agnostic: callers that mix ambient vectors with a
//! restricted form convert through `ReductiveDecomposition::m_coords`.
//!
//! Symmetry is required exactly (no tolerance); positive definiteness is
//! certified by a Cholesky factorization at construction.

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, ReductiveDecomposition, Vector, DEFAULT_TOL};
use nalgebra::DMatrix;

/// Which coordinates the matrix of an [`InnerProduct`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpDomain {
    /// Standard coordinates on all of g.
    Ambient,
    /// Coordinates over the m-basis of a reductive decomposition.
    MRestricted,
}

/// Symmetric positive-definite bilinear form.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProduct {
    matrix: DMatrix<f64>,
    domain: IpDomain,
}

impl InnerProduct {
    pub fn from_matrix(matrix: DMatrix<f64>, domain: IpDomain) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        for i in 0..matrix.nrows() {
            for j in 0..matrix.ncols() {
                if !matrix[(i, j)].is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                // Bitwise symmetry; entries must be constructed equal, not
                // merely close.
                if i < j && matrix[(i, j)] != matrix[(j, i)] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        if nalgebra::linalg::Cholesky::new(matrix.clone()).is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(InnerProduct { matrix, domain })
    }

    pub fn from_rows(rows: &[Vec<f64>], domain: IpDomain) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::from_matrix(matrix, domain)
    }

    pub fn identity(dim: usize, domain: IpDomain) -> Self {
        InnerProduct {
            matrix: DMatrix::identity(dim, dim),
            domain,
        }
    }

    pub fn from_diag(entries: &[f64], domain: IpDomain) -> Result<Self> {
        let n = entries.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { 0.0 });
        Self::from_matrix(matrix, domain)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn domain(&self) -> IpDomain {
        self.domain
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// a(u, v). Arguments are in the form's own coordinates.
    pub fn eval(&self, u: &Vector, v: &Vector) -> Result<f64> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        Ok(self.eval_slices(u.coords(), v.coords()))
    }

    pub(crate) fn eval_slices(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.dim();
        let mut sum = 0.0;
        for i in 0..n {
            let ui = u[i];
            if ui == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for j in 0..n {
                row += self.matrix[(i, j)] * v[j];
            }
            sum += ui * row;
        }
        sum
    }

    /// alpha(y) = sqrt(a(y, y)). The quadratic form is clamped at zero so
    /// roundoff on near-null vectors cannot produce NaN.
    pub fn alpha_norm(&self, y: &Vector) -> Result<f64> {
        Ok(self.eval(y, y)?.max(0.0).sqrt())
    }

    pub(crate) fn alpha_norm_slice(&self, y: &[f64]) -> f64 {
        self.eval_slices(y, y).max(0.0).sqrt()
    }

    /// beta(y) = a(X, y) for the 1-form dual to X.
    pub fn beta_eval(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.eval(x, y)
    }

    /// The alpha-norm of beta equals the alpha-norm of its dual vector X;
    /// same code path, so the squared-norm identity is exact.
    pub fn beta_norm(&self, x: &Vector) -> Result<f64> {
        self.alpha_norm(x)
    }
}

/// Result of the ad-skewness sweep; `worst_triple` indexes basis vectors
/// (i, j, k) of the residual a([e_i,e_j], e_k) + a(e_j, [e_i,e_k]).
#[derive(Debug, Clone)]
pub struct SkewReport {
    pub max_residual: f64,
    pub worst_triple: (usize, usize, usize),
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks bi-invariance of an ambient form: every ad(x) must be
/// skew-symmetric for a. Basis triples suffice by bilinearity.
pub fn check_ad_skew(alg: &LieAlgebra, a: &InnerProduct) -> Result<SkewReport> {
    check_ad_skew_with(alg, a, DEFAULT_TOL)
}

pub fn check_ad_skew_with(alg: &LieAlgebra, a: &InnerProduct, tol: f64) -> Result<SkewReport> {
    if a.domain() != IpDomain::Ambient {
        return Err(Error::RequiresAmbientForm);
    }
    if a.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: a.dim(),
        });
    }
    let d = alg.dim();
    let mut max_residual = 0.0f64;
    let mut worst = (0, 0, 0);
    for i in 0..d {
        for j in 0..d {
            let bij = alg.bracket_basis(i, j);
            for k in 0..d {
                let bik = alg.bracket_basis(i, k);
                let ej = Vector::basis(d, j)?;
                let ek = Vector::basis(d, k)?;
                let r = a.eval(&bij, &ek)? + a.eval(&ej, &bik)?;
                if r.abs() > max_residual {
                    max_residual = r.abs();
                    worst = (i, j, k);
                }
            }
        }
    }
    Ok(SkewReport {
        max_residual,
        worst_triple: worst,
        tolerance: tol,
        pass: max_residual <= tol,
    })
}

/// Result of the isotropy-invariance sweep; `worst` is
/// (h-basis index, m-basis index, m-basis index).
#[derive(Debug, Clone)]
pub struct HInvarianceReport {
    pub max_residual: f64,
    pub worst: (usize, usize, usize),
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks that a form on m is invariant under the isotropy action:
/// a([w,x]_m, y) + a(x, [w,y]_m) = 0 for w in h and x, y in the m-basis.
pub fn check_h_invariance(
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    a: &InnerProduct,
) -> Result<HInvarianceReport> {
    check_h_invariance_with(alg, dec, a, DEFAULT_TOL)
}

pub fn check_h_invariance_with(
    alg: &LieAlgebra,
    dec: &ReductiveDecomposition,
    a: &InnerProduct,
    tol: f64,
) -> Result<HInvarianceReport> {
    if a.dim() != dec.m_dim() {
        return Err(Error::DimensionMismatch {
            expected: dec.m_dim(),
            found: a.dim(),
        });
    }
    let k = dec.m_dim();
    // ad(w) of every m-basis vector, in m-coordinates. [h, m] stays in m by
    // the decomposition invariant, so projection loses nothing.
    let mut max_residual = 0.0f64;
    let mut worst = (0, 0, 0);
    for (hi, w) in dec.h_basis().iter().enumerate() {
        let ad_w: Vec<Vec<f64>> = dec
            .m_basis()
            .iter()
            .map(|x| {
                let b = alg.bracket(w, x)?;
                dec.m_coords(&b)
            })
            .collect::<Result<_>>()?;
        for i in 0..k {
            for j in 0..k {
                let mut ei = vec![0.0; k];
                ei[i] = 1.0;
                let mut ej = vec![0.0; k];
                ej[j] = 1.0;
                let r = a.eval_slices(&ad_w[i], &ej) + a.eval_slices(&ei, &ad_w[j]);
                if r.abs() > max_residual {
                    max_residual = r.abs();
                    worst = (hi, i, j);
                }
            }
        }
    }
    Ok(HInvarianceReport {
        max_residual,
        worst,
        tolerance: tol,
        pass: max_residual <= tol,
    })
}
