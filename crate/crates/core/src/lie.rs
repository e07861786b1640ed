//! Finite-dimensional real Lie algebras given by structure constants, and
//! reductive decompositions g = h (+) m.
//!
//! A bracket is stored as the dense rank-3 array `c[i][j][k]` with
//! `[e_i, e_j] = sum_k c[i][j][k] e_k` over the standard basis. The
//! canonical constructor accepts only the upper triangle i < j and mirrors
//! it, so antisymmetry holds exactly by construction; `from_raw_structure`
//! accepts an arbitrary array verbatim for validating untrusted input.
//! `check_jacobi` sweeps every index triple, repeated indices included:
//! for a mirrored algebra those triples cancel exactly, while for raw
//! constants they expose antisymmetry defects as Jacobi residuals.
//!
//! Basis indices are 0-based throughout; display labels default to
//! `e1..en` to match the usual mathematical numbering.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Absolute tolerance used by structural checks unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Element of a Lie algebra (or of any of its subspaces) in ambient
/// coordinates over the standard basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Self {
        Vector { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Vector {
            coords: vec![0.0; dim],
        }
    }

    /// Standard basis vector e_i (0-based).
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        let mut coords = vec![0.0; dim];
        coords[i] = 1.0;
        Ok(Vector { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coords[i]
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, t: f64) -> Vector {
        Vector::new(self.coords.iter().map(|a| a * t).collect())
    }

    /// self + t * other.
    pub fn add_scaled(&self, t: f64, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + t * b)
                .collect(),
        )
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn inf_norm(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.inf_norm() <= tol
    }

    pub(crate) fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coords)
    }
}

/// Outcome of the Jacobi sweep. `worst_triple` is 0-based.
#[derive(Debug, Clone)]
pub struct JacobiReport {
    pub max_residual: f64,
    pub worst_triple: (usize, usize, usize),
    pub tolerance: f64,
    pub pass: bool,
}

/// Real Lie algebra with a fixed basis and dense structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    // c[i][j][k] flattened as (i * dim + j) * dim + k.
    c: Vec<f64>,
    labels: Vec<String>,
}

impl LieAlgebra {
    /// Builds an algebra from upper-triangle bracket rules. Each rule is
    /// `((i, j), rhs)` with i < j and `[e_i, e_j] = sum rhs_t.1 * e_{rhs_t.0}`;
    /// the mirrored entry is filled with the exact negation, so antisymmetry
    /// is structural. Jacobi is *not* checked here; call [`check_jacobi`].
    ///
    /// [`check_jacobi`]: LieAlgebra::check_jacobi
    pub fn from_brackets(dim: usize, rules: &[((usize, usize), &[(usize, f64)])]) -> Result<Self> {
        let mut c = vec![0.0; dim * dim * dim];
        for &((i, j), rhs) in rules {
            if i >= dim || j >= dim {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    dim,
                });
            }
            if i >= j {
                // Diagonal entries are forced to zero and lower-triangle
                // entries are derived, so neither may be specified.
                return Err(Error::NotAntisymmetric { i, j, k: 0 });
            }
            for &(k, coef) in rhs {
                if k >= dim {
                    return Err(Error::IndexOutOfRange { index: k, dim });
                }
                c[(i * dim + j) * dim + k] = coef;
                c[(j * dim + i) * dim + k] = -coef;
            }
        }
        Ok(LieAlgebra {
            dim,
            c,
            labels: default_labels(dim),
        })
    }

    /// Wraps a full structure-constant array without enforcing anything.
    /// Intended for validating raw constants: run [`check_jacobi`] on the
    /// result, which also exposes antisymmetry violations.
    ///
    /// [`check_jacobi`]: LieAlgebra::check_jacobi
    pub fn from_raw_structure(dim: usize, c: Vec<f64>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: c.len(),
            });
        }
        Ok(LieAlgebra {
            dim,
            c,
            labels: default_labels(dim),
        })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            c: vec![0.0; dim * dim * dim],
            labels: default_labels(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn max_structure_constant(&self) -> f64 {
        self.c.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    /// [e_i, e_j] as an ambient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let base = (i * self.dim + j) * self.dim;
        Vector::new(self.c[base..base + self.dim].to_vec())
    }

    /// [x, y] by bilinear expansion over the structure constants.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        if y.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: y.dim(),
            });
        }
        let d = self.dim;
        let mut out = vec![0.0; d];
        for i in 0..d {
            let xi = x.get(i);
            if xi == 0.0 {
                continue;
            }
            for j in 0..d {
                let xiyj = xi * y.get(j);
                if xiyj == 0.0 {
                    continue;
                }
                let base = (i * d + j) * d;
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot += xiyj * self.c[base + k];
                }
            }
        }
        Ok(Vector::new(out))
    }

    /// Jacobi sweep over all basis triples (repeats included) at the default
    /// tolerance scaled by the structure constants.
    pub fn check_jacobi(&self) -> JacobiReport {
        self.check_jacobi_with(DEFAULT_TOL)
    }

    /// The residual of a triple is the sup norm of
    /// [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]].
    /// Each term multiplies two structure constants, so the pass threshold
    /// is `tol * max(1, cmax^2)`.
    pub fn check_jacobi_with(&self, tol: f64) -> JacobiReport {
        let d = self.dim;
        let mut max_residual = 0.0f64;
        let mut worst = (0, 0, 0);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut sum = 0.0;
                        for m in 0..d {
                            sum += self.structure_constant(j, k, m)
                                * self.structure_constant(i, m, l)
                                + self.structure_constant(k, i, m)
                                    * self.structure_constant(j, m, l)
                                + self.structure_constant(i, j, m)
                                    * self.structure_constant(k, m, l);
                        }
                        if sum.abs() > max_residual {
                            max_residual = sum.abs();
                            worst = (i, j, k);
                        }
                    }
                }
            }
        }
        let cmax = self.max_structure_constant();
        let tolerance = tol * (cmax * cmax).max(1.0);
        JacobiReport {
            max_residual,
            worst_triple: worst,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }
}

fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("e{i}")).collect()
}

/// Reductive decomposition g = h (+) m: h a subalgebra, [h, m] contained
/// in m, and the concatenated bases spanning g. Construction validates all
/// three; coordinate extraction goes through one precomputed basis inverse.
#[derive(Debug, Clone)]
pub struct ReductiveDecomposition {
    dim: usize,
    h_basis: Vec<Vector>,
    m_basis: Vec<Vector>,
    // Inverse of the column matrix [h_basis | m_basis].
    basis_inv: DMatrix<f64>,
    trivial: bool,
}

impl ReductiveDecomposition {
    pub fn new(alg: &LieAlgebra, h_basis: Vec<Vector>, m_basis: Vec<Vector>) -> Result<Self> {
        Self::new_with_tol(alg, h_basis, m_basis, DEFAULT_TOL)
    }

    pub fn new_with_tol(
        alg: &LieAlgebra,
        h_basis: Vec<Vector>,
        m_basis: Vec<Vector>,
        tol: f64,
    ) -> Result<Self> {
        let dim = alg.dim();
        if h_basis.len() + m_basis.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: h_basis.len() + m_basis.len(),
            });
        }
        for v in h_basis.iter().chain(m_basis.iter()) {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        let mut basis = DMatrix::zeros(dim, dim);
        for (col, v) in h_basis.iter().chain(m_basis.iter()).enumerate() {
            for row in 0..dim {
                basis[(row, col)] = v.get(row);
            }
        }
        let basis_inv = basis.clone().try_inverse().ok_or(Error::SingularBasis)?;
        let dec = ReductiveDecomposition {
            dim,
            h_basis,
            m_basis,
            basis_inv,
            trivial: false,
        };

        // [h, h] stays in h.
        let mut sub_residual = 0.0f64;
        for x in &dec.h_basis {
            for y in &dec.h_basis {
                let b = alg.bracket(x, y)?;
                let scale = 1.0 + b.inf_norm();
                let coords = dec.coords(&b);
                for t in dec.h_dim()..dim {
                    sub_residual = sub_residual.max(coords[t].abs() / scale);
                }
            }
        }
        if sub_residual > tol {
            return Err(Error::NotSubalgebra {
                residual: sub_residual,
            });
        }

        // [h, m] stays in m.
        let mut red_residual = 0.0f64;
        for x in &dec.h_basis {
            for y in &dec.m_basis {
                let b = alg.bracket(x, y)?;
                let scale = 1.0 + b.inf_norm();
                let coords = dec.coords(&b);
                for t in 0..dec.h_dim() {
                    red_residual = red_residual.max(coords[t].abs() / scale);
                }
            }
        }
        if red_residual > tol {
            return Err(Error::NotReductive {
                residual: red_residual,
            });
        }
        Ok(dec)
    }

    /// Trivial isotropy: h = 0, m = g with the standard basis. The case of
    /// a metric on the group itself.
    pub fn trivial(dim: usize) -> Self {
        let m_basis = (0..dim)
            .map(|i| Vector::basis(dim, i).expect("index in range"))
            .collect();
        ReductiveDecomposition {
            dim,
            h_basis: Vec::new(),
            m_basis,
            basis_inv: DMatrix::identity(dim, dim),
            trivial: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_dim(&self) -> usize {
        self.h_basis.len()
    }

    pub fn m_dim(&self) -> usize {
        self.m_basis.len()
    }

    pub fn h_basis(&self) -> &[Vector] {
        &self.h_basis
    }

    pub fn m_basis(&self) -> &[Vector] {
        &self.m_basis
    }

    /// True for the h = 0, standard-basis decomposition, where m-coordinates
    /// coincide with ambient coordinates.
    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// Coordinates of x in the concatenated basis, h entries first.
    fn coords(&self, x: &Vector) -> DVector<f64> {
        &self.basis_inv * x.as_dvector()
    }

    /// Component of x along m (as an ambient vector).
    pub fn project_m(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        if self.trivial {
            return Ok(x.clone());
        }
        let coords = self.coords(x);
        let mut out = Vector::zero(self.dim);
        for (t, basis_vec) in self.m_basis.iter().enumerate() {
            out = out.add_scaled(coords[self.h_dim() + t], basis_vec);
        }
        Ok(out)
    }

    /// Component of x along h (as an ambient vector).
    pub fn project_h(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        let p = self.project_m(x)?;
        Ok(x.sub(&p))
    }

    /// m-basis coordinates of the m-component of x.
    pub fn m_coords(&self, x: &Vector) -> Result<Vec<f64>> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        if self.trivial {
            return Ok(x.coords().to_vec());
        }
        let coords = self.coords(x);
        Ok((0..self.m_dim())
            .map(|t| coords[self.h_dim() + t])
            .collect())
    }

    /// m-basis coordinates of x, rejecting vectors with an h-component
    /// above `tol` relative to their size.
    pub fn m_coords_checked(&self, x: &Vector, tol: f64) -> Result<Vec<f64>> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        if self.trivial {
            return Ok(x.coords().to_vec());
        }
        let coords = self.coords(x);
        let scale = 1.0 + x.inf_norm();
        let mut h_residual = 0.0f64;
        for t in 0..self.h_dim() {
            h_residual = h_residual.max(coords[t].abs());
        }
        if h_residual > tol * scale {
            return Err(Error::NotInSubspace {
                residual: h_residual,
            });
        }
        Ok((0..self.m_dim())
            .map(|t| coords[self.h_dim() + t])
            .collect())
    }

    /// Ambient vector with the given m-basis coordinates.
    pub fn vector_from_m_coords(&self, coords: &[f64]) -> Result<Vector> {
        if coords.len() != self.m_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.m_dim(),
                found: coords.len(),
            });
        }
        let mut out = Vector::zero(self.dim);
        for (t, basis_vec) in self.m_basis.iter().enumerate() {
            out = out.add_scaled(coords[t], basis_vec);
        }
        Ok(out)
    }
}

/// Named algebras used throughout the test corpus. `abelian(n)` takes the
/// dimension in parentheses. Entries with nontrivial isotropy return their
/// canonical decomposition; group cases return the trivial one.
pub fn catalog(name: &str) -> Result<(LieAlgebra, ReductiveDecomposition)> {
    let su2_rules: [((usize, usize), &[(usize, f64)]); 3] = [
        ((0, 1), &[(2, 1.0)]),
        ((1, 2), &[(0, 1.0)]),
        ((0, 2), &[(1, -1.0)]), // [e3, e1] = e2
    ];
    match name {
        "su2" => {
            let alg = LieAlgebra::from_brackets(3, &su2_rules)?;
            let dec = ReductiveDecomposition::trivial(3);
            Ok((alg, dec))
        }
        "heis3" => {
            let alg = LieAlgebra::from_brackets(3, &[((0, 1), &[(2, 1.0)])])?;
            let dec = ReductiveDecomposition::trivial(3);
            Ok((alg, dec))
        }
        "su2r" => {
            let alg = LieAlgebra::from_brackets(4, &su2_rules)?;
            let dec = ReductiveDecomposition::trivial(4);
            Ok((alg, dec))
        }
        "so3_so2" => {
            let alg = LieAlgebra::from_brackets(3, &su2_rules)?;
            let h = vec![Vector::basis(3, 2)?];
            let m = vec![Vector::basis(3, 0)?, Vector::basis(3, 1)?];
            let dec = ReductiveDecomposition::new(&alg, h, m)?;
            Ok((alg, dec))
        }
        "so3r_so2" => {
            let alg = LieAlgebra::from_brackets(4, &su2_rules)?;
            let h = vec![Vector::basis(4, 2)?];
            let m = vec![
                Vector::basis(4, 0)?,
                Vector::basis(4, 1)?,
                Vector::basis(4, 3)?,
            ];
            let dec = ReductiveDecomposition::new(&alg, h, m)?;
            Ok((alg, dec))
        }
        _ => {
            if let Some(inner) = name
                .strip_prefix("abelian(")
                .and_then(|rest| rest.strip_suffix(')'))
            {
                let dim: usize = inner.parse().map_err(|_| Error::UnknownCatalog {
                    name: name.to_string(),
                })?;
                if dim == 0 || dim > 16 {
                    return Err(Error::UnknownCatalog {
                        name: name.to_string(),
                    });
                }
                return Ok((LieAlgebra::abelian(dim), ReductiveDecomposition::trivial(dim)));
            }
            Err(Error::UnknownCatalog {
                name: name.to_string(),
            })
        }
    }
}
