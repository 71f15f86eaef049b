//! Dense complex vector/matrix kernel.
//!
//! Everything downstream (operator validation, spectral sweeps, evolution)
//! runs on these two types plus the Hermitian eigensolver in [`eig`]. The
//! solver is implemented in-repo (cyclic Jacobi); problem sizes stay small
//! enough that O(n³) with small constants is fine and no external numerical
//! dependency is needed.

mod eig;

pub use eig::{eig_hermitian, EigenDecomposition};

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = num_complex::Complex64;

/// Column vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<C64>,
}

impl ComplexVector {
    pub fn new(data: Vec<C64>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// Computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = Self::zeros(dim);
        v.data[index] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self {
            data: values.iter().map(|&r| C64::new(r, 0.0)).collect(),
        }
    }

    /// Uniform superposition (1, 1, ..., 1)/√dim.
    pub fn uniform(dim: usize) -> Self {
        let amp = 1.0 / (dim as f64).sqrt();
        Self {
            data: vec![C64::new(amp, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, i: usize) -> C64 {
        self.data[i]
    }

    pub fn set(&mut self, i: usize, value: C64) {
        self.data[i] = value;
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        self.scale(C64::new(1.0 / n, 0.0))
    }

    /// True when ‖v‖₂ is within `HERMITIAN_TOL`-class distance of 1.
    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < 1e-12
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &ComplexVector) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector add dimension mismatch");
        Self {
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ComplexVector) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector sub dimension mismatch");
        Self {
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// |self⟩⟨self|, the rank-one projection when `self` is normalized.
    pub fn outer_self(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.data[i] * self.data[j].conj());
            }
        }
        m
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, C64::new(v, 0.0));
        }
        m
    }

    /// 0/1 diagonal projection onto the given coordinate positions.
    pub fn coordinate_projection(dim: usize, positions: &[usize]) -> Self {
        let mut p = Self::zeros(dim, dim);
        for &i in positions {
            assert!(i < dim, "projection position {i} out of range");
            p.set(i, i, C64::new(1.0, 0.0));
        }
        p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: C64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).conj());
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "matvec dimension mismatch");
        let mut out = ComplexVector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v.get(j);
            }
            out.set(i, acc);
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-norm distance from the adjoint; small values mean Hermitian.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() < tol
    }

    pub fn real_diagonal(&self) -> Vec<f64> {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i).re).collect()
    }

    /// Largest off-diagonal magnitude (0 for 1×1).
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c {
                    worst = worst.max(self.get(r, c).norm());
                }
            }
        }
        worst
    }

    /// Extracts column `c` as a vector.
    pub fn column(&self, c: usize) -> ComplexVector {
        let mut v = ComplexVector::zeros(self.rows);
        for r in 0..self.rows {
            v.set(r, self.get(r, c));
        }
        v
    }
}

fn require_hermitian(a: &ComplexMatrix, op: &str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Contract(format!(
            "{op}: matrix is {}x{}, expected square",
            a.rows(),
            a.cols()
        )));
    }
    let defect = a.hermiticity_defect();
    if defect >= tol::HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "{op}: matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// e^{−iθA} for Hermitian `A`, computed through the eigendecomposition.
/// Unitary by construction; exact per entry on diagonal inputs.
pub fn exp_i_hermitian(a: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    require_hermitian(a, "exp_i_hermitian")?;
    let dec = eig_hermitian(a)?;
    let n = a.rows();
    // V · diag(e^{−iθλ}) · V†
    let mut scaled = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        let phase = C64::from_polar(1.0, -theta * dec.eigenvalues[c]);
        for r in 0..n {
            scaled.set(r, c, dec.eigenvectors.get(r, c) * phase);
        }
    }
    Ok(scaled.matmul(&dec.eigenvectors.adjoint()))
}

/// Largest singular value via the top eigenvalue of A†A.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let gram = a.adjoint().matmul(a);
    let dec = eig_hermitian(&gram).expect("Gram matrix is Hermitian by construction");
    dec.eigenvalues
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0)
        .sqrt()
}

/// ‖(1 − P)v‖₂ for a normalized `v` and an orthogonal projection `P`.
pub fn subspace_distance(v: &ComplexVector, p: &ComplexMatrix) -> Result<f64> {
    require_hermitian(p, "subspace_distance")?;
    if p.rows() != v.dim() {
        return Err(Error::Contract(format!(
            "subspace_distance: projection dim {} vs vector dim {}",
            p.rows(),
            v.dim()
        )));
    }
    let idem_defect = operator_norm(&p.matmul(p).sub(p));
    if idem_defect >= tol::PROJECTION_TOL {
        return Err(Error::Contract(format!(
            "subspace_distance: P is not idempotent (defect {idem_defect:.3e})"
        )));
    }
    let pv = p.mul_vec(v);
    let residual = v.sub(&pv).norm();
    Ok(residual.clamp(0.0, 1.0))
}
