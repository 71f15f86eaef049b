//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use super::{C64, ComplexMatrix};
use crate::error::{Error, Result};
use crate::tol;

/// Ascending eigenvalues with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Reconstructs V Λ V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut scaled = ComplexMatrix::zeros(n, n);
        for c in 0..n {
            for r in 0..n {
                scaled.set(r, c, self.eigenvectors.get(r, c) * self.eigenvalues[c]);
            }
        }
        scaled.matmul(&self.eigenvectors.adjoint())
    }

    /// λ_max − λ_second; 0 for a 1×1 matrix.
    pub fn top_gap(&self) -> f64 {
        let n = self.dim();
        if n < 2 {
            return 0.0;
        }
        self.eigenvalues[n - 1] - self.eigenvalues[n - 2]
    }
}

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix via cyclic Jacobi rotations.
///
/// Eigenvalues come back ascending; eigenvectors within a numerically
/// degenerate cluster (relative gap below `DEGENERATE_GAP_TOL`) are
/// re-orthonormalized, so only the cluster subspace is meaningful there.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Contract(format!(
            "eig_hermitian: matrix is {}x{}, expected square and non-empty",
            a.rows(),
            a.cols()
        )));
    }
    let defect = a.hermiticity_defect();
    if defect >= tol::HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "eig_hermitian: matrix is not Hermitian (defect {defect:.3e})"
        )));
    }

    let n = a.rows();
    // Symmetrize to kill rounding-level asymmetry before iterating.
    let mut w = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        w.set(r, r, C64::new(a.get(r, r).re, 0.0));
        for c in (r + 1)..n {
            let avg = (a.get(r, c) + a.get(c, r).conj()) * 0.5;
            w.set(r, c, avg);
            w.set(c, r, avg.conj());
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let frob = w.frobenius_norm().max(f64::MIN_POSITIVE);
    let converge_at = 1e-14 * frob;
    // Entries this small cannot move the result; skip their rotations.
    let skip_below = converge_at / ((n * n) as f64).max(1.0);

    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&w) <= converge_at {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w.get(p, q);
                let b = apq.norm();
                if b <= skip_below {
                    continue;
                }
                let phase = apq / b;
                let alpha = w.get(p, p).re;
                let delta = w.get(q, q).re;
                // Zeroing the pivot needs t = s/c solving t² − 2τt − 1 = 0;
                // take the smaller-magnitude root for stability.
                let tau = (delta - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Unitary plane rotation U on columns (p, q):
                //   U[p][p] = c,            U[p][q] = −s·phase,
                //   U[q][p] = s·conj(phase), U[q][q] = c.
                // M ← U† (W U): first columns p,q of W U, then rows p,q.
                for r in 0..n {
                    let wp = w.get(r, p);
                    let wq = w.get(r, q);
                    w.set(r, p, wp * c + wq * (phase.conj() * s));
                    w.set(r, q, wq * c - wp * (phase * s));
                }
                for col in 0..n {
                    let wp = w.get(p, col);
                    let wq = w.get(q, col);
                    w.set(p, col, wp * c + wq * (phase * s));
                    w.set(q, col, wq * c - wp * (phase.conj() * s));
                }
                // Zero the pivot pair exactly and keep diagonals real.
                w.set(p, q, C64::new(0.0, 0.0));
                w.set(q, p, C64::new(0.0, 0.0));
                w.set(p, p, C64::new(w.get(p, p).re, 0.0));
                w.set(q, q, C64::new(w.get(q, q).re, 0.0));

                for r in 0..n {
                    let vp = v.get(r, p);
                    let vq = v.get(r, q);
                    v.set(r, p, vp * c + vq * (phase.conj() * s));
                    v.set(r, q, vq * c - vp * (phase * s));
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&w) > converge_at {
        return Err(Error::Contract(format!(
            "eig_hermitian: Jacobi failed to converge in {MAX_SWEEPS} sweeps"
        )));
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    let raw: Vec<f64> = (0..n).map(|i| w.get(i, i).re).collect();
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).expect("eigenvalues are finite"));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors.set(r, new_c, v.get(r, old_c));
        }
    }

    reorthonormalize_clusters(&mut eigenvectors, &eigenvalues);

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in (r + 1)..n {
            acc += 2.0 * m.get(r, c).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Modified Gram–Schmidt within each numerically degenerate eigenvalue
/// cluster. Individual vectors inside a cluster are not meaningful;
/// consumers must treat the cluster subspace as the unit.
fn reorthonormalize_clusters(vectors: &mut ComplexMatrix, eigenvalues: &[f64]) {
    let n = eigenvalues.len();
    if n < 2 {
        return;
    }
    let scale = eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    let cluster_gap = tol::DEGENERATE_GAP_TOL * scale;

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] < cluster_gap {
            end += 1;
        }
        if end - start > 1 {
            for c in start..end {
                let mut col = vectors.column(c);
                for prev in start..c {
                    let basis = vectors.column(prev);
                    let coeff = basis.inner(&col);
                    col = col.sub(&basis.scale(coeff));
                }
                let col = col.normalized();
                for r in 0..vectors.rows() {
                    vectors.set(r, c, col.get(r));
                }
            }
        }
        start = end;
    }
}
