//! Eigenvalue curves and top spectral projection of the linear
//! interpolation (1−t)·B|_S + t·(C|_S + shift·1) over t ∈ [0, 1].
//!
//! Instead of analytic continuation, the top eigenvector is continued
//! numerically: eigenvectors at consecutive grid points are matched by
//! maximal overlap and phase-aligned, with local grid refinement whenever
//! the overlap drops below the threshold. Consequences (gap positivity on
//! [0,1), continuity, the t→1 limit landing in the optimal span) are what
//! get verified; analyticity itself is not certified.

use crate::error::{Error, Result};
use crate::hamiltonians::{argmax_positions, RestrictedOperator};
use crate::linalg::{eig_hermitian, C64, ComplexMatrix, ComplexVector};
use crate::tol::{self, Tolerances};

/// Finest spacing the overlap-driven refinement will produce.
const MIN_REFINE_SPACING: f64 = 1e-6;
/// Spacing target near t = 1 when the optimum is degenerate.
const DEGENERATE_TAIL_SPACING: f64 = 1e-4;

/// Mixer restriction, diagonal phase-separator restriction, and the
/// spectral shift applied to the latter.
#[derive(Debug, Clone)]
pub struct InterpolationSpec {
    b: RestrictedOperator,
    c: RestrictedOperator,
    shift: f64,
}

impl InterpolationSpec {
    pub fn new(b: RestrictedOperator, c: RestrictedOperator, shift: f64) -> Result<Self> {
        if b.subspace != c.subspace {
            return Err(Error::Contract(
                "interpolation endpoints live on different subspaces".into(),
            ));
        }
        let off = c.matrix.max_off_diagonal();
        if off >= tol::ZERO_ENTRY_TOL {
            return Err(Error::Contract(format!(
                "phase-separator restriction is not diagonal (off-diagonal {off:.3e})"
            )));
        }
        Ok(Self { b, c, shift })
    }

    /// Chooses shift = max(0, −λ_min(C|_S)) so the shifted diagonal is
    /// entrywise non-negative.
    pub fn with_auto_shift(b: RestrictedOperator, c: RestrictedOperator) -> Result<Self> {
        let min_diag = c
            .matrix
            .real_diagonal()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        Self::new(b, c, (-min_diag).max(0.0))
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn subspace(&self) -> &crate::hamiltonians::FeasibleSubspace {
        &self.b.subspace
    }

    pub fn mixer(&self) -> &RestrictedOperator {
        &self.b
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Unshifted phase-separator diagonal.
    pub fn c_diagonal(&self) -> Vec<f64> {
        self.c.matrix.real_diagonal()
    }

    /// Shifted diagonal (1-to-1 with the evolution actually integrated).
    pub fn shifted_c_diagonal(&self) -> Vec<f64> {
        self.c
            .matrix
            .real_diagonal()
            .into_iter()
            .map(|v| v + self.shift)
            .collect()
    }

    /// Subspace positions of the optimal coordinates (argmax of the
    /// phase-separator diagonal; shift-independent).
    pub fn optimal_positions(&self) -> Vec<usize> {
        argmax_positions(&self.c_diagonal(), tol::ARGMAX_REL_TOL)
    }

    /// (1−t)·B|_S + t·(C|_S + shift·1); t may leave [0,1] for probes.
    pub fn h_lin_at(&self, t: f64) -> RestrictedOperator {
        let d = self.dim();
        let mut m = self.b.matrix.scale(C64::new(1.0 - t, 0.0));
        for (pos, value) in self.shifted_c_diagonal().into_iter().enumerate() {
            let cur = m.get(pos, pos);
            m.set(pos, pos, cur + C64::new(t * value, 0.0));
        }
        debug_assert_eq!(m.rows(), d);
        RestrictedOperator {
            subspace: self.b.subspace.clone(),
            matrix: m,
        }
    }

    /// Convexity bound on max_{t∈[0,1]} ‖H_lin(t)‖_op.
    pub fn norm_bound(&self) -> f64 {
        let b_norm = crate::linalg::operator_norm(&self.b.matrix);
        let c_norm = self
            .shifted_c_diagonal()
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        b_norm.max(c_norm)
    }
}

/// Spectral data along the interpolation grid.
#[derive(Debug, Clone)]
pub struct SpectralCurve {
    /// Ascending t values in [0, 1].
    pub grid: Vec<f64>,
    /// True for points of the requested uniform grid; false for geometric
    /// tail points and overlap-driven bisection points.
    pub uniform: Vec<bool>,
    /// Ascending eigenvalues per grid point.
    pub levels: Vec<Vec<f64>>,
    /// Top eigenvector continuation, overlap-matched and phase-aligned to
    /// the previous grid point.
    pub matched_top: Vec<ComplexVector>,
    /// λ_max − λ_second per grid point.
    pub gap: Vec<f64>,
    /// |⟨v(t_k)|v(t_{k+1})⟩| per consecutive pair.
    pub overlaps: Vec<f64>,
}

impl SpectralCurve {
    pub fn gap_at_one(&self) -> f64 {
        *self.gap.last().expect("curve has at least two points")
    }

    /// Smallest gap over uniform grid points with t < 1. Refinement points
    /// arbitrarily close to a t = 1 crossing are excluded: there the true
    /// gap is positive but falls below anything floating point can resolve
    /// (for optima k bit flips apart it closes at k-th order).
    pub fn min_gap_before_one(&self) -> f64 {
        self.grid
            .iter()
            .zip(self.uniform.iter())
            .zip(self.gap.iter())
            .filter(|((&t, &u), _)| t < 1.0 && u)
            .map(|(_, &g)| g)
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the finest grid point strictly before 1.
    pub fn last_index_before_one(&self) -> Option<usize> {
        self.grid.iter().rposition(|&t| t < 1.0)
    }

    pub fn min_overlap(&self) -> f64 {
        self.overlaps.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Smallest overlap among transitions that end at or before `index`.
    pub fn min_overlap_up_to(&self, index: usize) -> f64 {
        self.overlaps[..index]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

fn eig_at(spec: &InterpolationSpec, t: f64) -> Result<crate::linalg::EigenDecomposition> {
    eig_hermitian(&spec.h_lin_at(t).matrix)
}

/// Sweeps the interpolation spectrum over a uniform grid, matching the top
/// eigenvector across grid points by maximal overlap.
///
/// Caller contract: the mixer restriction carries an all-true verdict.
/// A vanishing gap before t = 1 is reported in the data, not an error.
/// When the phase-separator optimum is degenerate, geometric refinement
/// points 1−10^{−k} (k = 1..4) are added so the tail is resolved down to
/// spacing 1e−4; low-overlap transitions trigger local bisection down to
/// spacing 1e−6.
pub fn sweep_spectrum(
    spec: &InterpolationSpec,
    grid_points: usize,
    tols: &Tolerances,
) -> Result<SpectralCurve> {
    if grid_points < 2 {
        return Err(Error::Contract(format!(
            "sweep needs at least 2 grid points, got {grid_points}"
        )));
    }

    let mut points: Vec<(f64, bool)> = (0..grid_points)
        .map(|k| (k as f64 / (grid_points - 1) as f64, true))
        .collect();

    // Degenerate optimum ⇒ the top curve meets another at t = 1; refine
    // the approach geometrically.
    if spec.optimal_positions().len() > 1 {
        let mut k = 1;
        loop {
            let delta = 10f64.powi(-(k as i32));
            if delta < DEGENERATE_TAIL_SPACING {
                break;
            }
            points.push((1.0 - delta, false));
            k += 1;
        }
        points.push((1.0 - DEGENERATE_TAIL_SPACING, false));
    }
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    points.dedup_by(|a, b| {
        let same = (a.0 - b.0).abs() < 1e-15;
        if same {
            b.1 |= a.1;
        }
        same
    });

    let mut grid: Vec<f64> = points.iter().map(|p| p.0).collect();
    let mut uniform: Vec<bool> = points.iter().map(|p| p.1).collect();
    let mut decs = Vec::with_capacity(grid.len());
    for &t in &grid {
        decs.push(eig_at(spec, t)?);
    }

    // Matching pass with overlap-driven bisection.
    const MAX_REFINE_ROUNDS: usize = 64;
    for _round in 0..MAX_REFINE_ROUNDS {
        let overlaps = match_overlaps(&decs);
        let mut worst: Option<usize> = None;
        for (k, &ov) in overlaps.iter().enumerate() {
            if ov <= tols.overlap_min && grid[k + 1] - grid[k] > MIN_REFINE_SPACING {
                worst = Some(k);
                break;
            }
        }
        match worst {
            None => break,
            Some(k) => {
                let mid = 0.5 * (grid[k] + grid[k + 1]);
                decs.insert(k + 1, eig_at(spec, mid)?);
                grid.insert(k + 1, mid);
                uniform.insert(k + 1, false);
            }
        }
    }

    // Final matched continuation.
    let (matched_top, overlaps) = match_vectors(&decs);
    let levels: Vec<Vec<f64>> = decs.iter().map(|d| d.eigenvalues.clone()).collect();
    let gap: Vec<f64> = decs.iter().map(|d| d.top_gap()).collect();

    Ok(SpectralCurve {
        grid,
        uniform,
        levels,
        matched_top,
        gap,
        overlaps,
    })
}

/// Overlap per transition when tracking greedily from the first point.
fn match_overlaps(decs: &[crate::linalg::EigenDecomposition]) -> Vec<f64> {
    match_vectors(decs).1
}

/// Columns [start, end) of the numerically degenerate cluster containing
/// `col`, under the same relative-gap rule the eigensolver uses.
fn cluster_of(eigenvalues: &[f64], col: usize) -> std::ops::Range<usize> {
    let scale = eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    let gap = tol::DEGENERATE_GAP_TOL * scale;
    let mut start = col;
    while start > 0 && eigenvalues[start] - eigenvalues[start - 1] < gap {
        start -= 1;
    }
    let mut end = col + 1;
    while end < eigenvalues.len() && eigenvalues[end] - eigenvalues[end - 1] < gap {
        end += 1;
    }
    start..end
}

fn match_vectors(
    decs: &[crate::linalg::EigenDecomposition],
) -> (Vec<ComplexVector>, Vec<f64>) {
    let mut matched = Vec::with_capacity(decs.len());
    let mut overlaps = Vec::with_capacity(decs.len().saturating_sub(1));

    // Start from the top eigenvector, phase-fixed to a positive-real
    // dominant entry (the Perron convention at t = 0).
    let first = {
        let dec = &decs[0];
        let v = dec.eigenvectors.column(dec.dim() - 1);
        phase_fix_dominant(&v)
    };
    matched.push(first);

    for dec in &decs[1..] {
        let prev = matched.last().unwrap();
        let d = dec.dim();
        let mut best_col = d - 1;
        let mut best_ov = -1.0;
        for col in 0..d {
            let ov = prev.inner(&dec.eigenvectors.column(col)).norm();
            if ov > best_ov {
                best_ov = ov;
                best_col = col;
            }
        }
        // Inside a numerically degenerate cluster individual columns are
        // arbitrary; project onto the cluster subspace and continue with
        // the projection (⟨prev|v⟩ comes out real positive by
        // construction, so the phase is aligned too).
        let cluster = cluster_of(&dec.eigenvalues, best_col);
        let mut projected = ComplexVector::zeros(d);
        for col in cluster {
            let basis = dec.eigenvectors.column(col);
            let coeff = basis.inner(prev);
            projected = projected.add(&basis.scale(coeff));
        }
        let norm = projected.norm();
        let v = if norm > 1e-12 {
            projected.scale(C64::new(1.0 / norm, 0.0))
        } else {
            let mut v = dec.eigenvectors.column(best_col);
            let ip = prev.inner(&v);
            if ip.norm() > 0.0 {
                v = v.scale(ip.conj() / ip.norm());
            }
            v
        };
        overlaps.push(prev.inner(&v).norm());
        matched.push(v);
    }
    (matched, overlaps)
}

fn phase_fix_dominant(v: &ComplexVector) -> ComplexVector {
    let mut best = C64::new(1.0, 0.0);
    let mut best_norm = 0.0;
    for i in 0..v.dim() {
        let nrm = v.get(i).norm();
        if nrm > best_norm {
            best_norm = nrm;
            best = v.get(i);
        }
    }
    if best_norm > 0.0 {
        v.scale(best.conj() / best_norm)
    } else {
        v.clone()
    }
}

/// Rank-one projection onto the t→1⁻ limit of the matched top eigenvector.
#[derive(Debug, Clone)]
pub struct TopProjection {
    pub matrix: ComplexMatrix,
    pub vector: ComplexVector,
    /// Weight of the limit vector inside the optimal coordinate span.
    pub optimal_weight: f64,
}

/// Extracts the limit of the matched top eigenvector as t → 1⁻ and checks
/// it lies in the optimal coordinate span.
///
/// With a unique optimum the curve is non-degenerate through t = 1 and the
/// value at t = 1 is the limit itself; with a degenerate optimum the
/// eigenbasis at t = 1 is arbitrary inside the crossing, so the finest
/// grid point before 1 stands in for the limit.
pub fn top_projection_at_one(
    spec: &InterpolationSpec,
    curve: &SpectralCurve,
    tols: &Tolerances,
) -> Result<TopProjection> {
    let optimal = spec.optimal_positions();
    let degenerate = optimal.len() > 1;

    let pick = if degenerate {
        curve.last_index_before_one().ok_or_else(|| {
            Error::CurveTracking("curve has no grid point before t = 1".into())
        })?
    } else {
        curve.grid.len() - 1
    };

    let tracked_min = curve.min_overlap_up_to(pick);
    if tracked_min < tols.overlap_min {
        return Err(Error::CurveTracking(format!(
            "overlap matching broke down: min overlap {tracked_min:.6} below {}",
            tols.overlap_min
        )));
    }

    let vector = curve.matched_top[pick].clone();
    let optimal_weight: f64 = optimal.iter().map(|&p| vector.get(p).norm_sqr()).sum();
    if optimal_weight < 1.0 - tols.membership {
        return Err(Error::Consistency(format!(
            "limit vector carries weight {optimal_weight:.9} in the optimal span, \
             expected at least {:.9}",
            1.0 - tols.membership
        )));
    }

    Ok(TopProjection {
        matrix: vector.outer_self(),
        vector,
        optimal_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{
        check_mixer, objective_hamiltonian, restrict, transverse_field, FeasibleSubspace,
    };
    use crate::problems::{make_maxcut, solve_brute_force};

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    /// N=1 toy: B = σx, C = diag(1, 0).
    fn toy_spec(shift: f64) -> InterpolationSpec {
        let s = FeasibleSubspace::full(1);
        let b = restrict(&transverse_field(1), &s).unwrap();
        let c = restrict(&ComplexMatrix::diag_real(&[1.0, 0.0]), &s).unwrap();
        InterpolationSpec::new(b, c, shift).unwrap()
    }

    fn four_cycle_spec() -> InterpolationSpec {
        let p = make_maxcut(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let report = solve_brute_force(&p).unwrap();
        let s = FeasibleSubspace::from_report(4, &report);
        let b = restrict(&transverse_field(4), &s).unwrap();
        let c = restrict(&objective_hamiltonian(&p), &s).unwrap();
        InterpolationSpec::with_auto_shift(b, c).unwrap()
    }

    #[test]
    fn h_lin_endpoints_and_midpoint() {
        let spec = toy_spec(0.0);
        let at0 = spec.h_lin_at(0.0);
        assert!(at0.matrix.sub(&spec.mixer().matrix).max_abs() < 1e-15);

        let at1 = spec.h_lin_at(1.0);
        assert!(at1
            .matrix
            .sub(&ComplexMatrix::diag_real(&[1.0, 0.0]))
            .max_abs()
            < 1e-15);

        let mid = spec.h_lin_at(0.5);
        let expected = ComplexMatrix::from_rows(&[
            vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)],
            vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0)],
        ]);
        assert!(mid.matrix.sub(&expected).max_abs() < 1e-15);
    }

    #[test]
    fn rejects_non_diagonal_phase_separator() {
        let s = FeasibleSubspace::full(1);
        let b = restrict(&transverse_field(1), &s).unwrap();
        let not_diag = restrict(&transverse_field(1), &s).unwrap();
        assert!(InterpolationSpec::new(b, not_diag, 0.0).is_err());
    }

    #[test]
    fn toy_sweep_gap_positive_everywhere() {
        let spec = toy_spec(0.0);
        let curve = sweep_spectrum(&spec, 201, &tols()).unwrap();
        assert!((curve.gap[0] - 2.0).abs() < 1e-10);
        // Unique optimum: gap stays open including t = 1.
        assert!(curve.gap.iter().all(|&g| g > 1e-10));
        assert!(curve.min_overlap() > 0.9);
    }

    #[test]
    fn four_cycle_gap_closes_exactly_at_one() {
        let spec = four_cycle_spec();
        let curve = sweep_spectrum(&spec, 201, &tols()).unwrap();
        assert!(curve.min_gap_before_one() > 1e-10);
        assert!(curve.gap_at_one() < 1e-6);
        // Degenerate tail refinement reaches spacing 1e−4.
        let last = curve.last_index_before_one().unwrap();
        assert!(1.0 - curve.grid[last] <= 1e-4 + 1e-12);
    }

    #[test]
    fn two_point_grid() {
        let spec = toy_spec(0.0);
        let curve = sweep_spectrum(&spec, 2, &tols()).unwrap();
        // Uniform grid is exactly {0, 1}; the coarse transition trips the
        // overlap threshold, so bisection points appear between them.
        let uniform: Vec<f64> = curve
            .grid
            .iter()
            .zip(curve.uniform.iter())
            .filter(|(_, &u)| u)
            .map(|(&t, _)| t)
            .collect();
        assert_eq!(uniform, vec![0.0, 1.0]);
        assert_eq!(curve.levels.len(), curve.grid.len());
        assert_eq!(curve.levels[0].len(), 2);
    }

    #[test]
    fn top_projection_unique_optimum() {
        let spec = toy_spec(0.0);
        let curve = sweep_spectrum(&spec, 201, &tols()).unwrap();
        let top = top_projection_at_one(&spec, &curve, &tols()).unwrap();
        // Optimum is index 0 (f = 1 beats f = 0).
        let expected = ComplexVector::basis(2, 0).outer_self();
        assert!(top.matrix.sub(&expected).max_abs() < 1e-6);
        assert!(top.optimal_weight > 1.0 - 1e-6);
    }

    #[test]
    fn top_projection_degenerate_optimum() {
        let spec = four_cycle_spec();
        let curve = sweep_spectrum(&spec, 201, &tols()).unwrap();
        let top = top_projection_at_one(&spec, &curve, &tols()).unwrap();
        let optimal = spec.optimal_positions();
        assert_eq!(optimal.len(), 2);
        assert!(top.optimal_weight > 1.0 - 1e-6);
    }

    #[test]
    fn top_projection_constant_objective() {
        // All states optimal: membership is trivially satisfied.
        let s = FeasibleSubspace::full(2);
        let b = restrict(&transverse_field(2), &s).unwrap();
        let c = restrict(&ComplexMatrix::diag_real(&[1.0; 4]), &s).unwrap();
        let spec = InterpolationSpec::new(b, c, 0.0).unwrap();
        let curve = sweep_spectrum(&spec, 101, &tols()).unwrap();
        let top = top_projection_at_one(&spec, &curve, &tols()).unwrap();
        assert!(top.optimal_weight > 1.0 - 1e-9);
    }

    #[test]
    fn shift_moves_levels_but_not_projection() {
        let plain = toy_spec(0.0);
        let shifted = toy_spec(2.5);
        let curve_plain = sweep_spectrum(&plain, 101, &tols()).unwrap();
        let curve_shifted = sweep_spectrum(&shifted, 101, &tols()).unwrap();
        for (k, &t) in curve_plain.grid.iter().enumerate() {
            for (l0, l1) in curve_plain.levels[k]
                .iter()
                .zip(curve_shifted.levels[k].iter())
            {
                assert!((l1 - l0 - t * 2.5).abs() < 1e-9, "level shift at t={t}");
            }
        }
        let top_plain = top_projection_at_one(&plain, &curve_plain, &tols()).unwrap();
        let top_shifted = top_projection_at_one(&shifted, &curve_shifted, &tols()).unwrap();
        assert!(top_plain.matrix.sub(&top_shifted.matrix).max_abs() < 1e-9);
    }

    #[test]
    fn continuity_improves_under_refinement() {
        let spec = four_cycle_spec();
        let coarse = sweep_spectrum(&spec, 101, &tols()).unwrap();
        let fine = sweep_spectrum(&spec, 201, &tols()).unwrap();
        // Max absolute level jump between adjacent uniform-spacing points;
        // refinement points near t = 1 have uneven spacing and are skipped.
        let jump_of = |curve: &SpectralCurve, spacing: f64| {
            let mut worst = 0.0f64;
            for k in 1..curve.levels.len() {
                let dt = curve.grid[k] - curve.grid[k - 1];
                if (dt - spacing).abs() > spacing * 0.5 {
                    continue;
                }
                for (a, b) in curve.levels[k - 1].iter().zip(curve.levels[k].iter()) {
                    worst = worst.max((b - a).abs());
                }
            }
            worst
        };
        let coarse_jump = jump_of(&coarse, 0.01);
        let fine_jump = jump_of(&fine, 0.005);
        assert!(
            fine_jump <= 0.55 * coarse_jump,
            "fine {fine_jump:.3e} vs coarse {coarse_jump:.3e}"
        );
    }

    #[test]
    fn sweep_respects_mixer(){
        // Gap positivity holds along the path for a constrained instance.
        let s = FeasibleSubspace::from_indices(3, vec![0b001, 0b010, 0b100]).unwrap();
        let fam = crate::hamiltonians::builtin_xy_mixing_family(3, &[vec![0, 1, 2]]).unwrap();
        let b = restrict(&fam.sum(), &s).unwrap();
        let verdict = check_mixer(&fam.sum(), &s, &tols()).unwrap();
        assert!(verdict.all_true());
        let c = restrict(
            &ComplexMatrix::diag_real(&[0.0, 1.0, 2.0, 0.0, 3.0, 0.0, 0.0, 0.0]),
            &s,
        )
        .unwrap();
        let spec = InterpolationSpec::with_auto_shift(b, c).unwrap();
        let curve = sweep_spectrum(&spec, 101, &tols()).unwrap();
        assert!(curve.min_gap_before_one() > 1e-10);
        assert!(curve.gap_at_one() > 1e-6); // unique optimum 100
    }
}
