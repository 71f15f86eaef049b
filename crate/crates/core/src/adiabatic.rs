//! Quasi-adiabatic evolution on the feasible subspace.
//!
//! The state obeys dψ/ds = −i·H(s/T)·ψ on s ∈ [0, T]; the stepper is the
//! exponential midpoint rule, ψ ← exp(−i·H(s_mid/T)·Δs)·ψ, which is
//! exactly unitary per step and second-order accurate in Δs. Accuracy is
//! controlled by step-doubling (Richardson) agreement on the final state.

use crate::error::{Error, Result};
use crate::linalg::{exp_i_hermitian, ComplexMatrix, ComplexVector};
use crate::spectral::InterpolationSpec;

/// Default steps-per-(unit time × unit norm) for the midpoint stepper.
pub const DEFAULT_STEP_RATE: f64 = 20.0;

/// One integrated run and its measured diagnostics.
#[derive(Debug, Clone)]
pub struct AnnealRun {
    pub t_total: f64,
    pub steps: usize,
    pub final_state: ComplexVector,
    /// ‖(1 − P_opt)·final_state‖ with P_opt the coordinate projection onto
    /// the optimal positions of the phase-separator diagonal.
    pub dist_to_opt: f64,
    /// Largest norm drift |‖ψ‖ − 1| observed over the run.
    pub unitarity_defect: f64,
}

/// ceil(rate·T·‖H‖-bound), at least 1.
pub fn default_steps(spec: &InterpolationSpec, t_total: f64) -> usize {
    ((DEFAULT_STEP_RATE * t_total * spec.norm_bound()).ceil() as usize).max(1)
}

fn check_initial_state(spec: &InterpolationSpec, iota: &ComplexVector) -> Result<()> {
    if iota.dim() != spec.dim() {
        return Err(Error::Contract(format!(
            "initial state has dim {}, subspace has dim {}",
            iota.dim(),
            spec.dim()
        )));
    }
    let defect = (iota.norm() - 1.0).abs();
    if defect >= 1e-12 {
        return Err(Error::Contract(format!(
            "initial state is not normalized (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// Distance of a subspace state from the optimal coordinate span.
pub fn distance_to_optimum(spec: &InterpolationSpec, state: &ComplexVector) -> Result<f64> {
    let p = ComplexMatrix::coordinate_projection(spec.dim(), &spec.optimal_positions());
    crate::linalg::subspace_distance(&state.scale((1.0 / state.norm()).into()), &p)
}

/// Integrates the evolution with the exponential midpoint stepper.
pub fn propagate(
    spec: &InterpolationSpec,
    iota: &ComplexVector,
    t_total: f64,
    steps: usize,
) -> Result<AnnealRun> {
    check_initial_state(spec, iota)?;
    if steps == 0 {
        return Err(Error::Contract("propagate needs at least one step".into()));
    }
    if t_total < 0.0 {
        return Err(Error::Contract("evolution time must be non-negative".into()));
    }

    let mut state = iota.clone();
    let mut defect = 0.0f64;
    if t_total > 0.0 {
        let ds = t_total / steps as f64;
        for k in 1..=steps {
            // s_mid/T = (k − 1/2)/steps, independent of T itself.
            let t_mid = (k as f64 - 0.5) / steps as f64;
            let step_u = exp_i_hermitian(&spec.h_lin_at(t_mid).matrix, ds)?;
            state = step_u.mul_vec(&state);
            defect = defect.max((state.norm() - 1.0).abs());
        }
    }
    let dist_to_opt = distance_to_optimum(spec, &state)?;
    Ok(AnnealRun {
        t_total,
        steps,
        final_state: state,
        dist_to_opt,
        unitarity_defect: defect,
    })
}

/// Full evolution operator U_T(1) as a matrix (product of step unitaries).
pub fn propagate_unitary(
    spec: &InterpolationSpec,
    t_total: f64,
    steps: usize,
) -> Result<ComplexMatrix> {
    if steps == 0 {
        return Err(Error::Contract("propagate needs at least one step".into()));
    }
    let d = spec.dim();
    let mut u = ComplexMatrix::identity(d);
    if t_total > 0.0 {
        let ds = t_total / steps as f64;
        for k in 1..=steps {
            let t_mid = (k as f64 - 0.5) / steps as f64;
            let step_u = exp_i_hermitian(&spec.h_lin_at(t_mid).matrix, ds)?;
            u = step_u.matmul(&u);
        }
    }
    Ok(u)
}

/// Propagates with step-doubling until two consecutive resolutions agree
/// on the final state to `tolerance` in norm; errors when `max_doublings`
/// is exhausted first. Returns the finest run and the last disagreement.
pub fn propagate_richardson(
    spec: &InterpolationSpec,
    iota: &ComplexVector,
    t_total: f64,
    initial_steps: usize,
    tolerance: f64,
    max_doublings: usize,
) -> Result<(AnnealRun, f64)> {
    let mut coarse = propagate(spec, iota, t_total, initial_steps)?;
    for _ in 0..max_doublings {
        let fine = propagate(spec, iota, t_total, coarse.steps * 2)?;
        let diff = fine.final_state.sub(&coarse.final_state).norm();
        if diff < tolerance {
            return Ok((fine, diff));
        }
        coarse = fine;
    }
    Err(Error::Accuracy(format!(
        "step-doubling did not reach agreement {tolerance:.3e} within {max_doublings} doublings \
         (T = {t_total}, steps = {})",
        coarse.steps
    )))
}

/// One sweep entry: the run diagnostics at a given total time.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub t_total: f64,
    pub steps: usize,
    pub dist_to_opt: f64,
    pub unitarity_defect: f64,
}

/// Runs one propagation per T with default step scaling.
///
/// Caller contract (Theorem-level hypothesis): `iota` is the Perron top
/// eigenstate of the mixer restriction; other states are allowed but the
/// convergence statement no longer applies.
pub fn convergence_sweep(
    spec: &InterpolationSpec,
    iota: &ComplexVector,
    t_list: &[f64],
) -> Result<Vec<SweepPoint>> {
    if t_list.is_empty() {
        return Err(Error::Contract("sweep needs at least one T value".into()));
    }
    if t_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Contract("T values must be strictly ascending".into()));
    }
    let mut points = Vec::with_capacity(t_list.len());
    for &t_total in t_list {
        let steps = default_steps(spec, t_total);
        let run = propagate(spec, iota, t_total, steps)?;
        points.push(SweepPoint {
            t_total,
            steps,
            dist_to_opt: run.dist_to_opt,
            unitarity_defect: run.unitarity_defect,
        });
    }
    Ok(points)
}

/// Success flag for a sweep: the tail of dist(T) is below the target.
pub fn sweep_converged(points: &[SweepPoint], epsilon: f64) -> bool {
    points.last().is_some_and(|p| p.dist_to_opt < epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{
        check_mixer, objective_hamiltonian, perron_top_eigenstate, restrict, transverse_field,
        FeasibleSubspace,
    };
    use crate::linalg::C64;
    use crate::problems::{make_maxcut, solve_brute_force};
    use crate::tol::{self, Tolerances};

    fn toy_spec() -> InterpolationSpec {
        let s = FeasibleSubspace::full(1);
        let b = restrict(&transverse_field(1), &s).unwrap();
        let c = restrict(&ComplexMatrix::diag_real(&[1.0, 0.0]), &s).unwrap();
        InterpolationSpec::with_auto_shift(b, c).unwrap()
    }

    fn toy_iota() -> ComplexVector {
        ComplexVector::uniform(2)
    }

    #[test]
    fn zero_time_returns_initial_state() {
        let spec = toy_spec();
        let run = propagate(&spec, &toy_iota(), 0.0, 5).unwrap();
        assert!(run.final_state.sub(&toy_iota()).norm() < 1e-15);
        assert_eq!(run.unitarity_defect, 0.0);
    }

    #[test]
    fn constant_interpolation_matches_exact_exponential() {
        // B = C (both diag(1,0) here): H(t) = C for all t, so
        // U_T(1) = exp(−iCT) exactly, whatever the step count.
        let s = FeasibleSubspace::full(1);
        let cmat = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let b = restrict(&cmat, &s).unwrap();
        let c = restrict(&cmat, &s).unwrap();
        let spec = InterpolationSpec::new(b, c, 0.0).unwrap();
        let t_total = 3.7;
        let run = propagate(&spec, &toy_iota(), t_total, 7).unwrap();
        let exact = exp_i_hermitian(&cmat, t_total).unwrap().mul_vec(&toy_iota());
        assert!(run.final_state.sub(&exact).norm() < 1e-12);
    }

    #[test]
    fn toy_converges_by_t_fifty() {
        let spec = toy_spec();
        let steps = default_steps(&spec, 50.0);
        // Step-doubling until two resolutions agree to 1e−6.
        let (run, diff) =
            propagate_richardson(&spec, &toy_iota(), 50.0, steps, 1e-6, 10).unwrap();
        assert!(diff < 1e-6);
        assert!(run.dist_to_opt < 0.05, "dist {}", run.dist_to_opt);
        assert!(run.unitarity_defect < 1e-10);

        // Reference integration with 10× the steps agrees on the distance.
        let fine = propagate(&spec, &toy_iota(), 50.0, run.steps * 10).unwrap();
        assert!((run.dist_to_opt - fine.dist_to_opt).abs() < 1e-6);
    }

    #[test]
    fn richardson_reaches_default_tolerance() {
        let spec = toy_spec();
        let steps = default_steps(&spec, 20.0);
        let (run, diff) =
            propagate_richardson(&spec, &toy_iota(), 20.0, steps, tol::RICHARDSON_TOL, 8).unwrap();
        assert!(diff < tol::RICHARDSON_TOL);
        assert!(run.unitarity_defect < tol::UNITARITY_DEFECT_TOL);
    }

    #[test]
    fn richardson_fails_with_no_budget() {
        let spec = toy_spec();
        let err = propagate_richardson(&spec, &toy_iota(), 50.0, 1, 1e-12, 0);
        assert!(matches!(err, Err(Error::Accuracy(_))));
    }

    #[test]
    fn unitary_product_is_unitary() {
        let spec = toy_spec();
        let u = propagate_unitary(&spec, 10.0, 200).unwrap();
        let defect = crate::linalg::operator_norm(
            &u.adjoint().matmul(&u).sub(&ComplexMatrix::identity(2)),
        );
        assert!(defect < 1e-10, "defect {defect:.3e}");
    }

    #[test]
    fn sweep_distances_shrink_for_toy() {
        let spec = toy_spec();
        let points = convergence_sweep(&spec, &toy_iota(), &[1.0, 5.0, 20.0, 50.0]).unwrap();
        assert!(points.last().unwrap().dist_to_opt < 0.05);
        assert!(sweep_converged(&points, 0.05));
        // Slow evolution beats fast evolution over the decade.
        assert!(points[0].dist_to_opt > points.last().unwrap().dist_to_opt);
    }

    #[test]
    fn four_cycle_converges_despite_closed_gap() {
        // Degenerate optima close the gap at t = 1, yet the evolved Perron
        // state still lands in the optimal span.
        let p = make_maxcut(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let report = solve_brute_force(&p).unwrap();
        let s = FeasibleSubspace::from_report(4, &report);
        let bfull = transverse_field(4);
        let b = restrict(&bfull, &s).unwrap();
        let c = restrict(&objective_hamiltonian(&p), &s).unwrap();
        let spec = InterpolationSpec::with_auto_shift(b.clone(), c).unwrap();

        let verdict = check_mixer(&bfull, &s, &Tolerances::default()).unwrap();
        let perron = perron_top_eigenstate(&b, &verdict, &Tolerances::default()).unwrap();

        let steps = default_steps(&spec, 60.0);
        let run = propagate(&spec, &perron.vector, 60.0, steps).unwrap();
        assert!(run.dist_to_opt < 0.1, "dist {}", run.dist_to_opt);
    }

    #[test]
    fn constant_objective_distance_zero() {
        // S_max = S: every state already lies in the optimal span.
        let s = FeasibleSubspace::full(2);
        let b = restrict(&transverse_field(2), &s).unwrap();
        let c = restrict(&ComplexMatrix::diag_real(&[2.0; 4]), &s).unwrap();
        let spec = InterpolationSpec::with_auto_shift(b, c).unwrap();
        for &t_total in &[0.0, 3.0, 10.0] {
            let run = propagate(&spec, &ComplexVector::uniform(4), t_total, 50).unwrap();
            assert!(run.dist_to_opt < 1e-12);
        }
    }

    #[test]
    fn embedded_state_stays_inside_subspace() {
        let p = make_maxcut(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let report = solve_brute_force(&p).unwrap();
        // Restrict to a proper subspace to exercise the embedding.
        let s = FeasibleSubspace::from_indices(3, vec![1, 2, 4, 6]).unwrap();
        let fam = crate::hamiltonians::builtin_xy_mixing_family(3, &[vec![0, 1, 2]]).unwrap();
        let _ = report;
        let b = restrict(&fam.sum(), &s).unwrap();
        let c = restrict(&objective_hamiltonian(&p), &s).unwrap();
        let spec = InterpolationSpec::with_auto_shift(b, c).unwrap();
        let iota = ComplexVector::uniform(4);
        let run = propagate(&spec, &iota, 7.0, 100).unwrap();
        let full = s.embed(&run.final_state);
        for index in 0..8 {
            if !s.contains(index) {
                assert_eq!(full.get(index), C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn rejects_denormalized_state() {
        let spec = toy_spec();
        let bad = ComplexVector::from_real(&[1.0, 1.0]);
        assert!(matches!(
            propagate(&spec, &bad, 1.0, 10),
            Err(Error::Contract(_))
        ));
    }
}
