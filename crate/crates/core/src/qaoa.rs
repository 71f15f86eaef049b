//! Alternating-operator circuits on the feasible subspace: phase-separator
//! and mixer gates, trial states and expectation values, explicit (β, γ)
//! schedule synthesis, the product-approximation bound, per-block Trotter
//! error measurement against the quasi-adiabatic reference, and the
//! end-to-end escalation that drives the trial state into the optimal
//! span.

use serde::{Deserialize, Serialize};

use crate::adiabatic;
use crate::doc::{MixerKindDoc, ProblemDocument};
use crate::error::{Error, Result};
use crate::hamiltonians::{
    check_mixer, check_mixing_family, mixing_family_from_doc, objective_hamiltonian,
    perron_top_eigenstate, restrict, FeasibleSubspace, MixingFamily,
};
use crate::linalg::{
    eig_hermitian, exp_i_hermitian, operator_norm, C64, ComplexMatrix, ComplexVector,
    EigenDecomposition,
};
use crate::problems::{load_problem, solve_brute_force};
use crate::spectral::InterpolationSpec;
use crate::tol::{self, Tolerances};

/// Whether the mixer exponentiates the family sum or multiplies the
/// per-member exponentials in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixerKind {
    Simultaneous,
    Sequential,
}

impl From<MixerKindDoc> for MixerKind {
    fn from(kind: MixerKindDoc) -> Self {
        match kind {
            MixerKindDoc::Simultaneous => MixerKind::Simultaneous,
            MixerKindDoc::Sequential => MixerKind::Sequential,
        }
    }
}

/// Phase-separator and mixer gates on the feasible subspace, built once
/// from the restricted Hamiltonians so that unitaries at any parameter
/// value come from cached eigendecompositions.
#[derive(Debug, Clone)]
pub struct GateSet {
    dim: usize,
    kind: MixerKind,
    /// Diagonal generating the phase separator.
    phase_diag: Vec<f64>,
    /// Eigensystem of the summed restricted mixer (simultaneous gate and
    /// the Perron initial state both come from here).
    sum_dec: EigenDecomposition,
    /// Eigensystems of the restricted members, in application order.
    member_decs: Vec<EigenDecomposition>,
}

impl GateSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> MixerKind {
        self.kind
    }

    /// Diagonal unitary e^{−iγ·diag(f)}.
    pub fn phase_separator(&self, gamma: f64) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (i, &f) in self.phase_diag.iter().enumerate() {
            m.set(i, i, C64::from_polar(1.0, -gamma * f));
        }
        m
    }

    fn evolve(dec: &EigenDecomposition, beta: f64) -> ComplexMatrix {
        let d = dec.dim();
        let mut scaled = ComplexMatrix::zeros(d, d);
        for c in 0..d {
            let phase = C64::from_polar(1.0, -beta * dec.eigenvalues[c]);
            for r in 0..d {
                scaled.set(r, c, dec.eigenvectors.get(r, c) * phase);
            }
        }
        scaled.matmul(&dec.eigenvectors.adjoint())
    }

    fn evolve_vec(dec: &EigenDecomposition, beta: f64, v: &ComplexVector) -> ComplexVector {
        let coeffs = dec.eigenvectors.adjoint().mul_vec(v);
        let mut rotated = ComplexVector::zeros(coeffs.dim());
        for i in 0..coeffs.dim() {
            rotated.set(i, coeffs.get(i) * C64::from_polar(1.0, -beta * dec.eigenvalues[i]));
        }
        dec.eigenvectors.mul_vec(&rotated)
    }

    /// Mixer unitary at angle β.
    pub fn mixer(&self, beta: f64) -> ComplexMatrix {
        match self.kind {
            MixerKind::Simultaneous => Self::evolve(&self.sum_dec, beta),
            MixerKind::Sequential => {
                let mut u = ComplexMatrix::identity(self.dim);
                for dec in &self.member_decs {
                    u = Self::evolve(dec, beta).matmul(&u);
                }
                u
            }
        }
    }

    /// One layer as a matrix: mixer(β)·phase(γ) (phase acts first).
    pub fn layer_matrix(&self, beta: f64, gamma: f64) -> ComplexMatrix {
        self.mixer(beta).matmul(&self.phase_separator(gamma))
    }

    /// Applies one layer to a state: phase separator first, then mixer.
    pub fn apply_layer(&self, state: &ComplexVector, beta: f64, gamma: f64) -> ComplexVector {
        let mut phased = ComplexVector::zeros(self.dim);
        for i in 0..self.dim {
            phased.set(
                i,
                state.get(i) * C64::from_polar(1.0, -gamma * self.phase_diag[i]),
            );
        }
        match self.kind {
            MixerKind::Simultaneous => Self::evolve_vec(&self.sum_dec, beta, &phased),
            MixerKind::Sequential => {
                let mut v = phased;
                for dec in &self.member_decs {
                    v = Self::evolve_vec(dec, beta, &v);
                }
                v
            }
        }
    }
}

/// Builds the gate set from a diagonal phase separator on S (given as its
/// diagonal) and a validated mixing family.
pub fn build_gates(
    phase_diag: &[f64],
    fam: &MixingFamily,
    subspace: &FeasibleSubspace,
    kind: MixerKind,
    tols: &Tolerances,
) -> Result<GateSet> {
    let dim = subspace.dim_s();
    if phase_diag.len() != dim {
        return Err(Error::Contract(format!(
            "phase diagonal has {} entries, subspace has {dim}",
            phase_diag.len()
        )));
    }
    let family_verdict = check_mixing_family(fam, subspace, tols)?;
    if !family_verdict.is_mixing_family() {
        return Err(Error::Validation(format!(
            "family is not a mixing family: member feasibility {:?}, member non-negativity {:?}, \
             jointly irreducible {}",
            family_verdict.member_feasibility_preserving,
            family_verdict.member_entrywise_nonneg,
            family_verdict.jointly_irreducible
        )));
    }
    let sum_dec = eig_hermitian(&restrict(&fam.sum(), subspace)?.matrix)?;
    let member_decs = fam
        .ordered_members()
        .map(|m| Ok(eig_hermitian(&restrict(m, subspace)?.matrix)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(GateSet {
        dim,
        kind,
        phase_diag: phase_diag.to_vec(),
        sum_dec,
        member_decs,
    })
}

/// One (β, γ) layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleVariant {
    /// First-order split of exp(−i·H_lin(j/m)·T/m) into n slices.
    Corrected,
    /// The printed formulas taken literally (t = 1).
    PaperLiteral,
}

/// Provenance of a synthesized schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleMeta {
    pub t_total: f64,
    /// Number of discretization blocks (m).
    pub blocks: usize,
    /// Slices per block (n).
    pub slices: usize,
    pub variant: ScheduleVariant,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixer_kind: Option<MixerKind>,
}

/// Ordered (β, γ) layers: blocks of `slices` identical pairs, applied
/// first to last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub layers: Vec<Layer>,
    pub meta: ScheduleMeta,
}

impl Schedule {
    pub fn empty() -> Self {
        Self {
            layers: Vec::new(),
            meta: ScheduleMeta {
                t_total: 0.0,
                blocks: 0,
                slices: 0,
                variant: ScheduleVariant::Corrected,
                mixer_kind: None,
            },
        }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// The `slices` identical layers of block `j` (1-based).
    pub fn block(&self, j: usize) -> &[Layer] {
        let n = self.meta.slices;
        &self.layers[(j - 1) * n..j * n]
    }
}

/// Synthesizes the explicit schedule: for block j = 1..m, n layers with
/// (corrected) β = (1−j/m)·Δ/n, γ = (j/m)·Δ/n where Δ = T/m, or
/// (paper-literal) β = (1−s)·s/n, γ = s²/n with s = j·T/m.
pub fn synthesize_schedule(
    t_total: f64,
    blocks: usize,
    slices: usize,
    variant: ScheduleVariant,
) -> Result<Schedule> {
    if blocks == 0 || slices == 0 {
        return Err(Error::Contract("schedule needs m, n >= 1".into()));
    }
    if t_total <= 0.0 {
        return Err(Error::Contract("schedule needs T > 0".into()));
    }
    let m = blocks as f64;
    let n = slices as f64;
    let mut layers = Vec::with_capacity(blocks * slices);
    for j in 1..=blocks {
        let layer = match variant {
            ScheduleVariant::Corrected => {
                let s = j as f64 / m;
                let delta = t_total / m;
                Layer {
                    beta: (1.0 - s) * delta / n,
                    gamma: s * delta / n,
                }
            }
            ScheduleVariant::PaperLiteral => {
                let s = j as f64 * t_total / m;
                Layer {
                    beta: (1.0 - s) * s / n,
                    gamma: s * s / n,
                }
            }
        };
        for _ in 0..slices {
            layers.push(layer);
        }
    }
    Ok(Schedule {
        layers,
        meta: ScheduleMeta {
            t_total,
            blocks,
            slices,
            variant,
            mixer_kind: None,
        },
    })
}

/// Applies the schedule layers in order to `iota`.
pub fn trial_state(g: &GateSet, sched: &Schedule, iota: &ComplexVector) -> Result<ComplexVector> {
    if iota.dim() != g.dim() {
        return Err(Error::Contract(format!(
            "state dim {} does not match gate dim {}",
            iota.dim(),
            g.dim()
        )));
    }
    if (iota.norm() - 1.0).abs() >= 1e-12 {
        return Err(Error::Contract("initial state is not normalized".into()));
    }
    let mut state = iota.clone();
    for layer in &sched.layers {
        state = g.apply_layer(&state, layer.beta, layer.gamma);
    }
    Ok(state)
}

/// ⟨ψ|C|ψ⟩ for Hermitian C on S; the imaginary part must vanish.
pub fn expectation(c: &ComplexMatrix, psi: &ComplexVector) -> Result<f64> {
    if !c.is_square() || c.rows() != psi.dim() {
        return Err(Error::Contract("expectation dimension mismatch".into()));
    }
    let value = psi.inner(&c.mul_vec(psi));
    if value.im.abs() >= 1e-10 {
        return Err(Error::Contract(format!(
            "expectation has imaginary part {:.3e}; operator is not Hermitian",
            value.im
        )));
    }
    Ok(value.re)
}

/// Product-approximation data: ‖∏V − ∏W‖ against (1+ε)^m − 1.
#[derive(Debug, Clone)]
pub struct Lemma6Check {
    pub lhs: f64,
    pub epsilon: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Measures ‖∏V_j − ∏W_j‖ and the bound (1+ε)^m − 1 with
/// ε = max_j ‖V_j − W_j‖. All inputs must be unitary.
pub fn verify_lemma6(v_list: &[ComplexMatrix], w_list: &[ComplexMatrix]) -> Result<Lemma6Check> {
    if v_list.is_empty() || v_list.len() != w_list.len() {
        return Err(Error::Contract(
            "verify_lemma6 needs equal-length non-empty lists".into(),
        ));
    }
    for (k, u) in v_list.iter().chain(w_list.iter()).enumerate() {
        let defect = operator_norm(&u.adjoint().matmul(u).sub(&ComplexMatrix::identity(u.rows())));
        if defect >= tol::UNITARY_TOL {
            return Err(Error::Contract(format!(
                "operator {k} is not unitary (defect {defect:.3e})"
            )));
        }
    }
    let epsilon = v_list
        .iter()
        .zip(w_list.iter())
        .map(|(v, w)| operator_norm(&v.sub(w)))
        .fold(0.0, f64::max);
    let product = |list: &[ComplexMatrix]| {
        let mut p = ComplexMatrix::identity(list[0].rows());
        for u in list {
            p = u.matmul(&p);
        }
        p
    };
    let lhs = operator_norm(&product(v_list).sub(&product(w_list)));
    let bound = (1.0 + epsilon).powi(v_list.len() as i32) - 1.0;
    Ok(Lemma6Check {
        lhs,
        epsilon,
        bound,
        holds: lhs <= bound + 1e-12,
    })
}

/// Per-n report of the discretized circuit against the quasi-adiabatic
/// reference.
#[derive(Debug, Clone)]
pub struct TrotterReport {
    /// Slices per block (n).
    pub slices: usize,
    /// ‖(mixer·phase)^n − exp(−i·H_lin(j/m)·T/m)‖ per block j.
    pub per_block_errors: Vec<f64>,
    pub max_block_error: f64,
    /// ‖∏W_j − U_T(1)‖: discretization error of the exact block
    /// exponentials.
    pub discretization_error: f64,
    /// ‖V(β,γ) − U_T(1)‖: full circuit against the reference evolution.
    pub total_error: f64,
    /// total_error ≤ (1+ε)^m − 1 + discretization_error (+ slack).
    pub composition_bound_holds: bool,
    pub dist_to_opt: f64,
}

/// Builds corrected schedules for each n, measures per-block and total
/// errors against block exponentials W_j = exp(−i·H_lin(j/m)·T/m) and a
/// fine-step quasi-adiabatic reference U_T(1), and records the trial-state
/// distance. The initial state is the Perron vector of the summed mixer.
pub fn trotter_convergence(
    spec: &InterpolationSpec,
    fam: &MixingFamily,
    kind: MixerKind,
    t_total: f64,
    blocks: usize,
    n_list: &[usize],
    tols: &Tolerances,
) -> Result<Vec<TrotterReport>> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Contract(
            "n values must be non-empty and strictly ascending".into(),
        ));
    }
    let subspace = spec.subspace().clone();
    let gates = build_gates(&spec.shifted_c_diagonal(), fam, &subspace, kind, tols)?;
    let iota = perron_initial_state(fam, &subspace, tols)?;

    // Fine-step reference for U_T(1).
    let fine_steps = adiabatic::default_steps(spec, t_total) * 4;
    let u_ref = adiabatic::propagate_unitary(spec, t_total, fine_steps)?;

    // Exact block exponentials and their ordered product.
    let delta = t_total / blocks as f64;
    let mut w_blocks = Vec::with_capacity(blocks);
    for j in 1..=blocks {
        let h = spec.h_lin_at(j as f64 / blocks as f64);
        w_blocks.push(exp_i_hermitian(&h.matrix, delta)?);
    }
    let mut w_product = ComplexMatrix::identity(spec.dim());
    for w in &w_blocks {
        w_product = w.matmul(&w_product);
    }
    let discretization_error = operator_norm(&w_product.sub(&u_ref));

    let mut reports = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let sched = synthesize_schedule(t_total, blocks, n, ScheduleVariant::Corrected)?;
        let mut per_block_errors = Vec::with_capacity(blocks);
        let mut v_product = ComplexMatrix::identity(spec.dim());
        for j in 1..=blocks {
            let layer = sched.block(j)[0];
            let single = gates.layer_matrix(layer.beta, layer.gamma);
            let mut v_block = ComplexMatrix::identity(spec.dim());
            for _ in 0..n {
                v_block = single.matmul(&v_block);
            }
            per_block_errors.push(operator_norm(&v_block.sub(&w_blocks[j - 1])));
            v_product = v_block.matmul(&v_product);
        }
        let total_error = operator_norm(&v_product.sub(&u_ref));
        let max_block_error = per_block_errors.iter().copied().fold(0.0, f64::max);
        let bound = (1.0 + max_block_error).powi(blocks as i32) - 1.0 + discretization_error;
        let composition_bound_holds = total_error <= bound + 1e-9;

        let psi = trial_state(&gates, &sched, &iota)?;
        let dist_to_opt = adiabatic::distance_to_optimum(spec, &psi)?;

        reports.push(TrotterReport {
            slices: n,
            per_block_errors,
            max_block_error,
            discretization_error,
            total_error,
            composition_bound_holds,
            dist_to_opt,
        });
    }
    Ok(reports)
}

/// Perron top eigenstate of the summed family restriction (the canonical
/// initial state of the convergence statement).
pub fn perron_initial_state(
    fam: &MixingFamily,
    subspace: &FeasibleSubspace,
    tols: &Tolerances,
) -> Result<ComplexVector> {
    let sum = fam.sum();
    let verdict = check_mixer(&sum, subspace, tols)?;
    if !verdict.all_true() {
        return Err(Error::Validation(
            "summed family is not a valid mixer; cannot form the Perron initial state".into(),
        ));
    }
    let restricted = restrict(&sum, subspace)?;
    Ok(perron_top_eigenstate(&restricted, &verdict, tols)?.vector)
}

/// Escalation budget for the end-to-end search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BudgetCaps {
    pub t_cap: f64,
    pub m_cap: usize,
    pub n_cap: usize,
}

impl Default for BudgetCaps {
    fn default() -> Self {
        Self {
            t_cap: 100.0,
            m_cap: 50,
            n_cap: 50,
        }
    }
}

/// Witness returned by the end-to-end search.
#[derive(Debug, Clone)]
pub struct EndToEndResult {
    pub t_total: f64,
    pub blocks: usize,
    pub slices: usize,
    pub schedule: Schedule,
    pub dist_to_opt: f64,
    /// Number of (T, m, n) combinations evaluated.
    pub evaluations: usize,
}

fn ladder_f64(seed: &[f64], cap: f64) -> Vec<f64> {
    let mut values: Vec<f64> = seed.iter().copied().filter(|&v| v < cap).collect();
    values.push(cap);
    values
}

fn ladder_usize(seed: &[usize], cap: usize) -> Vec<usize> {
    let mut values: Vec<usize> = seed.iter().copied().filter(|&v| v < cap).collect();
    values.push(cap);
    values
}

/// Escalates T, then m, then n within the caps until the trial-state
/// distance drops below `epsilon`. Exhausting the caps is reported as a
/// distinct error carrying the best distance found; it is a budget
/// statement, not a refutation of convergence.
pub fn end_to_end(
    doc: &ProblemDocument,
    epsilon: f64,
    caps: BudgetCaps,
    tols: &Tolerances,
) -> Result<EndToEndResult> {
    if epsilon <= 0.0 {
        return Err(Error::Contract("epsilon must be positive".into()));
    }
    let cop = load_problem(doc)?;
    let report = solve_brute_force(&cop)?;
    let subspace = FeasibleSubspace::from_report(cop.n(), &report);
    let fam = mixing_family_from_doc(doc)?;
    let kind = doc
        .mixer_kind
        .map(MixerKind::from)
        .unwrap_or(MixerKind::Simultaneous);

    let c_restricted = restrict(&objective_hamiltonian(&cop), &subspace)?;
    let b_restricted = restrict(&fam.sum(), &subspace)?;
    let spec = InterpolationSpec::with_auto_shift(b_restricted, c_restricted)?;

    let gates = build_gates(&spec.shifted_c_diagonal(), &fam, &subspace, kind, tols)?;
    let iota = perron_initial_state(&fam, &subspace, tols)?;

    // The initial state may already sit inside the optimal span (always
    // the case when epsilon >= 1, since distances live in [0, 1]).
    let initial_dist = adiabatic::distance_to_optimum(&spec, &iota)?;
    if initial_dist < epsilon {
        return Ok(EndToEndResult {
            t_total: 0.0,
            blocks: 0,
            slices: 0,
            schedule: Schedule::empty(),
            dist_to_opt: initial_dist,
            evaluations: 0,
        });
    }

    let t_ladder = ladder_f64(&[5.0, 10.0, 20.0, 40.0, 80.0], caps.t_cap);
    let m_ladder = ladder_usize(&[5, 10, 20, 40], caps.m_cap);
    let n_ladder = ladder_usize(&[4, 8, 16, 32], caps.n_cap);

    let mut best_dist = initial_dist;
    let mut evaluations = 0usize;
    for &t_total in &t_ladder {
        for &m in &m_ladder {
            for &n in &n_ladder {
                let mut sched = synthesize_schedule(t_total, m, n, ScheduleVariant::Corrected)?;
                sched.meta.mixer_kind = Some(kind);
                let psi = trial_state(&gates, &sched, &iota)?;
                let dist = adiabatic::distance_to_optimum(&spec, &psi)?;
                evaluations += 1;
                best_dist = best_dist.min(dist);
                if dist < epsilon {
                    return Ok(EndToEndResult {
                        t_total,
                        blocks: m,
                        slices: n,
                        schedule: sched,
                        dist_to_opt: dist,
                        evaluations,
                    });
                }
            }
        }
    }
    Err(Error::BudgetExhausted {
        best_dist,
        t_cap: caps.t_cap,
        m_cap: caps.m_cap,
        n_cap: caps.n_cap,
    })
}
