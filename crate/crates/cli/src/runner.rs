//! Mode dispatch: wires a resolved config into the core modules, writes
//! CSV/JSON artifacts plus a replayable manifest, and maps errors onto
//! the exit-code contract.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use qcl_core::adiabatic;
use qcl_core::doc::ProblemDocument;
use qcl_core::hamiltonians::{
    check_mixer, check_mixing_family, check_phase_separator, mixing_family_from_doc,
    objective_hamiltonian, perron_top_eigenstate, restrict, FeasibleSubspace, MixerVerdict,
    MixingFamily, RestrictedOperator,
};
use qcl_core::linalg::C64;
use qcl_core::problems::{load_problem, solve_brute_force, Cop, SolutionReport};
use qcl_core::qaoa::{self, MixerKind};
use qcl_core::spectral::{sweep_spectrum, InterpolationSpec};
use qcl_core::{Error as CoreError, Tolerances};

use crate::config::{ExperimentConfig, Mode, ProblemRef};

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_IO: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let code = match &err {
            CoreError::Validation(_)
            | CoreError::Consistency(_)
            | CoreError::CurveTracking(_)
            | CoreError::Accuracy(_)
            | CoreError::DegenerateTop { .. } => EXIT_VALIDATION,
            CoreError::BudgetExhausted { .. } => EXIT_BUDGET,
            CoreError::Contract(_) | CoreError::Document(_) | CoreError::InfeasibleProblem => {
                EXIT_CONFIG
            }
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

/// Replayable record of a run: the `config` field is a complete,
/// self-contained experiment configuration.
#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub mode: Mode,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub versions: BTreeMap<String, String>,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

/// Formats a float with 17 significant digits, the fixed CSV convention.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    std::fs::write(dir.join(name), text)
        .map_err(|e| CliError::io(format!("cannot write {name}: {e}")))
}

fn write_csv(dir: &Path, name: &str, header: &[String], rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    write_text(dir, name, &text)
}

fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::io(format!("cannot serialize {name}: {e}")))?;
    text.push('\n');
    write_text(dir, name, &text)
}

/// Everything the modes need, assembled once from the problem document.
struct Workbench {
    cop: Cop,
    report: SolutionReport,
    subspace: FeasibleSubspace,
    family: MixingFamily,
    kind: MixerKind,
    sum_verdict: MixerVerdict,
    b_restricted: RestrictedOperator,
    c_restricted: RestrictedOperator,
}

impl Workbench {
    fn assemble(doc: &ProblemDocument, tols: &Tolerances) -> Result<Self, CliError> {
        let cop = load_problem(doc)?;
        let report = solve_brute_force(&cop)?;
        let subspace = FeasibleSubspace::from_report(cop.n(), &report);
        let family = mixing_family_from_doc(doc)?;
        let kind = doc
            .mixer_kind
            .map(MixerKind::from)
            .unwrap_or(MixerKind::Simultaneous);
        let sum = family.sum();
        let sum_verdict = check_mixer(&sum, &subspace, tols)?;
        let b_restricted = restrict(&sum, &subspace)?;
        let c_restricted = restrict(&objective_hamiltonian(&cop), &subspace)?;
        Ok(Self {
            cop,
            report,
            subspace,
            family,
            kind,
            sum_verdict,
            b_restricted,
            c_restricted,
        })
    }

    /// Fail-fast gate for the non-validate modes.
    fn require_valid_mixer(&self) -> Result<(), CliError> {
        if !self.sum_verdict.all_true() {
            return Err(CoreError::Validation(format!(
                "mixer is invalid: feasibility_preserving={}, entrywise_nonneg={}, irreducible={}",
                self.sum_verdict.feasibility_preserving,
                self.sum_verdict.entrywise_nonneg,
                self.sum_verdict.irreducible
            ))
            .into());
        }
        Ok(())
    }
}

fn verdict_json(v: &MixerVerdict) -> serde_json::Value {
    json!({
        "feasibility_preserving": v.feasibility_preserving,
        "max_leakage": v.max_leakage,
        "entrywise_nonneg": v.entrywise_nonneg,
        "most_negative_entry": v.most_negative_entry,
        "max_imag_entry": v.max_imag_entry,
        "irreducible": v.irreducible,
        "components": v.components,
    })
}

/// Runs one mode end to end; returns the artifact file names written.
pub fn run(mode: Mode, config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<String>, CliError> {
    if let Some(declared) = config.mode {
        if declared != mode {
            return Err(CliError::config(format!(
                "config declares mode {declared}, invoked as {mode}"
            )));
        }
    }
    let started = Instant::now();
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", out_dir.display())))?;

    let doc = match &config.problem {
        Some(ProblemRef::Inline(doc)) => doc.clone(),
        Some(ProblemRef::Path(p)) => {
            return Err(CliError::config(format!(
                "problem path {p} was not resolved before run"
            )))
        }
        None => return Err(CliError::config("config has no problem")),
    };

    let outputs = match mode {
        Mode::Validate => run_validate(&doc, config, out_dir)?,
        Mode::Spectrum => run_spectrum(&doc, config, out_dir)?,
        Mode::Anneal => run_anneal(&doc, config, out_dir)?,
        Mode::Qaoa => run_qaoa(&doc, config, out_dir)?,
        Mode::End2end => run_end2end(&doc, config, out_dir)?,
    };

    let mut resolved = config.clone();
    resolved.mode = Some(mode);
    resolved.output = Some(out_dir.to_string_lossy().into_owned());
    let mut versions = BTreeMap::new();
    versions.insert("qcl-cli".to_string(), env!("CARGO_PKG_VERSION").to_string());
    let manifest = Manifest {
        mode,
        config: resolved,
        seed: config.seed,
        versions,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        outputs: outputs.clone(),
    };
    let manifest_value = serde_json::to_value(&manifest)
        .map_err(|e| CliError::io(format!("cannot serialize manifest: {e}")))?;
    write_json(out_dir, "manifest.json", &manifest_value)?;

    Ok(outputs)
}

fn run_validate(
    doc: &ProblemDocument,
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<Vec<String>, CliError> {
    let tols = &config.tolerances;
    let bench = Workbench::assemble(doc, tols)?;
    let family_verdict = check_mixing_family(&bench.family, &bench.subspace, tols)?;
    let ps_verdict = check_phase_separator(
        &objective_hamiltonian(&bench.cop),
        &bench.subspace,
        &bench.report.optimal_indices,
        tols,
    )?;

    // Optional seeded robustness probes: random diagonal perturbations
    // must never break irreducibility (diagonal terms add no edges).
    let mut random_passed = 0usize;
    if config.random_checks > 0 && bench.sum_verdict.irreducible {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for _ in 0..config.random_checks {
            let mut perturbed = bench.b_restricted.matrix.clone();
            for i in 0..perturbed.rows() {
                let shift: f64 = rng.gen_range(-2.0..2.0);
                let cur = perturbed.get(i, i);
                perturbed.set(i, i, cur + C64::new(shift, 0.0));
            }
            let full = embed_on_subspace(&perturbed, &bench.subspace);
            let verdict = check_mixer(&full, &bench.subspace, tols)?;
            if verdict.irreducible {
                random_passed += 1;
            }
        }
    }

    let all_valid = family_verdict.is_mixing_family()
        && bench.sum_verdict.all_true()
        && ps_verdict.is_valid();
    let value = json!({
        "problem": {
            "n": bench.cop.n(),
            "dim_s": bench.subspace.dim_s(),
            "f_max": bench.report.f_max,
            "optimal_indices": bench.report.optimal_indices,
        },
        "mixer": verdict_json(&bench.sum_verdict),
        "family": {
            "member_feasibility_preserving": family_verdict.member_feasibility_preserving,
            "member_entrywise_nonneg": family_verdict.member_entrywise_nonneg,
            "jointly_irreducible": family_verdict.jointly_irreducible,
            "union_components": family_verdict.union_components,
            "is_mixing_family": family_verdict.is_mixing_family(),
        },
        "phase_separator": {
            "diagonal": ps_verdict.diagonal,
            "max_off_diagonal": ps_verdict.max_off_diagonal,
            "argmax_matches_optimal": ps_verdict.argmax_matches_optimal,
        },
        "random_diagonal_checks": {
            "requested": config.random_checks,
            "passed": random_passed,
        },
        "all_valid": all_valid,
    });
    write_json(out_dir, "verdict.json", &value)?;
    println!(
        "validate: mixer all-true = {}, mixing family = {}, phase separator = {}",
        bench.sum_verdict.all_true(),
        family_verdict.is_mixing_family(),
        ps_verdict.is_valid()
    );
    Ok(vec!["verdict.json".to_string()])
}

fn embed_on_subspace(
    block: &qcl_core::linalg::ComplexMatrix,
    s: &FeasibleSubspace,
) -> qcl_core::linalg::ComplexMatrix {
    let dim = 1usize << s.n();
    let mut full = qcl_core::linalg::ComplexMatrix::zeros(dim, dim);
    for (a, &ia) in s.basis_indices().iter().enumerate() {
        for (b, &ib) in s.basis_indices().iter().enumerate() {
            full.set(ia, ib, block.get(a, b));
        }
    }
    full
}

fn run_spectrum(
    doc: &ProblemDocument,
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<Vec<String>, CliError> {
    let tols = &config.tolerances;
    let bench = Workbench::assemble(doc, tols)?;
    bench.require_valid_mixer()?;

    let spec = if config.shift {
        InterpolationSpec::with_auto_shift(bench.b_restricted.clone(), bench.c_restricted.clone())?
    } else {
        InterpolationSpec::new(bench.b_restricted.clone(), bench.c_restricted.clone(), 0.0)?
    };
    let curve = sweep_spectrum(&spec, config.grid_points, tols)?;

    let dim = spec.dim();
    let mut header = vec!["t".to_string()];
    header.extend((1..=dim).map(|k| format!("lambda_{k}")));
    header.push("gap".to_string());
    let rows: Vec<Vec<f64>> = curve
        .grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut row = Vec::with_capacity(dim + 2);
            row.push(t);
            row.extend(curve.levels[i].iter().copied());
            row.push(curve.gap[i]);
            row
        })
        .collect();
    write_csv(out_dir, "spectrum.csv", &header, &rows)?;

    let summary = json!({
        "dim_s": dim,
        "min_gap_before_one": curve.min_gap_before_one(),
        "gap_at_one": curve.gap_at_one(),
        "degenerate_optimum": spec.optimal_positions().len() > 1,
        "min_overlap": curve.min_overlap(),
        "grid_points": curve.grid.len(),
    });
    write_json(out_dir, "spectrum_summary.json", &summary)?;
    println!(
        "spectrum: {} grid points, min gap before 1 = {:.3e}, gap(1) = {:.3e}",
        curve.grid.len(),
        curve.min_gap_before_one(),
        curve.gap_at_one()
    );
    Ok(vec![
        "spectrum.csv".to_string(),
        "spectrum_summary.json".to_string(),
    ])
}

fn run_anneal(
    doc: &ProblemDocument,
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<Vec<String>, CliError> {
    let tols = &config.tolerances;
    let bench = Workbench::assemble(doc, tols)?;
    bench.require_valid_mixer()?;

    let spec =
        InterpolationSpec::with_auto_shift(bench.b_restricted.clone(), bench.c_restricted.clone())?;
    let perron = perron_top_eigenstate(&bench.b_restricted, &bench.sum_verdict, tols)?;
    let points = adiabatic::convergence_sweep(&spec, &perron.vector, &config.t_list)?;

    let header: Vec<String> = ["T", "steps", "dist_to_opt", "unitarity_defect"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| vec![p.t_total, p.steps as f64, p.dist_to_opt, p.unitarity_defect])
        .collect();
    write_csv(out_dir, "anneal.csv", &header, &rows)?;

    let converged = adiabatic::sweep_converged(&points, config.epsilon);
    let summary = json!({
        "epsilon": config.epsilon,
        "converged": converged,
        "final_dist": points.last().map(|p| p.dist_to_opt),
    });
    write_json(out_dir, "anneal_summary.json", &summary)?;
    println!(
        "anneal: {} sweep points, final dist = {:.6}, converged(eps={}) = {}",
        points.len(),
        points.last().map(|p| p.dist_to_opt).unwrap_or(f64::NAN),
        config.epsilon,
        converged
    );
    Ok(vec![
        "anneal.csv".to_string(),
        "anneal_summary.json".to_string(),
    ])
}

fn run_qaoa(
    doc: &ProblemDocument,
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<Vec<String>, CliError> {
    let tols = &config.tolerances;
    let bench = Workbench::assemble(doc, tols)?;
    bench.require_valid_mixer()?;

    let spec =
        InterpolationSpec::with_auto_shift(bench.b_restricted.clone(), bench.c_restricted.clone())?;
    let reports = qaoa::trotter_convergence(
        &spec,
        &bench.family,
        bench.kind,
        config.t,
        config.m,
        &config.n_list,
        tols,
    )?;

    let header: Vec<String> = [
        "n",
        "max_block_error",
        "discretization_error",
        "total_error",
        "dist_to_opt",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let rows: Vec<Vec<f64>> = reports
        .iter()
        .map(|r| {
            vec![
                r.slices as f64,
                r.max_block_error,
                r.discretization_error,
                r.total_error,
                r.dist_to_opt,
            ]
        })
        .collect();
    write_csv(out_dir, "trotter.csv", &header, &rows)?;

    let summary = json!({
        "t": config.t,
        "m": config.m,
        "mixer_kind": bench.kind,
        "composition_bound_holds": reports.iter().all(|r| r.composition_bound_holds),
        "final_dist": reports.last().map(|r| r.dist_to_opt),
    });
    write_json(out_dir, "trotter_summary.json", &summary)?;
    println!(
        "qaoa: T = {}, m = {}, n swept over {:?}; final dist = {:.6}",
        config.t,
        config.m,
        config.n_list,
        reports.last().map(|r| r.dist_to_opt).unwrap_or(f64::NAN)
    );
    Ok(vec![
        "trotter.csv".to_string(),
        "trotter_summary.json".to_string(),
    ])
}

fn run_end2end(
    doc: &ProblemDocument,
    config: &ExperimentConfig,
    out_dir: &Path,
) -> Result<Vec<String>, CliError> {
    let tols = &config.tolerances;
    match qaoa::end_to_end(doc, config.epsilon, config.caps, tols) {
        Ok(result) => {
            let value = json!({
                "epsilon": config.epsilon,
                "t_total": result.t_total,
                "m": result.blocks,
                "n": result.slices,
                "dist_to_opt": result.dist_to_opt,
                "evaluations": result.evaluations,
                "schedule": result.schedule,
            });
            write_json(out_dir, "witness.json", &value)?;
            println!(
                "end2end: dist {:.6} < {} with T = {}, m = {}, n = {} ({} evaluations)",
                result.dist_to_opt,
                config.epsilon,
                result.t_total,
                result.blocks,
                result.slices,
                result.evaluations
            );
            Ok(vec!["witness.json".to_string()])
        }
        Err(CoreError::BudgetExhausted {
            best_dist,
            t_cap,
            m_cap,
            n_cap,
        }) => {
            // Budget exhaustion is a reportable outcome, not silence:
            // record the best distance, then exit 4.
            let value = json!({
                "epsilon": config.epsilon,
                "best_dist": best_dist,
                "caps": { "t_cap": t_cap, "m_cap": m_cap, "n_cap": n_cap },
            });
            write_json(out_dir, "budget_exhausted.json", &value)?;
            Err(CoreError::BudgetExhausted {
                best_dist,
                t_cap,
                m_cap,
                n_cap,
            }
            .into())
        }
        Err(other) => Err(other.into()),
    }
}
