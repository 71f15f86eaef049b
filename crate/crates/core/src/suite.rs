//! Built-in problem/mixer instances used by the spectral and convergence
//! test batteries: constrained and unconstrained cases, covering both a
//! unique optimum (gap open at t = 1) and degenerate optima (gap closed
//! at t = 1).

use crate::doc::ProblemDocument;
use crate::error::Result;
use crate::hamiltonians::{
    mixing_family_from_doc, objective_hamiltonian, restrict, FeasibleSubspace, MixingFamily,
};
use crate::problems::{load_problem, solve_brute_force, Cop, SolutionReport};
use crate::qaoa::MixerKind;
use crate::spectral::InterpolationSpec;

/// One fully wired instance: document, problem, solution, subspace, mixer.
pub struct SuiteInstance {
    pub name: &'static str,
    pub doc: ProblemDocument,
    pub cop: Cop,
    pub report: SolutionReport,
    pub subspace: FeasibleSubspace,
    pub family: MixingFamily,
    pub kind: MixerKind,
    pub constrained: bool,
    pub degenerate_optimum: bool,
}

impl SuiteInstance {
    fn build(
        name: &'static str,
        json: &str,
        constrained: bool,
        degenerate_optimum: bool,
    ) -> Result<Self> {
        let doc = ProblemDocument::from_json(json)?;
        let cop = load_problem(&doc)?;
        let report = solve_brute_force(&cop)?;
        let subspace = FeasibleSubspace::from_report(cop.n(), &report);
        let family = mixing_family_from_doc(&doc)?;
        let kind = doc
            .mixer_kind
            .map(MixerKind::from)
            .unwrap_or(MixerKind::Simultaneous);
        Ok(Self {
            name,
            doc,
            cop,
            report,
            subspace,
            family,
            kind,
            constrained,
            degenerate_optimum,
        })
    }

    /// Auto-shifted interpolation between the summed mixer and the
    /// objective, both restricted to the feasible subspace.
    pub fn interpolation(&self) -> Result<InterpolationSpec> {
        let b = restrict(&self.family.sum(), &self.subspace)?;
        let c = restrict(&objective_hamiltonian(&self.cop), &self.subspace)?;
        InterpolationSpec::with_auto_shift(b, c)
    }
}

/// The built-in instance battery.
pub fn builtin_suite() -> Vec<SuiteInstance> {
    vec![
        SuiteInstance::build(
            "single_qubit_toy",
            r#"{"n":1,"objective":{"type":"table","values":[1,0]},
                "feasible":{"type":"all"},"mixer":{"type":"transverse_field"}}"#,
            false,
            false,
        )
        .expect("built-in instance"),
        SuiteInstance::build(
            "maxcut_4cycle",
            r#"{"n":4,"objective":{"type":"maxcut","edges":[[0,1],[1,2],[2,3],[3,0]]},
                "feasible":{"type":"all"},"mixer":{"type":"transverse_field"}}"#,
            false,
            true,
        )
        .expect("built-in instance"),
        SuiteInstance::build(
            "maxcut_triangle",
            r#"{"n":3,"objective":{"type":"maxcut","edges":[[0,1],[1,2],[0,2]]},
                "feasible":{"type":"all"},"mixer":{"type":"transverse_field"}}"#,
            false,
            true,
        )
        .expect("built-in instance"),
        SuiteInstance::build(
            "one_hot_unique",
            r#"{"n":3,"objective":{"type":"table","values":[0,1,2,0,3,0,0,0]},
                "feasible":{"type":"one_hot","groups":[[0,1,2]]},
                "mixer":{"type":"xy_onehot"}}"#,
            true,
            false,
        )
        .expect("built-in instance"),
        SuiteInstance::build(
            "one_hot_tied",
            r#"{"n":3,"objective":{"type":"table","values":[0,2,2,0,1,0,0,0]},
                "feasible":{"type":"one_hot","groups":[[0,1,2]]},
                "mixer":{"type":"xy_onehot"},"mixer_kind":"sequential"}"#,
            true,
            true,
        )
        .expect("built-in instance"),
    ]
}
