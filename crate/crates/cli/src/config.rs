//! Experiment configuration: a JSON file naming the problem (inline or by
//! path), the mode it is meant for, and the numeric knobs of each mode.

use serde::{Deserialize, Serialize};
use std::path::Path;

use qcl_core::doc::ProblemDocument;
use qcl_core::qaoa::BudgetCaps;
use qcl_core::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Validate,
    Spectrum,
    Anneal,
    Qaoa,
    End2end,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Mode::Validate => "validate",
            Mode::Spectrum => "spectrum",
            Mode::Anneal => "anneal",
            Mode::Qaoa => "qaoa",
            Mode::End2end => "end2end",
        };
        write!(f, "{name}")
    }
}

/// The problem may be given inline or as a path to a document file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemRef {
    Path(String),
    Inline(ProblemDocument),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Option<ProblemRef>,
    /// Mode the config was written for; must match the subcommand when set.
    pub mode: Option<Mode>,
    /// Spectrum: number of uniform grid points.
    pub grid_points: usize,
    /// Spectrum: apply the non-negativity shift to C (default off for pure
    /// spectrum plots; anneal/qaoa/end2end always shift).
    pub shift: bool,
    /// Qaoa: total evolution time.
    pub t: f64,
    /// Anneal: evolution times swept.
    pub t_list: Vec<f64>,
    /// Qaoa: number of discretization blocks.
    pub m: usize,
    /// Qaoa: slices per block, swept.
    pub n_list: Vec<usize>,
    /// Anneal/end2end: target distance.
    pub epsilon: f64,
    /// End2end escalation caps.
    pub caps: BudgetCaps,
    /// Validate: number of seeded random diagonal-perturbation
    /// irreducibility checks to run on the summed mixer.
    pub random_checks: usize,
    /// Output directory; overridden by --out, defaulted by QCL_OUT_DIR.
    pub output: Option<String>,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: None,
            mode: None,
            grid_points: 201,
            shift: false,
            t: 20.0,
            t_list: vec![1.0, 5.0, 10.0, 20.0, 50.0],
            m: 20,
            n_list: vec![2, 4, 8, 16],
            epsilon: 0.1,
            caps: BudgetCaps::default(),
            random_checks: 0,
            output: None,
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::from_json(&text)
    }

    /// Resolves the problem reference to an inline document (reading the
    /// referenced file when needed) relative to `base`.
    pub fn resolve_problem(&mut self, base: &Path) -> Result<ProblemDocument, String> {
        let doc = match self.problem.take() {
            None => return Err("config has no problem".into()),
            Some(ProblemRef::Inline(doc)) => doc,
            Some(ProblemRef::Path(rel)) => {
                let path = if Path::new(&rel).is_absolute() {
                    std::path::PathBuf::from(&rel)
                } else {
                    base.join(&rel)
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read problem {}: {e}", path.display()))?;
                ProblemDocument::from_json(&text).map_err(|e| e.to_string())?
            }
        };
        self.problem = Some(ProblemRef::Inline(doc.clone()));
        Ok(doc)
    }
}
