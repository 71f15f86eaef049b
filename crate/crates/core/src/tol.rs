//! Numerical tolerances used across the crate.
//!
//! Every threshold is a named constant here rather than an inline magic
//! number; [`Tolerances`] bundles the configurable subset so that callers
//! (and the CLI's `--tol NAME=VALUE` flag) can override them per run.

use serde::{Deserialize, Serialize};

/// Max-norm tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Operator-norm tolerance for accepting a matrix as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Relative residual allowed when reconstructing `A` from its eigensystem.
pub const EIG_RESIDUAL_TOL: f64 = 1e-9;

/// Relative eigenvalue gap below which neighbouring eigenvalues are treated
/// as one degenerate cluster (also the Perron non-degeneracy threshold).
pub const DEGENERATE_GAP_TOL: f64 = 1e-9;

/// Operator-norm tolerance on `P² − P` for accepting `P` as a projection.
pub const PROJECTION_TOL: f64 = 1e-10;

/// Magnitude below which a matrix entry counts as zero: graph edges,
/// leakage out of the feasible block, off-diagonal content, and the slack
/// allowed on the non-negativity check.
pub const ZERO_ENTRY_TOL: f64 = 1e-12;

/// Tolerance for selecting the argmax set of a diagonal, relative to the
/// spread of its entries.
pub const ARGMAX_REL_TOL: f64 = 1e-9;

/// Minimum overlap between consecutive tracked eigenvectors before grid
/// refinement is triggered.
pub const OVERLAP_MIN: f64 = 0.9;

/// Absolute tolerance for resolving ties in brute-force objective maxima.
pub const TIE_ABS_TOL: f64 = 1e-12;

/// Required weight of the tracked limit vector inside the optimal
/// coordinate span.
pub const MEMBERSHIP_TOL: f64 = 1e-6;

/// Step-doubling (Richardson) agreement required of an integration.
pub const RICHARDSON_TOL: f64 = 1e-6;

/// Largest norm drift accepted over a propagated run.
pub const UNITARITY_DEFECT_TOL: f64 = 1e-8;

/// Configurable tolerance bundle, defaulting to the module constants above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub hermitian: f64,
    pub unitary: f64,
    pub eig_residual: f64,
    pub degenerate_gap: f64,
    pub projection: f64,
    pub zero_entry: f64,
    pub argmax_rel: f64,
    pub overlap_min: f64,
    pub tie_abs: f64,
    pub membership: f64,
    pub richardson: f64,
    pub unitarity_defect: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN_TOL,
            unitary: UNITARY_TOL,
            eig_residual: EIG_RESIDUAL_TOL,
            degenerate_gap: DEGENERATE_GAP_TOL,
            projection: PROJECTION_TOL,
            zero_entry: ZERO_ENTRY_TOL,
            argmax_rel: ARGMAX_REL_TOL,
            overlap_min: OVERLAP_MIN,
            tie_abs: TIE_ABS_TOL,
            membership: MEMBERSHIP_TOL,
            richardson: RICHARDSON_TOL,
            unitarity_defect: UNITARITY_DEFECT_TOL,
        }
    }
}

impl Tolerances {
    /// Sets the field named `name` to `value`. Names match the struct
    /// fields (`zero_entry`, `overlap_min`, ...).
    pub fn set_by_name(&mut self, name: &str, value: f64) -> Result<(), String> {
        match name {
            "hermitian" => self.hermitian = value,
            "unitary" => self.unitary = value,
            "eig_residual" => self.eig_residual = value,
            "degenerate_gap" => self.degenerate_gap = value,
            "projection" => self.projection = value,
            "zero_entry" => self.zero_entry = value,
            "argmax_rel" => self.argmax_rel = value,
            "overlap_min" => self.overlap_min = value,
            "tie_abs" => self.tie_abs = value,
            "membership" => self.membership = value,
            "richardson" => self.richardson = value,
            "unitarity_defect" => self.unitarity_defect = value,
            _ => return Err(format!("unknown tolerance name: {name}")),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_constants() {
        let t = Tolerances::default();
        assert_eq!(t.zero_entry, ZERO_ENTRY_TOL);
        assert_eq!(t.overlap_min, OVERLAP_MIN);
    }

    #[test]
    fn set_by_name_roundtrip() {
        let mut t = Tolerances::default();
        t.set_by_name("zero_entry", 1e-10).unwrap();
        assert_eq!(t.zero_entry, 1e-10);
        assert!(t.set_by_name("no_such_tol", 1.0).is_err());
    }
}
