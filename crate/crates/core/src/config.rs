//! Numerical tolerances and iteration caps shared by every operation.
//!
//! Nothing in the library hard-codes a tolerance; each operation takes a
//! [`Config`] and reads the value it needs from here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Allowed negative (or above-one) eigenvalue slack for effects.
    pub psd: f64,
    /// Entrywise slack for "effects sum to the identity".
    pub sum: f64,
    /// Max |M - M^dagger| entry accepted as Hermitian.
    pub hermitian: f64,
    /// Orthonormality slack for eigenvectors and isometries.
    pub orth: f64,
    /// Entrywise slack when rebuilding an operator from its pieces.
    pub reconstruct: f64,
    /// Max commutator entry treated as commuting.
    pub commute: f64,
    /// Marginal mismatch accepted on an iteratively found joint.
    pub marginal: f64,
    /// Residual to both sets at which the feasibility iteration stops.
    pub feas: f64,
    /// Normalized separating gap needed to certify incompatibility.
    pub gap_threshold: f64,
    /// Probability rows closer than this are merged in sharp-version extraction.
    pub grouping: f64,
    /// Defect accepted when matching relabeled functions of a sharp version and a dilation.
    pub relabel: f64,
    /// Relative eigenvalue cutoff for null spaces (commutant computation).
    pub rank: f64,
    /// Max projector distance at which two subspaces count as equal.
    pub subspace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd: 1e-9,
            sum: 1e-9,
            hermitian: 1e-10,
            orth: 1e-9,
            reconstruct: 1e-9,
            commute: 1e-9,
            marginal: 1e-7,
            feas: 1e-8,
            gap_threshold: 1e-5,
            grouping: 1e-8,
            relabel: 1e-8,
            rank: 1e-9,
            subspace: 1e-6,
        }
    }
}

impl Tolerances {
    /// Overrides one tolerance by name, as given on the command line (`psd=1e-8`).
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance {key} must be a nonnegative number, got {value}"
            )));
        }
        let slot = match key {
            "psd" | "tol_psd" => &mut self.psd,
            "sum" | "tol_sum" => &mut self.sum,
            "hermitian" | "tol_hermitian" => &mut self.hermitian,
            "orth" | "tol_orth" => &mut self.orth,
            "reconstruct" | "tol_reconstruct" => &mut self.reconstruct,
            "commute" | "tol_commute" => &mut self.commute,
            "marginal" | "tol_marginal" => &mut self.marginal,
            "feas" | "tol_feas" => &mut self.feas,
            "gap_threshold" => &mut self.gap_threshold,
            "grouping" => &mut self.grouping,
            "relabel" => &mut self.relabel,
            "rank" => &mut self.rank,
            "subspace" => &mut self.subspace,
            _ => return Err(Error::InvalidParameter(format!("unknown tolerance {key:?}"))),
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub tol: Tolerances,
    /// Seed for every randomized internal step.
    pub seed: u64,
    /// Jacobi sweep cap.
    pub max_sweeps: usize,
    /// Relative off-diagonal Frobenius norm at which Jacobi stops.
    pub jacobi_target: f64,
    /// Iteration cap of the alternating-projection feasibility test.
    pub feas_max_iter: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            seed: 42,
            max_sweeps: 100,
            jacobi_target: 1e-12,
            feas_max_iter: 50_000,
        }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_by_name() {
        let mut t = Tolerances::default();
        t.set("tol_psd", 1e-6).unwrap();
        t.set("gap_threshold", 1e-4).unwrap();
        assert_eq!(t.psd, 1e-6);
        assert_eq!(t.gap_threshold, 1e-4);
        assert!(t.set("bogus", 1.0).is_err());
        assert!(t.set("psd", -1.0).is_err());
    }
}
