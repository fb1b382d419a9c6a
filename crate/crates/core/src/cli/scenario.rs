//! Scenario files: the JSON documents read by `jointmeas run`.
//!
//! Complex entries are `[re, im]` pairs and matrices are arrays of rows.
//! Every struct rejects unknown fields, so a typo is an input error rather
//! than a silently ignored setting. The full format is described in
//! `docs/scenario-format.md`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::compat::JointPovm;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, HermitianOperator};
use crate::phasespace::MomentLabels;
use crate::povm::{DiscretePovm, Effect};
use crate::smearing::MarkovKernel;

/// The only scenario format version understood by this build.
pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Validate,
    Dilate,
    JmTest,
    EffectTest,
    Smear,
    SharpVersion,
    PhasespaceDemo,
    RoundtripCns,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Validate => "validate",
            Task::Dilate => "dilate",
            Task::JmTest => "jm-test",
            Task::EffectTest => "effect-test",
            Task::Smear => "smear",
            Task::SharpVersion => "sharp-version",
            Task::PhasespaceDemo => "phasespace-demo",
            Task::RoundtripCns => "roundtrip-cns",
        }
    }
}

/// Rows of `[re, im]` pairs.
pub type MatrixData = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledMatrix {
    pub label: String,
    pub matrix: MatrixData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Operand {
    Matrix {
        matrix: MatrixData,
    },
    Effect {
        matrix: MatrixData,
    },
    Povm {
        outcomes: Vec<LabeledMatrix>,
    },
    Kernel {
        rows: Vec<Vec<f64>>,
    },
    Joint {
        labels1: Vec<String>,
        labels2: Vec<String>,
        /// `grid[i][j]` is the effect for outcome pair `(labels1[i], labels2[j])`.
        grid: Vec<Vec<MatrixData>>,
    },
}

/// Which verdict decides the exit code of `effect-test`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Requirement {
    #[default]
    Compatible,
    Proposition,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu1: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu2: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<MomentLabels>,
    /// phasespace-demo: run the feasibility test on the marginal pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasibility: Option<bool>,
    /// phasespace-demo: number of random displacements in the covariance check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub require: Option<Requirement>,
    /// roundtrip-cns without a `joint` operand: grid shape of the random joint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feas_max_iter: Option<usize>,
    /// Tolerance overrides by name, applied before command-line overrides.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tol: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub operands: BTreeMap<String, Operand>,
    #[serde(default)]
    pub params: Params,
}

impl Scenario {
    pub fn new(task: Task) -> Self {
        Self {
            version: SCENARIO_VERSION,
            task,
            description: None,
            operands: BTreeMap::new(),
            params: Params::default(),
        }
    }

    pub fn describe(mut self, text: &str) -> Self {
        self.description = Some(text.into());
        self
    }

    pub fn with(mut self, name: &str, operand: Operand) -> Self {
        self.operands.insert(name.into(), operand);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("scenario: {e}")))?;
        s.check()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        super::json::to_pretty(self)
    }

    /// Structural checks that do not need a [`Config`].
    pub fn check(&self) -> Result<()> {
        if self.version != SCENARIO_VERSION {
            return Err(Error::InvalidParameter(format!(
                "scenario version {} (this build reads version {SCENARIO_VERSION})",
                self.version
            )));
        }
        for (name, op) in &self.operands {
            op.check().map_err(|e| Error::InvalidParameter(format!("operand {name:?}: {e}")))?;
        }
        Ok(())
    }

    /// Default config with the scenario's own tolerance overrides applied.
    pub fn config(&self, seed: u64) -> Result<Config> {
        let mut cfg = Config::with_seed(seed);
        for (k, v) in &self.params.tol {
            cfg.tol.set(k, *v)?;
        }
        if let Some(n) = self.params.feas_max_iter {
            if n == 0 {
                return Err(Error::InvalidParameter("feas_max_iter must be positive".into()));
            }
            cfg.feas_max_iter = n;
        }
        Ok(cfg)
    }

    pub fn operand(&self, name: &str) -> Result<&Operand> {
        self.operands
            .get(name)
            .ok_or_else(|| Error::InvalidParameter(format!("{} needs an operand named {name:?}", self.task.name())))
    }
}

fn check_matrix(m: &MatrixData) -> Result<()> {
    let cols = m.first().map_or(0, Vec::len);
    if cols == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if let Some(r) = m.iter().position(|row| row.len() != cols) {
        return Err(Error::InvalidParameter(format!("row {r} has {} entries, expected {cols}", m[r].len())));
    }
    Ok(())
}

impl Operand {
    pub fn kind(&self) -> &'static str {
        match self {
            Operand::Matrix { .. } => "matrix",
            Operand::Effect { .. } => "effect",
            Operand::Povm { .. } => "povm",
            Operand::Kernel { .. } => "kernel",
            Operand::Joint { .. } => "joint",
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            Operand::Matrix { matrix } | Operand::Effect { matrix } => check_matrix(matrix),
            Operand::Povm { outcomes } => {
                if outcomes.is_empty() {
                    return Err(Error::InvalidParameter("POVM without outcomes".into()));
                }
                outcomes.iter().try_for_each(|o| check_matrix(&o.matrix))
            }
            Operand::Kernel { rows } => {
                if rows.is_empty() {
                    return Err(Error::InvalidParameter("kernel without rows".into()));
                }
                Ok(())
            }
            Operand::Joint { labels1, labels2, grid } => {
                if grid.len() != labels1.len() || grid.iter().any(|row| row.len() != labels2.len()) {
                    return Err(Error::InvalidParameter(format!(
                        "grid shape does not match {}x{} labels",
                        labels1.len(),
                        labels2.len()
                    )));
                }
                grid.iter().flatten().try_for_each(check_matrix)
            }
        }
    }

    pub fn from_matrix(m: &ComplexMatrix) -> MatrixData {
        (0..m.rows()).map(|r| (0..m.cols()).map(|k| [m[(r, k)].re, m[(r, k)].im]).collect()).collect()
    }

    pub fn from_povm(f: &DiscretePovm) -> Self {
        Operand::Povm {
            outcomes: f
                .outcomes()
                .iter()
                .map(|o| LabeledMatrix {
                    label: o.label.clone(),
                    matrix: Self::from_matrix(o.effect.matrix()),
                })
                .collect(),
        }
    }

    pub fn from_effect(a: &HermitianOperator) -> Self {
        Operand::Effect {
            matrix: Self::from_matrix(a.matrix()),
        }
    }

    pub fn from_joint(j: &JointPovm) -> Self {
        let (n1, n2) = j.shape();
        Operand::Joint {
            labels1: j.labels1().to_vec(),
            labels2: j.labels2().to_vec(),
            grid: (0..n1).map(|i| (0..n2).map(|k| Self::from_matrix(j.get(i, k).matrix())).collect()).collect(),
        }
    }

    pub fn from_kernel(mu: &MarkovKernel) -> Self {
        Operand::Kernel {
            rows: mu.weights().to_vec(),
        }
    }

    fn wrong_kind(&self, wanted: &str) -> Error {
        Error::InvalidParameter(format!("expected a {wanted} operand, found {}", self.kind()))
    }

    /// The entries as given, Hermitian or not.
    pub fn raw_matrix(&self) -> Result<ComplexMatrix> {
        match self {
            Operand::Matrix { matrix } | Operand::Effect { matrix } => to_matrix(matrix),
            other => Err(other.wrong_kind("matrix")),
        }
    }

    pub fn hermitian(&self, cfg: &Config) -> Result<HermitianOperator> {
        HermitianOperator::new(self.raw_matrix()?, cfg)
    }

    pub fn effect(&self, cfg: &Config) -> Result<Effect> {
        Effect::new(self.hermitian(cfg)?, cfg)
    }

    /// A POVM operand, or an effect `A` read as the two-outcome POVM `{A, 1 - A}`.
    pub fn povm(&self, cfg: &Config) -> Result<DiscretePovm> {
        match self {
            Operand::Povm { outcomes } => {
                let ops = outcomes
                    .iter()
                    .map(|o| Ok((o.label.clone(), HermitianOperator::new(to_matrix(&o.matrix)?, cfg)?)))
                    .collect::<Result<Vec<_>>>()?;
                DiscretePovm::new(ops, cfg)
            }
            Operand::Effect { .. } => Ok(DiscretePovm::dichotomic(&self.effect(cfg)?)),
            other => Err(other.wrong_kind("povm")),
        }
    }

    pub fn kernel(&self) -> Result<MarkovKernel> {
        match self {
            Operand::Kernel { rows } => MarkovKernel::new(rows.clone()),
            other => Err(other.wrong_kind("kernel")),
        }
    }

    pub fn joint(&self, cfg: &Config) -> Result<JointPovm> {
        match self {
            Operand::Joint { labels1, labels2, grid } => {
                let ops = grid
                    .iter()
                    .flatten()
                    .map(|m| HermitianOperator::new(to_matrix(m)?, cfg))
                    .collect::<Result<Vec<_>>>()?;
                JointPovm::new(labels1.clone(), labels2.clone(), ops, cfg)
            }
            other => Err(other.wrong_kind("joint")),
        }
    }
}

pub fn to_matrix(m: &MatrixData) -> Result<ComplexMatrix> {
    check_matrix(m)?;
    let rows = m.len();
    let cols = m[0].len();
    ComplexMatrix::from_vec(rows, cols, m.iter().flatten().map(|z| c(z[0], z[1])).collect())
}
