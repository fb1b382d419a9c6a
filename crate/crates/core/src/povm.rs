//! Effects, discrete POVMs and their validation.

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{commutator, ComplexMatrix, HermitianOperator};
use crate::spectral::spectral_decompose;

/// Outcome of [`validate_effect`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectReport {
    pub ok: bool,
    pub min_eig: f64,
    pub max_eig: f64,
    pub hermiticity_defect: f64,
}

/// Checks `0 <= M <= 1` up to `tol.psd` on both ends of the spectrum.
pub fn validate_effect(m: &HermitianOperator, cfg: &Config) -> Result<EffectReport> {
    let sd = spectral_decompose(m, cfg)?;
    let (min_eig, max_eig) = (sd.min(), sd.max());
    Ok(EffectReport {
        ok: min_eig >= -cfg.tol.psd && max_eig <= 1.0 + cfg.tol.psd,
        min_eig,
        max_eig,
        hermiticity_defect: m.hermiticity_defect(),
    })
}

/// A Hermitian operator with spectrum in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    operator: HermitianOperator,
    eigen_range: (f64, f64),
}

impl Effect {
    pub fn new(operator: HermitianOperator, cfg: &Config) -> Result<Self> {
        let report = validate_effect(&operator, cfg)?;
        if !report.ok {
            return Err(Error::InvalidEffect {
                min_eig: report.min_eig,
                max_eig: report.max_eig,
            });
        }
        Ok(Self {
            operator,
            eigen_range: (report.min_eig, report.max_eig),
        })
    }

    pub fn from_matrix(m: ComplexMatrix, cfg: &Config) -> Result<Self> {
        Self::new(HermitianOperator::new(m, cfg)?, cfg)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.operator.matrix()
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn eigen_range(&self) -> (f64, f64) {
        self.eigen_range
    }

    /// `1 - A`, again an effect.
    pub fn complement(&self) -> Self {
        Self {
            operator: self.operator.complement(),
            eigen_range: (1.0 - self.eigen_range.1, 1.0 - self.eigen_range.0),
        }
    }
}

/// Per-outcome line of a [`PovmReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeReport {
    pub label: String,
    pub ok: bool,
    pub min_eig: f64,
    pub max_eig: f64,
    pub hermiticity_defect: f64,
}

/// Outcome of [`validate_povm`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PovmReport {
    pub ok: bool,
    /// Max entrywise |sum_i F_i - 1|.
    pub sum_defect: f64,
    pub outcomes: Vec<OutcomeReport>,
}

/// Validates a labeled family of operators as a POVM.
///
/// Mixed dimensions are a structural error; everything else lands in the report.
pub fn validate_povm(outcomes: &[(String, HermitianOperator)], cfg: &Config) -> Result<PovmReport> {
    let Some((_, first)) = outcomes.first() else {
        return Err(Error::InvalidPovm("a POVM needs at least one outcome".into()));
    };
    let dim = first.dim();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    let mut lines = Vec::with_capacity(outcomes.len());
    for (label, op) in outcomes {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: op.dim(),
            });
        }
        let r = validate_effect(op, cfg)?;
        sum.add_scaled(op.matrix(), 1.0);
        lines.push(OutcomeReport {
            label: label.clone(),
            ok: r.ok,
            min_eig: r.min_eig,
            max_eig: r.max_eig,
            hermiticity_defect: r.hermiticity_defect,
        });
    }
    let sum_defect = sum.max_diff(&ComplexMatrix::identity(dim));
    Ok(PovmReport {
        ok: sum_defect <= cfg.tol.sum && lines.iter().all(|l| l.ok),
        sum_defect,
        outcomes: lines,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub label: String,
    pub effect: Effect,
}

/// Finite-outcome POVM: effects on one space summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePovm {
    space_dim: usize,
    outcomes: Vec<Outcome>,
}

impl DiscretePovm {
    pub fn new(outcomes: Vec<(String, HermitianOperator)>, cfg: &Config) -> Result<Self> {
        let report = validate_povm(&outcomes, cfg)?;
        if !report.ok {
            let bad: Vec<&str> = report
                .outcomes
                .iter()
                .filter(|l| !l.ok)
                .map(|l| l.label.as_str())
                .collect();
            return Err(Error::InvalidPovm(format!(
                "sum defect {:e}, invalid effects {:?}",
                report.sum_defect, bad
            )));
        }
        let space_dim = outcomes[0].1.dim();
        let outcomes = outcomes
            .into_iter()
            .zip(report.outcomes)
            .map(|((label, operator), line)| Outcome {
                label,
                effect: Effect {
                    operator,
                    eigen_range: (line.min_eig, line.max_eig),
                },
            })
            .collect();
        Ok(Self {
            space_dim,
            outcomes,
        })
    }

    /// Labels outcomes "0", "1", ... in order.
    pub fn from_operators(ops: Vec<HermitianOperator>, cfg: &Config) -> Result<Self> {
        Self::new(
            ops.into_iter().enumerate().map(|(i, op)| (i.to_string(), op)).collect(),
            cfg,
        )
    }

    /// The single-outcome POVM `{1}`.
    pub fn trivial(dim: usize) -> Self {
        Self {
            space_dim: dim,
            outcomes: vec![Outcome {
                label: "1".into(),
                effect: Effect {
                    operator: HermitianOperator::identity(dim),
                    eigen_range: (1.0, 1.0),
                },
            }],
        }
    }

    /// `{A, 1 - A}` with labels "1" and "0".
    pub fn dichotomic(a: &Effect) -> Self {
        Self {
            space_dim: a.dim(),
            outcomes: vec![
                Outcome {
                    label: "1".into(),
                    effect: a.clone(),
                },
                Outcome {
                    label: "0".into(),
                    effect: a.complement(),
                },
            ],
        }
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn effect(&self, i: usize) -> &HermitianOperator {
        self.outcomes[i].effect.operator()
    }

    pub fn effects(&self) -> impl Iterator<Item = &HermitianOperator> {
        self.outcomes.iter().map(|o| o.effect.operator())
    }

    pub fn labels(&self) -> Vec<&str> {
        self.outcomes.iter().map(|o| o.label.as_str()).collect()
    }

    /// Outcome labels read as real values; duplicates or unparsable labels are errors.
    pub fn numeric_labels(&self) -> Result<Vec<f64>> {
        let mut xs = Vec::with_capacity(self.len());
        for o in &self.outcomes {
            let x: f64 = o
                .label
                .trim()
                .parse()
                .map_err(|_| Error::Labeling(format!("label {:?} is not a number", o.label)))?;
            if !x.is_finite() {
                return Err(Error::Labeling(format!("label {:?} is not finite", o.label)));
            }
            if let Some(prev) = xs.iter().position(|&y| y == x) {
                return Err(Error::Labeling(format!(
                    "outcomes {:?} and {:?} share the value {x}",
                    self.outcomes[prev].label, o.label
                )));
            }
            xs.push(x);
        }
        Ok(xs)
    }

    /// Same effects under new labels.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Labeling(format!(
                "{} labels for {} outcomes",
                labels.len(),
                self.len()
            )));
        }
        Ok(Self {
            space_dim: self.space_dim,
            outcomes: self
                .outcomes
                .iter()
                .zip(labels)
                .map(|(o, label)| Outcome {
                    label,
                    effect: o.effect.clone(),
                })
                .collect(),
        })
    }

    /// `sum_i w_i F_i`.
    pub fn weighted_sum(&self, weights: &[f64]) -> HermitianOperator {
        assert_eq!(weights.len(), self.len(), "one weight per outcome");
        HermitianOperator::combination(self.space_dim, weights.iter().copied().zip(self.effects()))
    }

    /// Max entrywise distance between matching effects; `None` if outcome counts differ.
    pub fn max_effect_diff(&self, other: &Self) -> Option<f64> {
        (self.len() == other.len() && self.space_dim == other.space_dim).then(|| {
            self.effects()
                .zip(other.effects())
                .map(|(a, b)| a.matrix().max_diff(b.matrix()))
                .fold(0.0, f64::max)
        })
    }
}

/// Result of [`is_pvm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PvmReport {
    pub is_pvm: bool,
    /// max_i |F_i^2 - F_i|
    pub idempotency_defect: f64,
    /// max_{i != j} |F_i F_j|
    pub orthogonality_defect: f64,
}

/// Projectivity test: idempotent and mutually orthogonal effects.
pub fn is_pvm(f: &DiscretePovm, cfg: &Config) -> PvmReport {
    let ops: Vec<&ComplexMatrix> = f.effects().map(|e| e.matrix()).collect();
    let mut idem = 0.0f64;
    let mut orth = 0.0f64;
    for (i, a) in ops.iter().enumerate() {
        idem = idem.max((*a * *a).max_diff(a));
        for b in &ops[i + 1..] {
            orth = orth.max((*a * *b).max_abs());
        }
    }
    PvmReport {
        is_pvm: idem <= cfg.tol.reconstruct && orth <= cfg.tol.reconstruct,
        idempotency_defect: idem,
        orthogonality_defect: orth,
    }
}

/// Max commutator entry over all pairs (F1_i, F2_j).
pub fn max_commutation_defect(f1: &DiscretePovm, f2: &DiscretePovm) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in f1.effects() {
        for b in f2.effects() {
            worst = worst.max(commutator(a.matrix(), b.matrix())?.max_abs());
        }
    }
    Ok(worst)
}

/// Spectral PVM of a Hermitian operator: one projector per distinct eigenvalue
/// (eigenvalues within `tol.grouping` merge), labeled by that eigenvalue.
pub fn spectral_pvm(a: &HermitianOperator, cfg: &Config) -> Result<(DiscretePovm, Vec<f64>)> {
    let sd = spectral_decompose(a, cfg)?;
    let dim = a.dim();
    let mut outcomes = Vec::new();
    let mut values = Vec::new();
    for (value, idx) in sd.clusters(cfg.tol.grouping) {
        let mut proj = ComplexMatrix::zeros(dim, dim);
        for k in idx {
            proj.add_scaled(&ComplexMatrix::outer(&sd.eigenvector(k)), 1.0);
        }
        let operator = HermitianOperator::hermitian_part(proj);
        outcomes.push(Outcome {
            label: format_label(value),
            effect: Effect {
                operator,
                eigen_range: (0.0, 1.0),
            },
        });
        values.push(value);
    }
    Ok((
        DiscretePovm {
            space_dim: dim,
            outcomes,
        },
        values,
    ))
}

/// Shortest decimal string that parses back to exactly `x`.
pub fn format_label(x: f64) -> String {
    format!("{x}")
}
