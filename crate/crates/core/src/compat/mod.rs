//! Joint observables and compatibility decisions.
//!
//! Two POVMs are compatible when they are the marginals of one joint POVM
//! `G_ij`. This module builds joints (products of commuting observables,
//! compressions of commuting dilations), turns a joint back into a pair of
//! commuting dilations on one extended space, and decides compatibility
//! numerically through [`jm_feasibility`].

mod effects;
mod feasibility;

use std::sync::Arc;

pub use effects::{
    effect_compatible, proposition_condition_check, witness_margins, EffectCompatibility, PropositionReport,
    WitnessMargins,
};
pub use feasibility::{jm_feasibility, CompatibilityVerdict, Decision};

use crate::config::Config;
use crate::dilation::{naimark_dilate, NaimarkDilation};
use crate::error::{Error, Result};
use crate::linalg::{anticommutator, ComplexMatrix, HermitianOperator};
use crate::povm::{max_commutation_defect, validate_povm, DiscretePovm};

/// Effects `G_ij` indexed by pairs of outcomes, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPovm {
    space_dim: usize,
    labels1: Vec<String>,
    labels2: Vec<String>,
    grid: Vec<HermitianOperator>,
}

impl JointPovm {
    /// Validates the flattened grid as a POVM (PSD entries, total sum one).
    pub fn new(
        labels1: Vec<String>,
        labels2: Vec<String>,
        grid: Vec<HermitianOperator>,
        cfg: &Config,
    ) -> Result<Self> {
        let (n1, n2) = (labels1.len(), labels2.len());
        if n1 == 0 || n2 == 0 || grid.len() != n1 * n2 {
            return Err(Error::InvalidJoint(format!(
                "{} effects for a {n1}x{n2} grid",
                grid.len()
            )));
        }
        let flat: Vec<(String, HermitianOperator)> = grid
            .iter()
            .enumerate()
            .map(|(k, g)| (format!("{},{}", labels1[k / n2], labels2[k % n2]), g.clone()))
            .collect();
        let report = validate_povm(&flat, cfg)?;
        if !report.ok {
            let worst = report.outcomes.iter().map(|o| o.min_eig).fold(f64::INFINITY, f64::min);
            return Err(Error::InvalidJoint(format!(
                "sum defect {:e}, smallest eigenvalue {:e}",
                report.sum_defect, worst
            )));
        }
        Ok(Self {
            space_dim: grid[0].dim(),
            labels1,
            labels2,
            grid,
        })
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    /// Grid shape `(n1, n2)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.labels1.len(), self.labels2.len())
    }

    pub fn get(&self, i: usize, j: usize) -> &HermitianOperator {
        &self.grid[i * self.labels2.len() + j]
    }

    pub fn grid(&self) -> &[HermitianOperator] {
        &self.grid
    }

    pub fn labels1(&self) -> &[String] {
        &self.labels1
    }

    pub fn labels2(&self) -> &[String] {
        &self.labels2
    }

    /// Same joint with the roles of the two observables swapped.
    pub fn transposed(&self) -> Self {
        let (n1, n2) = self.shape();
        Self {
            space_dim: self.space_dim,
            labels1: self.labels2.clone(),
            labels2: self.labels1.clone(),
            grid: (0..n2 * n1).map(|k| self.get(k % n1, k / n1).clone()).collect(),
        }
    }

    /// The grid as a single POVM with outcomes `"i,j"` in row-major order.
    pub fn as_povm(&self, cfg: &Config) -> Result<DiscretePovm> {
        let n2 = self.labels2.len();
        DiscretePovm::new(
            self.grid
                .iter()
                .enumerate()
                .map(|(k, g)| (format!("{},{}", self.labels1[k / n2], self.labels2[k % n2]), g.clone()))
                .collect(),
            cfg,
        )
    }

    pub fn marginals(&self, cfg: &Config) -> Result<(DiscretePovm, DiscretePovm)> {
        marginals(self, cfg)
    }

    /// max over both marginals of |marginal - target|; `None` on a shape mismatch.
    pub fn marginal_defect(&self, f1: &DiscretePovm, f2: &DiscretePovm, cfg: &Config) -> Result<Option<f64>> {
        let (m1, m2) = marginals(self, cfg)?;
        Ok(m1.max_effect_diff(f1).zip(m2.max_effect_diff(f2)).map(|(a, b)| a.max(b)))
    }
}

/// Row sums `F1_i = sum_j G_ij` and column sums `F2_j = sum_i G_ij`.
pub fn marginals(j: &JointPovm, cfg: &Config) -> Result<(DiscretePovm, DiscretePovm)> {
    let (n1, n2) = j.shape();
    let d = j.space_dim;
    let rows = (0..n1)
        .map(|i| {
            let op = HermitianOperator::combination(d, (0..n2).map(|k| (1.0, j.get(i, k))));
            (j.labels1[i].clone(), op)
        })
        .collect();
    let cols = (0..n2)
        .map(|k| {
            let op = HermitianOperator::combination(d, (0..n1).map(|i| (1.0, j.get(i, k))));
            (j.labels2[k].clone(), op)
        })
        .collect();
    Ok((DiscretePovm::new(rows, cfg)?, DiscretePovm::new(cols, cfg)?))
}

fn owned_labels(f: &DiscretePovm) -> Vec<String> {
    f.labels().into_iter().map(String::from).collect()
}

/// `(F1_i F2_j + F2_j F1_i) / 2`, equal to the product when the two commute.
pub(crate) fn symmetric_product(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    let ab = anticommutator(a.matrix(), b.matrix()).expect("same dimension");
    HermitianOperator::hermitian_part(ab.scale_real(0.5))
}

/// `G_ij = F1_i F2_j` for commuting observables.
pub fn product_joint_pvm(f1: &DiscretePovm, f2: &DiscretePovm, cfg: &Config) -> Result<JointPovm> {
    if f1.space_dim() != f2.space_dim() {
        return Err(Error::DimensionMismatch {
            expected: f1.space_dim(),
            found: f2.space_dim(),
        });
    }
    let defect = max_commutation_defect(f1, f2)?;
    if defect > cfg.tol.commute {
        return Err(Error::NotCommuting {
            defect,
            tol: cfg.tol.commute,
        });
    }
    let grid = f1
        .effects()
        .flat_map(|a| f2.effects().map(move |b| symmetric_product(a, b)))
        .collect();
    JointPovm::new(owned_labels(f1), owned_labels(f2), grid, cfg)
}

/// Max entry of `[E1+_i, E2+_j]` over all outcome pairs.
pub fn dilation_commutation_defect(d1: &NaimarkDilation, d2: &NaimarkDilation) -> Result<f64> {
    max_commutation_defect(d1.block_pvm(), d2.block_pvm())
}

/// `G_ij = V^dagger E1+_i E2+_j V` for two commuting dilations on one extended space.
pub fn joint_from_commuting_dilations(
    d1: &NaimarkDilation,
    d2: &NaimarkDilation,
    cfg: &Config,
) -> Result<JointPovm> {
    if d1.extended_dim() != d2.extended_dim() || d1.base_dim() != d2.base_dim() {
        return Err(Error::UnsharedDilation(format!(
            "extended spaces C^{} and C^{} over C^{} and C^{}",
            d1.extended_dim(),
            d2.extended_dim(),
            d1.base_dim(),
            d2.base_dim()
        )));
    }
    if !d1.shares_embedding(d2) {
        return Err(Error::UnsharedDilation("the two dilations embed the base space differently".into()));
    }
    let defect = dilation_commutation_defect(d1, d2)?;
    if defect > cfg.tol.commute {
        return Err(Error::NotCommuting {
            defect,
            tol: cfg.tol.commute,
        });
    }
    let v = d1.isometry();
    let grid = d1
        .block_pvm()
        .effects()
        .flat_map(|e1| {
            d2.block_pvm().effects().map(move |e2| {
                let prod = e1.matrix() * e2.matrix();
                HermitianOperator::hermitian_part(v.sandwich(&prod).expect("shapes agree"))
            })
        })
        .collect();
    JointPovm::new(owned_labels(d1.dilated()), owned_labels(d2.dilated()), grid, cfg)
}

/// A joint's Naimark dilation and the two marginal dilations it induces.
#[derive(Debug, Clone)]
pub struct CommonDilation {
    pub joint: NaimarkDilation,
    /// `E1+_i = sum_j E+_ij`, dilating the first marginal.
    pub first: NaimarkDilation,
    /// `E2+_j = sum_i E+_ij`, dilating the second marginal.
    pub second: NaimarkDilation,
}

impl CommonDilation {
    pub fn isometry(&self) -> &ComplexMatrix {
        self.joint.isometry()
    }
}

/// Dilates the joint and sums its block PVM along rows and columns.
///
/// All three dilations hold the same isometry, so the marginal pair can be fed
/// straight back into [`joint_from_commuting_dilations`].
pub fn common_dilation_from_joint(j: &JointPovm, cfg: &Config) -> Result<CommonDilation> {
    let joint = naimark_dilate(&j.as_povm(cfg)?, cfg)?;
    let (n1, n2) = j.shape();
    let big = joint.extended_dim();
    let e = joint.block_pvm();
    let sum_of = |idx: &mut dyn Iterator<Item = usize>| {
        let mut m = ComplexMatrix::zeros(big, big);
        for k in idx {
            m.add_scaled(e.effect(k).matrix(), 1.0);
        }
        HermitianOperator::hermitian_part(m)
    };
    let e1 = (0..n1)
        .map(|i| (j.labels1[i].clone(), sum_of(&mut (0..n2).map(|k| i * n2 + k))))
        .collect();
    let e2 = (0..n2)
        .map(|k| (j.labels2[k].clone(), sum_of(&mut (0..n1).map(|i| i * n2 + k))))
        .collect();
    let (m1, m2) = marginals(j, cfg)?;
    let v: Arc<ComplexMatrix> = Arc::clone(joint.isometry_arc());
    let first = NaimarkDilation::from_parts(Arc::clone(&v), DiscretePovm::new(e1, cfg)?, m1, cfg)?;
    let second = NaimarkDilation::from_parts(v, DiscretePovm::new(e2, cfg)?, m2, cfg)?;
    Ok(CommonDilation { joint, first, second })
}
