//! Compatibility of two effects, i.e. of the dichotomic POVMs `{A, 1 - A}`.

use serde::Serialize;

use super::{jm_feasibility, joint_from_commuting_dilations, CompatibilityVerdict, JointPovm};
use crate::config::Config;
use crate::dilation::{effect_block_dilation, effect_dilation_root, NaimarkDilation};
use crate::error::{Error, Result};
use crate::linalg::{anticommutator, commutator, HermitianOperator};
use crate::povm::{max_commutation_defect, DiscretePovm, Effect};
use crate::spectral::spectral_decompose;

/// Smallest eigenvalues of `G`, `A1 - G`, `A2 - G` and `1 - A1 - A2 + G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessMargins {
    pub g: f64,
    pub a1_minus_g: f64,
    pub a2_minus_g: f64,
    pub rest: f64,
}

impl WitnessMargins {
    pub fn min(&self) -> f64 {
        self.g.min(self.a1_minus_g).min(self.a2_minus_g).min(self.rest)
    }
}

#[derive(Debug, Clone)]
pub struct EffectCompatibility {
    pub verdict: CompatibilityVerdict,
    /// `G = G_11`, the "both yes" effect of the joint.
    pub g: Option<HermitianOperator>,
    pub margins: Option<WitnessMargins>,
}

impl EffectCompatibility {
    pub fn is_compatible(&self) -> bool {
        self.verdict.is_compatible()
    }
}

/// The four constraints `0 <= G`, `G <= A1`, `G <= A2`, `A1 + A2 - G <= 1`.
pub fn witness_margins(a1: &Effect, a2: &Effect, g: &HermitianOperator, cfg: &Config) -> Result<WitnessMargins> {
    let low = |m: HermitianOperator| spectral_decompose(&m, cfg).map(|sd| sd.min());
    Ok(WitnessMargins {
        g: low(g.clone())?,
        a1_minus_g: low(a1.operator().sub(g))?,
        a2_minus_g: low(a2.operator().sub(g))?,
        rest: low(HermitianOperator::identity(g.dim()).sub(a1.operator()).sub(a2.operator()).add(g))?,
    })
}

/// Decides compatibility of `{A1, 1 - A1}` and `{A2, 1 - A2}`.
///
/// A compatible verdict carries `G = G_11`, re-checked against the four
/// operator inequalities with slack `tol.psd + tol.marginal` (the other grid
/// entries are only determined up to the witness marginal tolerance).
pub fn effect_compatible(a1: &Effect, a2: &Effect, cfg: &Config) -> Result<EffectCompatibility> {
    if a1.dim() != a2.dim() {
        return Err(Error::DimensionMismatch {
            expected: a1.dim(),
            found: a2.dim(),
        });
    }
    let verdict = jm_feasibility(&DiscretePovm::dichotomic(a1), &DiscretePovm::dichotomic(a2), cfg)?;
    let Some(w) = &verdict.witness else {
        return Ok(EffectCompatibility {
            verdict,
            g: None,
            margins: None,
        });
    };
    let g = w.get(0, 0).clone();
    let margins = witness_margins(a1, a2, &g, cfg)?;
    if margins.min() < -(cfg.tol.psd + cfg.tol.marginal) {
        return Err(Error::IdentityViolation {
            what: "joint witness violates an effect inequality".into(),
            defect: -margins.min(),
        });
    }
    Ok(EffectCompatibility {
        verdict,
        g: Some(g),
        margins: Some(margins),
    })
}

#[derive(Debug, Clone)]
pub struct PropositionReport {
    pub holds: bool,
    /// max |[A1, A2] + [B1, B2]|
    pub commutator_defect: f64,
    /// max |{A1, B2} - {B1, A2} - (B2 - B1)|
    pub anticommutator_defect: f64,
    /// The two block dilations, present when the condition holds.
    pub dilations: Option<(NaimarkDilation, NaimarkDilation)>,
    /// max |[E1+, E2+]| for the block dilations.
    pub dilation_commutation_defect: f64,
    pub joint: Option<JointPovm>,
    pub verdict: Option<EffectCompatibility>,
}

/// Sufficient condition for compatibility of two effects: with
/// `B_i = sqrt(A_i (1 - A_i))`,
/// `[A1, A2] + [B1, B2] = 0` and `{A1, B2} - {B1, A2} = B2 - B1`.
///
/// The two conditions are exactly the diagonal and off-diagonal blocks of
/// `[E1+, E2+]` for the block dilations, so when they hold the dilations
/// commute and compress to a joint of the two effects.
pub fn proposition_condition_check(a1: &Effect, a2: &Effect, cfg: &Config) -> Result<PropositionReport> {
    if a1.dim() != a2.dim() {
        return Err(Error::DimensionMismatch {
            expected: a1.dim(),
            found: a2.dim(),
        });
    }
    let b1 = effect_dilation_root(a1, cfg)?;
    let b2 = effect_dilation_root(a2, cfg)?;
    let comm = &commutator(a1.matrix(), a2.matrix())? + &commutator(b1.matrix(), b2.matrix())?;
    let commutator_defect = comm.max_abs();
    let mut anti = &anticommutator(a1.matrix(), b2.matrix())? - &anticommutator(b1.matrix(), a2.matrix())?;
    anti.add_scaled(b2.matrix(), -1.0);
    anti.add_scaled(b1.matrix(), 1.0);
    let anticommutator_defect = anti.max_abs();

    let d1 = effect_block_dilation(a1, cfg)?;
    let d2 = effect_block_dilation(a2, cfg)?;
    let dilation_commutation_defect = max_commutation_defect(d1.block_pvm(), d2.block_pvm())?;
    let holds = commutator_defect < cfg.tol.commute && anticommutator_defect < cfg.tol.commute;
    if !holds {
        return Ok(PropositionReport {
            holds,
            commutator_defect,
            anticommutator_defect,
            dilations: None,
            dilation_commutation_defect,
            joint: None,
            verdict: None,
        });
    }
    let joint = joint_from_commuting_dilations(&d1, &d2, cfg)?;
    let verdict = effect_compatible(a1, a2, cfg)?;
    Ok(PropositionReport {
        holds,
        commutator_defect,
        anticommutator_defect,
        dilations: Some((d1, d2)),
        dilation_commutation_defect,
        joint: Some(joint),
        verdict: Some(verdict),
    })
}
