//! Naimark dilations.
//!
//! A dilation of a POVM `F` on `C^d` is an isometry `V: C^d -> C^D` together
//! with a PVM `E+` on `C^D` such that `V^dagger E+_i V = F_i`. All "P M P"
//! statements on the extended space are evaluated in base coordinates as
//! `V^dagger M V`.
//!
//! Two constructions are provided:
//!
//! * [`naimark_dilate`]: the canonical block isometry. The `i`-th block of
//!   `V psi` is `sqrt(F_i) psi` and `E+_i` projects onto the `i`-th block,
//!   so `D = n d` and `E+` is exactly projective by construction.
//! * [`effect_block_dilation`]: for a single effect `A`, the 2x2 block
//!   projection `[[A, B], [B, 1 - A]]` with `B = sqrt(A(1 - A))` on `C^d + C^d`.

use std::sync::Arc;

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, HermitianOperator};
use crate::povm::{is_pvm, DiscretePovm, Effect};
use crate::random::Sampler;
use crate::smearing::{sharp_version, SharpVersion};
use crate::spectral::{apply_function, sqrt_psd};

#[derive(Debug, Clone)]
pub struct NaimarkDilation {
    base_dim: usize,
    extended_dim: usize,
    isometry: Arc<ComplexMatrix>,
    block_pvm: DiscretePovm,
    projection: HermitianOperator,
    dilated: DiscretePovm,
}

/// Measured defects of the four dilation invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationReport {
    /// max |V^dagger V - 1|
    pub isometry_defect: f64,
    pub pvm_idempotency_defect: f64,
    pub pvm_orthogonality_defect: f64,
    /// max |P^2 - P| for P = V V^dagger
    pub projection_defect: f64,
    /// max_i |V^dagger E+_i V - F_i|
    pub compression_defect: f64,
}

impl NaimarkDilation {
    /// Assembles a dilation from its parts and checks every invariant.
    ///
    /// `dilated` is the base-space POVM that `block_pvm` must compress to.
    pub fn from_parts(
        isometry: Arc<ComplexMatrix>,
        block_pvm: DiscretePovm,
        dilated: DiscretePovm,
        cfg: &Config,
    ) -> Result<Self> {
        let (extended_dim, base_dim) = (isometry.rows(), isometry.cols());
        if block_pvm.space_dim() != extended_dim {
            return Err(Error::DimensionMismatch {
                expected: extended_dim,
                found: block_pvm.space_dim(),
            });
        }
        if dilated.space_dim() != base_dim {
            return Err(Error::DimensionMismatch {
                expected: base_dim,
                found: dilated.space_dim(),
            });
        }
        if dilated.len() != block_pvm.len() {
            return Err(Error::InvalidPovm(format!(
                "{} dilation outcomes for {} POVM outcomes",
                block_pvm.len(),
                dilated.len()
            )));
        }
        let projection = HermitianOperator::hermitian_part(&*isometry * &isometry.adjoint());
        let d = Self {
            base_dim,
            extended_dim,
            isometry,
            block_pvm,
            projection,
            dilated,
        };
        let r = d.report(cfg);
        let check = |what: &str, defect: f64, tol: f64| {
            if defect > tol {
                Err(Error::IdentityViolation {
                    what: what.into(),
                    defect,
                })
            } else {
                Ok(())
            }
        };
        check("isometry V^dagger V = 1", r.isometry_defect, cfg.tol.orth)?;
        check("block PVM idempotency", r.pvm_idempotency_defect, cfg.tol.reconstruct)?;
        check("block PVM orthogonality", r.pvm_orthogonality_defect, cfg.tol.reconstruct)?;
        check("projection idempotency", r.projection_defect, cfg.tol.reconstruct)?;
        check("compression V^dagger E+ V = F", r.compression_defect, cfg.tol.reconstruct)?;
        Ok(d)
    }

    pub fn report(&self, cfg: &Config) -> DilationReport {
        let v = &*self.isometry;
        let isometry_defect = (&v.adjoint() * v).max_diff(&ComplexMatrix::identity(self.base_dim));
        let pvm = is_pvm(&self.block_pvm, cfg);
        let p = self.projection.matrix();
        let projection_defect = (p * p).max_diff(p);
        let compression_defect = self
            .block_pvm
            .effects()
            .zip(self.dilated.effects())
            .map(|(e, f)| v.sandwich(e.matrix()).unwrap().max_diff(f.matrix()))
            .fold(0.0, f64::max);
        DilationReport {
            isometry_defect,
            pvm_idempotency_defect: pvm.idempotency_defect,
            pvm_orthogonality_defect: pvm.orthogonality_defect,
            projection_defect,
            compression_defect,
        }
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn extended_dim(&self) -> usize {
        self.extended_dim
    }

    pub fn isometry(&self) -> &ComplexMatrix {
        &self.isometry
    }

    pub(crate) fn isometry_arc(&self) -> &Arc<ComplexMatrix> {
        &self.isometry
    }

    pub fn block_pvm(&self) -> &DiscretePovm {
        &self.block_pvm
    }

    /// `P = V V^dagger`, the projection onto the embedded base space.
    pub fn projection(&self) -> &HermitianOperator {
        &self.projection
    }

    /// The base-space POVM this dilation compresses to.
    pub fn dilated(&self) -> &DiscretePovm {
        &self.dilated
    }

    /// True when both dilations use the same embedding of the base space.
    pub fn shares_embedding(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.isometry, &other.isometry) || *self.isometry == *other.isometry
    }
}

/// Canonical block-isometry dilation of a finite POVM.
pub fn naimark_dilate(f: &DiscretePovm, cfg: &Config) -> Result<NaimarkDilation> {
    let (d, n) = (f.space_dim(), f.len());
    let mut v = ComplexMatrix::zeros(n * d, d);
    for (i, e) in f.effects().enumerate() {
        v.set_block(i * d, 0, sqrt_psd(e, cfg)?.matrix());
    }
    let block_pvm = DiscretePovm::new(
        f.outcomes()
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let diag: Vec<f64> = (0..n * d)
                    .map(|k| if k / d == i { 1.0 } else { 0.0 })
                    .collect();
                (o.label.clone(), HermitianOperator::diag(&diag))
            })
            .collect(),
        cfg,
    )?;
    NaimarkDilation::from_parts(Arc::new(v), block_pvm, f.clone(), cfg)
}

/// `B = sqrt(A (1 - A))`, the off-diagonal block of the effect dilation.
///
/// Evaluated as `g(A)` with `g(x) = sqrt(x (1 - x))` on the spectrum of `A`;
/// this is the principal root of `A (1 - A)` and shares the eigenbasis of `A`.
pub fn effect_dilation_root(a: &Effect, cfg: &Config) -> Result<HermitianOperator> {
    let tol = cfg.tol.psd;
    apply_function(
        a.operator(),
        |x| {
            let y = x * (1.0 - x);
            if y < -tol {
                f64::NAN
            } else {
                y.max(0.0).sqrt()
            }
        },
        cfg,
    )
}

/// The 2x2 block projection dilating an effect, as a dichotomic dilation
/// `{E+, 1 - E+}` of `{A, 1 - A}` with `V = [1; 0]`.
pub fn effect_block_dilation(a: &Effect, cfg: &Config) -> Result<NaimarkDilation> {
    let d = a.dim();
    let b = effect_dilation_root(a, cfg)?;
    let mut e = ComplexMatrix::zeros(2 * d, 2 * d);
    e.set_block(0, 0, a.matrix());
    e.set_block(0, d, b.matrix());
    e.set_block(d, 0, b.matrix());
    e.set_block(d, d, a.complement().matrix());
    let e_plus = HermitianOperator::hermitian_part(e);
    let block_pvm = DiscretePovm::new(
        vec![("1".into(), e_plus.clone()), ("0".into(), e_plus.complement())],
        cfg,
    )?;
    let v = ComplexMatrix::from_fn(2 * d, d, |r, col| if r == col { c(1.0, 0.0) } else { c(0.0, 0.0) });
    NaimarkDilation::from_parts(Arc::new(v), block_pvm, DiscretePovm::dichotomic(a), cfg)
}

/// `V^dagger M+ V`: the base-space representation of `P M+ P`.
pub fn compress(dil: &NaimarkDilation, m: &HermitianOperator) -> Result<HermitianOperator> {
    if m.dim() != dil.extended_dim {
        return Err(Error::DimensionMismatch {
            expected: dil.extended_dim,
            found: m.dim(),
        });
    }
    Ok(HermitianOperator::hermitian_part(dil.isometry.sandwich(m.matrix())?))
}

/// `A+ = sum_i x_i E+_i` for one value per dilation outcome.
pub fn labeled_dilation_operator(
    dil: &NaimarkDilation,
    values: &[f64],
) -> Result<HermitianOperator> {
    if values.len() != dil.block_pvm.len() {
        return Err(Error::Labeling(format!(
            "{} values for {} dilation outcomes",
            values.len(),
            dil.block_pvm.len()
        )));
    }
    Ok(dil.block_pvm.weighted_sum(values))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionIdentityReport {
    /// Numeric outcome values x_i.
    pub labels: Vec<f64>,
    /// max |sum_i f(x_i) F_i - V^dagger f(A+) V|
    pub defect: f64,
}

/// Measures `sum_i f(x_i) F_i = V^dagger f(A+) V` where `A+ = sum_i x_i E+_i`
/// and `f(A+)` is evaluated through the spectral decomposition of `A+`.
pub fn check_function_identity(
    dil: &NaimarkDilation,
    f: &DiscretePovm,
    func: impl Fn(f64) -> f64,
    cfg: &Config,
) -> Result<FunctionIdentityReport> {
    let labels = f.numeric_labels()?;
    if f.space_dim() != dil.base_dim {
        return Err(Error::DimensionMismatch {
            expected: dil.base_dim,
            found: f.space_dim(),
        });
    }
    let a_plus = labeled_dilation_operator(dil, &labels)?;
    let f_a_plus = apply_function(&a_plus, &func, cfg)?;
    let rhs = compress(dil, &f_a_plus)?;
    let weights: Vec<f64> = labels.iter().map(|&x| func(x)).collect();
    let lhs = f.weighted_sum(&weights);
    Ok(FunctionIdentityReport {
        defect: lhs.matrix().max_diff(rhs.matrix()),
        labels,
    })
}

/// Relabelings exhibiting `h(A) = V^dagger f(A+) V`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelabelingCertificate {
    /// f(x_i), strictly increasing in x_i.
    pub dilation_values: Vec<f64>,
    /// (sharp-version eigenvalue a_k, h(a_k)).
    pub sharp_values: Vec<(f64, f64)>,
    /// Whether h is increasing in a_k as well.
    pub h_monotone: bool,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpProjectionReport {
    pub certificate: Option<RelabelingCertificate>,
    pub candidates_tried: usize,
    /// Smallest defect seen over all candidates, certified or not.
    pub best_defect: f64,
}

/// Number of random increasing relabelings tried after the deterministic ones.
const RANDOM_RELABELINGS: usize = 32;

/// Searches injective relabelings `f` of the POVM outcomes and `h` of the
/// sharp-version eigenvalues with `h(A) = V^dagger f(A+) V`.
///
/// `f` ranges over strictly increasing maps on the sorted labels: identity,
/// rank powers, then seeded random increasing sequences. For each `f`,
/// `h(a_k) = sum_i mu[k][i] f(x_i)` is forced; the candidate is accepted when
/// these values are pairwise distinct (so `h` is one-to-one) and the operator
/// identity holds within `tol.relabel`. No accepted candidate gives
/// `certificate: None`.
pub fn sharp_version_projection_check(
    f: &DiscretePovm,
    cfg: &Config,
) -> Result<SharpProjectionReport> {
    let labels = f.numeric_labels()?;
    let sv = sharp_version(f, cfg)?;
    let dil = naimark_dilate(f, cfg)?;
    let n = labels.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| labels[a].total_cmp(&labels[b]));

    let mut candidates: Vec<Vec<f64>> = vec![labels.clone()];
    for p in 1..=3 {
        let mut vals = vec![0.0; n];
        for (rank, &i) in order.iter().enumerate() {
            vals[i] = ((rank + 1) as f64).powi(p);
        }
        candidates.push(vals);
    }
    let mut sampler = Sampler::new(cfg.seed);
    for _ in 0..RANDOM_RELABELINGS {
        let mut vals = vec![0.0; n];
        let mut acc = 0.0;
        for &i in &order {
            acc += sampler.uniform(0.05, 1.0);
            vals[i] = acc;
        }
        candidates.push(vals);
    }

    let mut best_defect = f64::INFINITY;
    let mut fallback: Option<RelabelingCertificate> = None;
    for (tried, fvals) in candidates.iter().enumerate() {
        let cert = evaluate_relabeling(&dil, &sv, &labels, fvals, cfg)?;
        best_defect = best_defect.min(cert.defect);
        let injective = is_injective(&cert.sharp_values, cfg.tol.grouping);
        if cert.defect <= cfg.tol.relabel && injective {
            if cert.h_monotone {
                return Ok(SharpProjectionReport {
                    certificate: Some(cert),
                    candidates_tried: tried + 1,
                    best_defect,
                });
            }
            fallback.get_or_insert(cert);
        }
    }
    Ok(SharpProjectionReport {
        certificate: fallback,
        candidates_tried: candidates.len(),
        best_defect,
    })
}

fn is_injective(pairs: &[(f64, f64)], tol: f64) -> bool {
    pairs
        .iter()
        .enumerate()
        .all(|(k, a)| pairs[k + 1..].iter().all(|b| (a.1 - b.1).abs() > tol))
}

fn evaluate_relabeling(
    dil: &NaimarkDilation,
    sv: &SharpVersion,
    labels: &[f64],
    fvals: &[f64],
    cfg: &Config,
) -> Result<RelabelingCertificate> {
    // f on the spectrum of A+: eigenvalue x_i -> fvals[i]
    let a_plus = labeled_dilation_operator(dil, labels)?;
    let lookup = |x: f64| -> f64 {
        labels
            .iter()
            .zip(fvals)
            .min_by(|a, b| (a.0 - x).abs().total_cmp(&(b.0 - x).abs()))
            .map(|(_, &y)| y)
            .unwrap_or(f64::NAN)
    };
    let rhs = compress(dil, &apply_function(&a_plus, lookup, cfg)?)?;

    let kernel = sv.kernel();
    let h_values: Vec<f64> = (0..kernel.rows())
        .map(|k| kernel.row(k).iter().zip(fvals).map(|(w, y)| w * y).sum())
        .collect();
    let lhs = sv.pvm().weighted_sum(&h_values);
    let sharp_values: Vec<(f64, f64)> = sv
        .eigenvalue_labels()
        .iter()
        .copied()
        .zip(h_values.iter().copied())
        .collect();
    let h_monotone = sharp_values.windows(2).all(|w| w[1].1 > w[0].1);
    Ok(RelabelingCertificate {
        dilation_values: fvals.to_vec(),
        sharp_values,
        h_monotone,
        defect: lhs.matrix().max_diff(rhs.matrix()),
    })
}
