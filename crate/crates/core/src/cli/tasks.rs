//! One function per scenario task. Each returns the report body and the exit status.

use serde::Serialize;
use serde_json::{json, Value};

use super::scenario::{Operand, Requirement, Scenario};
use super::ExitStatus;
use crate::compat::{
    common_dilation_from_joint, effect_compatible, jm_feasibility, joint_from_commuting_dilations,
    proposition_condition_check, CompatibilityVerdict, Decision, JointPovm, WitnessMargins,
};
use crate::config::Config;
use crate::dilation::{effect_block_dilation, naimark_dilate, DilationReport};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::phasespace::{
    commuting_multiplication_dilations, covariant_povm, marginal_kernels, sharp_operator_compression_check,
    MomentLabels, PhaseSpaceModel, SharpCompressionReport,
};
use crate::povm::{max_commutation_defect, validate_povm, DiscretePovm, PovmReport};
use crate::random::Sampler;
use crate::smearing::{apply_kernel, same_generated_algebra, sharp_version, trivial_smearing_pair, AlgebraComparison};

pub(crate) struct TaskOutput {
    pub status: ExitStatus,
    pub result: Value,
    pub diagnostics: Vec<String>,
}

impl TaskOutput {
    fn new(status: ExitStatus, result: impl Serialize) -> Self {
        Self {
            status,
            result: serde_json::to_value(result).expect("report body serializes"),
            diagnostics: Vec::new(),
        }
    }
}

pub(crate) fn dispatch(s: &Scenario, cfg: &Config) -> Result<TaskOutput> {
    use super::scenario::Task::*;
    match s.task {
        Validate => validate(s, cfg),
        Dilate => dilate(s, cfg),
        JmTest => jm_test(s, cfg),
        EffectTest => effect_test(s, cfg),
        Smear => smear(s, cfg),
        SharpVersion => sharp(s, cfg),
        PhasespaceDemo => phasespace_demo(s, cfg),
        RoundtripCns => roundtrip_cns(s, cfg),
    }
}

fn status_of(decision: Decision) -> ExitStatus {
    match decision {
        Decision::Compatible => ExitStatus::Ok,
        Decision::Incompatible => ExitStatus::Negative,
        Decision::Undecided => ExitStatus::Undecided,
    }
}

#[derive(Serialize)]
struct VerdictSummary {
    decision: Decision,
    method: &'static str,
    iterations: usize,
    infeasibility_gap: Option<f64>,
    psd_residual: f64,
    /// max |marginal of the witness - input|, when there is a witness.
    witness_marginal_defect: Option<f64>,
}

fn summarize(v: &CompatibilityVerdict, f1: &DiscretePovm, f2: &DiscretePovm, cfg: &Config) -> Result<VerdictSummary> {
    let witness_marginal_defect = match &v.witness {
        Some(w) => w.marginal_defect(f1, f2, cfg)?,
        None => None,
    };
    Ok(VerdictSummary {
        decision: v.decision,
        method: v.method,
        iterations: v.iterations,
        infeasibility_gap: v.infeasibility_gap,
        psd_residual: v.psd_residual,
        witness_marginal_defect,
    })
}

/// Validates a labeled family as a POVM; Hermiticity counts toward `ok`.
fn family_report(items: Vec<(String, ComplexMatrix)>, cfg: &Config) -> Result<PovmReport> {
    let mut ops = Vec::with_capacity(items.len());
    for (label, m) in items {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        ops.push((label, HermitianOperator::hermitian_part(m)));
    }
    let mut report = validate_povm(&ops, cfg)?;
    for line in &mut report.outcomes {
        line.ok &= line.hermiticity_defect <= cfg.tol.hermitian;
    }
    report.ok = report.sum_defect <= cfg.tol.sum && report.outcomes.iter().all(|l| l.ok);
    Ok(report)
}

fn validate(s: &Scenario, cfg: &Config) -> Result<TaskOutput> {
    if s.operands.is_empty() {
        return Err(Error::InvalidParameter("validate needs at least one operand".into()));
    }
    let mut body = serde_json::Map::new();
    let mut diagnostics = Vec::new();
    for (name, op) in &s.operands {
        let (ok, entry) = match op {
            Operand::Matrix { .. } => {
                let m = op.raw_matrix()?;
                let defect = if m.is_square() { m.hermiticity_defect() } else { f64::INFINITY };
                let ok = defect <= cfg.tol.hermitian;
                (ok, json!({"kind": "matrix", "ok": ok, "square": m.is_square(), "hermiticity_defect": defect}))
            }
            Operand::Effect { .. } => {
                let m = op.raw_matrix()?;
                let r = family_report(vec![(name.clone(), m)], cfg)?;
                let line = &r.outcomes[0];
                (line.ok, json!({"kind": "effect", "ok": line.ok, "min_eig": line.min_eig, "max_eig": line.max_eig, "hermiticity_defect": line.hermiticity_defect}))
            }
            Operand::Povm { outcomes } => {
                let items = outcomes
                    .iter()
                    .map(|o| Ok((o.label.clone(), super::scenario::to_matrix(&o.matrix)?)))
                    .collect::<Result<Vec<_>>>()?;
                let r = family_report(items, cfg)?;
                let mut v = serde_json::to_value(&r).expect("serializes");
                v["kind"] = json!("povm");
                (r.ok, v)
            }
            Operand::Kernel { .. } => match op.kernel() {
                Ok(k) => (true, json!({"kind": "kernel", "ok": true, "separates_points": k.separates_points(cfg.tol.grouping)})),
                Err(e) => (false, json!({"kind": "kernel", "ok": false, "error": e.to_string()})),
            },
            Operand::Joint { labels1, labels2, grid } => {
                let mut items = Vec::new();
                for (i, row) in grid.iter().enumerate() {
                    for (k, m) in row.iter().enumerate() {
                        items.push((format!("{},{}", labels1[i], labels2[k]), super::scenario::to_matrix(m)?));
                    }
                }
                let r = family_report(items, cfg)?;
                let mut v = serde_json::to_value(&r).expect("serializes");
                v["kind"] = json!("joint");
                (r.ok, v)
            }
        };
        if !ok {
            diagnostics.push(format!("operand {name:?} is not a valid {}", op.kind()));
            if let Some(lines) = entry.get("outcomes").and_then(Value::as_array) {
                for l in lines.iter().filter(|l| l["ok"] == json!(false)) {
                    diagnostics.push(format!(
                        "  outcome {}: spectrum [{}, {}], hermiticity defect {}",
                        l["label"], l["min_eig"], l["max_eig"], l["hermiticity_defect"]
                    ));
                }
                diagnostics.push(format!("  sum defect {}", entry["sum_defect"]));
            }
        }
        body.insert(name.clone(), entry);
    }
    let status = if diagnostics.is_empty() { ExitStatus::Ok } else { ExitStatus::InputError };
    Ok(TaskOutput {
        status,
        result: Value::Object(body),
        diagnostics,
    })
}

#[derive(Serialize)]
struct DilationEntry {
    kind: &'static str,
    base_dim: usize,
    extended_dim: usize,
    outcomes: usize,
    defects: DilationReport,
}

fn dilate(s: &Scenario, cfg: &Config) -> Result<TaskOutput> {
    if s.operands.is_empty() {
        return Err(Error::InvalidParameter("dilate needs at least one operand".into()));
    }
    let mut body = serde_json::Map::new();
    for (name, op) in &s.operands {
        let (kind, dil) = match op {
            Operand::Effect { .. } => ("effect-block", effect_block_dilation(&op.effect(cfg)?, cfg)?),
            _ => ("naimark", naimark_dilate(&op.povm(cfg)?, cfg)?),
        };
        let entry = DilationEntry {
            kind,
            base_dim: dil.base_dim(),
            extended_dim: dil.extended_dim(),
            outcomes: dil.block_pvm().len(),
            defects: dil.report(cfg),
        };
        body.insert(name.clone(), serde_json::to_value(entry).expect("serializes"));
    }
    Ok(TaskOutput::new(ExitStatus::Ok, Value::Object(body)))
}

fn pair(s: &Scenario, cfg: &Config) -> Result<(DiscretePovm, DiscretePovm)> {
    Ok((s.operand("first")?.povm(cfg)?, s.operand("second")?.povm(cfg)?))
}

fn jm_test(s: &Scenario, cfg: &Config) -> Result<TaskOutput> {
    let (f1, f2) = pair(s, cfg)?;
    let v = jm_feasibility(&f1, &f2, cfg)?;
    let body = json!({
        "verdict": summarize(&v, &f1, &f2, cfg)?,
        "commutation_defect": max_commutation_defect(&f1, &f2)?,
        "witness": v.witness.as_ref().map(Operand::from_joint),
    });
    Ok(TaskOutput::new(status_of(v.decision), body))
}

#[derive(Serialize)]
struct PropositionSummary {
    holds: bool,
    commutator_defect: f64,
    anticommutator_defect: f64,
    dilation_commutation_defect: f64,
    /// max |marginal of the dilation joint - input|, when the condition holds.
    joint_marginal_defect: Option<f64>,
}

fn effect_test(s: &Scenario, cfg: &Config) -> Result<TaskOutput> {
    let a1 = s.operand("first")?.effect(cfg)?;
    let a2 = s.operand("second")?.effect(cfg)?;
    let (f1, f2) = (DiscretePovm::dichotomic(&a1), DiscretePovm::dichotomic(&a2));
    let ec = effect_compatible(&a1, &a2, cfg)?;
    let prop = proposition_condition_check(&a1, &a2, cfg)?;
    let joint_marginal_defect = match &prop.joint {
        Some(j) => j.marginal_defect(&f1, &f2, cfg)?,
        None => None,
    };
    let require = s.params.require.unwrap_or_default();
    let status = match require {
        Requirement::Compatible => status_of(ec.verdict.decision),
        Requirement::Proposition if prop.holds => ExitStatus::Ok,
        Requirement::Proposition => ExitStatus::Negative,
    };
    let margins: Option<WitnessMargins> = ec.margins;
    let body = json!({
        "require": require,
        "verdict": summarize(&ec.verdict, &f1, &f2, cfg)?,
        "g": ec.g.as_ref().map(Operand::from_effect),
        "witness_margins": margins,
        "proposition": PropositionSummary {
            holds: prop.holds,
            commutator_defect: prop.commutator_defect,
            anticommutator_defect: prop.anticommutator_defect,
            dilation_commutation_defect: prop.dilation_commutation_defect,
            joint_marginal_defect,
        },
    });
    Ok(TaskOutput::new(status, body))
}

fn identity_gate(checks: &[(&str, f64, f64)]) -> (ExitStatus, Vec<String>) {
    let failed: Vec<String> = checks
        .iter()
        .filter(|(_, defect, tol)| !(defect <= tol))
        .map(|(what, defect, tol)| format!("{what}: defect {defect:e} exceeds {tol:e}"))
        .collect();
    let status = if failed.is_empty() { ExitStatus::Ok } else { ExitStatus::NumericalFailure };
    (status, failed)
}

fn smear(s: &Scenario, cfg: &Config) -> Result<TaskOutput> {
    if s.operands.contains_key("kernel") {
        let f = s.operand("povm")?.povm(cfg)?;
        let mu = s.operand("kernel")?.kernel()?;
        let smeared = apply_kernel(&mu, &f)?;
        let body = json!({
            "mode": "kernel",
            "smeared": Operand::from_povm(&smeared),
            "separates_points": mu.separates_points(cfg.tol.grouping),
        });
        return Ok(TaskOutput::new(ExitStatus::Ok, body));
    }
    let (f1, f2) = pair(s, cfg)?;
    let lambda = s
        .params
        .lambda
        .ok_or_else(|| Error::InvalidParameter("smear of a pair needs params.lambda".into()))?;
    let uniform = |n: usize| vec![1.0 / n as f64; n];
    let nu1 = s.params.nu1.clone().unwrap_or_else(|| uniform(f1.len()));
    let nu2 = s.params.nu2.clone().unwrap_or_else(|| uniform(f2.len()));
    let ts = trivial_smearing_pair(&f1, &f2, lambda, &nu1, &nu2, cfg)?;
    let marginal_defect = ts
        .joint
        .marginal_defect(&ts.first, &ts.second, cfg)?
        .ok_or_else(|| Error::InvalidJoint("joint shape does not match the smeared pair".into()))?;
    let original = jm_feasibility(&f1, &f2, cfg)?;
    let (status, diagnostics) = identity_gate(&[("joint marginals vs smeared pair", marginal_defect, cfg.tol.reconstruct)]);
    let body = json!({
        "mode": "trivial",
        "lambda": lambda,
        "nu1": nu1,
        "nu2": nu2,
        "marginal_defect": marginal_defect,
        "original_verdict": summarize(&original, &f1, &f2, cfg)?,
        "smeared_first": Operand::from_povm(&ts.first),
        "smeared_second": Operand::from_povm(&ts.second),
        "joint": Operand::from_joint(&ts.joint),
    });
    let mut out = TaskOutput::new(status, body);
    out.diagnostics = diagnostics;
    Ok(out)
}

fn self_commutation_defect(f: &DiscretePovm) -> Result<f64> {
    max_commutation_defect(f, f)
}

#[derive(Serialize)]
struct SharpSummary {
    commutative: bool,
    self_commutation_defect: f64,
    eigenvalue_labels: Option<Vec<f64>>,
    reconstruction_defect: Option<f64>,
    algebra: Option<AlgebraComparison>,
    kernel: Option<Operand>,
    pvm: Option<Operand>,
    operator: Option<Operand>,
}

fn sharp(s: &Scenario, cfg: &Config) -> Result<TaskOutput> {
    let f = s.operand("povm")?.povm(cfg)?;
    let defect = self_commutation_defect(&f)?;
    if defect > cfg.tol.commute {
        let body = SharpSummary {
            commutative: false,
            self_commutation_defect: defect,
            eigenvalue_labels: None,
            reconstruction_defect: None,
            algebra: None,
            kernel: None,
            pvm: None,
            operator: None,
        };
        let mut out = TaskOutput::new(ExitStatus::Negative, body);
        out.diagnostics.push(format!("POVM is not commutative (defect {defect:e}); it has no sharp version"));
        return Ok(out);
    }
    let sv = sharp_version(&f, cfg)?;
    let op = sv.operator();
    let algebra = same_generated_algebra(&f, &op, cfg)?;
    let status = if algebra.same { ExitStatus::Ok } else { ExitStatus::Negative };
    let body = SharpSummary {
        commutative: true,
        self_commutation_defect: defect,
        eigenvalue_labels: Some(sv.eigenvalue_labels().to_vec()),
        reconstruction_defect: Some(sv.reconstruction_defect()),
        algebra: Some(algebra),
        kernel: Some(Operand::from_kernel(sv.kernel())),
        pvm: Some(Operand::from_povm(sv.pvm())),
        operator: Some(Operand::Matrix {
            matrix: Operand::from_matrix(op.matrix()),
        }),
    };
    Ok(TaskOutput::new(status, body))
}

#[derive(Serialize)]
struct PhaseSpaceSummary {
    d: usize,
    l: f64,
    position_kernel_defect: f64,
    momentum_kernel_defect: f64,
    /// First row of each circulant kernel.
    position_profile: Vec<f64>,
    momentum_profile: Vec<f64>,
    isometry_defect: f64,
    reproducing_kernel_defect: f64,
    multiplication_commutation_defect: f64,
    position_chain_defect: f64,
    momentum_chain_defect: f64,
    joint_chain_defect: f64,
    covariance_shifts: Vec<(i64, i64)>,
    covariance_defect: f64,
    /// max |[F^Q(q), F^P(p)]|
    marginal_commutation_defect: f64,
    verdict: Option<VerdictSummary>,
    moments: SharpCompressionReport,
}

fn phasespace_demo(s: &Scenario, cfg: &Config) -> Result<TaskOutput> {
    let d = s.params.d.ok_or_else(|| Error::InvalidParameter("phasespace-demo needs params.d".into()))?;
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let l = s.params.l.unwrap_or(1.0);
    let model = PhaseSpaceModel::gaussian(d, l, cfg)?;
    let cov = covariant_povm(&model, cfg)?;
    let kernels = marginal_kernels(&cov, cfg)?;
    let dil = commuting_multiplication_dilations(&cov, cfg)?;
    let mut sampler = Sampler::new(cfg.seed);
    let shifts: Vec<(i64, i64)> = (0..s.params.shifts.unwrap_or(4))
        .map(|_| (sampler.index(0, d - 1) as i64, sampler.index(0, d - 1) as i64))
        .collect();
    let covariance_defect = cov.covariance_defect(&shifts);
    let (fq, fp) = cov.marginals(cfg)?;
    let verdict = if s.params.feasibility.unwrap_or(true) {
        Some(jm_feasibility(&fq, &fp, cfg)?)
    } else {
        None
    };
    let moments = sharp_operator_compression_check(&model, s.params.labels.unwrap_or(MomentLabels::Scaled), cfg)?;
    let tol = cfg.tol.reconstruct;
    let (mut status, diagnostics) = identity_gate(&[
        ("position marginal convolution", kernels.position_defect, tol),
        ("momentum marginal convolution", kernels.momentum_defect, tol),
        ("W isometry", dil.isometry_defect, cfg.tol.orth),
        ("reproducing kernel", dil.reproducing_kernel_defect, tol),
        ("position compression chain", dil.position_chain_defect, tol),
        ("momentum compression chain", dil.momentum_chain_defect, tol),
        ("joint compression chain", dil.joint_defect, tol),
        ("covariance", covariance_defect, tol),
    ]);
    if status == ExitStatus::Ok {
        if let Some(v) = &verdict {
            status = status_of(v.decision);
        }
    }
    let body = PhaseSpaceSummary {
        d,
        l,
        position_kernel_defect: kernels.position_defect,
        momentum_kernel_defect: kernels.momentum_defect,
        position_profile: model.position_profile(),
        momentum_profile: model.momentum_profile(),
        isometry_defect: dil.isometry_defect,
        reproducing_kernel_defect: dil.reproducing_kernel_defect,
        multiplication_commutation_defect: dil.commutation_defect,
        position_chain_defect: dil.position_chain_defect,
        momentum_chain_defect: dil.momentum_chain_defect,
        joint_chain_defect: dil.joint_defect,
        covariance_shifts: shifts,
        covariance_defect,
        marginal_commutation_defect: max_commutation_defect(&fq, &fp)?,
        verdict: verdict.as_ref().map(|v| summarize(v, &fq, &fp, cfg)).transpose()?,
        moments,
    };
    let mut out = TaskOutput::new(status, body);
    out.diagnostics = diagnostics;
    Ok(out)
}

/// Random joint with the given grid shape: a random POVM with `n1 n2` outcomes.
pub(crate) fn random_joint(d: usize, n1: usize, n2: usize, seed: u64, cfg: &Config) -> Result<JointPovm> {
    if d == 0 || n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter("d and both outcome counts must be positive".into()));
    }
    let f = Sampler::new(seed).povm(d, n1 * n2, cfg)?;
    JointPovm::new(
        (0..n1).map(|i| i.to_string()).collect(),
        (0..n2).map(|k| k.to_string()).collect(),
        f.effects().cloned().collect(),
        cfg,
    )
}

#[derive(Serialize)]
struct RoundTripSummary {
    base_dim: usize,
    extended_dim: usize,
    shape: (usize, usize),
    /// max |[E1+_i, E2+_j]|
    commutation_defect: f64,
    /// max |V^dagger E1+_i V - F1_i| and the same for the second marginal.
    first_compression_defect: f64,
    second_compression_defect: f64,
    /// Re-assembled joint against the input joint.
    grid_defect: f64,
    marginal_defect: f64,
}

fn roundtrip_cns(s: &Scenario, cfg: &Config) -> Result<TaskOutput> {
    let j = match s.operands.get("joint") {
        Some(op) => op.joint(cfg)?,
        None => {
            let d = s.params.d.ok_or_else(|| Error::InvalidParameter("roundtrip-cns needs a joint operand or params.d".into()))?;
            let [n1, n2] = s.params.outcomes.unwrap_or([3, 3]);
            random_joint(d, n1, n2, cfg.seed, cfg)?
        }
    };
    let cd = common_dilation_from_joint(&j, cfg)?;
    let commutation_defect = max_commutation_defect(cd.first.block_pvm(), cd.second.block_pvm())?;
    let rebuilt = joint_from_commuting_dilations(&cd.first, &cd.second, cfg)?;
    let grid_defect = rebuilt
        .grid()
        .iter()
        .zip(j.grid())
        .map(|(a, b)| a.matrix().max_diff(b.matrix()))
        .fold(0.0, f64::max);
    let (f1, f2) = j.marginals(cfg)?;
    let marginal_defect = rebuilt.marginal_defect(&f1, &f2, cfg)?.expect("same shape");
    let (status, diagnostics) = identity_gate(&[
        ("marginal dilations commute", commutation_defect, cfg.tol.commute),
        ("re-assembled marginals", marginal_defect, cfg.tol.reconstruct),
    ]);
    let body = RoundTripSummary {
        base_dim: j.space_dim(),
        extended_dim: cd.joint.extended_dim(),
        shape: j.shape(),
        commutation_defect,
        first_compression_defect: cd.first.report(cfg).compression_defect,
        second_compression_defect: cd.second.report(cfg).compression_defect,
        grid_defect,
        marginal_defect,
    };
    let mut out = TaskOutput::new(status, body);
    out.diagnostics = diagnostics;
    Ok(out)
}
