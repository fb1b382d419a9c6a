//! Unsharp position and momentum on the discrete phase space `Z_d x Z_d`.
//!
//! Displacements are `U_{q,p} = S^q M^p` with `S|k> = |k+1>` and
//! `M|k> = e^{2 pi i k/d}|k>`. A unit fiducial `g` gives the covariant POVM
//! `F(q,p) = (1/d) U_{q,p}|g><g|U_{q,p}^dagger`. Its marginals are
//!
//! * position: `F^Q(q) = sum_k |g(k-q)|^2 |k><k|`,
//! * momentum: `F^P(p) = sum_j |g^(j-p)|^2 |f_j><f_j|`,
//!
//! smearings of the sharp position and momentum PVMs by circulant kernels.
//! The Fourier basis is `f_j(k) = e^{2 pi i jk/d}/sqrt(d)` and
//! `g^(j) = <f_j|g> = sum_k e^{-2 pi i jk/d} g(k)/sqrt(d)`.
//!
//! `W` maps `psi` to the function `(q,p) -> (1/sqrt d) <U_{q,p} g, psi>` on
//! the `d^2` phase-space points. It is an isometry, and the multiplication
//! PVMs by indicator functions of `q` and of `p` on `C^{d^2}` are two
//! commuting dilations of `F^Q` and `F^P` that share it.

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::compat::{joint_from_commuting_dilations, JointPovm};
use crate::config::Config;
use crate::dilation::NaimarkDilation;
use crate::error::{Error, Result};
use crate::linalg::{c, commutator, ComplexMatrix, HermitianOperator, C64};
use crate::povm::DiscretePovm;
use crate::smearing::{apply_kernel, MarkovKernel};

/// Unit-norm slack for fiducials and DFT unitarity.
pub const NORM_TOL: f64 = 1e-12;
/// Slack for rank-one / trace checks on covariant effects.
pub const EFFECT_TOL: f64 = 1e-10;
/// Tail mass of the kernel profile ignored when choosing interior rows.
pub const TAIL_MASS: f64 = 1e-12;
/// Interior defect above which a first-moment check is flagged.
pub const MOMENT_FLAG: f64 = 1e-6;

fn omega(d: usize, k: i64) -> C64 {
    let phase = TAU * (k.rem_euclid(d as i64)) as f64 / d as f64;
    c(phase.cos(), phase.sin())
}

fn reduce(x: i64, d: usize) -> usize {
    x.rem_euclid(d as i64) as usize
}

/// `U_{q,p} = S^q M^p`; indices are taken mod `d`.
pub fn displacement(d: usize, q: i64, p: i64) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        // S^q M^p |k> = e^{2 pi i p k/d} |k + q>
        u[(reduce(k as i64 + q, d), k)] = omega(d, p * k as i64);
    }
    u
}

/// Forward DFT matrix `F_{jk} = e^{-2 pi i jk/d}/sqrt(d)`.
pub fn dft_matrix(d: usize) -> ComplexMatrix {
    let s = 1.0 / (d as f64).sqrt();
    ComplexMatrix::from_fn(d, d, |j, k| omega(d, -((j * k) as i64)) * s)
}

/// `g^ = F g`.
pub fn fourier_transform(g: &[C64]) -> Vec<C64> {
    dft_matrix(g.len()).mat_vec(g).expect("square")
}

/// Discrete Gaussian `g(k) ~ exp(-x_k^2 / (2 l^2))`, `x_k = k - floor(d/2)`, unit norm.
pub fn gaussian_fiducial(d: usize, l: f64) -> Result<Vec<C64>> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidParameter(format!("width l = {l} must be positive")));
    }
    let mid = (d / 2) as f64;
    let raw: Vec<f64> = (0..d).map(|k| (-(k as f64 - mid).powi(2) / (2.0 * l * l)).exp()).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(raw.into_iter().map(|x| c(x / norm, 0.0)).collect())
}

pub fn basis_vector(d: usize, k: usize) -> Vec<C64> {
    (0..d).map(|j| c(if j == k { 1.0 } else { 0.0 }, 0.0)).collect()
}

#[derive(Debug, Clone)]
pub struct PhaseSpaceModel {
    d: usize,
    fiducial: Vec<C64>,
    position_pvm: DiscretePovm,
    momentum_pvm: DiscretePovm,
}

impl PhaseSpaceModel {
    pub fn new(fiducial: Vec<C64>, cfg: &Config) -> Result<Self> {
        let d = fiducial.len();
        if d == 0 {
            return Err(Error::InvalidParameter("empty fiducial".into()));
        }
        if fiducial.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParameter("fiducial has a non-finite entry".into()));
        }
        let norm = fiducial.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!("fiducial norm {norm} is not 1")));
        }
        let f = dft_matrix(d);
        let unitarity = (&f * &f.adjoint()).max_diff(&ComplexMatrix::identity(d));
        if unitarity > NORM_TOL {
            return Err(Error::IdentityViolation {
                what: "DFT unitarity".into(),
                defect: unitarity,
            });
        }
        let position_pvm = DiscretePovm::from_operators(
            (0..d).map(|k| HermitianOperator::projector(&basis_vector(d, k))).collect(),
            cfg,
        )?;
        let momentum_pvm = DiscretePovm::from_operators(
            (0..d).map(|j| HermitianOperator::projector(&fourier_vector(d, j))).collect(),
            cfg,
        )?;
        Ok(Self {
            d,
            fiducial,
            position_pvm,
            momentum_pvm,
        })
    }

    pub fn gaussian(d: usize, l: f64, cfg: &Config) -> Result<Self> {
        Self::new(gaussian_fiducial(d, l)?, cfg)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn fiducial(&self) -> &[C64] {
        &self.fiducial
    }

    /// Computational-basis projectors, outcome `k` = position `k`.
    pub fn position_pvm(&self) -> &DiscretePovm {
        &self.position_pvm
    }

    /// Fourier-basis projectors `|f_j><f_j|`.
    pub fn momentum_pvm(&self) -> &DiscretePovm {
        &self.momentum_pvm
    }

    /// `U_{q,p} g`.
    pub fn displaced(&self, q: i64, p: i64) -> Vec<C64> {
        displacement(self.d, q, p).mat_vec(&self.fiducial).expect("square")
    }

    /// `|g(k)|^2`, renormalized to sum to one.
    pub fn position_profile(&self) -> Vec<f64> {
        profile(&self.fiducial)
    }

    /// `|g^(j)|^2`, renormalized to sum to one.
    pub fn momentum_profile(&self) -> Vec<f64> {
        profile(&fourier_transform(&self.fiducial))
    }
}

/// `f_j(k) = e^{2 pi i jk/d}/sqrt(d)`.
pub fn fourier_vector(d: usize, j: usize) -> Vec<C64> {
    let s = 1.0 / (d as f64).sqrt();
    (0..d).map(|k| omega(d, (j * k) as i64) * s).collect()
}

fn profile(v: &[C64]) -> Vec<f64> {
    let w: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// The covariant POVM as a joint of its position (rows) and momentum (columns) outcomes.
#[derive(Debug, Clone)]
pub struct CovariantPovm {
    model: PhaseSpaceModel,
    grid: JointPovm,
}

impl CovariantPovm {
    pub fn model(&self) -> &PhaseSpaceModel {
        &self.model
    }

    /// `F(q,p)` at row `q`, column `p`.
    pub fn grid(&self) -> &JointPovm {
        &self.grid
    }

    pub fn effect(&self, q: usize, p: usize) -> &HermitianOperator {
        self.grid.get(q, p)
    }

    /// `(F^Q, F^P)`.
    pub fn marginals(&self, cfg: &Config) -> Result<(DiscretePovm, DiscretePovm)> {
        self.grid.marginals(cfg)
    }

    /// max over (a,b) and (q,p) of |U_{a,b} F(q,p) U_{a,b}^dagger - F(q+a, p+b)|.
    pub fn covariance_defect(&self, shifts: &[(i64, i64)]) -> f64 {
        let d = self.model.d;
        let mut worst = 0.0f64;
        for &(a, b) in shifts {
            let u = displacement(d, a, b);
            for q in 0..d {
                for p in 0..d {
                    let moved = &(&u * self.effect(q, p).matrix()) * &u.adjoint();
                    let target = self.effect(reduce(q as i64 + a, d), reduce(p as i64 + b, d));
                    worst = worst.max(moved.max_diff(target.matrix()));
                }
            }
        }
        worst
    }
}

pub fn covariant_povm(model: &PhaseSpaceModel, cfg: &Config) -> Result<CovariantPovm> {
    let d = model.d;
    let labels: Vec<String> = (0..d).map(|k| k.to_string()).collect();
    let mut grid = Vec::with_capacity(d * d);
    for q in 0..d {
        for p in 0..d {
            let v = model.displaced(q as i64, p as i64);
            let f = HermitianOperator::projector(&v).scale(1.0 / d as f64);
            let tr_defect = (f.matrix().trace().re - 1.0 / d as f64).abs();
            let rank_defect = (f.matrix() * f.matrix()).max_diff(&f.matrix().scale_real(1.0 / d as f64));
            if tr_defect.max(rank_defect) > EFFECT_TOL {
                return Err(Error::IdentityViolation {
                    what: format!("covariant effect ({q},{p}) is not rank one with trace 1/d"),
                    defect: tr_defect.max(rank_defect),
                });
            }
            grid.push(f);
        }
    }
    let grid = JointPovm::new(labels.clone(), labels, grid, cfg)?;
    Ok(CovariantPovm {
        model: model.clone(),
        grid,
    })
}

/// Circulant kernel `mu[k][x] = profile(k - x mod d)`.
pub fn circulant_kernel(profile: &[f64]) -> Result<MarkovKernel> {
    let d = profile.len();
    MarkovKernel::new(
        (0..d)
            .map(|k| (0..d).map(|x| profile[reduce(k as i64 - x as i64, d)]).collect())
            .collect(),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginalKernels {
    /// `mu[k][q] = |g(k-q)|^2`.
    pub position: MarkovKernel,
    /// `nu[j][p] = |g^(j-p)|^2`.
    pub momentum: MarkovKernel,
    /// max |F^Q - apply_kernel(mu, Q)|
    pub position_defect: f64,
    /// max |F^P - apply_kernel(nu, P)|
    pub momentum_defect: f64,
}

/// Marginals of the covariant POVM as circulant smearings of sharp position
/// and momentum. Defects above `tol.reconstruct` are an identity violation.
pub fn marginal_kernels(cov: &CovariantPovm, cfg: &Config) -> Result<MarginalKernels> {
    let m = &cov.model;
    let (fq, fp) = cov.marginals(cfg)?;
    let position = circulant_kernel(&m.position_profile())?;
    let momentum = circulant_kernel(&m.momentum_profile())?;
    let position_defect = apply_kernel(&position, &m.position_pvm)?
        .max_effect_diff(&fq)
        .expect("same shape");
    let momentum_defect = apply_kernel(&momentum, &m.momentum_pvm)?
        .max_effect_diff(&fp)
        .expect("same shape");
    for (what, defect) in [("position", position_defect), ("momentum", momentum_defect)] {
        if defect > cfg.tol.reconstruct {
            return Err(Error::IdentityViolation {
                what: format!("{what} marginal is not the convolution smearing"),
                defect,
            });
        }
    }
    Ok(MarginalKernels {
        position,
        momentum,
        position_defect,
        momentum_defect,
    })
}

/// `W`: row `q d + p` is `(1/sqrt d) (U_{q,p} g)^dagger`.
pub fn w_eta_isometry(model: &PhaseSpaceModel) -> ComplexMatrix {
    let d = model.d;
    let s = 1.0 / (d as f64).sqrt();
    let mut w = ComplexMatrix::zeros(d * d, d);
    for q in 0..d {
        for p in 0..d {
            let v = model.displaced(q as i64, p as i64);
            for k in 0..d {
                w[(q * d + p, k)] = v[k].conj() * s;
            }
        }
    }
    w
}

/// max |W W^dagger - K| with `K_{(q,p),(q',p')} = (1/d) <U_{q,p} g, U_{q',p'} g>`.
pub fn reproducing_kernel_defect(model: &PhaseSpaceModel, w: &ComplexMatrix) -> f64 {
    let d = model.d;
    let vs: Vec<Vec<C64>> = (0..d * d)
        .map(|r| model.displaced((r / d) as i64, (r % d) as i64))
        .collect();
    let proj = w * &w.adjoint();
    let mut worst = 0.0f64;
    for (r, a) in vs.iter().enumerate() {
        for (s, b) in vs.iter().enumerate() {
            let k: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>() / d as f64;
            worst = worst.max((proj[(r, s)] - k).norm());
        }
    }
    worst
}

/// Multiplication PVMs `E_Q(q0) = chi_{q = q0}`, `E_P(p0) = chi_{p = p0}` on `C^{d^2}`.
pub fn multiplication_pvms(d: usize, cfg: &Config) -> Result<(DiscretePovm, DiscretePovm)> {
    let selector = |pick: &dyn Fn(usize) -> bool| {
        HermitianOperator::diag(&(0..d * d).map(|r| if pick(r) { 1.0 } else { 0.0 }).collect::<Vec<_>>())
    };
    let eq = (0..d).map(|q0| selector(&|r| r / d == q0)).collect();
    let ep = (0..d).map(|p0| selector(&|r| r % d == p0)).collect();
    Ok((DiscretePovm::from_operators(eq, cfg)?, DiscretePovm::from_operators(ep, cfg)?))
}

#[derive(Debug, Clone)]
pub struct MultiplicationDilations {
    pub position: NaimarkDilation,
    pub momentum: NaimarkDilation,
    /// max |[E_Q(q), E_P(p)]|
    pub commutation_defect: f64,
    /// max_q |W^dagger E_Q(q) W - F^Q(q)|
    pub position_chain_defect: f64,
    pub momentum_chain_defect: f64,
    pub isometry_defect: f64,
    pub reproducing_kernel_defect: f64,
    /// The joint `W^dagger E_Q(q) E_P(p) W`.
    pub joint: JointPovm,
    /// max |joint(q,p) - F(q,p)|
    pub joint_defect: f64,
}

/// Builds the two multiplication dilations around one shared `W` and checks
/// that they compress to the marginals and, jointly, to the covariant grid.
pub fn commuting_multiplication_dilations(cov: &CovariantPovm, cfg: &Config) -> Result<MultiplicationDilations> {
    let m = &cov.model;
    let d = m.d;
    let w = w_eta_isometry(m);
    let isometry_defect = (&w.adjoint() * &w).max_diff(&ComplexMatrix::identity(d));
    let reproducing_kernel_defect = reproducing_kernel_defect(m, &w);
    let (eq, ep) = multiplication_pvms(d, cfg)?;
    let commutation_defect = eq
        .effects()
        .flat_map(|a| ep.effects().map(move |b| commutator(a.matrix(), b.matrix()).expect("same shape").max_abs()))
        .fold(0.0, f64::max);
    let (fq, fp) = cov.marginals(cfg)?;
    let w = Arc::new(w);
    let position = NaimarkDilation::from_parts(Arc::clone(&w), eq, fq, cfg)?;
    let momentum = NaimarkDilation::from_parts(w, ep, fp, cfg)?;
    let position_chain_defect = position.report(cfg).compression_defect;
    let momentum_chain_defect = momentum.report(cfg).compression_defect;
    let joint = joint_from_commuting_dilations(&position, &momentum, cfg)?;
    let joint_defect = joint
        .grid()
        .iter()
        .zip(cov.grid.grid())
        .map(|(a, b)| a.matrix().max_diff(b.matrix()))
        .fold(0.0, f64::max);
    Ok(MultiplicationDilations {
        position,
        momentum,
        commutation_defect,
        position_chain_defect,
        momentum_chain_defect,
        isometry_defect,
        reproducing_kernel_defect,
        joint,
        joint_defect,
    })
}

/// Value attached to sharp outcome `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentLabels {
    /// `(k - floor(d/2)) / d`
    Scaled,
    /// `k - floor(d/2)`
    Integer,
}

impl MomentLabels {
    fn value(self, k: usize, d: usize) -> f64 {
        let x = k as f64 - (d / 2) as f64;
        match self {
            MomentLabels::Scaled => x / d as f64,
            MomentLabels::Integer => x,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentCheck {
    /// Circular centre of the kernel profile.
    pub center: usize,
    /// Profile mass farther than this from the centre is below the tail threshold.
    pub guard_radius: usize,
    /// Rows `guard_radius ..= d - 1 - guard_radius` (possibly empty).
    pub interior_rows: Vec<usize>,
    /// Mean over interior rows of the diagonal mismatch.
    pub offset: f64,
    /// After subtracting the offset, over interior rows.
    pub interior_defect: f64,
    /// After subtracting the offset, over every entry.
    pub full_defect: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpCompressionReport {
    pub labels: MomentLabels,
    pub position: MomentCheck,
    pub momentum: MomentCheck,
}

/// Compares `W^dagger (sum_x t_x E(x)) W` with the sharp operator plus a constant.
///
/// Outcome `x` of the multiplication PVM is labeled by the sharp value of the
/// shifted fiducial's centre, `t((x + s) mod d)`, where `s` is the circular
/// centre of the kernel profile. On `Z_d` the labels jump once around the
/// circle, so rows whose kernel window straddles the jump cannot match; only
/// rows farther from it than the guard radius are held to the identity. The
/// check is flagged (not failed) when there are no such rows or their defect
/// is at least [`MOMENT_FLAG`].
pub fn sharp_operator_compression_check(
    model: &PhaseSpaceModel,
    labels: MomentLabels,
    cfg: &Config,
) -> Result<SharpCompressionReport> {
    let d = model.d;
    let w = w_eta_isometry(model);
    let (eq, ep) = multiplication_pvms(d, cfg)?;
    let id = ComplexMatrix::identity(d);
    let fourier = ComplexMatrix::from_fn(d, d, |k, j| fourier_vector(d, j)[k]);
    let position = moment_check(&w, &eq, &id, &model.position_profile(), labels)?;
    let momentum = moment_check(&w, &ep, &fourier, &model.momentum_profile(), labels)?;
    Ok(SharpCompressionReport {
        labels,
        position,
        momentum,
    })
}

fn circular_center(profile: &[f64]) -> usize {
    let d = profile.len();
    let z: C64 = profile.iter().enumerate().map(|(m, &w)| omega(d, m as i64) * w).sum();
    if z.norm() < 1e-300 {
        return 0;
    }
    let turns = z.arg() / TAU * d as f64;
    reduce(turns.round() as i64, d)
}

fn circular_distance(a: usize, b: usize, d: usize) -> usize {
    let x = reduce(a as i64 - b as i64, d);
    x.min(d - x)
}

fn guard_radius(profile: &[f64], center: usize) -> usize {
    let d = profile.len();
    (0..=d / 2)
        .find(|&r| {
            let tail: f64 = (0..d)
                .filter(|&m| circular_distance(m, center, d) > r)
                .map(|m| profile[m])
                .sum();
            tail < TAIL_MASS
        })
        .unwrap_or(d / 2)
}

/// `basis` has the sharp eigenvectors as columns, in outcome order.
fn moment_check(
    w: &ComplexMatrix,
    pvm: &DiscretePovm,
    basis: &ComplexMatrix,
    profile: &[f64],
    labels: MomentLabels,
) -> Result<MomentCheck> {
    let d = profile.len();
    let center = circular_center(profile);
    let big = w.rows();
    let mut plus = vec![0.0; big];
    for (x, e) in pvm.effects().enumerate() {
        let t = labels.value(reduce(x as i64 + center as i64, d), d);
        for (r, slot) in plus.iter_mut().enumerate() {
            *slot += t * e.matrix()[(r, r)].re;
        }
    }
    let compressed = w.sandwich(&ComplexMatrix::diag_real(&plus))?;
    let in_basis = basis.sandwich(&compressed)?;

    let r = guard_radius(profile, center);
    let interior_rows: Vec<usize> = if 2 * r < d { (r..d - r).collect() } else { Vec::new() };
    let mismatch = |k: usize| in_basis[(k, k)].re - labels.value(k, d);
    let offset = if interior_rows.is_empty() {
        0.0
    } else {
        interior_rows.iter().map(|&k| mismatch(k)).sum::<f64>() / interior_rows.len() as f64
    };
    let entry_defect = |k: usize, j: usize| {
        if k == j {
            (mismatch(k) - offset).abs()
        } else {
            in_basis[(k, j)].norm()
        }
    };
    let full_defect = (0..d)
        .flat_map(|k| (0..d).map(move |j| (k, j)))
        .map(|(k, j)| entry_defect(k, j))
        .fold(0.0, f64::max);
    let interior_defect = interior_rows
        .iter()
        .flat_map(|&k| (0..d).map(move |j| (k, j)))
        .map(|(k, j)| entry_defect(k, j))
        .fold(0.0, f64::max);
    Ok(MomentCheck {
        center,
        guard_radius: r,
        flagged: interior_rows.is_empty() || interior_defect >= MOMENT_FLAG,
        interior_rows,
        offset,
        interior_defect,
        full_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::random::Sampler;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn displacement_examples() {
        assert_eq!(displacement(5, 0, 0), ComplexMatrix::identity(5));
        assert!(displacement(2, 1, 0).max_diff(&pauli::x()) < 1e-15);
        assert!(displacement(2, 0, 1).max_diff(&pauli::z()) < 1e-15);
        assert_eq!(displacement(3, 4, -2), displacement(3, 1, 1));
    }

    #[test]
    fn weyl_relation_up_to_phase() {
        let d = 5;
        for (q, p, q2, p2) in [(1, 2, 3, 4), (0, 1, 1, 0), (4, 4, 2, 3)] {
            let lhs = &displacement(d, q, p) * &displacement(d, q2, p2);
            let rhs = displacement(d, q + q2, p + p2);
            let k = (0..d).find(|&k| (0..d).any(|r| rhs[(r, k)].norm() > 0.5)).unwrap();
            let r = (0..d).find(|&r| rhs[(r, k)].norm() > 0.5).unwrap();
            let phase = lhs[(r, k)] / rhs[(r, k)];
            assert!((phase.norm() - 1.0).abs() < 1e-12);
            assert!(lhs.max_diff(&rhs.scale(phase)) < 1e-12);
            let u = displacement(d, q, p);
            assert!((&u * &u.adjoint()).max_diff(&ComplexMatrix::identity(d)) < 1e-12);
        }
    }

    #[test]
    fn gaussian_fiducial_shape() {
        let g = gaussian_fiducial(8, 1.0).unwrap();
        let norm: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        for k in 1..8 {
            assert!((g[4 - k.min(4)].re - g[(4 + k).min(7)].re).abs() < 1e-12 || k >= 4);
        }
        assert!(g.iter().all(|z| z.re >= 0.0 && z.im == 0.0));
        let flat = gaussian_fiducial(8, 1e4).unwrap();
        assert!(flat.iter().all(|z| (z.re - 1.0 / 8f64.sqrt()).abs() < 1e-6));
        let sharp = gaussian_fiducial(8, 0.05).unwrap();
        assert!((sharp[4].re - 1.0).abs() < 1e-12);
        assert!(gaussian_fiducial(8, 0.0).is_err());
        assert!(gaussian_fiducial(0, 1.0).is_err());
    }

    #[test]
    fn model_rejects_unnormalized_fiducial() {
        assert!(PhaseSpaceModel::new(vec![c(1.0, 0.0), c(1.0, 0.0)], &cfg()).is_err());
    }

    #[test]
    fn covariant_examples() {
        let one = covariant_povm(&PhaseSpaceModel::new(vec![c(1.0, 0.0)], &cfg()).unwrap(), &cfg()).unwrap();
        assert_eq!(one.effect(0, 0).matrix(), &ComplexMatrix::identity(1));

        let m = PhaseSpaceModel::new(basis_vector(2, 0), &cfg()).unwrap();
        let cov = covariant_povm(&m, &cfg()).unwrap();
        assert!(cov.effect(0, 0).matrix().max_diff(&ComplexMatrix::diag_real(&[0.5, 0.0])) < 1e-15);
        assert!(cov.effect(1, 1).matrix().max_diff(&ComplexMatrix::diag_real(&[0.0, 0.5])) < 1e-15);

        let g8 = covariant_povm(&PhaseSpaceModel::gaussian(8, 1.0, &cfg()).unwrap(), &cfg()).unwrap();
        let mut s = ComplexMatrix::zeros(8, 8);
        for e in g8.grid().grid() {
            s.add_scaled(e.matrix(), 1.0);
        }
        assert!(s.max_diff(&ComplexMatrix::identity(8)) < 1e-9);
    }

    #[test]
    fn covariance_holds() {
        let mut smp = Sampler::new(2);
        let m = PhaseSpaceModel::new(smp.unit_vector(5), &cfg()).unwrap();
        let cov = covariant_povm(&m, &cfg()).unwrap();
        assert!(cov.covariance_defect(&[(1, 2), (3, 0), (4, 4)]) < 1e-9);
    }

    #[test]
    fn kernel_examples() {
        let d = 4;
        let delta = covariant_povm(&PhaseSpaceModel::new(basis_vector(d, 0), &cfg()).unwrap(), &cfg()).unwrap();
        let k = marginal_kernels(&delta, &cfg()).unwrap();
        assert_eq!(k.position, MarkovKernel::identity(d));
        assert!(k.momentum.weights().iter().flatten().all(|w| (w - 0.25).abs() < 1e-12));

        let u = vec![c(0.5, 0.0); 4];
        let flat = covariant_povm(&PhaseSpaceModel::new(u, &cfg()).unwrap(), &cfg()).unwrap();
        let k = marginal_kernels(&flat, &cfg()).unwrap();
        assert!(k.momentum.max_diff(&MarkovKernel::identity(d)) < 1e-12);
        assert!(k.position.weights().iter().flatten().all(|w| (w - 0.25).abs() < 1e-12));

        let g = covariant_povm(&PhaseSpaceModel::gaussian(8, 1.0, &cfg()).unwrap(), &cfg()).unwrap();
        let k = marginal_kernels(&g, &cfg()).unwrap();
        assert!(k.position_defect < 1e-9 && k.momentum_defect < 1e-9);
    }

    #[test]
    fn fourier_duality() {
        let mut smp = Sampler::new(6);
        let g = smp.unit_vector(6);
        let gh = fourier_transform(&g);
        let a = marginal_kernels(&covariant_povm(&PhaseSpaceModel::new(g, &cfg()).unwrap(), &cfg()).unwrap(), &cfg()).unwrap();
        let b = marginal_kernels(&covariant_povm(&PhaseSpaceModel::new(gh, &cfg()).unwrap(), &cfg()).unwrap(), &cfg()).unwrap();
        assert!(a.momentum.max_diff(&b.position) < 1e-9);
    }

    #[test]
    fn isometry_examples() {
        let w1 = w_eta_isometry(&PhaseSpaceModel::new(vec![c(0.0, 1.0)], &cfg()).unwrap());
        assert!((w1[(0, 0)].norm() - 1.0).abs() < 1e-15);

        let m = PhaseSpaceModel::new(basis_vector(2, 0), &cfg()).unwrap();
        let w = w_eta_isometry(&m);
        assert!((&w.adjoint() * &w).max_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(reproducing_kernel_defect(&m, &w) < 1e-12);

        let mut smp = Sampler::new(3);
        for d in 2..=8 {
            let m = PhaseSpaceModel::new(smp.unit_vector(d), &cfg()).unwrap();
            let w = w_eta_isometry(&m);
            assert!((&w.adjoint() * &w).max_diff(&ComplexMatrix::identity(d)) < 1e-10);
            assert!(reproducing_kernel_defect(&m, &w) < 1e-9);
        }
    }

    #[test]
    fn multiplication_dilations_small() {
        let m = PhaseSpaceModel::new(basis_vector(2, 0), &cfg()).unwrap();
        let cov = covariant_povm(&m, &cfg()).unwrap();
        let r = commuting_multiplication_dilations(&cov, &cfg()).unwrap();
        assert_eq!(r.commutation_defect, 0.0);
        let fq0 = HermitianOperator::combination(2, [(1.0, cov.effect(0, 0)), (1.0, cov.effect(0, 1))]);
        let chain = compress_first(&r.position, 0);
        assert!(chain.matrix().max_diff(fq0.matrix()) < 1e-12);
        assert!(r.joint_defect < 1e-12);
    }

    fn compress_first(dil: &NaimarkDilation, k: usize) -> HermitianOperator {
        crate::dilation::compress(dil, dil.block_pvm().effect(k)).unwrap()
    }

    #[test]
    fn multiplication_dilations_gaussian() {
        let cov = covariant_povm(&PhaseSpaceModel::gaussian(8, 1.0, &cfg()).unwrap(), &cfg()).unwrap();
        let r = commuting_multiplication_dilations(&cov, &cfg()).unwrap();
        assert!(r.position_chain_defect < 1e-9 && r.momentum_chain_defect < 1e-9);
        assert!(r.joint_defect < 1e-9);
    }

    #[test]
    fn moment_check_delta_is_exact() {
        let m = PhaseSpaceModel::new(basis_vector(6, 0), &cfg()).unwrap();
        let r = sharp_operator_compression_check(&m, MomentLabels::Integer, &cfg()).unwrap();
        assert_eq!(r.position.guard_radius, 0);
        assert_eq!(r.position.interior_rows.len(), 6);
        assert!(r.position.full_defect < 1e-12);
        assert!(r.position.offset.abs() < 1e-12);
        assert!(!r.position.flagged);
    }

    #[test]
    fn moment_check_gaussian_16() {
        let m = PhaseSpaceModel::gaussian(16, 1.0, &cfg()).unwrap();
        let r = sharp_operator_compression_check(&m, MomentLabels::Scaled, &cfg()).unwrap();
        assert!(!r.position.flagged);
        assert!(r.position.offset.abs() < 1e-9);
        assert!(r.position.interior_defect < 1e-6);
        // the label jump is felt by the edge rows
        assert!(r.position.full_defect > 1e-3);
    }

    #[test]
    fn moment_check_wide_gaussian_is_flagged() {
        let m = PhaseSpaceModel::gaussian(4, 2.0, &cfg()).unwrap();
        let r = sharp_operator_compression_check(&m, MomentLabels::Scaled, &cfg()).unwrap();
        assert!(r.position.flagged);
    }
}
