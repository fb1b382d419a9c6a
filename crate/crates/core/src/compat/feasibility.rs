//! Numerical joint-measurability test.
//!
//! Looks for a grid of PSD operators `G_ij` with row sums `F1_i` and column
//! sums `F2_j` by Dykstra's alternating projections between the affine set
//! `A` of grids with those marginals and the blockwise PSD cone.
//!
//! Incompatibility is certified by a separating functional: a grid `Z` that
//! is orthogonal to the directions of `A` (so `<Z, G>` is the same number for
//! every `G` in `A`) and PSD blockwise (so `<Z, G> >= 0` on the cone). If that
//! number is negative no joint exists. `Z` is read off the residual between the
//! current PSD iterate and its affine projection.

use serde::Serialize;

use super::{product_joint_pvm, symmetric_product, JointPovm};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::povm::{max_commutation_defect, DiscretePovm};
use crate::spectral::{apply_function, jacobi};

/// Iterations between feasibility and certificate checks.
const CHECK_EVERY: usize = 10;
/// Warm-started eigenbases are reset this often to stop unitary drift.
const BASIS_RESET: usize = 500;
/// Past differences kept by the Anderson extrapolation.
const ANDERSON_MEMORY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Compatible,
    Incompatible,
    Undecided,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Compatible => "compatible",
            Decision::Incompatible => "incompatible",
            Decision::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompatibilityVerdict {
    pub decision: Decision,
    /// Present exactly when compatible.
    pub witness: Option<JointPovm>,
    /// Normalized value of the best separating functional found, when one was computed.
    pub infeasibility_gap: Option<f64>,
    pub iterations: usize,
    /// "identical", "commuting", "dykstra" or "dykstra-reduced".
    pub method: &'static str,
    /// Most negative eigenvalue of the last affine iterate (0 for the closed-form paths).
    pub psd_residual: f64,
}

impl CompatibilityVerdict {
    pub fn is_compatible(&self) -> bool {
        self.decision == Decision::Compatible
    }

    pub fn is_incompatible(&self) -> bool {
        self.decision == Decision::Incompatible
    }

    fn closed_form(witness: JointPovm, method: &'static str) -> Self {
        Self {
            decision: Decision::Compatible,
            witness: Some(witness),
            infeasibility_gap: None,
            iterations: 0,
            method,
            psd_residual: 0.0,
        }
    }
}

type Grid = Vec<ComplexMatrix>;

struct Problem {
    d: usize,
    n1: usize,
    n2: usize,
    f1: Vec<ComplexMatrix>,
    f2: Vec<ComplexMatrix>,
    /// Orthonormal basis of `range(F1_i) ∩ range(F2_j)` per cell; `None` when it is all of `C^d`.
    support: Vec<Option<ComplexMatrix>>,
}

/// Basis of the vectors orthogonal to the null spaces of both effects.
///
/// Any `G_ij <= F1_i, F2_j` lives there, so restricting the PSD step to it
/// loses no joint and keeps the feasible set of the shifted cone nonempty
/// when some effect is singular.
fn cell_support(a: &ComplexMatrix, b: &ComplexMatrix, cfg: &Config) -> Result<Option<ComplexMatrix>> {
    let d = a.rows();
    let mut kernel = ComplexMatrix::zeros(d, d);
    for m in [a, b] {
        let sd = jacobi(m, cfg)?;
        for (k, &v) in sd.eigenvalues().iter().enumerate() {
            if v <= cfg.tol.rank {
                kernel.add_scaled(&ComplexMatrix::outer(&sd.eigenvector(k)), 1.0);
            }
        }
    }
    if kernel.max_abs() == 0.0 {
        return Ok(None);
    }
    let sd = jacobi(&kernel, cfg)?;
    let keep: Vec<usize> = (0..d).filter(|&k| sd.eigenvalues()[k] <= cfg.tol.rank).collect();
    let ev = sd.eigenvectors();
    Ok(Some(ComplexMatrix::from_fn(d, keep.len(), |r, c| ev[(r, keep[c])])))
}

impl Problem {
    /// Orthogonal projection onto `{X : sum_j X_ij = F1_i, sum_i X_ij = F2_j}`.
    fn project_affine(&self, x: &[ComplexMatrix]) -> Grid {
        let (n1, n2, d) = (self.n1, self.n2, self.d);
        let mut r: Vec<ComplexMatrix> = self.f1.clone();
        let mut c: Vec<ComplexMatrix> = self.f2.clone();
        for i in 0..n1 {
            for j in 0..n2 {
                let blk = &x[i * n2 + j];
                r[i].add_scaled(blk, -1.0);
                c[j].add_scaled(blk, -1.0);
            }
        }
        let mut s = ComplexMatrix::zeros(d, d);
        for m in r.iter().chain(&c) {
            s.add_scaled(m, 0.5);
        }
        let mut out = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                let mut blk = x[i * n2 + j].clone();
                blk.add_scaled(&r[i], 1.0 / n2 as f64);
                blk.add_scaled(&c[j], 1.0 / n1 as f64);
                blk.add_scaled(&s, -1.0 / (n1 * n2) as f64);
                out.push(blk);
            }
        }
        out
    }
}

/// Per-block eigensolver that starts Jacobi from the previous eigenbasis.
struct WarmEig {
    basis: Vec<ComplexMatrix>,
    calls: usize,
}

impl WarmEig {
    fn new(dims: impl IntoIterator<Item = usize>) -> Self {
        Self {
            basis: dims.into_iter().map(ComplexMatrix::identity).collect(),
            calls: 0,
        }
    }

    fn tick(&mut self) {
        self.calls += 1;
        if self.calls % BASIS_RESET == 0 {
            for b in &mut self.basis {
                *b = ComplexMatrix::identity(b.rows());
            }
        }
    }

    fn eig(&mut self, k: usize, m: &ComplexMatrix, cfg: &Config) -> Result<(Vec<f64>, ComplexMatrix)> {
        let u = &self.basis[k];
        let rotated = HermitianOperator::hermitian_part(u.sandwich(m)?);
        let sd = jacobi(rotated.matrix(), cfg)?;
        let w = u * sd.eigenvectors();
        self.basis[k] = w.clone();
        Ok((sd.eigenvalues().to_vec(), w))
    }
}

fn flatten(x: &[ComplexMatrix], q: &[ComplexMatrix]) -> Vec<f64> {
    x.iter().chain(q).flat_map(|m| m.as_slice().iter().flat_map(|z| [z.re, z.im])).collect()
}

fn unflatten(z: &[f64], x: &mut [ComplexMatrix], q: &mut [ComplexMatrix]) {
    let mut it = z.chunks_exact(2);
    for m in x.iter_mut().chain(q.iter_mut()) {
        let (r, c) = (m.rows(), m.cols());
        for i in 0..r {
            for j in 0..c {
                let p = it.next().expect("length");
                m[(i, j)] = crate::linalg::c(p[0], p[1]);
            }
        }
    }
}

/// Type-II Anderson acceleration of a fixed-point map with a restart safeguard.
struct Anderson {
    memory: usize,
    dz: std::collections::VecDeque<Vec<f64>>,
    dg: std::collections::VecDeque<Vec<f64>>,
    /// Gram matrix of `dg`, kept in step with it.
    gram: std::collections::VecDeque<std::collections::VecDeque<f64>>,
    last: Option<(Vec<f64>, Vec<f64>)>,
    best: f64,
}

impl Anderson {
    fn new(memory: usize) -> Self {
        Self {
            memory,
            dz: Default::default(),
            dg: Default::default(),
            gram: Default::default(),
            last: None,
            best: f64::INFINITY,
        }
    }

    /// `z` is the current point, `tz` its image; returns the next point.
    fn step(&mut self, z: Vec<f64>, tz: Vec<f64>) -> Vec<f64> {
        let g: Vec<f64> = tz.iter().zip(&z).map(|(a, b)| a - b).collect();
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gn > 2.0 * self.best {
            self.dz.clear();
            self.dg.clear();
            self.gram.clear();
            self.last = None;
            self.best = gn;
        }
        self.best = self.best.min(gn);
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        if let Some((lz, lg)) = self.last.take() {
            if self.dz.len() == self.memory {
                self.dz.pop_front();
                self.dg.pop_front();
                self.gram.pop_front();
                for row in &mut self.gram {
                    row.pop_front();
                }
            }
            let dgn: Vec<f64> = g.iter().zip(&lg).map(|(a, b)| a - b).collect();
            let col: Vec<f64> = self.dg.iter().map(|v| dot(v, &dgn)).collect();
            for (row, v) in self.gram.iter_mut().zip(&col) {
                row.push_back(*v);
            }
            let mut last_row: std::collections::VecDeque<f64> = col.into();
            last_row.push_back(dot(&dgn, &dgn));
            self.gram.push_back(last_row);
            self.dz.push_back(z.iter().zip(&lz).map(|(a, b)| a - b).collect());
            self.dg.push_back(dgn);
        }
        self.last = Some((z, g.clone()));
        let m = self.dg.len();
        if m == 0 {
            return tz;
        }
        let mut h: Vec<Vec<f64>> = self.gram.iter().map(|row| row.iter().copied().collect()).collect();
        let rhs: Vec<f64> = self.dg.iter().map(|v| dot(v, &g)).collect();
        let reg = 1e-12 * (0..m).map(|i| h[i][i]).sum::<f64>().max(1e-300);
        for i in 0..m {
            h[i][i] += reg;
        }
        let Some(gamma) = solve(h, rhs) else {
            return tz;
        };
        let mut out = tz;
        for k in 0..m {
            for (o, (a, b)) in out.iter_mut().zip(self.dz[k].iter().zip(&self.dg[k])) {
                *o -= gamma[k] * (a + b);
            }
        }
        out
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// `U diag(values) U^dagger`.
fn synthesize(u: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let n = u.rows();
    let scaled = ComplexMatrix::from_fn(n, n, |r, k| u[(r, k)] * values[k]);
    let m = &scaled * &u.adjoint();
    HermitianOperator::hermitian_part(m).into_matrix()
}

fn inner(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.as_slice()
                .iter()
                .zip(y.as_slice())
                .map(|(p, q)| (p.conj() * q).re)
                .sum::<f64>()
        })
        .sum()
}

/// Decides whether `F1` and `F2` are marginals of one joint POVM.
///
/// Identical inputs and commuting inputs are answered in closed form (the
/// diagonal grid and the product grid). Otherwise Dykstra's iteration runs
/// from `X_ij = (F1_i F2_j + F2_j F1_i) / 2`, which already has the right
/// marginals, and every few steps checks
///
/// * the affine iterate: if its eigenvalues are all above `-tol.feas`, its
///   clamped and renormalized version is a joint whose marginals are within
///   `tol.marginal` of the inputs -> compatible;
/// * the separating functional: normalized gap above `tol.gap_threshold` ->
///   incompatible.
///
/// The PSD step projects onto eigenvalues `>= tol.feas / 10` so that a
/// strictly feasible problem is solved in finitely many steps. The Dykstra
/// state `(x, q)` is extrapolated with Anderson acceleration, restarted
/// whenever the fixed-point residual grows past twice its best value.
///
/// When the iteration cap is reached undecided and some effect is singular,
/// a second pass restricts each PSD step to `range(F1_i) ∩ range(F2_j)`
/// (null eigenvalues below `tol.rank`). Every joint lives on that face, and on
/// it the shifted cone meets the affine set again.
pub fn jm_feasibility(f1: &DiscretePovm, f2: &DiscretePovm, cfg: &Config) -> Result<CompatibilityVerdict> {
    if f1.space_dim() != f2.space_dim() {
        return Err(Error::DimensionMismatch {
            expected: f1.space_dim(),
            found: f2.space_dim(),
        });
    }
    let labels1: Vec<String> = f1.labels().into_iter().map(String::from).collect();
    let labels2: Vec<String> = f2.labels().into_iter().map(String::from).collect();
    let (n1, n2, d) = (f1.len(), f2.len(), f1.space_dim());

    if n1 == n2 && f1.effects().zip(f2.effects()).all(|(a, b)| a.matrix().max_diff(b.matrix()) <= cfg.tol.reconstruct) {
        let zero = HermitianOperator::hermitian_part(ComplexMatrix::zeros(d, d));
        let grid = (0..n1 * n2)
            .map(|k| if k / n2 == k % n2 { f1.effect(k / n2).clone() } else { zero.clone() })
            .collect();
        let j = JointPovm::new(labels1, labels2, grid, cfg)?;
        return Ok(CompatibilityVerdict::closed_form(j, "identical"));
    }
    if max_commutation_defect(f1, f2)? <= cfg.tol.commute {
        return Ok(CompatibilityVerdict::closed_form(product_joint_pvm(f1, f2, cfg)?, "commuting"));
    }

    let mut problem = Problem {
        d,
        n1,
        n2,
        f1: f1.effects().map(|e| e.matrix().clone()).collect(),
        f2: f2.effects().map(|e| e.matrix().clone()).collect(),
        support: vec![None; n1 * n2],
    };
    let first = dykstra(&problem, &labels1, &labels2, f1, f2, cfg)?;
    if first.decision != Decision::Undecided {
        return Ok(first);
    }
    problem.support = f1
        .effects()
        .flat_map(|a| f2.effects().map(move |b| (a, b)))
        .map(|(a, b)| cell_support(a.matrix(), b.matrix(), cfg))
        .collect::<Result<_>>()?;
    if problem.support.iter().all(Option::is_none) {
        return Ok(first);
    }
    let mut second = dykstra(&problem, &labels1, &labels2, f1, f2, cfg)?;
    second.iterations += first.iterations;
    if second.decision == Decision::Undecided {
        second.infeasibility_gap = match (first.infeasibility_gap, second.infeasibility_gap) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        };
    }
    Ok(second)
}

fn dykstra(
    problem: &Problem,
    labels1: &[String],
    labels2: &[String],
    f1: &DiscretePovm,
    f2: &DiscretePovm,
    cfg: &Config,
) -> Result<CompatibilityVerdict> {
    let (n1, n2, d) = (problem.n1, problem.n2, problem.d);
    let method = if problem.support.iter().all(Option::is_none) { "dykstra" } else { "dykstra-reduced" };
    let x0: Grid = f1
        .effects()
        .flat_map(|a| f2.effects().map(move |b| symmetric_product(a, b).into_matrix()))
        .collect();
    let floor = cfg.tol.feas / 10.0;
    let blocks = n1 * n2;
    let mut step_eig = WarmEig::new(problem.support.iter().map(|w| w.as_ref().map_or(d, |w| w.cols())));
    let mut check_eig = WarmEig::new(std::iter::repeat(d).take(blocks));

    let mut x = x0.clone();
    let mut q: Grid = vec![ComplexMatrix::zeros(d, d); blocks];
    let mut best_gap = f64::NEG_INFINITY;
    let mut psd_residual = f64::NEG_INFINITY;

    let mut anderson = Anderson::new(ANDERSON_MEMORY);
    let mut z = flatten(&x, &q);
    for it in 1..=cfg.feas_max_iter {
        let a = problem.project_affine(&x);

        if it % CHECK_EVERY == 1 || it == cfg.feas_max_iter {
            check_eig.tick();
            let mut clamped = Vec::with_capacity(blocks);
            let mut min_eig = f64::INFINITY;
            for (k, blk) in a.iter().enumerate() {
                let (vals, u) = check_eig.eig(k, blk, cfg)?;
                min_eig = min_eig.min(vals[0]);
                let pos: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
                clamped.push(synthesize(&u, &pos));
            }
            psd_residual = min_eig.min(0.0);
            if min_eig >= -cfg.tol.feas {
                if let Some(w) = polished_witness(&clamped, labels1, labels2, f1, f2, cfg)? {
                    return Ok(CompatibilityVerdict {
                        decision: Decision::Compatible,
                        witness: Some(w),
                        infeasibility_gap: None,
                        iterations: it,
                        method,
                        psd_residual,
                    });
                }
            }
            if min_eig < -cfg.tol.feas {
                let gap = separation_gap(problem, &clamped, &x0, cfg)?;
                best_gap = best_gap.max(gap);
                if gap > cfg.tol.gap_threshold {
                    return Ok(CompatibilityVerdict {
                        decision: Decision::Incompatible,
                        witness: None,
                        infeasibility_gap: Some(gap),
                        iterations: it,
                        method,
                        psd_residual,
                    });
                }
            }
        }

        step_eig.tick();
        for k in 0..blocks {
            let mut y = a[k].clone();
            y.add_scaled(&q[k], 1.0);
            let xk = match &problem.support[k] {
                None => {
                    let (vals, u) = step_eig.eig(k, &y, cfg)?;
                    let lifted: Vec<f64> = vals.iter().map(|v| v.max(floor)).collect();
                    synthesize(&u, &lifted)
                }
                Some(w) if w.cols() == 0 => ComplexMatrix::zeros(d, d),
                Some(w) => {
                    let (vals, u) = step_eig.eig(k, &w.sandwich(&y)?, cfg)?;
                    let lifted: Vec<f64> = vals.iter().map(|v| v.max(floor)).collect();
                    HermitianOperator::hermitian_part(w.adjoint().sandwich(&synthesize(&u, &lifted))?).into_matrix()
                }
            };
            // q <- a + q - x
            q[k] = &y - &xk;
            x[k] = xk;
        }
        z = anderson.step(z, flatten(&x, &q));
        unflatten(&z, &mut x, &mut q);
    }
    Ok(CompatibilityVerdict {
        decision: Decision::Undecided,
        witness: None,
        infeasibility_gap: best_gap.is_finite().then(|| best_gap.max(0.0)),
        iterations: cfg.feas_max_iter,
        method,
        psd_residual,
    })
}

/// `S^{-1/2} b_ij S^{-1/2}` with `S = sum b_ij`: exactly PSD, exactly normalized.
fn polished_witness(
    clamped: &[ComplexMatrix],
    labels1: &[String],
    labels2: &[String],
    f1: &DiscretePovm,
    f2: &DiscretePovm,
    cfg: &Config,
) -> Result<Option<JointPovm>> {
    let d = f1.space_dim();
    let mut s = ComplexMatrix::zeros(d, d);
    for b in clamped {
        s.add_scaled(b, 1.0);
    }
    let inv_sqrt = apply_function(&HermitianOperator::hermitian_part(s), |x| 1.0 / x.sqrt(), cfg)?;
    let grid = clamped
        .iter()
        .map(|b| HermitianOperator::hermitian_part(inv_sqrt.matrix().sandwich(b).expect("same shape")))
        .collect();
    let Ok(j) = JointPovm::new(labels1.to_vec(), labels2.to_vec(), grid, cfg) else {
        return Ok(None);
    };
    let defect = j.marginal_defect(f1, f2, cfg)?.expect("same shape");
    Ok((defect <= cfg.tol.marginal).then_some(j))
}

/// Normalized value of the separating functional built from `b - P_A(b)`.
///
/// `w = b - P_A(b)` is orthogonal to the directions of the affine set, so
/// `<w, G> = <w, x0>` for every grid `G` with the right marginals. Adding
/// `s 1` to every block keeps that property (it adds `s d` to both sides) and
/// makes each block PSD. The gap is `-<Z, x0> / max_ij lambda_max(Z_ij)`;
/// a positive gap means no PSD grid has the prescribed marginals.
fn separation_gap(problem: &Problem, b: &[ComplexMatrix], x0: &[ComplexMatrix], cfg: &Config) -> Result<f64> {
    let pb = problem.project_affine(b);
    let w: Grid = b.iter().zip(&pb).map(|(x, y)| x - y).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for blk in &w {
        let sd = jacobi(blk, cfg)?;
        lo = lo.min(sd.min());
        hi = hi.max(sd.max());
    }
    let shift = (-lo).max(0.0);
    let norm = hi + shift;
    if norm <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let value = inner(&w, x0) + shift * problem.d as f64;
    Ok(-value / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::povm::Effect;
    use crate::random::Sampler;

    fn cfg() -> Config {
        Config::default()
    }

    fn unbiased(a: f64, m: ComplexMatrix) -> DiscretePovm {
        let s = HermitianOperator::new(m, &cfg()).unwrap();
        let e = HermitianOperator::identity(2).add(&s.scale(a)).scale(0.5);
        DiscretePovm::dichotomic(&Effect::new(e, &cfg()).unwrap())
    }

    #[test]
    fn self_compatibility_is_diagonal() {
        let f = Sampler::new(3).povm(3, 3, &cfg()).unwrap();
        let v = jm_feasibility(&f, &f, &cfg()).unwrap();
        assert!(v.is_compatible());
        let w = v.witness.unwrap();
        assert!(w.get(1, 1).matrix().max_diff(f.effect(1).matrix()) < 1e-15);
        assert!(w.get(0, 2).matrix().max_abs() < 1e-15);
    }

    #[test]
    fn sharp_pauli_pair_is_incompatible() {
        let v = jm_feasibility(&unbiased(1.0, pauli::z()), &unbiased(1.0, pauli::x()), &cfg()).unwrap();
        assert!(v.is_incompatible(), "{:?}", v.decision);
        assert!(v.infeasibility_gap.unwrap() > 1e-5);
    }

    #[test]
    fn unbiased_pair_flips_at_the_boundary() {
        let inside = jm_feasibility(&unbiased(0.69, pauli::x()), &unbiased(0.69, pauli::z()), &cfg()).unwrap();
        assert!(inside.is_compatible(), "{:?}", inside.decision);
        let w = inside.witness.unwrap();
        let (m1, m2) = w.marginals(&cfg()).unwrap();
        assert!(m1.max_effect_diff(&unbiased(0.69, pauli::x())).unwrap() < 1e-7);
        assert!(m2.max_effect_diff(&unbiased(0.69, pauli::z())).unwrap() < 1e-7);

        let outside = jm_feasibility(&unbiased(0.72, pauli::x()), &unbiased(0.72, pauli::z()), &cfg()).unwrap();
        assert!(outside.is_incompatible(), "{:?}", outside.decision);
    }

    #[test]
    fn verdict_is_symmetric() {
        let mut s = Sampler::new(9);
        for _ in 0..4 {
            let f1 = s.povm(2, 2, &cfg()).unwrap();
            let f2 = s.povm(2, 3, &cfg()).unwrap();
            let a = jm_feasibility(&f1, &f2, &cfg()).unwrap();
            let b = jm_feasibility(&f2, &f1, &cfg()).unwrap();
            assert_eq!(a.decision, b.decision);
            if let (Some(wa), Some(wb)) = (a.witness, b.witness) {
                assert!(wa.transposed().grid().iter().zip(wb.grid()).all(|(x, y)| x.matrix().max_diff(y.matrix()) < 1e-12));
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let r = jm_feasibility(&DiscretePovm::trivial(2), &DiscretePovm::trivial(3), &cfg());
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }
}
