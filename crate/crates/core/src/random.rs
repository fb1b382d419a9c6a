//! Seeded generators for random operators, POVMs and kernels.
//!
//! Used by the property tests, the acceptance suite, the runnable examples and
//! the scenario corpus. Everything is driven by a `ChaCha8Rng`, so a fixed seed
//! gives the same instances on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::Result;
use crate::linalg::{c, ComplexMatrix, HermitianOperator, C64};
use crate::povm::{DiscretePovm, Effect};
use crate::smearing::MarkovKernel;
use crate::spectral::apply_function;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn complex_normal(&mut self) -> C64 {
        c(self.normal(), self.normal()) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn unit_vector(&mut self, d: usize) -> Vec<C64> {
        let v: Vec<C64> = (0..d).map(|_| self.complex_normal()).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    /// Haar-ish unitary from Gram-Schmidt on a Ginibre matrix.
    pub fn unitary(&mut self, d: usize) -> ComplexMatrix {
        let g = self.ginibre(d, d);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
        for k in 0..d {
            let mut v = g.column(k);
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        ComplexMatrix::from_fn(d, d, |r, k| cols[k][r])
    }

    pub fn hermitian(&mut self, d: usize) -> HermitianOperator {
        HermitianOperator::hermitian_part(self.ginibre(d, d))
    }

    /// `G G^dagger` for a Ginibre `G`.
    pub fn psd(&mut self, d: usize) -> HermitianOperator {
        let g = self.ginibre(d, d);
        HermitianOperator::hermitian_part(&g * &g.adjoint())
    }

    /// `U diag(l) U^dagger` with eigenvalues drawn uniformly from [0, 1].
    pub fn effect(&mut self, d: usize, cfg: &Config) -> Effect {
        let u = self.unitary(d);
        let l: Vec<f64> = (0..d).map(|_| self.rng.gen::<f64>()).collect();
        let m = &(&u * &ComplexMatrix::diag_real(&l)) * &u.adjoint();
        Effect::new(HermitianOperator::hermitian_part(m), cfg).expect("spectrum in [0,1]")
    }

    /// `S^{-1/2} A_i S^{-1/2}` with random PSD `A_i` and `S = sum A_i`.
    ///
    /// Panics when `n` is zero.
    pub fn povm(&mut self, d: usize, n: usize, cfg: &Config) -> Result<DiscretePovm> {
        let parts: Vec<HermitianOperator> = (0..n).map(|_| self.psd(d)).collect();
        let total = HermitianOperator::combination(d, parts.iter().map(|p| (1.0, p)));
        let inv_sqrt = apply_function(&total, |x| 1.0 / x.sqrt(), cfg)?;
        let mut ops: Vec<HermitianOperator> = parts[..n - 1]
            .iter()
            .map(|p| HermitianOperator::hermitian_part(inv_sqrt.matrix().sandwich(p.matrix()).unwrap()))
            .collect();
        // the last effect closes the sum exactly
        let rest = HermitianOperator::combination(d, ops.iter().map(|p| (1.0, p)));
        ops.push(HermitianOperator::identity(d).sub(&rest));
        DiscretePovm::from_operators(ops, cfg)
    }

    /// Projectors onto a random basis, grouped into `n` nonempty blocks.
    pub fn pvm(&mut self, d: usize, n: usize, cfg: &Config) -> Result<DiscretePovm> {
        assert!(1 <= n && n <= d, "need 1 <= n <= d");
        let u = self.unitary(d);
        let mut owner: Vec<usize> = (0..d).map(|k| if k < n { k } else { self.rng.gen_range(0..n) }).collect();
        // shuffle so the first n vectors are not always singletons
        for k in (1..d).rev() {
            let j = self.rng.gen_range(0..=k);
            owner.swap(k, j);
        }
        let ops = (0..n)
            .map(|blk| {
                let mut p = ComplexMatrix::zeros(d, d);
                for k in (0..d).filter(|&k| owner[k] == blk) {
                    p.add_scaled(&ComplexMatrix::outer(&u.column(k)), 1.0);
                }
                HermitianOperator::hermitian_part(p)
            })
            .collect();
        DiscretePovm::from_operators(ops, cfg)
    }

    pub fn probability_vector(&mut self, n: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..n).map(|_| -(1.0 - self.rng.gen::<f64>()).ln()).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    }

    pub fn kernel(&mut self, rows: usize, cols: usize) -> MarkovKernel {
        let w: Vec<Vec<f64>> = (0..rows).map(|_| self.probability_vector(cols)).collect();
        MarkovKernel::new(w).expect("rows are probability vectors")
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            let j = self.rng.gen_range(0..=k);
            p.swap(k, j);
        }
        p
    }
}
