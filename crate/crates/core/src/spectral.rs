//! Spectral decomposition of Hermitian operators and the functional calculus
//! built on it.
//!
//! The eigensolver is a cyclic complex Jacobi method. Each rotation first
//! removes the phase of the pivot `a_pq` with a diagonal unitary and then
//! applies the classical real rotation, so the whole sweep stays unitary and
//! the output is deterministic for a fixed input.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, HermitianOperator, C64};

/// Eigenvector components below this magnitude are skipped when fixing the phase.
const PHASE_FLOOR: f64 = 1e-10;

/// `M = U diag(eigenvalues) U^dagger` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
    sweeps: usize,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are orthonormal eigenvectors, in eigenvalue order.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `U diag(values) U^dagger` for arbitrary real `values` (one per eigenvector).
    pub fn synthesize(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        assert_eq!(values.len(), n, "one value per eigenvector");
        let u = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in values.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let urk = u[(r, k)] * w;
                for col in 0..n {
                    out[(r, col)] += urk * u[(col, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.synthesize(&self.eigenvalues)
    }

    /// Max entrywise |U^dagger U - 1|.
    pub fn orthonormality_defect(&self) -> f64 {
        let u = &self.eigenvectors;
        u.adjoint()
            .matmul(u)
            .expect("square")
            .max_diff(&ComplexMatrix::identity(self.dim()))
    }

    /// Max entrywise |U diag(l) U^dagger - M|.
    pub fn reconstruction_defect(&self, m: &HermitianOperator) -> f64 {
        self.reconstruct().max_diff(m.matrix())
    }

    /// Eigenvalue clusters: consecutive eigenvalues within `tol` share a cluster.
    /// Returns (representative value, eigenvector indices) pairs in ascending order.
    pub fn clusters(&self, tol: f64) -> Vec<(f64, Vec<usize>)> {
        let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            match out.last_mut() {
                Some((_, idx)) if l - self.eigenvalues[*idx.last().unwrap()] <= tol => idx.push(k),
                _ => out.push((l, vec![k])),
            }
        }
        for (rep, idx) in &mut out {
            *rep = idx.iter().map(|&k| self.eigenvalues[k]).sum::<f64>() / idx.len() as f64;
        }
        out
    }
}

/// Diagonalizes a Hermitian operator by cyclic Jacobi rotations.
pub fn spectral_decompose(m: &HermitianOperator, cfg: &Config) -> Result<SpectralDecomposition> {
    jacobi(m.matrix(), cfg)
}

pub(crate) fn jacobi(m: &ComplexMatrix, cfg: &Config) -> Result<SpectralDecomposition> {
    let n = m.rows();
    let mut a: Vec<C64> = m.as_slice().to_vec();
    let mut v: Vec<C64> = ComplexMatrix::identity(n).as_slice().to_vec();
    let scale = m.frobenius();
    let target = cfg.jacobi_target * scale;

    let off_norm = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[p * n + q].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= target || scale == 0.0 {
            break;
        }
        if sweeps == cfg.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Negligible pivot relative to both diagonal entries: zero it outright.
                if sweeps > 4
                    && app.abs() + 100.0 * r == app.abs()
                    && aqq.abs() + 100.0 * r == aqq.abs()
                {
                    a[p * n + q] = c(0.0, 0.0);
                    a[q * n + p] = c(0.0, 0.0);
                    continue;
                }
                let phase = apq / r; // e^{i phi}
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let e_minus = phase.conj(); // e^{-i phi}
                let e_plus = phase;

                // A <- A J
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * cs - akq * e_minus * sn;
                    a[k * n + q] = akp * sn + akq * e_minus * cs;
                }
                // A <- J^dagger A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * cs - aqk * e_plus * sn;
                    a[q * n + k] = apk * sn + aqk * e_plus * cs;
                }
                a[p * n + q] = c(0.0, 0.0);
                a[q * n + p] = c(0.0, 0.0);
                a[p * n + p] = c(a[p * n + p].re, 0.0);
                a[q * n + q] = c(a[q * n + q].re, 0.0);
                // V <- V J
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * cs - vkq * e_minus * sn;
                    v[k * n + q] = vkp * sn + vkq * e_minus * cs;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut u = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        // fix the phase: first non-negligible component real positive
        let lead = (0..n)
            .map(|r| v[r * n + src])
            .find(|z| z.norm() > PHASE_FLOOR)
            .unwrap_or(c(1.0, 0.0));
        let fix = lead.conj() / lead.norm();
        for r in 0..n {
            u[(r, dst)] = v[r * n + src] * fix;
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: u,
        sweeps,
    })
}

/// `f(M) = U diag(f(l)) U^dagger`.
///
/// `f` is undefined wherever it returns NaN or an infinity; the first such
/// eigenvalue is reported as a [`Error::Domain`].
pub fn apply_function(
    m: &HermitianOperator,
    f: impl Fn(f64) -> f64,
    cfg: &Config,
) -> Result<HermitianOperator> {
    let sd = spectral_decompose(m, cfg)?;
    apply_to_decomposition(&sd, f)
}

pub fn apply_to_decomposition(
    sd: &SpectralDecomposition,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianOperator> {
    let mut values = Vec::with_capacity(sd.dim());
    for &l in sd.eigenvalues() {
        let y = f(l);
        if !y.is_finite() {
            return Err(Error::Domain { eigenvalue: l });
        }
        values.push(y);
    }
    Ok(HermitianOperator::hermitian_part(sd.synthesize(&values)))
}

/// Principal square root of a positive semidefinite operator.
///
/// Eigenvalues in `[-tol.psd, 0)` are clamped to zero; anything more negative
/// is a domain error.
pub fn sqrt_psd(a: &HermitianOperator, cfg: &Config) -> Result<HermitianOperator> {
    let sd = spectral_decompose(a, cfg)?;
    if sd.min() < -cfg.tol.psd {
        return Err(Error::Domain {
            eigenvalue: sd.min(),
        });
    }
    apply_to_decomposition(&sd, |l| l.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    fn cfg() -> Config {
        Config::default()
    }

    fn herm(m: ComplexMatrix) -> HermitianOperator {
        HermitianOperator::new(m, &cfg()).unwrap()
    }

    #[test]
    fn diagonal_is_sorted() {
        let sd = spectral_decompose(&HermitianOperator::diag(&[3.0, 1.0, 2.0]), &cfg()).unwrap();
        assert_eq!(sd.eigenvalues(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let sd = spectral_decompose(&herm(pauli::x()), &cfg()).unwrap();
        assert!((sd.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((sd.eigenvalues()[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let minus = sd.eigenvector(0);
        let plus = sd.eigenvector(1);
        // phase convention: first nonzero component real positive
        assert!((minus[0] - c(s, 0.0)).norm() < 1e-14);
        assert!((minus[1] - c(-s, 0.0)).norm() < 1e-14);
        assert!((plus[0] - c(s, 0.0)).norm() < 1e-14);
        assert!((plus[1] - c(s, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn complex_pivot() {
        let sd = spectral_decompose(&herm(pauli::y()), &cfg()).unwrap();
        assert!((sd.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!(sd.orthonormality_defect() < 1e-14);
        assert!(sd.reconstruction_defect(&herm(pauli::y())) < 1e-14);
    }

    #[test]
    fn zero_and_degenerate() {
        let sd = spectral_decompose(&HermitianOperator::diag(&[0.0, 0.0]), &cfg()).unwrap();
        assert_eq!(sd.eigenvalues(), &[0.0, 0.0]);
        assert_eq!(sd.sweeps(), 0);
        let sd = spectral_decompose(&HermitianOperator::identity(3), &cfg()).unwrap();
        assert_eq!(sd.clusters(1e-9).len(), 1);
    }

    #[test]
    fn sweep_cap_reports_residual() {
        let mut tight = cfg();
        tight.max_sweeps = 0;
        let e = spectral_decompose(&herm(pauli::x()), &tight).unwrap_err();
        match e {
            Error::NoConvergence { sweeps, residual } => {
                assert_eq!(sweeps, 0);
                assert!((residual - 2f64.sqrt()).abs() < 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn indicator_on_diagonal() {
        let m = HermitianOperator::diag(&[0.2, 0.8]);
        let r = apply_function(&m, |x| if (0.5..=1.0).contains(&x) { 1.0 } else { 0.0 }, &cfg())
            .unwrap();
        assert!(r.matrix().max_diff(&ComplexMatrix::diag_real(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn square_of_pauli_x() {
        let r = apply_function(&herm(pauli::x()), |x| x * x, &cfg()).unwrap();
        assert!(r.matrix().max_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn domain_error_names_eigenvalue() {
        let m = HermitianOperator::diag(&[0.0, 2.0]);
        match apply_function(&m, f64::ln, &cfg()) {
            Err(Error::Domain { eigenvalue }) => assert_eq!(eigenvalue, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sqrt_examples() {
        let id = sqrt_psd(&HermitianOperator::identity(3), &cfg()).unwrap();
        assert!(id.matrix().max_diff(&ComplexMatrix::identity(3)) < 1e-15);
        let d = sqrt_psd(&HermitianOperator::diag(&[4.0 / 9.0, 1.0]), &cfg()).unwrap();
        assert!(d.matrix().max_diff(&ComplexMatrix::diag_real(&[2.0 / 3.0, 1.0])) < 1e-15);

        // A(1-A) for A = (1 + 0.6 sx)/2 has both eigenvalues 0.16
        let a = HermitianOperator::identity(2).add(&herm(pauli::x()).scale(0.6)).scale(0.5);
        let prod = herm(a.matrix() * a.complement().matrix());
        let b = sqrt_psd(&prod, &cfg()).unwrap();
        let sd = spectral_decompose(&b, &cfg()).unwrap();
        for l in sd.eigenvalues() {
            assert!((l - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn sqrt_clamps_and_rejects() {
        let tiny = HermitianOperator::diag(&[-5e-10, 1.0]);
        let r = sqrt_psd(&tiny, &cfg()).unwrap();
        assert_eq!(r.matrix()[(0, 0)], c(0.0, 0.0));
        let neg = HermitianOperator::diag(&[-1e-3, 1.0]);
        assert!(matches!(sqrt_psd(&neg, &cfg()), Err(Error::Domain { .. })));
    }
}
