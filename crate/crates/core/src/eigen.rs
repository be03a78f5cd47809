//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

const MAX_SWEEPS: usize = 64;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

/// Eigenvalues ascending; `vectors` holds eigenvector `k` in column `k`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: HermitianMatrix,
    /// `max_k ‖A v_k − λ_k v_k‖`.
    pub residual: f64,
    pub sweeps: usize,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim)
            .map(|i| self.vectors.get(i, k))
            .collect()
    }
}

/// Diagonalizes `a` and checks every residual against `rel_tol · ‖a‖_F`.
pub fn hermitian_eigen(a: &HermitianMatrix, rel_tol: f64) -> Result<HermitianEigen> {
    let n = a.dim;
    let scale = a.frobenius_norm();
    let mut m = a.clone();
    let mut v = HermitianMatrix::from_fn(n, |i, j| {
        Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
    });
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && m.off_diagonal_norm() > 1e-15 * scale {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                rotate(&mut m, &mut v, p, q, apq / mag, mag);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let vectors = HermitianMatrix::from_fn(n, |i, k| v.get(i, order[k]));

    let mut residual: f64 = 0.0;
    for (k, lambda) in values.iter().enumerate() {
        let mut r2 = 0.0;
        for i in 0..n {
            let mut av = Complex64::new(0.0, 0.0);
            for j in 0..n {
                av += a.get(i, j) * vectors.get(j, k);
            }
            r2 += (av - vectors.get(i, k) * lambda).norm_sqr();
        }
        residual = residual.max(r2.sqrt());
    }
    if residual > rel_tol * scale.max(f64::MIN_POSITIVE) {
        return Err(CoreError::EigenNonConvergence {
            dimension: n,
            residual,
        });
    }
    Ok(HermitianEigen {
        values,
        vectors,
        residual,
        sweeps,
    })
}

/// `A ← Jᴴ A J`, `V ← V J` with the unitary that zeros `A[p][q]`.
fn rotate(
    m: &mut HermitianMatrix,
    v: &mut HermitianMatrix,
    p: usize,
    q: usize,
    phase: Complex64,
    mag: f64,
) {
    let n = m.dim;
    let tau = (m.get(q, q).re - m.get(p, p).re) / (2.0 * mag);
    let t = if tau >= 0.0 { 1.0 } else { -1.0 } / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sp = phase * s;
    let sp_conj = sp.conj();

    for k in 0..n {
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, akp * c - akq * sp_conj);
        m.set(k, q, akp * sp + akq * c);
    }
    for k in 0..n {
        let apk = m.get(p, k);
        let aqk = m.get(q, k);
        m.set(p, k, apk * c - aqk * sp);
        m.set(q, k, apk * sp_conj + aqk * c);
    }
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    let (dp, dq) = (m.get(p, p).re, m.get(q, q).re);
    m.set(p, p, Complex64::new(dp, 0.0));
    m.set(q, q, Complex64::new(dq, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * sp_conj);
        v.set(k, q, vkp * sp + vkq * c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut m = HermitianMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, c(rng.gen_range(-1.0..1.0), 0.0));
            for j in i + 1..n {
                let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m.set(i, j, v);
                m.set(j, i, v.conj());
            }
        }
        m
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[1, 2i], [−2i, −1]] has eigenvalues ±√5
        let m = HermitianMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c(1.0, 0.0),
            (1, 1) => c(-1.0, 0.0),
            (0, 1) => c(0.0, 2.0),
            _ => c(0.0, -2.0),
        });
        let e = hermitian_eigen(&m, 1e-12).unwrap();
        assert!((e.values[0] + 5f64.sqrt()).abs() < 1e-14);
        assert!((e.values[1] - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn diagonal_input_needs_no_sweep() {
        let m =
            HermitianMatrix::from_fn(3, |i, j| c(if i == j { 3.0 - i as f64 } else { 0.0 }, 0.0));
        let e = hermitian_eigen(&m, 1e-12).unwrap();
        assert_eq!(e.sweeps, 0);
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn random_matrices_have_small_residuals() {
        for (n, seed) in [(5, 1), (17, 2), (40, 3)] {
            let m = random_hermitian(n, seed);
            let e = hermitian_eigen(&m, 1e-10).unwrap();
            let trace: f64 = (0..n).map(|i| m.get(i, i).re).sum();
            assert!((e.values.iter().sum::<f64>() - trace).abs() < 1e-11);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            // orthonormal columns
            for a in 0..n {
                for b in 0..n {
                    let dot: Complex64 = (0..n)
                        .map(|i| e.vectors.get(i, a).conj() * e.vectors.get(i, b))
                        .sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((dot - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn agrees_with_nalgebra() {
        let n = 24;
        let m = random_hermitian(n, 7);
        let dense = nalgebra::DMatrix::from_fn(n, n, |i, j| m.get(i, j));
        let mut reference: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        let e = hermitian_eigen(&m, 1e-10).unwrap();
        for (a, b) in e.values.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let m = HermitianMatrix::from_fn(4, |i, j| c(if i == j { 0.0 } else { 1.0 }, 0.0));
        let e = hermitian_eigen(&m, 1e-12).unwrap();
        let want = [-1.0, -1.0, -1.0, 3.0];
        for (a, b) in e.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
