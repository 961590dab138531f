//! Hermitian eigensolver: Householder reduction to real tridiagonal form,
//! then implicit QL.

use num_complex::Complex;

use super::matrix::HermitianMatrix;
use crate::error::Result;
use crate::linalg::tridiagonal_ql;
use crate::scalar::Real;

/// Default cap on QL iterations per eigenvalue.
pub const MAX_QL_ITERATIONS: usize = 50;

/// Sorted eigenvalues of one sampled matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample<T> {
    pub eigenvalues: Vec<T>,
    pub source_seed: u64,
}

/// Eigenvalues and unitary eigenvector matrix (columns), row-major.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub vectors: Vec<Complex<T>>,
}

struct Reduction<T> {
    diag: Vec<T>,
    off: Vec<T>,
    /// `Q D` with `H = (Q D) T (Q D)^*`, when requested.
    basis: Option<Vec<Complex<T>>>,
}

fn tridiagonalize<T: Real>(h: &HermitianMatrix<T>, want_basis: bool) -> Reduction<T> {
    let n = h.size();
    let zero = Complex::new(T::zero(), T::zero());
    let mut a: Vec<Complex<T>> = h.entries().to_vec();
    let mut q = if want_basis {
        let mut q = vec![zero; n * n];
        for i in 0..n {
            q[i * n + i] = Complex::new(T::one(), T::zero());
        }
        Some(q)
    } else {
        None
    };
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    let two = T::lit(2.0);
    for k in 0..n.saturating_sub(2) {
        let s = k + 1;
        let norm: T = (s..n).map(|i| a[i * n + k].norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = a[s * n + k];
        let phase = if x0.norm() == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for i in s..n {
            v[i] = a[i * n + k];
        }
        v[s] -= alpha;
        let vnorm: T = (s..n).map(|i| v[i].norm_sqr()).sum::<T>().sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for vi in v.iter_mut().take(n).skip(s) {
            *vi = *vi / vnorm;
        }
        // p = A v on the trailing block, K = v^* p.
        for i in s..n {
            let mut acc = zero;
            for j in s..n {
                acc += a[i * n + j] * v[j];
            }
            p[i] = acc;
        }
        let mut kk = zero;
        for i in s..n {
            kk += v[i].conj() * p[i];
        }
        let kre = kk.re;
        // w = p - K v, A <- A - 2 (v w^* + w v^*)
        for i in s..n {
            p[i] -= v[i] * kre;
        }
        for i in s..n {
            for j in s..n {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                a[i * n + j] -= upd * two;
            }
        }
        a[s * n + k] = alpha;
        a[k * n + s] = alpha.conj();
        for i in s + 1..n {
            a[i * n + k] = zero;
            a[k * n + i] = zero;
        }
        if let Some(q) = q.as_mut() {
            // Q <- Q (I - 2 v v^*)
            for r in 0..n {
                let mut dot = zero;
                for j in s..n {
                    dot += q[r * n + j] * v[j];
                }
                for j in s..n {
                    q[r * n + j] -= dot * v[j].conj() * two;
                }
            }
        }
    }
    let diag: Vec<T> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut phases = vec![Complex::new(T::one(), T::zero()); n];
    for i in 0..n.saturating_sub(1) {
        let e = a[(i + 1) * n + i];
        let m = e.norm();
        off.push(m);
        phases[i + 1] = if m == T::zero() { phases[i] } else { phases[i] * e / m };
    }
    let basis = q.map(|mut q| {
        for r in 0..n {
            for c in 0..n {
                q[r * n + c] *= phases[c];
            }
        }
        q
    });
    Reduction { diag, off, basis }
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn eigenvalues<T: Real>(h: &HermitianMatrix<T>) -> Result<Vec<T>> {
    let red = tridiagonalize(h, false);
    let mut vals = tridiagonal_ql(&red.diag, &red.off, None, MAX_QL_ITERATIONS)?;
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Eigenvalues with the seed recorded for provenance.
pub fn spectrum<T: Real>(h: &HermitianMatrix<T>, source_seed: u64) -> Result<SpectrumSample<T>> {
    Ok(SpectrumSample { eigenvalues: eigenvalues(h)?, source_seed })
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors.
pub fn eigen_decomposition<T: Real>(h: &HermitianMatrix<T>) -> Result<EigenDecomposition<T>> {
    let n = h.size();
    let red = tridiagonalize(h, true);
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }
    let vals = tridiagonal_ql(&red.diag, &red.off, Some(&mut z), MAX_QL_ITERATIONS)?;
    let qd = red.basis.expect("basis requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let zero = Complex::new(T::zero(), T::zero());
    let mut vectors = vec![zero; n * n];
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            let mut acc = zero;
            for k in 0..n {
                acc += qd[r * n + k] * z[k * n + src];
            }
            vectors[r * n + col] = acc;
        }
    }
    Ok(EigenDecomposition { eigenvalues: order.iter().map(|&i| vals[i]).collect(), vectors })
}
