//! Small dense helpers: determinants by LU with partial pivoting.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Determinant of a row-major `n x n` real matrix. The input is overwritten.
pub fn det_in_place<T: Real>(a: &mut [T], n: usize) -> T {
    assert_eq!(a.len(), n * n);
    let mut det = T::one();
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == T::zero() {
            return T::zero();
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det *= d;
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f == T::zero() {
                continue;
            }
            for j in col + 1..n {
                let u = a[col * n + j];
                a[row * n + j] -= f * u;
            }
        }
    }
    det
}

/// Determinant of a row-major real matrix.
pub fn det<T: Real>(a: &[T], n: usize) -> T {
    let mut m = a.to_vec();
    det_in_place(&mut m, n)
}

/// Determinant of a row-major complex matrix.
pub fn det_complex<T: Real>(a: &[Complex<T>], n: usize) -> Complex<T> {
    assert_eq!(a.len(), n * n);
    let mut a = a.to_vec();
    let mut det = Complex::new(T::one(), T::zero());
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for row in col + 1..n {
            let v = a[row * n + col].norm();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det *= d;
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            for j in col + 1..n {
                let u = a[col * n + j];
                a[row * n + j] -= f * u;
            }
        }
    }
    det
}

/// Eigen-decomposition of a real symmetric tridiagonal matrix by implicit QL.
///
/// `diag` has length `n`, `off` holds the `n - 1` sub-diagonal entries. When
/// `vectors` is given (row-major `n x n`, usually the identity on entry) the
/// rotations are accumulated into it, so column `j` ends up as the eigenvector
/// of the returned eigenvalue `j`. Eigenvalues are returned unsorted.
pub fn tridiagonal_ql<T: Real>(
    diag: &[T],
    off: &[T],
    mut vectors: Option<&mut [T]>,
    max_iterations: usize,
) -> Result<Vec<T>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == max_iterations {
                return Err(Error::NonConvergence {
                    what: "tridiagonal QL",
                    detail: format!("eigenvalue {l} after {max_iterations} iterations"),
                });
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let zf = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * zf;
                        z[k * n + i] = c * z[k * n + i] - s * zf;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(d)
}
