use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Generator for sample `index` of a run seeded with `seed`.
///
/// Each sample draws from its own ChaCha stream, so results do not depend on
/// how samples are scheduled across threads.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub(crate) fn normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let z: f64 = StandardNormal.sample(rng);
    T::lit(z)
}

/// A dense complex Hermitian matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T> {
    size: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> HermitianMatrix<T> {
    /// Builds a matrix from its upper triangle; the lower triangle is mirrored
    /// and the diagonal made real.
    pub fn from_upper<F: FnMut(usize, usize) -> Complex<T>>(size: usize, mut upper: F) -> Result<Self> {
        if size == 0 {
            return Err(invalid("matrix size must be at least 1"));
        }
        let mut entries = vec![Complex::new(T::zero(), T::zero()); size * size];
        for i in 0..size {
            entries[i * size + i] = Complex::new(upper(i, i).re, T::zero());
            for j in i + 1..size {
                let v = upper(i, j);
                entries[i * size + j] = v;
                entries[j * size + i] = v.conj();
            }
        }
        Ok(Self { size, entries })
    }

    /// Checks Hermiticity of a full row-major array.
    pub fn from_entries(size: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(invalid("entry count does not match size"));
        }
        for i in 0..size {
            for j in i..size {
                if entries[i * size + j] != entries[j * size + i].conj() {
                    return Err(invalid(format!("entries ({i},{j}) and ({j},{i}) are not conjugate")));
                }
            }
        }
        Ok(Self { size, entries })
    }

    pub fn diagonal(values: &[T]) -> Result<Self> {
        Self::from_upper(values.len(), |i, j| {
            Complex::new(if i == j { values[i] } else { T::zero() }, T::zero())
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn trace(&self) -> T {
        (0..self.size).map(|i| self.entries[i * self.size + i].re).sum()
    }

    /// `Tr H^2 = sum |H_ij|^2`.
    pub fn trace_squared(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_entry(&self) -> T {
        self.entries.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Applies `f` to every independent real coordinate: the diagonal, then
    /// real and imaginary parts of the strict upper triangle.
    pub(crate) fn map_coordinates<F: FnMut(T, bool) -> T>(&self, mut f: F) -> Self {
        let n = self.size;
        let mut out = self.clone();
        for i in 0..n {
            let d = f(self.entries[i * n + i].re, true);
            out.entries[i * n + i] = Complex::new(d, T::zero());
            for j in i + 1..n {
                let z = self.entries[i * n + j];
                let v = Complex::new(f(z.re, false), f(z.im, false));
                out.entries[i * n + j] = v;
                out.entries[j * n + i] = v.conj();
            }
        }
        out
    }
}

/// A GUE matrix with density proportional to `exp(-N Tr H^2 / 2)`.
///
/// Diagonal entries have variance `1/N`; real and imaginary parts of the
/// off-diagonal entries have variance `1/(2N)` each.
pub fn sample_gue<T: Real>(n: usize, seed: u64) -> Result<HermitianMatrix<T>> {
    sample_gue_with(n, &mut sample_rng(seed, 0))
}

pub fn sample_gue_with<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HermitianMatrix<T>> {
    if n == 0 {
        return Err(invalid("matrix size must be at least 1"));
    }
    let nf = T::from_usize_lossy(n);
    let sd_diag = (T::one() / nf).sqrt();
    let sd_off = (T::one() / (nf + nf)).sqrt();
    HermitianMatrix::from_upper(n, |i, j| {
        if i == j {
            Complex::new(normal::<T, _>(rng) * sd_diag, T::zero())
        } else {
            let re = normal::<T, _>(rng) * sd_off;
            Complex::new(re, normal::<T, _>(rng) * sd_off)
        }
    })
}

/// Real symmetric tridiagonal matrix unitarily equivalent in law to a GUE matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

/// Tridiagonal model of the GUE: `N(0, 1/N)` diagonal and
/// `chi_{2(N-i)} / sqrt(2N)` off-diagonal entries.
pub fn sample_gue_tridiagonal<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Tridiagonal<T>> {
    if n == 0 {
        return Err(invalid("matrix size must be at least 1"));
    }
    let nf = n as f64;
    let sd = (1.0 / nf).sqrt();
    let diag = (0..n).map(|_| normal::<T, _>(rng) * T::lit(sd)).collect();
    let off = (1..n)
        .map(|i| {
            let chi2 = ChiSquared::new((2 * (n - i)) as f64).expect("positive degrees of freedom");
            let v: f64 = chi2.sample(rng);
            T::lit((v / (2.0 * nf)).sqrt())
        })
        .collect();
    Ok(Tridiagonal { diag, off })
}

impl<T: Real> Tridiagonal<T> {
    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: T) -> usize {
        let tiny = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut q = T::one();
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { T::zero() } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { T::zero() } else { b2 / q };
            if q == T::zero() {
                q = -tiny;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// `ln det(z - T)` by the continuant recursion, for complex `z`.
    pub fn log_charpoly(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut r = Complex::new(T::one(), T::zero());
        for i in 0..self.diag.len() {
            let shift = z - Complex::new(self.diag[i], T::zero());
            r = if i == 0 {
                shift
            } else {
                let b = self.off[i - 1];
                shift - Complex::new(b * b, T::zero()) / r
            };
            acc += r.ln();
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_matrix() {
        let a = sample_gue::<f64>(6, 42).unwrap();
        let b = sample_gue::<f64>(6, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_gue::<f64>(6, 43).unwrap());
        for i in 0..6 {
            assert_eq!(a.entry(i, i).im, 0.0);
            for j in 0..6 {
                assert_eq!(a.entry(i, j), a.entry(j, i).conj());
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let one = Complex::new(1.0f64, 0.0);
        let i = Complex::new(0.0, 1.0);
        assert!(HermitianMatrix::from_entries(2, vec![one, i, i, one]).is_err());
        assert!(HermitianMatrix::from_entries(2, vec![one, i, -i, one]).is_ok());
        assert!(sample_gue::<f64>(0, 1).is_err());
    }

    #[test]
    fn sturm_count_and_charpoly() {
        let t = Tridiagonal { diag: vec![2.0f64, 2.0, 2.0], off: vec![-1.0, -1.0] };
        // Eigenvalues 2 - sqrt 2, 2, 2 + sqrt 2.
        assert_eq!(t.count_below(0.5), 0);
        assert_eq!(t.count_below(1.0), 1);
        assert_eq!(t.count_below(2.5), 2);
        assert_eq!(t.count_below(3.5), 3);
        let z = Complex::new(0.3, 0.2);
        let expect = (z - 2.0) * ((z - 2.0) * (z - 2.0) - 2.0);
        assert!((t.log_charpoly(z).exp() - expect).norm() < 1e-13);
    }
}
