//! Monte Carlo estimators over GUE samples.
//!
//! Sample `i` always draws from stream `(seed, i)`. Work is split into fixed
//! chunks whose partial sums are merged in chunk order, so results are
//! bit-identical for any number of worker threads.

use num_complex::Complex;
use rayon::prelude::*;

use super::eigen::eigenvalues;
use super::matrix::{sample_gue_tridiagonal, sample_gue_with, sample_rng};
use crate::error::{invalid, Result};
use crate::linalg::tridiagonal_ql;
use crate::scalar::Real;

/// Samples per work unit.
pub const CHUNK: usize = 256;

/// Matrix model used to draw spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampler {
    /// Dense Hermitian matrix and the full eigensolver.
    Dense,
    /// Tridiagonal model with the same eigenvalue law, O(N^2) per sample.
    #[default]
    Tridiagonal,
}

/// Eigenvalues (ascending) of sample `index`.
pub fn sample_spectrum<T: Real>(n: usize, seed: u64, index: u64, sampler: Sampler) -> Result<Vec<T>> {
    let mut rng = sample_rng(seed, index);
    match sampler {
        Sampler::Dense => eigenvalues(&sample_gue_with::<T, _>(n, &mut rng)?),
        Sampler::Tridiagonal => {
            let t = sample_gue_tridiagonal::<T, _>(n, &mut rng)?;
            let mut v = tridiagonal_ql(&t.diag, &t.off, None, super::eigen::MAX_QL_ITERATIONS)?;
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Ok(v)
        }
    }
}

/// Maps each sample index to a partial accumulator and merges them in order.
fn reduce_samples<A, F, M>(samples: usize, init: impl Fn() -> A + Sync, per_sample: F, merge: M) -> Result<A>
where
    A: Send,
    F: Fn(&mut A, usize) -> Result<()> + Sync,
    M: Fn(&mut A, A),
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Result<A>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                per_sample(&mut acc, i)?;
            }
            Ok(acc)
        })
        .collect();
    let mut total = init();
    for p in parts {
        merge(&mut total, p?);
    }
    Ok(total)
}

/// Eigenvalue histogram normalized by the total number of eigenvalues, so it
/// integrates to the fraction that fell inside `range`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram<T> {
    pub edges: Vec<T>,
    pub density: Vec<T>,
    /// Standard error from the spread of per-sample bin counts.
    pub stderr: Vec<T>,
    /// Eigenvalues that fell outside the range.
    pub outside: u64,
    pub total: u64,
}

impl<T: Real> Histogram<T> {
    pub fn centers(&self) -> Vec<T> {
        self.edges.windows(2).map(|w| (w[0] + w[1]) * T::lit(0.5)).collect()
    }

    pub fn mass(&self) -> T {
        self.edges.windows(2).zip(&self.density).map(|(w, &d)| (w[1] - w[0]) * d).sum()
    }
}

/// Normalized histogram of all eigenvalues of `samples` GUE matrices.
pub fn mc_density<T: Real>(
    n: usize,
    samples: usize,
    bins: usize,
    range: (T, T),
    seed: u64,
    sampler: Sampler,
) -> Result<Histogram<T>> {
    if samples == 0 || bins == 0 || n == 0 {
        return Err(invalid("samples, bins and N must be at least 1"));
    }
    let (lo, hi) = range;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid("histogram range must be finite with lo < hi"));
    }
    let width = (hi - lo) / T::from_usize_lossy(bins);
    struct Acc {
        s1: Vec<u64>,
        s2: Vec<u64>,
        outside: u64,
    }
    let acc = reduce_samples(
        samples,
        || Acc { s1: vec![0; bins], s2: vec![0; bins], outside: 0 },
        |acc, i| {
            let mut local = vec![0u64; bins];
            for x in sample_spectrum::<T>(n, seed, i as u64, sampler)? {
                if x < lo || x >= hi {
                    acc.outside += 1;
                    continue;
                }
                let b = ((x - lo) / width).to_usize().unwrap_or(bins - 1).min(bins - 1);
                local[b] += 1;
            }
            for (b, c) in local.into_iter().enumerate() {
                acc.s1[b] += c;
                acc.s2[b] += c * c;
            }
            Ok(())
        },
        |t, p| {
            for b in 0..bins {
                t.s1[b] += p.s1[b];
                t.s2[b] += p.s2[b];
            }
            t.outside += p.outside;
        },
    )?;
    let m = samples as f64;
    let norm = (n as f64) * width.as_f64();
    let density = acc.s1.iter().map(|&c| T::lit(c as f64 / (m * norm))).collect();
    let stderr = acc
        .s1
        .iter()
        .zip(&acc.s2)
        .map(|(&c1, &c2)| {
            let mean = c1 as f64 / m;
            let var = (c2 as f64 / m - mean * mean).max(0.0) * m / (m - 1.0).max(1.0);
            T::lit((var / m).sqrt() / norm)
        })
        .collect();
    let edges = (0..=bins).map(|b| lo + width * T::from_usize_lossy(b)).collect();
    Ok(Histogram { edges, density, stderr, outside: acc.outside, total: (samples * n) as u64 })
}

/// Eigenvalue counts in a centered bulk window of unfolded length `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingStats<T> {
    pub mean_count: T,
    pub mean_stderr: T,
    pub variance: T,
    pub variance_stderr: T,
    pub gap_fraction: T,
    pub gap_stderr: T,
}

/// Counts eigenvalues in `(-L/2, L/2)` with `L = s pi / N`, the window that
/// holds `s` eigenvalues on average at the center of the spectrum.
pub fn mc_counting<T: Real>(n: usize, samples: usize, s: T, seed: u64) -> Result<CountingStats<T>> {
    if samples < 2 || n == 0 {
        return Err(invalid("need N >= 1 and at least two samples"));
    }
    if !(s > T::zero()) || !s.is_finite() {
        return Err(invalid("window length must be positive"));
    }
    let half = s * T::PI() / T::from_usize_lossy(n) * T::lit(0.5);
    let acc = reduce_samples(
        samples,
        || [0u128; 6],
        |acc, i| {
            let mut rng = sample_rng(seed, i as u64);
            let t = sample_gue_tridiagonal::<T, _>(n, &mut rng)?;
            let c = (t.count_below(half) - t.count_below(-half)) as u128;
            acc[0] += 1;
            acc[1] += c;
            acc[2] += c * c;
            acc[3] += c * c * c;
            acc[4] += c * c * c * c;
            acc[5] += (c == 0) as u128;
            Ok(())
        },
        |t, p| {
            for (a, b) in t.iter_mut().zip(p) {
                *a += b;
            }
        },
    )?;
    let m = samples as f64;
    let raw: Vec<f64> = acc[1..5].iter().map(|&v| v as f64 / m).collect();
    let mean = raw[0];
    let var = raw[1] - mean * mean;
    // Fourth central moment from raw moments.
    let mu4 = raw[3] - 4.0 * mean * raw[2] + 6.0 * mean * mean * raw[1] - 3.0 * mean.powi(4);
    let gap = acc[5] as f64 / m;
    Ok(CountingStats {
        mean_count: T::lit(mean),
        mean_stderr: T::lit((var / m).sqrt()),
        variance: T::lit(var * m / (m - 1.0)),
        variance_stderr: T::lit(((mu4 - var * var).max(0.0) / m).sqrt()),
        gap_fraction: T::lit(gap),
        gap_stderr: T::lit((gap * (1.0 - gap) / m).sqrt()),
    })
}

/// Product of characteristic polynomials `prod_i Z(mu_i) / prod_j Z(nu_j)`
/// with `Z(z) = det(z - H)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharpolyMoment<T> {
    pub numerator: Vec<Complex<T>>,
    pub denominator: Vec<Complex<T>>,
}

impl<T: Real> CharpolyMoment<T> {
    pub fn power(mu: Complex<T>, k: usize) -> Self {
        Self { numerator: vec![mu; k], denominator: Vec::new() }
    }

    pub fn ratio(mu: Complex<T>, nu: Complex<T>) -> Self {
        Self { numerator: vec![mu], denominator: vec![nu] }
    }

    /// All points on the real axis, so the product is real.
    fn is_real(&self) -> bool {
        self.numerator.iter().chain(&self.denominator).all(|z| z.im == T::zero())
    }

    fn log_value(&self, log_z: impl Fn(Complex<T>) -> Complex<T>) -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        let num = self.numerator.iter().map(|&z| log_z(z)).fold(zero, |a, b| a + b);
        let den = self.denominator.iter().map(|&z| log_z(z)).fold(zero, |a, b| a + b);
        num - den
    }
}

/// Sample mean of a complex observable with separate errors on the real and
/// imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEstimate<T> {
    pub mean: Complex<T>,
    pub stderr: Complex<T>,
    /// Relative standard error exceeds 50%.
    pub high_variance: bool,
}

impl<T: Real> ComplexEstimate<T> {
    /// Largest of the real and imaginary deviations from `target`, in units
    /// of the corresponding standard error.
    pub fn z_score(&self, target: Complex<T>) -> T {
        let d = self.mean - target;
        let z = |x: T, s: T| if s > T::zero() { x.abs() / s } else if x == T::zero() { T::zero() } else { T::infinity() };
        z(d.re, self.stderr.re).max(z(d.im, self.stderr.im))
    }
}

fn finish<T: Real>(sum: Complex<T>, sq: Complex<T>, m: usize) -> ComplexEstimate<T> {
    let mf = T::from_usize_lossy(m);
    let mean = sum / mf;
    let var_re = (sq.re / mf - mean.re * mean.re).max(T::zero());
    let var_im = (sq.im / mf - mean.im * mean.im).max(T::zero());
    let stderr = Complex::new((var_re / mf).sqrt(), (var_im / mf).sqrt());
    let high_variance = stderr.norm() > T::lit(0.5) * mean.norm();
    ComplexEstimate { mean, stderr, high_variance }
}

/// Monte Carlo averages of several characteristic-polynomial moments from
/// one set of samples. Each product is formed in log domain per sample.
pub fn mc_charpoly<T: Real>(
    n: usize,
    samples: usize,
    moments: &[CharpolyMoment<T>],
    seed: u64,
    sampler: Sampler,
) -> Result<Vec<ComplexEstimate<T>>> {
    if samples < 2 || n == 0 {
        return Err(invalid("need N >= 1 and at least two samples"));
    }
    let min_im = T::lit(0.1) / T::from_usize_lossy(n);
    for m in moments {
        if m.denominator.iter().any(|z| z.im.abs() < min_im) {
            return Err(invalid("denominator points need |Im| >= 0.1/N"));
        }
    }
    let k = moments.len();
    let zero = Complex::new(T::zero(), T::zero());
    let acc = reduce_samples(
        samples,
        || vec![(zero, zero); k],
        |acc, i| {
            // The tridiagonal model gives ln det(z - H) by a continuant in O(N).
            let mut rng = sample_rng(seed, i as u64);
            let (tri, ev) = match sampler {
                Sampler::Dense => (None, eigenvalues(&sample_gue_with::<T, _>(n, &mut rng)?)?),
                Sampler::Tridiagonal => (Some(sample_gue_tridiagonal::<T, _>(n, &mut rng)?), Vec::new()),
            };
            let log_z = |z: Complex<T>| match &tri {
                Some(t) => t.log_charpoly(z),
                None => ev.iter().map(|&l| (z - Complex::new(l, T::zero())).ln()).fold(zero, |a, b| a + b),
            };
            for (slot, m) in acc.iter_mut().zip(moments) {
                let mut v = m.log_value(&log_z).exp();
                if m.is_real() {
                    // Drop the roundoff left by the complex logarithm.
                    v.im = T::zero();
                }
                slot.0 += v;
                slot.1 += Complex::new(v.re * v.re, v.im * v.im);
            }
            Ok(())
        },
        |t, p| {
            for (a, b) in t.iter_mut().zip(p) {
                a.0 += b.0;
                a.1 += b.1;
            }
        },
    )?;
    Ok(acc.into_iter().map(|(s, q)| finish(s, q, samples)).collect())
}

/// Monte Carlo mean of the normalized resolvent trace `(1/N) Tr (H - nu)^{-1}`.
///
/// For `nu = x - i eta` with small `eta > 0`, `-Im / pi` approximates the
/// normalized eigenvalue density at `x`.
pub fn mc_resolvent<T: Real>(n: usize, samples: usize, nu: Complex<T>, seed: u64) -> Result<ComplexEstimate<T>> {
    if samples < 2 || n == 0 {
        return Err(invalid("need N >= 1 and at least two samples"));
    }
    if nu.im == T::zero() {
        return Err(invalid("resolvent needs Im nu != 0"));
    }
    let nf = T::from_usize_lossy(n);
    let zero = Complex::new(T::zero(), T::zero());
    let (s, q) = reduce_samples(
        samples,
        || (zero, zero),
        |acc, i| {
            let ev = sample_spectrum::<T>(n, seed, i as u64, Sampler::Tridiagonal)?;
            let v = ev.iter().map(|&l| (Complex::new(l, T::zero()) - nu).inv()).fold(zero, |a, b| a + b) / nf;
            acc.0 += v;
            acc.1 += Complex::new(v.re * v.re, v.im * v.im);
            Ok(())
        },
        |t, p| {
            t.0 += p.0;
            t.1 += p.1;
        },
    )?;
    Ok(finish(s, q, samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_mass_and_determinism() {
        let h = mc_density::<f64>(8, 600, 40, (-4.0, 4.0), 5, Sampler::Tridiagonal).unwrap();
        assert_eq!(h.outside, 0);
        assert!((h.mass() - 1.0).abs() < 1e-12);
        let again = mc_density::<f64>(8, 600, 40, (-4.0, 4.0), 5, Sampler::Tridiagonal).unwrap();
        assert_eq!(h, again);
    }

    #[test]
    fn single_thread_matches_default_pool() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let m = [CharpolyMoment::power(Complex::new(0.3, 0.0), 1)];
        let a = mc_charpoly::<f64>(5, 700, &m, 9, Sampler::Dense).unwrap();
        let b = pool.install(|| mc_charpoly::<f64>(5, 700, &m, 9, Sampler::Dense).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn dense_and_tridiagonal_agree_in_law() {
        // Mean of lambda^2 over the spectrum is E[Tr H^2]/N = 1.
        for sampler in [Sampler::Dense, Sampler::Tridiagonal] {
            let mut s = 0.0;
            let m = 2000;
            for i in 0..m {
                s += sample_spectrum::<f64>(6, 21, i, sampler).unwrap().iter().map(|x| x * x).sum::<f64>();
            }
            let mean = s / (m as f64 * 6.0);
            assert!((mean - 1.0).abs() < 0.05, "{sampler:?}: {mean}");
        }
    }

    #[test]
    fn rejects_small_denominator() {
        let m = [CharpolyMoment::ratio(Complex::new(0.0, 0.0), Complex::new(0.1, 0.001))];
        assert!(mc_charpoly::<f64>(10, 10, &m, 1, Sampler::Dense).is_err());
    }

    #[test]
    fn real_points_give_real_estimates() {
        let m = [CharpolyMoment::power(Complex::new(0.7, 0.0), 2)];
        for sampler in [Sampler::Dense, Sampler::Tridiagonal] {
            let est = mc_charpoly::<f64>(5, 300, &m, 2, sampler).unwrap();
            assert_eq!(est[0].mean.im, 0.0);
            assert_eq!(est[0].stderr.im, 0.0);
        }
    }
}
