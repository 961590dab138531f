//! Ornstein-Uhlenbeck relaxation of a Hermitian matrix toward the GUE.

use rand::Rng;
use rayon::prelude::*;

use super::matrix::{normal, sample_rng, HermitianMatrix};
use super::montecarlo::CHUNK;
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Matrix, elapsed time and diffusion constant of an OU trajectory.
///
/// `diffusion` is the stationary variance of a diagonal coordinate; the real
/// and imaginary parts of off-diagonal entries relax to half of it. The GUE
/// value is `1/N`, and zero switches the noise off.
#[derive(Debug, Clone, PartialEq)]
pub struct OUState<T> {
    pub matrix: HermitianMatrix<T>,
    pub time: T,
    pub diffusion: T,
}

impl<T: Real> OUState<T> {
    /// Start at `matrix` with the GUE diffusion constant.
    pub fn new(matrix: HermitianMatrix<T>) -> Self {
        let diffusion = T::one() / T::from_usize_lossy(matrix.size());
        Self { matrix, time: T::zero(), diffusion }
    }

    pub fn with_diffusion(matrix: HermitianMatrix<T>, diffusion: T) -> Result<Self> {
        if !(diffusion >= T::zero()) || !diffusion.is_finite() {
            return Err(invalid("diffusion must be finite and non-negative"));
        }
        Ok(Self { matrix, time: T::zero(), diffusion })
    }
}

/// Advances every independent coordinate by the exact OU transition law
/// `x <- e^{-dt} x + sqrt(v (1 - e^{-2 dt})) Z`.
pub fn ou_step<T: Real, R: Rng + ?Sized>(state: &OUState<T>, dt: T, rng: &mut R) -> Result<OUState<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(invalid("dt must be positive and finite"));
    }
    let decay = (-dt).exp();
    let spread = -(-(dt + dt)).exp_m1();
    let sd_diag = (state.diffusion * spread).sqrt();
    let sd_off = (state.diffusion * T::lit(0.5) * spread).sqrt();
    let noisy = state.diffusion > T::zero();
    let matrix = state.matrix.map_coordinates(|x, diagonal| {
        let drift = x * decay;
        if !noisy {
            return drift;
        }
        let sd = if diagonal { sd_diag } else { sd_off };
        drift + normal::<T, _>(rng) * sd
    });
    Ok(OUState { matrix, time: state.time + dt, diffusion: state.diffusion })
}

/// Independent real coordinates in `map_coordinates` order: diagonal entries
/// interleaved with the real and imaginary parts of the upper triangle.
pub fn coordinates<T: Real>(h: &HermitianMatrix<T>) -> Vec<T> {
    let n = h.size();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(h.entry(i, i).re);
        for j in i + 1..n {
            let z = h.entry(i, j);
            out.push(z.re);
            out.push(z.im);
        }
    }
    out
}

/// Stationary variance of each coordinate returned by [`coordinates`].
pub fn stationary_variances<T: Real>(n: usize) -> Vec<T> {
    let v = T::one() / T::from_usize_lossy(n);
    let half = v * T::lit(0.5);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(v);
        for _ in i + 1..n {
            out.push(half);
            out.push(half);
        }
    }
    out
}

/// Per-coordinate sample moments across paths at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct OuSnapshot<T> {
    pub time: T,
    pub mean: Vec<T>,
    /// Second moment about zero, the stationary mean.
    pub second_moment: Vec<T>,
    /// Standard error of each second moment.
    pub second_moment_stderr: Vec<T>,
    pub mean_stderr: Vec<T>,
}

impl<T: Real> OuSnapshot<T> {
    /// Largest |mean| / stderr over coordinates.
    pub fn max_mean_z(&self) -> T {
        zmax(self.mean.iter().copied(), self.mean_stderr.iter().copied(), None)
    }

    /// Largest |second moment - stationary| / stderr over coordinates.
    pub fn max_second_moment_z(&self) -> T {
        let n = ((self.mean.len() as f64).sqrt().round()) as usize;
        let target = stationary_variances::<T>(n);
        zmax(self.second_moment.iter().copied(), self.second_moment_stderr.iter().copied(), Some(&target))
    }
}

fn zmax<T: Real>(v: impl Iterator<Item = T>, se: impl Iterator<Item = T>, target: Option<&[T]>) -> T {
    v.zip(se)
        .enumerate()
        .map(|(i, (x, s))| {
            let d = x - target.map_or(T::zero(), |t| t[i]);
            if s > T::zero() {
                d.abs() / s
            } else if d == T::zero() {
                T::zero()
            } else {
                T::infinity()
            }
        })
        .fold(T::zero(), T::max)
}

#[derive(Clone)]
struct Sums<T> {
    s1: Vec<Vec<T>>,
    s2: Vec<Vec<T>>,
    s4: Vec<Vec<T>>,
}

impl<T: Real> Sums<T> {
    fn zeros(snaps: usize, dim: usize) -> Self {
        let z = vec![vec![T::zero(); dim]; snaps];
        Self { s1: z.clone(), s2: z.clone(), s4: z }
    }

    fn merge(mut self, other: &Self) -> Self {
        for k in 0..self.s1.len() {
            for c in 0..self.s1[k].len() {
                self.s1[k][c] += other.s1[k][c];
                self.s2[k][c] += other.s2[k][c];
                self.s4[k][c] += other.s4[k][c];
            }
        }
        self
    }
}

/// Runs `paths` independent OU trajectories from `start`, taking `steps`
/// equal steps up to `t_max`, and records coordinate moments after each step.
///
/// Path `p` uses the random stream `(seed, p)`, so the output does not depend
/// on the thread count.
pub fn ou_relaxation<T: Real>(
    start: &HermitianMatrix<T>,
    t_max: T,
    steps: usize,
    paths: usize,
    seed: u64,
) -> Result<Vec<OuSnapshot<T>>> {
    if steps == 0 || paths < 2 {
        return Err(invalid("need at least one step and two paths"));
    }
    if !(t_max > T::zero()) || !t_max.is_finite() {
        return Err(invalid("t_max must be positive and finite"));
    }
    let dt = t_max / T::from_usize_lossy(steps);
    let dim = start.size() * start.size();
    let chunks = paths.div_ceil(CHUNK);
    let partial: Vec<Result<Sums<T>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Sums::zeros(steps, dim);
            for p in c * CHUNK..((c + 1) * CHUNK).min(paths) {
                let mut rng = sample_rng(seed, p as u64);
                let mut state = OUState::new(start.clone());
                for k in 0..steps {
                    state = ou_step(&state, dt, &mut rng)?;
                    for (ci, x) in coordinates(&state.matrix).into_iter().enumerate() {
                        let x2 = x * x;
                        acc.s1[k][ci] += x;
                        acc.s2[k][ci] += x2;
                        acc.s4[k][ci] += x2 * x2;
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = Sums::zeros(steps, dim);
    for part in partial {
        total = total.merge(&part?);
    }
    let m = T::from_usize_lossy(paths);
    let out = (0..steps)
        .map(|k| {
            let mean: Vec<T> = total.s1[k].iter().map(|&s| s / m).collect();
            let second: Vec<T> = total.s2[k].iter().map(|&s| s / m).collect();
            let var: Vec<T> = mean.iter().zip(&second).map(|(&a, &b)| (b - a * a).max(T::zero())).collect();
            let mean_stderr = var.iter().map(|&v| (v / m).sqrt()).collect();
            let second_moment_stderr = second
                .iter()
                .zip(&total.s4[k])
                .map(|(&q, &s4)| ((s4 / m - q * q).max(T::zero()) / m).sqrt())
                .collect();
            OuSnapshot {
                time: dt * T::from_usize_lossy(k + 1),
                mean,
                second_moment: second,
                second_moment_stderr,
                mean_stderr,
            }
        })
        .collect();
    Ok(out)
}
