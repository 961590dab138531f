//! Finite-N determinantal structure and the universal bulk statistics.

use crate::error::{invalid, require_finite, Result};
use crate::hermite::{HermiteBasis, ScaledValue};
use crate::linalg::det_in_place;
use crate::quadrature::{fredholm_det, integrate_adaptive, FredholmOperator};
use crate::scalar::Real;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// The Christoffel–Darboux kernel of the `N x N` ensemble with its weight.
#[derive(Debug, Clone)]
pub struct FiniteNKernel<T> {
    basis: HermiteBasis<T>,
    size: usize,
}

/// Points at which an `n`-point correlation function is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRequest<T> {
    points: Vec<T>,
}

impl<T: Real> CorrelationRequest<T> {
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("correlation request needs at least one point"));
        }
        for (i, &p) in points.iter().enumerate() {
            require_finite(p, "correlation point")?;
            if points[..i].contains(&p) {
                return Err(invalid("correlation points must be pairwise distinct"));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }
}

impl<T: Real> FiniteNKernel<T> {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(invalid("matrix size must be at least 1"));
        }
        Ok(Self { basis: HermiteBasis::new(size, size + 1)?, size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basis(&self) -> &HermiteBasis<T> {
        &self.basis
    }

    fn n(&self) -> T {
        T::from_usize_lossy(self.size)
    }

    fn log_weight(&self, x: T, y: T) -> T {
        -self.n() * (x * x + y * y) / T::lit(4.0)
    }

    /// `K_N(x, y)`.
    pub fn eval(&self, x: T, y: T) -> Result<T> {
        let cd = self.basis.christoffel_darboux_scaled(x, y, self.size)?;
        Ok(cd.mul_exp(self.log_weight(x, y)).value())
    }

    /// `R_1(x) = K_N(x, x)`, divided by `N` when `normalized`.
    pub fn mean_density(&self, x: T, normalized: bool) -> Result<T> {
        let r1 = self.eval(x, x)?;
        Ok(if normalized { r1 / self.n() } else { r1 })
    }

    /// The diagonal from `N h~_N^2 - sqrt(N (N+1)) h~_{N-1} h~_{N+1}`.
    pub fn mean_density_upper(&self, x: T) -> Result<T> {
        let n = self.size;
        let h = self.basis.eval_orthonormal_sequence(x, n + 1)?;
        let nf = self.n();
        let a = h[n].mul(h[n]).scale(nf);
        let b = h[n - 1].mul(h[n + 1]).scale((nf * (nf + T::one())).sqrt());
        Ok(a.sub(b).mul_exp(self.log_weight(x, x)).value())
    }

    /// `R_n = det K_N(x_i, x_j)`.
    pub fn correlation_fn(&self, req: &CorrelationRequest<T>) -> Result<T> {
        let n = req.order();
        if n > self.size {
            return Err(invalid(format!("{n}-point function vanishes identically for N = {}", self.size)));
        }
        let mut m = self.kernel_matrix(req.points())?;
        Ok(det_in_place(&mut m, n))
    }

    /// Row-major matrix `K_N(p_i, p_j)`.
    pub fn kernel_matrix(&self, points: &[T]) -> Result<Vec<T>> {
        let n = points.len();
        let mut m = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.eval(points[i], points[j])?;
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
        Ok(m)
    }

    /// `Y_2(x, y) = K_N(x, y)^2`.
    pub fn cluster_y2(&self, x: T, y: T) -> Result<T> {
        let k = self.eval(x, y)?;
        Ok(k * k)
    }

    /// Half-width of the integration window outside which the weight is negligible.
    pub fn support_cutoff(&self) -> T {
        T::lit(2.0) + T::lit(10.0) / self.n().sqrt()
    }

    /// `(1 / (N - n)) integral R_{n+1}(fixed, t) dt`, which should equal `R_n(fixed)`.
    pub fn marginalization_check(&self, n: usize, fixed_points: &[T]) -> Result<T> {
        if fixed_points.len() != n {
            return Err(invalid("need exactly n fixed points"));
        }
        if n + 1 > self.size {
            return Err(invalid("marginalization needs n + 1 <= N"));
        }
        CorrelationRequest::new(fixed_points.to_vec())?;
        let c = self.support_cutoff();
        let mut pts = fixed_points.to_vec();
        pts.push(T::zero());
        let mut failure = None;
        let integral = integrate_adaptive(
            |t: T| {
                pts[n] = t;
                match self.kernel_matrix(&pts) {
                    Ok(mut m) => det_in_place(&mut m, n + 1),
                    Err(e) => {
                        failure = Some(e);
                        T::zero()
                    }
                }
            },
            -c,
            c,
            T::lit(1e-11),
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(integral / T::from_usize_lossy(self.size - n))
    }

    /// `K_N(0, r pi / N) / K_N(0, 0)`: the kernel at `r` mean spacings from the centre.
    pub fn bulk_scaling_check(&self, r: T) -> Result<T> {
        if self.size < 100 {
            return Err(invalid("bulk scaling check needs N >= 100"));
        }
        if r.abs() > T::lit(5.0) {
            return Err(invalid("bulk scaling check needs |r| <= 5"));
        }
        let x = r * T::PI() / self.n();
        Ok(self.eval(T::zero(), x)? / self.eval(T::zero(), T::zero())?)
    }

    /// `N^{-2/3} K_N(2 + xi1 N^{-2/3}, 2 + xi2 N^{-2/3})`.
    pub fn edge_rescaled(&self, xi1: T, xi2: T) -> Result<T> {
        let s = self.n().powf(T::lit(-2.0 / 3.0));
        let two = T::lit(2.0);
        Ok(s * self.eval(two + xi1 * s, two + xi2 * s)?)
    }

    /// `K_N(x, y)` without the weight, in log-scaled form.
    pub fn unweighted(&self, x: T, y: T) -> Result<ScaledValue<T>> {
        self.basis.christoffel_darboux_scaled(x, y, self.size)
    }
}

/// Wigner semicircle `sqrt(4 - x^2) / (2 pi)` on `[-2, 2]`.
pub fn semicircle<T: Real>(x: T) -> T {
    let four = T::lit(4.0);
    if x.abs() >= T::lit(2.0) {
        T::zero()
    } else {
        (four - x * x).sqrt() / T::TAU()
    }
}

/// `sin(pi r) / (pi r)`.
pub fn sine_kernel<T: Real>(r: T) -> T {
    let x = T::PI() * r;
    if x.abs() < T::lit(1e-4) {
        T::one() - x * x / T::lit(6.0)
    } else {
        x.sin() / x
    }
}

/// `s - 2 integral_0^s (s - r) K(r)^2 dr` for the sine kernel.
pub fn number_variance_exact<T: Real>(s: T) -> Result<T> {
    if !(s >= T::zero()) || !s.is_finite() {
        return Err(invalid("number variance needs finite s >= 0"));
    }
    if s == T::zero() {
        return Ok(T::zero());
    }
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(16.0));
    // Split at the zeros of the sine kernel so each panel is smooth.
    let mut acc = T::zero();
    let mut lo = T::zero();
    while lo < s {
        let hi = (lo + T::one()).min(s);
        let part: T = integrate_adaptive(
            |r: T| {
                let k = sine_kernel(r);
                (s - r) * k * k
            },
            lo,
            hi,
            tol,
        )?;
        acc += part;
        lo = hi;
    }
    Ok(s - acc - acc)
}

/// `(ln(2 pi s) + gamma + 1) / pi^2`.
pub fn number_variance_asymptotic<T: Real>(s: T) -> Result<T> {
    if !(s > T::zero()) {
        return Err(invalid("asymptotic number variance needs s > 0"));
    }
    Ok(((T::TAU() * s).ln() + T::lit(EULER_GAMMA) + T::one()) / (T::PI() * T::PI()))
}

/// Kernel used for a hole probability.
#[derive(Debug, Clone, Copy)]
pub enum HoleKernel<'a, T> {
    /// Sine kernel on the unfolded scale; the length is in mean spacings.
    SineUnfolded,
    /// Finite-N kernel; the length is in eigenvalue units.
    FiniteN(&'a FiniteNKernel<T>),
}

/// Probability that `(-L/2, L/2)` holds no eigenvalue.
pub fn hole_probability<T: Real>(kernel: HoleKernel<'_, T>, length: T) -> Result<T> {
    if !(length >= T::zero()) || !length.is_finite() {
        return Err(invalid("hole length must be finite and non-negative"));
    }
    if length == T::zero() {
        return Ok(T::one());
    }
    match kernel {
        HoleKernel::SineUnfolded => {
            let op = FredholmOperator::centered(|u: T, v: T| sine_kernel(u - v), length);
            fredholm_det(&op)
        }
        HoleKernel::FiniteN(k) => {
            let op = FredholmOperator::centered(|x: T, y: T| k.eval(x, y).unwrap_or(T::nan()), length);
            let v = fredholm_det(&op)?;
            if v.is_nan() {
                return Err(invalid("kernel evaluation failed inside the hole interval"));
            }
            Ok(v)
        }
    }
}

/// First three terms of the inclusion–exclusion series for the sine-kernel
/// hole probability: `1 - s + (s^2 - s + Sigma_2(s)) / 2`.
pub fn hole_series_two_terms<T: Real>(s: T) -> Result<T> {
    let sigma = number_variance_exact(s)?;
    Ok(T::one() - s + (s * s - s + sigma) / T::lit(2.0))
}

/// Small-`s` expansion `1 - s + pi^2 s^4 / 36` of the two-term series.
pub fn hole_series_small_s<T: Real>(s: T) -> T {
    let pi2 = T::PI() * T::PI();
    T::one() - s + pi2 * s.powi(4) / T::lit(36.0)
}

/// Statistic of an uncorrelated (Poisson) spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoissonStat {
    NumberVariance,
    Hole,
}

/// `Sigma_2(s) = s` and `A(s) = exp(-s)` for uncorrelated levels.
pub fn poisson_baseline<T: Real>(stat: PoissonStat, s: T) -> Result<T> {
    if !(s >= T::zero()) {
        return Err(invalid("Poisson baseline needs s >= 0"));
    }
    Ok(match stat {
        PoissonStat::NumberVariance => s,
        PoissonStat::Hole => (-s).exp(),
    })
}

/// Least-squares scale `c` for `target ~ c * model`, and the largest pointwise
/// relative residual `|target - c model| / |c model|`.
pub fn fit_scale<T: Real>(target: &[T], model: &[T]) -> (T, T) {
    let num: T = target.iter().zip(model).map(|(&a, &b)| a * b).sum();
    let den: T = model.iter().map(|&b| b * b).sum();
    let c = num / den;
    let worst = target
        .iter()
        .zip(model)
        .map(|(&a, &b)| ((a - c * b) / (c * b)).abs())
        .fold(T::zero(), T::max);
    (c, worst)
}
