//! Averages of characteristic polynomials `Z(mu) = det(mu - H)` and their ratios.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_legendre, integrate_adaptive};
use crate::scalar::{ln_factorial, Real};

type C<T> = Complex<T>;

/// A spectral parameter used in a denominator; it must sit off the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexSpectralPoint<T> {
    value: C<T>,
}

impl<T: Real> ComplexSpectralPoint<T> {
    pub fn new(value: C<T>) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(invalid("spectral point must be finite"));
        }
        if value.im == T::zero() {
            return Err(invalid("denominator points need a nonzero imaginary part"));
        }
        Ok(Self { value })
    }

    pub fn value(&self) -> C<T> {
        self.value
    }

    /// `+1` above the real axis, `-1` below.
    pub fn half_plane(&self) -> i8 {
        if self.value.im > T::zero() {
            1
        } else {
            -1
        }
    }
}

/// `f_k(nu)` together with a flag raised when `nu` hugs the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyTransform<T> {
    pub value: C<T>,
    pub accuracy_degraded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioKernelResult<T> {
    pub value: C<T>,
    /// Separation `N (Re mu - Re nu) / pi` in mean bulk spacings.
    pub scale_r: T,
}

fn cx<T: Real>(re: T) -> C<T> {
    C::new(re, T::zero())
}

/// Monic orthogonal polynomials of `exp(-W x^2 / 2)` at `mu`, orders `0..=k_max`.
pub fn monic_sequence<T: Real>(mu: C<T>, k_max: usize, weight_scale: usize) -> Vec<C<T>> {
    let w = T::from_usize_lossy(weight_scale);
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(cx(T::one()));
    if k_max >= 1 {
        out.push(mu);
    }
    for k in 1..k_max {
        let next = mu * out[k] - out[k - 1] * (T::from_usize_lossy(k) / w);
        out.push(next);
    }
    out
}

fn real_monic<T: Real>(x: T, k: usize, weight_scale: usize) -> T {
    let w = T::from_usize_lossy(weight_scale);
    let (mut prev, mut cur) = (T::zero(), T::one());
    for j in 0..k {
        let next = x * cur - prev * (T::from_usize_lossy(j) / w);
        prev = cur;
        cur = next;
    }
    cur
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("matrix size must be at least 1"))
    } else {
        Ok(())
    }
}

/// `E[det(mu - H)]`, the monic Hermite polynomial of degree `N`.
pub fn expected_charpoly<T: Real>(mu: C<T>, n: usize) -> Result<C<T>> {
    check_size(n)?;
    Ok(monic_sequence(mu, n, n)[n])
}

/// `E[Z(mu1) Z(mu2)]` for real arguments.
pub fn pair_correlation<T: Real>(mu1: T, mu2: T, n: usize) -> Result<T> {
    check_size(n)?;
    let threshold = T::lit(1e-6) * T::one().max(mu1.abs());
    if (mu1 - mu2).abs() < threshold {
        return second_moment((mu1 + mu2) / T::lit(2.0), n);
    }
    let a = monic_sequence(cx(mu1), n + 1, n);
    let b = monic_sequence(cx(mu2), n + 1, n);
    Ok(((a[n + 1] * b[n] - a[n] * b[n + 1]) / (mu1 - mu2)).re)
}

/// `E[Z(mu)^2]` for the GUE of size `N`.
pub fn second_moment<T: Real>(mu: T, n: usize) -> Result<T> {
    second_moment_weighted(mu, n, n)
}

/// `E[Z(mu)^2]` over `size x size` matrices with weight `exp(-W Tr H^2 / 2)`.
pub fn second_moment_weighted<T: Real>(mu: T, size: usize, weight_scale: usize) -> Result<T> {
    check_size(size)?;
    check_size(weight_scale)?;
    let p = monic_sequence(cx(mu), size + 1, weight_scale);
    let n = T::from_usize_lossy(size);
    // pi'_k = k pi_{k-1}
    Ok(((p[size] * p[size]) * (n + T::one()) - p[size - 1] * p[size + 1] * n).re)
}

/// `c_k = integral exp(-N x^2 / 2) pi_k(x)^2 dx = k! N^{-k} sqrt(2 pi / N)`.
pub fn monic_norm<T: Real>(k: usize, n: usize) -> T {
    let nf = n as f64;
    let ln = ln_factorial(k) - k as f64 * nf.ln() + 0.5 * (std::f64::consts::TAU / nf).ln();
    T::lit(ln.exp())
}

/// `f_k(nu) = (1 / 2 pi i) integral exp(-N x^2 / 2) pi_k(x) / (nu - x) dx`.
pub fn cauchy_transform<T: Real>(nu: ComplexSpectralPoint<T>, k: usize, n: usize) -> Result<CauchyTransform<T>> {
    check_size(n)?;
    if k > n + 2 {
        return Err(invalid(format!("order {k} exceeds N + 2")));
    }
    let nu = nu.value();
    let nf = T::from_usize_lossy(n);
    let half = T::lit(0.5);
    let g = |x: T| (-half * nf * x * x).exp() * real_monic(x, k, n);
    let cutoff = T::lit(2.0) + T::lit(10.0) / nf.sqrt()
        + T::lit(2.0) * (T::from_usize_lossy(k + 1) / nf).sqrt();

    // Magnitude scale for the absolute tolerance.
    let rough = gauss_legendre::<T>(200)?.mapped(-cutoff, cutoff)?;
    let dist_floor = nu.im.abs();
    let scale = rough
        .integrate(|x| g(x).abs() / ((nu.re - x).abs().max(dist_floor)))
        .max(T::min_positive_value());
    // Tighter than this drowns in the roundoff of g(x) - g(x0) near the pole.
    let tol = scale * T::lit(1e-11).max(T::epsilon() * T::lit(64.0));

    let x0 = nu.re;
    let integral: C<T> = if x0.abs() < cutoff {
        // Subtract the value at the nearest real point so the integrand stays smooth.
        let g0 = g(x0);
        let smooth = |x: T| {
            let d = nu - cx(x);
            cx(g(x) - g0) / d
        };
        let left: C<T> = integrate_adaptive(smooth, -cutoff, x0, tol)?;
        let right: C<T> = integrate_adaptive(smooth, x0, cutoff, tol)?;
        let log_part = (nu + cx(cutoff)).ln() - (nu - cx(cutoff)).ln();
        left + right + log_part * g0
    } else {
        integrate_adaptive(|x: T| cx(g(x)) / (nu - cx(x)), -cutoff, cutoff, tol)?
    };
    let two_pi_i = C::new(T::zero(), T::TAU());
    Ok(CauchyTransform { value: integral / two_pi_i, accuracy_degraded: nu.im.abs() < T::lit(0.05) })
}

/// `E[Z(mu) / Z(nu)]` for the GUE of size `N`.
pub fn ratio_kernel<T: Real>(mu: C<T>, nu: ComplexSpectralPoint<T>, n: usize) -> Result<RatioKernelResult<T>> {
    if n < 2 {
        return Err(invalid("ratio kernel needs N >= 2"));
    }
    let f_n = cauchy_transform(nu, n, n)?.value;
    let f_nm1 = cauchy_transform(nu, n - 1, n)?.value;
    let p = monic_sequence(mu, n, n);
    // Casoratian pi_{N-1} f_N - pi_N f_{N-1} is constant: -c_{N-1} / (2 pi i).
    let casoratian = -cx(monic_norm::<T>(n - 1, n)) / C::new(T::zero(), T::TAU());
    let value = (p[n - 1] * f_n - p[n] * f_nm1) / casoratian;
    let scale_r = T::from_usize_lossy(n) * (mu.re - nu.value().re) / T::PI();
    Ok(RatioKernelResult { value, scale_r })
}

/// Bulk limit of `E[Z(mu)/Z(nu)]`: `exp(-i pi r)` above the axis, `exp(i pi r)` below.
pub fn scaled_ratio_kernel<T: Real>(r: T, half_plane: i8) -> Result<C<T>> {
    let phase = match half_plane {
        1 => -T::PI() * r,
        -1 => T::PI() * r,
        _ => return Err(invalid("half_plane must be +1 or -1")),
    };
    Ok(C::from_polar(T::one(), phase))
}

/// `E[Z(mu1) Z(mu2) / (Z(nu1) Z(nu2))]` at finite `N`.
///
/// Built from two-point ratios as `det A / det C` with
/// `A_ij = E[Z(mu_j)/Z(nu_i)] / (nu_i - mu_j)` and the Cauchy matrix
/// `C_ij = 1 / (nu_i - mu_j)`.
pub fn four_point_ratio<T: Real>(
    mu: [C<T>; 2],
    nu: [ComplexSpectralPoint<T>; 2],
    n: usize,
) -> Result<C<T>> {
    if mu[0] == mu[1] || nu[0].value() == nu[1].value() {
        return Err(Error::Domain("coincident numerator or denominator points".into()));
    }
    // A numerator point equal to a denominator point cancels exactly.
    for i in 0..2 {
        for j in 0..2 {
            if mu[j] == nu[i].value() {
                return Ok(ratio_kernel(mu[1 - j], nu[1 - i], n)?.value);
            }
        }
    }
    let mut a = [[cx(T::zero()); 2]; 2];
    let mut c = [[cx(T::zero()); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let d = nu[i].value() - mu[j];
            c[i][j] = C::new(T::one(), T::zero()) / d;
            a[i][j] = ratio_kernel(mu[j], nu[i], n)?.value / d;
        }
    }
    let det_a = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let det_c = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    Ok(det_a / det_c)
}

/// Bulk limit of the four-point ratio, with `Im nu1 > 0` and `Im nu2 < 0`.
///
/// Arguments are unfolded positions: `zeta` for the numerator points and
/// `kappa` for the real parts of the denominator points.
pub fn scaled_four_point<T: Real>(zeta1: T, zeta2: T, kappa1: T, kappa2: T) -> Result<C<T>> {
    let pts = [zeta1, zeta2, kappa1, kappa2];
    let close = |a: T, b: T| (a - b).abs() < T::lit(1e-6) * T::one().max(a.abs());
    for i in 0..4 {
        let matches = (0..4).filter(|&j| close(pts[i], pts[j])).count();
        if matches >= 3 {
            return Err(Error::Domain("three or more coinciding arguments".into()));
        }
    }
    if close(kappa1, kappa2) {
        return Err(Error::Domain(
            "denominator points pinching the real axis from both sides make the average diverge".into(),
        ));
    }
    let i_pi = C::new(T::zero(), T::PI());
    let front = (i_pi * (kappa1 - kappa2)).exp();
    let dk = kappa1 - kappa2;
    if close(zeta1, zeta2) {
        let z = (zeta1 + zeta2) / T::lit(2.0);
        let inner = cx(dk) + i_pi * T::lit(2.0) * (z - kappa1) * (z - kappa2);
        return Ok(front * inner / dk);
    }
    let dz = zeta1 - zeta2;
    let first = (i_pi * dz).exp() * ((zeta1 - kappa1) * (zeta2 - kappa2));
    let second = (-i_pi * dz).exp() * ((zeta1 - kappa2) * (zeta2 - kappa1));
    Ok(front * (first - second) / (dz * dk))
}
