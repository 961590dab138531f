//! N-scaled Hermite polynomials.
//!
//! `h_k(x)` is orthogonal with respect to `exp(-N x^2 / 2)` and has leading
//! coefficient `N^k`. Values grow like `N^k x^k`, so everything here is carried
//! in the log domain through [`ScaledValue`].

use std::cmp::Ordering;

use crate::airy::airy_ai;
use crate::error::{invalid, require_finite, Error, Result};
use crate::scalar::Real;

/// A real number stored as `sign * exp(log_magnitude)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue<T> {
    /// `1`, `-1`, or `0`.
    pub sign: i8,
    /// `ln |value|`; `-inf` for zero.
    pub log_magnitude: T,
}

impl<T: Real> ScaledValue<T> {
    pub fn zero() -> Self {
        Self { sign: 0, log_magnitude: T::neg_infinity() }
    }

    pub fn from_parts(sign: i8, log_magnitude: T) -> Self {
        if sign == 0 || log_magnitude == T::neg_infinity() {
            Self::zero()
        } else {
            Self { sign: sign.signum(), log_magnitude }
        }
    }

    pub fn from_value(v: T) -> Self {
        if v == T::zero() {
            Self::zero()
        } else {
            Self { sign: if v > T::zero() { 1 } else { -1 }, log_magnitude: v.abs().ln() }
        }
    }

    /// The plain value; overflows to infinity when not representable.
    pub fn value(&self) -> T {
        match self.sign {
            0 => T::zero(),
            s => T::from_i8(s).unwrap() * self.log_magnitude.exp(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn neg(self) -> Self {
        Self { sign: -self.sign, ..self }
    }

    pub fn abs(self) -> Self {
        Self { sign: self.sign.abs(), ..self }
    }

    pub fn mul(self, other: Self) -> Self {
        Self::from_parts(self.sign * other.sign, self.log_magnitude + other.log_magnitude)
    }

    pub fn div(self, other: Self) -> Self {
        Self::from_parts(self.sign * other.sign, self.log_magnitude - other.log_magnitude)
    }

    /// Multiplies by a plain real factor.
    pub fn scale(self, factor: T) -> Self {
        self.mul(Self::from_value(factor))
    }

    /// Multiplies by `exp(log_factor)`.
    pub fn mul_exp(self, log_factor: T) -> Self {
        Self::from_parts(self.sign, self.log_magnitude + log_factor)
    }

    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let m = self.log_magnitude.max(other.log_magnitude);
        let a = T::from_i8(self.sign).unwrap() * (self.log_magnitude - m).exp();
        let b = T::from_i8(other.sign).unwrap() * (other.log_magnitude - m).exp();
        Self::from_value(a + b).mul_exp(m)
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    /// Ratio `self / other` as a plain number.
    pub fn ratio(self, other: Self) -> T {
        self.div(other).value()
    }
}

impl<T: Real> PartialOrd for ScaledValue<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.sub(*other).sign.partial_cmp(&0)
    }
}

/// Orthonormal Hermite system for the weight `exp(-N x^2 / 2)`.
#[derive(Debug, Clone)]
pub struct HermiteBasis<T> {
    weight_scale: usize,
    max_order: usize,
    n: T,
    /// `sqrt(k / N)` for `k = 0..=max_order + 1`.
    step: Vec<T>,
    /// `ln` of `h_k / h~_k`, i.e. half of `ln(k! N^k sqrt(2 pi / N))`.
    ln_norm: Vec<T>,
}

impl<T: Real> HermiteBasis<T> {
    pub fn new(weight_scale: usize, max_order: usize) -> Result<Self> {
        if weight_scale == 0 {
            return Err(invalid("weight_scale must be at least 1"));
        }
        let n = T::from_usize_lossy(weight_scale);
        let step = (0..=max_order + 1)
            .map(|k| (T::from_usize_lossy(k) / n).sqrt())
            .collect();
        let ln_n = (weight_scale as f64).ln();
        let base = 0.25 * (2.0 * std::f64::consts::PI / weight_scale as f64).ln();
        let mut ln_fact = 0.0f64;
        let mut ln_norm = Vec::with_capacity(max_order + 2);
        for k in 0..=max_order + 1 {
            if k > 0 {
                ln_fact += (k as f64).ln();
            }
            ln_norm.push(T::lit(0.5 * (ln_fact + k as f64 * ln_n) + base));
        }
        Ok(Self { weight_scale, max_order, n, step, ln_norm })
    }

    pub fn weight_scale(&self) -> usize {
        self.weight_scale
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    fn check_order(&self, k: usize) -> Result<()> {
        if k > self.max_order {
            Err(invalid(format!("order {k} exceeds basis max_order {}", self.max_order)))
        } else {
            Ok(())
        }
    }

    /// `h~_0(x), ..., h~_{k_max}(x)`.
    pub fn eval_orthonormal_sequence(&self, x: T, k_max: usize) -> Result<Vec<ScaledValue<T>>> {
        require_finite(x, "x")?;
        self.check_order(k_max)?;
        Ok(self.sequence_unchecked(x, k_max))
    }

    fn sequence_unchecked(&self, x: T, k_max: usize) -> Vec<ScaledValue<T>> {
        let big = T::max_value().sqrt().sqrt();
        let mut out = Vec::with_capacity(k_max + 1);
        let mut offset = T::zero();
        let h0 = (self.n / T::TAU()).powf(T::lit(0.25));
        let mut prev = T::zero();
        let mut cur = h0;
        out.push(ScaledValue::from_value(cur));
        for k in 0..k_max {
            let next = (x * cur - self.step[k] * prev) / self.step[k + 1];
            prev = cur;
            cur = next;
            let m = prev.abs().max(cur.abs());
            if m > big || (m < T::one() / big && m > T::zero()) {
                prev = prev / m;
                cur = cur / m;
                offset += m.ln();
            }
            out.push(ScaledValue::from_value(cur).mul_exp(offset));
        }
        out
    }

    /// `h~_k(x)`.
    pub fn orthonormal(&self, x: T, k: usize) -> Result<ScaledValue<T>> {
        Ok(self.eval_orthonormal_sequence(x, k)?[k])
    }

    /// `ln(h_k / h~_k)`.
    pub fn ln_norm(&self, k: usize) -> T {
        self.ln_norm[k]
    }

    /// The raw polynomial `h_k(x)` with leading coefficient `N^k`.
    pub fn hermite(&self, x: T, k: usize) -> Result<ScaledValue<T>> {
        Ok(self.orthonormal(x, k)?.mul_exp(self.ln_norm[k]))
    }

    /// `h_k(x) / N^k`.
    pub fn monic_hermite(&self, x: T, k: usize) -> Result<ScaledValue<T>> {
        let ln_nk = T::from_usize_lossy(k) * self.n.ln();
        Ok(self.hermite(x, k)?.mul_exp(-ln_nk))
    }

    /// `h_k'(x) = N k h_{k-1}(x)`.
    pub fn hermite_derivative(&self, x: T, k: usize) -> Result<ScaledValue<T>> {
        self.check_order(k)?;
        if k == 0 {
            require_finite(x, "x")?;
            return Ok(ScaledValue::zero());
        }
        let nk = self.n * T::from_usize_lossy(k);
        Ok(self.hermite(x, k - 1)?.scale(nk))
    }

    /// `sum_{k<n} h~_k(x) h~_k(y)` in scaled form.
    pub fn christoffel_darboux_scaled(&self, x: T, y: T, n: usize) -> Result<ScaledValue<T>> {
        require_finite(x, "x")?;
        require_finite(y, "y")?;
        if n == 0 {
            return Err(invalid("Christoffel-Darboux sum needs n >= 1"));
        }
        self.check_order(n)?;
        let threshold = T::lit(1e-6) * T::one().max(x.abs());
        if (x - y).abs() < threshold {
            let m = (x + y) / T::lit(2.0);
            return Ok(self.confluent_cd(m, n));
        }
        let hx = self.sequence_unchecked(x, n);
        let hy = self.sequence_unchecked(y, n);
        let num = hy[n - 1].mul(hx[n]).sub(hx[n - 1].mul(hy[n]));
        Ok(num.scale(self.step[n] / (x - y)))
    }

    /// `n h~_{n-1}^2 - sqrt(n(n-1)) h~_{n-2} h~_n`, the diagonal of the sum.
    fn confluent_cd(&self, x: T, n: usize) -> ScaledValue<T> {
        let h = self.sequence_unchecked(x, n);
        let nf = T::from_usize_lossy(n);
        let first = h[n - 1].mul(h[n - 1]).scale(nf);
        if n == 1 {
            return first;
        }
        let c = (nf * (nf - T::one())).sqrt();
        first.sub(h[n - 2].mul(h[n]).scale(c))
    }

    /// `sum_{k<n} h~_k(x) h~_k(y)`.
    pub fn christoffel_darboux(&self, x: T, y: T, n: usize) -> Result<T> {
        Ok(self.christoffel_darboux_scaled(x, y, n)?.value())
    }
}

fn check_shift<T: Real>(x: T, big_n: usize, n: i64) -> Result<()> {
    require_finite(x, "x")?;
    if big_n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    if n.unsigned_abs() as f64 > big_n as f64 / 10.0 {
        return Err(invalid(format!("order shift {n} is not small against N = {big_n}")));
    }
    Ok(())
}

/// Leading-order approximation of `h_{N+n}(x)` for `|x| < 2`.
pub fn plancherel_rotach_bulk<T: Real>(x: T, big_n: usize, n: i64) -> Result<ScaledValue<T>> {
    check_shift(x, big_n, n)?;
    if x.abs() >= T::lit(2.0) {
        return Err(Error::Domain(format!("bulk asymptotics need |x| < 2, got {x}")));
    }
    let nf = T::from_usize_lossy(big_n);
    let nn = T::from_i64(n).unwrap();
    let half = T::lit(0.5);
    let phi = (x / T::lit(2.0)).acos();
    let two_phi = phi + phi;
    let theta = (nn + half) * phi - T::FRAC_PI_4() + nf * (phi - half * two_phi.sin());
    let ln_mag = (nf + nn) * nf.ln()
        + half * (T::lit(2.0) / phi.sin()).ln()
        + half * nf * two_phi.cos();
    Ok(ScaledValue::from_value(theta.cos()).mul_exp(ln_mag))
}

/// Leading-order approximation of `h_{N+n}(x)` for `|x| > 2`.
pub fn plancherel_rotach_outside<T: Real>(x: T, big_n: usize, n: i64) -> Result<ScaledValue<T>> {
    check_shift(x, big_n, n)?;
    let two = T::lit(2.0);
    if x.abs() <= two {
        return Err(Error::Domain(format!("outside asymptotics need |x| > 2, got {x}")));
    }
    let ax = x.abs();
    let nf = T::from_usize_lossy(big_n);
    let nn = T::from_i64(n).unwrap();
    let half = T::lit(0.5);
    let phi = (ax / two).acosh();
    let ln_mag = (nf + nn) * nf.ln() + nf * ax * ax / T::lit(4.0) - half * nf
        - half * (two * phi.sinh()).ln()
        + (nn + half) * phi
        - half * nf * ((phi + phi).sinh() - two * phi);
    let order = big_n as i64 + n;
    let sign = if x < T::zero() && order % 2 != 0 { -1 } else { 1 };
    Ok(ScaledValue::from_parts(sign, ln_mag))
}

/// Airy-regime approximation of `h_{N+n}(2 - xi N^{-2/3})`.
///
/// The argument of `Ai` is measured from the turning point of order `N + n`,
/// which sits `(n + 1/2) N^{-1/3}` further out in `xi`.
pub fn plancherel_rotach_edge<T: Real>(xi: T, big_n: usize, n: i64) -> Result<ScaledValue<T>> {
    check_shift(xi, big_n, n)?;
    let nf = T::from_usize_lossy(big_n);
    let nn = T::from_i64(n).unwrap();
    let half = T::lit(0.5);
    let third = T::one() / T::lit(3.0);
    let x = T::lit(2.0) - xi * nf.powf(-third - third);
    let xi_eff = xi + (nn + half) * nf.powf(-third);
    let ai = airy_ai(-xi_eff)?.ai;
    let ln_mag = half * T::TAU().ln() + (nf + nn + third * half) * nf.ln()
        + nf * x * x / T::lit(4.0)
        - half * nf;
    Ok(ScaledValue::from_value(ai).mul_exp(ln_mag))
}
