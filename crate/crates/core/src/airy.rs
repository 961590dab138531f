//! The Airy function `Ai`, its derivative, and the soft-edge kernel.

use crate::error::{require_finite, Result};
use crate::scalar::Real;

/// `Ai(0)` and `-Ai'(0)`.
const AI0: f64 = 0.355_028_053_887_817_2;
const DAI0: f64 = 0.258_819_403_792_806_8;

const POSITIVE_CUTOFF: f64 = 4.5;
const NEGATIVE_CUTOFF: f64 = -7.5;
const MAX_TERMS: usize = 200;

/// `Ai` and `Ai'` at one point. `Ai''(x) = x Ai(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues<T> {
    pub ai: T,
    pub ai_prime: T,
    pub at: T,
}

impl<T: Real> AiryValues<T> {
    pub fn ai_second(&self) -> T {
        self.at * self.ai
    }
}

/// Evaluates `Ai(x)` and `Ai'(x)`.
pub fn airy_ai<T: Real>(x: T) -> Result<AiryValues<T>> {
    require_finite(x, "xi")?;
    let (ai, ai_prime) = if x > T::lit(POSITIVE_CUTOFF) {
        decaying(x)
    } else if x < T::lit(NEGATIVE_CUTOFF) {
        oscillating(-x)
    } else {
        maclaurin(x)
    };
    Ok(AiryValues { ai, ai_prime, at: x })
}

fn maclaurin<T: Real>(x: T) -> (T, T) {
    let x3 = x * x * x;
    let eps = T::epsilon();
    // f = sum a_k x^{3k}, g = sum b_k x^{3k+1}
    let (mut f, mut df) = (T::one(), T::zero());
    let (mut g, mut dg) = (x, T::one());
    let mut a = T::one();
    let mut b = T::one();
    let mut pow = T::one(); // x^{3k}
    for k in 1..MAX_TERMS {
        let kf = T::from_usize_lossy(k);
        let three_k = T::lit(3.0) * kf;
        a /= (three_k - T::one()) * three_k;
        b /= three_k * (three_k + T::one());
        let prev_pow = pow;
        pow *= x3;
        let tf = a * pow;
        let tg = b * pow * x;
        f += tf;
        g += tg;
        df += a * three_k * prev_pow * x * x;
        dg += b * (three_k + T::one()) * pow;
        if tf.abs() <= eps * f.abs().max(T::min_positive_value())
            && tg.abs() <= eps * g.abs().max(T::min_positive_value())
            && k > 2
        {
            break;
        }
    }
    let c1 = T::lit(AI0);
    let c2 = T::lit(DAI0);
    (c1 * f - c2 * g, c1 * df - c2 * dg)
}

/// Coefficients `u_k`, `v_k` of the large-argument expansions.
fn uv_coefficients<T: Real>(count: usize) -> (Vec<T>, Vec<T>) {
    let mut u = vec![T::one()];
    let mut v = vec![T::one()];
    for k in 1..count {
        let kf = T::from_usize_lossy(k);
        let six_k = T::lit(6.0) * kf;
        let next = u[k - 1] * (six_k - T::lit(5.0)) * (six_k - T::lit(3.0)) * (six_k - T::one())
            / (T::lit(216.0) * kf * (kf + kf - T::one()));
        u.push(next);
        v.push(-next * (six_k + T::one()) / (six_k - T::one()));
    }
    (u, v)
}

/// Alternating sum `sum_k (-1)^k c_{start + step*k} / zeta^{start + step*k}`,
/// stopped at the smallest term.
fn truncated_series<T: Real>(c: &[T], zeta: T, start: usize, step: usize) -> T {
    let mut sum = T::zero();
    let mut last = T::infinity();
    let mut sign = T::one();
    let mut idx = start;
    while idx < c.len() {
        let term = c[idx] / zeta.powi(idx as i32);
        if term.abs() > last {
            break;
        }
        sum += sign * term;
        last = term.abs();
        sign = -sign;
        idx += step;
    }
    sum
}

fn decaying<T: Real>(x: T) -> (T, T) {
    let zeta = T::lit(2.0 / 3.0) * x.powf(T::lit(1.5));
    let (u, v) = uv_coefficients::<T>(40);
    let pre = (-zeta).exp() / (T::lit(2.0) * T::PI().sqrt());
    let q = x.powf(T::lit(0.25));
    let su = truncated_series(&u, zeta, 0, 1);
    let sv = truncated_series(&v, zeta, 0, 1);
    (pre / q * su, -pre * q * sv)
}

fn oscillating<T: Real>(z: T) -> (T, T) {
    let zeta = T::lit(2.0 / 3.0) * z.powf(T::lit(1.5));
    let (u, v) = uv_coefficients::<T>(60);
    let theta = zeta - T::FRAC_PI_4();
    let (s, c) = theta.sin_cos();
    let q = z.powf(T::lit(0.25));
    let rp = T::PI().sqrt();
    let pu = truncated_series(&u, zeta, 0, 2);
    let qu = truncated_series(&u, zeta, 1, 2);
    let pv = truncated_series(&v, zeta, 0, 2);
    let qv = truncated_series(&v, zeta, 1, 2);
    ((c * pu + s * qu) / (rp * q), q * (s * pv - c * qv) / rp)
}

/// `Ai'(x)^2 - x Ai(x)^2`, the diagonal of the Airy kernel.
pub fn edge_density<T: Real>(xi: T) -> Result<T> {
    let a = airy_ai(xi)?;
    Ok(a.ai_prime * a.ai_prime - xi * a.ai * a.ai)
}

/// `[Ai(x) Ai'(y) - Ai(y) Ai'(x)] / (x - y)`.
pub fn airy_kernel<T: Real>(xi1: T, xi2: T) -> Result<T> {
    let threshold = T::lit(1e-6) * T::one().max(xi1.abs());
    if (xi1 - xi2).abs() < threshold {
        return edge_density((xi1 + xi2) / T::lit(2.0));
    }
    let a = airy_ai(xi1)?;
    let b = airy_ai(xi2)?;
    Ok((a.ai * b.ai_prime - b.ai * a.ai_prime) / (xi1 - xi2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn values_at_zero() {
        let a = airy_ai(0.0f64).unwrap();
        assert_relative_eq!(a.ai, 0.3550280539, epsilon = 1e-10);
        assert_relative_eq!(a.ai_prime, -0.2588194038, epsilon = 1e-10);
        assert_eq!(a.ai_second(), 0.0);
        assert_relative_eq!(edge_density(0.0f64).unwrap(), 0.066987, epsilon = 1e-6);
    }

    #[test]
    fn reference_values() {
        let cases = [
            (1.0f64, 0.1352924163f64, -0.1591474413f64),
            (-1.0, 0.5355608833, -0.0101605671),
            (5.0, 1.083444281e-4, -2.474138908e-4),
            (-5.0, 0.3507610090, 0.3271928185),
            (-10.0, 0.0402412385, 0.9962650441),
        ];
        for (x, ai, aip) in cases {
            let a = airy_ai(x).unwrap();
            assert!((a.ai - ai).abs() < 1e-9, "Ai({x}) = {} vs {ai}", a.ai);
            assert!((a.ai_prime - aip).abs() < 1e-9, "Ai'({x}) = {} vs {aip}", a.ai_prime);
        }
    }

    #[test]
    fn branches_agree_at_crossovers() {
        for x in [POSITIVE_CUTOFF, NEGATIVE_CUTOFF] {
            let (s, sp) = maclaurin(x);
            let (a, ap) = if x > 0.0 { decaying(x) } else { oscillating(-x) };
            assert!((s - a).abs() < 1e-9, "{x}: {s} vs {a}");
            assert!((sp - ap).abs() < 1e-9, "{x}: {sp} vs {ap}");
        }
    }

    #[test]
    fn leading_asymptotics_within_two_percent() {
        let z = 5.0f64;
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let osc = z.powf(-0.25) / std::f64::consts::PI.sqrt() * (-zeta + std::f64::consts::FRAC_PI_4).cos();
        assert_relative_eq!(airy_ai(-z).unwrap().ai, osc, max_relative = 0.02);
        let dec = 0.5 * z.powf(-0.25) / std::f64::consts::PI.sqrt() * (-zeta).exp();
        assert_relative_eq!(airy_ai(z).unwrap().ai, dec, max_relative = 0.02);
    }

    #[test]
    fn ode_residual() {
        let h = 1e-4;
        let mut x = -5.0f64;
        while x <= 5.0 {
            let d = (airy_ai(x + h).unwrap().ai_prime - airy_ai(x - h).unwrap().ai_prime) / (2.0 * h);
            assert!((d - x * airy_ai(x).unwrap().ai).abs() < 1e-5, "x = {x}");
            x += 0.25;
        }
    }

    #[test]
    fn edge_density_shape() {
        assert!(edge_density(8.0f64).unwrap() <= 1e-6);
        let mut x = -10.0f64;
        while x <= 10.0 {
            assert!(airy_kernel(x, x).unwrap() >= 0.0);
            x += 0.05;
        }
        // The slope is -Ai^2: never positive, touching zero at each Airy zero.
        assert!(edge_density(-6.0f64).unwrap() > 0.0);
        let slope: Vec<f64> = (0..400)
            .map(|i| {
                let x = -8.0 + 0.01 * i as f64;
                (edge_density(x + 1e-4).unwrap() - edge_density(x - 1e-4).unwrap()) / 2e-4
            })
            .collect();
        assert!(slope.iter().all(|&v| v <= 1e-8));
        let turns = slope.windows(3).filter(|w| (w[1] - w[0]) * (w[2] - w[1]) < 0.0).count();
        assert!(turns >= 4, "{turns}");
    }

    #[test]
    fn kernel_confluence_and_symmetry() {
        for xi in [0.0f64, 1.0] {
            let near = airy_kernel(xi, xi + 1e-6).unwrap();
            assert!((near - airy_kernel(xi, xi).unwrap()).abs() < 1e-5);
            assert_eq!(airy_kernel(xi, xi).unwrap(), edge_density(xi).unwrap());
        }
        assert_relative_eq!(airy_kernel(-1.3, 0.7).unwrap(), airy_kernel(0.7, -1.3).unwrap(), max_relative = 1e-14);
    }
}
