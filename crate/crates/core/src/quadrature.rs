//! Gauss rules, adaptive integration, and Nyström Fredholm determinants.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::linalg::{det_in_place, tridiagonal_ql};
use crate::scalar::Real;

const NEWTON_ITERATIONS: usize = 100;

/// Where a rule integrates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    /// Plain integration over `[a, b]`.
    Interval(T, T),
    /// The whole line against `exp(-N x^2 / 2)`; the weight is folded into the rule.
    GaussianWeight { weight_scale: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub domain: Domain<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affine image of a finite-interval rule on `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> Result<Self> {
        let (lo, hi) = match self.domain {
            Domain::Interval(lo, hi) => (lo, hi),
            Domain::GaussianWeight { .. } => {
                return Err(invalid("cannot remap a Gaussian-weighted rule"))
            }
        };
        let scale = (b - a) / (hi - lo);
        Ok(Self {
            nodes: self.nodes.iter().map(|&x| a + (x - lo) * scale).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
            domain: Domain::Interval(a, b),
        })
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss–Legendre rule with `m` nodes on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(m: usize) -> Result<QuadratureRule<T>> {
    if !(1..=512).contains(&m) {
        return Err(invalid(format!("Gauss-Legendre order {m} outside 1..=512")));
    }
    let mf = T::from_usize_lossy(m);
    let mut nodes = vec![T::zero(); m];
    let mut weights = vec![T::zero(); m];
    let tol = T::epsilon() * T::lit(4.0);
    for i in 0..m.div_ceil(2) {
        let mut z = (T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (mf + T::lit(0.5))).cos();
        let mut pp = T::zero();
        let mut converged = false;
        for _ in 0..NEWTON_ITERATIONS {
            let (p1, p2) = legendre_pair(z, m);
            pp = mf * (z * p1 - p2) / (z * z - T::one());
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= tol {
                let (p1, p2) = legendre_pair(z, m);
                pp = mf * (z * p1 - p2) / (z * z - T::one());
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "Gauss-Legendre node search",
                detail: format!("node {i} of {m}"),
            });
        }
        let w = T::lit(2.0) / ((T::one() - z * z) * pp * pp);
        nodes[i] = -z;
        nodes[m - 1 - i] = z;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = T::zero();
    }
    Ok(QuadratureRule { nodes, weights, domain: Domain::Interval(-T::one(), T::one()) })
}

/// `(P_m(z), P_{m-1}(z))`.
fn legendre_pair<T: Real>(z: T, m: usize) -> (T, T) {
    let mut p1 = T::one();
    let mut p2 = T::zero();
    for j in 1..=m {
        let jf = T::from_usize_lossy(j);
        let p3 = p2;
        p2 = p1;
        p1 = ((jf + jf - T::one()) * z * p2 - (jf - T::one()) * p3) / jf;
    }
    (p1, p2)
}

/// Gauss–Hermite rule for `integral exp(-N x^2 / 2) p(x) dx`.
pub fn gauss_hermite_scaled<T: Real>(m: usize, weight_scale: usize) -> Result<QuadratureRule<T>> {
    if !(1..=256).contains(&m) {
        return Err(invalid(format!("Gauss-Hermite order {m} outside 1..=256")));
    }
    if weight_scale == 0 {
        return Err(invalid("weight_scale must be at least 1"));
    }
    let mf = T::from_usize_lossy(m);
    // Starting points: eigenvalues of the Jacobi matrix of exp(-t^2).
    let off: Vec<T> = (1..m).map(|k| (T::from_usize_lossy(k) / T::lit(2.0)).sqrt()).collect();
    let mut guesses = tridiagonal_ql(&vec![T::zero(); m], &off, None, 60)?;
    guesses.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut t = vec![T::zero(); m];
    let mut w = vec![T::zero(); m];
    let tol = T::epsilon() * T::lit(8.0);
    let quarter_pi = T::PI().powf(T::lit(-0.25));
    for i in 0..m.div_ceil(2) {
        let mut z = guesses[i];
        let mut pp = T::zero();
        let mut converged = false;
        for _ in 0..NEWTON_ITERATIONS {
            let mut p1 = quarter_pi;
            let mut p2 = T::zero();
            for j in 1..=m {
                let jf = T::from_usize_lossy(j);
                let p3 = p2;
                p2 = p1;
                p1 = z * (T::lit(2.0) / jf).sqrt() * p2 - ((jf - T::one()) / jf).sqrt() * p3;
            }
            pp = (mf + mf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= tol * T::one().max(z.abs()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "Gauss-Hermite node search",
                detail: format!("node {i} of {m}"),
            });
        }
        t[i] = z;
        w[i] = T::lit(2.0) / (pp * pp);
    }
    // t holds the nonnegative half in decreasing order; assemble ascending.
    let scale = (T::lit(2.0) / T::from_usize_lossy(weight_scale)).sqrt();
    let mut nodes = vec![T::zero(); m];
    let mut weights = vec![T::zero(); m];
    for i in 0..m.div_ceil(2) {
        nodes[i] = -t[i] * scale;
        nodes[m - 1 - i] = t[i] * scale;
        weights[i] = w[i] * scale;
        weights[m - 1 - i] = w[i] * scale;
    }
    if m % 2 == 1 {
        nodes[m / 2] = T::zero();
    }
    Ok(QuadratureRule { nodes, weights, domain: Domain::GaussianWeight { weight_scale } })
}

/// Values that adaptive quadrature can accumulate.
pub trait Quantity<T>:
    Copy + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + std::ops::Mul<T, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> T;
}

impl<T: Real> Quantity<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn magnitude(&self) -> T {
        self.abs()
    }
}

impl<T: Real> Quantity<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn magnitude(&self) -> T {
        self.norm()
    }
}

const PANEL_ORDER: usize = 15;
const MAX_PANELS: usize = 200_000;

/// Globally adaptive Gauss–Legendre integration of `f` over `[a, b]`.
///
/// A panel is accepted once its 15-point value agrees with the sum over its
/// two halves to within its share of `abs_tol`.
pub fn integrate_adaptive<T, V, F>(mut f: F, a: T, b: T, abs_tol: T) -> Result<V>
where
    T: Real,
    V: Quantity<T>,
    F: FnMut(T) -> V,
{
    if a == b {
        return Ok(V::zero());
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(invalid("integration limits must be finite"));
    }
    let rule = gauss_legendre::<T>(PANEL_ORDER)?;
    let half = T::lit(0.5);
    // Each panel also reports the integral of |f|, which bounds the roundoff.
    let mut panel = |lo: T, hi: T| -> (V, T) {
        let c = (lo + hi) * half;
        let r = (hi - lo) * half;
        let mut acc = V::zero();
        let mut l1 = T::zero();
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(c + r * x);
            acc = acc + v * (w * r);
            l1 += v.magnitude() * w * r.abs();
        }
        (acc, l1)
    };
    let total = (b - a).abs();
    let mut stack = vec![(a, b, panel(a, b).0)];
    let mut result = V::zero();
    let mut panels = 0usize;
    while let Some((lo, hi, whole)) = stack.pop() {
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                detail: format!("more than {MAX_PANELS} panels on [{a}, {b}]"),
            });
        }
        let mid = (lo + hi) * half;
        let (left, l1_left) = panel(lo, mid);
        let (right, l1_right) = panel(mid, hi);
        let split = left + right;
        let err = (whole - split).magnitude();
        let share = abs_tol * (hi - lo).abs() / total;
        let floor = T::epsilon() * T::lit(64.0) * (l1_left + l1_right);
        if err <= share.max(floor) || (hi - lo).abs() <= T::epsilon() * total {
            result = result + split;
        } else {
            stack.push((mid, hi, right));
            stack.push((lo, mid, left));
        }
    }
    Ok(result)
}

/// A symmetric integral kernel restricted to `[a, b]`.
#[derive(Clone)]
pub struct FredholmOperator<T, K> {
    pub kernel: K,
    pub a: T,
    pub b: T,
    /// Starting Gauss–Legendre order for the doubling loop.
    pub initial_nodes: usize,
    /// Accept once doubling the node count moves the determinant by at most this.
    pub tolerance: T,
}

impl<T: Real, K: Fn(T, T) -> T> FredholmOperator<T, K> {
    pub fn new(kernel: K, a: T, b: T) -> Self {
        Self { kernel, a, b, initial_nodes: 40, tolerance: T::lit(1e-8) }
    }

    /// The interval `(-L/2, L/2)`.
    pub fn centered(kernel: K, length: T) -> Self {
        let h = length / T::lit(2.0);
        Self::new(kernel, -h, h)
    }

    /// `det(I - M)` with `M_ij = sqrt(w_i w_j) K(x_i, x_j)` on an explicit rule.
    pub fn det_with_rule(&self, rule: &QuadratureRule<T>) -> Result<T> {
        let m = rule.len();
        if m < 4 {
            return Err(invalid("Fredholm discretization needs at least 4 nodes"));
        }
        let sw: Vec<T> = rule.weights.iter().map(|w| w.sqrt()).collect();
        let mut mat = vec![T::zero(); m * m];
        for i in 0..m {
            for j in i..m {
                let v = sw[i] * sw[j] * (self.kernel)(rule.nodes[i], rule.nodes[j]);
                let d = if i == j { T::one() } else { T::zero() };
                mat[i * m + j] = d - v;
                mat[j * m + i] = d - v;
            }
        }
        Ok(det_in_place(&mut mat, m))
    }

    /// Determinant using an `m`-node Gauss–Legendre rule on the interval.
    pub fn det_with_nodes(&self, m: usize) -> Result<T> {
        if self.a == self.b {
            return Ok(T::one());
        }
        let rule = gauss_legendre::<T>(m)?.mapped(self.a, self.b)?;
        self.det_with_rule(&rule)
    }
}

/// Maximum node count of the doubling loop.
pub const MAX_FREDHOLM_NODES: usize = 512;

/// `det(I - K)` on the operator's interval, doubling nodes until stable.
pub fn fredholm_det<T: Real, K: Fn(T, T) -> T>(op: &FredholmOperator<T, K>) -> Result<T> {
    if op.a == op.b {
        return Ok(T::one());
    }
    let mut m = op.initial_nodes.clamp(4, MAX_FREDHOLM_NODES);
    let mut prev = op.det_with_nodes(m)?;
    while m < MAX_FREDHOLM_NODES {
        m = (2 * m).min(MAX_FREDHOLM_NODES);
        let cur = op.det_with_nodes(m)?;
        if (cur - prev).abs() <= op.tolerance {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "Fredholm determinant",
        detail: format!("node doubling unsettled at {MAX_FREDHOLM_NODES} nodes"),
    })
}
