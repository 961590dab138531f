//! Brute-force oracles shared by the integration tests.
//!
//! Nothing here calls into the library's quadrature: integrals use composite
//! five-point Gauss-Legendre panels with hard-coded nodes.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const GL5_X: [f64; 5] = [-0.906_179_845_938_664, -0.538_469_310_105_683_1, 0.0, 0.538_469_310_105_683_1, 0.906_179_845_938_664];
const GL5_W: [f64; 5] = [0.236_926_885_056_189_1, 0.478_628_670_499_366_5, 0.568_888_888_888_888_9, 0.478_628_670_499_366_5, 0.236_926_885_056_189_1];

/// Nodes and weights of a composite rule on `[a, b]` with `panels` panels.
pub fn panel_rule(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * 5);
    let mut ws = Vec::with_capacity(panels * 5);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for k in 0..5 {
            xs.push(mid + 0.5 * h * GL5_X[k]);
            ws.push(0.5 * h * GL5_W[k]);
        }
    }
    (xs, ws)
}

pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (xs, ws) = panel_rule(a, b, panels);
    xs.iter().zip(&ws).map(|(&x, &w)| w * f(x)).sum()
}

pub fn integrate_c(f: impl Fn(f64) -> C64, a: f64, b: f64, panels: usize) -> C64 {
    let (xs, ws) = panel_rule(a, b, panels);
    xs.iter().zip(&ws).map(|(&x, &w)| f(x) * w).sum()
}

/// Ai and Ai' from the defining integral `(1/pi) int_0^inf cos(t^3/3 + x t) dt`,
/// with the ray rotated to `arg t = pi/6` where the integrand decays like `exp(-s^3/3)`.
pub fn airy_integral(x: f64) -> (f64, f64) {
    let rot = C64::from_polar(1.0, PI / 6.0);
    let ix_rot = C64::new(0.0, x) * rot;
    let upper = 14.0;
    let base = |s: f64| (ix_rot * s - s * s * s / 3.0).exp();
    let ai = integrate_c(|s| base(s), 0.0, upper, 2800) * rot;
    let i_rot2 = C64::new(0.0, 1.0) * C64::from_polar(1.0, PI / 3.0);
    let aip = integrate_c(|s| base(s) * s, 0.0, upper, 2800) * i_rot2;
    (ai.re / PI, aip.re / PI)
}

/// `h_k(x) = N^k sqrt(N/2pi) int (x - i u)^k exp(-N u^2 / 2) du`, the integral
/// representation with the contour shifted through the saddle.
pub fn hermite_integral(x: f64, k: usize, n: usize) -> f64 {
    let nf = n as f64;
    let half = ((k as f64 + 1.0) / nf).sqrt() + 14.0 / nf.sqrt();
    let v = integrate_c(|u| C64::new(x, -u).powu(k as u32) * (-nf * u * u / 2.0).exp(), -half, half, 2000);
    v.re * nf.powi(k as i32) * (nf / (2.0 * PI)).sqrt()
}

/// Orthonormal `h~_k` by direct summation of the explicit Hermite series.
pub fn orthonormal_direct(x: f64, k: usize, n: usize) -> f64 {
    // h_k(x) = N^{k/2} He_k(sqrt(N) x), He_k probabilists' Hermite.
    let nf = n as f64;
    let y = nf.sqrt() * x;
    let (mut a, mut b) = (1.0, y);
    let he = if k == 0 {
        1.0
    } else {
        for j in 1..k {
            let c = y * b - j as f64 * a;
            a = b;
            b = c;
        }
        b
    };
    let hk = nf.powf(k as f64 / 2.0) * he;
    let lnfact: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
    let ln_norm = 0.5 * (lnfact + k as f64 * nf.ln()) + 0.25 * (2.0 * PI / nf).ln();
    hk * (-ln_norm).exp()
}

/// Unnormalized GUE eigenvalue density `exp(-N sum x^2 / 2) prod (x_i - x_j)^2`.
pub fn jpdf_weight(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mut v = (-n * xs.iter().map(|x| x * x).sum::<f64>() / 2.0).exp();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let d = xs[i] - xs[j];
            v *= d * d;
        }
    }
    v
}

/// Tensor-product quadrature over the JPDF of `n` eigenvalues.
pub struct Jpdf {
    pub n: usize,
    xs: Vec<f64>,
    ws: Vec<f64>,
    norm: f64,
}

impl Jpdf {
    pub fn new(n: usize) -> Self {
        Self::with_breaks(n, &[])
    }

    /// Panels never straddle a breakpoint, so indicator functions of
    /// intervals ending at the breakpoints integrate exactly.
    pub fn with_breaks(n: usize, breaks: &[f64]) -> Self {
        let cut = Self::cutoff(n);
        let mut pts = vec![-cut];
        pts.extend_from_slice(breaks);
        pts.push(cut);
        let (mut xs, mut ws) = (Vec::new(), Vec::new());
        for w in pts.windows(2) {
            let panels = ((w[1] - w[0]) / Self::panel_width(n)).ceil().max(1.0) as usize;
            let (x, wt) = panel_rule(w[0], w[1], panels);
            xs.extend(x);
            ws.extend(wt);
        }
        let mut me = Self { n, xs, ws, norm: 1.0 };
        me.norm = me.expect_real(|_| 1.0);
        me
    }

    fn cutoff(n: usize) -> f64 {
        (90.0 / n as f64).sqrt() + 1.0
    }

    fn panel_width(n: usize) -> f64 {
        if n <= 2 {
            0.05
        } else {
            0.2
        }
    }

    pub fn line(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ws)
    }

    fn sum_over<F: FnMut(&[f64], f64)>(&self, fixed: &[f64], mut f: F) {
        let free = self.n - fixed.len();
        let m = self.xs.len();
        let mut idx = vec![0usize; free];
        let mut pt: Vec<f64> = fixed.to_vec();
        pt.resize(self.n, 0.0);
        loop {
            let mut w = 1.0;
            for (d, &i) in idx.iter().enumerate() {
                pt[fixed.len() + d] = self.xs[i];
                w *= self.ws[i];
            }
            f(&pt, w);
            let mut d = 0;
            loop {
                if d == free {
                    return;
                }
                idx[d] += 1;
                if idx[d] < m {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    /// `E[g(lambda)]` over the normalized JPDF.
    pub fn expect_real(&self, g: impl Fn(&[f64]) -> f64) -> f64 {
        let mut acc = 0.0;
        self.sum_over(&[], |pt, w| acc += w * jpdf_weight(pt) * g(pt));
        acc / self.norm
    }

    pub fn expect_complex(&self, g: impl Fn(&[f64]) -> C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        self.sum_over(&[], |pt, w| acc += g(pt) * (w * jpdf_weight(pt)));
        acc / self.norm
    }

    /// `R_k(fixed) = N!/(N-k)! int P(fixed, rest) d rest`.
    pub fn correlation(&self, fixed: &[f64]) -> f64 {
        let k = fixed.len();
        let mut acc = 0.0;
        self.sum_over(fixed, |pt, w| acc += w * jpdf_weight(pt));
        let falling: f64 = ((self.n - k + 1)..=self.n).map(|j| j as f64).product();
        falling * acc / self.norm
    }

    /// Probability that no eigenvalue lies in `(-a, a)`, integrating each
    /// coordinate over the two outer half-lines only.
    pub fn hole(&self, a: f64) -> f64 {
        let cut = Self::cutoff(self.n);
        let panels = ((cut - a) / Self::panel_width(self.n)).ceil() as usize;
        let (mut xs, mut ws) = panel_rule(a, cut, panels);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        xs.extend(neg);
        ws.extend(ws.clone());
        let sub = Jpdf { n: self.n, xs, ws, norm: self.norm };
        let mut acc = 0.0;
        sub.sum_over(&[], |pt, w| acc += w * jpdf_weight(pt));
        acc / self.norm
    }

    /// `E[N_B^2]` for the interval `B = [lo, hi]`.
    pub fn count_second_moment(&self, lo: f64, hi: f64) -> f64 {
        self.expect_real(|pt| {
            let c = pt.iter().filter(|&&x| x >= lo && x <= hi).count() as f64;
            c * c
        })
    }
}

/// Cauchy transform `(1/2 pi i) int exp(-N l^2/2) pi_k(l) / (nu - l) dl` via its
/// Fourier representation: a one-sided `t`-integral with a Gaussian factor.
pub fn cauchy_t_integral(nu: C64, k: usize, n: usize) -> C64 {
    let nf = n as f64;
    let pref = (2.0 * PI / nf).sqrt() * nf.powi(-(k as i32)) / (2.0 * PI);
    let upper = (nf * 2.0 * 40.0).sqrt() + 2.0 * (k as f64 * nf).sqrt();
    let panels = (upper / 0.02).ceil() as usize;
    let i = C64::new(0.0, 1.0);
    if nu.im > 0.0 {
        -integrate_c(|t| (-i * t).powu(k as u32) * (-t * t / (2.0 * nf)).exp() * (i * t * nu).exp(), 0.0, upper, panels) * pref
    } else {
        integrate_c(|t| (i * t).powu(k as u32) * (-t * t / (2.0 * nf)).exp() * (-i * t * nu).exp(), 0.0, upper, panels) * pref
    }
}

/// `Z(z) = prod (z - lambda_i)`.
pub fn charpoly_at(eigs: &[f64], z: C64) -> C64 {
    eigs.iter().map(|&l| z - l).product()
}
