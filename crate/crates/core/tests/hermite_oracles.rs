mod common;

use guespec::hermite::{plancherel_rotach_bulk, plancherel_rotach_edge, plancherel_rotach_outside, HermiteBasis};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn recurrence_matches_integral_representation() {
    let b = HermiteBasis::<f64>::new(20, 12).unwrap();
    let exact = b.hermite(0.7, 10).unwrap().value();
    let oracle = common::hermite_integral(0.7, 10, 20);
    assert!(rel(exact, oracle) < 1e-8, "{exact} vs {oracle}");
}

#[test]
fn integral_representation_grid() {
    let mut worst = 0.0f64;
    for n in [1usize, 3, 7, 15, 30] {
        let b = HermiteBasis::<f64>::new(n, 31).unwrap();
        for k in [0usize, 1, 2, 5, 11, 20, 30] {
            for x in [-1.3, 0.45, 1.9] {
                let exact = b.hermite(x, k).unwrap().value();
                let oracle = common::hermite_integral(x, k, n);
                // Skip points that sit on top of a zero of h_k.
                let scale = b.hermite(x, k).unwrap().abs().value().max(1e-300);
                if (exact / scale).abs() < 1e-3 {
                    continue;
                }
                worst = worst.max(rel(exact, oracle));
            }
        }
    }
    assert!(worst < 1e-8, "worst relative error {worst}");
}

#[test]
fn orthonormal_values_match_explicit_series() {
    for n in [1usize, 4, 9] {
        let b = HermiteBasis::<f64>::new(n, 12).unwrap();
        for k in 0..=12 {
            for x in [-0.8, 0.15, 1.4] {
                let got = b.orthonormal(x, k).unwrap().value();
                let want = common::orthonormal_direct(x, k, n);
                assert!((got - want).abs() <= 1e-11 * want.abs().max(1e-3), "n={n} k={k} x={x}");
            }
        }
    }
}

#[test]
fn orthonormality_under_independent_quadrature() {
    let n = 12;
    let b = HermiteBasis::<f64>::new(n, 20).unwrap();
    let (xs, ws) = common::panel_rule(-6.0, 6.0, 600);
    let seqs: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| b.eval_orthonormal_sequence(x, 20).unwrap().iter().map(|v| v.value()).collect())
        .collect();
    for i in 0..=20 {
        for j in 0..=20 {
            let s: f64 = xs
                .iter()
                .zip(&ws)
                .zip(&seqs)
                .map(|((&x, &w), h)| w * (-(n as f64) * x * x / 2.0).exp() * h[i] * h[j])
                .sum();
            let target = if i == j { 1.0 } else { 0.0 };
            assert!((s - target).abs() < 1e-9, "({i},{j}) -> {s}");
        }
    }
}

#[test]
fn christoffel_darboux_equals_direct_sum() {
    let n = 30;
    let b = HermiteBasis::<f64>::new(n, 51).unwrap();
    for m in [1usize, 4, 17, 50] {
        for (x, y) in [(0.2, 0.9), (-1.7, 0.3), (2.4, 2.1)] {
            let cd = b.christoffel_darboux(x, y, m).unwrap();
            let direct: f64 = (0..m).map(|k| common::orthonormal_direct(x, k, n) * common::orthonormal_direct(y, k, n)).sum();
            assert!((cd - direct).abs() <= 1e-10 * direct.abs().max(1e-6), "m={m} ({x},{y}): {cd} vs {direct}");
        }
    }
}

fn pr_error_bulk(x: f64, n: usize, shift: i64) -> f64 {
    let b = HermiteBasis::<f64>::new(n, n + 2).unwrap();
    let exact = b.hermite(x, (n as i64 + shift) as usize).unwrap();
    let approx = plancherel_rotach_bulk(x, n, shift).unwrap();
    (approx.ratio(exact) - 1.0).abs()
}

fn pr_error_outside(x: f64, n: usize, shift: i64) -> f64 {
    let b = HermiteBasis::<f64>::new(n, n + 2).unwrap();
    let exact = b.hermite(x, (n as i64 + shift) as usize).unwrap();
    let approx = plancherel_rotach_outside(x, n, shift).unwrap();
    (approx.ratio(exact) - 1.0).abs()
}

fn pr_error_edge(xi: f64, n: usize) -> f64 {
    let b = HermiteBasis::<f64>::new(n, n + 2).unwrap();
    let x = 2.0 - xi * (n as f64).powf(-2.0 / 3.0);
    let exact = b.hermite(x, n).unwrap();
    let approx = plancherel_rotach_edge(xi, n, 0).unwrap();
    (approx.ratio(exact) - 1.0).abs()
}

#[test]
fn bulk_asymptotics_converge() {
    assert!(pr_error_bulk(0.0, 100, 0) < 0.02);
    assert!(pr_error_bulk(1.0, 200, 0) < pr_error_bulk(1.0, 100, 0));
    assert!(pr_error_bulk(1.0, 100, 1) < 0.02);
}

#[test]
fn outside_asymptotics_converge() {
    assert!(pr_error_outside(2.5, 100, 0) < 0.02);
    assert!(pr_error_outside(3.0, 100, 0) < pr_error_outside(3.0, 50, 0));
    assert!(pr_error_outside(2.5, 100, -1) < 0.02);
    // Negative side through parity.
    assert!(pr_error_outside(-2.5, 100, 1) < 0.02);
}

#[test]
fn edge_asymptotics_converge() {
    assert!(pr_error_edge(1.0, 100) < 0.05);
    assert!(pr_error_edge(1.0, 200) < pr_error_edge(1.0, 100));
    let at_zero = plancherel_rotach_edge::<f64>(0.0, 100, 0).unwrap();
    assert!(at_zero.value().is_finite() || at_zero.log_magnitude.is_finite());
}

#[test]
fn edge_matches_outside_regime() {
    let n = 100;
    let xi = -3.0;
    let x = 2.0 - xi * (n as f64).powf(-2.0 / 3.0);
    let e = plancherel_rotach_edge::<f64>(xi, n, 0).unwrap();
    let o = plancherel_rotach_outside::<f64>(x, n, 0).unwrap();
    assert!((e.ratio(o) - 1.0).abs() < 0.1);
}

#[test]
fn regimes_agree_in_overlap_windows() {
    let n = 200;
    let s = (n as f64).powf(-2.0 / 3.0);
    for xi in [1.0, 2.0, 3.0] {
        let edge_out = plancherel_rotach_edge::<f64>(-xi, n, 0).unwrap();
        let out = plancherel_rotach_outside::<f64>(2.0 + xi * s, n, 0).unwrap();
        assert!((edge_out.ratio(out) - 1.0).abs() < 0.1, "outside/edge at {xi}");
        let edge_in = plancherel_rotach_edge::<f64>(xi, n, 0).unwrap();
        let bulk = plancherel_rotach_bulk::<f64>(2.0 - xi * s, n, 0).unwrap();
        assert!((edge_in.ratio(bulk) - 1.0).abs() < 0.1, "bulk/edge at {xi}");
    }
}

#[test]
fn parity_holds_to_roundoff() {
    let b = HermiteBasis::<f64>::new(40, 60).unwrap();
    for k in [0usize, 1, 7, 30, 59] {
        for x in [0.3, 1.1, 2.6] {
            let p = b.hermite(x, k).unwrap();
            let m = b.hermite(-x, k).unwrap();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(m.sign as f64, sign * p.sign as f64);
            assert!((m.log_magnitude - p.log_magnitude).abs() < 1e-12 * p.log_magnitude.abs().max(1.0));
        }
    }
}
