mod common;

use common::Jpdf;
use guespec::kernels::{hole_probability, CorrelationRequest, FiniteNKernel, HoleKernel};
use guespec::linalg::det;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-3)
}

#[test]
fn one_and_two_point_functions_match_jpdf() {
    for n in [2usize, 3] {
        let jpdf = Jpdf::new(n);
        let k = FiniteNKernel::<f64>::new(n).unwrap();
        for x in [-0.9, 0.0, 0.35, 1.6] {
            let want = jpdf.correlation(&[x]);
            let got = k.mean_density(x, false).unwrap();
            assert!(close(got, want, 1e-6), "N={n} R1({x}): {got} vs {want}");
        }
        for pts in [[0.3, -0.4], [1.1, 0.2], [-1.5, 0.9]] {
            let want = jpdf.correlation(&pts);
            let got = k.correlation_fn(&CorrelationRequest::new(pts.to_vec()).unwrap()).unwrap();
            assert!(close(got, want, 1e-6), "N={n} R2{pts:?}: {got} vs {want}");
        }
    }
    let jpdf = Jpdf::new(3);
    let k = FiniteNKernel::<f64>::new(3).unwrap();
    let pts = [-0.7, 0.1, 0.8];
    let want = jpdf.correlation(&pts);
    let got = k.correlation_fn(&CorrelationRequest::new(pts.to_vec()).unwrap()).unwrap();
    assert!(close(got, want, 1e-6));
}

#[test]
fn marginalization_matches_jpdf() {
    for n in [2usize, 3] {
        let jpdf = Jpdf::new(n);
        let k = FiniteNKernel::<f64>::new(n).unwrap();
        for fixed in [vec![0.25], vec![-1.2]] {
            let got = k.marginalization_check(1, &fixed).unwrap();
            assert!(close(got, jpdf.correlation(&fixed), 1e-6), "N={n} {fixed:?}");
        }
    }
    let k = FiniteNKernel::<f64>::new(5).unwrap();
    let got = k.marginalization_check(2, &[0.0, 0.5]).unwrap();
    let r2 = k.correlation_fn(&CorrelationRequest::new(vec![0.0, 0.5]).unwrap()).unwrap();
    assert!(close(got, r2, 1e-6));
}

/// `int det K(x_i, x_j)_{(n+1)x(n+1)} dx_{n+1}` with an independent rule.
fn integrate_out(k: &FiniteNKernel<f64>, fixed: &[f64]) -> f64 {
    let m = fixed.len() + 1;
    let cut = 2.0 + 10.0 / (k.size() as f64).sqrt();
    common::integrate(
        |t| {
            let mut pts = fixed.to_vec();
            pts.push(t);
            det(&k.kernel_matrix(&pts).unwrap(), m)
        },
        -cut,
        cut,
        400,
    )
}

#[test]
fn integrating_out_lemma() {
    let k5 = FiniteNKernel::<f64>::new(5).unwrap();
    let fixed = [0.2, -0.6];
    let lhs = integrate_out(&k5, &fixed);
    let rhs = 3.0 * det(&k5.kernel_matrix(&fixed).unwrap(), 2);
    assert!(close(lhs, rhs, 1e-6), "{lhs} vs {rhs}");
    // At N = 2, 3 compare the reduced determinant with the JPDF marginal.
    for n in [2usize, 3] {
        let jpdf = Jpdf::new(n);
        let k = FiniteNKernel::<f64>::new(n).unwrap();
        let fixed = [0.4];
        let lhs = integrate_out(&k, &fixed) / (n - 1) as f64;
        assert!(close(lhs, jpdf.correlation(&fixed), 1e-6));
    }
    let jpdf = Jpdf::new(3);
    let k = FiniteNKernel::<f64>::new(3).unwrap();
    let fixed = [0.4, -0.3];
    assert!(close(integrate_out(&k, &fixed), jpdf.correlation(&fixed), 1e-6));
}

/// Inclusion-exclusion series `sum_j (-1)^j / j! int_{B^j} R_j` over `B = (-a, a)`.
fn hole_series(k: &FiniteNKernel<f64>, a: f64) -> f64 {
    let n = k.size();
    let (xs, ws) = common::panel_rule(-a, a, 20);
    let mut total = 1.0;
    let mut fact = 1.0;
    for j in 1..=n {
        fact *= j as f64;
        let mut idx = vec![0usize; j];
        let mut acc = 0.0;
        'outer: loop {
            let pts: Vec<f64> = idx.iter().map(|&i| xs[i]).collect();
            let w: f64 = idx.iter().map(|&i| ws[i]).product();
            acc += w * det(&k.kernel_matrix(&pts).unwrap(), j);
            let mut d = 0;
            loop {
                if d == j {
                    break 'outer;
                }
                idx[d] += 1;
                if idx[d] < xs.len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
        total += if j % 2 == 1 { -acc } else { acc } / fact;
    }
    total
}

#[test]
fn hole_probability_series_and_fredholm_match_jpdf() {
    for n in [2usize, 3] {
        let jpdf = Jpdf::new(n);
        let k = FiniteNKernel::<f64>::new(n).unwrap();
        for len in [0.4, 1.0] {
            let direct = jpdf.hole(len / 2.0);
            let series = hole_series(&k, len / 2.0);
            let fred = hole_probability(HoleKernel::FiniteN(&k), len).unwrap();
            assert!((series - direct).abs() < 1e-6, "N={n} L={len}: series {series} vs {direct}");
            assert!((fred - direct).abs() < 1e-6, "N={n} L={len}: fredholm {fred} vs {direct}");
        }
    }
}

#[test]
fn density_correlator_decomposition() {
    let jpdf = Jpdf::with_breaks(2, &[-1.0, 1.0]);
    let k = FiniteNKernel::<f64>::new(2).unwrap();
    let (xs, ws) = common::panel_rule(-1.0, 1.0, 40);
    let r1: f64 = xs.iter().zip(&ws).map(|(&x, &w)| w * k.mean_density(x, false).unwrap()).sum();
    let mut r2 = 0.0;
    for (&x, &wx) in xs.iter().zip(&ws) {
        for (&y, &wy) in xs.iter().zip(&ws) {
            let m = k.kernel_matrix(&[x, y]).unwrap();
            r2 += wx * wy * det(&m, 2);
        }
    }
    let want = jpdf.count_second_moment(-1.0, 1.0);
    assert!((r1 + r2 - want).abs() < 1e-6, "{} vs {want}", r1 + r2);
}

#[test]
fn reproducing_property_and_trace() {
    let k = FiniteNKernel::<f64>::new(7).unwrap();
    let (ys, ws) = common::panel_rule(-4.0, 4.0, 40);
    for (x, z) in [(0.1, -0.5), (1.3, 0.7)] {
        let s: f64 = ys.iter().zip(&ws).map(|(&y, &w)| w * k.eval(x, y).unwrap() * k.eval(y, z).unwrap()).sum();
        assert!((s - k.eval(x, z).unwrap()).abs() < 1e-6);
    }
    let tr: f64 = ys.iter().zip(&ws).map(|(&y, &w)| w * k.mean_density(y, false).unwrap()).sum();
    assert!((tr - 7.0).abs() < 1e-6);
}

#[test]
fn cluster_function_identity() {
    let k = FiniteNKernel::<f64>::new(10).unwrap();
    let (x, y) = (0.37, -0.81);
    let r1x = k.mean_density(x, false).unwrap();
    let r1y = k.mean_density(y, false).unwrap();
    let r2 = k.correlation_fn(&CorrelationRequest::new(vec![x, y]).unwrap()).unwrap();
    assert!((k.cluster_y2(x, y).unwrap() - (r1x * r1y - r2)).abs() < 1e-10);
    assert!((k.cluster_y2(x, x).unwrap() - r1x * r1x).abs() < 1e-12);
}
