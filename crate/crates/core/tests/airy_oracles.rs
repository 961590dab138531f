mod common;

use guespec::airy::{airy_ai, airy_kernel, edge_density};

#[test]
fn matches_defining_integral() {
    for x in [-8.0, -5.0, -2.5, -1.0, 0.0, 0.7, 2.0, 4.4, 4.6, 6.0] {
        let v = airy_ai::<f64>(x).unwrap();
        let (ai, aip) = common::airy_integral(x);
        assert!((v.ai - ai).abs() < 1e-10, "Ai({x}): {} vs {ai}", v.ai);
        assert!((v.ai_prime - aip).abs() < 1e-10, "Ai'({x}): {} vs {aip}", v.ai_prime);
    }
}

#[test]
fn seed_values_from_integral() {
    let (ai, aip) = common::airy_integral(0.0);
    assert!((ai - 0.355_028_053_9).abs() < 1e-10);
    assert!((aip + 0.258_819_403_8).abs() < 1e-10);
}

#[test]
fn kernel_is_symmetric_and_nonnegative_on_diagonal() {
    for (a, b) in [(-3.1, 0.4), (1.2, -0.7), (2.5, 2.9)] {
        let k1 = airy_kernel::<f64>(a, b).unwrap();
        let k2 = airy_kernel::<f64>(b, a).unwrap();
        assert!((k1 - k2).abs() < 1e-14);
    }
    let mut xi = -10.0;
    while xi <= 10.0 {
        assert!(airy_kernel::<f64>(xi, xi).unwrap() >= 0.0);
        assert_eq!(airy_kernel::<f64>(xi, xi).unwrap(), edge_density(xi).unwrap());
        xi += 0.25;
    }
}

#[test]
fn edge_density_from_integral_oracle() {
    for xi in [-4.0, -1.0, 0.0, 1.5] {
        let (ai, aip) = common::airy_integral(xi);
        let want = aip * aip - xi * ai * ai;
        assert!((edge_density::<f64>(xi).unwrap() - want).abs() < 1e-10);
    }
}
