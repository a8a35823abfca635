use hermion::family::field_family;
use hermion::hermite_basis::*;
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

/// Physicists' Hermite polynomial H_k with exact integer coefficients,
/// built from H_{k+1} = 2x H_k − 2k H_{k−1}.
fn hermite_poly_coeffs(k: usize) -> Vec<BigInt> {
    let mut prev: Vec<BigInt> = vec![BigInt::from(1)];
    if k == 0 {
        return prev;
    }
    let mut cur: Vec<BigInt> = vec![BigInt::from(0), BigInt::from(2)];
    for j in 1..k {
        let mut next = vec![BigInt::from(0); j + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c * (2 * j as i64);
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `h_k(x)` from `(√π 2^k k!)^{-1/2} H_k(x) e^{-x²/2}` with `H_k` evaluated
/// exactly at the dyadic point `x = a / 2^s`.
fn rodrigues(k: usize, a: i64, s: u32) -> f64 {
    let coeffs = hermite_poly_coeffs(k);
    let mut acc = BigInt::from(0);
    for (j, c) in coeffs.iter().enumerate() {
        acc += c * BigInt::from(a).pow(j as u32) * BigInt::from(2).pow(s * (k - j) as u32);
    }
    let value: f64 = acc.to_string().parse::<f64>().unwrap();
    let x = a as f64 / 2f64.powi(s as i32);
    let fact: f64 = (1..=k).map(|v| v as f64).product();
    let ln_norm = 0.5 * (0.5 * std::f64::consts::PI.ln() + k as f64 * 2f64.ln() + fact.ln());
    let ln_mag = value.abs().ln() - (s * k as u32) as f64 * 2f64.ln() - 0.5 * x * x - ln_norm;
    value.signum() * ln_mag.exp()
}

#[test]
fn recurrence_matches_rodrigues_formula() {
    // x = a / 4 for a spread of points in [-10, 10]
    let points: Vec<i64> = (-40..=40).step_by(3).collect();
    let mut checked = 0;
    for k in 0..=50 {
        for &a in &points {
            let x = a as f64 / 4.0;
            let exact = rodrigues(k, a, 2);
            let rec = hermite_1d(k, x);
            // away from zeros: h_k and h_{k-1} never vanish together
            let envelope = (rec * rec + if k > 0 { hermite_1d(k - 1, x).powi(2) } else { 0.0 }).sqrt();
            if exact.abs() < 1e-3 * envelope {
                continue;
            }
            checked += 1;
            assert!((rec - exact).abs() <= 1e-12 * exact.abs(), "k={k} x={x}: {rec} vs {exact}");
        }
    }
    assert!(checked > 1000);
}

#[test]
fn second_function_at_origin_from_exact_polynomial() {
    assert!((hermite_1d(2, 0.0) - rodrigues(2, 0, 0)).abs() < 1e-15);
}

#[test]
fn gram_matrix_is_identity() {
    for (dim, n) in [(1, 8), (1, 32), (2, 8), (2, 16)] {
        let rule = gauss_hermite_rule(2 * n).unwrap();
        let g = gram_matrix(dim, n, &rule).unwrap();
        let mut worst: f64 = 0.0;
        for r in 0..g.rows {
            for c in 0..g.cols {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g.get(r, c) - target).abs());
            }
        }
        assert!(worst <= 1e-8, "d={dim} N={n}: {worst}");
    }
}

#[test]
fn two_point_rule_from_moments() {
    // roots of H_2 = 4x² − 2, weights fixed by ∫e^{-x²} = √π and ∫x²e^{-x²} = √π/2
    let r = gauss_hermite_rule(2).unwrap();
    let root = 0.5f64.sqrt();
    let w = std::f64::consts::PI.sqrt() / 2.0;
    assert!((r.nodes[1] - root).abs() < 1e-15);
    assert!((r.weights[0] - w).abs() < 1e-15 && (r.weights[1] - w).abs() < 1e-15);
}

#[test]
fn random_eight_mode_round_trip() {
    let grid = gauss_hermite_grid(1, 16).unwrap();
    for f in field_family(1, 8, 5, 11) {
        let u = synthesize(&f, &grid).unwrap();
        let back = analyze(&u, 8).unwrap();
        let err = back.sub(&f).unwrap().l2_norm() / f.l2_norm();
        assert!(err < 1e-10, "{err}");
        assert!((u.l2_norm() - f.l2_norm()).abs() < 1e-10);
    }
}

#[test]
fn analyze_at_larger_cutoff_zero_pads() {
    let grid = gauss_hermite_grid(2, 12).unwrap();
    let f = field_family(2, 6, 1, 3).remove(0);
    let back = analyze(&synthesize(&f, &grid).unwrap(), 10).unwrap();
    assert!(back.max_abs_diff(&f.with_cutoff(10)).unwrap() < 1e-12);
}

#[test]
fn grid_rank_must_match_field() {
    let grid = gauss_hermite_grid(1, 6).unwrap();
    let f = HermiteField::zeros(2, 3);
    assert!(matches!(synthesize(&f, &grid), Err(hermion::Error::DimensionMismatch { .. })));
}

fn arb_field(dim: usize, max_cutoff: usize) -> impl Strategy<Value = HermiteField> {
    (1..=max_cutoff).prop_flat_map(move |n| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n.pow(dim as u32)).prop_map(move |v| {
            let coeffs = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            HermiteField::from_coeffs(dim, n, coeffs).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip_and_parseval_1d(f in arb_field(1, 20), extra in 1usize..8) {
        let grid = gauss_hermite_grid(1, f.cutoff() + extra).unwrap();
        let u = synthesize(&f, &grid).unwrap();
        let back = analyze(&u, f.cutoff()).unwrap();
        let scale = f.l2_norm().max(1e-300);
        prop_assert!(back.sub(&f).unwrap().l2_norm() <= 1e-10 * scale);
        prop_assert!((u.l2_norm() - f.l2_norm()).abs() <= 1e-10 * scale);
    }

    #[test]
    fn round_trip_and_parseval_2d(f in arb_field(2, 8)) {
        let grid = gauss_hermite_grid(2, f.cutoff() + 1).unwrap();
        let u = synthesize(&f, &grid).unwrap();
        let back = analyze(&u, f.cutoff()).unwrap();
        let scale = f.l2_norm().max(1e-300);
        prop_assert!(back.sub(&f).unwrap().l2_norm() <= 1e-10 * scale);
        prop_assert!((u.l2_norm() - f.l2_norm()).abs() <= 1e-10 * scale);
    }

    #[test]
    fn zero_field_norm(n in 1usize..10, d in 1usize..3) {
        prop_assert_eq!(HermiteField::zeros(d, n).l2_norm(), 0.0);
    }
}
