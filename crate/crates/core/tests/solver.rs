use hermion::family::smooth_family;
use hermion::hermite_basis::{lp_norm, HermiteField};
use hermion::nonlinearity::{KernelSpec, RealEntireSeries, SeriesTerm};
use hermion::solver::*;
use hermion::spectral_propagator::{evolve_linear, evolve_linear_signed, SignConvention};
use hermion::tf_analysis::{modulation_norm, TFLattice};
use hermion::Error;
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use std::f64::consts::PI;

fn hartree() -> NonlinearitySpec {
    NonlinearitySpec::Hartree { kernel: KernelSpec::Hartree { lambda: 1.0, gamma: 0.4 }, k: 1, box_grid: None }
}

fn cubic(sign: f64) -> NonlinearitySpec {
    NonlinearitySpec::Power { k: 1, sign }
}

fn quiet(horizon: f64, dt: f64, scheme: Scheme, spec: NonlinearitySpec) -> SolverConfig {
    let mut cfg = SolverConfig::new(horizon, dt, scheme, spec);
    cfg.monitors.p.clear();
    cfg
}

fn final_field(u0: &HermiteField, cfg: &SolverConfig) -> HermiteField {
    evolve_nonlinear(u0, cfg).unwrap().last().unwrap().field.clone()
}

fn distance(a: &HermiteField, b: &HermiteField) -> f64 {
    a.sub(b).unwrap().l2_norm()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn free_trace_follows_linear_flow_and_revives() {
    for dim in [1, 2] {
        let u0 = smooth_family(dim, 6, 1, 2.0, 3).remove(0);
        let trace = evolve_nonlinear(&u0, &quiet(PI, 0.05, Scheme::Strang, NonlinearitySpec::None)).unwrap();
        for s in trace.snapshots() {
            assert!(s.field.max_abs_diff(&evolve_linear(&u0, s.t)).unwrap() < 1e-12);
        }
        let sign = if dim % 2 == 0 { 1.0 } else { -1.0 };
        assert!(trace.last().unwrap().field.max_abs_diff(&u0.scale(real(sign))).unwrap() < 1e-12);
    }
}

#[test]
fn focusing_cubic_ground_state_keeps_unit_mass() {
    let u0 = HermiteField::basis(1, 16, &[0]).unwrap();
    let trace = evolve_nonlinear(&u0, &SolverConfig::new(2.0, 1e-3, Scheme::Strang, cubic(-1.0))).unwrap();
    assert!(trace.len() >= 11);
    for s in trace.snapshots() {
        assert!((s.monitors.l2_norm - 1.0).abs() <= 1e-10, "t = {}: {}", s.t, s.monitors.l2_norm);
        assert_eq!(s.monitors.mpp_norms.len(), 2);
    }
}

#[test]
fn long_strang_runs_conserve_mass() {
    let u0 = smooth_family(1, 16, 1, 3.0, 11).remove(0);
    for spec in [cubic(-1.0), hartree()] {
        let trace = evolve_nonlinear(&u0, &quiet(5.0, 1e-3, Scheme::Strang, spec)).unwrap();
        let drift = trace.snapshots().iter().map(|s| (s.monitors.l2_norm - 1.0).abs()).fold(0.0, f64::max);
        assert!(drift <= 1e-9, "drift {drift:.3e}");
    }
}

fn observed_order(u0: &HermiteField, scheme: Scheme, spec: &NonlinearitySpec) -> f64 {
    let run = |dt| final_field(u0, &quiet(0.5, dt, scheme, spec.clone()));
    let (a, b, c) = (run(4e-3), run(2e-3), run(1e-3));
    (distance(&a, &b) / distance(&b, &c)).log2()
}

#[test]
fn splitting_orders_on_richardson_triplet() {
    let u0 = smooth_family(1, 16, 1, 3.0, 11).remove(0);
    for spec in [cubic(-1.0), hartree()] {
        let strang = observed_order(&u0, Scheme::Strang, &spec);
        assert!((1.8..=2.2).contains(&strang), "Strang order {strang}");
        let lie = observed_order(&u0, Scheme::Lie, &spec);
        assert!((0.8..=1.2).contains(&lie), "Lie order {lie}");
    }
}

#[test]
fn first_picard_correction_is_cubic_in_amplitude() {
    let u0 = smooth_family(1, 8, 1, 3.0, 5).remove(0);
    let mut cfg = SolverConfig::new(0.2, 0.2, Scheme::Picard, cubic(1.0));
    cfg.picard_iters = 2;
    let first = |eps: f64| picard_solve(&u0.scale(real(eps)), &cfg).unwrap().differences[0];
    let ratio = first(1.0) / first(0.5);
    assert!((ratio / 8.0 - 1.0).abs() <= 0.05, "ratio {ratio}");
}

#[test]
fn picard_and_strang_agree_for_small_hartree_data() {
    for f in smooth_family(1, 8, 6, 3.0, 1) {
        let small = f.scale(real(0.5));
        let p = picard_solve(&small, &SolverConfig::new(0.1, 0.1, Scheme::Picard, hartree())).unwrap();
        assert!(p.converged);
        let s = final_field(&small, &quiet(0.1, 1e-3, Scheme::Strang, hartree()));
        assert!(distance(&p.field, &s) <= 1e-4);
    }
}

#[test]
fn windowed_picard_scheme_matches_strang() {
    let u0 = smooth_family(1, 8, 1, 3.0, 2).remove(0);
    let p = final_field(&u0, &quiet(0.4, 0.1, Scheme::Picard, cubic(-1.0)));
    let s = final_field(&u0, &quiet(0.4, 1e-3, Scheme::Strang, cubic(-1.0)));
    assert!(distance(&p, &s) <= 1e-5, "{}", distance(&p, &s));
}

#[test]
fn local_existence_time_gives_contraction_on_family() {
    let spec = KernelSpec::Hartree { lambda: 1.0, gamma: 0.4 };
    let family = smooth_family(1, 8, 20, 3.0, 1);
    let c = empirical_trilinear_constant(&spec, &family, 1.0, 1.0).unwrap();
    let lat = TFLattice::for_cutoff(1, 8, 0.25, 1.0).unwrap();
    let mut contracting = 0;
    for f in &family {
        let u0 = f.scale(real(0.5));
        let m = 2.0 * modulation_norm(&u0, 1.0, 1.0, &lat).unwrap();
        let t = local_existence_time(m, c, 1.0).unwrap();
        let out = picard_solve(&u0, &SolverConfig::new(t, t, Scheme::Picard, hartree())).unwrap();
        if out.max_ratio().is_some_and(|r| r <= 0.9) {
            contracting += 1;
        }
    }
    assert!(contracting >= 19, "{contracting}/20");
}

#[test]
fn oversized_horizon_is_reported_as_non_contraction() {
    let u0 = HermiteField::basis(1, 8, &[0]).unwrap().scale(real(3.0));
    let cfg = SolverConfig::new(3.0, 3.0, Scheme::Picard, cubic(-1.0));
    assert!(matches!(picard_solve(&u0, &cfg), Err(Error::NonContraction { .. })));
}

#[test]
fn weak_coupling_approaches_linear_flow_linearly() {
    let u0 = smooth_family(1, 12, 1, 3.0, 8).remove(0);
    let linear = evolve_linear(&u0, 1.0);
    let gap = |lambda: f64| {
        let cfg = quiet(1.0, 1e-2, Scheme::Strang, hartree()).scaled_coupling(lambda);
        distance(&final_field(&u0, &cfg), &linear)
    };
    let ratio = gap(1e-2) / gap(1e-3);
    assert!((ratio / 10.0 - 1.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn plus_convention_is_the_conjugate_flow_with_opposite_coupling() {
    // conj of (i∂ₜu = Hu − F(u)) is i∂ₜw = −Hw + F(w) for gauge F
    let u0 = smooth_family(1, 10, 1, 3.0, 6).remove(0);
    let mut plus = quiet(0.6, 1e-3, Scheme::Strang, cubic(1.0));
    plus.sign_convention = SignConvention::Plus;
    let a = final_field(&u0, &plus);
    let b = final_field(&u0.conj(), &quiet(0.6, 1e-3, Scheme::Strang, cubic(-1.0))).conj();
    assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
}

#[test]
fn growth_guard_stops_non_gauge_blow_up() {
    // F = i s² gives ∂ₜ Re u = (Re u)² at each node: finite-time blow-up
    let series = RealEntireSeries::new(vec![SeriesTerm { m: 2, n: 0, a: Complex64::new(0.0, 1.0) }]).unwrap();
    let u0 = HermiteField::basis(1, 8, &[0]).unwrap().scale(real(4.0));
    let cfg = quiet(5.0, 1e-3, Scheme::Strang, NonlinearitySpec::Series { series });
    let mut seen = Vec::new();
    let out = evolve_streaming(&u0, &cfg, |s| {
        seen.push(s.flags.clone());
        Ok(())
    });
    assert!(matches!(out, Err(Error::MonitorBreach { .. })));
    assert!(seen.last().unwrap().iter().any(|f| f == "breach"));
}

#[test]
fn tight_conservation_tolerance_aborts() {
    let u0 = smooth_family(1, 12, 1, 3.0, 4).remove(0).scale(real(2.0));
    let mut cfg = quiet(1.0, 1e-2, Scheme::Strang, cubic(-1.0));
    cfg.tolerances.conservation = 1e-18;
    assert!(matches!(evolve_nonlinear(&u0, &cfg), Err(Error::MonitorBreach { .. })));
}

#[test]
fn hartree_runs_are_bit_reproducible() {
    let u0 = smooth_family(1, 12, 1, 3.0, 4).remove(0);
    let cfg = SolverConfig::new(1.0, 1e-2, Scheme::Strang, hartree());
    let a = evolve_nonlinear(&u0, &cfg).unwrap();
    let b = evolve_nonlinear(&u0, &cfg).unwrap();
    assert_eq!(a, b);
    assert!(a.len() >= 10);
}

#[test]
fn hartree_pairs_satisfy_scaling_exactly() {
    for gamma in [Ratio::new(3, 10), Ratio::new(7, 10)] {
        for dim in 1..=3 {
            let (q, r) = hartree_pair(gamma, dim).unwrap();
            assert_eq!(q, Ratio::from_integer(8) / gamma);
            assert!(is_admissible(q, r, dim));
            assert_eq!(admissible_pair_exact(r, dim).unwrap(), Some(q));
        }
    }
    assert_eq!(hartree_pair(Ratio::new(1, 2), 1).unwrap(), (Ratio::from_integer(16), Ratio::new(8, 3)));
}

#[test]
fn spacetime_norm_of_constant_and_doubled_traces() {
    let phi = HermiteField::basis(1, 6, &[0]).unwrap();
    // U(t)Φ₀ = e^{-it}Φ₀ has constant modulus
    let trace = linear_trace(&phi, 1.0, 4, SignConvention::Minus).unwrap();
    let r = 3.0;
    let n = spacetime_norm(&trace, 5.0, r).unwrap();
    assert!((n - lp_norm(&phi, r).unwrap()).abs() < 1e-13);
    let doubled = linear_trace(&phi.scale(real(2.0)), 1.0, 4, SignConvention::Minus).unwrap();
    assert!((spacetime_norm(&doubled, 5.0, r).unwrap() - 2.0 * n).abs() < 1e-13);
    assert!(spacetime_norm(&EvolutionTrace::new(), 2.0, 2.0).is_err());
}

#[test]
fn strichartz_norm_of_ground_state_against_closed_form() {
    // ‖Φ₀‖_r^r = π^{-r/4} √(2π/r), constant in t; over [0, π]: π^{1/q} ‖Φ₀‖_r
    let (q, r) = (16.0, 8.0 / 3.0);
    let phi = HermiteField::basis(1, 8, &[0]).unwrap();
    let oracle = PI.powf(1.0 / q) * (PI.powf(-r / 4.0) * (2.0 * PI / r).sqrt()).powf(1.0 / r);
    let mut values = Vec::new();
    for sign in [SignConvention::Minus, SignConvention::Plus] {
        let trace = linear_trace(&phi, PI, 64, sign).unwrap();
        values.push(spacetime_norm(&trace, q, r).unwrap());
    }
    assert!((values[0] - oracle).abs() < 1e-6 * oracle, "{} vs {oracle}", values[0]);
    assert_eq!(values[0], values[1]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn existence_time_scales_inversely(m in 0.01f64..50.0, c in 0.01f64..50.0) {
        let t = local_existence_time(m, c, 1.0).unwrap();
        prop_assert!(((local_existence_time(2.0 * m, c, 1.0).unwrap() * 4.0) / t - 1.0).abs() < 1e-14);
        prop_assert!(((local_existence_time(m, 2.0 * c, 1.0).unwrap() * 2.0) / t - 1.0).abs() < 1e-14);
        prop_assert!(c * t * m * m <= 0.5 * (1.0 + 1e-14));
    }

    #[test]
    fn float_and_exact_pairs_agree(num in 2i64..60, den in 1i64..20, dim in 1usize..4) {
        let r = Ratio::new(num, den);
        let rf = num as f64 / den as f64;
        match (admissible_pair(rf, dim), admissible_pair_exact(r, dim)) {
            (Ok(q), Ok(Some(qe))) => prop_assert!((q - *qe.numer() as f64 / *qe.denom() as f64).abs() < 1e-9 * q),
            (Ok(q), Ok(None)) => prop_assert!(q.is_infinite()),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn linear_flow_is_time_reversible(seed in 0u64..1000, t in -10.0f64..10.0) {
        let f = smooth_family(2, 5, 1, 2.0, seed).remove(0);
        for sign in [SignConvention::Minus, SignConvention::Plus] {
            let back = evolve_linear_signed(&evolve_linear_signed(&f, t, sign), -t, sign);
            prop_assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
        }
    }

    #[test]
    fn thousand_strang_steps_conserve_mass(seed in 0u64..1000, amp in 0.1f64..2.0) {
        let u0 = smooth_family(1, 12, 1, 3.0, seed).remove(0).scale(real(amp));
        let out = final_field(&u0, &quiet(1.0, 1e-3, Scheme::Strang, cubic(-1.0)));
        prop_assert!((out.l2_norm() / amp - 1.0).abs() <= 1e-10);
    }
}
