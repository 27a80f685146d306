use std::f64::consts::PI;

use proptest::prelude::*;
use thermoq::analysis::{osc_overlap, residual_closed, AlphaMode, OverlapConvention, OverlapDomain};
use thermoq::numerics::integrate;
use thermoq::*;

fn tp(t: f64) -> ThermalPoint {
    ThermalPoint::hartree(t).unwrap()
}

proptest! {
    #[test]
    fn levels_are_strictly_increasing(l in 0.2f64..10.0, omega in 0.1f64..10.0, n in 1u32..30) {
        for spec in [
            SystemSpec::particle_in_box(l).unwrap().with_n_states(n).unwrap(),
            SystemSpec::oscillator(omega).unwrap().with_n_states(n).unwrap(),
        ] {
            let levels = make_levels(&spec).unwrap();
            prop_assert_eq!(levels.len(), n as usize);
            prop_assert!(levels.energies().windows(2).all(|w| w[1] > w[0]));
            let first = spec.first_level().unwrap();
            for (i, e) in levels.energies().iter().enumerate() {
                prop_assert_eq!(*e, level_energy(&spec, first + i as u32).unwrap());
            }
        }
    }

    #[test]
    fn box_levels_scale_as_inverse_square(l in 0.1f64..20.0, n in 1u32..10) {
        let scaled = level_energy(&SystemSpec::particle_in_box(l).unwrap(), n).unwrap() * l * l;
        let reference = level_energy(&SystemSpec::particle_in_box(1.0).unwrap(), n).unwrap();
        prop_assert!((scaled - reference).abs() <= 1e-12 * reference);
    }

    #[test]
    fn quadrature_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, w in 0.5f64..4.0) {
        let s = QuadratureSettings::default();
        let f = |x: f64| (w * x).sin() * (-x * x).exp();
        let g = |x: f64| x * x * (-0.5 * x * x).exp();
        let lhs = integrate(|x| a * f(x) + b * g(x), -6.0, 6.0, &s).unwrap();
        let rhs = a * integrate(f, -6.0, 6.0, &s).unwrap() + b * integrate(g, -6.0, 6.0, &s).unwrap();
        prop_assert!((lhs - rhs).abs() <= 10.0 * s.abs_tol, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn roots_stay_in_bracket(c in -0.9f64..0.9, lo in -2.0f64..-1.0, hi in 1.0f64..2.0) {
        let f = |x: f64| (x - c) * (1.0 + x * x);
        let tol = 1e-12;
        let r = find_root(f, Bracket::new(lo, hi).unwrap(), tol).unwrap();
        prop_assert!(lo <= r && r <= hi);
        // |f'| ≤ 1 + 3·max(|lo|,|hi|)² on the bracket
        prop_assert!(f(r).abs() <= 13.0 * tol * 2.0);
    }

    #[test]
    fn log_sum_exp_shift(values in prop::collection::vec(-50.0f64..50.0, 1..20), c in -1e3f64..1e3) {
        let shifted: Vec<f64> = values.iter().map(|v| v + c).collect();
        let lhs = log_sum_exp(&shifted).unwrap();
        let rhs = log_sum_exp(&values).unwrap() + c;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1.0));
    }

    #[test]
    fn ep_shift_covariance(t in 0.05f64..5.0, c in -10.0f64..10.0, l in 1.0f64..5.0) {
        let levels = make_levels(&SystemSpec::particle_in_box(l).unwrap()).unwrap();
        let base = ep_discrete(&levels, &tp(t)).unwrap().ep;
        let shifted = ep_discrete(&levels.shifted(c), &tp(t)).unwrap().ep;
        prop_assert!((shifted - (base - c)).abs() <= 1e-12);
    }

    #[test]
    fn iteration_alternates_and_converges_iff_small(t in 0.2f64..4.0, tol in 1e-4f64..0.5, i_max in 1usize..8) {
        let levels = make_levels(&SystemSpec::oscillator(1.0).unwrap()).unwrap();
        let c = ep_discrete(&levels, &tp(t)).unwrap().ep;
        let trace = self_consistent_iterate(&levels, &tp(t), i_max, tol).unwrap();
        prop_assert_eq!(trace.corrections.len(), i_max);
        for (i, v) in trace.corrections.iter().enumerate() {
            let want = if i % 2 == 0 { c } else { 0.0 };
            prop_assert!((v - want).abs() <= 1e-12);
        }
        prop_assert_eq!(trace.converged, c.abs() <= tol);
    }

    #[test]
    fn free_wave_has_unit_modulus(k in 0.0f64..5.0, t in 0.0f64..2.0, x in -50.0f64..50.0) {
        let free = SystemSpec::free(1.0).unwrap();
        if let Ok(w) = FreeWave::new(&free, k, &tp(t), Direction::Left) {
            prop_assert!(w.k_t >= 0.0);
            prop_assert!((free_psi(&w, x).norm() - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn residual_vanishes_with_alpha(n in 1u32..20, a in 1e-12f64..1e-6) {
        prop_assert!(residual_closed(n, a).unwrap().abs() <= a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oscillator_modes_stay_normalised(n in 0u32..=5, t in 0.9f64..1.5) {
        let spec = SystemSpec::oscillator(1.0).unwrap();
        let conv = OverlapConvention::new(AlphaMode::PerMode, OverlapDomain::FullLine);
        let v = osc_overlap(&spec, n, n, &tp(t), conv, &QuadratureSettings::default()).unwrap();
        prop_assert!((v - 1.0).abs() <= 1e-8);
    }
}

/// Explicit physicists' Hermite polynomials up to degree 5.
fn hermite_explicit(n: u32, y: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * y,
        2 => 4.0 * y * y - 2.0,
        3 => 8.0 * y.powi(3) - 12.0 * y,
        4 => 16.0 * y.powi(4) - 48.0 * y * y + 12.0,
        5 => 32.0 * y.powi(5) - 160.0 * y.powi(3) + 120.0 * y,
        _ => unreachable!(),
    }
}

#[test]
fn hermite_matches_explicit_polynomials() {
    for n in 0..=5 {
        for i in 0..20 {
            let y = -3.0 + 6.0 * f64::from(i) / 19.0 + 0.0123;
            let want = hermite_explicit(n, y);
            let got = hermite(n, y);
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "H_{n}({y})");
        }
    }
}

#[test]
fn zero_crossing_scaling_and_ordering() {
    let box_t = |l: f64| {
        let guess = 14.137 / (l * l);
        zero_crossing(
            &SystemSpec::particle_in_box(l).unwrap(),
            Bracket::new(0.5 * guess, 2.0 * guess).unwrap(),
        )
        .unwrap()
    };
    let osc_t = |w: f64| {
        zero_crossing(
            &SystemSpec::oscillator(w).unwrap(),
            Bracket::new(0.5 * w, 2.0 * w).unwrap(),
        )
        .unwrap()
    };
    // mpmath root of T·ln Σ e^{−Ξn²/T}, L = 3
    assert!((box_t(3.0) - 1.5707963267915945).abs() < 1e-10);
    let c = box_t(1.0);
    for l in [2.0, 3.0, 4.0, 5.0] {
        assert!((box_t(l) * l * l - c).abs() <= 1e-6 * c);
    }
    let omegas = [0.5, 1.0, 2.0, 4.0, 8.0];
    let stars: Vec<f64> = omegas.iter().map(|&w| osc_t(w)).collect();
    assert!(stars.windows(2).all(|w| w[1] > w[0]));
    for (t, w) in stars.iter().zip(omegas) {
        assert!((t / w - 1.0391073378554586).abs() <= 1e-9);
    }
}

#[test]
fn wavefunctions_reduce_at_zero_crossing() {
    let b = SystemSpec::particle_in_box(3.0).unwrap();
    let tb = zero_crossing(&b, Bracket::new(0.5, 3.0).unwrap()).unwrap();
    for n in 1..=3 {
        let w = BoxWave::new(&b, n, &tp(tb)).unwrap();
        for i in 0..=30 {
            let x = 3.0 * f64::from(i) / 30.0;
            let want = (2.0f64 / 3.0).sqrt() * (f64::from(n) * PI * x / 3.0).sin();
            assert!((box_psi(&w, x).unwrap() - want).abs() <= 1e-9);
        }
    }

    let o = SystemSpec::oscillator(1.0).unwrap();
    let to = zero_crossing(&o, Bracket::new(0.5, 2.0).unwrap()).unwrap();
    for n in 0..=5 {
        let w = OscWave::new(&o, n, &tp(to)).unwrap();
        let g = OscWave::ground(&o, n).unwrap();
        for i in 0..=40 {
            let x = -6.0 + 12.0 * f64::from(i) / 40.0;
            assert!((osc_psi(&w, x) - osc_psi(&g, x)).abs() <= 1e-9);
        }
    }
}

#[test]
fn box_boundary_value_follows_alpha() {
    let b = SystemSpec::particle_in_box(3.0).unwrap();
    for n in 1..=3 {
        let t = tp(2.0);
        let w = BoxWave::new(&b, n, &t).unwrap();
        // exact k_eff·L = nπ·√(1 + 2α)
        let a = alpha(&b, n, &t).unwrap();
        let want = (2.0f64 / 3.0).sqrt() * (f64::from(n) * PI * (1.0 + 2.0 * a).sqrt()).sin();
        assert!((box_psi(&w, 3.0).unwrap() - want).abs() < 1e-12);
        assert!(box_psi(&w, 3.0).unwrap().abs() > 1e-3);
        assert_eq!(box_psi(&w, 0.0).unwrap(), 0.0);
    }
}

#[test]
fn free_k_expansion_gap_shrinks() {
    let free = SystemSpec::free(1.0).unwrap();
    let gap = |t: f64| (free_k(1.0, &tp(t), &free).unwrap() - free_k_approx(1.0, &tp(t), &free).unwrap()).abs();
    assert!(gap(0.01) < 1e-4);
    assert!(gap(0.01) < gap(0.1) && gap(0.1) < gap(0.5));
}

#[test]
fn full_verification_suite_passes() {
    let out = thermoq::analysis::run_verification(&Default::default()).unwrap();
    assert_eq!(out.len(), thermoq::analysis::CHECK_NAMES.len());
    for c in &out {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
}

#[test]
fn curve_tables_roundtrip_through_json() {
    use thermoq::analysis::{figure_curves, CurveTable, FigureId, FigureParams};
    let tables = figure_curves(FigureId::Fig4, &FigureParams::default()).unwrap();
    let json = serde_json::to_string(&tables).unwrap();
    let back: Vec<CurveTable> = serde_json::from_str(&json).unwrap();
    for (a, b) in tables.iter().zip(&back) {
        for (ca, cb) in a.columns.iter().zip(&b.columns) {
            assert!(ca.values.iter().zip(&cb.values).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }
    assert_eq!(tables, back);
}
