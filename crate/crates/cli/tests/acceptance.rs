//! Acceptance criteria, one printed PASS/FAIL line each. Exits non-zero if
//! any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRunner};
use thermoq::analysis::{
    appendix_d_factor, osc_overlap, osc_overlap_expanded, residual_closed,
    residual_quadrature_alpha, AlphaMode, FigureId, FigureParams, OverlapConvention,
    OverlapDomain,
};
use thermoq::*;
use thermoq_cli::commands::cmd_figure;
use thermoq_cli::output::{Format, Table};

type Outcome = std::result::Result<String, String>;

fn tp(t: f64) -> ThermalPoint {
    ThermalPoint::hartree(t).unwrap()
}

fn box_t_star(l: f64) -> f64 {
    let guess = 14.137 / (l * l);
    zero_crossing(
        &SystemSpec::particle_in_box(l).unwrap(),
        Bracket::new(0.5 * guess, 2.0 * guess).unwrap(),
    )
    .unwrap()
}

fn osc_t_star(w: f64) -> f64 {
    zero_crossing(
        &SystemSpec::oscillator(w).unwrap(),
        Bracket::new(0.5 * w, 2.0 * w).unwrap(),
    )
    .unwrap()
}

fn relative_spread(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::MIN, f64::max);
    let min = v.iter().copied().fold(f64::MAX, f64::min);
    (max - min) / min.abs()
}

fn judge(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn box_zero_crossing() -> Outcome {
    let start = Instant::now();
    let t = box_t_star(3.0);
    let secs = start.elapsed().as_secs_f64();
    judge(
        (t - 1.57).abs() <= 0.02 && secs < 1.0,
        format!("T* = {t:.10} (target 1.57 ± 0.02) in {secs:.3} s"),
    )
}

fn scaling_laws() -> Outcome {
    let box_products: Vec<f64> = (1..=5)
        .map(|l| {
            let l = f64::from(l);
            box_t_star(l) * l * l
        })
        .collect();
    let osc_ratios: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&w| osc_t_star(w) / w)
        .collect();
    let (sb, so) = (relative_spread(&box_products), relative_spread(&osc_ratios));
    judge(
        sb <= 1e-6 && so <= 1e-6,
        format!(
            "T*·L² = {:.9} (spread {sb:.2e}), T*/ω = {:.9} (spread {so:.2e})",
            box_products[0], osc_ratios[0]
        ),
    )
}

fn free_zero() -> Outcome {
    let ep = ep_free(&tp(1.0 / (2.0 * PI)), 1.0).unwrap().ep;
    judge(ep.abs() <= 1e-10, format!("|E_p(1/2π)| = {:.3e}", ep.abs()))
}

fn boundary_behavior() -> Outcome {
    let l = 3.0;
    let spec = SystemSpec::particle_in_box(l).unwrap();
    let bound = 1e-2 * (2.0 / l).sqrt();
    let edge = |n: u32, t: f64| box_psi(&BoxWave::new(&spec, n, &tp(t)).unwrap(), l).unwrap();
    let (p1, p2, hot) = (edge(1, 1.57), edge(2, 1.57), edge(1, 2.0));
    judge(
        p1.abs() <= bound && p2.abs() <= bound && (hot.abs() - 0.632).abs() <= 0.005,
        format!(
            "Ψ_1(L,1.57) = {p1:.3e}, Ψ_2(L,1.57) = {p2:.3e} (bound {bound:.3e}); |Ψ_1(L,2.0)| = {:.6}",
            hot.abs()
        ),
    )
}

fn residual_equivalence() -> Outcome {
    let s = QuadratureSettings::default();
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    for n in 1..=4 {
        for alpha in [0.01, 0.05, 0.1, 0.2, 0.5, 1.0] {
            let closed = residual_closed(n, alpha).unwrap();
            let quad = residual_quadrature_alpha(3.0, n, alpha, OverlapDomain::Symmetric, &s).unwrap();
            let gap = (closed - quad).abs();
            worst = worst.max(gap);
            if gap > 1e-8 {
                failing.push(format!("n={n},α={alpha}"));
            }
        }
    }
    let limit = (1..=4)
        .map(|n| residual_closed(n, 1e-6).unwrap().abs())
        .fold(0.0f64, f64::max);
    let curve = thermoq::analysis::figure_curves(
        FigureId::Fig3,
        &FigureParams {
            modes: Some(vec![1]),
            ..Default::default()
        },
    )
    .unwrap();
    let fig3 = &curve[0];
    let (peak_i, peak) = fig3
        .column("residual")
        .unwrap()
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
    let peak_alpha = fig3.grid()[peak_i];
    let curve_ok = (peak - 0.217233628).abs() <= 1e-3 && (peak_alpha - 0.4303).abs() <= 0.02;
    judge(
        failing.is_empty() && limit <= 1e-5 && curve_ok,
        format!(
            "max |closed − symmetric quadrature| = {worst:.3e} (limit 1e-8), failing at [{}]; \
             max |residual(α=1e-6)| = {limit:.1e}; fig-3 n=1 peak {peak:.6} at α = {peak_alpha:.3}",
            failing.join(" ")
        ),
    )
}

fn oscillator_normalization() -> Outcome {
    let s = QuadratureSettings::default();
    let spec = SystemSpec::oscillator(1.0).unwrap();
    let conv = OverlapConvention::new(AlphaMode::PerMode, OverlapDomain::FullLine);
    let mut norm_gap = 0.0f64;
    for t in [1.0, 1.1] {
        for n in 0..=5 {
            let v = osc_overlap(&spec, n, n, &tp(t), conv, &s).unwrap();
            norm_gap = norm_gap.max((v - 1.0).abs());
        }
    }
    let mut factor_gap = 0.0f64;
    let mut expanded_ok = true;
    for alpha in [0.0, 0.01, 0.05, 0.1, 0.15, 0.2] {
        for n in 0..=5 {
            let f = appendix_d_factor(n, n, alpha);
            factor_gap = factor_gap.max((f - (1.0 - 0.75 * alpha * alpha - alpha.powi(3) / 4.0)).abs());
            let q = osc_overlap_expanded(n, n, alpha, 1.0, &s).unwrap();
            expanded_ok &= (q - f).abs() <= alpha * alpha + 1e-9;
        }
    }
    judge(
        norm_gap <= 1e-8 && factor_gap <= 1e-12 && expanded_ok,
        format!(
            "max |∫|Ψ_n|² − 1| = {norm_gap:.3e}; max |factor − (1 − ¾α² − α³/4)| = {factor_gap:.1e}; \
             expanded quadrature within α²: {expanded_ok}"
        ),
    )
}

fn iteration_algebra() -> Outcome {
    let levels = make_levels(&SystemSpec::particle_in_box(3.0).unwrap()).unwrap();
    let mut runner = TestRunner::new(Config::default());
    let strategy = (-20.0f64..20.0, 0.1f64..5.0);
    let mut shift_gap = 0.0f64;
    for _ in 0..200 {
        let (c, t) = strategy.new_tree(&mut runner).unwrap().current();
        let base = ep_discrete(&levels, &tp(t)).unwrap().ep;
        let shifted = ep_discrete(&levels.shifted(c), &tp(t)).unwrap().ep;
        shift_gap = shift_gap.max((shifted - (base - c)).abs());
    }
    let mut alternation = 0.0f64;
    let mut converged_ok = true;
    for t in [0.5, 1.57, 2.0, 4.0] {
        let c = ep_discrete(&levels, &tp(t)).unwrap().ep;
        for tol in [1e-6, 1e-3, 0.1, 1.0] {
            for i_max in 1..=6 {
                let trace = self_consistent_iterate(&levels, &tp(t), i_max, tol).unwrap();
                for (i, v) in trace.corrections.iter().enumerate() {
                    let want = if i % 2 == 0 { c } else { 0.0 };
                    alternation = alternation.max((v - want).abs());
                }
                converged_ok &= trace.converged == (c.abs() <= tol);
            }
        }
    }
    judge(
        shift_gap <= 1e-12 && alternation <= 1e-12 && converged_ok,
        format!(
            "shift covariance gap {shift_gap:.1e}; deviation from c,0,c,0… {alternation:.1e}; \
             converged ⇔ |E_p| ≤ tol: {converged_ok}"
        ),
    )
}

fn low_temperature_limits() -> Outcome {
    let gap = |spec: SystemSpec| {
        let levels = make_levels(&spec).unwrap();
        (ep_discrete(&levels, &tp(1e-4)).unwrap().ep + levels.min()).abs()
    };
    let gb = gap(SystemSpec::particle_in_box(3.0).unwrap());
    let go = gap(SystemSpec::oscillator(1.0).unwrap());
    let free = ep_free(&tp(1e-6), 1.0).unwrap().ep.abs();
    let spec = SystemSpec::free(1.0).unwrap();
    let kgap = (free_k(1.0, &tp(0.01), &spec).unwrap() - free_k_approx(1.0, &tp(0.01), &spec).unwrap()).abs();
    judge(
        gb <= 1e-3 && go <= 1e-3 && free <= 1e-5 && kgap <= 1e-4,
        format!(
            "box |E_p + E_min| = {gb:.1e}, oscillator {go:.1e}; |E_p,free(1e-6)| = {free:.2e}; \
             |k(T) − k_approx| = {kgap:.3e}"
        ),
    )
}

fn read_csv(path: &Path) -> Table {
    Table::from_csv("csv", &std::fs::read_to_string(path).unwrap()).unwrap()
}

fn figure_emission() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut files = 0;
    for fig in FigureId::ALL {
        let params = FigureParams {
            omega: (fig == FigureId::Fig7).then_some(0.1),
            ..Default::default()
        };
        match cmd_figure(fig, &params, dir.path(), Format::Csv) {
            Ok(paths) => files += paths.len(),
            Err(e) => return Err(format!("figure {fig}: {e}")),
        }
    }

    let l3 = read_csv(&dir.path().join("fig2b_L3.csv"));
    let (ts, ep) = (l3.column("T").unwrap(), l3.column("ep").unwrap());
    let brackets_157 = ts
        .windows(2)
        .zip(ep.windows(2))
        .any(|(t, e)| e[0].signum() != e[1].signum() && t[0] <= 1.57 && 1.57 <= t[1]);

    let fig6_zeros: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|w| {
            let text = std::fs::read_to_string(dir.path().join(format!("fig6_omega{w}.csv"))).unwrap();
            let t = Table::from_csv("fig6", &text).unwrap();
            let (ts, ep) = (t.column("T").unwrap(), t.column("ep").unwrap());
            let i = ep.windows(2).position(|e| e[0].signum() != e[1].signum()).unwrap();
            ts[i]
        })
        .collect();
    let fig6_ok = fig6_zeros.windows(2).all(|w| w[1] > w[0]);

    let mut modulus_gap = 0.0f64;
    for k in [1.0, 2.0] {
        for t in [0.0, 0.5] {
            let re = read_csv(&dir.path().join(format!("fig5a_k{k}_T{t}.csv")));
            let im = read_csv(&dir.path().join(format!("fig5b_k{k}_T{t}.csv")));
            for (a, b) in re.column("re").unwrap().iter().zip(im.column("im").unwrap()) {
                modulus_gap = modulus_gap.max((a * a + b * b - 1.0).abs());
            }
        }
    }
    judge(
        brackets_157 && fig6_ok && modulus_gap <= 1e-12,
        format!(
            "{files} files; fig-2b L=3 sign change brackets 1.57: {brackets_157}; \
             fig-6 crossings increasing in ω: {fig6_ok}; max |Re² + Im² − 1| = {modulus_gap:.1e}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("box zero crossing", box_zero_crossing),
        ("scaling laws", scaling_laws),
        ("free-particle zero", free_zero),
        ("boundary behavior", boundary_behavior),
        ("residual closed form vs quadrature", residual_equivalence),
        ("oscillator normalization", oscillator_normalization),
        ("iteration algebra", iteration_algebra),
        ("low-temperature limits", low_temperature_limits),
        ("figure emission", figure_emission),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
