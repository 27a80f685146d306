//! Adaptive Simpson quadrature.
//!
//! The interval is first cut into a fixed number of panels so that narrow
//! features are not missed by the very first Simpson estimate, then each
//! panel is bisected until the local Richardson error falls under its share
//! of the tolerance. Infinite limits are truncated at
//! `infinite_cutoff × length_scale`; all integrands in this crate decay as
//! Gaussians or are compactly supported.

use crate::error::{domain, Error, Result};

const INITIAL_PANELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Truncation point of infinite limits, in multiples of the length scale.
    pub infinite_cutoff: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 50,
            infinite_cutoff: 12.0,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(domain("quadrature tolerances must be positive"));
        }
        if self.max_depth == 0 {
            return Err(domain("max_depth must be at least 1"));
        }
        if !(self.infinite_cutoff.is_finite() && self.infinite_cutoff > 0.0) {
            return Err(domain("infinite_cutoff must be finite and positive"));
        }
        Ok(())
    }
}

struct Accumulator {
    sum: f64,
    err: f64,
    exhausted: bool,
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(domain(format!("integrand is not finite at x = {x}")))
    }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    acc: &mut Accumulator,
) -> Result<()> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;

    // lm == a or rm == b: the interval can no longer be split in f64
    let unsplittable = lm <= a || rm >= b;
    if delta.abs() <= 15.0 * tol || unsplittable {
        acc.sum += left + right + delta / 15.0;
        acc.err += delta.abs() / 15.0;
        return Ok(());
    }
    if depth == 0 {
        acc.sum += left + right + delta / 15.0;
        acc.err += delta.abs() / 15.0;
        acc.exhausted = true;
        return Ok(());
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, acc)?;
    refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, acc)
}

/// ∫ₐᵇ f(x) dx. Infinite limits are truncated at `±infinite_cutoff`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    integrate_scaled(f, a, b, 1.0, settings)
}

/// Like [`integrate`], truncating infinite limits at
/// `±infinite_cutoff × length_scale`.
pub fn integrate_scaled<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    length_scale: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    if !(length_scale.is_finite() && length_scale > 0.0) {
        return Err(domain("length scale must be finite and positive"));
    }
    let cut = settings.infinite_cutoff * length_scale;
    let a = if a == f64::NEG_INFINITY { -cut } else { a };
    let b = if b == f64::INFINITY { cut } else { b };
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(domain(format!("invalid integration interval [{a}, {b}]")));
    }

    let h = (b - a) / INITIAL_PANELS as f64;
    let nodes: Vec<f64> = (0..=2 * INITIAL_PANELS)
        .map(|i| if i == 2 * INITIAL_PANELS { b } else { a + 0.5 * h * i as f64 })
        .collect();
    let values = nodes.iter().map(|&x| eval(&f, x)).collect::<Result<Vec<_>>>()?;

    let panel = |i: usize| {
        let (x0, x2) = (nodes[2 * i], nodes[2 * i + 2]);
        (x2 - x0) / 6.0 * (values[2 * i] + 4.0 * values[2 * i + 1] + values[2 * i + 2])
    };
    let coarse: f64 = (0..INITIAL_PANELS).map(panel).sum();
    let tol = settings.abs_tol.max(settings.rel_tol * coarse.abs());
    let panel_tol = tol / INITIAL_PANELS as f64;

    let mut acc = Accumulator {
        sum: 0.0,
        err: 0.0,
        exhausted: false,
    };
    for i in 0..INITIAL_PANELS {
        refine(
            &f,
            nodes[2 * i],
            nodes[2 * i + 2],
            values[2 * i],
            values[2 * i + 1],
            values[2 * i + 2],
            panel(i),
            panel_tol,
            settings.max_depth,
            &mut acc,
        )?;
    }
    if acc.exhausted {
        return Err(Error::Quadrature {
            estimate: acc.sum,
            error_bound: acc.err,
        });
    }
    Ok(acc.sum)
}

/// ∫_{−∞}^{∞} f(x) dx for an integrand decaying on `length_scale`.
pub fn integrate_line<F: Fn(f64) -> f64>(
    f: F,
    length_scale: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    integrate_scaled(f, f64::NEG_INFINITY, f64::INFINITY, length_scale, settings)
}
