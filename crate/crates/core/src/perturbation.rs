//! The weak-coupling correction E_p(T) = k_B·T·ln Tr e^{−βE(0)}, the
//! corrected spectrum, the self-consistency iteration and validity ranges.
//!
//! Every trace is evaluated through [`log_sum_exp`]; raw exponential sums
//! underflow long before the low-temperature limits become interesting.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::{make_levels, LevelSet, SystemKind, SystemSpec, ThermalPoint};
use crate::numerics::{find_root, linspace, log_sum_exp, Bracket};

/// Default smallness threshold for |E_p| (Hartree).
pub const DEFAULT_THRESHOLD: f64 = 0.1;

/// Default order of self-consistency.
pub const DEFAULT_I_MAX: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationResult {
    pub ep: f64,
    pub temperature: f64,
    pub within_validity: bool,
    pub threshold: f64,
}

impl PerturbationResult {
    pub fn new(ep: f64, temperature: f64, threshold: f64) -> Self {
        Self {
            ep,
            temperature,
            within_validity: ep.abs() <= threshold,
            threshold,
        }
    }

    /// Same value re-judged against another threshold.
    pub fn with_threshold(self, threshold: f64) -> Self {
        Self::new(self.ep, self.temperature, threshold)
    }
}

fn ln_trace(levels: &LevelSet, beta: f64) -> Result<f64> {
    let exponents: Vec<f64> = levels.energies().iter().map(|e| -beta * e).collect();
    log_sum_exp(&exponents)
}

/// Tr e^{−βE} over the truncated level set.
pub fn partition_trace(levels: &LevelSet, tp: &ThermalPoint) -> Result<f64> {
    let beta = tp.require_beta()?;
    Ok(ln_trace(levels, beta)?.exp())
}

/// E_p(T) for a discrete spectrum.
pub fn ep_discrete(levels: &LevelSet, tp: &ThermalPoint) -> Result<PerturbationResult> {
    let beta = tp.require_beta()?;
    let ep = tp.thermal_energy() * ln_trace(levels, beta)?;
    Ok(PerturbationResult::new(ep, tp.temperature(), DEFAULT_THRESHOLD))
}

/// E_p(T) = k_B·T·ln√(2π·m·k_B·T) for the free particle.
pub fn ep_free(tp: &ThermalPoint, mass: f64) -> Result<PerturbationResult> {
    tp.require_beta()?;
    if !(mass.is_finite() && mass > 0.0) {
        return Err(domain(format!("mass must be positive, got {mass}")));
    }
    let kt = tp.thermal_energy();
    let ep = 0.5 * kt * (2.0 * PI * mass * kt).ln();
    Ok(PerturbationResult::new(ep, tp.temperature(), DEFAULT_THRESHOLD))
}

/// E_p(T) for any system: the truncated trace for the box and oscillator,
/// the Gaussian momentum integral for the free particle.
pub fn ep_for(spec: &SystemSpec, tp: &ThermalPoint) -> Result<PerturbationResult> {
    match spec.kind() {
        SystemKind::Free { .. } => ep_free(tp, spec.mass()),
        _ => ep_discrete(&make_levels(spec)?, tp),
    }
}

/// E(T) = E(0) + E_p(T).
pub fn corrected_energy(e0: f64, ep: &PerturbationResult) -> f64 {
    e0 + ep.ep
}

/// The literal T → 0⁺ limit of E_p for a discrete spectrum: −E_min(0).
///
/// The corrected spectrum therefore tends to E_n(0) − E_min(0), not E_n(0).
pub fn zero_temperature_limit(levels: &LevelSet) -> f64 {
    -levels.min()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    /// E_p^{(I)} for I = 1..=i_max.
    pub corrections: Vec<f64>,
    pub converged: bool,
    pub tolerance: f64,
}

/// Iterates H_I = H_0 + k_B·T·ln Tr e^{−βH_{I−1}} on the spectrum: each order
/// shifts every level by the previous correction.
///
/// Convergence compares the last two corrections; with a single order the
/// comparison is against the bare H_0, whose correction is zero.
pub fn self_consistent_iterate(
    levels: &LevelSet,
    tp: &ThermalPoint,
    i_max: usize,
    tol: f64,
) -> Result<IterationTrace> {
    if i_max == 0 {
        return Err(domain("i_max must be at least 1"));
    }
    if !(tol >= 0.0) {
        return Err(domain("tolerance must be non-negative"));
    }
    let mut corrections = Vec::with_capacity(i_max);
    let mut previous = 0.0;
    for _ in 0..i_max {
        let c = ep_discrete(&levels.shifted(previous), tp)?.ep;
        corrections.push(c);
        previous = c;
    }
    let before_last = match corrections.len() {
        1 => 0.0,
        n => corrections[n - 2],
    };
    let converged = (corrections[corrections.len() - 1] - before_last).abs() <= tol;
    Ok(IterationTrace {
        corrections,
        converged,
        tolerance: tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// Maximal temperature intervals on which |E_p| ≤ threshold.
    pub intervals: Vec<(f64, f64)>,
    /// Temperatures where E_p changes sign.
    pub crossings: Vec<f64>,
    pub threshold: f64,
}

fn ep_value(spec: &SystemSpec, t: f64) -> Result<f64> {
    let tp = ThermalPoint::new(t, spec.units())?;
    Ok(ep_for(spec, &tp)?.ep)
}

/// Temperature T* in `bracket` where E_p vanishes.
pub fn zero_crossing(spec: &SystemSpec, bracket: Bracket) -> Result<f64> {
    let tol = 1e-13 * bracket.hi().max(1.0);
    find_root(
        |t| ep_value(spec, t).unwrap_or(f64::NAN),
        bracket,
        tol,
    )
}

/// Scans E_p over a uniform grid on [t_lo, t_hi] and reports where the
/// correction stays small, with interval edges and sign changes refined
/// by root finding.
pub fn validity_range(
    spec: &SystemSpec,
    t_lo: f64,
    t_hi: f64,
    threshold: f64,
    samples: usize,
) -> Result<ValidityReport> {
    if !(t_lo > 0.0 && t_hi > t_lo && t_hi.is_finite()) {
        return Err(domain(format!(
            "validity scan needs 0 < t_lo < t_hi, got [{t_lo}, {t_hi}]"
        )));
    }
    if samples < 2 {
        return Err(domain("validity scan needs at least 2 samples"));
    }
    if !(threshold >= 0.0) {
        return Err(domain("threshold must be non-negative"));
    }
    let grid = linspace(t_lo, t_hi, samples);
    let values = grid
        .iter()
        .map(|&t| ep_value(spec, t))
        .collect::<Result<Vec<_>>>()?;
    let tol = 1e-13 * t_hi.max(1.0);

    let excess = |t: f64| ep_value(spec, t).map(|e| e.abs() - threshold).unwrap_or(f64::NAN);
    let mut intervals = Vec::new();
    let mut start = (values[0].abs() <= threshold).then_some(grid[0]);
    for i in 1..grid.len() {
        let inside = values[i].abs() <= threshold;
        match (start, inside) {
            (None, true) => {
                let edge = find_root(excess, Bracket::new(grid[i - 1], grid[i])?, tol)?;
                start = Some(edge);
            }
            (Some(s), false) => {
                let edge = find_root(excess, Bracket::new(grid[i - 1], grid[i])?, tol)?;
                intervals.push((s, edge));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        intervals.push((s, grid[grid.len() - 1]));
    }

    let mut crossings = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            crossings.push(grid[i]);
        } else if i + 1 < grid.len()
            && values[i + 1] != 0.0
            && values[i].signum() != values[i + 1].signum()
        {
            crossings.push(zero_crossing(spec, Bracket::new(grid[i], grid[i + 1])?)?);
        }
    }

    Ok(ValidityReport {
        intervals,
        crossings,
        threshold,
    })
}
