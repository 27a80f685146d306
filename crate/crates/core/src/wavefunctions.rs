//! Temperature-dependent wavefunctions of the three model systems.
//!
//! Each wave descriptor is built once from a system, a mode and a thermal
//! point; evaluation is then a cheap pure function of position.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::{level_energy, SystemKind, SystemSpec, ThermalPoint};
use crate::numerics::{hermite, ln_factorial};
use crate::perturbation::{ep_for, PerturbationResult, DEFAULT_THRESHOLD};

/// Perturbation ratio α = E_p(T) / (2·E_n(0)) of mode `n`.
pub fn alpha(spec: &SystemSpec, n: u32, tp: &ThermalPoint) -> Result<f64> {
    let e0 = level_energy(spec, n)?;
    if e0 <= 0.0 {
        return Err(domain(format!("alpha needs E_n(0) > 0, got {e0}")));
    }
    Ok(ep_for(spec, tp)?.ep / (2.0 * e0))
}

fn zero_perturbation(temperature: f64) -> PerturbationResult {
    PerturbationResult::new(0.0, temperature, DEFAULT_THRESHOLD)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxWave {
    pub n: u32,
    pub length: f64,
    pub temperature: f64,
    /// √(2m·E_n(T))/ħ
    pub k_eff: f64,
    pub perturbation: PerturbationResult,
}

impl BoxWave {
    pub fn new(spec: &SystemSpec, n: u32, tp: &ThermalPoint) -> Result<Self> {
        Self::with_perturbation(spec, n, ep_for(spec, tp)?)
    }

    /// The T = 0 mode, sin(nπx/L).
    pub fn ground(spec: &SystemSpec, n: u32) -> Result<Self> {
        Self::with_perturbation(spec, n, zero_perturbation(0.0))
    }

    pub fn with_perturbation(spec: &SystemSpec, n: u32, ep: PerturbationResult) -> Result<Self> {
        let (length, _) = spec.expect_box()?;
        let e0 = level_energy(spec, n)?;
        let k_eff = if ep.ep == 0.0 {
            f64::from(n) * PI / length
        } else {
            let en = e0 + ep.ep;
            if en < 0.0 {
                return Err(domain(format!(
                    "E_{n}(T) = {en:e} is negative; the wavenumber is not real"
                )));
            }
            (2.0 * spec.mass() * en).sqrt() / spec.units().hbar
        };
        Ok(Self {
            n,
            length,
            temperature: ep.temperature,
            k_eff,
            perturbation: ep,
        })
    }

    fn amplitude(&self) -> f64 {
        (2.0 / self.length).sqrt()
    }
}

/// Ψ_n(x, T) = √(2/L)·sin(k_eff·x) for 0 ≤ x ≤ L.
pub fn box_psi(w: &BoxWave, x: f64) -> Result<f64> {
    if !(0.0..=w.length).contains(&x) {
        return Err(domain(format!("x = {x} lies outside the box [0, {}]", w.length)));
    }
    Ok(box_psi_anywhere(w, x))
}

/// Ψ_n(x, T) without the domain check, for plotting.
pub fn box_psi_anywhere(w: &BoxWave, x: f64) -> f64 {
    w.amplitude() * (w.k_eff * x).sin()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Right,
    Left,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Right => 1.0,
            Direction::Left => -1.0,
        }
    }
}

fn free_mass_hbar(spec: &SystemSpec) -> Result<(f64, f64)> {
    match spec.kind() {
        SystemKind::Free { .. } => Ok((spec.mass(), spec.units().hbar)),
        _ => Err(Error::WrongSystem {
            expected: "free",
            got: spec.name(),
        }),
    }
}

/// (m/ħ²)·k_B·T·ln(2π·m·k_B·T); zero at T = 0.
fn free_shift(tp: &ThermalPoint, mass: f64, hbar: f64) -> f64 {
    let kt = tp.thermal_energy();
    if kt == 0.0 {
        return 0.0;
    }
    mass / (hbar * hbar) * kt * (2.0 * PI * mass * kt).ln()
}

fn check_wavenumber(k: f64) -> Result<()> {
    if k.is_finite() && k >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("wavenumber must be finite and non-negative, got {k}")))
    }
}

/// k(T) = [k² + (m/ħ²)·k_B·T·ln(2π·m·k_B·T)]^{1/2}.
pub fn free_k(k: f64, tp: &ThermalPoint, spec: &SystemSpec) -> Result<f64> {
    check_wavenumber(k)?;
    let (mass, hbar) = free_mass_hbar(spec)?;
    let radicand = k * k + free_shift(tp, mass, hbar);
    if radicand < 0.0 {
        return Err(Error::Evanescent { radicand });
    }
    Ok(radicand.sqrt())
}

/// First-order binomial expansion of [`free_k`].
pub fn free_k_approx(k: f64, tp: &ThermalPoint, spec: &SystemSpec) -> Result<f64> {
    check_wavenumber(k)?;
    if k == 0.0 {
        return Err(domain("the binomial expansion of k(T) needs k > 0"));
    }
    let (mass, hbar) = free_mass_hbar(spec)?;
    Ok(k * (1.0 + free_shift(tp, mass, hbar) / (2.0 * k * k)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeWave {
    pub k: f64,
    pub temperature: f64,
    pub direction: Direction,
    pub k_t: f64,
}

impl FreeWave {
    pub fn new(spec: &SystemSpec, k: f64, tp: &ThermalPoint, direction: Direction) -> Result<Self> {
        Ok(Self {
            k,
            temperature: tp.temperature(),
            direction,
            k_t: free_k(k, tp, spec)?,
        })
    }
}

/// e^{±i·k(T)·x}
pub fn free_psi(w: &FreeWave, x: f64) -> Complex64 {
    Complex64::from_polar(1.0, w.direction.sign() * w.k_t * x)
}

/// Ω_n(T) = ω + E_p(T)/((n + ½)ħ).
pub fn osc_omega(spec: &SystemSpec, n: u32, tp: &ThermalPoint) -> Result<f64> {
    let ep = ep_for(spec, tp)?;
    omega_from(spec, n, &ep)
}

fn omega_from(spec: &SystemSpec, n: u32, ep: &PerturbationResult) -> Result<f64> {
    let (omega, _) = spec.expect_oscillator()?;
    let big_omega = omega + ep.ep / ((f64::from(n) + 0.5) * spec.units().hbar);
    if big_omega > 0.0 {
        Ok(big_omega)
    } else {
        Err(Error::FrequencyCollapse {
            n,
            omega: big_omega,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscWave {
    pub n: u32,
    pub omega: f64,
    pub temperature: f64,
    /// Ω_n(T)
    pub omega_n: f64,
    /// x₀(n, T) = √(ħ / (m·Ω_n))
    pub x0: f64,
    pub perturbation: PerturbationResult,
}

impl OscWave {
    pub fn new(spec: &SystemSpec, n: u32, tp: &ThermalPoint) -> Result<Self> {
        Self::with_perturbation(spec, n, ep_for(spec, tp)?)
    }

    /// The T = 0 mode with x₀ = √(ħ/mω).
    pub fn ground(spec: &SystemSpec, n: u32) -> Result<Self> {
        Self::with_perturbation(spec, n, zero_perturbation(0.0))
    }

    pub fn with_perturbation(spec: &SystemSpec, n: u32, ep: PerturbationResult) -> Result<Self> {
        let (omega, _) = spec.expect_oscillator()?;
        let omega_n = omega_from(spec, n, &ep)?;
        Ok(Self {
            n,
            omega,
            temperature: ep.temperature,
            omega_n,
            x0: (spec.units().hbar / (spec.mass() * omega_n)).sqrt(),
            perturbation: ep,
        })
    }

    /// Mode `n` forced onto another length scale.
    pub fn rescaled(self, n: u32, x0: f64) -> Self {
        Self { n, x0, ..self }
    }
}

/// (√π·2ⁿ·n!·x₀)^{−1/2}·e^{−x²/2x₀²}·H_n(x/x₀), with the prefactor taken in
/// log space.
pub fn osc_psi(w: &OscWave, x: f64) -> f64 {
    let y = x / w.x0;
    let ln_norm = -0.5
        * (0.5 * PI.ln() + f64::from(w.n) * std::f64::consts::LN_2 + ln_factorial(w.n) + w.x0.ln());
    let ln_envelope = ln_norm - 0.5 * y * y;
    if ln_envelope < -745.0 {
        return 0.0;
    }
    ln_envelope.exp() * hermite(w.n, y)
}
