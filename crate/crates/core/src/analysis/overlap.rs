//! Residual probabilities and overlap integrals of the corrected modes.
//!
//! Box modes are evaluated in the expanded form √(2/L)·sin((nπ/L)(1+α)x),
//! the same form the closed-form residual is built from. Two conventions
//! matter for overlaps of different modes: whether both factors share the
//! α of mode `n` or each mode carries its own, and which interval is
//! integrated.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::{SystemKind, SystemSpec, ThermalPoint};
use crate::numerics::{hermite, integrate, integrate_line, ln_factorial, QuadratureSettings};
use crate::wavefunctions::{alpha, osc_psi, OscWave};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMode {
    /// Both factors use α (or x₀) of mode `n`.
    SharedAlpha,
    PerMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapDomain {
    /// [−L/2, L/2]
    Symmetric,
    /// [0, L]
    Physical,
    /// (−∞, ∞)
    FullLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapConvention {
    pub mode: AlphaMode,
    pub domain: OverlapDomain,
}

impl OverlapConvention {
    pub const BOX_DEFAULT: Self = Self {
        mode: AlphaMode::SharedAlpha,
        domain: OverlapDomain::Symmetric,
    };
    pub const OSCILLATOR_DEFAULT: Self = Self {
        mode: AlphaMode::SharedAlpha,
        domain: OverlapDomain::FullLine,
    };

    pub fn new(mode: AlphaMode, domain: OverlapDomain) -> Self {
        Self { mode, domain }
    }

    pub fn default_for(spec: &SystemSpec) -> Self {
        match spec.kind() {
            SystemKind::Oscillator { .. } => Self::OSCILLATOR_DEFAULT,
            _ => Self::BOX_DEFAULT,
        }
    }

    /// full_line belongs to the oscillator, symmetric/physical to the box.
    pub fn validate_for(&self, spec: &SystemSpec) -> Result<()> {
        let ok = matches!(
            (spec.kind(), self.domain),
            (SystemKind::Oscillator { .. }, OverlapDomain::FullLine)
                | (
                    SystemKind::Box { .. },
                    OverlapDomain::Symmetric | OverlapDomain::Physical
                )
        );
        if ok {
            Ok(())
        } else {
            Err(Error::Convention(format!(
                "{:?} domain is not valid for the {} system",
                self.domain,
                spec.name()
            )))
        }
    }
}

fn check_mode(n: u32) -> Result<f64> {
    if n == 0 {
        Err(domain("box modes start at n = 1"))
    } else {
        Ok(f64::from(n))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > -1.0 {
        Ok(())
    } else {
        Err(domain(format!("alpha must be finite and > -1, got {alpha}")))
    }
}

/// sin(nπα) / (nπ(1+α)), the out-of-box probability in its published
/// closed form.
///
/// Over [−L/2, L/2] this equals the integral only for even `n`; for odd
/// `n` the integral gives the opposite sign, see
/// [`residual_symmetric_exact`].
pub fn residual_closed(n: u32, alpha: f64) -> Result<f64> {
    let nf = check_mode(n)?;
    check_alpha(alpha)?;
    Ok((nf * PI * alpha).sin() / (nf * PI * (1.0 + alpha)))
}

/// 1 − ∫_{−L/2}^{L/2} |Ψ_n|² dx evaluated analytically:
/// sin(nπ(1+α)) / (nπ(1+α)) = (−1)ⁿ⁺¹·sin(nπα) / (nπ(1+α)).
pub fn residual_symmetric_exact(n: u32, alpha: f64) -> Result<f64> {
    let nf = check_mode(n)?;
    check_alpha(alpha)?;
    let arg = nf * PI * (1.0 + alpha);
    Ok(arg.sin() / arg)
}

/// 1 − ∫_0^L |Ψ_n|² dx = sin(2nπα) / (2nπ(1+α)).
pub fn residual_physical_exact(n: u32, alpha: f64) -> Result<f64> {
    let nf = check_mode(n)?;
    check_alpha(alpha)?;
    Ok((2.0 * nf * PI * alpha).sin() / (2.0 * nf * PI * (1.0 + alpha)))
}

fn box_bounds(length: f64, domain: OverlapDomain) -> Result<(f64, f64)> {
    match domain {
        OverlapDomain::Symmetric => Ok((-0.5 * length, 0.5 * length)),
        OverlapDomain::Physical => Ok((0.0, length)),
        OverlapDomain::FullLine => Err(Error::Convention(
            "full_line domain is not valid for the box system".into(),
        )),
    }
}

fn expanded_box_mode(length: f64, n: u32, alpha: f64) -> impl Fn(f64) -> f64 {
    let amp = (2.0 / length).sqrt();
    let k = f64::from(n) * PI * (1.0 + alpha) / length;
    move |x| amp * (k * x).sin()
}

/// 1 − ∫|Ψ_n|² over `domain` by quadrature, for a given α.
pub fn residual_quadrature_alpha(
    length: f64,
    n: u32,
    alpha: f64,
    domain: OverlapDomain,
    settings: &QuadratureSettings,
) -> Result<f64> {
    check_mode(n)?;
    check_alpha(alpha)?;
    if !(length.is_finite() && length > 0.0) {
        return Err(crate::error::domain("L must be positive"));
    }
    let (a, b) = box_bounds(length, domain)?;
    let psi = expanded_box_mode(length, n, alpha);
    Ok(1.0 - integrate(|x| psi(x).powi(2), a, b, settings)?)
}

/// 1 − ∫|Ψ_n(x, T)|² over the convention's domain, with α_n taken at `tp`.
pub fn residual_quadrature(
    spec: &SystemSpec,
    n: u32,
    tp: &ThermalPoint,
    convention: OverlapConvention,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let (length, _) = spec.expect_box()?;
    convention.validate_for(spec)?;
    let a = alpha(spec, n, tp)?;
    residual_quadrature_alpha(length, n, a, convention.domain, settings)
}

/// ∫Ψ_m·Ψ_n dx for box modes.
pub fn box_overlap(
    spec: &SystemSpec,
    m: u32,
    n: u32,
    tp: &ThermalPoint,
    convention: OverlapConvention,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let (length, _) = spec.expect_box()?;
    convention.validate_for(spec)?;
    check_mode(m)?;
    let alpha_n = alpha(spec, n, tp)?;
    let alpha_m = match convention.mode {
        AlphaMode::SharedAlpha => alpha_n,
        AlphaMode::PerMode => alpha(spec, m, tp)?,
    };
    box_overlap_alpha(length, (m, alpha_m), (n, alpha_n), convention.domain, settings)
}

/// ∫Ψ_m·Ψ_n dx with explicit per-factor α values.
pub fn box_overlap_alpha(
    length: f64,
    (m, alpha_m): (u32, f64),
    (n, alpha_n): (u32, f64),
    domain: OverlapDomain,
    settings: &QuadratureSettings,
) -> Result<f64> {
    check_mode(m)?;
    check_mode(n)?;
    check_alpha(alpha_m)?;
    check_alpha(alpha_n)?;
    let (a, b) = box_bounds(length, domain)?;
    let psi_m = expanded_box_mode(length, m, alpha_m);
    let psi_n = expanded_box_mode(length, n, alpha_n);
    integrate(|x| psi_m(x) * psi_n(x), a, b, settings)
}

/// ∫Ψ_m·Ψ_n dx over the whole line for oscillator modes. With
/// [`AlphaMode::SharedAlpha`] both modes use x₀(n, T).
pub fn osc_overlap(
    spec: &SystemSpec,
    m: u32,
    n: u32,
    tp: &ThermalPoint,
    convention: OverlapConvention,
    settings: &QuadratureSettings,
) -> Result<f64> {
    spec.expect_oscillator()?;
    convention.validate_for(spec)?;
    let wave_n = OscWave::new(spec, n, tp)?;
    let wave_m = match convention.mode {
        AlphaMode::SharedAlpha => wave_n.rescaled(m, wave_n.x0),
        AlphaMode::PerMode => OscWave::with_perturbation(spec, m, wave_n.perturbation)?,
    };
    osc_overlap_waves(&wave_m, &wave_n, settings)
}

pub fn osc_overlap_waves(
    wave_m: &OscWave,
    wave_n: &OscWave,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let scale = wave_m.x0.max(wave_n.x0);
    integrate_line(|x| osc_psi(wave_m, x) * osc_psi(wave_n, x), scale, settings)
}

/// The orthonormality integral with the first-order expanded prefactor:
/// both normalisations use the ground length scale x₀, the envelope gains
/// (1 + α/2)² and the Gaussian and Hermite arguments use x₀(1 − α).
pub fn osc_overlap_expanded(
    m: u32,
    n: u32,
    alpha: f64,
    x0: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !(alpha.is_finite() && alpha < 1.0) {
        return Err(domain(format!("expanded overlap needs alpha < 1, got {alpha}")));
    }
    if !(x0.is_finite() && x0 > 0.0) {
        return Err(domain("x0 must be positive"));
    }
    let ln_norm = |k: u32| {
        -0.5 * (0.5 * PI.ln() + f64::from(k) * std::f64::consts::LN_2 + ln_factorial(k) + x0.ln())
    };
    let prefactor = (ln_norm(m) + ln_norm(n)).exp() * (1.0 + 0.5 * alpha).powi(2);
    let scale = x0 * (1.0 - alpha);
    integrate_line(
        |x| {
            let y = x / scale;
            prefactor * (-y * y).exp() * hermite(m, y) * hermite(n, y)
        },
        scale,
        settings,
    )
}

/// (n!/m!·2^{n−m})^{1/2}·(1 + α/2)²·(1 − α)·δ_mn.
pub fn appendix_d_factor(m: u32, n: u32, alpha: f64) -> f64 {
    if m != n {
        return 0.0;
    }
    let ratio = ((ln_factorial(n) - ln_factorial(m))
        + (f64::from(n) - f64::from(m)) * std::f64::consts::LN_2)
        .exp();
    ratio.sqrt() * (1.0 + 0.5 * alpha).powi(2) * (1.0 - alpha)
}
