//! Unit convention, thermal state and model-system descriptions.
//!
//! Every quantity is dimensionless in Hartree-style scaling unless a
//! [`UnitsConfig`] overrides ħ, the mass unit or k_B. Masses stored on a
//! [`SystemSpec`] are multiples of `mass_unit`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Default number of levels kept in truncated partition traces.
pub const DEFAULT_N_STATES: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitsConfig {
    pub hbar: f64,
    pub mass_unit: f64,
    pub kb: f64,
}

impl Default for UnitsConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass_unit: 1.0,
            kb: 1.0,
        }
    }
}

impl UnitsConfig {
    pub fn new(hbar: f64, mass_unit: f64, kb: f64) -> Result<Self> {
        let units = Self {
            hbar,
            mass_unit,
            kb,
        };
        units.validate()?;
        Ok(units)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("mass_unit", self.mass_unit),
            ("kb", self.kb),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Equilibrium temperature together with its inverse temperature and the
/// equipartition mean energy k_B·T/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    temperature: f64,
    kb: f64,
    beta: Option<f64>,
    mean_energy: f64,
}

impl ThermalPoint {
    pub fn new(temperature: f64, units: &UnitsConfig) -> Result<Self> {
        units.validate()?;
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(domain(format!(
                "temperature must be finite and non-negative, got {temperature}"
            )));
        }
        let beta = (temperature > 0.0).then(|| 1.0 / (units.kb * temperature));
        Ok(Self {
            temperature,
            kb: units.kb,
            beta,
            mean_energy: 0.5 * units.kb * temperature,
        })
    }

    /// Thermal point in the default ħ = m = k_B = 1 scaling.
    pub fn hartree(temperature: f64) -> Result<Self> {
        Self::new(temperature, &UnitsConfig::default())
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn kb(&self) -> f64 {
        self.kb
    }

    /// k_B·T
    pub fn thermal_energy(&self) -> f64 {
        self.kb * self.temperature
    }

    /// `None` at T = 0.
    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    /// Inverse temperature, or a domain error at T = 0.
    pub fn require_beta(&self) -> Result<f64> {
        self.beta
            .ok_or_else(|| domain("operation requires T > 0 (beta undefined at T = 0)"))
    }

    pub fn mean_energy(&self) -> f64 {
        self.mean_energy
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemKind {
    /// Infinite square well on [0, L]; levels n' = 1..=n_states.
    Box { length: f64, mass: f64, n_states: u32 },
    /// Free particle in vacuum; continuum spectrum.
    Free { mass: f64 },
    /// Harmonic oscillator; levels n' = 0..n_states.
    Oscillator { omega: f64, mass: f64, n_states: u32 },
}

impl SystemKind {
    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::Box { .. } => "box",
            SystemKind::Free { .. } => "free",
            SystemKind::Oscillator { .. } => "oscillator",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    kind: SystemKind,
    units: UnitsConfig,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and positive, got {v}")))
    }
}

impl SystemSpec {
    pub fn new(kind: SystemKind, units: UnitsConfig) -> Result<Self> {
        units.validate()?;
        match kind {
            SystemKind::Box {
                length,
                mass,
                n_states,
            } => {
                positive("L", length)?;
                positive("m", mass)?;
                if n_states == 0 {
                    return Err(domain("n_states must be at least 1"));
                }
            }
            SystemKind::Free { mass } => positive("m", mass)?,
            SystemKind::Oscillator {
                omega,
                mass,
                n_states,
            } => {
                positive("omega", omega)?;
                positive("m", mass)?;
                if n_states == 0 {
                    return Err(domain("n_states must be at least 1"));
                }
            }
        }
        Ok(Self { kind, units })
    }

    /// Particle in a box of width `length` with unit mass and ten states.
    pub fn particle_in_box(length: f64) -> Result<Self> {
        Self::new(
            SystemKind::Box {
                length,
                mass: 1.0,
                n_states: DEFAULT_N_STATES,
            },
            UnitsConfig::default(),
        )
    }

    pub fn free(mass: f64) -> Result<Self> {
        Self::new(SystemKind::Free { mass }, UnitsConfig::default())
    }

    /// Oscillator of angular frequency `omega` with unit mass and ten states.
    pub fn oscillator(omega: f64) -> Result<Self> {
        Self::new(
            SystemKind::Oscillator {
                omega,
                mass: 1.0,
                n_states: DEFAULT_N_STATES,
            },
            UnitsConfig::default(),
        )
    }

    pub fn with_mass(self, m: f64) -> Result<Self> {
        let kind = match self.kind {
            SystemKind::Box {
                length, n_states, ..
            } => SystemKind::Box {
                length,
                mass: m,
                n_states,
            },
            SystemKind::Free { .. } => SystemKind::Free { mass: m },
            SystemKind::Oscillator {
                omega, n_states, ..
            } => SystemKind::Oscillator {
                omega,
                mass: m,
                n_states,
            },
        };
        Self::new(kind, self.units)
    }

    pub fn with_n_states(self, n: u32) -> Result<Self> {
        let kind = match self.kind {
            SystemKind::Box { length, mass, .. } => SystemKind::Box {
                length,
                mass,
                n_states: n,
            },
            SystemKind::Free { .. } => return Err(domain("free particle has no n_states")),
            SystemKind::Oscillator { omega, mass, .. } => SystemKind::Oscillator {
                omega,
                mass,
                n_states: n,
            },
        };
        Self::new(kind, self.units)
    }

    pub fn with_units(self, units: UnitsConfig) -> Result<Self> {
        Self::new(self.kind, units)
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn units(&self) -> &UnitsConfig {
        &self.units
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Mass in absolute units (stored multiple times `mass_unit`).
    pub fn mass(&self) -> f64 {
        let m = match self.kind {
            SystemKind::Box { mass, .. }
            | SystemKind::Free { mass }
            | SystemKind::Oscillator { mass, .. } => mass,
        };
        m * self.units.mass_unit
    }

    /// Box energy scale Ξ = π²ħ²/(2mL²).
    pub fn box_energy_scale(&self) -> Result<f64> {
        match self.kind {
            SystemKind::Box { length, .. } => {
                let hbar = self.units.hbar;
                Ok(PI * PI * hbar * hbar / (2.0 * self.mass() * length * length))
            }
            _ => Err(Error::WrongSystem {
                expected: "box",
                got: self.name(),
            }),
        }
    }

    /// Lowest valid level index: 1 for the box, 0 for the oscillator.
    pub fn first_level(&self) -> Result<u32> {
        match self.kind {
            SystemKind::Box { .. } => Ok(1),
            SystemKind::Oscillator { .. } => Ok(0),
            SystemKind::Free { .. } => Err(Error::ContinuumSpectrum),
        }
    }

    pub(crate) fn expect_box(&self) -> Result<(f64, u32)> {
        match self.kind {
            SystemKind::Box {
                length, n_states, ..
            } => Ok((length, n_states)),
            _ => Err(Error::WrongSystem {
                expected: "box",
                got: self.name(),
            }),
        }
    }

    pub(crate) fn expect_oscillator(&self) -> Result<(f64, u32)> {
        match self.kind {
            SystemKind::Oscillator {
                omega, n_states, ..
            } => Ok((omega, n_states)),
            _ => Err(Error::WrongSystem {
                expected: "oscillator",
                got: self.name(),
            }),
        }
    }
}

/// Ascending list of zero-temperature levels entering a partition trace.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    energies: Vec<f64>,
}

impl LevelSet {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::Empty("level set"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(domain("level energies must be finite"));
        }
        if energies.windows(2).any(|w| w[1] < w[0]) {
            return Err(domain("level energies must be sorted ascending"));
        }
        Ok(Self { energies })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// E_min(0), the lowest level.
    pub fn min(&self) -> f64 {
        self.energies[0]
    }

    /// Every level moved by the same scalar `c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            energies: self.energies.iter().map(|e| e + c).collect(),
        }
    }
}

/// Zero-temperature level E_n(0) of a discrete system.
pub fn level_energy(spec: &SystemSpec, n: u32) -> Result<f64> {
    let hbar = spec.units.hbar;
    match spec.kind {
        SystemKind::Box { n_states, .. } => {
            if n == 0 {
                return Err(Error::IndexOutOfRange {
                    system: "box",
                    index: n,
                    valid: format!("1..={n_states}"),
                });
            }
            let nf = f64::from(n);
            Ok(spec.box_energy_scale()? * nf * nf)
        }
        SystemKind::Oscillator { omega, .. } => Ok((f64::from(n) + 0.5) * hbar * omega),
        SystemKind::Free { .. } => Err(Error::ContinuumSpectrum),
    }
}

/// The truncated spectrum used by the partition trace.
pub fn make_levels(spec: &SystemSpec) -> Result<LevelSet> {
    let (first, count) = match spec.kind {
        SystemKind::Box { n_states, .. } => (1, n_states),
        SystemKind::Oscillator { n_states, .. } => (0, n_states),
        SystemKind::Free { .. } => return Err(Error::ContinuumSpectrum),
    };
    let energies = (first..first + count)
        .map(|n| level_energy(spec, n))
        .collect::<Result<Vec<_>>>()?;
    LevelSet::new(energies)
}
