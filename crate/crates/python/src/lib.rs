//! Python bindings: systems, the thermal correction, wavefunctions,
//! residuals and overlaps, figure curves and the verification suite.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyIndexError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use thermoq::analysis::{self, AlphaMode, FigureId, FigureParams, OverlapConvention, OverlapDomain, VerifyOptions};
use thermoq::{Direction, QuadratureSettings, SystemKind, ThermalPoint, UnitsConfig};

fn to_py(e: thermoq::Error) -> PyErr {
    match e {
        thermoq::Error::IndexOutOfRange { .. } => PyIndexError::new_err(e.to_string()),
        thermoq::Error::WrongSystem { .. } | thermoq::Error::ContinuumSpectrum => {
            PyTypeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for thermoq::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// A model system with its unit convention.
#[pyclass(name = "System", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySystem {
    spec: thermoq::SystemSpec,
}

impl PySystem {
    fn tp(&self, temperature: f64) -> PyResult<ThermalPoint> {
        ThermalPoint::new(temperature, self.spec.units()).py()
    }
}

fn units(hbar: f64, kb: f64, mass_unit: f64) -> PyResult<UnitsConfig> {
    UnitsConfig::new(hbar, mass_unit, kb).py()
}

#[pymethods]
impl PySystem {
    /// Particle in a box of width `length`.
    #[staticmethod]
    #[pyo3(signature = (length, mass=1.0, n_states=thermoq::DEFAULT_N_STATES, hbar=1.0, kb=1.0, mass_unit=1.0))]
    fn particle_in_box(length: f64, mass: f64, n_states: u32, hbar: f64, kb: f64, mass_unit: f64) -> PyResult<Self> {
        let kind = SystemKind::Box { length, mass, n_states };
        Ok(Self { spec: thermoq::SystemSpec::new(kind, units(hbar, kb, mass_unit)?).py()? })
    }

    /// Free particle of mass `mass`.
    #[staticmethod]
    #[pyo3(signature = (mass=1.0, hbar=1.0, kb=1.0, mass_unit=1.0))]
    fn free(mass: f64, hbar: f64, kb: f64, mass_unit: f64) -> PyResult<Self> {
        let kind = SystemKind::Free { mass };
        Ok(Self { spec: thermoq::SystemSpec::new(kind, units(hbar, kb, mass_unit)?).py()? })
    }

    /// Harmonic oscillator of frequency `omega`.
    #[staticmethod]
    #[pyo3(signature = (omega, mass=1.0, n_states=thermoq::DEFAULT_N_STATES, hbar=1.0, kb=1.0, mass_unit=1.0))]
    fn oscillator(omega: f64, mass: f64, n_states: u32, hbar: f64, kb: f64, mass_unit: f64) -> PyResult<Self> {
        let kind = SystemKind::Oscillator { omega, mass, n_states };
        Ok(Self { spec: thermoq::SystemSpec::new(kind, units(hbar, kb, mass_unit)?).py()? })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.spec.name()
    }

    /// Zero-temperature levels of the truncated spectrum.
    fn levels(&self) -> PyResult<Vec<f64>> {
        Ok(thermoq::make_levels(&self.spec).py()?.energies().to_vec())
    }

    /// E_n(0) for mode `n`.
    fn level(&self, n: u32) -> PyResult<f64> {
        thermoq::level_energy(&self.spec, n).py()
    }

    /// E_p(T).
    fn ep(&self, temperature: f64) -> PyResult<f64> {
        Ok(thermoq::ep_for(&self.spec, &self.tp(temperature)?).py()?.ep)
    }

    /// E_n(T) = E_n(0) + E_p(T).
    fn corrected_level(&self, n: u32, temperature: f64) -> PyResult<f64> {
        let ep = thermoq::ep_for(&self.spec, &self.tp(temperature)?).py()?;
        Ok(thermoq::corrected_energy(self.level(n)?, &ep))
    }

    /// Temperature in [lo, hi] where E_p vanishes.
    fn zero_crossing(&self, lo: f64, hi: f64) -> PyResult<f64> {
        thermoq::zero_crossing(&self.spec, thermoq::Bracket::new(lo, hi).py()?).py()
    }

    /// (intervals, crossings) where |E_p| ≤ threshold over [t_lo, t_hi].
    #[pyo3(signature = (t_lo, t_hi, threshold=thermoq::DEFAULT_THRESHOLD, samples=400))]
    fn validity_range(&self, t_lo: f64, t_hi: f64, threshold: f64, samples: usize) -> PyResult<(Vec<(f64, f64)>, Vec<f64>)> {
        let r = thermoq::validity_range(&self.spec, t_lo, t_hi, threshold, samples).py()?;
        Ok((r.intervals, r.crossings))
    }

    /// Corrections of orders 1..=i_max and whether they converged.
    #[pyo3(signature = (temperature, i_max=thermoq::DEFAULT_I_MAX, tol=1e-8))]
    fn self_consistent(&self, temperature: f64, i_max: usize, tol: f64) -> PyResult<(Vec<f64>, bool)> {
        let levels = thermoq::make_levels(&self.spec).py()?;
        let t = thermoq::self_consistent_iterate(&levels, &self.tp(temperature)?, i_max, tol).py()?;
        Ok((t.corrections, t.converged))
    }

    /// α_n = E_p / (2E_n(0)).
    fn alpha(&self, n: u32, temperature: f64) -> PyResult<f64> {
        thermoq::alpha(&self.spec, n, &self.tp(temperature)?).py()
    }

    /// Box mode Ψ_n(x, T) sampled at `xs`; T = 0 gives the unperturbed mode.
    fn box_psi(&self, n: u32, temperature: f64, xs: Vec<f64>) -> PyResult<Vec<f64>> {
        let w = if temperature == 0.0 {
            thermoq::BoxWave::ground(&self.spec, n)
        } else {
            thermoq::BoxWave::new(&self.spec, n, &self.tp(temperature)?)
        }
        .py()?;
        xs.iter().map(|&x| thermoq::box_psi(&w, x).py()).collect()
    }

    /// Oscillator mode Ψ_n(x, T) sampled at `xs`; T = 0 gives the unperturbed mode.
    fn osc_psi(&self, n: u32, temperature: f64, xs: Vec<f64>) -> PyResult<Vec<f64>> {
        let w = if temperature == 0.0 {
            thermoq::OscWave::ground(&self.spec, n)
        } else {
            thermoq::OscWave::new(&self.spec, n, &self.tp(temperature)?)
        }
        .py()?;
        Ok(xs.iter().map(|&x| thermoq::osc_psi(&w, x)).collect())
    }

    /// Ω_n(T).
    fn osc_omega(&self, n: u32, temperature: f64) -> PyResult<f64> {
        thermoq::osc_omega(&self.spec, n, &self.tp(temperature)?).py()
    }

    /// k(T) for a free wave of zero-temperature wavenumber `k`.
    fn free_k(&self, k: f64, temperature: f64) -> PyResult<f64> {
        thermoq::free_k(k, &self.tp(temperature)?, &self.spec).py()
    }

    /// e^{±i k(T) x} sampled at `xs`.
    #[pyo3(signature = (k, temperature, xs, left=false))]
    fn free_psi(&self, k: f64, temperature: f64, xs: Vec<f64>, left: bool) -> PyResult<Vec<Complex64>> {
        let dir = if left { Direction::Left } else { Direction::Right };
        let w = thermoq::FreeWave::new(&self.spec, k, &self.tp(temperature)?, dir).py()?;
        Ok(xs.iter().map(|&x| thermoq::free_psi(&w, x)).collect())
    }

    /// ⟨m|n⟩ at temperature T. `alpha_mode` is "shared" or "per_mode";
    /// `domain` is "symmetric", "physical" or "full_line" (system default
    /// when omitted).
    #[pyo3(signature = (m, n, temperature, alpha_mode=None, domain=None))]
    fn overlap(&self, m: u32, n: u32, temperature: f64, alpha_mode: Option<&str>, domain: Option<&str>) -> PyResult<f64> {
        let default = OverlapConvention::default_for(&self.spec);
        let mode = match alpha_mode {
            None => default.mode,
            Some("shared") | Some("shared_alpha") => AlphaMode::SharedAlpha,
            Some("per_mode") => AlphaMode::PerMode,
            Some(other) => return Err(PyValueError::new_err(format!("unknown alpha mode {other:?}"))),
        };
        let domain = match domain {
            None => default.domain,
            Some("symmetric") => OverlapDomain::Symmetric,
            Some("physical") => OverlapDomain::Physical,
            Some("full_line") => OverlapDomain::FullLine,
            Some(other) => return Err(PyValueError::new_err(format!("unknown domain {other:?}"))),
        };
        let conv = OverlapConvention::new(mode, domain);
        let tp = self.tp(temperature)?;
        let s = QuadratureSettings::default();
        match self.spec.kind() {
            SystemKind::Oscillator { .. } => analysis::osc_overlap(&self.spec, m, n, &tp, conv, &s),
            _ => analysis::box_overlap(&self.spec, m, n, &tp, conv, &s),
        }
        .py()
    }

    fn __repr__(&self) -> String {
        format!("System({:?})", self.spec.kind())
    }
}

/// E_p = k_B·T·ln Σ e^{−E_n/k_B T} for explicit levels (Hartree units).
#[pyfunction]
fn ep_discrete(levels: Vec<f64>, temperature: f64) -> PyResult<f64> {
    let levels = thermoq::LevelSet::new(levels).py()?;
    Ok(thermoq::ep_discrete(&levels, &ThermalPoint::hartree(temperature).py()?).py()?.ep)
}

/// Published closed form sin(nπα) / (nπ(1+α)).
#[pyfunction]
fn residual_closed(n: u32, alpha: f64) -> PyResult<f64> {
    analysis::residual_closed(n, alpha).py()
}

/// Exact residual over [−L/2, L/2]: sin(nπ(1+α)) / (nπ(1+α)).
#[pyfunction]
fn residual_symmetric_exact(n: u32, alpha: f64) -> PyResult<f64> {
    analysis::residual_symmetric_exact(n, alpha).py()
}

/// (1 + α/2)²(1 − α) on the diagonal, zero off it.
#[pyfunction]
fn appendix_d_factor(m: u32, n: u32, alpha: f64) -> f64 {
    analysis::appendix_d_factor(m, n, alpha)
}

/// Curves of one figure panel as a list of
/// `(label, {column: values}, {meta key: value})`.
#[pyfunction]
#[pyo3(signature = (figure, samples=None, omega=None))]
#[allow(clippy::type_complexity)]
fn figure_curves(
    figure: &str,
    samples: Option<usize>,
    omega: Option<f64>,
) -> PyResult<Vec<(String, BTreeMap<String, Vec<f64>>, BTreeMap<String, String>)>> {
    let fig: FigureId = figure.parse().py()?;
    let params = FigureParams {
        samples,
        omega,
        ..Default::default()
    };
    Ok(analysis::figure_curves(fig, &params)
        .py()?
        .into_iter()
        .map(|t| {
            let cols = t.columns.into_iter().map(|c| (c.name, c.values)).collect();
            (t.label, cols, t.meta)
        })
        .collect())
}

/// Runs the invariant suite; returns `(name, passed, detail)` per check.
#[pyfunction]
#[pyo3(signature = (checks=None, tolerance=None, alpha=None))]
fn verify(checks: Option<Vec<String>>, tolerance: Option<f64>, alpha: Option<f64>) -> PyResult<Vec<(String, bool, String)>> {
    let opts = VerifyOptions {
        checks,
        comparison_tol: tolerance,
        alpha,
        ..Default::default()
    };
    Ok(analysis::run_verification(&opts)
        .py()?
        .into_iter()
        .map(|c| (c.name, c.passed, c.detail))
        .collect())
}

#[pymodule]
#[pyo3(name = "thermoq")]
fn thermoq_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(ep_discrete, m)?)?;
    m.add_function(wrap_pyfunction!(residual_closed, m)?)?;
    m.add_function(wrap_pyfunction!(residual_symmetric_exact, m)?)?;
    m.add_function(wrap_pyfunction!(appendix_d_factor, m)?)?;
    m.add_function(wrap_pyfunction!(figure_curves, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
