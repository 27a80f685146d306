//! Subcommand implementations over a resolved [`RunConfig`].
//!
//! Each command returns the tables it produced; writing them out is left to
//! the caller so the commands stay free of side effects.

use std::path::{Path, PathBuf};

use thermoq::analysis::{
    box_overlap, figure_curves, osc_overlap, run_verification, CheckOutcome, FigureId,
    FigureParams, OverlapConvention, VerifyOptions,
};
use thermoq::numerics::linspace;
use thermoq::{
    box_psi, box_psi_anywhere, corrected_energy, ep_for, free_psi, level_energy, osc_psi,
    validity_range, BoxWave, Direction, FreeWave, OscWave, QuadratureSettings, SystemKind,
    SystemSpec, ThermalPoint, DEFAULT_THRESHOLD,
};

use crate::error::CliError;
use crate::output::{write_atomic, Format, Table};

/// Everything a subcommand needs, after flags and config file are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemSpec,
    /// Strictly increasing temperature grid.
    pub temperatures: Vec<f64>,
    /// Mode indices; `None` means every level of the truncated spectrum.
    pub modes: Option<Vec<u32>>,
    pub format: Format,
    pub output_path: Option<PathBuf>,
    pub threshold: f64,
    pub quadrature: QuadratureSettings,
    pub convention: OverlapConvention,
}

impl RunConfig {
    pub fn new(system: SystemSpec, temperatures: Vec<f64>) -> Result<Self, CliError> {
        let cfg = Self {
            convention: OverlapConvention::default_for(&system),
            system,
            temperatures,
            modes: None,
            format: Format::Csv,
            output_path: None,
            threshold: DEFAULT_THRESHOLD,
            quadrature: QuadratureSettings::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.temperatures.is_empty() {
            return Err(CliError::Usage("no temperatures given".into()));
        }
        if !self.temperatures.windows(2).all(|w| w[1] > w[0]) {
            return Err(CliError::Usage(
                "temperature grid must be strictly increasing".into(),
            ));
        }
        for &t in &self.temperatures {
            ThermalPoint::new(t, self.system.units())?;
        }
        if !(self.threshold >= 0.0) {
            return Err(CliError::Usage("threshold must be non-negative".into()));
        }
        self.quadrature.validate()?;
        if !matches!(self.system.kind(), SystemKind::Free { .. }) {
            self.convention.validate_for(&self.system)?;
        }
        Ok(())
    }

    fn thermal(&self, t: f64) -> Result<ThermalPoint, CliError> {
        Ok(ThermalPoint::new(t, self.system.units())?)
    }

    fn single_temperature(&self) -> Result<f64, CliError> {
        match self.temperatures.as_slice() {
            [t] => Ok(*t),
            _ => Err(CliError::Usage("this command takes a single temperature".into())),
        }
    }

    fn modes_or_all(&self) -> Result<Vec<u32>, CliError> {
        if let Some(m) = &self.modes {
            return Ok(m.clone());
        }
        let first = self.system.first_level()?;
        let n_states = match self.system.kind() {
            SystemKind::Box { n_states, .. } | SystemKind::Oscillator { n_states, .. } => {
                *n_states
            }
            SystemKind::Free { .. } => {
                return Err(CliError::Usage("the free particle has no mode index".into()))
            }
        };
        Ok((first..first + n_states).collect())
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// E_p over the temperature grid, with validity flags (1 = |E_p| ≤ threshold).
pub fn cmd_ep(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut ep = Vec::with_capacity(cfg.temperatures.len());
    let mut valid = Vec::with_capacity(cfg.temperatures.len());
    for &t in &cfg.temperatures {
        let r = ep_for(&cfg.system, &cfg.thermal(t)?)?.with_threshold(cfg.threshold);
        ep.push(r.ep);
        valid.push(flag(r.within_validity));
    }
    Ok(Table::new(
        format!("ep_{}", cfg.system.name()),
        vec![
            ("T", cfg.temperatures.clone()),
            ("ep", ep),
            ("within_validity", valid),
        ],
    )
    .with_meta("system", cfg.system.name())
    .with_meta("threshold", cfg.threshold))
}

/// Zero-temperature levels, the common correction and the corrected levels
/// at one temperature. For the free particle the rows are wavenumbers with
/// E(0) = ħ²k²/2m.
pub fn cmd_spectrum(cfg: &RunConfig, wavenumbers: &[f64]) -> Result<Table, CliError> {
    let t = cfg.single_temperature()?;
    let ep = ep_for(&cfg.system, &cfg.thermal(t)?)?.with_threshold(cfg.threshold);
    let (key, index, e0): (&str, Vec<f64>, Vec<f64>) = match cfg.system.kind() {
        SystemKind::Free { .. } => {
            if wavenumbers.is_empty() {
                return Err(CliError::Usage("the free particle needs --k".into()));
            }
            let hbar = cfg.system.units().hbar;
            let m = cfg.system.mass();
            let e0 = wavenumbers
                .iter()
                .map(|k| hbar * hbar * k * k / (2.0 * m))
                .collect();
            ("k", wavenumbers.to_vec(), e0)
        }
        _ => {
            let modes = cfg.modes_or_all()?;
            let e0 = modes
                .iter()
                .map(|&n| level_energy(&cfg.system, n))
                .collect::<thermoq::Result<Vec<_>>>()?;
            ("n", modes.iter().map(|&n| f64::from(n)).collect(), e0)
        }
    };
    let rows = e0.len();
    let et = e0.iter().map(|&e| corrected_energy(e, &ep)).collect();
    Ok(Table::new(
        format!("spectrum_{}", cfg.system.name()),
        vec![
            (key, index),
            ("e0", e0),
            ("ep", vec![ep.ep; rows]),
            ("eT", et),
        ],
    )
    .with_meta("system", cfg.system.name())
    .with_meta("T", t)
    .with_meta("within_validity", ep.within_validity))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveRequest {
    pub n: Option<u32>,
    pub k: Option<f64>,
    pub direction: Direction,
    pub x_range: Option<(f64, f64)>,
    pub samples: usize,
    /// Evaluate box modes outside [0, L] as well.
    pub anywhere: bool,
}

/// Ψ sampled on a uniform grid; Re/Im columns for the free particle.
/// T = 0 selects the unperturbed mode.
pub fn cmd_wavefunction(cfg: &RunConfig, req: &WaveRequest) -> Result<Table, CliError> {
    let t = cfg.single_temperature()?;
    let tp = cfg.thermal(t)?;
    if req.samples < 2 {
        return Err(CliError::Usage("need at least 2 samples".into()));
    }
    let grid = |default: (f64, f64)| -> Result<Vec<f64>, CliError> {
        let (lo, hi) = req.x_range.unwrap_or(default);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::Usage(format!("invalid x range {lo}:{hi}")));
        }
        Ok(linspace(lo, hi, req.samples))
    };
    let need_n = || {
        req.n
            .ok_or_else(|| CliError::Usage("this system needs --n".into()))
    };
    let name = cfg.system.name();
    let table = match cfg.system.kind() {
        SystemKind::Box { length, .. } => {
            let n = need_n()?;
            let w = if t == 0.0 {
                BoxWave::ground(&cfg.system, n)?
            } else {
                BoxWave::new(&cfg.system, n, &tp)?
            };
            let xs = grid((0.0, *length))?;
            let psi = xs
                .iter()
                .map(|&x| {
                    if req.anywhere {
                        Ok(box_psi_anywhere(&w, x))
                    } else {
                        box_psi(&w, x)
                    }
                })
                .collect::<thermoq::Result<Vec<_>>>()?;
            Table::new(format!("psi_{name}_n{n}"), vec![("x", xs), ("psi", psi)])
                .with_meta("n", n)
        }
        SystemKind::Oscillator { .. } => {
            let n = need_n()?;
            let w = if t == 0.0 {
                OscWave::ground(&cfg.system, n)?
            } else {
                OscWave::new(&cfg.system, n, &tp)?
            };
            let xs = grid((-6.0 * w.x0, 6.0 * w.x0))?;
            let psi = xs.iter().map(|&x| osc_psi(&w, x)).collect();
            Table::new(format!("psi_{name}_n{n}"), vec![("x", xs), ("psi", psi)])
                .with_meta("n", n)
                .with_meta("x0", w.x0)
        }
        SystemKind::Free { .. } => {
            let k = req
                .k
                .ok_or_else(|| CliError::Usage("the free particle needs --k".into()))?;
            let w = FreeWave::new(&cfg.system, k, &tp, req.direction)?;
            let xs = grid((0.0, 10.0))?;
            let (re, im) = xs.iter().map(|&x| free_psi(&w, x)).map(|z| (z.re, z.im)).unzip();
            Table::new(format!("psi_{name}_k{k}"), vec![("x", xs), ("re", re), ("im", im)])
                .with_meta("k", k)
                .with_meta("k_T", w.k_t)
        }
    };
    Ok(table.with_meta("system", name).with_meta("T", t))
}

/// Row kind in the validity table.
pub const KIND_INTERVAL: f64 = 0.0;
pub const KIND_CROSSING: f64 = 1.0;

/// Validity intervals (kind 0, [lo, hi]) and zero crossings (kind 1,
/// lo = hi = T*) over the span of the temperature grid.
pub fn cmd_validity(cfg: &RunConfig) -> Result<Table, CliError> {
    let lo = cfg.temperatures[0];
    let hi = *cfg.temperatures.last().unwrap_or(&lo);
    if !(lo > 0.0 && hi > lo) {
        return Err(CliError::Usage(
            "validity needs a temperature range with 0 < lo < hi".into(),
        ));
    }
    let report = validity_range(&cfg.system, lo, hi, cfg.threshold, cfg.temperatures.len())?;
    let mut kind = Vec::new();
    let mut los = Vec::new();
    let mut his = Vec::new();
    for (a, b) in &report.intervals {
        kind.push(KIND_INTERVAL);
        los.push(*a);
        his.push(*b);
    }
    for c in &report.crossings {
        kind.push(KIND_CROSSING);
        los.push(*c);
        his.push(*c);
    }
    Ok(Table::new(
        format!("validity_{}", cfg.system.name()),
        vec![("kind", kind), ("lo", los), ("hi", his)],
    )
    .with_meta("system", cfg.system.name())
    .with_meta("threshold", report.threshold)
    .with_meta("kind", "0 = validity interval, 1 = zero crossing"))
}

/// Overlap integrals ⟨m|n⟩ for every ordered pair of the selected modes at
/// one temperature.
pub fn cmd_overlap(cfg: &RunConfig) -> Result<Table, CliError> {
    let t = cfg.single_temperature()?;
    let tp = cfg.thermal(t)?;
    let modes = cfg.modes_or_all()?;
    let mut ms = Vec::new();
    let mut ns = Vec::new();
    let mut values = Vec::new();
    for &m in &modes {
        for &n in &modes {
            let v = match cfg.system.kind() {
                SystemKind::Box { .. } => {
                    box_overlap(&cfg.system, m, n, &tp, cfg.convention, &cfg.quadrature)?
                }
                SystemKind::Oscillator { .. } => {
                    osc_overlap(&cfg.system, m, n, &tp, cfg.convention, &cfg.quadrature)?
                }
                SystemKind::Free { .. } => {
                    return Err(CliError::Usage(
                        "overlaps are defined for the box and the oscillator".into(),
                    ))
                }
            };
            ms.push(f64::from(m));
            ns.push(f64::from(n));
            values.push(v);
        }
    }
    Ok(Table::new(
        format!("overlap_{}", cfg.system.name()),
        vec![("m", ms), ("n", ns), ("overlap", values)],
    )
    .with_meta("system", cfg.system.name())
    .with_meta("T", t)
    .with_meta("alpha_mode", format!("{:?}", cfg.convention.mode))
    .with_meta("domain", format!("{:?}", cfg.convention.domain)))
}

/// Runs the invariant suite; the caller maps any failure to exit status 1.
pub fn cmd_verify(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>, CliError> {
    Ok(run_verification(opts)?)
}

/// Text report of a verification run, one line per check.
pub fn verify_report(outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    for c in outcomes {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status} {}: {}\n", c.name, c.detail));
    }
    let failed = outcomes.iter().filter(|c| !c.passed).count();
    out.push_str(&format!(
        "{} checks, {} passed, {} failed\n",
        outcomes.len(),
        outcomes.len() - failed,
        failed
    ));
    out
}

/// Writes one file `<label>.<ext>` per curve of the panel into `dir`,
/// creating it if needed, and returns the paths in curve order.
pub fn cmd_figure(
    fig: FigureId,
    params: &FigureParams,
    dir: &Path,
    format: Format,
) -> Result<Vec<PathBuf>, CliError> {
    let tables = figure_curves(fig, params)?;
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(tables.len());
    for t in tables {
        let table = Table::from(t);
        let path = dir.join(format!("{}.{}", table.label, format.extension()));
        write_atomic(&path, &table.render(format)?)?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box3(t: &[f64]) -> RunConfig {
        RunConfig::new(SystemSpec::particle_in_box(3.0).unwrap(), t.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        let spec = SystemSpec::particle_in_box(3.0).unwrap();
        assert!(RunConfig::new(spec, vec![]).is_err());
        assert!(RunConfig::new(spec, vec![2.0, 1.0]).is_err());
        assert!(RunConfig::new(spec, vec![-1.0]).is_err());
    }

    #[test]
    fn spectrum_row_matches_oracle() {
        let mut cfg = box3(&[2.0]);
        cfg.modes = Some(vec![1]);
        let t = cmd_spectrum(&cfg, &[]).unwrap();
        assert!((t.column("e0").unwrap()[0] - 0.548311355616075).abs() < 1e-12);
        assert!((t.column("ep").unwrap()[0] - 0.352219189299113).abs() < 1e-12);
        assert!((t.column("eT").unwrap()[0] - 0.900530544915188).abs() < 1e-12);
    }

    #[test]
    fn spectrum_shares_one_correction() {
        let mut cfg = RunConfig::new(SystemSpec::oscillator(1.0).unwrap(), vec![1.1]).unwrap();
        cfg.modes = Some(vec![0, 1, 2]);
        let t = cmd_spectrum(&cfg, &[]).unwrap();
        let ep = t.column("ep").unwrap();
        assert_eq!(ep.len(), 3);
        assert!(ep.iter().all(|&e| e == ep[0]));
    }

    #[test]
    fn free_wave_at_zero_temperature_is_plane_wave() {
        let cfg = RunConfig::new(SystemSpec::free(1.0).unwrap(), vec![0.0]).unwrap();
        let req = WaveRequest {
            n: None,
            k: Some(1.0),
            direction: Direction::Right,
            x_range: None,
            samples: 50,
            anywhere: false,
        };
        let t = cmd_wavefunction(&cfg, &req).unwrap();
        for ((x, re), im) in t.column("x").unwrap().iter().zip(t.column("re").unwrap()).zip(t.column("im").unwrap()) {
            assert!((re - x.cos()).abs() < 1e-15 && (im - x.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_oscillator_mode_vanishes_at_origin() {
        let cfg = RunConfig::new(SystemSpec::oscillator(1.0).unwrap(), vec![1.1]).unwrap();
        let req = WaveRequest {
            n: Some(1),
            k: None,
            direction: Direction::Right,
            x_range: Some((-1.0, 1.0)),
            samples: 3,
            anywhere: false,
        };
        let t = cmd_wavefunction(&cfg, &req).unwrap();
        assert_eq!(t.column("psi").unwrap()[1], 0.0);
    }

    #[test]
    fn validity_finds_box_crossing() {
        let grid = linspace(0.5, 5.0, 200);
        let t = cmd_validity(&box3(&grid)).unwrap();
        let kinds = t.column("kind").unwrap();
        let lo = t.column("lo").unwrap();
        let crossings: Vec<f64> = kinds
            .iter()
            .zip(lo)
            .filter(|(k, _)| **k == KIND_CROSSING)
            .map(|(_, v)| *v)
            .collect();
        assert_eq!(crossings.len(), 1);
        assert!((crossings[0] - 1.5707963267915945).abs() < 1e-9);
    }
}
