//! Sampled curves for each figure panel.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::overlap::residual_closed;
use crate::error::{domain, Error, Result};
use crate::model::{SystemSpec, ThermalPoint};
use crate::numerics::{linspace, Bracket};
use crate::perturbation::{ep_for, zero_crossing};
use crate::wavefunctions::{box_psi, free_psi, osc_psi, BoxWave, Direction, FreeWave, OscWave};

pub const DEFAULT_SAMPLES: usize = 400;

/// Upper edge of the band the published residual plot claims to stay in.
pub const CLAIMED_RESIDUAL_BAND: f64 = 0.009;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Named, equal-length columns; the first column is the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub label: String,
    pub columns: Vec<Column>,
    pub meta: BTreeMap<String, String>,
}

impl CurveTable {
    pub fn new(
        label: impl Into<String>,
        columns: Vec<(&str, Vec<f64>)>,
        meta: BTreeMap<String, String>,
    ) -> Result<Self> {
        let table = Self {
            label: label.into(),
            columns: columns
                .into_iter()
                .map(|(name, values)| Column {
                    name: name.to_string(),
                    values,
                })
                .collect(),
            meta,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self
            .columns
            .first()
            .ok_or_else(|| domain("curve table needs at least one column"))?;
        let len = grid.values.len();
        if len < 2 {
            return Err(domain(format!("curve table {:?} has fewer than 2 rows", self.label)));
        }
        if let Some(c) = self.columns.iter().find(|c| c.values.len() != len) {
            return Err(domain(format!(
                "column {:?} has {} rows, grid has {len}",
                c.name,
                c.values.len()
            )));
        }
        if grid.values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain(format!(
                "grid column {:?} is not strictly increasing",
                grid.name
            )));
        }
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn grid(&self) -> &[f64] {
        &self.columns[0].values
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FigureId {
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
    Fig5a,
    Fig5b,
    Fig6,
    Fig7,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig6,
        FigureId::Fig7,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig2a => "2a",
            FigureId::Fig2b => "2b",
            FigureId::Fig3 => "3",
            FigureId::Fig4 => "4",
            FigureId::Fig5a => "5a",
            FigureId::Fig5b => "5b",
            FigureId::Fig6 => "6",
            FigureId::Fig7 => "7",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().trim_start_matches("fig");
        FigureId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(key))
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// Free parameters of the panels. `None` selects the panel's default;
/// only the oscillator frequency of figure 7 has none.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FigureParams {
    pub samples: Option<usize>,
    /// Box width for 2a.
    pub length: Option<f64>,
    /// Box widths for 2b.
    pub lengths: Option<Vec<f64>>,
    /// Oscillator frequencies for 6.
    pub omegas: Option<Vec<f64>>,
    /// Oscillator frequency for 7.
    pub omega: Option<f64>,
    pub modes: Option<Vec<u32>>,
    pub temperatures: Option<Vec<f64>>,
    pub wavenumbers: Option<Vec<f64>>,
    pub mass: Option<f64>,
    /// Temperature axis for 2b, 4 and 6.
    pub t_range: Option<(f64, f64)>,
    /// Position axis for 5 and the scaled axis x/x₀ for 7.
    pub x_range: Option<(f64, f64)>,
    pub alpha_range: Option<(f64, f64)>,
}

impl FigureParams {
    fn samples(&self) -> Result<usize> {
        let n = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if n < 2 {
            return Err(domain("figures need at least 2 samples per curve"));
        }
        Ok(n)
    }

    fn grid(&self, default: (f64, f64), explicit: Option<(f64, f64)>) -> Result<Vec<f64>> {
        let (lo, hi) = explicit.unwrap_or(default);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(domain(format!("invalid axis range [{lo}, {hi}]")));
        }
        Ok(linspace(lo, hi, self.samples()?))
    }
}

fn meta(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn ep_curve(spec: &SystemSpec, grid: &[f64]) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&t| Ok(ep_for(spec, &ThermalPoint::new(t, spec.units())?)?.ep))
        .collect()
}

/// Sign changes of a sampled E_p curve, refined by root finding.
fn crossings(spec: &SystemSpec, grid: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..grid.len() - 1 {
        if values[i] == 0.0 {
            out.push(grid[i]);
        } else if values[i + 1] != 0.0 && values[i].signum() != values[i + 1].signum() {
            out.push(zero_crossing(spec, Bracket::new(grid[i], grid[i + 1])?)?);
        }
    }
    Ok(out)
}

/// Sampled curves of one figure panel, in a fixed order.
pub fn figure_curves(fig: FigureId, params: &FigureParams) -> Result<Vec<CurveTable>> {
    let mass = params.mass.unwrap_or(1.0);
    match fig {
        FigureId::Fig2a => {
            let length = params.length.unwrap_or(3.0);
            let spec = SystemSpec::particle_in_box(length)?.with_mass(mass)?;
            let temps = params.temperatures.clone().unwrap_or_else(|| vec![1.57, 2.0]);
            let modes = params.modes.clone().unwrap_or_else(|| vec![1, 2]);
            let xs = linspace(0.0, 1.0, params.samples()?);
            let mut out = Vec::new();
            for &t in &temps {
                let tp = ThermalPoint::new(t, spec.units())?;
                for &n in &modes {
                    let w = BoxWave::new(&spec, n, &tp)?;
                    let psi = xs
                        .iter()
                        .map(|&s| box_psi(&w, s * length))
                        .collect::<Result<Vec<_>>>()?;
                    out.push(CurveTable::new(
                        format!("fig2a_n{n}_T{t}"),
                        vec![("x_s", xs.clone()), ("psi", psi)],
                        meta(&[
                            ("figure", "2a".into()),
                            ("system", "box".into()),
                            ("L", length.to_string()),
                            ("m", mass.to_string()),
                            ("n", n.to_string()),
                            ("T", t.to_string()),
                            ("ep", w.perturbation.ep.to_string()),
                        ]),
                    )?);
                }
            }
            Ok(out)
        }
        FigureId::Fig2b => {
            let lengths = params
                .lengths
                .clone()
                .unwrap_or_else(|| vec![1.0, 2.0, 3.0, 4.0, 5.0]);
            let grid = params.grid((0.05, 15.0), params.t_range)?;
            lengths
                .iter()
                .map(|&l| {
                    let spec = SystemSpec::particle_in_box(l)?.with_mass(mass)?;
                    let ep = ep_curve(&spec, &grid)?;
                    let zeros = crossings(&spec, &grid, &ep)?;
                    CurveTable::new(
                        format!("fig2b_L{l}"),
                        vec![("T", grid.clone()), ("ep", ep)],
                        meta(&[
                            ("figure", "2b".into()),
                            ("system", "box".into()),
                            ("L", l.to_string()),
                            ("m", mass.to_string()),
                            ("zero_crossings", join(&zeros)),
                        ]),
                    )
                })
                .collect()
        }
        FigureId::Fig3 => {
            let modes = params.modes.clone().unwrap_or_else(|| vec![1, 2, 3, 4]);
            let grid = params.grid((0.0, 4.0), params.alpha_range)?;
            modes
                .iter()
                .map(|&n| {
                    let r = grid
                        .iter()
                        .map(|&a| residual_closed(n, a))
                        .collect::<Result<Vec<_>>>()?;
                    let max_abs = r.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                    CurveTable::new(
                        format!("fig3_n{n}"),
                        vec![("alpha", grid.clone()), ("residual", r)],
                        meta(&[
                            ("figure", "3".into()),
                            ("n", n.to_string()),
                            ("max_abs_residual", max_abs.to_string()),
                            ("claimed_band", CLAIMED_RESIDUAL_BAND.to_string()),
                            (
                                "exceeds_claimed_band",
                                (max_abs > CLAIMED_RESIDUAL_BAND).to_string(),
                            ),
                        ]),
                    )
                })
                .collect()
        }
        FigureId::Fig4 => {
            let spec = SystemSpec::free(mass)?;
            let grid = params.grid((1e-3, 0.5), params.t_range)?;
            let ep = ep_curve(&spec, &grid)?;
            let zeros = crossings(&spec, &grid, &ep)?;
            Ok(vec![CurveTable::new(
                "fig4",
                vec![("T", grid), ("ep", ep)],
                meta(&[
                    ("figure", "4".into()),
                    ("system", "free".into()),
                    ("m", mass.to_string()),
                    ("analytic_zero", (1.0 / (2.0 * PI * mass)).to_string()),
                    ("zero_crossings", join(&zeros)),
                ]),
            )?])
        }
        FigureId::Fig5a | FigureId::Fig5b => {
            let spec = SystemSpec::free(mass)?;
            let ks = params.wavenumbers.clone().unwrap_or_else(|| vec![1.0, 2.0]);
            let temps = params.temperatures.clone().unwrap_or_else(|| vec![0.0, 0.5]);
            let grid = params.grid((0.0, 10.0), params.x_range)?;
            let (panel, part) = if fig == FigureId::Fig5a {
                ("5a", "re")
            } else {
                ("5b", "im")
            };
            let mut out = Vec::new();
            for &t in &temps {
                let tp = ThermalPoint::new(t, spec.units())?;
                for &k in &ks {
                    let w = FreeWave::new(&spec, k, &tp, Direction::Right)?;
                    let values = grid
                        .iter()
                        .map(|&x| {
                            let z = free_psi(&w, x);
                            if part == "re" {
                                z.re
                            } else {
                                z.im
                            }
                        })
                        .collect();
                    out.push(CurveTable::new(
                        format!("fig{panel}_k{k}_T{t}"),
                        vec![("x", grid.clone()), (part, values)],
                        meta(&[
                            ("figure", panel.into()),
                            ("system", "free".into()),
                            ("k", k.to_string()),
                            ("k_T", w.k_t.to_string()),
                            ("T", t.to_string()),
                            ("m", mass.to_string()),
                        ]),
                    )?);
                }
            }
            Ok(out)
        }
        FigureId::Fig6 => {
            let omegas = params
                .omegas
                .clone()
                .unwrap_or_else(|| vec![0.5, 1.0, 2.0, 4.0, 8.0]);
            let grid = params.grid((0.05, 10.0), params.t_range)?;
            omegas
                .iter()
                .map(|&w| {
                    let spec = SystemSpec::oscillator(w)?.with_mass(mass)?;
                    let ep = ep_curve(&spec, &grid)?;
                    let zeros = crossings(&spec, &grid, &ep)?;
                    CurveTable::new(
                        format!("fig6_omega{w}"),
                        vec![("T", grid.clone()), ("ep", ep)],
                        meta(&[
                            ("figure", "6".into()),
                            ("system", "oscillator".into()),
                            ("omega", w.to_string()),
                            ("m", mass.to_string()),
                            ("zero_crossings", join(&zeros)),
                        ]),
                    )
                })
                .collect()
        }
        FigureId::Fig7 => {
            let omega = params.omega.ok_or(Error::MissingParameter("omega"))?;
            let spec = SystemSpec::oscillator(omega)?.with_mass(mass)?;
            let temps = params.temperatures.clone().unwrap_or_else(|| vec![0.1, 0.2]);
            let modes = params.modes.clone().unwrap_or_else(|| (0..=5).collect());
            let x0 = OscWave::ground(&spec, 0)?.x0;
            let grid = params.grid((-6.0, 6.0), params.x_range)?;
            let mut out = Vec::new();
            for &t in &temps {
                let tp = ThermalPoint::new(t, spec.units())?;
                for &n in &modes {
                    let w = OscWave::new(&spec, n, &tp)?;
                    let psi = grid.iter().map(|&s| osc_psi(&w, s * x0)).collect();
                    out.push(CurveTable::new(
                        format!("fig7_n{n}_T{t}"),
                        vec![("x_s", grid.clone()), ("psi", psi)],
                        meta(&[
                            ("figure", "7".into()),
                            ("system", "oscillator".into()),
                            ("omega", omega.to_string()),
                            ("m", mass.to_string()),
                            ("n", n.to_string()),
                            ("T", t.to_string()),
                            ("ep", w.perturbation.ep.to_string()),
                            ("within_validity", w.perturbation.within_validity.to_string()),
                            ("Omega_n", w.omega_n.to_string()),
                            ("x0_nT", w.x0.to_string()),
                            ("x0", x0.to_string()),
                        ]),
                    )?);
                }
            }
            Ok(out)
        }
    }
}
