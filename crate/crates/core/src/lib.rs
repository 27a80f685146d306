//! Temperature-dependent corrections to weakly coupled model quantum systems.
//!
//! A system in weak thermal contact with a reservoir at temperature T picks
//! up the scalar correction E_p(T) = k_B·T·ln Tr e^{−βE(0)} on every level.
//! This crate evaluates that correction for a particle in a box, a free
//! particle and a harmonic oscillator, builds the corrected spectra and
//! wavefunctions, locates the temperatures where the correction vanishes,
//! and checks the accompanying closed-form identities against quadrature.
//!
//! ```
//! use thermoq::{ep_discrete, make_levels, SystemSpec, ThermalPoint};
//!
//! let spec = SystemSpec::particle_in_box(3.0).unwrap();
//! let levels = make_levels(&spec).unwrap();
//! let ep = ep_discrete(&levels, &ThermalPoint::hartree(1.57).unwrap()).unwrap();
//! assert!(ep.ep.abs() < 5e-3);
//! ```

pub mod analysis;
pub mod error;
pub mod model;
pub mod numerics;
pub mod perturbation;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use model::{
    level_energy, make_levels, LevelSet, SystemKind, SystemSpec, ThermalPoint, UnitsConfig,
    DEFAULT_N_STATES,
};
pub use numerics::{find_root, hermite, integrate, log_sum_exp, Bracket, QuadratureSettings};
pub use perturbation::{
    corrected_energy, ep_discrete, ep_for, ep_free, partition_trace, self_consistent_iterate,
    validity_range, zero_crossing, zero_temperature_limit, IterationTrace, PerturbationResult,
    ValidityReport, DEFAULT_I_MAX, DEFAULT_THRESHOLD,
};
pub use wavefunctions::{
    alpha, box_psi, box_psi_anywhere, free_k, free_k_approx, free_psi, osc_omega, osc_psi,
    BoxWave, Direction, FreeWave, OscWave,
};
