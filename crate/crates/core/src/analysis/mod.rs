//! Residual probabilities, overlap integrals, the verification suite and
//! figure-curve generation.

pub mod figures;
pub mod overlap;
pub mod verify;

pub use figures::{figure_curves, Column, CurveTable, FigureId, FigureParams};
pub use overlap::{
    appendix_d_factor, box_overlap, box_overlap_alpha, osc_overlap, osc_overlap_expanded,
    osc_overlap_waves, residual_closed, residual_physical_exact, residual_quadrature,
    residual_quadrature_alpha, residual_symmetric_exact, AlphaMode, OverlapConvention,
    OverlapDomain,
};
pub use verify::{run_verification, CheckOutcome, VerifyOptions, CHECK_NAMES};
