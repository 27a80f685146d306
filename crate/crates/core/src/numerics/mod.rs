//! Numerical kernels shared by the physics modules.

mod quadrature;
mod root;
mod special;

pub use quadrature::{integrate, integrate_line, integrate_scaled, QuadratureSettings};
pub use root::{find_root, Bracket};
pub use special::{hermite, ln_factorial, log_sum_exp};

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}
