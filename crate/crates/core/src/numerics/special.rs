//! Physicists' Hermite polynomials and the numerically stable log-sum-exp.

use crate::error::{domain, Error, Result};

/// H_n(y) by the recurrence H_{k+1} = 2y·H_k − 2k·H_{k−1}.
///
/// Accurate for n ≤ 50; larger degrees overflow for moderate |y|.
pub fn hermite(n: u32, y: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * y;
    for k in 1..n {
        let next = 2.0 * y * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

/// ln Σ exp(vᵢ), shifted by the maximum so that no term overflows.
pub fn log_sum_exp(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("log_sum_exp input"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(domain("log_sum_exp input contains NaN"));
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return Ok(max);
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    Ok(max + sum.ln())
}
