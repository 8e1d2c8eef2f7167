//! Solve test, total absolute scaled error and suite aggregates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::driver::{initial_sample_indices, RunTrace};
use crate::error::{Error, Result};
use crate::surrogate::{fit_surrogate, Fit, SmoothingSystem};

/// `0.01 · max(1, |f_star|)`.
pub fn solve_tolerance(f_star: f64) -> f64 {
    0.01 * f_star.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    /// Minimum of the final fit.
    pub fit_min: f64,
    /// Final fit at the best evaluated sample.
    pub fit_at_best: f64,
    /// Best evaluated true value.
    pub best_value: f64,
    /// Either the fit minimum or the fit at the best sample is within tolerance.
    pub solved: bool,
    /// The best evaluated true value is within tolerance.
    pub solved_by_value: bool,
}

/// `|min f̂ - f*| <= tol  or  |f̂(x_best) - f*| <= tol`.
pub fn is_solved(final_fit: &Fit, best_index: usize, f_star: f64) -> bool {
    let tol = solve_tolerance(f_star);
    (final_fit.min() - f_star).abs() <= tol || (final_fit.at(best_index) - f_star).abs() <= tol
}

pub fn solve_report(trace: &RunTrace, f_star: f64) -> Option<SolveReport> {
    let best = trace.best()?;
    let fit = &trace.final_fit;
    Some(SolveReport {
        fit_min: fit.min(),
        fit_at_best: fit.at(best.index),
        best_value: best.value,
        solved: is_solved(fit, best.index, f_star),
        solved_by_value: (best.value - f_star).abs() <= solve_tolerance(f_star),
    })
}

/// `Σ|m - truth| / Σ|reference - truth|`.
pub fn tase(fit_m: &[f64], fit_ref: &[f64], truth: &[f64]) -> Result<f64> {
    if fit_m.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: fit_m.len(),
            right: truth.len(),
        });
    }
    if fit_ref.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: fit_ref.len(),
            right: truth.len(),
        });
    }
    let abs_err = |f: &[f64]| -> f64 { f.iter().zip(truth).map(|(a, b)| (a - b).abs()).sum() };
    let denominator = abs_err(fit_ref);
    if denominator == 0.0 {
        return Err(Error::DegenerateReference);
    }
    Ok(abs_err(fit_m) / denominator)
}

/// The fit through the evenly spaced initial samples of `truth`.
pub fn reference_fit(truth: &[f64], initial_count: usize, alpha: f64, mu: f64) -> Result<Fit> {
    let mut system = SmoothingSystem::new(truth.len(), alpha, mu)?;
    for i in initial_sample_indices(truth.len(), initial_count)? {
        system.set_sample(i, truth[i - 1])?;
    }
    fit_surrogate(&system, 0)
}

/// Arithmetic mean; `None` for an empty slice.
pub fn mean_tase(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Fraction of solved instances per `(variant, budget)`, keyed by variant.
pub fn fraction_solved_curve<'a, I>(results: I, budgets: &[usize]) -> BTreeMap<String, Vec<(usize, f64)>>
where
    I: IntoIterator<Item = (&'a str, usize, bool)>,
{
    let mut tally: BTreeMap<String, BTreeMap<usize, (usize, usize)>> = BTreeMap::new();
    for (variant, budget, solved) in results {
        let slot = tally
            .entry(variant.to_string())
            .or_default()
            .entry(budget)
            .or_insert((0, 0));
        slot.1 += 1;
        if solved {
            slot.0 += 1;
        }
    }
    tally
        .into_iter()
        .map(|(variant, per_budget)| {
            let row = budgets
                .iter()
                .filter_map(|b| {
                    per_budget
                        .get(b)
                        .map(|&(s, total)| (*b, s as f64 / total as f64))
                })
                .collect();
            (variant, row)
        })
        .collect()
}
