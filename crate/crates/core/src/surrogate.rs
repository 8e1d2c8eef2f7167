//! Regularized least-squares surrogate on a grid.

use serde::{Deserialize, Serialize};

use crate::banded::{build_smoothing_matrix, SymmetricPentadiagonal};
use crate::error::{Error, Result};

/// The smoothing matrix together with the sample mask and sampled values.
#[derive(Debug, Clone)]
pub struct SmoothingSystem {
    alpha: f64,
    mu: f64,
    bands: SymmetricPentadiagonal,
    mask: Vec<bool>,
    values: Vec<f64>,
}

impl SmoothingSystem {
    pub fn new(n: usize, alpha: f64, mu: f64) -> Result<Self> {
        let bands = build_smoothing_matrix(n, alpha, mu)?;
        Ok(Self {
            alpha,
            mu,
            bands,
            mask: vec![false; n],
            values: vec![0.0; n],
        })
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn matrix(&self) -> &SymmetricPentadiagonal {
        &self.bands
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Sampled values; entries at unsampled positions are 0 and never read.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sample_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Record the true value at 1-based grid index `i`.
    pub fn set_sample(&mut self, i: usize, value: f64) -> Result<()> {
        let n = self.len();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sample value at index {i} is not finite"
            )));
        }
        self.mask[i - 1] = true;
        self.values[i - 1] = value;
        Ok(())
    }

    pub fn clear_sample(&mut self, i: usize) {
        if (1..=self.len()).contains(&i) {
            self.mask[i - 1] = false;
            self.values[i - 1] = 0.0;
        }
    }

    fn check_sample_count(&self) -> Result<()> {
        let k = self.sample_count();
        let n = self.len();
        let needed = if self.alpha > 0.0 {
            1
        } else if self.mu > 0.0 {
            2
        } else {
            n
        };
        if k < needed {
            return Err(Error::Singular(format!(
                "{k} samples on {n} points with alpha={}, mu={} (need at least {needed})",
                self.alpha, self.mu
            )));
        }
        Ok(())
    }

    /// Solve `(A + diag(s)) f = diag(s) f_true`.
    pub fn solve(&self) -> Result<Vec<f64>> {
        self.check_sample_count()?;
        let shift: Vec<f64> = self.mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
        let rhs: Vec<f64> = self
            .mask
            .iter()
            .zip(&self.values)
            .map(|(&m, &v)| if m { v } else { 0.0 })
            .collect();
        let factors = self.bands.factor_shifted(&shift)?;
        let base = self.baseline();
        let rhs: Vec<f64> = rhs
            .iter()
            .zip(&self.mask)
            .zip(&base)
            .map(|((&r, &m), &b)| if m { r - b } else { 0.0 })
            .collect();
        let mut f = factors.solve(&rhs);
        for (fi, b) in f.iter_mut().zip(base) {
            *fi += b;
        }
        Ok(f)
    }

    /// A function in the null space of the smoothing matrix that roughly
    /// follows the data. Solving for the deviation from it keeps rounding
    /// proportional to the non-affine part of the data, which matters when
    /// the fit extrapolates far from a few close samples.
    fn baseline(&self) -> Vec<f64> {
        let n = self.len();
        let sampled = || self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(k, _)| k);
        let (Some(first), Some(last)) = (
            self.mask.iter().position(|&m| m),
            self.mask.iter().rposition(|&m| m),
        ) else {
            return vec![0.0; n];
        };
        if self.alpha > 0.0 || first == last {
            let (sum, count) = sampled().fold((0.0, 0usize), |(s, c), k| (s + self.values[k], c + 1));
            return vec![sum / count as f64; n];
        }
        let (y0, y1) = (self.values[first], self.values[last]);
        let span = (last - first) as f64;
        (0..n)
            .map(|k| {
                let t = (k as f64 - first as f64) / span;
                y0 + t * (y1 - y0)
            })
            .collect()
    }

    /// `(A + diag(s)) f - diag(s) f_true`, the gradient of the fit objective up to a factor 2.
    pub fn residual(&self, f: &[f64]) -> Vec<f64> {
        let mut r = self.bands.mul_vec(f);
        for (i, ri) in r.iter_mut().enumerate() {
            if self.mask[i] {
                *ri += f[i] - self.values[i];
            }
        }
        r
    }

    /// `Σ s_i (f_i - f_true_i)²`.
    pub fn data_misfit(&self, f: &[f64]) -> f64 {
        self.mask
            .iter()
            .zip(f.iter().zip(&self.values))
            .filter(|(&m, _)| m)
            .map(|(_, (a, b))| (a - b) * (a - b))
            .sum()
    }
}

/// A surrogate vector with cached summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    values: Vec<f64>,
    iteration: usize,
    samples_used: usize,
    argmin: usize,
    argmax: usize,
}

impl Fit {
    pub fn from_values(values: Vec<f64>, iteration: usize, samples_used: usize) -> Self {
        assert!(!values.is_empty(), "a fit needs at least one value");
        let mut argmin = 0;
        let mut argmax = 0;
        for (i, &v) in values.iter().enumerate() {
            if v < values[argmin] {
                argmin = i;
            }
            if v > values[argmax] {
                argmax = i;
            }
        }
        Self {
            values,
            iteration,
            samples_used,
            argmin: argmin + 1,
            argmax: argmax + 1,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_values(vec![0.0; n], 0, 0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at 1-based index `i`.
    pub fn at(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn samples_used(&self) -> usize {
        self.samples_used
    }

    pub fn argmin(&self) -> usize {
        self.argmin
    }

    pub fn argmax(&self) -> usize {
        self.argmax
    }

    pub fn min(&self) -> f64 {
        self.at(self.argmin)
    }

    pub fn max(&self) -> f64 {
        self.at(self.argmax)
    }

    pub fn range(&self) -> f64 {
        self.max() - self.min()
    }

    /// Half the range.
    pub fn mid(&self) -> f64 {
        0.5 * self.range()
    }
}

pub fn fit_surrogate(system: &SmoothingSystem, iteration: usize) -> Result<Fit> {
    let values = system.solve()?;
    Ok(Fit::from_values(values, iteration, system.sample_count()))
}

/// Mean absolute difference between two fits.
pub fn fit_change_error(previous: &Fit, current: &Fit) -> Result<f64> {
    if previous.len() != current.len() {
        return Err(Error::LengthMismatch {
            left: previous.len(),
            right: current.len(),
        });
    }
    let total: f64 = previous
        .values()
        .iter()
        .zip(current.values())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(total / current.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn system(n: usize, alpha: f64, mu: f64, samples: &[(usize, f64)]) -> SmoothingSystem {
        let mut s = SmoothingSystem::new(n, alpha, mu).unwrap();
        for &(i, v) in samples {
            s.set_sample(i, v).unwrap();
        }
        s
    }

    #[test]
    fn constant_data_gives_constant_fit() {
        let fit = fit_surrogate(&system(5, 0.0, 0.01, &[(1, 2.0), (5, 2.0)]), 1).unwrap();
        for &v in fit.values() {
            assert_abs_diff_eq!(v, 2.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(fit.range(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn affine_data_is_reproduced() {
        let fit = fit_surrogate(&system(5, 0.0, 0.01, &[(1, 0.0), (5, 4.0)]), 1).unwrap();
        for (i, &v) in fit.values().iter().enumerate() {
            assert_abs_diff_eq!(v, i as f64, epsilon = 1e-12);
        }
        assert_eq!(fit.argmin(), 1);
        assert_eq!(fit.argmax(), 5);
        assert_abs_diff_eq!(fit.mid(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn sample_count_preconditions() {
        let one = system(6, 0.0, 1.0, &[(3, 1.0)]);
        assert!(matches!(fit_surrogate(&one, 0), Err(Error::Singular(_))));

        let one_alpha = system(6, 0.5, 1.0, &[(3, 1.0)]);
        let fit = fit_surrogate(&one_alpha, 0).unwrap();
        assert!(fit.values().iter().all(|v| (v - 1.0).abs() < 1e-12));

        let partial = system(4, 0.0, 0.0, &[(1, 1.0), (2, 1.0)]);
        assert!(fit_surrogate(&partial, 0).is_err());
        let full = system(3, 0.0, 0.0, &[(1, 1.0), (2, 5.0), (3, -1.0)]);
        assert_eq!(fit_surrogate(&full, 0).unwrap().values(), &[1.0, 5.0, -1.0]);
    }

    #[test]
    fn set_sample_validates() {
        let mut s = SmoothingSystem::new(5, 0.0, 1.0).unwrap();
        assert!(matches!(
            s.set_sample(0, 1.0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(s.set_sample(6, 1.0).is_err());
        assert!(s.set_sample(2, f64::NAN).is_err());
        s.set_sample(2, 3.0).unwrap();
        assert_eq!(s.sample_count(), 1);
        s.clear_sample(2);
        assert_eq!(s.sample_count(), 0);
    }

    #[test]
    fn residual_vanishes_at_solution() {
        let s = system(
            40,
            0.0,
            0.01,
            &[(1, 0.3), (9, -1.0), (20, 2.0), (33, 0.5), (40, 1.0)],
        );
        let f = s.solve().unwrap();
        for r in s.residual(&f) {
            assert!(r.abs() < 1e-10);
        }
    }

    #[test]
    fn change_error_examples() {
        let a = Fit::from_values(vec![1.0, 2.0, 3.0], 0, 0);
        assert_eq!(fit_change_error(&a, &a).unwrap(), 0.0);
        let ones = Fit::from_values(vec![1.0; 4], 1, 0);
        assert_eq!(fit_change_error(&Fit::zeros(4), &ones).unwrap(), 1.0);
        let b = Fit::from_values(vec![3.0, -1.0], 1, 0);
        assert_eq!(fit_change_error(&Fit::zeros(2), &b).unwrap(), 2.0);
        assert!(matches!(
            fit_change_error(&a, &b),
            Err(Error::LengthMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn argmin_prefers_first_on_ties() {
        let f = Fit::from_values(vec![1.0, 0.0, 0.0, 2.0, 2.0], 0, 0);
        assert_eq!(f.argmin(), 2);
        assert_eq!(f.argmax(), 4);
    }
}
