//! Symmetric pentadiagonal storage and an `LDLᵀ` solver for it.
//!
//! The smoothing operator `α·D1ᵀD1 + μ·D2ᵀD2` is assembled term by term from
//! the first- and second-difference stencils, so the corner rows come out of
//! the construction rather than being written down by hand.

use crate::error::{Error, Result};

/// Main diagonal plus the first two super-diagonals of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPentadiagonal {
    diag: Vec<f64>,
    off1: Vec<f64>,
    off2: Vec<f64>,
}

impl SymmetricPentadiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            diag: vec![0.0; n],
            off1: vec![0.0; n.saturating_sub(1)],
            off2: vec![0.0; n.saturating_sub(2)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off1(&self) -> &[f64] {
        &self.off1
    }

    pub fn off2(&self) -> &[f64] {
        &self.off2
    }

    /// Entry `(row, col)` with 0-based indices; zero outside the band.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        let (lo, hi) = if row <= col { (row, col) } else { (col, row) };
        match hi - lo {
            0 => self.diag[lo],
            1 => self.off1[lo],
            2 => self.off2[lo],
            _ => 0.0,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// `y = self · x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i + 1 < n {
                acc += self.off1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc += self.off2[i] * x[i + 2];
            }
            if i >= 1 {
                acc += self.off1[i - 1] * x[i - 1];
            }
            if i >= 2 {
                acc += self.off2[i - 2] * x[i - 2];
            }
            y[i] = acc;
        }
        y
    }

    /// `xᵀ · self · x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    fn add_first_difference(&mut self, weight: f64) {
        // B = [[1, -1], [-1, 1]] on every consecutive pair.
        for i in 0..self.len() - 1 {
            self.diag[i] += weight;
            self.diag[i + 1] += weight;
            self.off1[i] -= weight;
        }
    }

    fn add_second_difference(&mut self, weight: f64) {
        // H = [[1, -2, 1], [-2, 4, -2], [1, -2, 1]] on every consecutive triple.
        for c in 1..self.len() - 1 {
            let (l, r) = (c - 1, c + 1);
            self.diag[l] += weight;
            self.diag[c] += 4.0 * weight;
            self.diag[r] += weight;
            self.off1[l] -= 2.0 * weight;
            self.off1[c] -= 2.0 * weight;
            self.off2[l] += weight;
        }
    }

    /// Factor `self + diag(shift)` as `L·D·Lᵀ` with unit-lower `L` of bandwidth 2.
    pub fn factor_shifted(&self, shift: &[f64]) -> Result<BandedLdlt> {
        let n = self.len();
        if shift.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: shift.len(),
            });
        }
        let scale = self
            .diag
            .iter()
            .zip(shift)
            .map(|(d, s)| (d + s).abs())
            .fold(0.0_f64, f64::max);
        let tol = scale * 1e-13;

        let mut d = vec![0.0; n];
        let mut l1 = vec![0.0; n.saturating_sub(1)];
        let mut l2 = vec![0.0; n.saturating_sub(2)];
        for i in 0..n {
            let mut pivot = self.diag[i] + shift[i];
            if i >= 1 {
                pivot -= l1[i - 1] * l1[i - 1] * d[i - 1];
            }
            if i >= 2 {
                pivot -= l2[i - 2] * l2[i - 2] * d[i - 2];
            }
            if pivot.is_nan() || pivot <= tol {
                return Err(Error::NonPositivePivot { row: i + 1, pivot });
            }
            d[i] = pivot;
            if i + 1 < n {
                let mut a = self.off1[i];
                if i >= 1 {
                    a -= l2[i - 1] * l1[i - 1] * d[i - 1];
                }
                l1[i] = a / pivot;
            }
            if i + 2 < n {
                l2[i] = self.off2[i] / pivot;
            }
        }
        Ok(BandedLdlt { d, l1, l2 })
    }
}

/// `LDLᵀ` factors of a symmetric positive definite pentadiagonal matrix.
#[derive(Debug, Clone)]
pub struct BandedLdlt {
    d: Vec<f64>,
    l1: Vec<f64>,
    l2: Vec<f64>,
}

impl BandedLdlt {
    pub fn pivots(&self) -> &[f64] {
        &self.d
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        assert_eq!(rhs.len(), n);
        let mut x = rhs.to_vec();
        for i in 0..n {
            if i >= 1 {
                x[i] -= self.l1[i - 1] * x[i - 1];
            }
            if i >= 2 {
                x[i] -= self.l2[i - 2] * x[i - 2];
            }
        }
        for (xi, di) in x.iter_mut().zip(&self.d) {
            *xi /= di;
        }
        for i in (0..n).rev() {
            if i + 1 < n {
                x[i] -= self.l1[i] * x[i + 1];
            }
            if i + 2 < n {
                x[i] -= self.l2[i] * x[i + 2];
            }
        }
        x
    }
}

/// `A = alpha·D1ᵀD1 + mu·D2ᵀD2` for `n` grid points.
pub fn build_smoothing_matrix(n: usize, alpha: f64, mu: f64) -> Result<SymmetricPentadiagonal> {
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "mu must be finite and non-negative, got {mu}"
        )));
    }
    let mut a = SymmetricPentadiagonal::zeros(n);
    if alpha > 0.0 {
        a.add_first_difference(alpha);
    }
    if mu > 0.0 {
        a.add_second_difference(mu);
    }
    Ok(a)
}
