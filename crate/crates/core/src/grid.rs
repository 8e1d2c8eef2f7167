//! Equally spaced points on a line segment in `D` dimensions.
//!
//! Indices are 1-based: `point(1)` is the segment start and `point(n)` its
//! end. Both endpoints are returned bit-for-bit as given.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_start: Vec<f64>,
    x_end: Vec<f64>,
    n_points: usize,
}

impl Grid {
    pub fn new(x_start: Vec<f64>, x_end: Vec<f64>, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::TooFewPoints(n_points));
        }
        if x_start.len() != x_end.len() || x_start.is_empty() {
            return Err(Error::DimensionMismatch {
                start: x_start.len(),
                end: x_end.len(),
            });
        }
        if x_start.iter().chain(&x_end).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("segment endpoints must be finite".into()));
        }
        if x_start == x_end {
            return Err(Error::CoincidentEndpoints);
        }
        Ok(Self {
            x_start,
            x_end,
            n_points,
        })
    }

    /// One-dimensional grid over `[lower, upper]`.
    pub fn interval(lower: f64, upper: f64, n_points: usize) -> Result<Self> {
        Self::new(vec![lower], vec![upper], n_points)
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.x_start.len()
    }

    pub fn x_start(&self) -> &[f64] {
        &self.x_start
    }

    pub fn x_end(&self) -> &[f64] {
        &self.x_end
    }

    /// Parametric coordinate of index `i` in `[0, 1]`.
    pub fn param(&self, i: usize) -> f64 {
        assert!(
            (1..=self.n_points).contains(&i),
            "grid index {i} outside 1..={}",
            self.n_points
        );
        if i == self.n_points {
            1.0
        } else {
            (i - 1) as f64 / (self.n_points - 1) as f64
        }
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        if i == 1 {
            return self.x_start.clone();
        }
        if i == self.n_points {
            return self.x_end.clone();
        }
        let t = self.param(i);
        self.x_start
            .iter()
            .zip(&self.x_end)
            .map(|(a, b)| a + t * (b - a))
            .collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (1..=self.n_points).map(|i| self.point(i))
    }

    /// Euclidean distance between neighbouring grid points.
    pub fn spacing(&self) -> f64 {
        let len = self
            .x_start
            .iter()
            .zip(&self.x_end)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt();
        len / (self.n_points - 1) as f64
    }
}

pub fn build_grid(x_start: Vec<f64>, x_end: Vec<f64>, n_points: usize) -> Result<Grid> {
    Grid::new(x_start, x_end, n_points)
}
