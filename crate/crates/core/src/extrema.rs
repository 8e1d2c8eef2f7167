//! Strict interior extrema of a fit, with value tolerances.

/// Relative tolerance applied to the fit range when none is given explicitly.
pub const DEFAULT_RELATIVE_DELTA: f64 = 1e-6;

/// 1-based indices of interior maxima and minima, each sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtremaSets {
    pub maxima: Vec<usize>,
    pub minima: Vec<usize>,
}

impl ExtremaSets {
    pub fn len(&self) -> usize {
        self.maxima.len() + self.minima.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maxima.is_empty() && self.minima.is_empty()
    }

    /// Union of both sets, ascending.
    pub fn all(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.maxima.iter().chain(&self.minima).copied().collect();
        v.sort_unstable();
        v
    }
}

pub fn detect_extrema(values: &[f64], delta_min: f64, delta_max: f64) -> ExtremaSets {
    debug_assert!(delta_min >= 0.0 && delta_max >= 0.0);
    let mut out = ExtremaSets::default();
    for (k, w) in values.windows(3).enumerate() {
        let (l, c, r) = (w[0], w[1], w[2]);
        if c > l.max(r) + delta_max {
            out.maxima.push(k + 2);
        } else if c < l.min(r) - delta_min {
            out.minima.push(k + 2);
        }
    }
    out
}

pub fn count_interior_extrema(values: &[f64], delta_min: f64, delta_max: f64) -> usize {
    detect_extrema(values, delta_min, delta_max).len()
}

/// `range · 1e-6`, the tolerance used by the drivers for both δ thresholds.
pub fn default_delta(range: f64) -> f64 {
    range * DEFAULT_RELATIVE_DELTA
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating() {
        let e = detect_extrema(&[0.0, 1.0, 0.0, 1.0, 0.0], 0.1, 0.1);
        assert_eq!(e.maxima, vec![2, 4]);
        assert_eq!(e.minima, vec![3]);
        assert_eq!(e.all(), vec![2, 3, 4]);
        assert_eq!(count_interior_extrema(&[0.0, 1.0, 0.0, 1.0, 0.0], 0.1, 0.1), 3);
    }

    #[test]
    fn monotone_and_plateau_have_none() {
        assert!(detect_extrema(&[0.0, 1.0, 2.0, 3.0], 0.0, 0.0).is_empty());
        assert!(detect_extrema(&[0.0, 1.0, 1.0, 0.0], 0.0, 0.0).is_empty());
        assert_eq!(count_interior_extrema(&[2.0; 7], 0.0, 0.0), 0);
    }

    #[test]
    fn tolerance_suppresses_shallow_bumps() {
        let v = [0.0, 0.05, 0.0];
        assert_eq!(detect_extrema(&v, 0.0, 0.0).maxima, vec![2]);
        assert!(detect_extrema(&v, 0.0, 0.1).is_empty());
    }

    #[test]
    fn rastrigin_on_dense_grid() {
        let n = 20001;
        let v: Vec<f64> = (0..n)
            .map(|k| {
                let x = -3.0 + 6.0 * k as f64 / (n - 1) as f64;
                10.0 + x * x - 10.0 * (2.0 * std::f64::consts::PI * x).cos()
            })
            .collect();
        let e = detect_extrema(&v, 0.0, 0.0);
        assert_eq!(e.len(), 13);
        assert_eq!(e.maxima.len(), 6);
        assert_eq!(e.minima.len(), 7);
    }
}
