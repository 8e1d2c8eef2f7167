//! Short- and long-term tabu memory with dynamic tenure and aspiration.
//!
//! A sampled index `j` forbids its short-term neighbourhood `|i - j| <= d_s`
//! for `tenure` iterations after it was found, and its long-term
//! neighbourhood `|i - j| <= d_l(j)` forever. `d_l(j)` shrinks as the sample
//! count grows and as `fit[j]` approaches either end of the fit's range.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrema::{count_interior_extrema, default_delta};
use crate::samples::SampleSet;
use crate::surrogate::Fit;

/// Neighbourhood used to count sampled neighbours in the first aspiration test.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AspirationRadius {
    /// The constant short-term distance `d_s`.
    ShortTerm,
    /// The candidate's own long-term distance `ceil(nu(c) * N / |S|)`.
    #[default]
    LongTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TabuParams {
    pub tenure_init: usize,
    pub nu_min: f64,
    pub nu_max: f64,
    pub aspiration_radius: AspirationRadius,
}

impl Default for TabuParams {
    fn default() -> Self {
        Self {
            tenure_init: 5,
            nu_min: 0.10,
            nu_max: 0.25,
            aspiration_radius: AspirationRadius::LongTerm,
        }
    }
}

impl TabuParams {
    pub fn validate(&self) -> Result<()> {
        if self.tenure_init < 1 {
            return Err(Error::InvalidParameter("tabu tenure must be at least 1".into()));
        }
        if !(0.0 <= self.nu_min && self.nu_min <= self.nu_max && self.nu_max <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= nu_min <= nu_max <= 1, got {} and {}",
                self.nu_min, self.nu_max
            )));
        }
        Ok(())
    }
}

/// Why a candidate was allowed through the tabu filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admission {
    Free,
    Aspiration1,
    Aspiration2,
}

/// A sample that became the incumbent in the previous iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewIncumbent {
    pub index: usize,
    /// Decrease of the best true value it caused (positive).
    pub improvement: f64,
}

/// `ceil(n / (2 e_max_total))`.
pub fn short_term_distance(n: usize, e_max_total: usize) -> usize {
    n.div_ceil(2 * e_max_total)
}

/// Normalized distance of `value` to the nearer end of the fit's range, in `[0, 1]`.
pub fn kappa(fit: &Fit, value: f64) -> f64 {
    let mid = fit.mid();
    if mid <= 0.0 {
        return 0.0;
    }
    let k = (fit.max() - value).min(value - fit.min()) / mid;
    k.clamp(0.0, 1.0)
}

fn ceil_radius(x: f64) -> usize {
    // Guard against products like 0.1 * 5000 / 50 landing a hair above an integer.
    ((x - 1e-9).ceil().max(1.0)) as usize
}

#[derive(Debug, Clone)]
pub struct TabuState {
    n: usize,
    params: TabuParams,
    tenure: usize,
    dist_short: usize,
    iter_found: BTreeMap<usize, usize>,
    dist_long: BTreeMap<usize, usize>,
    nu: BTreeMap<usize, f64>,
    current_iter: usize,
}

impl TabuState {
    pub fn new(n: usize, e_max_total: usize, params: TabuParams) -> Result<Self> {
        params.validate()?;
        if e_max_total == 0 {
            return Err(Error::InvalidParameter("evaluation budget must be positive".into()));
        }
        Ok(Self {
            n,
            params,
            tenure: params.tenure_init,
            dist_short: short_term_distance(n, e_max_total),
            iter_found: BTreeMap::new(),
            dist_long: BTreeMap::new(),
            nu: BTreeMap::new(),
            current_iter: 0,
        })
    }

    pub fn tenure(&self) -> usize {
        self.tenure
    }

    pub fn dist_short(&self) -> usize {
        self.dist_short
    }

    pub fn dist_long(&self, i: usize) -> Option<usize> {
        self.dist_long.get(&i).copied()
    }

    pub fn nu(&self, i: usize) -> Option<f64> {
        self.nu.get(&i).copied()
    }

    pub fn iter_found(&self, i: usize) -> Option<usize> {
        self.iter_found.get(&i).copied()
    }

    pub fn current_iter(&self) -> usize {
        self.current_iter
    }

    pub fn params(&self) -> &TabuParams {
        &self.params
    }

    fn nu_of(&self, kappa: f64) -> f64 {
        self.params.nu_min + kappa * (self.params.nu_max - self.params.nu_min)
    }

    /// Mark `i` as sampled in `iteration`. Until the next `manage` its long-term radius is 0.
    pub fn record(&mut self, i: usize, iteration: usize) {
        self.iter_found.insert(i, iteration);
        self.dist_long.entry(i).or_insert(0);
    }

    /// Start `iteration`: adapt the tenure to the fit's extrema count and
    /// recompute every long-term radius.
    pub fn manage(&mut self, iteration: usize, fit: &Fit, samples: &SampleSet) {
        self.current_iter = iteration;
        let delta = default_delta(fit.range());
        let eta = count_interior_extrema(fit.values(), delta, delta);
        if eta > self.tenure {
            self.tenure += 1;
        } else if eta + 1 < self.tenure && self.tenure > 1 {
            self.tenure -= 1;
        }

        let per_sample = self.n as f64 / samples.len().max(1) as f64;
        self.dist_long.clear();
        self.nu.clear();
        for i in samples.indices() {
            let nu = self.nu_of(kappa(fit, fit.at(i)));
            self.nu.insert(i, nu);
            self.dist_long.insert(i, ceil_radius(nu * per_sample));
            self.iter_found.entry(i).or_insert(0);
        }
    }

    pub fn is_short_term_tabu(&self, i: usize) -> bool {
        self.iter_found.iter().any(|(&j, &found)| {
            self.current_iter.saturating_sub(found) <= self.tenure && i.abs_diff(j) <= self.dist_short
        })
    }

    pub fn is_long_term_tabu(&self, i: usize) -> bool {
        self.dist_long
            .iter()
            .any(|(&j, &d)| i.abs_diff(j) <= d)
    }

    /// Potential-minimizer test; overrides both tabu lists.
    pub fn aspiration_1(&self, candidate: usize, fit: &Fit, samples: &SampleSet) -> bool {
        let Some((_, f_best)) = samples.best() else {
            return false;
        };
        let (fraction, max_neighbours) = if samples.len() <= 30 {
            (0.01, 1)
        } else {
            (0.10, 2)
        };
        if fit.at(candidate) > f_best + fraction * fit.range() {
            return false;
        }
        let radius = match self.params.aspiration_radius {
            AspirationRadius::ShortTerm => self.dist_short,
            AspirationRadius::LongTerm => {
                let nu = self.nu_of(kappa(fit, fit.at(candidate)));
                ceil_radius(nu * self.n as f64 / samples.len().max(1) as f64)
            }
        };
        samples.count_within(candidate, radius) <= max_neighbours
    }

    /// Fresh-valley test; overrides the short-term list only.
    pub fn aspiration_2(
        &self,
        candidate: usize,
        fit: &Fit,
        samples: &SampleSet,
        new_incumbent: Option<NewIncumbent>,
    ) -> bool {
        let Some(inc) = new_incumbent else {
            return false;
        };
        let nearest = samples.left_of(candidate) == Some(inc.index)
            || samples.right_of(candidate) == Some(inc.index);
        if !nearest {
            return false;
        }
        let radius = self.dist_long(inc.index).unwrap_or(0);
        if candidate.abs_diff(inc.index) <= radius {
            return false;
        }
        inc.improvement >= 0.01 * fit.range()
    }

    /// Keep the candidates that are not tabu or that aspire, tagged with why.
    pub fn find_non_tabu_points(
        &self,
        candidates: &[usize],
        fit: &Fit,
        samples: &SampleSet,
        new_incumbent: Option<NewIncumbent>,
    ) -> Vec<(usize, Admission)> {
        let mut out = Vec::new();
        for &c in candidates {
            if samples.contains(c) {
                continue;
            }
            let short = self.is_short_term_tabu(c);
            let long = self.is_long_term_tabu(c);
            if !short && !long {
                out.push((c, Admission::Free));
            } else if self.aspiration_1(c, fit, samples) {
                out.push((c, Admission::Aspiration1));
            } else if !long && self.aspiration_2(c, fit, samples, new_incumbent) {
                out.push((c, Admission::Aspiration2));
            }
        }
        out
    }
}
