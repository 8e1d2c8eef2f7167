//! The three search loops and the trace they leave behind.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrema::{default_delta, detect_extrema};
use crate::grid::Grid;
use crate::objective::Objective;
use crate::samples::SampleSet;
use crate::sampling::{find_largest_unexplored_interval, sample_around_the_bend, sort_candidates};
use crate::surrogate::{fit_change_error, fit_surrogate, Fit, SmoothingSystem};
use crate::tabu::{Admission, NewIncumbent, TabuParams, TabuState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Full,
    Pure,
    Hunter,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Full, Algorithm::Pure, Algorithm::Hunter];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Full => "full",
            Algorithm::Pure => "pure",
            Algorithm::Hunter => "hunter",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Algorithm::Full),
            "pure" => Ok(Algorithm::Pure),
            "hunter" => Ok(Algorithm::Hunter),
            other => Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Total evaluation budget, initial samples included. Caps the hunter too.
    pub e_max_total: usize,
    pub e_max_itr: usize,
    pub n_points: usize,
    pub alpha: f64,
    pub mu: f64,
    /// Fit-change tolerance of the hunter.
    pub e_min: f64,
    pub initial_sample_count: usize,
    pub theta: f64,
    pub tabu: TabuParams,
    /// Keep the fit of every iteration in the trace.
    pub snapshots: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            e_max_total: 50,
            e_max_itr: 1,
            n_points: 5000,
            alpha: 0.0,
            mu: 0.01,
            e_min: 0.001,
            initial_sample_count: 11,
            theta: 0.01,
            tabu: TabuParams::default(),
            snapshots: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.initial_sample_count < 2 {
            return bad(format!(
                "need at least 2 initial samples, got {}",
                self.initial_sample_count
            ));
        }
        if self.e_max_total < self.initial_sample_count {
            return bad(format!(
                "budget {} is smaller than the {} initial samples",
                self.e_max_total, self.initial_sample_count
            ));
        }
        if self.e_max_itr < 1 {
            return bad("at least one evaluation per iteration is required".into());
        }
        if self.n_points < self.initial_sample_count {
            return bad(format!(
                "{} grid points cannot hold {} initial samples",
                self.n_points, self.initial_sample_count
            ));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return bad(format!("theta must lie in [0, 1], got {}", self.theta));
        }
        if self.e_min.is_nan() || self.e_min < 0.0 {
            return bad(format!("e_min must be non-negative, got {}", self.e_min));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite() && self.mu >= 0.0 && self.mu.is_finite())
        {
            return bad(format!(
                "smoothing weights must be finite and non-negative, got alpha={} mu={}",
                self.alpha, self.mu
            ));
        }
        self.tabu.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reason {
    Initial,
    Extremum,
    Aspiration1,
    Aspiration2,
    Exploration,
    Bend,
}

impl Reason {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reason::Initial => "initial",
            Reason::Extremum => "extremum",
            Reason::Aspiration1 => "aspiration1",
            Reason::Aspiration2 => "aspiration2",
            Reason::Exploration => "exploration",
            Reason::Bend => "bend",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub index: usize,
    pub iteration: usize,
    pub value: f64,
    pub reason: Reason,
    /// The extremum this sample was derived from, when it differs from `index`.
    pub candidate: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Incumbent {
    pub evaluations: usize,
    pub index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub algorithm: Algorithm,
    pub config: RunConfig,
    pub evaluations: Vec<Evaluation>,
    pub incumbents: Vec<Incumbent>,
    pub iterations: usize,
    pub snapshots: Vec<Fit>,
    /// Fit through every sample taken.
    pub final_fit: Fit,
}

impl RunTrace {
    pub fn best(&self) -> Option<Incumbent> {
        self.incumbents.last().copied()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.evaluations.iter().map(|e| e.index).collect()
    }
}

/// A failed run, with everything evaluated before the failure.
#[derive(Debug, thiserror::Error)]
#[error("{error} (after {} evaluations)", evaluations.len())]
pub struct RunError {
    #[source]
    pub error: Error,
    pub evaluations: Vec<Evaluation>,
    pub incumbents: Vec<Incumbent>,
}

/// `round(1 + (n-1)(i-1)/(count-1))` for `i = 1..=count`.
pub fn initial_sample_indices(n_points: usize, count: usize) -> Result<Vec<usize>> {
    if count < 2 || n_points < count {
        return Err(Error::DuplicateInitialIndex { n: n_points, count });
    }
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        // integer form of round-half-up of 1 + (n-1) i / (count-1)
        let num = 2 * (n_points - 1) * i + (count - 1);
        let idx = 1 + num / (2 * (count - 1));
        if out.last() == Some(&idx) {
            return Err(Error::DuplicateInitialIndex { n: n_points, count });
        }
        out.push(idx);
    }
    Ok(out)
}

struct Session<'a> {
    grid: &'a Grid,
    objective: &'a mut dyn Objective,
    config: &'a RunConfig,
    system: SmoothingSystem,
    samples: SampleSet,
    evaluations: Vec<Evaluation>,
    incumbents: Vec<Incumbent>,
    snapshots: Vec<Fit>,
}

impl<'a> Session<'a> {
    fn new(grid: &'a Grid, objective: &'a mut dyn Objective, config: &'a RunConfig) -> Result<Self> {
        config.validate()?;
        if grid.len() != config.n_points {
            return Err(Error::InvalidParameter(format!(
                "grid has {} points but the configuration asks for {}",
                grid.len(),
                config.n_points
            )));
        }
        Ok(Self {
            grid,
            objective,
            config,
            system: SmoothingSystem::new(grid.len(), config.alpha, config.mu)?,
            samples: SampleSet::new(),
            evaluations: Vec::new(),
            incumbents: Vec::new(),
            snapshots: Vec::new(),
        })
    }

    fn fail(self, error: Error) -> RunError {
        RunError {
            error,
            evaluations: self.evaluations,
            incumbents: self.incumbents,
        }
    }

    fn evaluate(&mut self, i: usize, iteration: usize, reason: Reason, candidate: Option<usize>) -> Result<f64> {
        if self.samples.contains(i) {
            return Err(Error::Resample(i));
        }
        let value = self.objective.evaluate(&self.grid.point(i))?;
        self.samples.insert(i, value);
        self.system.set_sample(i, value)?;
        self.evaluations.push(Evaluation {
            index: i,
            iteration,
            value,
            reason,
            candidate: candidate.filter(|&c| c != i),
        });
        let (index, value) = self.samples.best().expect("just inserted");
        self.incumbents.push(Incumbent {
            evaluations: self.samples.len(),
            index,
            value,
        });
        Ok(value)
    }

    fn initialize(&mut self) -> Result<()> {
        for i in initial_sample_indices(self.grid.len(), self.config.initial_sample_count)? {
            self.evaluate(i, 0, Reason::Initial, None)?;
        }
        Ok(())
    }

    fn fit(&mut self, iteration: usize) -> Result<Fit> {
        let fit = fit_surrogate(&self.system, iteration)?;
        if self.config.snapshots {
            self.snapshots.push(fit.clone());
        }
        Ok(fit)
    }

    /// Extrema of `fit` that have not been sampled, ascending.
    fn new_extrema(&self, fit: &Fit) -> Vec<usize> {
        let delta = default_delta(fit.range());
        detect_extrema(fit.values(), delta, delta)
            .all()
            .into_iter()
            .filter(|&i| !self.samples.contains(i))
            .collect()
    }

    fn remaining(&self) -> usize {
        self.config.e_max_total.saturating_sub(self.samples.len())
    }

    fn finish(self, algorithm: Algorithm, iterations: usize) -> Result<RunTrace, RunError> {
        let final_fit = match fit_surrogate(&self.system, iterations) {
            Ok(f) => f,
            Err(e) => return Err(self.fail(e)),
        };
        Ok(RunTrace {
            algorithm,
            config: self.config.clone(),
            evaluations: self.evaluations,
            incumbents: self.incumbents,
            iterations,
            snapshots: self.snapshots,
            final_fit,
        })
    }
}

macro_rules! attempt {
    ($session:ident, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Err($session.fail(err.into())),
        }
    };
}

/// Sample every new extremum of the fit until the fit stops moving or no new
/// extrema appear. Evaluations stop early if `e_max_total` is reached.
pub fn extrema_hunter(
    grid: &Grid,
    objective: &mut dyn Objective,
    config: &RunConfig,
) -> Result<RunTrace, RunError> {
    let mut s = Session::new(grid, objective, config).map_err(|error| RunError {
        error,
        evaluations: Vec::new(),
        incumbents: Vec::new(),
    })?;
    attempt!(s, s.initialize());

    let mut previous = Fit::zeros(grid.len());
    let mut change = config.e_min + 1.0;
    let mut itr = 0;
    while change > config.e_min && s.remaining() > 0 {
        itr += 1;
        let fit = attempt!(s, s.fit(itr));
        let fresh = s.new_extrema(&fit);
        if fresh.is_empty() {
            break;
        }
        for i in sort_candidates(&fresh, &fit).into_iter().take(s.remaining()) {
            attempt!(s, s.evaluate(i, itr, Reason::Extremum, None));
        }
        change = attempt!(s, fit_change_error(&previous, &fit));
        previous = fit;
    }
    s.finish(Algorithm::Hunter, itr)
}

pub fn linewalker_full(
    grid: &Grid,
    objective: &mut dyn Objective,
    config: &RunConfig,
) -> Result<RunTrace, RunError> {
    budgeted(grid, objective, config, true)
}

/// The budgeted loop without tabu memory, aspiration or around-the-bend moves.
pub fn linewalker_pure(
    grid: &Grid,
    objective: &mut dyn Objective,
    config: &RunConfig,
) -> Result<RunTrace, RunError> {
    budgeted(grid, objective, config, false)
}

pub fn run(
    algorithm: Algorithm,
    grid: &Grid,
    objective: &mut dyn Objective,
    config: &RunConfig,
) -> Result<RunTrace, RunError> {
    match algorithm {
        Algorithm::Full => linewalker_full(grid, objective, config),
        Algorithm::Pure => linewalker_pure(grid, objective, config),
        Algorithm::Hunter => extrema_hunter(grid, objective, config),
    }
}

fn budgeted(
    grid: &Grid,
    objective: &mut dyn Objective,
    config: &RunConfig,
    tabu_enabled: bool,
) -> Result<RunTrace, RunError> {
    let algorithm = if tabu_enabled {
        Algorithm::Full
    } else {
        Algorithm::Pure
    };
    let mut s = Session::new(grid, objective, config)
        .and_then(|s| {
            if config.e_max_total > grid.len() {
                Err(Error::InvalidParameter(format!(
                    "budget {} exceeds the {} grid points",
                    config.e_max_total,
                    grid.len()
                )))
            } else {
                Ok(s)
            }
        })
        .map_err(|error| RunError {
            error,
            evaluations: Vec::new(),
            incumbents: Vec::new(),
        })?;
    let mut tabu = attempt!(s, TabuState::new(grid.len(), config.e_max_total, config.tabu));
    attempt!(s, s.initialize());
    for i in s.samples.indices().collect::<Vec<_>>() {
        tabu.record(i, 0);
    }

    let mut itr = 0;
    let mut new_incumbent: Option<NewIncumbent> = None;
    while s.remaining() > 0 {
        itr += 1;
        let fit = attempt!(s, s.fit(itr));
        let fresh = s.new_extrema(&fit);

        let admitted: Vec<(usize, Admission)> = if tabu_enabled {
            tabu.manage(itr, &fit, &s.samples);
            tabu.find_non_tabu_points(&fresh, &fit, &s.samples, new_incumbent)
        } else {
            fresh.iter().map(|&i| (i, Admission::Free)).collect()
        };

        let best_before = s.samples.best().map(|(_, v)| v);
        if admitted.is_empty() {
            let i = attempt!(s, find_largest_unexplored_interval(&s.samples, &fit));
            attempt!(s, s.evaluate(i, itr, Reason::Exploration, None));
            tabu.record(i, itr);
        } else {
            let order: Vec<usize> = admitted.iter().map(|&(i, _)| i).collect();
            let take = order.len().min(config.e_max_itr).min(s.remaining());
            let mut evaluated = 0;
            for j in sort_candidates(&order, &fit).into_iter().take(take) {
                let admission = admitted
                    .iter()
                    .find(|&&(i, _)| i == j)
                    .map(|&(_, a)| a)
                    .expect("candidate came from the admitted list");
                let mut target = j;
                if tabu_enabled {
                    let k = sample_around_the_bend(j, &fit, &s.samples, config.theta);
                    if !s.samples.contains(k) {
                        target = k;
                    }
                }
                if s.samples.contains(target) {
                    continue;
                }
                let reason = match admission {
                    Admission::Aspiration1 => Reason::Aspiration1,
                    Admission::Aspiration2 => Reason::Aspiration2,
                    Admission::Free if target != j => Reason::Bend,
                    Admission::Free => Reason::Extremum,
                };
                attempt!(s, s.evaluate(target, itr, reason, Some(j)));
                tabu.record(target, itr);
                evaluated += 1;
            }
            if evaluated == 0 {
                let i = attempt!(s, find_largest_unexplored_interval(&s.samples, &fit));
                attempt!(s, s.evaluate(i, itr, Reason::Exploration, None));
                tabu.record(i, itr);
            }
        }

        new_incumbent = match (best_before, s.samples.best()) {
            (Some(before), Some((index, after))) if after < before => Some(NewIncumbent {
                index,
                improvement: before - after,
            }),
            _ => None,
        };
    }
    s.finish(algorithm, itr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_indices_examples() {
        let v = initial_sample_indices(1000, 11).unwrap();
        assert_eq!(v, [1, 101, 201, 301, 401, 501, 600, 700, 800, 900, 1000]);
        assert_eq!(initial_sample_indices(11, 11).unwrap(), (1..=11).collect::<Vec<_>>());
        assert_eq!(initial_sample_indices(5000, 11).unwrap()[..3], [1, 501, 1001]);
        assert!(initial_sample_indices(10, 11).is_err());
    }

    #[test]
    fn duplicate_indices_rejected() {
        assert!(matches!(
            initial_sample_indices(3, 5),
            Err(Error::DuplicateInitialIndex { .. })
        ));
    }

    fn config(n: usize, budget: usize) -> RunConfig {
        RunConfig {
            n_points: n,
            e_max_total: budget,
            ..RunConfig::default()
        }
    }

    #[test]
    fn budget_of_initial_samples_only() {
        let grid = Grid::interval(0.0, 1.0, 200).unwrap();
        let mut f = |x: &[f64]| (7.0 * x[0]).sin();
        for algo in [Algorithm::Full, Algorithm::Pure] {
            let t = run(algo, &grid, &mut f, &config(200, 11)).unwrap();
            assert_eq!(t.evaluations.len(), 11);
            assert!(t.evaluations.iter().all(|e| e.reason == Reason::Initial));
            assert_eq!(t.iterations, 0);
        }
    }

    #[test]
    fn budget_is_spent_exactly() {
        let grid = Grid::interval(-2.0, 3.0, 800).unwrap();
        let mut f = |x: &[f64]| (3.0 * x[0]).sin() + 0.1 * x[0] * x[0];
        for algo in [Algorithm::Full, Algorithm::Pure] {
            let t = run(algo, &grid, &mut f, &config(800, 27)).unwrap();
            let mut idx = t.indices();
            assert_eq!(idx.len(), 27);
            idx.sort_unstable();
            idx.dedup();
            assert_eq!(idx.len(), 27);
            assert_eq!(t.incumbents.len(), 27);
        }
    }

    #[test]
    fn affine_objective_stops_hunter_immediately() {
        let grid = Grid::interval(0.0, 1.0, 500).unwrap();
        let mut f = |x: &[f64]| 2.0 * x[0] - 1.0;
        let t = extrema_hunter(&grid, &mut f, &config(500, 500)).unwrap();
        assert_eq!(t.evaluations.len(), 11);
        assert_eq!(t.iterations, 1);
    }

    #[test]
    fn evaluation_failure_keeps_partial_trace() {
        let grid = Grid::interval(0.0, 1.0, 100).unwrap();
        let mut calls = 0;
        let mut f = |x: &[f64]| {
            calls += 1;
            if calls > 5 {
                f64::NAN
            } else {
                x[0]
            }
        };
        let err = linewalker_full(&grid, &mut f, &config(100, 20)).unwrap_err();
        assert_eq!(err.evaluations.len(), 5);
        assert!(matches!(err.error, Error::Evaluation(_)));
    }

    #[test]
    fn config_validation() {
        let grid = Grid::interval(0.0, 1.0, 100).unwrap();
        let mut f = |x: &[f64]| x[0];
        assert!(linewalker_full(&grid, &mut f, &config(100, 5)).is_err());
        assert!(linewalker_full(&grid, &mut f, &config(100, 101)).is_err());
        assert!(linewalker_full(&grid, &mut f, &config(99, 20)).is_err());
        let bad_theta = RunConfig {
            theta: 1.5,
            ..config(100, 20)
        };
        assert!(bad_theta.validate().is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("bogus".parse::<Algorithm>().is_err());
    }
}
