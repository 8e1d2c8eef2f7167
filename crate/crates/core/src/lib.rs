//! One-dimensional surrogate search along a line segment.
//!
//! A grid of `N` points is laid on the segment. After each batch of true
//! function evaluations a smoothing fit is solved over the whole grid, and its
//! extrema become the next sampling candidates. The budgeted variant adds tabu
//! memory, two aspiration rules, gap bisection when nothing is admissible, and
//! a small sideways move off each extremum.
//!
//! ```
//! use linewalker::{benchmarks, driver, Grid, RunConfig};
//!
//! let f = benchmarks::lookup("rastrigin").unwrap();
//! let config = RunConfig { n_points: 1000, e_max_total: 30, ..RunConfig::default() };
//! let grid = Grid::interval(f.lower, f.upper, config.n_points).unwrap();
//! let mut objective = |x: &[f64]| f.value(x[0]);
//! let trace = driver::linewalker_full(&grid, &mut objective, &config).unwrap();
//! assert_eq!(trace.evaluations.len(), 30);
//! ```

pub mod banded;
pub mod benchmarks;
pub mod driver;
pub mod error;
pub mod extrema;
pub mod grid;
pub mod metrics;
pub mod objective;
pub mod samples;
pub mod sampling;
pub mod surrogate;
pub mod tabu;

pub use driver::{Algorithm, Evaluation, Reason, RunConfig, RunError, RunTrace};
pub use error::{Error, Result};
pub use grid::{build_grid, Grid};
pub use objective::{EvalError, ExternalOracle, Objective};
pub use samples::SampleSet;
pub use surrogate::{fit_change_error, fit_surrogate, Fit, SmoothingSystem};
