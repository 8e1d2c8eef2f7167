//! Twenty one-dimensional test functions.
//!
//! Two members are slices of 2-D functions along a segment: `dejong5` along
//! the diagonal `x1 = x2` and `plateau` along `(-2, -7) -> (4, 5)`. Their
//! scalar coordinate is the first component of the point on the segment.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Default grid size for the benchmark runs.
pub const DEFAULT_GRID_POINTS: usize = 5000;

/// A function of `D` variables viewed along the segment `start -> end`.
#[derive(Debug, Clone)]
pub struct LineRestriction {
    inner: fn(&[f64]) -> f64,
    start: Vec<f64>,
    end: Vec<f64>,
}

impl LineRestriction {
    pub fn new(inner: fn(&[f64]) -> f64, start: Vec<f64>, end: Vec<f64>) -> Result<Self> {
        if start.len() != end.len() || start.is_empty() {
            return Err(Error::DimensionMismatch {
                start: start.len(),
                end: end.len(),
            });
        }
        Ok(Self { inner, start, end })
    }

    pub fn dim(&self) -> usize {
        self.start.len()
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn end(&self) -> &[f64] {
        &self.end
    }

    pub fn point(&self, t: f64) -> Vec<f64> {
        if t == 0.0 {
            return self.start.clone();
        }
        if t == 1.0 {
            return self.end.clone();
        }
        self.start
            .iter()
            .zip(&self.end)
            .map(|(a, b)| a + t * (b - a))
            .collect()
    }

    /// Value at parameter `t` in `[0, 1]`.
    pub fn evaluate(&self, t: f64) -> f64 {
        (self.inner)(&self.point(t))
    }

    pub fn evaluate_point(&self, x: &[f64]) -> f64 {
        (self.inner)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Minimizer {
    Point(f64),
    Interval(f64, f64),
}

impl Minimizer {
    /// A representative point (interval midpoint).
    pub fn representative(&self) -> f64 {
        match *self {
            Minimizer::Point(x) => x,
            Minimizer::Interval(a, b) => 0.5 * (a + b),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BenchmarkFunction {
    pub name: &'static str,
    pub lower: f64,
    pub upper: f64,
    /// Minimizer as listed in the reference tables.
    pub listed_minimizer: Minimizer,
    /// Minimum as listed in the reference tables.
    pub listed_minimum: f64,
    /// Global minimum of the implemented formula on the domain; the solve test uses this.
    pub f_star: f64,
    pub smooth: bool,
    pub grid_override: Option<usize>,
    f: fn(f64) -> f64,
    inner: Option<Inner2d>,
}

#[derive(Debug, Clone, Copy)]
struct Inner2d {
    f: fn(&[f64]) -> f64,
    start: [f64; 2],
    end: [f64; 2],
}

impl BenchmarkFunction {
    /// Analytic value at domain coordinate `x` (no domain check).
    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(self.lower <= x && x <= self.upper) {
            return Err(Error::OutOfDomain {
                name: self.name,
                x,
                lower: self.lower,
                upper: self.upper,
            });
        }
        Ok(self.value(x))
    }

    pub fn n_points(&self) -> usize {
        self.grid_override.unwrap_or(DEFAULT_GRID_POINTS)
    }

    pub fn grid(&self, n_points: usize) -> Result<Grid> {
        Grid::interval(self.lower, self.upper, n_points)
    }

    /// The underlying 2-D function and segment, for the sliced members.
    pub fn restriction(&self) -> Option<LineRestriction> {
        self.inner.map(|i| LineRestriction {
            inner: i.f,
            start: i.start.to_vec(),
            end: i.end.to_vec(),
        })
    }

    /// Evaluate at a point given either as the scalar coordinate or, for the
    /// sliced members, as a point of the underlying 2-D function.
    pub fn evaluate_point(&self, x: &[f64]) -> Result<f64> {
        match (x.len(), self.inner) {
            (1, _) => self.eval(x[0]),
            (2, Some(inner)) => Ok((inner.f)(x)),
            (d, _) => Err(Error::DimensionMismatch {
                start: self.inner.map_or(1, |_| 2),
                end: d,
            }),
        }
    }

    /// Function values at every point of a grid over the domain.
    pub fn truth(&self, grid: &Grid) -> Vec<f64> {
        grid.points().map(|p| self.value(p[0])).collect()
    }

    /// `0.01 · max(1, |f*|)`.
    pub fn solve_tolerance(&self) -> f64 {
        0.01 * self.f_star.abs().max(1.0)
    }
}

fn ackley(x: f64) -> f64 {
    -20.0 * (-0.2 * x.abs()).exp() - (2.0 * PI * x).cos().exp() + 20.0 + E
}

fn damped_harmonic_oscillator(x: f64) -> f64 {
    -(-x.abs()).exp() * (2.0 * PI * x.abs()).cos()
}

fn dejong5_2d(x: &[f64]) -> f64 {
    const A: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];
    let mut s = 0.002;
    for i in 0..25 {
        let a1 = A[i % 5];
        let a2 = A[i / 5];
        s += 1.0 / ((i + 1) as f64 + (x[0] - a1).powi(6) + (x[1] - a2).powi(6));
    }
    1.0 / s
}

fn dejong5(x: f64) -> f64 {
    dejong5_2d(&[x, x])
}

fn grlee12(x: f64) -> f64 {
    let (p, shift) = if x < 0.71 {
        (1.10, 5.0)
    } else if x <= 0.86 {
        (0.75, 5.0)
    } else {
        (0.75, 1.0)
    };
    (10.0 * PI * x.powf(p)).sin() / (2.0 * x) + (x - 1.0).powi(4) + shift
}

fn langermann(x: f64, a: &[f64; 5]) -> f64 {
    const C: [f64; 5] = [1.0, 2.0, 5.0, 2.0, 3.0];
    C.iter()
        .zip(a)
        .map(|(c, a)| {
            let d = (x - a) * (x - a);
            c * (-d / PI).exp() * (PI * d).cos()
        })
        .sum()
}

fn langer(x: f64) -> f64 {
    langermann(x, &[3.0, 5.0, 2.0, 1.0, 7.0])
}

fn langer2(x: f64) -> f64 {
    langermann(x, &[5.0, 1.0, 5.0, 2.0, 8.0])
}

fn michal(x: f64) -> f64 {
    -x.sin() * (x * x / PI).sin().powi(20)
}

fn plateau_2d(x: &[f64]) -> f64 {
    x[0].floor().abs() + x[1].floor().abs()
}

fn plateau(x: f64) -> f64 {
    // the segment (-2, -7) -> (4, 5) is x2 = 2 x1 - 3
    plateau_2d(&[x, 2.0 * x - 3.0])
}

fn rastrigin(x: f64) -> f64 {
    10.0 + x * x - 10.0 * (2.0 * PI * x).cos()
}

fn sawtooth_d(x: f64) -> f64 {
    let tri = |k: f64| 2.0 / PI * (k * PI * x).sin().asin();
    if x <= 0.0 {
        tri(1.0) - x.abs()
    } else if x < 0.75 {
        tri(3.0) - x.abs() + 1.0
    } else if x <= 1.0 {
        tri(1.0) - 6.0
    } else if x < 3.25 {
        tri(3.0) - x.abs() + 1.0
    } else {
        tri(1.0) - x.abs() + 1.0
    }
}

fn schwefel(x: f64) -> f64 {
    418.9829 - x * x.abs().sqrt().sin()
}

fn stybtang(x: f64) -> f64 {
    0.5 * (x.powi(4) - 16.0 * x * x + 5.0 * x)
}

fn zakharov(x: f64) -> f64 {
    1.5 * x * x + 0.5 * x.powi(4)
}

fn schaffer2a_core(w: f64) -> f64 {
    -0.5 - ((w * w).sin().powi(2) - 0.5) / (1.0 + 0.001 * w * w).powi(2)
}

fn easom_schaffer2a(x: f64) -> f64 {
    if x >= 0.0 {
        let w = x - 25.0;
        -2.0 * w.cos().powi(2) * (-2.0 * (w - PI).powi(2)).exp()
    } else {
        let w = 0.3 * x;
        schaffer2a_core(w) - 0.1 * w.abs()
    }
}

/// Principal-branch `x^p` for real `x`, as `(re, im)`.
fn principal_pow(x: f64, p: f64) -> (f64, f64) {
    if x >= 0.0 {
        (x.powf(p), 0.0)
    } else {
        let r = (-x).powf(p);
        (r * (p * PI).cos(), r * (p * PI).sin())
    }
}

fn egg2(x: f64) -> f64 {
    let (c_re, c_im) = principal_pow(x, 1.0 / 3.0);
    let first = (x + c_re / 2.0 + 47.0).hypot(c_im / 2.0);
    let (s_re, s_im) = principal_pow(x, 2.0 / 3.0);
    let second = (s_re - 47.0).hypot(s_im);
    -(x + 47.0) * first.sqrt().sin() - x * second.sqrt().sin()
}

fn holder(x: f64) -> f64 {
    -(x.sin() * x.cos() * (1.0 - (2.0 * x * x).sqrt() / PI).abs().exp()).abs()
}

fn levy(x: f64) -> f64 {
    let w = 1.0 + (x - 1.0) / 4.0;
    (PI * w).sin().powi(2) + (w - 1.0).powi(2) * (1.0 + (2.0 * PI * w).sin().powi(2))
}

fn levy13(x: f64) -> f64 {
    let s3 = (3.0 * PI * x).sin().powi(2);
    -s3 - (x - 1.0).powi(2) * (2.0 + s3 + (2.0 * PI * x).sin().powi(2))
}

fn schaffer2a(x: f64) -> f64 {
    schaffer2a_core(x) - 0.2 * x.abs()
}

fn shekel(x: f64) -> f64 {
    const BETA: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];
    const C_ODD: [f64; 10] = [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0];
    const C_EVEN: [f64; 10] = [4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6];
    -(0..10)
        .map(|i| {
            let d = 2.0 * (x - C_ODD[i]).powi(2) + 2.0 * (x - C_EVEN[i]).powi(2);
            1.0 / (d + BETA[i])
        })
        .sum::<f64>()
}

macro_rules! bench {
    ($name:literal, $f:ident, [$lo:expr, $hi:expr], $xs:expr, $fs:expr, $fstar:expr, $smooth:expr) => {
        BenchmarkFunction {
            name: $name,
            lower: $lo,
            upper: $hi,
            listed_minimizer: $xs,
            listed_minimum: $fs,
            f_star: $fstar,
            smooth: $smooth,
            grid_override: None,
            f: $f,
            inner: None,
        }
    };
}

use Minimizer::{Interval, Point};

static REGISTRY: [BenchmarkFunction; 20] = [
    BenchmarkFunction {
        grid_override: Some(10_000),
        ..bench!("ackley", ackley, [-17.0, 32.0], Point(0.0), 0.0, 0.0, true)
    },
    bench!(
        "damped_harmonic_oscillator",
        damped_harmonic_oscillator,
        [-PI / 8.0, PI],
        Point(0.0),
        -1.0,
        -1.0,
        true
    ),
    BenchmarkFunction {
        inner: Some(Inner2d {
            f: dejong5_2d,
            start: [-65.536, -65.536],
            end: [65.536, 65.536],
        }),
        ..bench!("dejong5", dejong5, [-65.536, 65.536], Point(-31.976), 0.998, 0.998, true)
    },
    bench!(
        "grlee12",
        grlee12,
        [0.5, 2.5],
        Point(0.76879),
        -0.64708,
        0.464_094_182_940_416_6,
        false
    ),
    bench!("langer", langer, [0.0, 10.0], Point(6.00295), -3.66452, -3.66452, true),
    bench!("michal", michal, [0.0, 13.0], Point(8.00922), -0.98795, -0.98795, true),
    BenchmarkFunction {
        inner: Some(Inner2d {
            f: plateau_2d,
            start: [-2.0, -7.0],
            end: [4.0, 5.0],
        }),
        ..bench!("plateau", plateau, [-2.0, 4.0], Interval(1.5, 2.0), 1.0, 1.0, false)
    },
    bench!("rastrigin", rastrigin, [-3.0, 3.0], Point(0.0), 0.0, 0.0, true),
    bench!("sawtoothD", sawtooth_d, [-5.0, 5.0], Point(1.0), -6.0, -6.0, false),
    bench!(
        "schwefel",
        schwefel,
        [-500.0, 500.0],
        Point(420.9687),
        1.27278e-5,
        1.27278e-5,
        true
    ),
    bench!(
        "stybtang",
        stybtang,
        [-5.0, 5.0],
        Point(-2.903534),
        -39.16599,
        -39.16599,
        true
    ),
    bench!("zakharov", zakharov, [-5.0, 10.0], Point(0.0), 0.0, 0.0, true),
    bench!(
        "easom_schaffer2A",
        easom_schaffer2a,
        [-10.0, 30.0],
        Point(28.14363),
        -2.0,
        -2.0,
        true
    ),
    bench!(
        "egg2",
        egg2,
        [-600.0, 200.0],
        Point(-559.35187),
        -518.98768,
        -948.652_273_712_364_4,
        false
    ),
    bench!("holder", holder, [0.0, 11.0], Point(10.32006), -18.69332, -18.69332, false),
    bench!("langer2", langer2, [3.0, 8.0], Point(4.02921), -3.94660, -3.94660, true),
    bench!("levy", levy, [-10.0, 2.0], Point(1.0), 0.0, 0.0, true),
    bench!("levy13", levy13, [-3.0, 2.0], Point(-2.81896), -56.48262, -56.48262, true),
    bench!("schaffer2A", schaffer2a, [-2.0, 3.0], Point(2.80596), -1.55304, -1.55304, false),
    bench!("shekel", shekel, [0.0, 9.0], Point(4.0), -10.53626, -10.53626, true),
];

pub fn all() -> &'static [BenchmarkFunction] {
    &REGISTRY
}

pub fn names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|b| b.name)
}

fn canonical(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace('-', "_")
}

/// Case-insensitive lookup; `-` and `_` are interchangeable.
pub fn lookup(name: &str) -> Result<&'static BenchmarkFunction> {
    let key = canonical(name);
    REGISTRY
        .iter()
        .find(|b| canonical(b.name) == key)
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

pub fn eval_benchmark(name: &str, x: f64) -> Result<f64> {
    lookup(name)?.eval(x)
}
