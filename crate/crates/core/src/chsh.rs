//! The CHSH-type quantity
//! `S = E(θ₁,φ₁) + E(θ₁,φ₂) − E(θ₂,φ₁) + E(θ₂,φ₂)`,
//! the `|S| ≤ 2` audit for product states and violation search tooling.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::export::fmt_real;
use crate::measurement::{correlation_direct, AnalyzerAngles, MeasurementError};
use crate::scalar::Real;
use crate::search::{coordinate_ascent, AscentOutcome};
use crate::states::{bell_state, product_state, BeamState, BellKind, ProductStateParams, StateError};

/// `|S|` above this counts as a violation of the product-state bound.
pub const VIOLATION_THRESHOLD: f64 = 2.0 + 1e-9;

/// Grid points per axis used to seed [`max_violation_search`].
const SEARCH_GRID: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChshError {
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("grid must have at least 2 points per axis, got {0}")]
    GridTooSmall(usize),
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error(transparent)]
    Measurement(#[from] MeasurementError),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleSet<T> {
    pub theta1: T,
    pub theta2: T,
    pub phi1: T,
    pub phi2: T,
}

impl<T: Real> AngleSet<T> {
    pub fn new(theta1: T, theta2: T, phi1: T, phi2: T) -> Self {
        Self {
            theta1,
            theta2,
            phi1,
            phi2,
        }
    }

    /// `θ₁ = 0, θ₂ = π/2, φ₁ = π/4, φ₂ = −π/4`, where `Φ⁺` reaches `2√2`.
    pub fn phi_plus_optimum() -> Self {
        Self::new(T::zero(), T::FRAC_PI_2(), T::FRAC_PI_4(), -T::FRAC_PI_4())
    }

    pub fn to_array(self) -> [T; 4] {
        [self.theta1, self.theta2, self.phi1, self.phi2]
    }

    pub fn from_slice(x: &[T]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlations<T> {
    pub e11: T,
    pub e12: T,
    pub e21: T,
    pub e22: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshResult<T> {
    pub angles: AngleSet<T>,
    pub s_value: T,
    pub correlations: Correlations<T>,
    pub violates_bound: bool,
}

impl<T: Real> ChshResult<T> {
    pub const CSV_HEADER: [&'static str; 9] = [
        "theta1", "theta2", "phi1", "phi2", "E11", "E12", "E21", "E22", "S",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        let a = self.angles;
        let c = self.correlations;
        [
            a.theta1, a.theta2, a.phi1, a.phi2, c.e11, c.e12, c.e21, c.e22, self.s_value,
        ]
        .iter()
        .map(|&x| fmt_real(x))
        .collect()
    }
}

/// Combines the four correlations with the `+ + − +` sign pattern.
pub fn chsh_from<T: Real>(
    angles: AngleSet<T>,
    mut corr: impl FnMut(T, T) -> Result<T, MeasurementError>,
) -> Result<ChshResult<T>, MeasurementError> {
    let c = Correlations {
        e11: corr(angles.theta1, angles.phi1)?,
        e12: corr(angles.theta1, angles.phi2)?,
        e21: corr(angles.theta2, angles.phi1)?,
        e22: corr(angles.theta2, angles.phi2)?,
    };
    let s_value = c.e11 + c.e12 - c.e21 + c.e22;
    Ok(ChshResult {
        angles,
        s_value,
        correlations: c,
        violates_bound: s_value.abs() > T::lit(VIOLATION_THRESHOLD),
    })
}

pub fn chsh_value<T: Real>(
    s: &BeamState<T>,
    angles: AngleSet<T>,
) -> Result<ChshResult<T>, MeasurementError> {
    chsh_from(angles, |t, f| correlation_direct(s, AnalyzerAngles::new(t, f)))
}

fn s_of<T: Real>(s: &BeamState<T>, x: &[T]) -> T {
    chsh_value(s, AngleSet::from_slice(x))
        .expect("hermitian joint observable")
        .s_value
}

/// One random (product state, angle set) draw, all eight angles uniform in
/// `[0, 2π)`. Draw `index` uses ChaCha8 stream `index` of `seed`, so any
/// draw can be regenerated independently of the others.
pub fn sample_pair<T: Real>(seed: u64, index: u64) -> (ProductStateParams<T>, AngleSet<T>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut u = [T::zero(); 8];
    for x in u.iter_mut() {
        *x = T::lit(rng.gen::<f64>() * TAU);
    }
    let params = ProductStateParams::new(u[0], u[1], u[2], u[3]).expect("finite draw");
    (params, AngleSet::new(u[4], u[5], u[6], u[7]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundArgmax<T> {
    pub index: u64,
    pub params: ProductStateParams<T>,
    pub angles: AngleSet<T>,
    pub s_value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSampleReport<T> {
    pub samples: u64,
    pub seed: u64,
    pub max_abs_s: T,
    pub argmax: BoundArgmax<T>,
    pub any_violation: bool,
}

/// Evaluates `|S|` on `n` seeded product-state draws.
///
/// Draws are evaluated in parallel; the maximum is reduced with ties broken
/// by lowest index, so the report is identical for any thread count.
pub fn product_bound_sample<T: Real>(n: u64, seed: u64) -> Result<BoundSampleReport<T>, ChshError> {
    if n == 0 {
        return Err(ChshError::NoSamples);
    }
    let best = (0..n)
        .into_par_iter()
        .map(|i| -> Result<BoundArgmax<T>, ChshError> {
            let (params, angles) = sample_pair::<T>(seed, i);
            let state = product_state(&params, T::one())?;
            let r = chsh_value(&state, angles)?;
            Ok(BoundArgmax {
                index: i,
                params,
                angles,
                s_value: r.s_value,
            })
        })
        .try_reduce_with(|a, b| {
            let (fa, fb) = (a.s_value.abs(), b.s_value.abs());
            Ok(if fb > fa || (fb == fa && b.index < a.index) {
                b
            } else {
                a
            })
        })
        .expect("n >= 1")?;
    let max_abs_s = best.s_value.abs();
    Ok(BoundSampleReport {
        samples: n,
        seed,
        max_abs_s,
        any_violation: max_abs_s > T::lit(VIOLATION_THRESHOLD),
        argmax: best,
    })
}

fn product_objective<T: Real>(sign: T) -> impl Fn(&[T]) -> T {
    move |x: &[T]| {
        let p = ProductStateParams {
            alpha: x[0],
            beta: x[1],
            gamma: x[2],
            delta: x[3],
        };
        let s = product_state(&p, T::one()).expect("unit intensity");
        sign * s_of(&s, &x[4..])
    }
}

/// Coordinate ascent of `|S|` jointly over the four product-state angles
/// and the four analyzer angles.
pub fn product_ascent<T: Real>(
    params: ProductStateParams<T>,
    angles: AngleSet<T>,
    tol: T,
) -> Result<BoundArgmax<T>, ChshError> {
    if !(tol > T::zero()) {
        return Err(ChshError::BadTolerance);
    }
    let mut x = vec![params.alpha, params.beta, params.gamma, params.delta];
    x.extend(angles.to_array());
    let s0 = product_objective(T::one())(&x);
    let sign = if s0 < T::zero() { -T::one() } else { T::one() };
    let out = coordinate_ascent(product_objective(sign), &x, tol);
    Ok(BoundArgmax {
        index: 0,
        params: ProductStateParams::new(out.point[0], out.point[1], out.point[2], out.point[3])?,
        angles: AngleSet::from_slice(&out.point[4..]),
        s_value: sign * out.value,
    })
}

/// Runs [`product_ascent`] from the sampled argmax of a bound report.
pub fn refine_bound<T: Real>(report: &BoundSampleReport<T>, tol: T) -> Result<BoundArgmax<T>, ChshError> {
    let mut best = product_ascent(report.argmax.params, report.argmax.angles, tol)?;
    best.index = report.argmax.index;
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    /// `θ₁ = 0, θ₂ = π/2, φ₁ = x, φ₂ = −x`
    Slice,
    /// All four angles over the grid, `θ₁` outermost.
    Full,
}

/// `k`-th of `n` evenly spaced points on `[−π, π]`.
pub fn grid_point<T: Real>(k: usize, n: usize) -> T {
    T::lit(-PI + TAU * k as f64 / (n - 1) as f64)
}

/// Sweeps `S` for a given state. Rows come out in lexicographic grid order.
pub fn scan_state<T: Real>(
    s: &BeamState<T>,
    grid: usize,
    mode: ScanMode,
) -> Result<Vec<ChshResult<T>>, ChshError> {
    if grid < 2 {
        return Err(ChshError::GridTooSmall(grid));
    }
    let g = |k| grid_point::<T>(k, grid);
    let angle_sets: Vec<AngleSet<T>> = match mode {
        ScanMode::Slice => (0..grid)
            .map(|k| AngleSet::new(T::zero(), T::FRAC_PI_2(), g(k), -g(k)))
            .collect(),
        ScanMode::Full => (0..grid.pow(4))
            .map(|idx| {
                let (i, j, k, l) = (
                    idx / grid.pow(3),
                    (idx / grid.pow(2)) % grid,
                    (idx / grid) % grid,
                    idx % grid,
                );
                AngleSet::new(g(i), g(j), g(k), g(l))
            })
            .collect(),
    };
    let rows: Result<Vec<_>, MeasurementError> = angle_sets
        .into_par_iter()
        .map(|a| chsh_value(s, a))
        .collect();
    Ok(rows?)
}

pub fn violation_scan<T: Real>(
    kind: BellKind,
    grid: usize,
    mode: ScanMode,
) -> Result<Vec<ChshResult<T>>, ChshError> {
    scan_state(&bell_state(kind, T::one())?, grid, mode)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult<T> {
    pub angles: AngleSet<T>,
    pub s_value: T,
    pub sweeps: usize,
}

impl<T> From<AscentOutcome<T>> for SearchResult<T>
where
    T: Real,
{
    fn from(o: AscentOutcome<T>) -> Self {
        Self {
            angles: AngleSet::from_slice(&o.point),
            s_value: o.value,
            sweeps: o.sweeps,
        }
    }
}

/// Maximizes `S` over the analyzer angles starting at `start`.
pub fn max_violation_search_from<T: Real>(
    s: &BeamState<T>,
    start: AngleSet<T>,
    tol: T,
) -> Result<SearchResult<T>, ChshError> {
    if !(tol > T::zero()) {
        return Err(ChshError::BadTolerance);
    }
    Ok(coordinate_ascent(|x| s_of(s, x), &start.to_array(), tol).into())
}

/// Maximizes `S` for an arbitrary state: coarse grid over `[0, 2π)⁴`, then
/// coordinate ascent from the best grid point.
pub fn max_violation_search_state<T: Real>(
    s: &BeamState<T>,
    tol: T,
) -> Result<SearchResult<T>, ChshError> {
    if !(tol > T::zero()) {
        return Err(ChshError::BadTolerance);
    }
    let step = TAU / SEARCH_GRID as f64;
    let n = SEARCH_GRID;
    let best = (0..n.pow(4))
        .into_par_iter()
        .map(|idx| {
            let a = AngleSet::new(
                T::lit(step * (idx / n.pow(3)) as f64),
                T::lit(step * ((idx / n.pow(2)) % n) as f64),
                T::lit(step * ((idx / n) % n) as f64),
                T::lit(step * (idx % n) as f64),
            );
            (idx, a, s_of(s, &a.to_array()))
        })
        .reduce_with(|a, b| if b.2 > a.2 || (b.2 == a.2 && b.0 < a.0) { b } else { a })
        .expect("non-empty grid");
    max_violation_search_from(s, best.1, tol)
}

pub fn max_violation_search<T: Real>(kind: BellKind, tol: T) -> Result<SearchResult<T>, ChshError> {
    max_violation_search_state(&bell_state(kind, T::one())?, tol)
}
