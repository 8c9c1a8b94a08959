//! Derivative-free maximization over periodic angle variables.

use std::f64::consts::TAU;

use crate::scalar::Real;

/// Coarse samples per coordinate before the golden-section bracket.
const COARSE_SAMPLES: usize = 24;
const GOLDEN_ITERS: usize = 90;
const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct AscentOutcome<T> {
    pub point: Vec<T>,
    pub value: T,
    pub sweeps: usize,
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
pub fn golden_section_max<T: Real>(mut f: impl FnMut(T) -> T, mut lo: T, mut hi: T) -> (T, T) {
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo <= T::epsilon() * (T::one() + lo.abs().max(hi.abs())) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Best point along one periodic coordinate: a coarse scan over a full period
/// centred at the current value, refined by golden section around the best
/// sample.
fn line_max<T: Real>(mut g: impl FnMut(T) -> T, x0: T) -> (T, T) {
    let tau = T::lit(TAU);
    let step = tau / T::lit(COARSE_SAMPLES as f64);
    let mut best = (x0, g(x0));
    for k in 1..COARSE_SAMPLES {
        let x = x0 - T::PI() + step * T::lit(k as f64);
        let v = g(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let refined = golden_section_max(&mut g, best.0 - step, best.0 + step);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

/// Cyclic coordinate ascent. Each sweep maximizes along every coordinate in
/// turn; a move is taken only if it strictly increases `f`. Stops once a full
/// sweep improves the objective by less than `tol`.
pub fn coordinate_ascent<T: Real>(f: impl Fn(&[T]) -> T, start: &[T], tol: T) -> AscentOutcome<T> {
    let mut x = start.to_vec();
    let mut value = f(&x);
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let before = value;
        for i in 0..x.len() {
            let mut probe = x.clone();
            let (xi, vi) = line_max(
                |t| {
                    probe[i] = t;
                    f(&probe)
                },
                x[i],
            );
            if vi > value {
                x[i] = xi;
                value = vi;
            }
        }
        if value - before < tol {
            break;
        }
    }
    AscentOutcome {
        point: x,
        value,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_cosine_peak() {
        let (x, v) = golden_section_max(|t: f64| (t - 0.3).cos(), -1.0, 1.5);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ascent_on_separable_sum() {
        let f = |x: &[f64]| (x[0] - 1.0).cos() + 2.0 * (x[1] + 0.5).sin();
        let out = coordinate_ascent(f, &[3.0, 3.0], 1e-12);
        assert!((out.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn ascent_from_optimum_is_fixed_point() {
        let f = |x: &[f64]| x[0].cos() + x[1].cos();
        let out = coordinate_ascent(f, &[0.0, 0.0], 1e-9);
        assert_eq!(out.sweeps, 1);
        assert_eq!(out.value, 2.0);
        assert_eq!(out.point, vec![0.0, 0.0]);
    }
}
