//! One-dimensional quadrature.
//!
//! Globally adaptive Gauss–Kronrod (7/15) integration with user breakpoints,
//! plus a fixed 8-point Gauss–Legendre rule used for short partial segments
//! inside cached tables.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const XGL8: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];

const WGL8: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

const MAX_INTERVALS: usize = 20_000;

/// Absolute / relative stopping tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-10, 1e-12)
    }
}

/// Integral value with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Rounding floor of the panel, `50 ε ∫|f|`.
    noise: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    let mut abs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (l, r) = (f(center - dx), f(center + dx));
        let s = l + r;
        kron += WGK[j] * s;
        abs += WGK[j] * (l.abs() + r.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    Piece { a, b, value, error, noise: 50.0 * f64::EPSILON * abs * half.abs() }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_split(f, &[a, b], tol)
}

/// Integrates `f` over `[points[0], points[last]]`, never placing a panel
/// across one of the interior points. `points` must be nondecreasing.
pub fn integrate_split<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Result<Estimate> {
    if points.len() < 2 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut error = 0.0;
    let mut noise = 0.0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let p = kronrod(&f, w[0], w[1]);
            total += p.value;
            error += p.error;
            noise += p.noise;
            heap.push(p);
        }
    }
    while error > tol.target(total).max(noise) {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature { requested: tol.target(total), achieved: error });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            heap.push(worst);
            return Err(Error::Quadrature { requested: tol.target(total), achieved: error });
        }
        let left = kronrod(&f, worst.a, mid);
        let right = kronrod(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        noise += left.noise + right.noise - worst.noise;
        heap.push(left);
        heap.push(right);
        // Recompute from scratch now and then to shed accumulated rounding.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
            noise = heap.iter().map(|p| p.noise).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Estimate { value, error })
}

/// Fixed 8-point Gauss–Legendre rule on `[a, b]`.
#[inline]
pub fn gauss_legendre8<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for j in 0..4 {
        let dx = half * XGL8[j];
        acc += WGL8[j] * (f(center - dx) + f(center + dx));
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let est = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, Tolerance::default()).unwrap();
        assert_relative_eq!(est.value, 63.0 / 6.0 - 9.0, max_relative = 1e-14);
    }

    #[test]
    fn kink_is_handled_by_breakpoint() {
        let f = |x: f64| (x - 0.3).abs();
        let est = integrate_split(f, &[0.0, 0.3, 1.0], Tolerance::new(1e-15, 1e-15)).unwrap();
        assert_relative_eq!(est.value, 0.5 * (0.09 + 0.49), max_relative = 1e-14);
    }

    #[test]
    fn peaked_integrand_located_by_breakpoint() {
        // A narrow peak between Kronrod nodes is invisible to the first panel;
        // callers bracket peaks with breakpoints.
        let s = 1e-3;
        let f = |x: f64| (-(x - 0.4) * (x - 0.4) / (2.0 * s * s)).exp();
        let est = integrate_split(f, &[-2.0, 0.39, 0.41, 2.0], Tolerance::new(1e-14, 1e-12)).unwrap();
        assert_relative_eq!(est.value, s * (2.0 * std::f64::consts::PI).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn gauss_legendre_exact_to_degree_15() {
        let v = gauss_legendre8(|x| x.powi(14) + x.powi(15), 0.0, 1.0);
        assert_relative_eq!(v, 1.0 / 15.0 + 1.0 / 16.0, max_relative = 1e-14);
    }
}
