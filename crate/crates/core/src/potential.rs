//! Normalized logarithmic potential of a radial measure.
//!
//! `V(r) = ∫_1^r ν(D_s)/s ds`, so `V(1) = 0` and `r V'(r) = ν(D_r)`. In the
//! variable `u = ln r` this is `V = ∫_0^u M(e^s) ds` with `M` the open-disk
//! mass function. Values are cached on a fine `u`-grid at construction; any
//! other point costs one 8-point Gauss rule on the enclosing cell.

use std::sync::Arc;

use crate::error::Result;
use crate::logspace::panel_points;
use crate::measure::RadialMeasure;
use crate::quad::{gauss_legendre8, integrate, integrate_split, Tolerance};

const GRID_HALF_WIDTH: f64 = 60.0;
const GRID_STEP: f64 = 0.025;
const ORIGIN_CUTOFF: f64 = -745.0;
const TOL: Tolerance = Tolerance::new(1e-15, 1e-15);

/// Logarithmic potential with `V(1) = 0`. Cloning is cheap: the cached
/// table is shared.
#[derive(Clone, Debug)]
pub struct RadialPotential(Arc<Cache>);

#[derive(Debug)]
struct Cache {
    measure: RadialMeasure,
    nodes: Vec<f64>,
    values: Vec<f64>,
    at_origin: f64,
}

impl RadialPotential {
    pub fn new(measure: RadialMeasure) -> Result<Self> {
        let steps = (GRID_HALF_WIDTH / GRID_STEP).round() as i64;
        let mut nodes: Vec<f64> = (-steps..=steps).map(|i| i as f64 * GRID_STEP).collect();
        nodes.extend(
            measure
                .log_breakpoints()
                .iter()
                .copied()
                .filter(|u| u.abs() < GRID_HALF_WIDTH),
        );
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let zero = nodes.iter().position(|&x| x == 0.0).expect("grid contains 0");

        let m = |s: f64| measure.mass_in_disk(s.exp());
        let mut values = vec![0.0; nodes.len()];
        for i in zero..nodes.len() - 1 {
            values[i + 1] = values[i] + integrate(m, nodes[i], nodes[i + 1], TOL)?.value;
        }
        for i in (1..=zero).rev() {
            values[i - 1] = values[i] - integrate(m, nodes[i - 1], nodes[i], TOL)?.value;
        }

        let lo = nodes[0];
        let pts = panel_points(ORIGIN_CUTOFF, lo, measure.log_breakpoints());
        let mut below = integrate_split(m, &pts, TOL)?.value;
        if let Some(p) = measure.origin_exponent() {
            below += p.lambda * (p.alpha * ORIGIN_CUTOFF).exp() / p.alpha;
        }
        let at_origin = values[0] - below;
        Ok(Self(Arc::new(Cache { measure, nodes, values, at_origin })))
    }

    pub fn measure(&self) -> &RadialMeasure {
        &self.0.measure
    }

    /// `V(r)`; `r = 0` gives the (finite) limit at the origin.
    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return self.0.at_origin;
        }
        self.at_log_radius(r.ln())
    }

    /// `V(0)`.
    pub fn at_origin(&self) -> f64 {
        self.0.at_origin
    }

    /// `V(e^u)`.
    pub fn at_log_radius(&self, u: f64) -> f64 {
        if u == f64::NEG_INFINITY {
            return self.0.at_origin;
        }
        let m = |s: f64| self.0.measure.mass_in_disk(s.exp());
        let first = self.0.nodes[0];
        let last = self.0.nodes[self.0.nodes.len() - 1];
        if u < first {
            let pts = panel_points(u, first, self.0.measure.log_breakpoints());
            let below = integrate_split(m, &pts, TOL).map(|e| e.value).unwrap_or(f64::NAN);
            return self.0.values[0] - below;
        }
        if u > last {
            let pts = panel_points(last, u, self.0.measure.log_breakpoints());
            let above = integrate_split(m, &pts, TOL).map(|e| e.value).unwrap_or(f64::NAN);
            return self.0.values[self.0.values.len() - 1] + above;
        }
        let i = self.0.nodes.partition_point(|&x| x <= u).saturating_sub(1).min(self.0.nodes.len() - 2);
        let a = self.0.nodes[i];
        if u == a {
            return self.0.values[i];
        }
        self.0.values[i] + gauss_legendre8(m, a, u)
    }

    /// Points `ln r` where `V` fails to be smooth.
    pub fn log_breakpoints(&self) -> &[f64] {
        self.0.measure.log_breakpoints()
    }
}
