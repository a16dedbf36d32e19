//! Integration of `exp(ψ(u))` in the log-radius variable `u = ln r`.
//!
//! The integrands met here (radial densities `r^{2k+1} e^{-cV(r)}`,
//! weighted moments of the radial law) span hundreds of orders of
//! magnitude, so everything is shifted by the peak of `ψ` first. The
//! integration window is the region where `ψ` lies within `drop` of its peak.

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre8, integrate, integrate_split, Tolerance};

/// Drop below the peak, in nats, at which an integrand is considered
/// negligible (`1e-18` relative).
pub(crate) const DROP: f64 = 41.45;

const SCAN_HALF_WIDTH: f64 = 60.0;
const SCAN_STEP: f64 = 0.05;
const MAX_SCAN_POINTS: usize = 40_000;
const EXTENSION_LIMIT: f64 = 740.0;

pub(crate) const TOL: Tolerance = Tolerance::new(1e-16, 1e-13);

/// Tolerance for `exp(ψ)` when the terms making up `ψ` have absolute size up
/// to `scale`: their rounding puts a floor of about `ε scale` under the
/// relative accuracy.
fn noisy(base: Tolerance, scale: f64) -> Tolerance {
    Tolerance::new(base.abs, base.rel.max(16.0 * f64::EPSILON * scale))
}

fn term_scale<G: Fn(f64) -> f64>(terms: &G, w: &Window) -> f64 {
    [terms(w.lo), terms(w.hi), w.peak.abs()].into_iter().filter(|v| v.is_finite()).fold(0.0, f64::max)
}

/// Where an integrand lives: the peak value of `ψ` and the window outside of
/// which `ψ < peak - drop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Window {
    pub peak: f64,
    pub lo: f64,
    pub hi: f64,
}

pub(crate) fn find_window<F: Fn(f64) -> f64>(psi: &F, domain: (f64, f64), drop: f64) -> Result<Window> {
    let (d0, d1) = domain;
    if !(d1 > d0) {
        return Err(Error::Domain(format!("empty integration domain [{d0}, {d1}]")));
    }
    let a = if d0.is_finite() { d0 } else { (-SCAN_HALF_WIDTH).min(d1 - 1.0) };
    let b = if d1.is_finite() { d1 } else { SCAN_HALF_WIDTH.max(a + 1.0) };
    let steps = (((b - a) / SCAN_STEP).ceil() as usize).clamp(8, MAX_SCAN_POINTS);
    let h = (b - a) / steps as f64;
    let values: Vec<f64> = (0..=steps)
        .map(|i| {
            let u = if i == steps { b } else { a + i as f64 * h };
            let v = psi(u);
            if v.is_nan() {
                f64::NEG_INFINITY
            } else {
                v
            }
        })
        .collect();
    let (imax, &scan_peak) = values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty scan");
    if scan_peak == f64::NEG_INFINITY {
        return Err(Error::Domain("integrand vanishes on its domain".into()));
    }
    if scan_peak == f64::INFINITY {
        return Err(Error::Divergent { what: "log-space integrand", index: imax });
    }
    let peak = refine_peak(psi, a + imax.saturating_sub(1) as f64 * h, a + (imax + 1).min(steps) as f64 * h)
        .max(scan_peak);

    let threshold = peak - drop;
    let first = values.iter().position(|&v| v > threshold).unwrap_or(imax);
    let last = values.iter().rposition(|&v| v > threshold).unwrap_or(imax);
    let mut lo = a + first.saturating_sub(1) as f64 * h;
    let mut hi = if last + 1 >= steps { b } else { a + (last + 1) as f64 * h };

    if first == 0 && !d0.is_finite() {
        lo = extend(psi, a, -1.0, threshold)?;
    }
    if last == steps && !d1.is_finite() {
        hi = extend(psi, b, 1.0, threshold)?;
    }
    Ok(Window { peak, lo: lo.max(d0), hi: hi.min(d1) })
}

fn extend<F: Fn(f64) -> f64>(psi: &F, start: f64, direction: f64, threshold: f64) -> Result<f64> {
    let mut step = 1.0;
    let mut u = start;
    loop {
        u += direction * step;
        if u.abs() > EXTENSION_LIMIT {
            return Err(Error::Divergent { what: "log-space tail", index: 0 });
        }
        if psi(u) < threshold {
            return Ok(u);
        }
        step = (step * 1.5).min(25.0);
    }
}

fn refine_peak<F: Fn(f64) -> f64>(psi: &F, mut a: f64, mut b: f64) -> f64 {
    // Golden-section search; only used to get a tight shift, so a local
    // maximum near the scan maximum is enough.
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = psi(c);
    let mut fd = psi(d);
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = psi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = psi(d);
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    fc.max(fd)
}

/// Breakpoints strictly inside `(lo, hi)`, bracketed by the two ends.
pub(crate) fn panel_points(lo: f64, hi: f64, breaks: &[f64]) -> Vec<f64> {
    let mut pts = Vec::with_capacity(breaks.len() + 2);
    pts.push(lo);
    pts.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `ln ∫_domain exp(ψ(u)) du`.
pub(crate) fn ln_integral<F: Fn(f64) -> f64>(psi: &F, breaks: &[f64], domain: (f64, f64)) -> Result<f64> {
    ln_integral_with(psi, &|u| psi(u).abs(), breaks, domain)
}

/// As [`ln_integral`], with `terms(u)` bounding the size of the summands
/// of `ψ(u)`.
pub(crate) fn ln_integral_with<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(
    psi: &F,
    terms: &G,
    breaks: &[f64],
    domain: (f64, f64),
) -> Result<f64> {
    let w = find_window(psi, domain, DROP)?;
    let pts = panel_points(w.lo, w.hi, breaks);
    let tol = noisy(TOL, term_scale(terms, &w));
    let est = integrate_split(|u| (psi(u) - w.peak).exp(), &pts, tol)?;
    if !(est.value > 0.0) {
        return Err(Error::Domain("integral vanished".into()));
    }
    Ok(w.peak + est.value.ln())
}

/// Tabulated cumulative integral of `exp(ψ - shift)` on a node grid, for
/// CDF evaluation and inversion.
#[derive(Clone, Debug)]
pub(crate) struct CumulativeTable {
    pub shift: f64,
    nodes: Vec<f64>,
    /// Integral of each segment `[nodes[i], nodes[i+1]]`.
    segments: Vec<f64>,
    prefix: Vec<f64>,
    suffix: Vec<f64>,
    total: f64,
}

impl CumulativeTable {
    /// `terms(u)` bounds the size of the summands of `ψ(u)`.
    pub fn build<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(
        psi: &F,
        terms: &G,
        breaks: &[f64],
        domain: (f64, f64),
        grid: usize,
    ) -> Result<Self> {
        let w = find_window(psi, domain, DROP)?;
        let tol = noisy(Tolerance::new(1e-18, 1e-14), term_scale(terms, &w));
        let mut nodes: Vec<f64> = (0..=grid)
            .map(|i| w.lo + (w.hi - w.lo) * i as f64 / grid as f64)
            .collect();
        *nodes.last_mut().expect("grid") = w.hi;
        nodes.extend(breaks.iter().copied().filter(|&x| x > w.lo && x < w.hi));
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let shift = w.peak;
        let g = |u: f64| (psi(u) - shift).exp();
        let mut segments = Vec::with_capacity(nodes.len() - 1);
        for s in nodes.windows(2) {
            let est = integrate(g, s[0], s[1], tol)?;
            segments.push(est.value);
        }
        let mut prefix = Vec::with_capacity(nodes.len());
        let mut acc = 0.0;
        prefix.push(0.0);
        for s in &segments {
            acc += s;
            prefix.push(acc);
        }
        let mut suffix = vec![0.0; nodes.len()];
        let mut acc = 0.0;
        for i in (0..segments.len()).rev() {
            acc += segments[i];
            suffix[i] = acc;
        }
        let total = prefix[prefix.len() - 1];
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Domain("cumulative table has no mass".into()));
        }
        Ok(Self { shift, nodes, segments, prefix, suffix, total })
    }

    /// `ln ∫ exp ψ` over the window.
    pub fn ln_total(&self) -> f64 {
        self.shift + self.total.ln()
    }

    pub fn lo(&self) -> f64 {
        self.nodes[0]
    }

    pub fn hi(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    fn segment_of(&self, u: f64) -> usize {
        let i = self.nodes.partition_point(|&x| x <= u);
        i.saturating_sub(1).min(self.segments.len() - 1)
    }

    fn partial<F: Fn(f64) -> f64>(&self, psi: &F, i: usize, u: f64) -> f64 {
        let a = self.nodes[i];
        if u <= a {
            return 0.0;
        }
        gauss_legendre8(|x| (psi(x) - self.shift).exp(), a, u)
    }

    /// Normalized cumulative mass up to `u`.
    pub fn cdf<F: Fn(f64) -> f64>(&self, psi: &F, u: f64) -> f64 {
        if u <= self.lo() {
            return 0.0;
        }
        if u >= self.hi() {
            return 1.0;
        }
        let i = self.segment_of(u);
        ((self.prefix[i] + self.partial(psi, i, u)) / self.total).clamp(0.0, 1.0)
    }

    /// Normalized mass above `u`, computed from the right to keep relative
    /// precision in the upper tail.
    pub fn survival<F: Fn(f64) -> f64>(&self, psi: &F, u: f64) -> f64 {
        if u <= self.lo() {
            return 1.0;
        }
        if u >= self.hi() {
            return 0.0;
        }
        let i = self.segment_of(u);
        let inside = (self.segments[i] - self.partial(psi, i, u)).max(0.0);
        ((self.suffix[i + 1] + inside) / self.total).clamp(0.0, 1.0)
    }

    /// Inverse of [`cdf`](Self::cdf): Hermite initial guess on the inverse
    /// function, then safeguarded Newton.
    pub fn quantile<F: Fn(f64) -> f64>(&self, psi: &F, p: f64) -> f64 {
        if p <= 0.0 {
            return self.lo();
        }
        if p >= 1.0 {
            return self.hi();
        }
        let target = p * self.total;
        let i = self.prefix.partition_point(|&c| c <= target).saturating_sub(1).min(self.segments.len() - 1);
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let (c0, c1) = (self.prefix[i], self.prefix[i + 1]);
        let g = |x: f64| (psi(x) - self.shift).exp();
        let seg = c1 - c0;
        if !(seg > 0.0) {
            return a;
        }
        // Monotone cubic Hermite for u(c) with slopes 1/g at the nodes.
        let h = b - a;
        let secant = h / seg;
        let limit = 3.0 * secant;
        let m0 = (1.0 / g(a)).min(limit);
        let m1 = (1.0 / g(b)).min(limit);
        let t = (target - c0) / seg;
        let (t2, t3) = (t * t, t * t * t);
        let guess = (2.0 * t3 - 3.0 * t2 + 1.0) * a
            + (t3 - 2.0 * t2 + t) * seg * m0
            + (-2.0 * t3 + 3.0 * t2) * b
            + (t3 - t2) * seg * m1;
        let mut u = if guess.is_finite() { guess.clamp(a, b) } else { a + t * h };
        let (mut lo, mut hi) = (a, b);
        let want = target - c0;
        let tol = 1e-14 * self.total;
        for _ in 0..100 {
            let f = self.partial(psi, i, u) - want;
            if f.abs() <= tol {
                break;
            }
            if f > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let d = g(u);
            let mut next = u - f / d;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (hi - lo) <= 1e-15 * (1.0 + u.abs()) {
                u = next;
                break;
            }
            u = next;
        }
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_in_log_space() {
        // ∫ exp(-(u-3)^2 / 2 + 500) du = sqrt(2π) e^500
        let psi = |u: f64| -0.5 * (u - 3.0) * (u - 3.0) + 500.0;
        let v = ln_integral(&psi, &[], (f64::NEG_INFINITY, f64::INFINITY)).unwrap();
        assert_relative_eq!(v, 500.0 + (2.0 * std::f64::consts::PI).sqrt().ln(), max_relative = 1e-14);
    }

    #[test]
    fn one_sided_exponential() {
        // ∫_0^∞ e^{-2u} du = 1/2, with a kink at the boundary.
        let psi = |u: f64| if u < 0.0 { f64::NEG_INFINITY } else { -2.0 * u };
        let v = ln_integral(&psi, &[0.0], (0.0, f64::INFINITY)).unwrap();
        assert_relative_eq!(v, 0.5f64.ln(), max_relative = 1e-12);
    }

    #[test]
    fn table_quantile_inverts_cdf() {
        let psi = |u: f64| 2.0 * u - (1.0 + (2.0 * u).exp()).ln() * 3.0;
        let t = CumulativeTable::build(&psi, &|u: f64| psi(u).abs(), &[], (f64::NEG_INFINITY, f64::INFINITY), 256).unwrap();
        for j in 1..20 {
            let p = j as f64 / 20.0;
            let u = t.quantile(&psi, p);
            assert!((t.cdf(&psi, u) - p).abs() < 1e-12);
            assert!((t.cdf(&psi, u) + t.survival(&psi, u) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn slow_tail_is_followed() {
        // e^{-0.2 u} on [0, ∞) is still above the cutoff at the end of the
        // scan range, so the window has to be extended.
        let psi = |u: f64| if u < 0.0 { f64::NEG_INFINITY } else { -0.2 * u };
        let v = ln_integral(&psi, &[0.0], (0.0, f64::INFINITY)).unwrap();
        assert_relative_eq!(v, 5f64.ln(), max_relative = 1e-12);
    }
}
