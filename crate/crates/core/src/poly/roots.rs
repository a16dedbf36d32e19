//! Aberth–Ehrlich simultaneous root finding on log/phase coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dd;

const MAX_SWEEPS: usize = 512;
const STEP_TOL: f64 = 1e-13;
const MERGE_TOL: f64 = 1e-8;

/// All roots of a polynomial, with diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    /// Every root, repeated according to multiplicity.
    pub roots: Vec<Complex64>,
    /// Roots closer than `1e-8 (1 + |z|)` merged, with their multiplicity.
    pub clusters: Vec<(Complex64, usize)>,
    /// Largest scaled backward error `|p(z)| / Σ|c_k||z|^k` over the roots.
    pub max_backward_error: f64,
    pub sweeps: usize,
    /// False when the sweep cap was reached; the roots are then a partial
    /// approximation.
    pub converged: bool,
}

/// Value of `Σ c_k z^k` for `c_k = exp(ln_abs[k] + i phase[k])`, as
/// `(ln|p(z)|, arg p(z), ln Σ|c_k||z|^k)`. Each evaluation is rescaled so the
/// point lies on the unit circle and the largest term is 1, then summed with
/// compensated Horner.
pub(crate) fn evaluate_log(ln_abs: &[f64], phase: &[f64], z: Complex64) -> (f64, f64, f64) {
    let rho = z.norm();
    if rho == 0.0 {
        return (ln_abs[0], phase[0], ln_abs[0]);
    }
    let lr = rho.ln();
    let top = ln_abs
        .iter()
        .enumerate()
        .map(|(k, l)| l + k as f64 * lr)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut scale = 0.0;
    let coeffs: Vec<Complex64> = ln_abs
        .iter()
        .zip(phase)
        .enumerate()
        .map(|(k, (l, p))| {
            let m = (l + k as f64 * lr - top).exp();
            scale += m;
            Complex64::from_polar(m, *p)
        })
        .collect();
    let v = dd::horner(&coeffs, z / rho);
    (top + v.norm().ln(), v.arg(), top + scale.ln())
}

struct Work {
    q: Vec<Complex64>,
    qabs: Vec<f64>,
}

impl Work {
    /// Newton ratio `p/p'` at `y` and whether `|p(y)|` is at rounding level.
    fn newton(&self, y: Complex64) -> (Complex64, bool) {
        let m = self.q.len() - 1;
        let ya = y.norm();
        if ya <= 1.0 {
            let mut p = self.q[m];
            let mut dp = Complex64::new(0.0, 0.0);
            let mut bound = self.qabs[m];
            for k in (0..m).rev() {
                dp = dp * y + p;
                p = p * y + self.q[k];
                bound = bound * ya + self.qabs[k];
            }
            let small = p.norm() <= 8.0 * f64::EPSILON * bound * (m as f64).sqrt().max(1.0);
            if dp.norm() == 0.0 {
                return (Complex64::new(0.0, 0.0), small);
            }
            (p / dp, small)
        } else {
            let w = y.inv();
            let wa = w.norm();
            let mut r = self.q[0];
            let mut dr = Complex64::new(0.0, 0.0);
            let mut bound = self.qabs[0];
            for k in 1..=m {
                dr = dr * w + r;
                r = r * w + self.q[k];
                bound = bound * wa + self.qabs[k];
            }
            let small = r.norm() <= 8.0 * f64::EPSILON * bound * (m as f64).sqrt().max(1.0);
            let den = r * m as f64 - w * dr;
            if den.norm() == 0.0 {
                return (Complex64::new(0.0, 0.0), small);
            }
            (y * r / den, small)
        }
    }
}

/// Upper convex hull of `(k, t_k)` over finite `t_k`, as vertex indices.
fn upper_hull(t: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for (k, &v) in t.iter().enumerate() {
        if !v.is_finite() {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Drop b if it lies on or below the segment a–k.
            let cross = (b - a) as f64 * (v - t[a]) - (k - a) as f64 * (t[b] - t[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

fn initial_guesses(t: &[f64]) -> Vec<Complex64> {
    let m = t.len() - 1;
    let hull = upper_hull(t);
    let mut out = Vec::with_capacity(m);
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let count = j - i;
        let radius = ((t[i] - t[j]) / count as f64).exp();
        let offset = 2.0 * std::f64::consts::PI * i as f64 / m as f64 + 0.4;
        for l in 0..count {
            let theta = 2.0 * std::f64::consts::PI * l as f64 / count as f64 + offset;
            out.push(Complex64::from_polar(radius, theta));
        }
    }
    out
}

/// Roots of `Σ_k exp(ln_abs[k] + i phase[k]) z^k`. Zero coefficients are
/// given as `ln_abs = -inf`; the top coefficient must be nonzero.
pub(crate) fn find_roots_log(ln_abs: &[f64], phase: &[f64]) -> RootSet {
    let degree = ln_abs.len().saturating_sub(1);
    let low = ln_abs.iter().position(|l| l.is_finite()).unwrap_or(degree);
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let la = &ln_abs[low..];
    let ph = &phase[low..];
    let m = la.len() - 1;
    let mut sweeps = 0;
    let mut converged = true;

    if m > 0 {
        let sigma = (la[0] - la[m]) / m as f64;
        let t: Vec<f64> = la.iter().enumerate().map(|(k, l)| l + k as f64 * sigma).collect();
        let top = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let q: Vec<Complex64> = t.iter().zip(ph).map(|(v, p)| Complex64::from_polar((v - top).exp(), *p)).collect();
        let qabs = q.iter().map(|c| c.norm()).collect();
        let work = Work { q, qabs };
        let mut y = initial_guesses(&t);
        let mut done = vec![false; m];
        converged = false;
        while sweeps < MAX_SWEEPS {
            sweeps += 1;
            for i in 0..m {
                if done[i] {
                    continue;
                }
                let (ratio, small) = work.newton(y[i]);
                let mut s = Complex64::new(0.0, 0.0);
                for (j, yj) in y.iter().enumerate() {
                    if j != i {
                        s += (y[i] - yj).inv();
                    }
                }
                let den = Complex64::new(1.0, 0.0) - ratio * s;
                let step = if den.norm() > 0.0 && den.is_finite() { ratio / den } else { ratio };
                if step.is_finite() {
                    y[i] -= step;
                }
                if small || step.norm() <= STEP_TOL * y[i].norm() {
                    done[i] = true;
                }
            }
            if done.iter().all(|d| *d) {
                converged = true;
                break;
            }
        }
        let scale = sigma.exp();
        roots.extend(y.into_iter().map(|v| v * scale));
    }

    let max_backward_error = roots
        .iter()
        .map(|z| {
            let (lp, _, ls) = evaluate_log(ln_abs, phase, *z);
            (lp - ls).exp()
        })
        .fold(0.0, f64::max);
    let clusters = cluster(&roots);
    RootSet { roots, clusters, max_backward_error, sweeps, converged }
}

fn cluster(roots: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut assigned = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut members = vec![roots[i]];
        for j in i + 1..roots.len() {
            if !assigned[j] && (roots[j] - roots[i]).norm() < MERGE_TOL * (1.0 + roots[i].norm()) {
                assigned[j] = true;
                members.push(roots[j]);
            }
        }
        let center = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push((center, members.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_real(c: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let la = c.iter().map(|x| if *x == 0.0 { f64::NEG_INFINITY } else { x.abs().ln() }).collect();
        let ph = c.iter().map(|x| if *x < 0.0 { std::f64::consts::PI } else { 0.0 }).collect();
        (la, ph)
    }

    #[test]
    fn quadratic() {
        let (la, ph) = from_real(&[-1.0, 0.0, 1.0]);
        let r = find_roots_log(&la, &ph);
        assert!(r.converged);
        let mut re: Vec<f64> = r.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-14 && (re[1] - 1.0).abs() < 1e-14);
        assert!(r.roots.iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn triple_root() {
        let (la, ph) = from_real(&[-8.0, 12.0, -6.0, 1.0]);
        let r = find_roots_log(&la, &ph);
        assert_eq!(r.roots.len(), 3);
        for z in &r.roots {
            assert!((z - 2.0).norm() < 1e-4, "{z}");
        }
    }

    #[test]
    fn zero_roots_are_stripped() {
        let (la, ph) = from_real(&[0.0, 0.0, -4.0, 0.0, 1.0]);
        let r = find_roots_log(&la, &ph);
        assert_eq!(r.roots.len(), 4);
        assert_eq!(r.roots.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert_eq!(r.clusters.iter().find(|c| c.0.norm() == 0.0).map(|c| c.1), Some(2));
    }

    #[test]
    fn widely_scaled_roots() {
        // Roots 1e-6, 1, 1e6: coefficients span 12 orders of magnitude.
        let (a, b, c) = (1e-6, 1.0, 1e6);
        let coeffs = [-(a * b * c), a * b + a * c + b * c, -(a + b + c), 1.0];
        let (la, ph) = from_real(&coeffs);
        let r = find_roots_log(&la, &ph);
        let mut m: Vec<f64> = r.roots.iter().map(|z| z.norm()).collect();
        m.sort_by(f64::total_cmp);
        for (got, want) in m.iter().zip([a, b, c]) {
            assert!((got / want - 1.0).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn hull_of_concave_sequence_keeps_all_points() {
        let t = [0.0, 1.0, 1.5, 1.0, 0.0];
        assert_eq!(upper_hull(&t), vec![0, 1, 2, 3, 4]);
        let t = [0.0, -5.0, 0.0];
        assert_eq!(upper_hull(&t), vec![0, 2]);
    }
}
