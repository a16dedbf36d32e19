//! The radial jellium at inverse temperature 2.
//!
//! The moduli of the `n` particles are independent, the `k`-th one having
//! density proportional to `r^{2k+1} e^{-2(n+1)V(r)}`, `k = 0..n-1`, and the
//! arguments are i.i.d. uniform. This gives exact sampling, the kernel
//! coefficients `b_{k,n}` and exact extremal-modulus laws.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Open01};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::kernel::{KernelSeries, KernelWeight, Orientation};
use crate::logspace::CumulativeTable;
use crate::measure::RadialMeasure;
use crate::points::{PointConfiguration, Provenance};
use crate::potential::RadialPotential;

const CDF_GRID: usize = 256;

/// Law on `(0, ∞)` with density proportional to `r^{2k+1} e^{-c V(r)}`.
#[derive(Clone, Debug)]
pub struct RadialWeightDensity {
    k: usize,
    exponent_scale: f64,
    potential: RadialPotential,
    table: CumulativeTable,
}

impl RadialWeightDensity {
    pub fn new(potential: RadialPotential, k: usize, exponent_scale: f64) -> Result<Self> {
        if !(exponent_scale > 0.0 && exponent_scale.is_finite()) {
            return Err(invalid(format!("exponent scale must be positive, got {exponent_scale}")));
        }
        // V(r) = log r + O(1) at infinity, so integrability needs c > 2k + 2.
        if exponent_scale <= 2.0 * k as f64 + 2.0 {
            return Err(Error::Divergent { what: "radial normalization", index: k });
        }
        let psi = |u: f64| (2 * k + 2) as f64 * u - exponent_scale * potential.at_log_radius(u);
        let terms = |u: f64| (2 * k + 2) as f64 * u.abs() + exponent_scale * potential.at_log_radius(u).abs();
        let table = CumulativeTable::build(
            &psi,
            &terms,
            potential.log_breakpoints(),
            (f64::NEG_INFINITY, f64::INFINITY),
            CDF_GRID,
        )?;
        Ok(Self { k, exponent_scale, potential, table })
    }

    fn psi(&self, u: f64) -> f64 {
        (2 * self.k + 2) as f64 * u - self.exponent_scale * self.potential.at_log_radius(u)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn exponent_scale(&self) -> f64 {
        self.exponent_scale
    }

    /// `ln(2π ∫_0^∞ r^{2k+1} e^{-cV(r)} dr)`.
    pub fn ln_normalization(&self) -> f64 {
        (2.0 * PI).ln() + self.table.ln_total()
    }

    pub fn normalization(&self) -> f64 {
        self.ln_normalization().exp()
    }

    /// Probability density at radius `r`.
    pub fn pdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let u = r.ln();
        (self.psi(u) - self.table.ln_total() - u).exp()
    }

    /// `P(Y ≤ t)`.
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.table.cdf(&|u| self.psi(u), t.ln())
    }

    /// `P(Y > t)`, accurate in the upper tail.
    pub fn survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        self.table.survival(&|u| self.psi(u), t.ln())
    }

    /// Inverse CDF.
    pub fn quantile(&self, p: f64) -> f64 {
        self.table.quantile(&|u| self.psi(u), p).exp()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let p: f64 = Open01.sample(rng);
        self.quantile(p)
    }
}

/// Minimum or maximum modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremal {
    Max,
    Min,
}

/// A jellium of `n` particles: the potential together with the `n` radial
/// laws, built once and shared by all samples.
#[derive(Clone, Debug)]
pub struct Jellium {
    potential: RadialPotential,
    n: usize,
    densities: Vec<RadialWeightDensity>,
}

impl Jellium {
    pub fn new(measure: &RadialMeasure, n: usize) -> Result<Self> {
        Self::from_potential(RadialPotential::new(measure.clone())?, n)
    }

    pub fn from_potential(potential: RadialPotential, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("jellium needs n ≥ 1"));
        }
        let c = 2.0 * (n as f64 + 1.0);
        let densities = (0..n)
            .into_par_iter()
            .map(|k| RadialWeightDensity::new(potential.clone(), k, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { potential, n, densities })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn potential(&self) -> &RadialPotential {
        &self.potential
    }

    pub fn density(&self, k: usize) -> &RadialWeightDensity {
        &self.densities[k]
    }

    pub fn densities(&self) -> &[RadialWeightDensity] {
        &self.densities
    }

    /// `ln b_{k,n}`.
    pub fn ln_coefficient(&self, k: usize) -> f64 {
        -self.densities[k].ln_normalization()
    }

    /// `b_{k,n} = 1 / (2π ∫ r^{2k+1} e^{-2(n+1)V} dr)`.
    pub fn coefficient(&self, k: usize) -> f64 {
        self.ln_coefficient(k).exp()
    }

    /// One configuration of `n` points, in random order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PointConfiguration {
        let mut points: Vec<Complex64> = self
            .densities
            .iter()
            .map(|d| {
                let r = d.sample(rng);
                let theta = 2.0 * PI * rng.random::<f64>();
                Complex64::from_polar(r, theta)
            })
            .collect();
        points.shuffle(rng);
        PointConfiguration::new(points, Provenance::Jellium)
    }

    /// Moduli only, one per radial law, in index order.
    pub fn sample_moduli<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.densities.iter().map(|d| d.sample(rng)).collect()
    }

    /// `P(max |x_k| ≤ t)` or `P(min |x_k| ≤ t)`.
    pub fn extremal_cdf(&self, t: f64, which: Extremal) -> f64 {
        match which {
            Extremal::Max => {
                let ln: f64 = self.densities.iter().map(|d| d.cdf(t).ln()).sum();
                ln.exp()
            }
            Extremal::Min => {
                let ln: f64 = self.densities.iter().map(|d| d.survival(t).ln()).sum();
                -ln.exp_m1()
            }
        }
    }

    /// Kernel `K_n(z,w) = Σ b_{k,n} (z w̄)^k e^{-(n+1)(V(z)+V(w))}`.
    pub fn kernel(&self) -> KernelSeries {
        self.rescaled_kernel(1.0)
    }

    /// Kernel of the dilated configuration `{s x_k}`:
    /// `s^{-2} K_n(z/s, w/s)`. With `s = n^{1/α}` this is the zoom at the
    /// origin.
    pub fn rescaled_kernel(&self, s: f64) -> KernelSeries {
        let ls = s.ln();
        let ln_c = (0..self.n)
            .map(|k| self.ln_coefficient(k) - (2 * k + 2) as f64 * ls)
            .collect();
        KernelSeries::new(
            ln_c,
            KernelWeight::Potential {
                potential: self.potential.clone(),
                exponent: self.n as f64 + 1.0,
                arg_scale: 1.0 / s,
            },
            Orientation::Origin,
        )
    }
}

/// `b_{k,n}` for a single index.
pub fn coefficient_bkn(potential: &RadialPotential, n: usize, k: usize) -> Result<f64> {
    Ok((-radial_density(potential, n, k)?.ln_normalization()).exp())
}

/// Radial law of the `k`-th modulus in the `n`-particle jellium.
pub fn radial_density(potential: &RadialPotential, n: usize, k: usize) -> Result<RadialWeightDensity> {
    if k >= n {
        return Err(invalid(format!("index k = {k} must be below n = {n}")));
    }
    RadialWeightDensity::new(potential.clone(), k, 2.0 * (n as f64 + 1.0))
}

/// One exact sample of the jellium.
pub fn sample_jellium<R: Rng + ?Sized>(measure: &RadialMeasure, n: usize, rng: &mut R) -> Result<PointConfiguration> {
    Ok(Jellium::new(measure, n)?.sample(rng))
}

pub fn finite_kernel(potential: &RadialPotential, n: usize) -> Result<KernelSeries> {
    Ok(Jellium::from_potential(potential.clone(), n)?.kernel())
}

pub fn rescaled_kernel(potential: &RadialPotential, n: usize, s: f64) -> Result<KernelSeries> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(invalid(format!("rescaling factor must be positive, got {s}")));
    }
    Ok(Jellium::from_potential(potential.clone(), n)?.rescaled_kernel(s))
}

/// Exact `P(max ≤ t)` / `P(min ≤ t)` for the `n`-particle jellium.
pub fn exact_extremal_cdf(potential: &RadialPotential, n: usize, t: f64, which: Extremal) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    Ok(Jellium::from_potential(potential.clone(), n)?.extremal_cdf(t, which))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Kernel;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn circle_potential() -> RadialPotential {
        RadialPotential::new(RadialMeasure::circle(1.0).unwrap()).unwrap()
    }

    #[test]
    fn circle_single_particle_closed_form() {
        let d = radial_density(&circle_potential(), 1, 0).unwrap();
        assert_relative_eq!(d.cdf(1.0), 0.5, max_relative = 1e-12);
        for &t in &[1.2, 2.0, 10.0] {
            assert_relative_eq!(d.cdf(t), 1.0 - 0.5 / (t * t), max_relative = 1e-12);
            assert_relative_eq!(d.survival(t), 0.5 / (t * t), max_relative = 1e-10);
        }
        // 2π (∫_0^1 r dr + ∫_1^∞ r^{-3} dr) = 2π.
        assert_relative_eq!(coefficient_bkn(&circle_potential(), 1, 0).unwrap(), 0.5 / PI, max_relative = 1e-12);
    }

    #[test]
    fn circle_coefficients_closed_form() {
        // b_{k,n} = (k+1)(n-k) / (π(n+1)).
        let j = Jellium::from_potential(circle_potential(), 30).unwrap();
        for k in 0..30 {
            let exact = (k + 1) as f64 * (30 - k) as f64 / (PI * 31.0);
            assert_relative_eq!(j.coefficient(k), exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let pot = RadialPotential::new(RadialMeasure::fubini_study()).unwrap();
        let j = Jellium::from_potential(pot, 12).unwrap();
        for d in j.densities() {
            for i in 1..10 {
                let p = i as f64 / 10.0;
                assert!((d.cdf(d.quantile(p)) - p).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(radial_density(&circle_potential(), 3, 3).is_err());
        assert!(Jellium::from_potential(circle_potential(), 0).is_err());
        assert!(RadialWeightDensity::new(circle_potential(), 4, 10.0).is_err());
    }

    #[test]
    fn kernel_at_origin() {
        let j = Jellium::from_potential(RadialPotential::new(RadialMeasure::uniform_disk(1.0).unwrap()).unwrap(), 5)
            .unwrap();
        let k = j.kernel();
        let v0 = j.potential().at_origin();
        let expected = j.coefficient(0) * (-2.0 * 6.0 * v0).exp();
        assert_relative_eq!(k.diagonal(Complex64::new(0.0, 0.0)), expected, max_relative = 1e-12);
        let s = j.rescaled_kernel(1.0);
        let z = Complex64::new(0.3, 0.1);
        assert_eq!(s.eval(z, z), k.eval(z, z));
    }

    #[test]
    fn sample_is_reproducible() {
        let j = Jellium::from_potential(circle_potential(), 10).unwrap();
        let a = j.sample(&mut ChaCha8Rng::seed_from_u64(3));
        let b = j.sample(&mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
    }
}
