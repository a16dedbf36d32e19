//! Empirical CDFs, Kolmogorov–Smirnov distances, kernel sup-norm diagnostics
//! and seeded Monte Carlo campaigns over the extremal moduli of a model.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dpp::Jellium;
use crate::error::{invalid, Error, Result};
use crate::kernel::Kernel;
use crate::measure::RadialMeasure;
use crate::points::{PointConfiguration, Provenance};
use crate::poly::{sample_polynomial, weyl_polynomial, BasisNorms, CoefficientLaw, RootSet};

/// Sorted sample with step-function evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    values: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(invalid("sample contains NaN"));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sorted values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fraction of the sample `≤ t`.
    pub fn eval(&self, t: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.partition_point(|&x| x <= t) as f64 / self.values.len() as f64
    }

    /// Smallest sample value `x` with `eval(x) ≥ p`.
    pub fn quantile(&self, p: f64) -> Option<f64> {
        if self.values.is_empty() {
            return None;
        }
        let n = self.values.len();
        let i = ((p * n as f64).ceil() as usize).clamp(1, n) - 1;
        Some(self.values[i])
    }
}

/// Kolmogorov–Smirnov distance with the 95% DKW band `1.36/√N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub distance: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub band: f64,
}

impl KsResult {
    /// Whether the distance lies within the DKW band.
    pub fn within_band(&self) -> bool {
        self.distance <= self.band
    }
}

/// `sup_t |F_N(t) − F(t)|` by the order-statistics formula.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(invalid("KS distance of an empty sample"));
    }
    let e = EmpiricalCdf::new(samples.to_vec())?;
    Ok(ks_against(&e, cdf))
}

/// As [`ks_distance`] for an already sorted sample.
pub fn ks_against<F: Fn(f64) -> f64>(sample: &EmpiricalCdf, cdf: F) -> KsResult {
    let n = sample.len();
    let nf = n as f64;
    let distance = sample
        .values()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x).clamp(0.0, 1.0);
            ((i + 1) as f64 / nf - f).max(f - i as f64 / nf)
        })
        .fold(0.0, f64::max);
    KsResult { distance, n, band: 1.36 / nf.sqrt() }
}

/// Largest absolute and relative differences of two kernels on a grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupDiff {
    pub absolute: f64,
    /// Over points where `|K2| > 1e-6`.
    pub relative: f64,
    /// `max |K2|` over the grid.
    pub reference_max: f64,
}

pub fn kernel_sup_diff<A: Kernel + ?Sized, B: Kernel + ?Sized>(
    k1: &A,
    k2: &B,
    grid: &[(Complex64, Complex64)],
) -> SupDiff {
    let mut out = SupDiff { absolute: 0.0, relative: 0.0, reference_max: 0.0 };
    for &(z, w) in grid {
        let a = k1.eval(z, w);
        let b = k2.eval(z, w);
        let d = (a - b).norm();
        out.absolute = out.absolute.max(d);
        out.reference_max = out.reference_max.max(b.norm());
        if b.norm() > 1e-6 {
            out.relative = out.relative.max(d / b.norm());
        }
    }
    out
}

/// `41 × 41` real pairs in `[-R, R]²` plus 200 pairs drawn uniformly in the
/// disk `|z| ≤ R` from a fixed stream.
pub fn default_kernel_grid(radius: f64) -> Vec<(Complex64, Complex64)> {
    let mut grid = Vec::with_capacity(41 * 41 + 200);
    for i in 0..41 {
        for j in 0..41 {
            let x = -radius + 2.0 * radius * i as f64 / 40.0;
            let y = -radius + 2.0 * radius * j as f64 / 40.0;
            grid.push((Complex64::new(x, 0.0), Complex64::new(y, 0.0)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b65726e);
    let point = |rng: &mut ChaCha8Rng| {
        let r = radius * rng.random::<f64>().sqrt();
        Complex64::from_polar(r, 2.0 * std::f64::consts::PI * rng.random::<f64>())
    };
    for _ in 0..200 {
        let z = point(&mut rng);
        let w = point(&mut rng);
        grid.push((z, w));
    }
    grid
}

/// Random point models.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Jellium { measure: RadialMeasure, n: usize },
    /// Zeros of `Σ a_k z^k / √h_k` for the measure.
    PolyZeros { measure: RadialMeasure, n: usize, law: CoefficientLaw },
    /// Zeros of `Σ a_k √(n^k/k!) z^k`.
    Weyl { n: usize, law: CoefficientLaw },
}

/// Statistic of one configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    MaxMod,
    MinMod,
    InverseMax,
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_mod" | "max" => Ok(Statistic::MaxMod),
            "min_mod" | "min" => Ok(Statistic::MinMod),
            "inverse_max" => Ok(Statistic::InverseMax),
            other => Err(Error::Parse(format!("unknown statistic '{other}'"))),
        }
    }
}

/// A model with its precomputed tables, ready to sample.
#[derive(Clone, Debug)]
pub enum PreparedModel {
    Jellium(Jellium),
    PolyZeros { norms: BasisNorms, law: CoefficientLaw },
    Weyl { n: usize, law: CoefficientLaw },
}

impl PreparedModel {
    pub fn new(model: &Model) -> Result<Self> {
        Ok(match model {
            Model::Jellium { measure, n } => PreparedModel::Jellium(Jellium::new(measure, *n)?),
            Model::PolyZeros { measure, n, law } => {
                law.validate()?;
                PreparedModel::PolyZeros { norms: BasisNorms::new(measure, *n)?, law: law.clone() }
            }
            Model::Weyl { n, law } => {
                if *n == 0 {
                    return Err(invalid("polynomial degree must be at least 1"));
                }
                law.validate()?;
                PreparedModel::Weyl { n: *n, law: law.clone() }
            }
        })
    }

    /// Roots of one sampled polynomial; `None` for the jellium.
    pub fn sample_roots<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<RootSet> {
        match self {
            PreparedModel::Jellium(_) => None,
            PreparedModel::PolyZeros { norms, law } => Some(sample_polynomial(norms, law, rng).find_roots()),
            PreparedModel::Weyl { n, law } => Some(weyl_polynomial(*n, law, rng).find_roots()),
        }
    }

    /// One configuration. Root sets that fail to converge are an error.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PointConfiguration> {
        match self {
            PreparedModel::Jellium(j) => Ok(j.sample(rng)),
            _ => {
                let set = self.sample_roots(rng).expect("polynomial model");
                if !set.converged {
                    return Err(Error::RootFinding { sweeps: set.sweeps });
                }
                Ok(PointConfiguration::new(set.roots, Provenance::RootSet))
            }
        }
    }

    /// Moduli of one configuration.
    pub fn sample_moduli<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        match self {
            PreparedModel::Jellium(j) => Ok(j.sample_moduli(rng)),
            _ => Ok(self.sample(rng)?.moduli().collect()),
        }
    }
}

/// Random stream of replica `j`: ChaCha8 seeded with `seed`, stream `j`.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

fn statistic_of(moduli: &[f64], statistic: Statistic) -> f64 {
    match statistic {
        Statistic::MaxMod => moduli.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Statistic::MinMod => moduli.iter().copied().fold(f64::INFINITY, f64::min),
        Statistic::InverseMax => 1.0 / moduli.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Statistic of each replica, in replica order.
pub fn campaign_values(prepared: &PreparedModel, statistic: Statistic, replicas: usize, seed: u64) -> Result<Vec<f64>> {
    if replicas == 0 {
        return Err(invalid("replicas must be at least 1"));
    }
    (0..replicas)
        .into_par_iter()
        .map(|j| {
            let mut rng = replica_rng(seed, j as u64);
            let moduli = prepared.sample_moduli(&mut rng)?;
            Ok(statistic_of(&moduli, statistic))
        })
        .collect()
}

pub fn extremal_campaign(model: &Model, statistic: Statistic, replicas: usize, seed: u64) -> Result<EmpiricalCdf> {
    let prepared = PreparedModel::new(model)?;
    EmpiricalCdf::new(campaign_values(&prepared, statistic, replicas, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empirical_cdf_is_right_continuous() {
        let e = EmpiricalCdf::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(e.values(), &[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval(3.0), 1.0);
        assert_eq!(e.quantile(0.5), Some(2.0));
        assert!(EmpiricalCdf::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn ks_hand_cases() {
        // Two points against the uniform CDF on [0, 1].
        let r = ks_distance(&[0.2, 0.9], |t| t.clamp(0.0, 1.0)).unwrap();
        assert!((r.distance - 0.4).abs() < 1e-15);
        assert_eq!(r.n, 2);
        let r = ks_distance(&[-3.0, -2.0, -1.0], |t| t.clamp(0.0, 1.0)).unwrap();
        assert_eq!(r.distance, 1.0);
        assert!(ks_distance(&[], |t| t).is_err());
    }

    #[test]
    fn statistic_parsing() {
        assert_eq!("max_mod".parse::<Statistic>().unwrap(), Statistic::MaxMod);
        assert!("median".parse::<Statistic>().is_err());
    }

    #[test]
    fn replica_streams_differ() {
        let a: u64 = replica_rng(1, 0).random();
        let b: u64 = replica_rng(1, 1).random();
        let c: u64 = replica_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
