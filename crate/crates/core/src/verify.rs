//! Named reproduction scenarios with explicit pass/fail thresholds, shared by
//! the command line and the acceptance tests.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dpp::{Extremal, Jellium};
use crate::error::{Error, Result};
use crate::kernel::{Kernel, Orientation};
use crate::limit::{bulk_max_cdf, max_modulus_cdf_outside, BergmanKernel, BergmanRegion, BulkLimitKernel, MittagLefflerFn, ProductCdf};
use crate::measure::RadialMeasure;
use crate::poly::{BasisNorms, CoefficientLaw};
use crate::potential::RadialPotential;
use crate::quad::{integrate_split, Tolerance};
use crate::special::{ln_gamma, ln_regularized_lower_gamma};
use crate::stats::{
    campaign_values, default_kernel_grid, kernel_sup_diff, ks_distance, replica_rng, Model, PreparedModel, Statistic,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 2026;

/// Scenario names, in acceptance order.
pub const SCENARIOS: [&str; 10] = [
    "coefficients",
    "kernel",
    "figure3",
    "figure4",
    "bulk-max",
    "ginibre",
    "mittag-leffler",
    "weyl",
    "equivariance",
    "orthonormality",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides the scenario's replica count.
    pub replicas: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, replicas: None }
    }
}

/// One thresholded quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub metric: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ threshold`.
    fn at_most(name: impl Into<String>, metric: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), metric: metric.into(), value, threshold, pass: value <= threshold }
    }

    /// Passes when `value < threshold`.
    fn below(name: impl Into<String>, metric: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), metric: metric.into(), value, threshold, pass: value < threshold }
    }
}

/// Sample and reference density for a histogram plot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotData {
    pub label: String,
    pub samples: Vec<f64>,
    /// `(t, density)` pairs.
    pub curve: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub replicas: Option<usize>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub plot: Option<PlotData>,
}

impl Report {
    fn new(scenario: &str, seed: u64, replicas: Option<usize>, checks: Vec<Check>, plot: Option<PlotData>) -> Self {
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Self { scenario: scenario.into(), seed, replicas, checks, pass, plot }
    }
}

pub fn run(name: &str, opts: &VerifyOptions) -> Result<Report> {
    match name {
        "coefficients" => coefficients(),
        "kernel" => kernel(),
        "figure3" => figure3(opts),
        "figure4" => figure4(opts),
        "bulk-max" => bulk_max(opts),
        "ginibre" => ginibre(),
        "mittag-leffler" => mittag_leffler(opts),
        "weyl" => weyl(opts),
        "equivariance" => equivariance(),
        "orthonormality" => orthonormality(),
        other => Err(Error::UnknownScenario(other.into())),
    }
}

/// Density of `cdf` on `[lo, hi]` at 400 points by central differences.
pub fn density_curve<F: Fn(f64) -> f64>(cdf: F, lo: f64, hi: f64) -> Vec<[f64; 2]> {
    let h = (hi - lo) * 1e-4;
    (0..400)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / 399.0;
            let a = (t - h).max(lo);
            let b = (t + h).min(hi);
            [t, ((cdf(b) - cdf(a)) / (b - a)).max(0.0)]
        })
        .collect()
}

fn coefficients() -> Result<Report> {
    let n = 200;
    let j = Jellium::new(&RadialMeasure::circle(1.0)?, n)?;
    let mut checks: Vec<Check> = (0..=5)
        .map(|k| {
            let v = (PI * j.coefficient(k) / (k as f64 + 1.0) - 1.0).abs();
            Check::at_most(format!("b_{k},{n}"), "relative error to (k+1)/pi", v, 0.02)
        })
        .collect();
    let excess = (0..n)
        .map(|k| PI * j.coefficient(k) / (k as f64 + 1.0) - 1.0)
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::below("monotone bound", "max_k pi b_k/(k+1) - 1", excess, 0.0));
    Ok(Report::new("coefficients", 0, None, checks, None))
}

fn kernel() -> Result<Report> {
    let circle = RadialMeasure::circle(1.0)?;
    let bergman = BergmanKernel::new(1.0, BergmanRegion::Inside)?;
    let grid = default_kernel_grid(0.7);
    let mut diffs = Vec::new();
    let mut reference = 0.0;
    for n in [50, 100, 200] {
        let d = kernel_sup_diff(&Jellium::new(&circle, n)?.kernel(), &bergman, &grid);
        reference = d.reference_max;
        diffs.push(d.absolute);
    }
    let checks = vec![
        Check::at_most("n=200", "sup |K_n - K_B| / max |K_B|", diffs[2] / reference, 0.05),
        Check::below("monotone trend", "max(d100 - d50, d200 - d100)", (diffs[1] - diffs[0]).max(diffs[2] - diffs[1]), 0.0),
    ];
    Ok(Report::new("kernel", 0, None, checks, None))
}

fn figure3(opts: &VerifyOptions) -> Result<Report> {
    let replicas = opts.replicas.unwrap_or(2000);
    let n = 50;
    let jellium = Jellium::new(&RadialMeasure::circle(1.0)?, n)?;
    let prepared = PreparedModel::Jellium(jellium.clone());
    let max = campaign_values(&prepared, Statistic::MaxMod, replicas, opts.seed)?;
    let inv: Vec<f64> = max.iter().map(|x| 1.0 / x).collect();
    let limit = ProductCdf::BergmanMinDisk { radius: 1.0 };
    let ks_limit = ks_distance(&inv, |t| limit.eval(t).unwrap_or(f64::NAN))?;
    let ks_exact = ks_distance(&max, |t| jellium.extremal_cdf(t, Extremal::Max))?;
    let checks = vec![
        Check::at_most("inverse max vs Bergman disk", "KS", ks_limit.distance, 0.05),
        Check::at_most("max vs exact finite-n", "KS", ks_exact.distance, 0.0304),
    ];
    let curve = density_curve(|t| limit.eval(t).unwrap_or(1.0), 0.0, 0.999);
    let plot = PlotData { label: "inverse max modulus, circle jellium n=50".into(), samples: inv, curve };
    Ok(Report::new("figure3", opts.seed, Some(replicas), checks, Some(plot)))
}

fn figure4(opts: &VerifyOptions) -> Result<Report> {
    let replicas = opts.replicas.unwrap_or(2000);
    let model = Model::PolyZeros { measure: RadialMeasure::circle(1.0)?, n: 200, law: CoefficientLaw::ComplexGaussian };
    let inv = campaign_values(&PreparedModel::new(&model)?, Statistic::InverseMax, replicas, opts.seed)?;
    let limit = ProductCdf::BergmanMinDisk { radius: 1.0 };
    let ks = ks_distance(&inv, |t| limit.eval(t).unwrap_or(f64::NAN))?;
    let checks = vec![Check::at_most("Kac inverse max vs Bergman disk", "KS", ks.distance, 0.05)];
    let curve = density_curve(|t| limit.eval(t).unwrap_or(1.0), 0.0, 0.999);
    let plot = PlotData { label: "inverse max root modulus, Kac n=200".into(), samples: inv, curve };
    Ok(Report::new("figure4", opts.seed, Some(replicas), checks, Some(plot)))
}

fn bulk_max(opts: &VerifyOptions) -> Result<Report> {
    let replicas = opts.replicas.unwrap_or(2000);
    let fs = RadialMeasure::fubini_study();
    let n = 100;
    let scale = (n as f64).sqrt();
    let prepared = PreparedModel::Jellium(Jellium::new(&fs, n)?);
    let samples: Vec<f64> =
        campaign_values(&prepared, Statistic::MaxMod, replicas, opts.seed)?.into_iter().map(|x| x / scale).collect();
    let ks = ks_distance(&samples, |t| bulk_max_cdf(2.0, 1.0, t.max(0.0)).unwrap_or(f64::NAN))?;

    let big = Jellium::from_potential(RadialPotential::new(fs)?, 400)?;
    let mut cross: f64 = 0.0;
    for i in 0..=100 {
        let t = 0.5 + 2.5 * i as f64 / 100.0;
        let exact = big.extremal_cdf(t * 20.0, Extremal::Max);
        cross = cross.max((exact - bulk_max_cdf(2.0, 1.0, t)?).abs());
    }
    let checks = vec![
        Check::at_most("scaled max vs bulk limit", "KS", ks.distance, 0.06),
        Check::at_most("exact n=400 vs bulk limit on [0.5, 3]", "sup |F_400 - F|", cross, 0.02),
    ];
    let curve = density_curve(|t| bulk_max_cdf(2.0, 1.0, t).unwrap_or(f64::NAN), 0.0, 4.0);
    let plot = PlotData { label: "max modulus / sqrt(n), Fubini-Study jellium n=100".into(), samples, curve };
    Ok(Report::new("bulk-max", opts.seed, Some(replicas), checks, Some(plot)))
}

struct Ginibre;

impl Kernel for Ginibre {
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        (z * w.conj() - (z.norm_sqr() + w.norm_sqr()) / 2.0).exp() / PI
    }
}

fn ginibre() -> Result<Report> {
    let k = BulkLimitKernel::new(2.0, 1.0, Orientation::Origin)?;
    let d = kernel_sup_diff(&k, &Ginibre, &default_kernel_grid(3.0));
    let checks = vec![Check::at_most("bulk kernel (2, 1) vs Ginibre", "sup |K - K_G|", d.absolute, 1e-8)];
    Ok(Report::new("ginibre", 0, None, checks, None))
}

fn mean_and_variance(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = if x.len() > 1 { x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (m, v)
}

fn mittag_leffler(opts: &VerifyOptions) -> Result<Report> {
    use rayon::prelude::*;

    let replicas = opts.replicas.unwrap_or(500);
    let n = 400;
    let window = 1.5;
    let law = CoefficientLaw::ComplexGaussian;
    let model = Model::PolyZeros { measure: RadialMeasure::power_origin(2.0, 1.0)?, n, law: law.clone() };
    let prepared = PreparedModel::new(&model)?;
    let scale = (n as f64).sqrt();
    let counts: Vec<f64> = (0..replicas)
        .into_par_iter()
        .map(|j| {
            let cfg = prepared.sample(&mut replica_rng(opts.seed, j as u64))?;
            Ok(cfg.moduli().filter(|r| r * scale <= window).count() as f64)
        })
        .collect::<Result<_>>()?;
    let oracle: Vec<f64> = (0..replicas)
        .into_par_iter()
        .map(|j| {
            let mut rng = replica_rng(opts.seed, (replicas + j) as u64);
            let f = MittagLefflerFn::sample(2.0, 1.0, &law, &mut rng, 2.0 * window)?;
            Ok(f.zeros_in_disk(window)?.len() as f64)
        })
        .collect::<Result<_>>()?;
    let (m1, v1) = mean_and_variance(&counts);
    let (m2, v2) = mean_and_variance(&oracle);
    let r = replicas as f64;
    let se = (v1 / r + v2 / r).sqrt();
    // Zeros of the Gaussian entire function have intensity 1/π.
    let expected = window * window;
    let checks = vec![
        Check::at_most("polynomial vs Mittag-Leffler counts", "|mean difference| / SE", (m1 - m2).abs() / se, 3.0),
        Check::at_most("Mittag-Leffler mean vs intensity 1/pi", "|mean - 2.25| / SE", (m2 - expected).abs() / (v2 / r).sqrt(), 3.0),
    ];
    Ok(Report::new("mittag-leffler", opts.seed, Some(replicas), checks, None))
}

fn weyl(opts: &VerifyOptions) -> Result<Report> {
    let replicas = opts.replicas.unwrap_or(1000);
    let model = Model::Weyl { n: 200, law: CoefficientLaw::ComplexGaussian };
    let max = campaign_values(&PreparedModel::new(&model)?, Statistic::MaxMod, replicas, opts.seed)?;
    let ks = ks_distance(&max, |t| max_modulus_cdf_outside(1.0, t))?;
    let checks = vec![Check::at_most("Weyl max root modulus vs Bergman exterior", "KS", ks.distance, 0.06)];
    let curve = density_curve(|t| max_modulus_cdf_outside(1.0, t), 1.0, 2.0);
    let plot = PlotData { label: "max root modulus, Weyl n=200".into(), samples: max, curve };
    Ok(Report::new("weyl", opts.seed, Some(replicas), checks, Some(plot)))
}

fn ratio_spread(ln_ratios: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = ln_ratios.collect();
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (hi - lo).exp_m1()
}

fn equivariance() -> Result<Report> {
    let n = 20;
    let mut checks = Vec::new();
    for (name, m) in [("circle(1)", RadialMeasure::circle(1.0)?), ("uniform_disk(1)", RadialMeasure::uniform_disk(1.0)?)] {
        let a = Jellium::new(&m, n)?;
        let b = Jellium::new(&m.invert(), n)?;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 1..=9 {
                let u = i as f64 / 10.0;
                let prod = a.density(k).quantile(u) * b.density(n - 1 - k).quantile(1.0 - u);
                worst = worst.max((prod - 1.0).abs());
            }
        }
        checks.push(Check::at_most(format!("quantile inversion {name}"), "max |q q' - 1|", worst, 1e-6));

        let h = BasisNorms::new(&m, n)?;
        let hi = BasisNorms::new(&m.invert(), n)?;
        let spread = ratio_spread((0..=n).map(|k| h.ln_norm(k) - hi.ln_norm(n - k)));
        checks.push(Check::at_most(format!("norm reversal {name}"), "relative spread of h_k / h'_(n-k)", spread, 1e-8));
    }
    Ok(Report::new("equivariance", 0, None, checks, None))
}

/// `max |G - I|` for the Gram matrix of `√b_k z^k e^{-(n+1)V}`, with the
/// angular integral by the trapezoid rule and the radial one on `r = t/(1-t)`.
fn gram_error(measure: &RadialMeasure, n: usize) -> Result<f64> {
    let j = Jellium::new(measure, n)?;
    let v = j.potential().clone();
    let c = 2.0 * (n as f64 + 1.0);
    let mut points = vec![0.0, 0.5, 1.0];
    for u in measure.log_breakpoints() {
        let r = u.exp();
        points.push(r / (1.0 + r));
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let tol = Tolerance::new(1e-14, 1e-11);
    let m = 64;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let angular: Complex64 = (0..m)
                .map(|i| Complex64::from_polar(1.0, 2.0 * PI * ((a as f64) - (b as f64)) * i as f64 / m as f64))
                .sum::<Complex64>()
                * (2.0 * PI / m as f64);
            let lnb = 0.5 * (j.ln_coefficient(a) + j.ln_coefficient(b));
            let p = (a + b + 1) as f64;
            let radial = integrate_split(
                |t: f64| {
                    if t <= 0.0 || t >= 1.0 {
                        return 0.0;
                    }
                    let r = t / (1.0 - t);
                    (lnb + p * r.ln() - c * v.eval(r)).exp() / ((1.0 - t) * (1.0 - t))
                },
                &points,
                tol,
            )?
            .value;
            let g = angular * radial;
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    Ok(worst)
}

fn orthonormality() -> Result<Report> {
    let mut checks = Vec::new();
    for (name, m) in [
        ("circle(1)", RadialMeasure::circle(1.0)?),
        ("uniform_disk(1)", RadialMeasure::uniform_disk(1.0)?),
        ("fubini_study", RadialMeasure::fubini_study()),
    ] {
        let worst = [3, 10].into_iter().map(|n| gram_error(&m, n)).collect::<Result<Vec<_>>>()?;
        checks.push(Check::at_most(format!("Gram {name}"), "max |G - I| over n in {3, 10}", worst.into_iter().fold(0.0, f64::max), 1e-6));
    }

    let n = 30;
    let nf = n as f64;
    let fs = BasisNorms::new(&RadialMeasure::fubini_study(), n)?;
    // Elliptic: h_k C(n, k) is constant.
    let spread = ratio_spread(
        (0..=n).map(|k| fs.ln_norm(k) + ln_gamma(nf + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma(nf - k as f64 + 1.0)),
    );
    checks.push(Check::at_most("Fubini-Study elliptic basis", "relative spread of h_k C(n,k)", spread, 1e-8));

    // Nearly Weyl: h_k ∝ k! P(k+1, n) / n^k.
    let ud = BasisNorms::new(&RadialMeasure::uniform_disk(1.0)?, n)?;
    let terms: Vec<f64> = (0..=n)
        .map(|k| {
            let s = k as f64 + 1.0;
            Ok(ud.ln_norm(k) - ln_gamma(s) - ln_regularized_lower_gamma(s, nf)? + k as f64 * nf.ln())
        })
        .collect::<Result<_>>()?;
    let spread = ratio_spread(terms.into_iter());
    checks.push(Check::at_most("uniform disk nearly Weyl basis", "relative spread of h_k n^k/(k! P(k+1,n))", spread, 1e-8));
    Ok(Report::new("orthonormality", 0, None, checks, None))
}
