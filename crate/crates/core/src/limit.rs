//! Limiting objects: Bergman kernels and point processes of the disk and its
//! complement, infinite-product CDFs, the bulk limit kernels and the
//! Mittag-Leffler random functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Open01};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernel::{power_series_log, Kernel, Orientation};
use crate::logspace;
use crate::points::{PointConfiguration, Provenance};
use crate::poly::{CoefficientLaw, PolynomialSample};
use crate::special::{ln_gamma, ln_regularized_lower_gamma, ln_regularized_upper_gamma, log_sum_exp};

/// Which side of the circle `|z| = R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BergmanRegion {
    Inside,
    Outside,
}

/// Bergman kernel of the disk `D_R` or of `ℂ ∖ closure(D_R)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BergmanKernel {
    radius: f64,
    region: BergmanRegion,
}

impl BergmanKernel {
    pub fn new(radius: f64, region: BergmanRegion) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { radius, region })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn region(&self) -> BergmanRegion {
        self.region
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match self.region {
            BergmanRegion::Inside => z.norm() < self.radius,
            BergmanRegion::Outside => z.norm() > self.radius,
        }
    }

    /// Inside: `R²/(π(R² − z w̄)²)`. Outside: `R²/(π(z w̄ − R²)²)`, the
    /// pullback of the inside kernel by `z ↦ R²/z`.
    pub fn try_eval(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        if !self.contains(z) || !self.contains(w) {
            return Err(Error::Domain(format!("points {z}, {w} are not in the {:?} region", self.region)));
        }
        Ok(self.formula(z, w))
    }

    fn formula(&self, z: Complex64, w: Complex64) -> Complex64 {
        let r2 = self.radius * self.radius;
        let d = r2 - z * w.conj();
        r2 / (PI * d * d)
    }
}

impl Kernel for BergmanKernel {
    /// `NaN` outside the region.
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.try_eval(z, w).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

pub fn bergman_kernel_eval(radius: f64, region: BergmanRegion, z: Complex64, w: Complex64) -> Result<Complex64> {
    BergmanKernel::new(radius, region)?.try_eval(z, w)
}

const PRODUCT_EPS: f64 = 1e-17;

/// `ln ∏_{k≥1} (1 − q^k)` for `0 ≤ q < 1`, with the number of factors used.
///
/// For `q = e^{-s}` with `s < 2π` the modular transformation of the Dedekind
/// eta function turns the slowly converging product into a fast one.
fn ln_euler_product(q: f64) -> (f64, usize) {
    if q <= 0.0 {
        return (0.0, 0);
    }
    if q >= 1.0 {
        return (f64::NEG_INFINITY, 0);
    }
    let s = -q.ln();
    if s >= 2.0 * PI {
        direct_euler_product(s)
    } else {
        let (tail, terms) = direct_euler_product(4.0 * PI * PI / s);
        (0.5 * (2.0 * PI / s).ln() - PI * PI / (6.0 * s) + s / 24.0 + tail, terms)
    }
}

/// `Σ_{k≥1} ln(1 − e^{-sk})`, stopped once `e^{-sk} < 1e-17`; the neglected
/// tail is below `2 e^{-s(K+1)}` for `s ≥ 2π`.
fn direct_euler_product(s: f64) -> (f64, usize) {
    let mut acc = 0.0;
    let mut k = 0;
    loop {
        k += 1;
        let x = -s * k as f64;
        let qk = x.exp();
        if qk < PRODUCT_EPS {
            return (acc, k - 1);
        }
        acc += if qk > 0.5 { (-x.exp_m1()).ln() } else { (-qk).ln_1p() };
    }
}

/// `P(max modulus ≤ t)` for the Bergman process outside `D_R`:
/// `∏_{k≥1} (1 − (t/R)^{-2k})`, zero for `t ≤ R`.
pub fn max_modulus_cdf_outside(radius: f64, t: f64) -> f64 {
    if t <= radius {
        return 0.0;
    }
    if t == f64::INFINITY {
        return 1.0;
    }
    ln_euler_product((radius / t).powi(2)).0.exp()
}

/// `P(min modulus ≤ t)` for the Bergman process of `D_R`:
/// `1 − ∏_{k≥1} (1 − (t/R)^{2k})`, for `0 ≤ t < R`.
pub fn min_modulus_cdf_disk(radius: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) || t >= radius {
        return Err(Error::Domain(format!("t must lie in [0, R) = [0, {radius}), got {t}")));
    }
    Ok(-ln_euler_product((t / radius).powi(2)).0.exp_m1())
}

/// `∏_{k≥1} Q(2k/α, x)` (or from `(2k+2)/α`, which is the same product)
/// in log form, `Q` the regularized upper incomplete gamma function.
fn ln_gamma_ratio_product(alpha: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    let mut k = 0usize;
    loop {
        k += 1;
        let s = 2.0 * k as f64 / alpha;
        let lp = ln_regularized_lower_gamma(s, x)?;
        acc += if lp < -1.0 {
            crate::special::ln_one_minus_exp(lp)
        } else {
            ln_regularized_upper_gamma(s, x)?
        };
        if acc < -800.0 {
            return Ok(f64::NEG_INFINITY);
        }
        // Past s > 2x + 2 the factors 1 − Q decay faster than geometrically,
        // so the remaining tail is below a small multiple of the last one.
        if lp < PRODUCT_EPS.ln() && s > 2.0 * x + 2.0 {
            return Ok(acc);
        }
        if k > 10_000_000 {
            return Err(Error::Truncation { bound: lp.exp(), target: PRODUCT_EPS });
        }
    }
}

fn check_alpha_lambda(alpha: f64, lambda: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) || !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("need α, λ > 0, got α = {alpha}, λ = {lambda}")));
    }
    Ok(())
}

/// Limit law of `n^{-1/α}` times the largest modulus when
/// `r^α ν(ℂ∖D_r) → λ`: `∏_{k≥1} Γ(2k/α, 2λ/(α t^α)) / Γ(2k/α)`.
pub fn bulk_max_cdf(alpha: f64, lambda: f64, t: f64) -> Result<f64> {
    check_alpha_lambda(alpha, lambda)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let x = 2.0 * lambda / (alpha * t.powf(alpha));
    Ok(ln_gamma_ratio_product(alpha, x)?.exp())
}

/// Limit law of `n^{1/α}` times the smallest modulus when `ν(D_r)/r^α → λ`:
/// `1 − ∏_{k≥0} Γ((2k+2)/α, 2γ y^α) / Γ((2k+2)/α)`, `γ = λ/α`.
pub fn bulk_min_cdf(alpha: f64, lambda: f64, y: f64) -> Result<f64> {
    check_alpha_lambda(alpha, lambda)?;
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("y must be nonnegative, got {y}")));
    }
    if y == f64::INFINITY {
        return Ok(1.0);
    }
    let x = 2.0 * lambda / alpha * y.powf(alpha);
    Ok(-ln_gamma_ratio_product(alpha, x)?.exp_m1())
}

/// A limiting CDF given as an infinite product.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProductCdf {
    /// Largest modulus of the Bergman process outside `D_R`.
    BergmanMaxOutside { radius: f64 },
    /// Smallest modulus of the Bergman process of `D_R`.
    BergmanMinDisk { radius: f64 },
    /// See [`bulk_max_cdf`].
    BulkMax { alpha: f64, lambda: f64 },
    /// See [`bulk_min_cdf`].
    BulkMin { alpha: f64, lambda: f64 },
}

impl ProductCdf {
    pub fn eval(&self, t: f64) -> Result<f64> {
        match *self {
            ProductCdf::BergmanMaxOutside { radius } => Ok(max_modulus_cdf_outside(radius, t)),
            ProductCdf::BergmanMinDisk { radius } => {
                if t >= radius {
                    Ok(1.0)
                } else if t < 0.0 {
                    Ok(0.0)
                } else {
                    min_modulus_cdf_disk(radius, t)
                }
            }
            ProductCdf::BulkMax { alpha, lambda } => bulk_max_cdf(alpha, lambda, t.max(0.0)),
            ProductCdf::BulkMin { alpha, lambda } => bulk_min_cdf(alpha, lambda, t.max(0.0)),
        }
    }
}

/// `ln b_k` for the bulk limit kernel: `b_k^{-1} = 2π ∫_0^∞ r^{2k+1}
/// e^{-2γ r^α} dr = (2π/α) (2γ)^{-(2k+2)/α} Γ((2k+2)/α)`.
pub fn bulk_ln_coefficient(alpha: f64, gamma: f64, k: usize) -> f64 {
    let s = (2 * k + 2) as f64 / alpha;
    -((2.0 * PI / alpha).ln() - s * (2.0 * gamma).ln() + ln_gamma(s))
}

/// Determinantal kernel of the limit process at the origin
/// `Σ b_k (z w̄)^k e^{-γ(|z|^α + |w|^α)}` or its image at infinity
/// `Σ b_k (z w̄)^{-(k+2)} e^{-γ(|z|^{-α} + |w|^{-α})}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BulkLimitKernel {
    alpha: f64,
    lambda: f64,
    gamma: f64,
    orientation: Orientation,
}

const COEFF_CHECK_TERMS: usize = 40;

impl BulkLimitKernel {
    /// Builds the kernel and cross-checks the closed-form coefficients
    /// against direct quadrature (relative `1e-8`).
    pub fn new(alpha: f64, lambda: f64, orientation: Orientation) -> Result<Self> {
        check_alpha_lambda(alpha, lambda)?;
        let gamma = lambda / alpha;
        for k in 0..COEFF_CHECK_TERMS {
            let psi = |u: f64| (2 * k + 2) as f64 * u - 2.0 * gamma * (alpha * u).exp();
            let ln_integral = logspace::ln_integral(&psi, &[], (f64::NEG_INFINITY, f64::INFINITY))?;
            let quad = -((2.0 * PI).ln() + ln_integral);
            let closed = bulk_ln_coefficient(alpha, gamma, k);
            if (quad - closed).abs() > 1e-8 {
                return Err(Error::Quadrature { requested: 1e-8, achieved: (quad - closed).abs() });
            }
        }
        Ok(Self { alpha, lambda, gamma, orientation })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        bulk_ln_coefficient(self.alpha, self.gamma, k).exp()
    }

    fn ln_weight(&self, z: Complex64) -> f64 {
        let r = z.norm();
        match self.orientation {
            Orientation::Origin => -self.gamma * r.powf(self.alpha),
            Orientation::Infinity => -self.gamma * r.powf(-self.alpha),
        }
    }
}

impl Kernel for BulkLimitKernel {
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let mut x = z * w.conj();
        let offset = match self.orientation {
            Orientation::Origin => 0,
            Orientation::Infinity => {
                if x.norm() == 0.0 {
                    return Complex64::new(f64::NAN, f64::NAN);
                }
                x = x.inv();
                2
            }
        };
        // Generate terms until they are negligible and decreasing.
        let lr = x.norm().ln();
        let mut ln_c = Vec::new();
        let mut best = f64::NEG_INFINITY;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..1_000_000usize {
            let c = bulk_ln_coefficient(self.alpha, self.gamma, k);
            ln_c.push(c);
            let term = c + (k as i32 + offset) as f64 * lr;
            best = best.max(term);
            if k > 2 && term < prev && term < best - 40.0 {
                break;
            }
            if x.norm() == 0.0 {
                break;
            }
            prev = term;
        }
        let (shift, sum) = power_series_log(&ln_c, x, offset);
        sum * (shift + self.ln_weight(z) + self.ln_weight(w)).exp()
    }
}

pub fn bulk_limit_kernel(alpha: f64, lambda: f64, orientation: Orientation) -> Result<BulkLimitKernel> {
    BulkLimitKernel::new(alpha, lambda, orientation)
}

/// `ln σ_k = (k/α) ln(2λ/α) − ½ ln Γ(1 + 2k/α)`.
pub fn mittag_leffler_ln_scale(alpha: f64, lambda: f64, k: usize) -> f64 {
    let kf = k as f64;
    kf / alpha * (2.0 * lambda / alpha).ln() - 0.5 * ln_gamma(1.0 + 2.0 * kf / alpha)
}

const ML_TAIL_TARGET: f64 = 1e-12;

/// A realization of `f(z) = Σ a_k σ_k z^k`, truncated.
#[derive(Clone, Debug, PartialEq)]
pub struct MittagLefflerFn {
    alpha: f64,
    lambda: f64,
    coefficients: Vec<Complex64>,
}

impl MittagLefflerFn {
    /// Samples as many coefficients as needed for the neglected terms to be
    /// below `1e-12` of the largest term on `|z| = ρ`, the unknown
    /// coefficients being bounded by `1 + max |a_k|` over the realized ones.
    pub fn sample<R: Rng + ?Sized>(
        alpha: f64,
        lambda: f64,
        law: &CoefficientLaw,
        rng: &mut R,
        rho: f64,
    ) -> Result<Self> {
        check_alpha_lambda(alpha, lambda)?;
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(invalid(format!("precision radius must be positive, got {rho}")));
        }
        let lr = rho.ln();
        let term = |k: usize| mittag_leffler_ln_scale(alpha, lambda, k) + k as f64 * lr;
        let mut coefficients = Vec::new();
        let mut amax: f64 = 0.0;
        let mut peak = f64::NEG_INFINITY;
        loop {
            let k = coefficients.len();
            let a = law.sample(rng);
            amax = amax.max(a.norm());
            coefficients.push(a);
            peak = peak.max(term(k));
            if term(k + 1) < term(k) && term(k + 1) < peak {
                let tail = ln_tail(&term, k + 1);
                if tail + (1.0 + amax).ln() < ML_TAIL_TARGET.ln() + peak {
                    return Ok(Self { alpha, lambda, coefficients });
                }
            }
            if k > 100_000 {
                return Err(Error::Truncation { bound: ln_tail(&term, k + 1).exp(), target: ML_TAIL_TARGET });
            }
        }
    }

    /// Exactly `terms` sampled coefficients `a_0..a_{terms-1}`.
    pub fn with_terms<R: Rng + ?Sized>(
        alpha: f64,
        lambda: f64,
        law: &CoefficientLaw,
        rng: &mut R,
        terms: usize,
    ) -> Result<Self> {
        check_alpha_lambda(alpha, lambda)?;
        let coefficients = (0..terms).map(|_| law.sample(rng)).collect();
        Ok(Self { alpha, lambda, coefficients })
    }

    /// Fixed coefficients `a_k`.
    pub fn from_coefficients(alpha: f64, lambda: f64, coefficients: Vec<Complex64>) -> Result<Self> {
        check_alpha_lambda(alpha, lambda)?;
        Ok(Self { alpha, lambda, coefficients })
    }

    pub fn terms(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn scale(&self, k: usize) -> f64 {
        mittag_leffler_ln_scale(self.alpha, self.lambda, k).exp()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let rho = z.norm();
        if rho == 0.0 {
            return self.coefficients.first().copied().unwrap_or_default();
        }
        let lr = rho.ln();
        let unit = z / rho;
        let logs: Vec<f64> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm().ln() + mittag_leffler_ln_scale(self.alpha, self.lambda, k) + k as f64 * lr)
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut phase = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for (a, l) in self.coefficients.iter().zip(&logs) {
            sum += Complex64::from_polar((l - top).exp(), a.arg()) * phase;
            phase *= unit;
        }
        sum * top.exp()
    }

    /// The truncation as a polynomial.
    pub fn polynomial(&self) -> Result<PolynomialSample> {
        let mut ln_abs: Vec<f64> = Vec::with_capacity(self.coefficients.len());
        let mut phase = Vec::with_capacity(self.coefficients.len());
        for (k, a) in self.coefficients.iter().enumerate() {
            ln_abs.push(a.norm().ln() + mittag_leffler_ln_scale(self.alpha, self.lambda, k));
            phase.push(a.arg());
        }
        while ln_abs.len() > 1 && !ln_abs[ln_abs.len() - 1].is_finite() {
            ln_abs.pop();
            phase.pop();
        }
        PolynomialSample::from_log_parts(ln_abs, phase)
    }

    /// Zeros of the truncation in the closed disk `|z| ≤ radius`.
    pub fn zeros_in_disk(&self, radius: f64) -> Result<Vec<Complex64>> {
        let p = self.polynomial()?;
        if p.degree() == 0 {
            return Ok(Vec::new());
        }
        let set = p.find_roots();
        if !set.converged {
            return Err(Error::RootFinding { sweeps: set.sweeps });
        }
        Ok(set.roots.into_iter().filter(|z| z.norm() <= radius).collect())
    }
}

/// `ln Σ_{k ≥ from} exp(term(k))` for a sequence that is eventually
/// decreasing faster than geometrically.
fn ln_tail<F: Fn(usize) -> f64>(term: &F, from: usize) -> f64 {
    let first = term(from);
    let mut logs = vec![first];
    let mut k = from;
    loop {
        k += 1;
        let t = term(k);
        logs.push(t);
        if t < first - 60.0 || k > from + 1_000_000 {
            break;
        }
    }
    log_sum_exp(logs)
}

pub fn mittag_leffler<R: Rng + ?Sized>(
    alpha: f64,
    lambda: f64,
    law: &CoefficientLaw,
    rng: &mut R,
    rho: f64,
) -> Result<MittagLefflerFn> {
    MittagLefflerFn::sample(alpha, lambda, law, rng, rho)
}

/// Moduli of the Bergman process: `R U_k^{1/(2k)}` inside, `R U_k^{-1/(2k)}`
/// outside, `k = 1..=k_max`.
pub fn sample_bergman_norms<R: Rng + ?Sized>(
    radius: f64,
    region: BergmanRegion,
    k_max: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(invalid("k_max must be at least 1"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!("radius must be positive, got {radius}")));
    }
    let sign = match region {
        BergmanRegion::Inside => 1.0,
        BergmanRegion::Outside => -1.0,
    };
    Ok((1..=k_max)
        .map(|k| {
            let u: f64 = Open01.sample(rng);
            radius * (sign * u.ln() / (2 * k) as f64).exp()
        })
        .collect())
}

const BERGMAN_TAIL_TARGET: f64 = 1e-12;

/// High-probability coefficient bound: `P(|a_k| > b_k) = e^{-40}/(k+1)²` for
/// standard complex Gaussians.
fn gaussian_coefficient_bound(k: usize) -> f64 {
    (2.0 * ((k + 1) as f64).ln() + 40.0).sqrt()
}

fn bergman_tail_bound(terms: usize, rho: f64) -> f64 {
    let mut acc = 0.0;
    let mut k = terms;
    loop {
        let t = gaussian_coefficient_bound(k) * rho.powi(k as i32);
        acc += t;
        if t < 1e-30 * acc.max(1e-300) || k > terms + 100_000 {
            return acc;
        }
        k += 1;
    }
}

/// Smallest number of terms whose neglected tail is certified on `|z| ≤ ρ`.
pub fn bergman_truncation(rho: f64) -> Result<usize> {
    if !(rho >= 0.0 && rho < 1.0) {
        return Err(invalid(format!("window radius must lie in [0, 1), got {rho}")));
    }
    let mut k = 1;
    while bergman_tail_bound(k, rho) >= BERGMAN_TAIL_TARGET {
        k += 1;
    }
    Ok(k)
}

/// Zeros in `|z| ≤ ρ` of the Gaussian series `Σ_{k<K} a_k z^k`, which has the
/// law of the Bergman process of the unit disk.
pub fn sample_bergman_disk<R: Rng + ?Sized>(rng: &mut R, terms: usize, rho: f64) -> Result<PointConfiguration> {
    if !(rho >= 0.0 && rho < 1.0) {
        return Err(invalid(format!("window radius must lie in [0, 1), got {rho}")));
    }
    let bound = bergman_tail_bound(terms, rho);
    if bound >= BERGMAN_TAIL_TARGET {
        return Err(Error::Truncation { bound, target: BERGMAN_TAIL_TARGET });
    }
    let law = CoefficientLaw::ComplexGaussian;
    let coeffs: Vec<Complex64> = (0..terms).map(|_| law.sample(rng)).collect();
    let p = PolynomialSample::from_coefficients(&coeffs)?;
    let set = p.find_roots();
    if !set.converged {
        return Err(Error::RootFinding { sweeps: set.sweeps });
    }
    let points = set.roots.into_iter().filter(|z| z.norm() <= rho).collect();
    Ok(PointConfiguration::new(points, Provenance::Bergman))
}
