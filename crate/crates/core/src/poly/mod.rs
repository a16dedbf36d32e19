//! Random polynomials `Σ a_k z^k / √h_k` orthonormalized against a radial
//! measure, and their zeros.
//!
//! With `h_k = ∫ r^{2k} e^{-2nV(r)} dμ(r)` the monomials `z^k/√h_k` are
//! orthonormal for `⟨P,Q⟩ = ∫ P Q̄ e^{-2nV} dν`. Coefficients are kept as
//! (log-modulus, phase) pairs since `h_k` ranges over hundreds of orders of
//! magnitude.

mod dd;
mod roots;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::logspace;
use crate::measure::RadialMeasure;
use crate::potential::RadialPotential;
use crate::special::{ln_gamma, log_add};

pub use roots::RootSet;

/// Log-norms `ln h_k`, `k = 0..=n`, of the monomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisNorms {
    n: usize,
    ln_h: Vec<f64>,
}

impl BasisNorms {
    pub fn new(measure: &RadialMeasure, n: usize) -> Result<Self> {
        Self::from_potential(&RadialPotential::new(measure.clone())?, n)
    }

    pub fn from_potential(potential: &RadialPotential, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("polynomial degree must be at least 1"));
        }
        let measure = potential.measure();
        let c = 2.0 * n as f64;
        let domain = measure.log_density_domain();
        let mut ln_h = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = f64::NEG_INFINITY;
            for a in measure.atoms() {
                let u = a.radius.ln();
                acc = log_add(acc, a.weight.ln() + 2.0 * k as f64 * u - c * potential.at_log_radius(u));
            }
            if let Some(d) = domain {
                let psi = |u: f64| 2.0 * k as f64 * u - c * potential.at_log_radius(u) + measure.ln_log_radius_density(u);
                let terms = |u: f64| {
                    2.0 * k as f64 * u.abs() + c * potential.at_log_radius(u).abs() + measure.ln_log_radius_density(u).abs()
                };
                let v = logspace::ln_integral_with(&psi, &terms, measure.log_breakpoints(), d).map_err(|e| match e {
                    Error::Divergent { what, .. } => Error::Divergent { what, index: k },
                    other => other,
                })?;
                acc = log_add(acc, v);
            }
            if !acc.is_finite() {
                return Err(Error::Divergent { what: "basis norm", index: k });
            }
            ln_h.push(acc);
        }
        Ok(Self { n, ln_h })
    }

    /// Norms given directly as logarithms.
    pub fn from_ln_values(ln_h: Vec<f64>) -> Result<Self> {
        if ln_h.len() < 2 || ln_h.iter().any(|v| !v.is_finite()) {
            return Err(invalid("need at least two finite log-norms"));
        }
        Ok(Self { n: ln_h.len() - 1, ln_h })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn ln_norm(&self, k: usize) -> f64 {
        self.ln_h[k]
    }

    pub fn norm(&self, k: usize) -> f64 {
        self.ln_h[k].exp()
    }

    pub fn ln_values(&self) -> &[f64] {
        &self.ln_h
    }
}

/// Law of the i.i.d. coefficients `a_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientLaw {
    /// Real and imaginary parts independent `N(0, 1/2)`.
    ComplexGaussian,
    /// Uniform on the unit disk.
    UniformDiskCoeff,
    /// `(±1 ± i)/√2` with independent fair signs.
    SymmetricBernoulliComplex,
    /// Uniform choice among the listed nonzero values.
    UserTable { values: Vec<Complex64> },
}

impl CoefficientLaw {
    /// A table law; values must be nonzero and not all equal.
    pub fn user_table(values: Vec<Complex64>) -> Result<Self> {
        let law = CoefficientLaw::UserTable { values };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        if let CoefficientLaw::UserTable { values } = self {
            if values.iter().any(|v| v.norm() == 0.0 || !v.is_finite()) {
                return Err(invalid("coefficient table values must be finite and nonzero"));
            }
            if values.iter().all(|v| *v == values[0]) {
                return Err(invalid("coefficient table must contain at least two distinct values"));
            }
        }
        Ok(())
    }

    /// Parses `complex_gaussian` (or `gaussian`), `uniform_disk_coeff`
    /// (or `uniform_disk`), `symmetric_bernoulli_complex` (or `bernoulli`),
    /// or a JSON object.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let law = match text {
            "complex_gaussian" | "gaussian" => CoefficientLaw::ComplexGaussian,
            "uniform_disk_coeff" | "uniform_disk" => CoefficientLaw::UniformDiskCoeff,
            "symmetric_bernoulli_complex" | "bernoulli" => CoefficientLaw::SymmetricBernoulliComplex,
            t if t.starts_with('{') => serde_json::from_str(t)?,
            other => return Err(Error::Parse(format!("unknown coefficient law '{other}'"))),
        };
        law.validate()?;
        Ok(law)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        loop {
            let a = self.draw(rng);
            if a.norm() != 0.0 {
                return a;
            }
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match self {
            CoefficientLaw::ComplexGaussian => {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im) * FRAC_1_SQRT_2
            }
            CoefficientLaw::UniformDiskCoeff => {
                let r = rng.random::<f64>().sqrt();
                Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())
            }
            CoefficientLaw::SymmetricBernoulliComplex => {
                let re = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let im = if rng.random::<bool>() { 1.0 } else { -1.0 };
                Complex64::new(re, im) * FRAC_1_SQRT_2
            }
            CoefficientLaw::UserTable { values } => values[rng.random_range(0..values.len())],
        }
    }
}

/// A polynomial of degree `n` with coefficients stored as `(ln|c_k|, arg c_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialSample {
    ln_abs: Vec<f64>,
    phase: Vec<f64>,
}

impl PolynomialSample {
    pub fn from_log_parts(ln_abs: Vec<f64>, phase: Vec<f64>) -> Result<Self> {
        if ln_abs.len() != phase.len() || ln_abs.is_empty() {
            return Err(invalid("coefficient parts must have equal nonzero length"));
        }
        if !ln_abs[ln_abs.len() - 1].is_finite() {
            return Err(invalid("leading coefficient must be nonzero"));
        }
        Ok(Self { ln_abs, phase })
    }

    /// From plain coefficients `c_0, …, c_n`.
    pub fn from_coefficients(coeffs: &[Complex64]) -> Result<Self> {
        let ln_abs = coeffs.iter().map(|c| c.norm().ln()).collect();
        let phase = coeffs.iter().map(|c| c.arg()).collect();
        Self::from_log_parts(ln_abs, phase)
    }

    pub fn degree(&self) -> usize {
        self.ln_abs.len() - 1
    }

    pub fn ln_abs(&self) -> &[f64] {
        &self.ln_abs
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    /// `c_k` as a plain complex number (may overflow for extreme scalings).
    pub fn coefficient(&self, k: usize) -> Complex64 {
        Complex64::from_polar(self.ln_abs[k].exp(), self.phase[k])
    }

    /// `(ln|p(z)|, arg p(z))`.
    pub fn evaluate(&self, z: Complex64) -> (f64, f64) {
        let (l, a, _) = roots::evaluate_log(&self.ln_abs, &self.phase, z);
        (l, a)
    }

    /// `|p(z)| / Σ|c_k||z|^k`.
    pub fn backward_error(&self, z: Complex64) -> f64 {
        let (l, _, s) = roots::evaluate_log(&self.ln_abs, &self.phase, z);
        (l - s).exp()
    }

    /// `z^n p(1/z)`, whose roots are the inverses of those of `p`.
    pub fn reversed(&self) -> Result<Self> {
        let mut ln_abs = self.ln_abs.clone();
        let mut phase = self.phase.clone();
        ln_abs.reverse();
        phase.reverse();
        Self::from_log_parts(ln_abs, phase)
    }

    /// All `n` roots by Aberth–Ehrlich iteration.
    pub fn find_roots(&self) -> RootSet {
        roots::find_roots_log(&self.ln_abs, &self.phase)
    }
}

/// `P_n = Σ a_k z^k / √h_k` with i.i.d. `a_k` from `law`.
pub fn sample_polynomial<R: Rng + ?Sized>(norms: &BasisNorms, law: &CoefficientLaw, rng: &mut R) -> PolynomialSample {
    let (ln_abs, phase) = norms
        .ln_h
        .iter()
        .map(|lh| {
            let a = law.sample(rng);
            (a.norm().ln() - 0.5 * lh, a.arg())
        })
        .unzip();
    PolynomialSample { ln_abs, phase }
}

/// Rescaled Weyl polynomial `Σ a_k √(n^k / k!) z^k`.
pub fn weyl_polynomial<R: Rng + ?Sized>(n: usize, law: &CoefficientLaw, rng: &mut R) -> PolynomialSample {
    let ln_n = (n as f64).ln();
    let (ln_abs, phase) = (0..=n)
        .map(|k| {
            let a = law.sample(rng);
            (a.norm().ln() + 0.5 * (k as f64 * ln_n - ln_gamma(k as f64 + 1.0)), a.arg())
        })
        .unzip();
    PolynomialSample { ln_abs, phase }
}

/// Roots of `p`.
pub fn find_roots(p: &PolynomialSample) -> RootSet {
    p.find_roots()
}
