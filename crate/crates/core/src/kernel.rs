//! Radial reproducing kernels `Σ c_k (z w̄)^k g(z) g(w)` evaluated in
//! log-space.

use num_complex::Complex64;

use crate::potential::RadialPotential;

/// Anything that evaluates a Hermitian kernel.
pub trait Kernel {
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64;

    /// `K(z, z)`, real and nonnegative.
    fn diagonal(&self, z: Complex64) -> f64 {
        self.eval(z, z).re
    }
}

/// Whether the series runs in powers of `z w̄` or of `1/(z w̄)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `Σ c_k (z w̄)^k`.
    Origin,
    /// `Σ c_k (z w̄)^{-(k+2)}`.
    Infinity,
}

/// The factor `g` multiplying each argument.
#[derive(Clone, Debug)]
pub enum KernelWeight {
    Unit,
    /// `g(z) = exp(-exponent · V(arg_scale · |z|))`.
    Potential {
        potential: RadialPotential,
        exponent: f64,
        arg_scale: f64,
    },
    /// `g(z) = exp(-γ |z|^α)` at the origin, `exp(-γ |z|^{-α})` at infinity.
    Stretched { gamma: f64, alpha: f64 },
}

impl KernelWeight {
    fn ln_weight(&self, z: Complex64, orientation: Orientation) -> f64 {
        match self {
            KernelWeight::Unit => 0.0,
            KernelWeight::Potential { potential, exponent, arg_scale } => {
                -exponent * potential.eval(arg_scale * z.norm())
            }
            KernelWeight::Stretched { gamma, alpha } => {
                let r = z.norm();
                match orientation {
                    Orientation::Origin => -gamma * r.powf(*alpha),
                    Orientation::Infinity => -gamma * r.powf(-alpha),
                }
            }
        }
    }
}

/// A truncated radial kernel with coefficients stored as logarithms.
#[derive(Clone, Debug)]
pub struct KernelSeries {
    ln_coefficients: Vec<f64>,
    weight: KernelWeight,
    orientation: Orientation,
}

impl KernelSeries {
    pub fn new(ln_coefficients: Vec<f64>, weight: KernelWeight, orientation: Orientation) -> Self {
        Self { ln_coefficients, weight, orientation }
    }

    /// Number of retained terms.
    pub fn truncation(&self) -> usize {
        self.ln_coefficients.len()
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        self.ln_coefficients[k].exp()
    }

    pub fn ln_coefficients(&self) -> &[f64] {
        &self.ln_coefficients
    }

    pub fn weight(&self) -> &KernelWeight {
        &self.weight
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
}

/// `Σ_k exp(ln_c[k] + (k + offset) ln x) e^{i (k + offset) θ}` with `x e^{iθ}`
/// the product argument, returned as `(ln modulus shift, complex sum)` so that
/// the value is `exp(shift) · sum`.
pub(crate) fn power_series_log(ln_c: &[f64], x: Complex64, offset: i32) -> (f64, Complex64) {
    let rho = x.norm();
    if rho == 0.0 {
        return if offset == 0 && !ln_c.is_empty() {
            (ln_c[0], Complex64::new(1.0, 0.0))
        } else {
            (f64::NEG_INFINITY, Complex64::new(0.0, 0.0))
        };
    }
    let lr = rho.ln();
    let unit = x / rho;
    let shift = ln_c
        .iter()
        .enumerate()
        .map(|(k, c)| c + (k as i32 + offset) as f64 * lr)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut phase = unit.powi(offset);
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, c) in ln_c.iter().enumerate() {
        let e = c + (k as i32 + offset) as f64 * lr - shift;
        if e > -745.0 {
            sum += phase * e.exp();
        }
        phase *= unit;
    }
    (shift, sum)
}

impl Kernel for KernelSeries {
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let x = z * w.conj();
        let (shift, sum) = match self.orientation {
            Orientation::Origin => power_series_log(&self.ln_coefficients, x, 0),
            Orientation::Infinity => {
                if x.norm() == 0.0 {
                    return Complex64::new(f64::NAN, f64::NAN);
                }
                power_series_log(&self.ln_coefficients, x.inv(), 2)
            }
        };
        let g = self.weight.ln_weight(z, self.orientation) + self.weight.ln_weight(w, self.orientation);
        sum * (shift + g).exp()
    }
}
