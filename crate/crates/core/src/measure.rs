//! Rotationally invariant probability measures on the plane.
//!
//! A measure is described by its radial law: the mass of open disks
//! `r ↦ ν(D_r)`, a list of atoms (circles carrying positive mass) and an
//! absolutely continuous part. Internally the continuous part is handled as
//! a density of `u = ln|z|`, which is what every log-space integral needs.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::logspace;

/// A circle of radius `radius` carrying mass `weight`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(rename = "r")]
    pub radius: f64,
    #[serde(rename = "w")]
    pub weight: f64,
}

/// Power-law metadata `(α, λ)`: either `ν(D_r) / r^α → λ` at the origin or
/// `r^α ν(ℂ∖D_r) → λ` at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub alpha: f64,
    pub lambda: f64,
}

impl PowerLaw {
    pub fn new(alpha: f64, lambda: f64) -> Self {
        Self { alpha, lambda }
    }
}

/// Piecewise-linear radial density plus atoms, read from user tables.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityTable {
    radii: Vec<f64>,
    values: Vec<f64>,
    cumulative: Vec<f64>,
    atoms: Vec<Atom>,
}

impl DensityTable {
    /// `density` holds `(r, f(r))` pairs with `f` the density of `|z|` with
    /// respect to `dr`, linearly interpolated between nodes and zero outside.
    /// The total mass must be 1 up to `1e-6`; it is then renormalized exactly.
    pub fn new(atoms: Vec<Atom>, density: Vec<[f64; 2]>) -> Result<Self> {
        for a in &atoms {
            if !(a.radius > 0.0 && a.radius.is_finite()) {
                return Err(invalid(format!("atom radius must be positive and finite, got {}", a.radius)));
            }
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return Err(invalid(format!("atom weight must be positive, got {}", a.weight)));
            }
        }
        if density.len() == 1 {
            return Err(invalid("density table needs at least two nodes"));
        }
        let radii: Vec<f64> = density.iter().map(|p| p[0]).collect();
        let values: Vec<f64> = density.iter().map(|p| p[1]).collect();
        if radii.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(invalid("density table radii must be finite and nonnegative"));
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("density table radii must be strictly increasing"));
        }
        if values.iter().any(|f| !(*f >= 0.0 && f.is_finite())) {
            return Err(invalid("density values must be finite and nonnegative"));
        }
        let mut cumulative = Vec::with_capacity(radii.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 1..radii.len() {
            acc += 0.5 * (values[i] + values[i - 1]) * (radii[i] - radii[i - 1]);
            cumulative.push(acc);
        }
        let total = acc + atoms.iter().map(|a| a.weight).sum::<f64>();
        if (total - 1.0).abs() > 1e-6 {
            return Err(invalid(format!("measure table has total mass {total}, expected 1")));
        }
        let mut table = Self { radii, values, cumulative, atoms };
        table.values.iter_mut().for_each(|v| *v /= total);
        table.cumulative.iter_mut().for_each(|v| *v /= total);
        table.atoms.iter_mut().for_each(|a| a.weight /= total);
        table.atoms.sort_by(|a, b| a.radius.total_cmp(&b.radius));
        Ok(table)
    }

    fn continuous_mass(&self, r: f64) -> f64 {
        if self.radii.is_empty() || r <= self.radii[0] {
            return 0.0;
        }
        let last = self.radii.len() - 1;
        if r >= self.radii[last] {
            return self.cumulative[last];
        }
        let i = self.radii.partition_point(|&x| x <= r) - 1;
        let h = self.radii[i + 1] - self.radii[i];
        let d = r - self.radii[i];
        let slope = (self.values[i + 1] - self.values[i]) / h;
        self.cumulative[i] + self.values[i] * d + 0.5 * slope * d * d
    }

    fn density(&self, r: f64) -> f64 {
        if self.radii.is_empty() || r < self.radii[0] || r > self.radii[self.radii.len() - 1] {
            return 0.0;
        }
        let i = self.radii.partition_point(|&x| x <= r).saturating_sub(1).min(self.radii.len() - 2);
        let h = self.radii[i + 1] - self.radii[i];
        let t = (r - self.radii[i]) / h;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    fn atom_mass(&self, r: f64, closed: bool) -> f64 {
        self.atoms
            .iter()
            .filter(|a| if closed { a.radius <= r } else { a.radius < r })
            .map(|a| a.weight)
            .sum()
    }

    fn density_support(&self) -> Option<(f64, f64)> {
        let n = self.values.len();
        let first = (0..n.saturating_sub(1)).find(|&i| self.values[i] > 0.0 || self.values[i + 1] > 0.0)?;
        let last = (1..n).rev().find(|&i| self.values[i] > 0.0 || self.values[i - 1] > 0.0)?;
        Some((self.radii[first], self.radii[last]))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Law {
    Circle { radius: f64 },
    UniformDisk { radius: f64 },
    FubiniStudy,
    ParetoTail { alpha: f64, lambda: f64 },
    PowerOrigin { alpha: f64, lambda: f64 },
    Table(Arc<DensityTable>),
    Scaled { factor: f64, base: Arc<Law> },
    Inverted(Arc<Law>),
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

impl Law {
    fn mass(&self, r: f64, closed: bool) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        match self {
            Law::Circle { radius } => {
                if r > *radius || (closed && r == *radius) {
                    1.0
                } else {
                    0.0
                }
            }
            Law::UniformDisk { radius } => (r / radius).powi(2).min(1.0),
            Law::FubiniStudy => {
                if r > 1.0 {
                    1.0 / (1.0 + (r * r).recip())
                } else {
                    r * r / (1.0 + r * r)
                }
            }
            Law::ParetoTail { alpha, lambda } => (1.0 - lambda * r.powf(-alpha)).max(0.0),
            Law::PowerOrigin { alpha, lambda } => (lambda * r.powf(*alpha)).min(1.0),
            Law::Table(t) => (t.continuous_mass(r) + t.atom_mass(r, closed)).min(1.0),
            Law::Scaled { factor, base } => base.mass(r / factor, closed),
            Law::Inverted(base) => {
                if r == f64::INFINITY {
                    1.0
                } else {
                    (1.0 - base.mass(1.0 / r, !closed)).max(0.0)
                }
            }
        }
    }

    /// Log-density of `ln|z|` for the continuous part.
    fn ln_density(&self, u: f64) -> f64 {
        const NEG: f64 = f64::NEG_INFINITY;
        match self {
            Law::Circle { .. } => NEG,
            Law::UniformDisk { radius } => {
                let c = radius.ln();
                if u < c {
                    std::f64::consts::LN_2 + 2.0 * (u - c)
                } else {
                    NEG
                }
            }
            Law::FubiniStudy => std::f64::consts::LN_2 + 2.0 * u - 2.0 * softplus(2.0 * u),
            Law::ParetoTail { alpha, lambda } => {
                if u > lambda.ln() / alpha {
                    (alpha * lambda).ln() - alpha * u
                } else {
                    NEG
                }
            }
            Law::PowerOrigin { alpha, lambda } => {
                if u < -lambda.ln() / alpha {
                    (alpha * lambda).ln() + alpha * u
                } else {
                    NEG
                }
            }
            Law::Table(t) => {
                let r = u.exp();
                let f = t.density(r);
                if f > 0.0 {
                    f.ln() + u
                } else {
                    NEG
                }
            }
            Law::Scaled { factor, base } => base.ln_density(u - factor.ln()),
            Law::Inverted(base) => base.ln_density(-u),
        }
    }

    fn atoms(&self) -> Vec<Atom> {
        match self {
            Law::Circle { radius } => vec![Atom { radius: *radius, weight: 1.0 }],
            Law::Table(t) => t.atoms.clone(),
            Law::Scaled { factor, base } => base
                .atoms()
                .into_iter()
                .map(|a| Atom { radius: a.radius * factor, weight: a.weight })
                .collect(),
            Law::Inverted(base) => {
                let mut v: Vec<Atom> = base
                    .atoms()
                    .into_iter()
                    .map(|a| Atom { radius: 1.0 / a.radius, weight: a.weight })
                    .collect();
                v.reverse();
                v
            }
            _ => Vec::new(),
        }
    }

    /// Points of `u = ln r` where the mass function is not smooth.
    fn breaks(&self) -> Vec<f64> {
        match self {
            Law::Circle { radius } | Law::UniformDisk { radius } => vec![radius.ln()],
            Law::FubiniStudy => Vec::new(),
            Law::ParetoTail { alpha, lambda } => vec![lambda.ln() / alpha],
            Law::PowerOrigin { alpha, lambda } => vec![-lambda.ln() / alpha],
            Law::Table(t) => t
                .radii
                .iter()
                .filter(|r| **r > 0.0)
                .map(|r| r.ln())
                .chain(t.atoms.iter().map(|a| a.radius.ln()))
                .collect(),
            Law::Scaled { factor, base } => base.breaks().into_iter().map(|u| u + factor.ln()).collect(),
            Law::Inverted(base) => base.breaks().into_iter().map(|u| -u).collect(),
        }
    }

    /// Radial range of the continuous part, if any.
    fn density_support(&self) -> Option<(f64, f64)> {
        match self {
            Law::Circle { .. } => None,
            Law::UniformDisk { radius } => Some((0.0, *radius)),
            Law::FubiniStudy => Some((0.0, f64::INFINITY)),
            Law::ParetoTail { alpha, lambda } => Some((lambda.powf(1.0 / alpha), f64::INFINITY)),
            Law::PowerOrigin { alpha, lambda } => Some((0.0, lambda.powf(-1.0 / alpha))),
            Law::Table(t) => t.density_support(),
            Law::Scaled { factor, base } => base.density_support().map(|(a, b)| (a * factor, b * factor)),
            Law::Inverted(base) => base.density_support().map(|(a, b)| (recip(b), recip(a))),
        }
    }

    fn origin_exponent(&self) -> Option<PowerLaw> {
        match self {
            Law::UniformDisk { radius } => Some(PowerLaw::new(2.0, radius.powi(-2))),
            Law::FubiniStudy => Some(PowerLaw::new(2.0, 1.0)),
            Law::PowerOrigin { alpha, lambda } => Some(PowerLaw::new(*alpha, *lambda)),
            Law::Scaled { factor, base } => base
                .origin_exponent()
                .map(|p| PowerLaw::new(p.alpha, p.lambda * factor.powf(-p.alpha))),
            Law::Inverted(base) => base.tail_exponent(),
            _ => None,
        }
    }

    fn tail_exponent(&self) -> Option<PowerLaw> {
        match self {
            Law::FubiniStudy => Some(PowerLaw::new(2.0, 1.0)),
            Law::ParetoTail { alpha, lambda } => Some(PowerLaw::new(*alpha, *lambda)),
            Law::Scaled { factor, base } => base
                .tail_exponent()
                .map(|p| PowerLaw::new(p.alpha, p.lambda * factor.powf(p.alpha))),
            Law::Inverted(base) => base.origin_exponent(),
            _ => None,
        }
    }

    fn spec(&self) -> MeasureSpec {
        let named = |name: &str, params: Value| MeasureSpec::Named { name: name.to_string(), params };
        match self {
            Law::Circle { radius } => named("circle", json!({ "radius": radius })),
            Law::UniformDisk { radius } => named("uniform_disk", json!({ "radius": radius })),
            Law::FubiniStudy => named("fubini_study", json!({})),
            Law::ParetoTail { alpha, lambda } => named("pareto_tail", json!({ "alpha": alpha, "lambda": lambda })),
            Law::PowerOrigin { alpha, lambda } => named("power_origin", json!({ "alpha": alpha, "lambda": lambda })),
            Law::Table(t) => MeasureSpec::Table {
                atoms: t.atoms.clone(),
                density_table: t.radii.iter().zip(&t.values).map(|(r, f)| [*r, *f]).collect(),
            },
            Law::Scaled { factor, base } => named(
                "scaled",
                json!({ "factor": factor, "base": serde_json::to_value(base.spec()).unwrap_or(Value::Null) }),
            ),
            Law::Inverted(base) => named(
                "inverted",
                json!({ "base": serde_json::to_value(base.spec()).unwrap_or(Value::Null) }),
            ),
        }
    }
}

fn recip(x: f64) -> f64 {
    if x == 0.0 {
        f64::INFINITY
    } else if x == f64::INFINITY {
        0.0
    } else {
        1.0 / x
    }
}

/// Which built-in measure to construct.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Builtin {
    /// Uniform measure on the circle of radius `R`.
    Circle(f64),
    /// Normalized area measure on the disk of radius `R`.
    UniformDisk(f64),
    /// `dν = dℓ / (π(1+|z|²)²)`.
    FubiniStudy,
    /// `ν(D_r) = max(0, 1 − λ r^{−α})`.
    ParetoTail { alpha: f64, lambda: f64 },
    /// `ν(D_r) = min(1, λ r^α)`.
    PowerOrigin { alpha: f64, lambda: f64 },
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {x}")))
    }
}

/// A rotationally invariant probability measure.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialMeasure {
    law: Arc<Law>,
    atoms: Vec<Atom>,
    breaks: Vec<f64>,
    support: (f64, f64),
    density_support: Option<(f64, f64)>,
    origin_exponent: Option<PowerLaw>,
    tail_exponent: Option<PowerLaw>,
    log_moment: f64,
}

impl RadialMeasure {
    fn from_law(law: Law) -> Result<Self> {
        let law = Arc::new(law);
        let atoms = law.atoms();
        let density_support = law.density_support();
        let mut inner = f64::INFINITY;
        let mut outer: f64 = 0.0;
        for a in &atoms {
            inner = inner.min(a.radius);
            outer = outer.max(a.radius);
        }
        if let Some((a, b)) = density_support {
            inner = inner.min(a);
            outer = outer.max(b);
        }
        if inner > outer {
            return Err(invalid("measure has no mass"));
        }
        let mut breaks = law.breaks();
        breaks.retain(|u| u.is_finite());
        breaks.iter_mut().for_each(|u| *u += 0.0);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut m = Self {
            origin_exponent: law.origin_exponent(),
            tail_exponent: law.tail_exponent(),
            law,
            atoms,
            breaks,
            support: (inner, outer),
            density_support,
            log_moment: f64::NAN,
        };
        m.log_moment = m.compute_log_moment();
        if !m.log_moment.is_finite() || m.log_moment > 1e6 {
            log::warn!(
                "∫|log r| dμ could not be confirmed finite (estimate {}); results may be meaningless",
                m.log_moment
            );
        }
        Ok(m)
    }

    /// One of the built-in measures.
    pub fn builtin(which: Builtin) -> Result<Self> {
        let law = match which {
            Builtin::Circle(radius) => {
                positive("radius", radius)?;
                Law::Circle { radius }
            }
            Builtin::UniformDisk(radius) => {
                positive("radius", radius)?;
                Law::UniformDisk { radius }
            }
            Builtin::FubiniStudy => Law::FubiniStudy,
            Builtin::ParetoTail { alpha, lambda } => {
                positive("alpha", alpha)?;
                positive("lambda", lambda)?;
                Law::ParetoTail { alpha, lambda }
            }
            Builtin::PowerOrigin { alpha, lambda } => {
                positive("alpha", alpha)?;
                positive("lambda", lambda)?;
                Law::PowerOrigin { alpha, lambda }
            }
        };
        Self::from_law(law)
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::builtin(Builtin::Circle(radius))
    }

    pub fn uniform_disk(radius: f64) -> Result<Self> {
        Self::builtin(Builtin::UniformDisk(radius))
    }

    pub fn fubini_study() -> Self {
        Self::builtin(Builtin::FubiniStudy).expect("parameter-free measure")
    }

    pub fn pareto_tail(alpha: f64, lambda: f64) -> Result<Self> {
        Self::builtin(Builtin::ParetoTail { alpha, lambda })
    }

    pub fn power_origin(alpha: f64, lambda: f64) -> Result<Self> {
        Self::builtin(Builtin::PowerOrigin { alpha, lambda })
    }

    /// Measure given by atoms and a tabulated radial density (see
    /// [`DensityTable::new`]).
    pub fn from_table(atoms: Vec<Atom>, density: Vec<[f64; 2]>) -> Result<Self> {
        Self::from_law(Law::Table(Arc::new(DensityTable::new(atoms, density)?)))
    }

    /// Pushforward by `z ↦ 1/z̄`.
    pub fn invert(&self) -> Self {
        let law = match &*self.law {
            Law::Inverted(base) => (**base).clone(),
            Law::Circle { radius } => Law::Circle { radius: 1.0 / radius },
            _ => Law::Inverted(self.law.clone()),
        };
        Self::from_law(law).expect("inversion of a valid measure")
    }

    /// Pushforward by `z ↦ λ_s z`.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        positive("scale factor", factor)?;
        if factor == 1.0 {
            return Ok(self.clone());
        }
        let law = match &*self.law {
            Law::Circle { radius } => Law::Circle { radius: radius * factor },
            Law::UniformDisk { radius } => Law::UniformDisk { radius: radius * factor },
            Law::Scaled { factor: f, base } => Law::Scaled { factor: f * factor, base: base.clone() },
            _ => Law::Scaled { factor, base: self.law.clone() },
        };
        Self::from_law(law)
    }

    /// `ν(D_r)` for the open disk `D_r`.
    pub fn mass_in_disk(&self, r: f64) -> f64 {
        self.law.mass(r, false)
    }

    /// `ν(closure of D_r)`.
    pub fn mass_in_closed_disk(&self, r: f64) -> f64 {
        self.law.mass(r, true)
    }

    /// Density of `|z|` with respect to `dr` for the continuous part.
    pub fn density(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        (self.law.ln_density(r.ln()) - r.ln()).exp()
    }

    /// Log-density of `ln|z|` for the continuous part (`-inf` off support).
    pub fn ln_log_radius_density(&self, u: f64) -> f64 {
        self.law.ln_density(u)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn support_inner(&self) -> f64 {
        self.support.0
    }

    pub fn support_outer(&self) -> f64 {
        self.support.1
    }

    /// Radial range of the absolutely continuous part.
    pub fn density_support(&self) -> Option<(f64, f64)> {
        self.density_support
    }

    pub fn origin_exponent(&self) -> Option<PowerLaw> {
        self.origin_exponent
    }

    pub fn tail_exponent(&self) -> Option<PowerLaw> {
        self.tail_exponent
    }

    /// Points `ln r` where the mass function has a jump or a kink.
    pub fn log_breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    /// `∫ |log r| dμ(r)`, computed at construction.
    pub fn log_moment(&self) -> f64 {
        self.log_moment
    }

    /// Density support in `u = ln r`, if there is a continuous part.
    pub(crate) fn log_density_domain(&self) -> Option<(f64, f64)> {
        self.density_support.map(|(a, b)| (ln_or_neg_inf(a), b.ln()))
    }

    fn compute_log_moment(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.weight * a.radius.ln().abs()).sum();
        let Some(domain) = self.log_density_domain() else { return atoms };
        // ∫|u| g(u) du: the |u| factor is handled by splitting at 0.
        let mut total = atoms;
        for (lo, hi, sign) in [(domain.0, domain.1.min(0.0), -1.0), (domain.0.max(0.0), domain.1, 1.0)] {
            if hi <= lo {
                continue;
            }
            let psi = |u: f64| self.law.ln_density(u) + (sign * u).max(1e-300).ln();
            match logspace::ln_integral(&psi, &self.breaks, (lo, hi)) {
                Ok(v) => total += v.exp(),
                Err(Error::Domain(_)) => {}
                Err(_) => return f64::INFINITY,
            }
        }
        total
    }

    /// Serializable description.
    pub fn spec(&self) -> MeasureSpec {
        self.law.spec()
    }

    /// Builds a measure from its serializable description.
    pub fn from_spec(spec: &MeasureSpec) -> Result<Self> {
        match spec {
            MeasureSpec::Table { atoms, density_table } => Self::from_table(atoms.clone(), density_table.clone()),
            MeasureSpec::Named { name, params } => {
                let get = |keys: &[&str]| -> Result<f64> {
                    keys.iter()
                        .find_map(|k| params.get(*k).and_then(Value::as_f64))
                        .ok_or_else(|| invalid(format!("measure '{name}' needs parameter '{}'", keys[0])))
                };
                let get_or = |keys: &[&str], default: f64| -> Result<f64> {
                    if keys.iter().any(|k| params.get(*k).is_some()) {
                        get(keys)
                    } else {
                        Ok(default)
                    }
                };
                let base = || -> Result<Self> {
                    let b = params.get("base").ok_or_else(|| invalid(format!("measure '{name}' needs 'base'")))?;
                    let spec: MeasureSpec = serde_json::from_value(b.clone())?;
                    Self::from_spec(&spec)
                };
                match name.as_str() {
                    "circle" => Self::circle(get_or(&["radius", "R"], 1.0)?),
                    "uniform_disk" => Self::uniform_disk(get_or(&["radius", "R"], 1.0)?),
                    "fubini_study" => Ok(Self::fubini_study()),
                    "pareto_tail" => Self::pareto_tail(get(&["alpha"])?, get(&["lambda"])?),
                    "power_origin" => Self::power_origin(get(&["alpha"])?, get(&["lambda"])?),
                    "scaled" => base()?.scale(get(&["factor"])?),
                    "inverted" => Ok(base()?.invert()),
                    other => Err(invalid(format!("unknown measure '{other}'"))),
                }
            }
        }
    }

    /// Parses either JSON or the shorthand `name[:p1,p2]`
    /// (`circle:1`, `pareto_tail:2,1`, `fubini_study`).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            let spec: MeasureSpec = serde_json::from_str(text)?;
            return Self::from_spec(&spec);
        }
        let (name, args) = match text.split_once(':') {
            Some((n, a)) => (n.trim(), a),
            None => (text, ""),
        };
        let nums: Vec<f64> = args
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("bad measure parameter '{s}': {e}"))))
            .collect::<Result<_>>()?;
        let arity = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::Parse(format!("measure '{name}' takes {k} parameter(s), got {}", nums.len())))
            }
        };
        match name {
            "circle" | "uniform_disk" => {
                let r = if nums.is_empty() { 1.0 } else { arity(1).map(|_| nums[0])? };
                if name == "circle" {
                    Self::circle(r)
                } else {
                    Self::uniform_disk(r)
                }
            }
            "fubini_study" => arity(0).map(|_| Self::fubini_study()),
            "pareto_tail" => arity(2).and_then(|_| Self::pareto_tail(nums[0], nums[1])),
            "power_origin" => arity(2).and_then(|_| Self::power_origin(nums[0], nums[1])),
            other => Err(Error::Parse(format!("unknown measure '{other}'"))),
        }
    }
}

fn ln_or_neg_inf(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

impl fmt::Display for RadialMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_string(&self.spec()).map_err(|_| fmt::Error)?;
        f.write_str(&v)
    }
}

/// JSON form of a measure: `{name, params}` for the built-ins and the
/// `scaled` / `inverted` transforms, or `{atoms, density_table}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    Named {
        name: String,
        #[serde(default)]
        params: Value,
    },
    Table {
        #[serde(default)]
        atoms: Vec<Atom>,
        #[serde(default)]
        density_table: Vec<[f64; 2]>,
    },
}
