//! Radial two-dimensional Coulomb gases at inverse temperature 2, zeros of
//! random polynomials built on a radial background measure, and the limiting
//! point processes describing their extremal particles.

pub mod dpp;
pub mod error;
pub mod kernel;
pub mod limit;
pub mod measure;
pub mod points;
pub mod poly;
pub mod potential;
pub mod quad;
pub mod special;
pub mod stats;
pub mod verify;

mod logspace;

pub use error::{Error, Result};
pub use measure::{Atom, Builtin, MeasureSpec, PowerLaw, RadialMeasure};
pub use potential::RadialPotential;
pub use dpp::{Extremal, Jellium, RadialWeightDensity};
pub use kernel::{Kernel, KernelSeries, KernelWeight, Orientation};
pub use points::{PointConfiguration, Provenance, Region};
pub use poly::{BasisNorms, CoefficientLaw, PolynomialSample, RootSet};
pub use limit::{BergmanKernel, BergmanRegion, BulkLimitKernel, MittagLefflerFn, ProductCdf};
pub use stats::{EmpiricalCdf, KsResult, Model, PreparedModel, Statistic};
pub use verify::{Check, Report, VerifyOptions};
