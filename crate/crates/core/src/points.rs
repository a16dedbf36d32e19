//! Finite point configurations in the plane and their CSV/JSON forms.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Where a configuration came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Jellium,
    RootSet,
    Bergman,
    Imported,
}

/// Open planar regions used to split configurations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `|z| < R`.
    Disk(f64),
    /// `|z| > R`.
    Complement(f64),
    /// `a < |z| < b`.
    Annulus(f64, f64),
}

impl Region {
    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        match *self {
            Region::Disk(radius) => r < radius,
            Region::Complement(radius) => r > radius,
            Region::Annulus(a, b) => a < r && r < b,
        }
    }
}

/// A finite multiset of complex points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub points: Vec<Complex64>,
    pub provenance: Provenance,
}

impl PointConfiguration {
    pub fn new(points: Vec<Complex64>, provenance: Provenance) -> Self {
        Self { points, provenance }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn moduli(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|z| z.norm())
    }

    /// Largest modulus; `None` for an empty configuration.
    pub fn max_modulus(&self) -> Option<f64> {
        self.moduli().reduce(f64::max)
    }

    /// Smallest modulus; `None` for an empty configuration.
    pub fn min_modulus(&self) -> Option<f64> {
        self.moduli().reduce(f64::min)
    }

    /// Points lying in `region`.
    pub fn split_by_region(&self, region: Region) -> PointConfiguration {
        PointConfiguration {
            points: self.points.iter().copied().filter(|z| region.contains(*z)).collect(),
            provenance: self.provenance,
        }
    }

    /// Each point multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> PointConfiguration {
        PointConfiguration {
            points: self.points.iter().map(|z| z * factor).collect(),
            provenance: self.provenance,
        }
    }

    /// Writes `re,im` rows after a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "re,im")?;
        for z in &self.points {
            writeln!(out, "{},{}", z.re, z.im)?;
        }
        Ok(())
    }

    /// Reads the format written by [`write_csv`](Self::write_csv). A header
    /// line is optional; blank lines are skipped.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(|f| f.trim().trim_matches('"')).collect();
            if fields.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected 2 columns, found {}", lineno + 1, fields.len())));
            }
            if lineno == 0 && fields[0].parse::<f64>().is_err() {
                continue;
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: '{s}': {e}", lineno + 1)))
            };
            points.push(Complex64::new(parse(fields[0])?, parse(fields[1])?));
        }
        Ok(Self::new(points, Provenance::Imported))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        if c.points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("non-finite point in configuration"));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PointConfiguration {
        PointConfiguration::new(
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, -2.0), Complex64::new(1.0, 1.0)],
            Provenance::RootSet,
        )
    }

    #[test]
    fn regions_partition() {
        let c = sample();
        assert_eq!(c.split_by_region(Region::Disk(f64::INFINITY)).len(), 3);
        assert!(c.split_by_region(Region::Disk(0.0)).is_empty());
        let inside = c.split_by_region(Region::Disk(1.0)).len();
        let outside = c.split_by_region(Region::Complement(1.0)).len();
        assert_eq!(inside + outside, 3);
        assert_eq!(c.split_by_region(Region::Annulus(1.0, 1.5)).len(), 1);
    }

    #[test]
    fn csv_round_trip() {
        let c = sample();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"re,im\n"));
        let back = PointConfiguration::read_csv(&buf[..]).unwrap();
        assert_eq!(back.points, c.points);
        assert!(PointConfiguration::read_csv(&b"re,im\n1,2,3\n"[..]).is_err());
        assert!(PointConfiguration::read_csv(&b"re,im\n1,x\n"[..]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = sample();
        assert_eq!(PointConfiguration::from_json(&c.to_json().unwrap()).unwrap(), c);
    }

    #[test]
    fn extremal_moduli() {
        let c = sample();
        assert_eq!(c.max_modulus(), Some(2.0));
        assert_eq!(c.min_modulus(), Some(0.5));
    }
}
