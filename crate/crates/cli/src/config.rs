//! Optional TOML experiment file. Command-line flags take precedence over
//! every field here.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use jellium::{ProductCdf, RadialMeasure};
use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Shorthand string, JSON string, or a table `{name, params}` /
    /// `{atoms, density_table}`.
    pub measure: Option<toml::Value>,
    pub model: Option<String>,
    pub n: Option<usize>,
    pub replicas: Option<usize>,
    pub seed: Option<u64>,
    pub statistic: Option<String>,
    pub law: Option<String>,
    /// Reference CDF, same grammar as `--reference`.
    pub reference: Option<String>,
    pub out: Option<PathBuf>,
    pub meta: Option<PathBuf>,
    pub bins: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn measure_text(&self) -> Result<Option<String>> {
        Ok(match &self.measure {
            None => None,
            Some(toml::Value::String(s)) => Some(s.clone()),
            Some(v) => Some(serde_json::to_string(v)?),
        })
    }
}

pub fn parse_measure(text: &str) -> Result<RadialMeasure> {
    RadialMeasure::parse(text).with_context(|| format!("measure '{text}'"))
}

/// `bergman_max_outside[:R]`, `bergman_min_disk[:R]`,
/// `bulk_max:α,λ`, `bulk_min:α,λ`, or the JSON form.
pub fn parse_reference(text: &str) -> Result<ProductCdf> {
    let text = text.trim();
    if text.starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    let (name, args) = text.split_once(':').unwrap_or((text, ""));
    let nums: Vec<f64> = args
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("bad parameter '{s}'")))
        .collect::<Result<_>>()?;
    let radius = || match nums.as_slice() {
        [] => Ok(1.0),
        [r] => Ok(*r),
        _ => bail!("'{name}' takes at most one parameter"),
    };
    let pair = || match nums.as_slice() {
        [a, l] => Ok((*a, *l)),
        _ => bail!("'{name}' takes two parameters alpha,lambda"),
    };
    Ok(match name {
        "bergman_max_outside" => ProductCdf::BergmanMaxOutside { radius: radius()? },
        "bergman_min_disk" => ProductCdf::BergmanMinDisk { radius: radius()? },
        "bulk_max" => {
            let (alpha, lambda) = pair()?;
            ProductCdf::BulkMax { alpha, lambda }
        }
        "bulk_min" => {
            let (alpha, lambda) = pair()?;
            ProductCdf::BulkMin { alpha, lambda }
        }
        other => bail!("unknown reference CDF '{other}'"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_shorthand() {
        assert_eq!(parse_reference("bergman_min_disk").unwrap(), ProductCdf::BergmanMinDisk { radius: 1.0 });
        assert_eq!(parse_reference("bulk_max:2,1").unwrap(), ProductCdf::BulkMax { alpha: 2.0, lambda: 1.0 });
        assert_eq!(
            parse_reference(r#"{"kind":"bergman_max_outside","radius":2.0}"#).unwrap(),
            ProductCdf::BergmanMaxOutside { radius: 2.0 }
        );
        assert!(parse_reference("bulk_max:2").is_err());
        assert!(parse_reference("nope").is_err());
    }

    #[test]
    fn measure_table_in_toml() {
        let c: ExperimentConfig = toml::from_str("seed = 3\n[measure]\nname = \"circle\"\nparams = { radius = 2.0 }\n").unwrap();
        let m = parse_measure(&c.measure_text().unwrap().unwrap()).unwrap();
        assert_eq!(m, RadialMeasure::circle(2.0).unwrap());
        assert!(toml::from_str::<ExperimentConfig>("sed = 3").is_err());
    }
}
