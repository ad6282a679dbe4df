//! Flat `key = value` interferometer configuration files.
//!
//! ```text
//! # two cold-atom interferometers
//! coupling   = 9.42477796076938
//! separation = 2.0
//! arm        = 1.0
//! hold_time  = 1.0
//! ramp_time  = 1e-3
//! integrator_eps = 1e-10   # optional
//! ```

use pathent::gravity::{InterferometerConfig, DEFAULT_INTEGRATOR_EPS};

const REQUIRED: [&str; 5] = ["coupling", "separation", "arm", "hold_time", "ramp_time"];
const OPTIONAL: [&str; 1] = ["integrator_eps"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing key `{0}`")]
    Missing(&'static str),
}

/// Raw parsed values; physical consistency (e.g. `D > L`) is checked when
/// the interferometer is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzeConfig {
    pub coupling: f64,
    pub separation: f64,
    pub arm: f64,
    pub hold_time: f64,
    pub ramp_time: f64,
    pub integrator_eps: f64,
}

impl AnalyzeConfig {
    pub fn interferometer(&self) -> pathent::Result<InterferometerConfig> {
        InterferometerConfig::new(self.coupling, self.separation, self.arm, self.hold_time, self.ramp_time)
    }
}

pub fn parse_config(text: &str) -> Result<AnalyzeConfig, ConfigError> {
    let mut values: [Option<f64>; 6] = [None; 6];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| ConfigError::Line { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let slot = REQUIRED
            .iter()
            .chain(&OPTIONAL)
            .position(|k| *k == key)
            .ok_or_else(|| err(format!("unknown key `{key}`")))?;
        let x: f64 = value
            .parse()
            .map_err(|_| err(format!("value of `{key}` is not a number: `{value}`")))?;
        if !x.is_finite() {
            return Err(err(format!("value of `{key}` must be finite")));
        }
        if values[slot].replace(x).is_some() {
            return Err(err(format!("duplicate key `{key}`")));
        }
    }
    let get = |k: usize| values[k].ok_or(ConfigError::Missing(REQUIRED[k]));
    Ok(AnalyzeConfig {
        coupling: get(0)?,
        separation: get(1)?,
        arm: get(2)?,
        hold_time: get(3)?,
        ramp_time: get(4)?,
        integrator_eps: values[5].unwrap_or(DEFAULT_INTEGRATOR_EPS),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "# demo\ncoupling = 3\nseparation=2\n\narm = 1 # metres\nhold_time = 1\nramp_time = 0.001\n";

    #[test]
    fn parses_with_comments_and_default_eps() {
        let c = parse_config(GOOD).unwrap();
        assert_eq!(c.coupling, 3.0);
        assert_eq!(c.arm, 1.0);
        assert_eq!(c.ramp_time, 1e-3);
        assert_eq!(c.integrator_eps, DEFAULT_INTEGRATOR_EPS);
        let c = parse_config(&format!("{GOOD}integrator_eps = 1e-11")).unwrap();
        assert_eq!(c.integrator_eps, 1e-11);
    }

    #[test]
    fn errors_name_the_line() {
        let text = GOOD.replace("separation=2", "separation 2");
        assert_eq!(
            parse_config(&text).unwrap_err(),
            ConfigError::Line {
                line: 3,
                message: "expected `key = value`, found `separation 2`".into()
            }
        );
        let text = GOOD.replace("arm = 1", "arm = one");
        assert!(parse_config(&text).unwrap_err().to_string().starts_with("line 5:"));
        let text = format!("{GOOD}mass = 1\n");
        assert!(parse_config(&text)
            .unwrap_err()
            .to_string()
            .contains("unknown key `mass`"));
        let text = format!("{GOOD}arm = 2\n");
        assert!(parse_config(&text).unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn missing_key() {
        let text = GOOD.replace("hold_time = 1\n", "");
        assert_eq!(parse_config(&text).unwrap_err(), ConfigError::Missing("hold_time"));
    }
}
