//! Flat `key = value` run configuration.

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use lipswiss_core::{AdmissibleFunction, BuildMode};

#[derive(Debug)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhiSpec {
    Power(f64),
    LogQuotient,
    ConstantOne,
}

impl PhiSpec {
    pub fn build(&self) -> lipswiss_core::Result<AdmissibleFunction> {
        match *self {
            PhiSpec::Power(b) => AdmissibleFunction::power(b),
            PhiSpec::LogQuotient => Ok(AdmissibleFunction::log_quotient()),
            PhiSpec::ConstantOne => Ok(AdmissibleFunction::constant_one()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub alpha: f64,
    pub phi: PhiSpec,
    pub t: u32,
    pub max_index: u32,
    pub mode: BuildMode,
    pub mc_samples: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub series_n: Option<u32>,
    pub density_j_min: Option<u32>,
    pub density_j_max: u32,
    pub dist_samples: usize,
    pub corpus: usize,
    pub pole_budget: u32,
    pub verify_n_min: u32,
    pub verify_n_max: u32,
    pub verify_samples: usize,
    pub beta: f64,
    pub radii_rate: f64,
    pub appendix_n: u32,
    pub melnikov_corpus: usize,
    pub melnikov_samples: usize,
}

impl RunConfig {
    fn defaults(alpha: f64) -> Self {
        RunConfig {
            alpha,
            phi: PhiSpec::Power(0.5),
            t: 1,
            max_index: 12,
            mode: BuildMode::Dense,
            mc_samples: 100_000,
            seed: 1,
            out: PathBuf::from("out"),
            series_n: None,
            density_j_min: None,
            density_j_max: 20,
            dist_samples: 10_000,
            corpus: 50,
            pole_budget: 2,
            verify_n_min: 5,
            verify_n_max: 20,
            verify_samples: 400,
            beta: 0.25,
            radii_rate: 1.1,
            appendix_n: 200,
            melnikov_corpus: 100,
            melnikov_samples: 4000,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut pairs = Vec::new();
        let mut seen = HashSet::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected `key = value`, got `{body}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(err(line, format!("duplicate key `{key}`")));
            }
            pairs.push((line, key.to_string(), value.to_string()));
        }
        let alpha = match pairs.iter().find(|(_, k, _)| k == "alpha") {
            Some((line, _, v)) => num::<f64>(*line, "alpha", v)?,
            None => return Err(ConfigError { line: None, message: "missing required key `alpha`".into() }),
        };
        let mut cfg = RunConfig::defaults(alpha);
        let mut phi_kind = "power".to_string();
        let mut phi_exponent = 0.5;
        let mut kind_line = 0;
        for (line, key, v) in &pairs {
            let line = *line;
            match key.as_str() {
                "alpha" => {}
                "phi" => {
                    phi_kind = v.clone();
                    kind_line = line;
                }
                "phi_exponent" => phi_exponent = num(line, key, v)?,
                "t" => cfg.t = num(line, key, v)?,
                "max_index" => cfg.max_index = num(line, key, v)?,
                "mode" => {
                    cfg.mode = match v.as_str() {
                        "dense" => BuildMode::Dense,
                        "subsequenced" => BuildMode::Subsequenced,
                        _ => return Err(err(line, format!("mode must be `dense` or `subsequenced`, got `{v}`"))),
                    }
                }
                "mc_samples" => cfg.mc_samples = num(line, key, v)?,
                "seed" => cfg.seed = num(line, key, v)?,
                "out" => cfg.out = PathBuf::from(v),
                "series_n" => cfg.series_n = Some(num(line, key, v)?),
                "density_j_min" => cfg.density_j_min = Some(num(line, key, v)?),
                "density_j_max" => cfg.density_j_max = num(line, key, v)?,
                "dist_samples" => cfg.dist_samples = num(line, key, v)?,
                "corpus" => cfg.corpus = num(line, key, v)?,
                "pole_budget" => cfg.pole_budget = num(line, key, v)?,
                "verify_n_min" => cfg.verify_n_min = num(line, key, v)?,
                "verify_n_max" => cfg.verify_n_max = num(line, key, v)?,
                "verify_samples" => cfg.verify_samples = num(line, key, v)?,
                "beta" => cfg.beta = num(line, key, v)?,
                "radii_rate" => cfg.radii_rate = num(line, key, v)?,
                "appendix_n" => cfg.appendix_n = num(line, key, v)?,
                "melnikov_corpus" => cfg.melnikov_corpus = num(line, key, v)?,
                "melnikov_samples" => cfg.melnikov_samples = num(line, key, v)?,
                _ => return Err(err(line, format!("unknown key `{key}`"))),
            }
        }
        cfg.phi = match phi_kind.as_str() {
            "power" => PhiSpec::Power(phi_exponent),
            "log-quotient" => PhiSpec::LogQuotient,
            "constant-one" => PhiSpec::ConstantOne,
            other => {
                return Err(err(kind_line, format!("phi must be power, log-quotient or constant-one, got `{other}`")))
            }
        };
        cfg.validate(&pairs)?;
        Ok(cfg)
    }

    fn validate(&self, pairs: &[(usize, String, String)]) -> Result<(), ConfigError> {
        let line_of = |key: &str| pairs.iter().find(|(_, k, _)| k == key).map(|(l, _, _)| *l);
        let check = |ok: bool, key: &str, msg: String| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError { line: line_of(key), message: msg })
            }
        };
        check(self.alpha > 0.0 && self.alpha < 1.0, "alpha", format!("alpha must lie in (0, 1), got {}", self.alpha))?;
        if let PhiSpec::Power(b) = self.phi {
            check(b > 0.0 && b < 1.0, "phi_exponent", format!("phi_exponent must lie in (0, 1), got {b}"))?;
        }
        check(self.t <= 1, "t", format!("t must be 0 or 1, got {}", self.t))?;
        check(
            self.verify_n_min <= self.verify_n_max,
            "verify_n_min",
            "verify_n_min must not exceed verify_n_max".into(),
        )?;
        Ok(())
    }

    pub fn series_n(&self) -> u32 {
        self.series_n.unwrap_or(self.max_index)
    }
}

fn err(line: usize, message: String) -> ConfigError {
    ConfigError { line: Some(line), message }
}

fn num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| err(line, format!("invalid value `{v}` for `{key}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_everything_but_alpha() {
        let cfg = RunConfig::parse("alpha = 0.5\n").unwrap();
        assert_eq!(cfg.phi, PhiSpec::Power(0.5));
        assert_eq!(cfg.max_index, 12);
        assert_eq!(cfg.series_n(), 12);
    }

    #[test]
    fn comments_and_kinds() {
        let cfg = RunConfig::parse("# run\nalpha=0.3 # inline\nphi = log-quotient\nmode = subsequenced\n").unwrap();
        assert_eq!(cfg.phi, PhiSpec::LogQuotient);
        assert_eq!(cfg.mode, BuildMode::Subsequenced);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = RunConfig::parse("alpha = 0.5\n\nmax_index = twelve\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        let e = RunConfig::parse("alpha = 0.5\nbogus = 1\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = RunConfig::parse("alpha = 0.5\nalpha = 0.6\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = RunConfig::parse("max_index = 3\n").unwrap_err();
        assert_eq!(e.line, None);
        let e = RunConfig::parse("alpha = 1.5\n").unwrap_err();
        assert_eq!(e.line, Some(1));
        let e = RunConfig::parse("alpha = 0.5\nno equals sign\n").unwrap_err();
        assert_eq!(e.line, Some(2));
    }
}
