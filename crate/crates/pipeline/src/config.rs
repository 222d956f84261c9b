//! Run configuration: built-in defaults, optional `key = value` file, then
//! command-line overrides (highest precedence).
//!
//! | key              | default | meaning                                         |
//! |------------------|---------|-------------------------------------------------|
//! | `seed`           | 0       | root seed for every per-image RNG stream        |
//! | `size`           | 256     | square working resolution                       |
//! | `band_radius`    | 10      | trimap unknown-band dilation radius (px)        |
//! | `mask_dilation`  | 5       | inpainting mask dilation radius (px)            |
//! | `train_fraction` | 0.9     | share of records labelled `train`               |
//! | `jobs`           | 0       | worker threads (0 = one per core)               |
//! | `grad_sigma`     | 1.4     | Gaussian-derivative sigma for the Grad metric   |
//! | `conn_step`      | 0.1     | threshold step for the Conn metric              |
//! | `conn_theta`     | 0.15    | connectivity-degree cut-off for the Conn metric |

use std::path::Path;
use std::str::FromStr;

use hmh_core::metrics::{MetricParams, CONN_STEP, CONN_THETA, GRAD_SIGMA};

use crate::error::{Error, IoContext, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub size: usize,
    pub band_radius: usize,
    pub mask_dilation: usize,
    pub train_fraction: f64,
    pub jobs: usize,
    pub grad_sigma: f64,
    pub conn_step: f64,
    pub conn_theta: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 0,
            size: 256,
            band_radius: 10,
            mask_dilation: 5,
            train_fraction: 0.9,
            jobs: 0,
            grad_sigma: GRAD_SIGMA,
            conn_step: CONN_STEP,
            conn_theta: CONN_THETA,
        }
    }
}

/// Values given on the command line; `None` keeps the file/default value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub size: Option<usize>,
    pub band_radius: Option<usize>,
    pub mask_dilation: Option<usize>,
    pub train_fraction: Option<f64>,
    pub jobs: Option<usize>,
}

impl Config {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config {
                origin: format!("{origin}:{}", n + 1),
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "seed" => cfg.seed = parse_value(key, value).map_err(err)?,
                "size" => cfg.size = parse_value(key, value).map_err(err)?,
                "band_radius" => cfg.band_radius = parse_value(key, value).map_err(err)?,
                "mask_dilation" => cfg.mask_dilation = parse_value(key, value).map_err(err)?,
                "train_fraction" => cfg.train_fraction = parse_value(key, value).map_err(err)?,
                "jobs" => cfg.jobs = parse_value(key, value).map_err(err)?,
                "grad_sigma" => cfg.grad_sigma = parse_value(key, value).map_err(err)?,
                "conn_step" => cfg.conn_step = parse_value(key, value).map_err(err)?,
                "conn_theta" => cfg.conn_theta = parse_value(key, value).map_err(err)?,
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        cfg.validate(origin)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).at(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn with_overrides(mut self, o: &Overrides) -> Result<Self> {
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.size {
            self.size = v;
        }
        if let Some(v) = o.band_radius {
            self.band_radius = v;
        }
        if let Some(v) = o.mask_dilation {
            self.mask_dilation = v;
        }
        if let Some(v) = o.train_fraction {
            self.train_fraction = v;
        }
        if let Some(v) = o.jobs {
            self.jobs = v;
        }
        self.validate("command line")?;
        Ok(self)
    }

    fn validate(&self, origin: &str) -> Result<()> {
        let fail = |message: &str| {
            Err(Error::Config {
                origin: origin.to_string(),
                message: message.to_string(),
            })
        };
        if self.size == 0 {
            return fail("size must be >= 1");
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return fail("train_fraction must lie in (0, 1)");
        }
        Ok(())
    }

    pub fn metric_params(&self) -> MetricParams {
        MetricParams {
            grad_sigma: self.grad_sigma,
            conn_step: self.conn_step,
            conn_theta: self.conn_theta,
        }
    }

    /// Runs `f` on a pool with `jobs` workers (0 = rayon default).
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("bad value `{value}` for `{key}`: {e}"))
}
