use std::path::PathBuf;

use crate::config::Config;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// One sweep axis, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub scale: Scale,
}

impl Axis {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            scale: Scale::Linear,
        }
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start,
            stop,
            count,
            scale: Scale::Log,
        }
    }

    /// Reads `<prefix>.start/.stop/.count/.scale`.
    pub fn from_config(c: &Config, prefix: &str) -> Result<Self, CliError> {
        let scale = match c.str(&format!("{prefix}.scale"))? {
            "linear" => Scale::Linear,
            "log" => Scale::Log,
            other => {
                return Err(CliError::Config(format!(
                    "{prefix}.scale must be `linear` or `log`, got `{other}`"
                )))
            }
        };
        let axis = Self {
            start: c.f64(&format!("{prefix}.start"))?,
            stop: c.f64(&format!("{prefix}.stop"))?,
            count: c.count(&format!("{prefix}.count"))?,
            scale,
        };
        axis.validate()
            .map_err(|e| CliError::Config(format!("{prefix}: {e}")))?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.count < 2 {
            return Err(format!("axis needs at least 2 points, got {}", self.count));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start == self.stop {
            return Err(format!(
                "axis endpoints must be finite and distinct, got {} and {}",
                self.start, self.stop
            ));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err("log axis endpoints must be positive".into());
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    return self.stop;
                }
                let t = k as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + t * (self.stop - self.start),
                    Scale::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + t * (b - a))
                    }
                }
            })
            .collect()
    }
}

/// A named sweep: the quantity computed, its axes, the fixed-parameter
/// overrides in force and where the table goes.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub quantity: String,
    pub axes: Vec<(String, Axis)>,
    pub overrides: Vec<String>,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        for (name, axis) in &self.axes {
            axis.validate()
                .map_err(|e| CliError::Config(format!("{}: {name}: {e}", self.quantity)))?;
        }
        Ok(())
    }

    /// Row-major grid over all axes, last axis fastest.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new()];
        for (_, axis) in &self.axes {
            let pts = axis.points();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    pts.iter().map(move |&x| {
                        let mut row = prefix.clone();
                        row.push(x);
                        row
                    })
                })
                .collect();
        }
        out
    }
}
