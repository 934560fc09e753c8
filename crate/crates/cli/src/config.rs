//! Sweep and point configuration, from flags and from TOML files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qheat_core::KernelMode;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Single,
    Coupled,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Single => "single",
            Model::Coupled => "coupled",
        })
    }
}

/// Parameter that a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    W0,
    W1,
    W2,
    Lambda,
    /// Both spectral weights together.
    G,
    Ga,
    Gb,
    Ta,
    Tb,
    /// Mean temperature: `T_A = T + ΔT`, `T_B = T − ΔT`.
    T,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::W0 => "w0",
            SweepVar::W1 => "w1",
            SweepVar::W2 => "w2",
            SweepVar::Lambda => "lambda",
            SweepVar::G => "g",
            SweepVar::Ga => "ga",
            SweepVar::Gb => "gb",
            SweepVar::Ta => "ta",
            SweepVar::Tb => "tb",
            SweepVar::T => "t",
        }
    }

    pub fn applies_to(self, model: Model) -> bool {
        match self {
            SweepVar::W0 => model == Model::Single,
            SweepVar::W1 | SweepVar::W2 | SweepVar::Lambda => model == Model::Coupled,
            _ => true,
        }
    }
}

/// Fully resolved model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
    pub lambda: f64,
    pub ga: f64,
    pub gb: f64,
    pub ta: f64,
    pub tb: f64,
    /// Half the temperature difference used when sweeping the mean temperature.
    pub delta_t: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            w0: 1.0,
            w1: 1.0,
            w2: 2.0,
            lambda: 0.5,
            ga: 1.0,
            gb: 1.0,
            ta: 1.0,
            tb: 1.0,
            delta_t: 0.0,
        }
    }
}

impl Params {
    pub fn with(mut self, var: SweepVar, value: f64) -> Self {
        match var {
            SweepVar::W0 => self.w0 = value,
            SweepVar::W1 => self.w1 = value,
            SweepVar::W2 => self.w2 = value,
            SweepVar::Lambda => self.lambda = value,
            SweepVar::G => {
                self.ga = value;
                self.gb = value;
            }
            SweepVar::Ga => self.ga = value,
            SweepVar::Gb => self.gb = value,
            SweepVar::Ta => self.ta = value,
            SweepVar::Tb => self.tb = value,
            SweepVar::T => {
                self.ta = value + self.delta_t;
                self.tb = value - self.delta_t;
            }
        }
        self
    }

    fn describe(&self, model: Model) -> String {
        match model {
            Model::Single => format!(
                "w0={} ga={} gb={} ta={} tb={}",
                self.w0, self.ga, self.gb, self.ta, self.tb
            ),
            Model::Coupled => format!(
                "w1={} w2={} lambda={} ga={} gb={} ta={} tb={}",
                self.w1, self.w2, self.lambda, self.ga, self.gb, self.ta, self.tb
            ),
        }
    }
}

/// Optional parameter values; later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    /// Qubit splitting (single model)
    #[arg(long)]
    pub w0: Option<f64>,
    /// First qubit splitting (coupled model)
    #[arg(long)]
    pub w1: Option<f64>,
    /// Second qubit splitting (coupled model)
    #[arg(long)]
    pub w2: Option<f64>,
    /// Flip-flop coupling strength
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Spectral weight of both reservoirs
    #[arg(long)]
    pub g: Option<f64>,
    /// Spectral weight of reservoir A
    #[arg(long)]
    pub ga: Option<f64>,
    /// Spectral weight of reservoir B
    #[arg(long)]
    pub gb: Option<f64>,
    /// Temperature of reservoir A
    #[arg(long)]
    pub ta: Option<f64>,
    /// Temperature of reservoir B
    #[arg(long)]
    pub tb: Option<f64>,
    /// Half temperature difference for mean-temperature sweeps
    #[arg(long = "delta-t")]
    #[serde(rename = "delta_t")]
    pub delta_t: Option<f64>,
}

impl ParamOverrides {
    pub fn apply(&self, mut p: Params) -> Params {
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut p.w0, self.w0);
        set(&mut p.w1, self.w1);
        set(&mut p.w2, self.w2);
        set(&mut p.lambda, self.lambda);
        set(&mut p.ga, self.g);
        set(&mut p.gb, self.g);
        set(&mut p.ga, self.ga);
        set(&mut p.gb, self.gb);
        set(&mut p.ta, self.ta);
        set(&mut p.tb, self.tb);
        set(&mut p.delta_t, self.delta_t);
        p
    }
}

/// Inclusive linear grid `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, CliError> {
        if count < 2 {
            return Err(CliError::Usage(format!("sweep needs at least 2 points, got {count}")));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(CliError::Usage(format!(
                "sweep range needs start < stop, got {start}:{stop}"
            )));
        }
        Ok(Self { start, stop, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64) / last
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(CliError::Usage(format!("range must be start:stop:count, got {s:?}")));
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad number {x:?} in range {s:?}")))
        };
        let count = n
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad count {n:?} in range {s:?}")))?;
        Range::new(num(a)?, num(b)?, count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: Model,
    pub mode: KernelMode,
    pub params: Params,
    pub var: SweepVar,
    pub range: Range,
    pub out: Option<PathBuf>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.var.applies_to(self.model) {
            return Err(CliError::Usage(format!(
                "{} is not a parameter of the {} model",
                self.var.name(),
                self.model
            )));
        }
        Range::new(self.range.start, self.range.stop, self.range.count)?;
        Ok(())
    }

    /// One-line description echoed into the CSV comment header.
    pub fn describe(&self) -> String {
        let mut s = format!(
            "model={} mode={} {} sweep={} range={}:{}:{}",
            self.model,
            self.mode,
            self.params.describe(self.model),
            self.var.name(),
            self.range.start,
            self.range.stop,
            self.range.count
        );
        if self.params.delta_t != 0.0 {
            s.push_str(&format!(" delta_t={}", self.params.delta_t));
        }
        s
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub var: Option<SweepVar>,
    /// `start:stop:count`
    pub range: Option<String>,
}

/// Contents of a `--config` TOML file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<Model>,
    pub mode: Option<String>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: ParamOverrides,
    #[serde(default)]
    pub sweep: SweepSection,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn mode(&self) -> Result<Option<KernelMode>, CliError> {
        self.mode
            .as_deref()
            .map(|m| m.parse::<KernelMode>().map_err(|e| CliError::Usage(e.to_string())))
            .transpose()
    }

    pub fn range(&self) -> Result<Option<Range>, CliError> {
        self.sweep.range.as_deref().map(str::parse).transpose()
    }
}
