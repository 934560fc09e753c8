//! Pinned sweeps for the three figure reproductions.

use std::str::FromStr;

use qheat_core::KernelMode;

use crate::config::{Model, Params, Range, SweepConfig, SweepVar};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// Populations against a common temperature, secular kernel
    Fig3,
    /// Currents against T_A at T_B = 1, secular kernel
    Fig4,
    /// Populations against mean temperature at ΔT = 5, Redfield kernel
    Fig5,
}

const FIG5_DELTA_T: f64 = 5.0;

impl Preset {
    pub fn config(self) -> SweepConfig {
        let base = Params {
            w1: 1.0,
            w2: 2.0,
            lambda: 0.5,
            ga: 1.0,
            gb: 1.0,
            ..Params::default()
        };
        let (mode, params, var, range) = match self {
            // T = 8i/161 for i = 1..=161
            Preset::Fig3 => (
                KernelMode::Lindblad,
                base,
                SweepVar::T,
                Range {
                    start: 8.0 / 161.0,
                    stop: 8.0,
                    count: 161,
                },
            ),
            Preset::Fig4 => (
                KernelMode::Lindblad,
                Params { tb: 1.0, ..base },
                SweepVar::Ta,
                Range {
                    start: 0.5,
                    stop: 1.5,
                    count: 101,
                },
            ),
            // mean T on (ΔT, 8], excluding T = ΔT where T_B = 0
            Preset::Fig5 => (
                KernelMode::Redfield,
                Params {
                    delta_t: FIG5_DELTA_T,
                    ..base
                },
                SweepVar::T,
                Range {
                    start: FIG5_DELTA_T + 3.0 / 161.0,
                    stop: 8.0,
                    count: 161,
                },
            ),
        };
        SweepConfig {
            model: Model::Coupled,
            mode,
            params,
            var,
            range,
            out: None,
        }
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            _ => Err(CliError::Usage(format!("unknown preset {s:?}"))),
        }
    }
}
