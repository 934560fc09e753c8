//! Heat currents and the first/second-law checks.
//!
//! The current from reservoir `R` into the system is
//! `q^R = Σ_n E_n Σ_{qq'} K^R_{nn,qq'} ρ_{qq'}`, evaluated on the steady state
//! of the combined generator. `q^R > 0` means energy flows from `R` into the
//! system.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::kernel::SuperKernel;
use crate::steady::DensityMatrix;
use crate::system::SystemSpec;

/// Largest imaginary part tolerated in a current before it is flagged.
pub const CURRENT_IMAG_TOL: f64 = 1e-10;

/// Inflow from the hotter reservoir may be negative by at most this much
/// before the second-law check fails.
pub const SECOND_LAW_TOL: f64 = 1e-12;

pub fn reservoir_current(system: &SystemSpec, kernel: &SuperKernel, rho: &DensityMatrix) -> Result<f64> {
    let n = system.dim();
    if kernel.dim() != n || rho.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if kernel.dim() != n { kernel.dim() } else { rho.dim() },
        });
    }
    let mut q = Complex64::new(0.0, 0.0);
    for (m, &energy) in system.levels().iter().enumerate() {
        let mut flux = Complex64::new(0.0, 0.0);
        for p in 0..n {
            for pp in 0..n {
                flux += kernel.get(m, m, p, pp) * rho.get(p, pp);
            }
        }
        q += flux * energy;
    }
    if q.im.abs() > CURRENT_IMAG_TOL {
        return Err(Error::Consistency(format!(
            "heat current has imaginary part {:e}; the state is not a steady state of a Hermiticity-preserving generator",
            q.im
        )));
    }
    Ok(q.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondLaw {
    Pass,
    Fail,
    /// Both reservoirs at the same temperature.
    NotApplicable,
}

impl std::fmt::Display for SecondLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SecondLaw::Pass => "pass",
            SecondLaw::Fail => "fail",
            SecondLaw::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirCurrent {
    pub label: String,
    pub temperature: f64,
    pub current: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentReport {
    pub currents: Vec<ReservoirCurrent>,
    /// `|Σ_R q^R|`.
    pub conservation_residual: f64,
    pub second_law: SecondLaw,
    /// Current entering from the hotter reservoir, `q^A · sign(T_A − T_B)`.
    pub hot_inflow: f64,
}

impl CurrentReport {
    pub fn current(&self, label: &str) -> Option<f64> {
        self.currents.iter().find(|c| c.label == label).map(|c| c.current)
    }
}

/// First-law residual and Clausius sign check for a two-reservoir setup.
pub fn law_checks(inputs: &[(String, f64, f64)]) -> Result<CurrentReport> {
    let [(la, ta, qa), (lb, tb, qb)] = inputs else {
        return Err(domain(format!(
            "law checks need exactly two reservoirs, got {}",
            inputs.len()
        )));
    };
    let conservation_residual = (qa + qb).abs();
    let (second_law, hot_inflow) = if ta == tb {
        (SecondLaw::NotApplicable, 0.0)
    } else {
        let inflow = if ta > tb { *qa } else { *qb };
        let verdict = if inflow >= -SECOND_LAW_TOL {
            SecondLaw::Pass
        } else {
            SecondLaw::Fail
        };
        (verdict, inflow)
    };
    Ok(CurrentReport {
        currents: vec![
            ReservoirCurrent {
                label: la.clone(),
                temperature: *ta,
                current: *qa,
            },
            ReservoirCurrent {
                label: lb.clone(),
                temperature: *tb,
                current: *qb,
            },
        ],
        conservation_residual,
        second_law,
        hot_inflow,
    })
}
