//! One-call generic solve: kernels for every bath, combined generator,
//! steady state, per-reservoir currents and diagnostics.

use crate::bath::BathSpec;
use crate::error::Result;
use crate::kernel::{build_kernel, combine_kernels, KernelMode, SuperKernel};
use crate::steady::{
    assemble_liouvillian, positivity_report, solve_steady_state, Liouvillian, PositivityReport, SteadyState,
};
use crate::system::SystemSpec;
use crate::thermo::{law_checks, reservoir_current, CurrentReport};

#[derive(Debug, Clone)]
pub struct Solution {
    pub kernels: Vec<SuperKernel>,
    pub liouvillian: Liouvillian,
    pub steady: SteadyState,
    pub report: CurrentReport,
    pub positivity: PositivityReport,
}

/// Solves the two-reservoir problem for `system` coupled to `baths`.
pub fn solve(system: &SystemSpec, baths: &[BathSpec], mode: KernelMode) -> Result<Solution> {
    let kernels = baths
        .iter()
        .map(|b| build_kernel(system, b, mode))
        .collect::<Result<Vec<_>>>()?;
    let liouvillian = assemble_liouvillian(system, &combine_kernels(&kernels)?)?;
    let steady = solve_steady_state(&liouvillian)?;
    let inputs = baths
        .iter()
        .zip(&kernels)
        .map(|(b, k)| {
            Ok((
                b.label().to_string(),
                b.temperature(),
                reservoir_current(system, k, &steady.density)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = law_checks(&inputs)?;
    let positivity = positivity_report(&steady.density);
    Ok(Solution {
        kernels,
        liouvillian,
        steady,
        report,
        positivity,
    })
}
