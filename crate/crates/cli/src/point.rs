//! Evaluation of a single parameter point and its text report.

use std::fmt::Write as _;

use num_complex::Complex64;
use qheat_core::pipeline::solve;
use qheat_core::steady::PositivityReport;
use qheat_core::system::{make_coupled_qubits, make_single_qubit};
use qheat_core::thermo::SecondLaw;
use qheat_core::{BathSpec, KernelMode};

use crate::config::{Model, Params};
use crate::CliError;

/// Eigenvalues below `-POSITIVITY_TOL` count as a positivity violation.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Coherences reported for the coupled model: the only ones either mode can
/// populate, `(1,2)` and `(2,1)` in zero-based level indices.
pub const COUPLED_COHERENCES: [(usize, usize); 2] = [(1, 2), (2, 1)];

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub model: Model,
    pub mode: KernelMode,
    pub params: Params,
    pub levels: Vec<f64>,
    pub populations: Vec<f64>,
    pub coherences: Vec<((usize, usize), Complex64)>,
    pub q_a: f64,
    pub q_b: f64,
    pub conservation_residual: f64,
    pub steady_residual: f64,
    pub second_law: SecondLaw,
    pub positivity: PositivityReport,
}

impl PointResult {
    pub fn min_population(&self) -> f64 {
        self.positivity.min_population
    }

    pub fn is_positive(&self) -> bool {
        self.positivity.is_positive(POSITIVITY_TOL)
    }
}

pub fn evaluate(model: Model, mode: KernelMode, params: &Params) -> Result<PointResult, CliError> {
    if params.ga == 0.0 && params.gb == 0.0 {
        return Err(qheat_core::Error::NoDissipation.into());
    }
    let system = match model {
        Model::Single => make_single_qubit(params.w0)?,
        Model::Coupled => make_coupled_qubits(params.w1, params.w2, params.lambda)?.0,
    };
    let baths = [
        BathSpec::uniform("A", params.ta, params.ga)?,
        BathSpec::uniform("B", params.tb, params.gb)?,
    ];
    let sol = solve(&system, &baths, mode)?;
    let rho = &sol.steady.density;
    let coherences = match model {
        Model::Single => Vec::new(),
        Model::Coupled => COUPLED_COHERENCES
            .iter()
            .map(|&(p, q)| ((p, q), rho.get(p, q)))
            .collect(),
    };
    Ok(PointResult {
        model,
        mode,
        params: *params,
        levels: system.levels().to_vec(),
        populations: rho.populations(),
        coherences,
        q_a: sol.report.current("A").unwrap_or(f64::NAN),
        q_b: sol.report.current("B").unwrap_or(f64::NAN),
        conservation_residual: sol.report.conservation_residual,
        steady_residual: sol.steady.residual,
        second_law: sol.report.second_law,
        positivity: sol.positivity,
    })
}

/// Human-readable report for one point.
pub fn format_report(r: &PointResult) -> String {
    let mut s = String::new();
    let p = &r.params;
    let _ = writeln!(s, "model      {} ({})", r.model, r.mode);
    match r.model {
        Model::Single => {
            let _ = writeln!(
                s,
                "parameters w0={} ga={} gb={} ta={} tb={}",
                p.w0, p.ga, p.gb, p.ta, p.tb
            );
        }
        Model::Coupled => {
            let _ = writeln!(
                s,
                "parameters w1={} w2={} lambda={} ga={} gb={} ta={} tb={}",
                p.w1, p.w2, p.lambda, p.ga, p.gb, p.ta, p.tb
            );
        }
    }
    let _ = writeln!(s, "levels     {}", join(&r.levels));
    let _ = writeln!(s);
    let _ = writeln!(s, "populations");
    for (n, v) in r.populations.iter().enumerate() {
        let _ = writeln!(s, "  rho_{0}{0}    {1:.6}", n + 1, v);
    }
    if !r.coherences.is_empty() {
        let _ = writeln!(s, "coherences");
        for ((a, b), z) in &r.coherences {
            let _ = writeln!(s, "  rho_{}{}    {:.6e} {:+.6e}i", a + 1, b + 1, z.re, z.im);
        }
    }
    let _ = writeln!(s, "currents");
    let _ = writeln!(s, "  q_A       {:.6}", r.q_a);
    let _ = writeln!(s, "  q_B       {:.6}", r.q_b);
    let _ = writeln!(s, "laws");
    let _ = writeln!(s, "  residual  {:.3e}", r.conservation_residual);
    let _ = writeln!(s, "  second    {}", r.second_law);
    let _ = writeln!(s, "positivity");
    let _ = writeln!(s, "  min population  {:.6e}", r.positivity.min_population);
    let _ = writeln!(s, "  min eigenvalue  {:.6e}", r.positivity.min_eigenvalue);
    let _ = writeln!(s, "  solver residual {:.3e}", r.steady_residual);
    if !r.is_positive() {
        let _ = writeln!(s, "  WARNING: steady state is not a positive density matrix");
    }
    s
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ")
}
