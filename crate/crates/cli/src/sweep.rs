//! Parallel parameter sweeps with deterministic CSV output.

use rayon::prelude::*;

use crate::config::{Model, SweepConfig};
use crate::point::{evaluate, PointResult, COUPLED_COHERENCES};
use crate::CliError;

/// Rows whose first-law residual exceeds this carry the error marker.
pub const ROW_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<PointResult, String>,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        matches!(&self.outcome, Ok(r) if r.conservation_residual < ROW_RESIDUAL_TOL)
    }
}

/// Evaluates every grid point; failures become error rows and the sweep
/// continues. Rows come back in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    Ok(cfg
        .range
        .points()
        .into_par_iter()
        .map(|value| {
            let params = cfg.params.with(cfg.var, value);
            let outcome = evaluate(cfg.model, cfg.mode, &params).map_err(|e| e.to_string());
            SweepRow { value, outcome }
        })
        .collect())
}

fn dim(model: Model) -> usize {
    match model {
        Model::Single => 2,
        Model::Coupled => 4,
    }
}

pub fn column_names(cfg: &SweepConfig) -> Vec<String> {
    let mut cols = vec![cfg.var.name().to_string()];
    for n in 1..=dim(cfg.model) {
        cols.push(format!("rho_{n}{n}"));
    }
    if cfg.model == Model::Coupled {
        for (p, q) in COUPLED_COHERENCES {
            cols.push(format!("re_rho_{}{}", p + 1, q + 1));
            cols.push(format!("im_rho_{}{}", p + 1, q + 1));
        }
    }
    for c in [
        "q_A",
        "q_B",
        "conservation_residual",
        "min_population",
        "second_law",
        "status",
    ] {
        cols.push(c.to_string());
    }
    cols
}

/// Twelve significant digits.
fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn render_row(cfg: &SweepConfig, row: &SweepRow) -> String {
    let mut fields = vec![num(row.value)];
    match &row.outcome {
        Ok(r) => {
            fields.extend(r.populations.iter().map(|&v| num(v)));
            for (_, z) in &r.coherences {
                fields.push(num(z.re));
                fields.push(num(z.im));
            }
            fields.push(num(r.q_a));
            fields.push(num(r.q_b));
            fields.push(num(r.conservation_residual));
            fields.push(num(r.min_population()));
            fields.push(r.second_law.to_string());
            fields.push(if row.is_ok() {
                "ok".to_string()
            } else {
                "error[conservation residual above tolerance]".to_string()
            });
        }
        Err(msg) => {
            let blanks = column_names(cfg).len() - 3;
            fields.extend(std::iter::repeat_n("NaN".to_string(), blanks));
            fields.push("n/a".to_string());
            fields.push(format!("error[{}]", sanitize(msg)));
        }
    }
    fields.join(",")
}

fn sanitize(msg: &str) -> String {
    msg.chars()
        .map(|c| match c {
            ',' => ';',
            '\n' | '\r' | '"' => ' ',
            c => c,
        })
        .collect()
}

/// Full CSV document: optional `#` header, column names, one line per row.
pub fn render_csv(cfg: &SweepConfig, rows: &[SweepRow], header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str(&format!("# qheat {} {}\n", env!("CARGO_PKG_VERSION"), cfg.describe()));
    }
    out.push_str(&column_names(cfg).join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&render_row(cfg, row));
        out.push('\n');
    }
    out
}
