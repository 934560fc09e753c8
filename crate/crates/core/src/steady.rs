//! Generator assembly, steady-state solve and time evolution.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::kernel::{super_index, KernelMode, SuperKernel};
use crate::system::SystemSpec;

/// Singular values below this fraction of the largest count towards the nullspace.
pub const NULLSPACE_RTOL: f64 = 1e-10;

/// Tolerance for the Hermiticity and unit-trace invariants of a density matrix.
pub const DENSITY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Hermitian, unit-trace density matrix in the energy basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let rho = Self { matrix };
        let asym = rho.hermiticity_residual();
        if asym > DENSITY_TOL {
            return Err(domain(format!("density matrix is not Hermitian (residual {asym:e})")));
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > DENSITY_TOL {
            return Err(domain(format!("density matrix trace is {tr}, not 1")));
        }
        Ok(rho)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0)),
        }
    }

    /// Diagonal state with the given populations (renormalized).
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let total: f64 = populations.iter().sum();
        if !(total > 0.0) {
            return Err(domain("populations must have a positive sum"));
        }
        let diag = DVector::from_iterator(
            populations.len(),
            populations.iter().map(|p| Complex64::new(p / total, 0.0)),
        );
        Ok(Self {
            matrix: DMatrix::from_diagonal(&diag),
        })
    }

    /// Gibbs state `exp(−E_n/T)/Z`; the ground state at `T = 0`.
    pub fn gibbs(levels: &[f64], temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0) {
            return Err(domain(format!("temperature must be nonnegative, got {temperature}")));
        }
        let e0 = levels.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = if temperature == 0.0 {
            levels.iter().map(|&e| if e == e0 { 1.0 } else { 0.0 }).collect()
        } else {
            levels.iter().map(|&e| (-(e - e0) / temperature).exp()).collect()
        };
        Self::diagonal(&weights)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn get(&self, p: usize, q: usize) -> Complex64 {
        self.matrix[(p, q)]
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.matrix[(n, n)].re).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Largest off-diagonal magnitude.
    pub fn max_coherence(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    worst = worst.max(self.matrix[(p, q)].norm());
                }
            }
        }
        worst
    }

    /// Row-major flattening, matching [`super_index`].
    pub fn to_vector(&self) -> DVector<Complex64> {
        let n = self.dim();
        DVector::from_fn(n * n, |i, _| self.matrix[(i / n, i % n)])
    }

    fn from_vector_raw(dim: usize, v: &[Complex64]) -> DMatrix<Complex64> {
        DMatrix::from_fn(dim, dim, |p, q| v[super_index(dim, p, q)])
    }
}

/// Full generator `M = −iE_{pp'} δ + K` over the flattened `(p, p')` index.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    dim: usize,
    matrix: DMatrix<Complex64>,
    mode: KernelMode,
    reservoirs: Vec<String>,
}

impl Liouvillian {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn mode(&self) -> KernelMode {
        self.mode
    }

    pub fn reservoirs(&self) -> &[String] {
        &self.reservoirs
    }

    pub fn get(&self, p: usize, pp: usize, q: usize, qq: usize) -> Complex64 {
        self.matrix[(super_index(self.dim, p, pp), super_index(self.dim, q, qq))]
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `‖M·vec(ρ)‖_∞`.
    pub fn residual(&self, rho: &DensityMatrix) -> f64 {
        (&self.matrix * rho.to_vector())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Restriction to the listed `(p, p')` pairs.
    pub fn restrict(&self, pairs: &[(usize, usize)]) -> DMatrix<Complex64> {
        DMatrix::from_fn(pairs.len(), pairs.len(), |i, j| {
            let (p, pp) = pairs[i];
            let (q, qq) = pairs[j];
            self.get(p, pp, q, qq)
        })
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .matrix
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Number of singular values below `NULLSPACE_RTOL · σ_max`.
    pub fn nullity(&self) -> usize {
        let sv = self.singular_values();
        let cutoff = NULLSPACE_RTOL * sv.first().copied().unwrap_or(0.0);
        sv.iter().filter(|&&s| s <= cutoff).count()
    }
}

pub fn assemble_liouvillian(system: &SystemSpec, kernel: &SuperKernel) -> Result<Liouvillian> {
    let n = system.dim();
    if kernel.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: kernel.dim(),
        });
    }
    let mut matrix = kernel.matrix().clone();
    for p in 0..n {
        for pp in 0..n {
            let i = super_index(n, p, pp);
            matrix[(i, i)] -= Complex64::new(0.0, system.transition(p, pp));
        }
    }
    Ok(Liouvillian {
        dim: n,
        matrix,
        mode: kernel.mode(),
        reservoirs: kernel.reservoirs().to_vec(),
    })
}

/// Steady state together with its solve diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub density: DensityMatrix,
    /// `‖M·vec(ρ)‖_∞` of the returned (symmetrized) state.
    pub residual: f64,
    /// `‖ρ − ρ†‖_∞` of the raw solution, before symmetrization.
    pub raw_asymmetry: f64,
}

/// Solves `Mρ = 0` with `Tr ρ = 1`.
///
/// The ground-population row of `M` is replaced by the trace functional and
/// the resulting system solved by LU; uniqueness is checked first from the
/// singular values of `M`.
pub fn solve_steady_state(liouvillian: &Liouvillian) -> Result<SteadyState> {
    check_unique(liouvillian)?;
    let n = liouvillian.dim;
    let size = n * n;
    let pivot_row = super_index(n, 0, 0);
    let mut a = liouvillian.matrix.clone();
    for j in 0..size {
        a[(pivot_row, j)] = ZERO;
    }
    for k in 0..n {
        a[(pivot_row, super_index(n, k, k))] = ONE;
    }
    let mut rhs = DVector::from_element(size, ZERO);
    rhs[pivot_row] = ONE;
    let x = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numeric("trace-augmented generator is singular".into()))?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("steady-state solve produced non-finite values".into()));
    }
    finish(liouvillian, DensityMatrix::from_vector_raw(n, x.as_slice()))
}

/// Verification path: the right singular vector of the smallest singular
/// value, rescaled to unit trace.
pub fn steady_state_svd(liouvillian: &Liouvillian) -> Result<SteadyState> {
    check_unique(liouvillian)?;
    let n = liouvillian.dim;
    let svd = liouvillian.matrix.clone().svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Numeric("SVD did not return right singular vectors".into()))?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Numeric("empty generator".into()))?;
    let v: Vec<Complex64> = v_t.row(imin).iter().map(|z| z.conj()).collect();
    finish(liouvillian, DensityMatrix::from_vector_raw(n, &v))
}

fn check_unique(liouvillian: &Liouvillian) -> Result<()> {
    let sv = liouvillian.singular_values();
    let cutoff = NULLSPACE_RTOL * sv.first().copied().unwrap_or(0.0);
    let nullity = sv.iter().filter(|&&s| s <= cutoff).count();
    if nullity != 1 {
        let smallest = sv.iter().rev().take(nullity.max(2)).copied().collect();
        return Err(Error::DegenerateSteadyState { nullity, smallest });
    }
    Ok(())
}

fn finish(liouvillian: &Liouvillian, raw: DMatrix<Complex64>) -> Result<SteadyState> {
    let trace = raw.trace();
    if trace.norm() == 0.0 || !trace.re.is_finite() {
        return Err(Error::Numeric("steady-state candidate has vanishing trace".into()));
    }
    let raw = raw / trace;
    let raw_asymmetry = (&raw - raw.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let sym = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    let tr = sym.trace().re;
    let density = DensityMatrix {
        matrix: sym / Complex64::new(tr, 0.0),
    };
    let residual = liouvillian.residual(&density);
    Ok(SteadyState {
        density,
        residual,
        raw_asymmetry,
    })
}

/// Solves only the population equations `Σ_q K_{pp,qq} ρ_qq = 0`, ignoring
/// any coupling to coherences.
pub fn solve_populations(kernel: &SuperKernel) -> Result<Vec<f64>> {
    let n = kernel.dim();
    let mut a = kernel.population_block();
    for j in 0..n {
        a[(0, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[0] = 1.0;
    let x = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numeric("population block is singular".into()))?;
    Ok(x.iter().copied().collect())
}

/// Default integration step `0.01/‖M‖_∞`.
pub fn default_time_step(liouvillian: &Liouvillian) -> f64 {
    0.01 / liouvillian.norm_inf().max(f64::MIN_POSITIVE)
}

/// Propagates `dρ/dt = Mρ` with fixed-step classical Runge–Kutta.
///
/// The final step is shortened so the run ends exactly at `t_final`.
pub fn evolve(liouvillian: &Liouvillian, rho0: &DensityMatrix, t_final: f64, dt: f64) -> Result<DensityMatrix> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(domain(format!("time step must be positive, got {dt}")));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(domain(format!("final time must be nonnegative, got {t_final}")));
    }
    let n = liouvillian.dim;
    if rho0.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho0.dim(),
        });
    }
    if t_final == 0.0 {
        return Ok(rho0.clone());
    }
    let size = n * n;
    // row-major copy for a tight matvec
    let m: Vec<Complex64> = (0..size)
        .flat_map(|i| (0..size).map(move |j| (i, j)))
        .map(|(i, j)| liouvillian.matrix[(i, j)])
        .collect();
    let apply = |x: &[Complex64], out: &mut [Complex64]| {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &m[i * size..(i + 1) * size];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    };
    let trace = |x: &[Complex64]| -> Complex64 { (0..n).map(|k| x[super_index(n, k, k)]).sum() };

    let mut x: Vec<Complex64> = rho0.to_vector().iter().copied().collect();
    let start_norm = x.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let start_trace = trace(&x);
    let steps = (t_final / dt).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![ZERO; size],
        vec![ZERO; size],
        vec![ZERO; size],
        vec![ZERO; size],
        vec![ZERO; size],
    );
    let half = Complex64::new(0.5 * h, 0.0);
    let full = Complex64::new(h, 0.0);
    let sixth = Complex64::new(h / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for step in 0..steps {
        apply(&x, &mut k1);
        for i in 0..size {
            tmp[i] = x[i] + half * k1[i];
        }
        apply(&tmp, &mut k2);
        for i in 0..size {
            tmp[i] = x[i] + half * k2[i];
        }
        apply(&tmp, &mut k3);
        for i in 0..size {
            tmp[i] = x[i] + full * k3[i];
        }
        apply(&tmp, &mut k4);
        for i in 0..size {
            x[i] += sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
        if step % 256 == 0 || step + 1 == steps {
            let finite = x.iter().all(|z| z.re.is_finite() && z.im.is_finite());
            let norm = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if !finite || norm > 1e6 * start_norm {
                return Err(Error::Integration(format!(
                    "state norm blew up to {norm:e} at step {step}; reduce the time step (dt = {h:e})"
                )));
            }
        }
    }
    let drift = (trace(&x) - start_trace).norm();
    if !(drift <= 1e-8) {
        return Err(Error::Integration(format!(
            "trace drifted by {drift:e}; reduce the time step (dt = {h:e})"
        )));
    }
    Ok(DensityMatrix {
        matrix: DensityMatrix::from_vector_raw(n, &x),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    pub min_population: f64,
    /// Smallest eigenvalue of the Hermitian part `(ρ + ρ†)/2`.
    pub min_eigenvalue: f64,
    pub hermiticity_residual: f64,
}

impl PositivityReport {
    /// True when neither a population nor an eigenvalue is below `-tol`.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.min_population >= -tol && self.min_eigenvalue >= -tol
    }
}

pub fn positivity_report(rho: &DensityMatrix) -> PositivityReport {
    let min_population = rho.populations().into_iter().fold(f64::INFINITY, f64::min);
    let herm = (&rho.matrix + rho.matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let min_eigenvalue = herm
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    PositivityReport {
        min_population,
        min_eigenvalue,
        hermiticity_residual: rho.hermiticity_residual(),
    }
}
