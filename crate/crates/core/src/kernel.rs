//! Dissipative superoperator kernels in the energy basis.
//!
//! For one reservoir coupled through `Σ_α S^α B^α` the Born–Markov kernel is
//!
//! ```text
//! K_{pp',qq'} = − δ_{p'q'} ½ Σ_{αβ,l} S^α_{pl} S^β_{lq} D^{αβ}(ω₁)
//!               − δ_{pq}  ½ Σ_{αβ,l} S^α_{q'l} S^β_{lp'} D^{αβ}(ω₂)
//!               + ½ Σ_{αβ} S^β_{pq} S^α_{q'p'} (D^{αβ}(E_{q'p'}) + D^{αβ}(E_{qp}))
//! ```
//!
//! In [`KernelMode::Lindblad`] each term is kept only when its secular
//! condition holds (`E_{pl} + E_{lq} = 0`, `E_{q'l} + E_{lp'} = 0`,
//! `E_{pq} + E_{q'p'} = 0` respectively). Under those conditions the two
//! transitions in each bilinear carry the same frequency and `D` is
//! evaluated there.
//!
//! In [`KernelMode::Redfield`] the bilinears of the first two terms connect
//! transitions of different frequency. `D` is then averaged over the two
//! transitions, `ω₁ → {E_{pl}, E_{ql}}` and `ω₂ → {E_{p'l}, E_{q'l}}`, in the
//! same way the third term averages `E_{q'p'}` and `E_{qp}`. This keeps the
//! kernel Hermiticity-preserving and trace-preserving, and it reduces exactly
//! to the secular kernel wherever the secular conditions hold.
//!
//! Kernels are stored densely as `N² × N²` matrices over the flattened index
//! `(p, p') ↦ p·N + p'`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bath::{bath_correlation, BathSpec, Channel};
use crate::error::{Error, Result};
use crate::system::SystemSpec;

/// Near-degeneracies between `ε_deg` and this multiple of it are rejected in
/// Lindblad mode.
const AMBIGUOUS_GAP_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    /// Born–Markov kernel without the secular approximation.
    Redfield,
    /// Secular (rotating-wave) kernel; generates a GKSL semigroup.
    Lindblad,
}

impl std::fmt::Display for KernelMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KernelMode::Redfield => "redfield",
            KernelMode::Lindblad => "lindblad",
        })
    }
}

impl std::str::FromStr for KernelMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "redfield" => Ok(KernelMode::Redfield),
            "lindblad" => Ok(KernelMode::Lindblad),
            other => Err(format!("unknown mode `{other}` (expected lindblad or redfield)")),
        }
    }
}

/// Flattened superoperator index of `(p, p')`.
#[inline]
pub fn super_index(dim: usize, p: usize, pp: usize) -> usize {
    p * dim + pp
}

/// Tolerance of the secular (Kronecker) test for a given spectrum.
pub fn secular_tolerance(levels: &[f64]) -> f64 {
    let scale = levels.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    (1e-9 * scale).max(1e-12)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperKernel {
    dim: usize,
    matrix: DMatrix<Complex64>,
    mode: KernelMode,
    reservoirs: Vec<String>,
}

impl SuperKernel {
    pub fn zeros(dim: usize, mode: KernelMode, reservoir: impl Into<String>) -> Self {
        Self {
            dim,
            matrix: DMatrix::zeros(dim * dim, dim * dim),
            mode,
            reservoirs: vec![reservoir.into()],
        }
    }

    /// Wraps an explicit `N² × N²` matrix.
    pub fn from_matrix(
        dim: usize,
        matrix: DMatrix<Complex64>,
        mode: KernelMode,
        reservoir: impl Into<String>,
    ) -> Result<Self> {
        if matrix.nrows() != dim * dim || matrix.ncols() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self {
            dim,
            matrix,
            mode,
            reservoirs: vec![reservoir.into()],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> KernelMode {
        self.mode
    }

    /// Reservoirs that contributed to this kernel.
    pub fn reservoirs(&self) -> &[String] {
        &self.reservoirs
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `K_{pp',qq'}`.
    pub fn get(&self, p: usize, pp: usize, q: usize, qq: usize) -> Complex64 {
        self.matrix[(super_index(self.dim, p, pp), super_index(self.dim, q, qq))]
    }

    pub fn set(&mut self, p: usize, pp: usize, q: usize, qq: usize, value: Complex64) {
        let (r, c) = (super_index(self.dim, p, pp), super_index(self.dim, q, qq));
        self.matrix[(r, c)] = value;
    }

    /// Real population block `P_{pq} = K_{pp,qq}`.
    pub fn population_block(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |p, q| self.get(p, p, q, q).re)
    }

    /// Largest deviation from `K_{p'p,q'q} = conj(K_{pp',qq'})`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for p in 0..n {
            for pp in 0..n {
                for q in 0..n {
                    for qq in 0..n {
                        let d = self.get(pp, p, qq, q) - self.get(p, pp, q, qq).conj();
                        worst = worst.max(d.norm());
                    }
                }
            }
        }
        worst
    }
}

/// Builds the kernel of the reservoir described by `bath` (matched by label).
pub fn build_kernel(system: &SystemSpec, bath: &BathSpec, mode: KernelMode) -> Result<SuperKernel> {
    let label = bath.label();
    let coupling = system.coupling(label)?;
    let n = system.dim();
    let eps = secular_tolerance(system.levels());
    if mode == KernelMode::Lindblad {
        check_secular_resolvable(system, label, eps)?;
    }
    let e = |a: usize, b: usize| system.transition(a, b);
    let secular = |x: f64| x.abs() <= eps;
    let keep = |x: f64| mode == KernelMode::Redfield || secular(x);

    // only the (1,2) and (2,1) correlations are nonzero
    const PAIRS: [(Channel, Channel); 2] = [
        (Channel::Raising, Channel::Lowering),
        (Channel::Lowering, Channel::Raising),
    ];
    let corr = |a: Channel, b: Channel, w: f64| bath_correlation(bath, a, b, w);

    let mut kernel = SuperKernel::zeros(n, mode, label);
    for p in 0..n {
        for pp in 0..n {
            for q in 0..n {
                for qq in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for &(a, b) in &PAIRS {
                        let sa = coupling.operator(a);
                        let sb = coupling.operator(b);
                        if pp == qq {
                            for l in 0..n {
                                let prod = sa[(p, l)] * sb[(l, q)];
                                if prod.norm() == 0.0 || !keep(e(p, l) + e(l, q)) {
                                    continue;
                                }
                                let d = corr(a, b, e(p, l))? + corr(a, b, e(q, l))?;
                                acc -= prod * (0.25 * d);
                            }
                        }
                        if p == q {
                            for l in 0..n {
                                let prod = sa[(qq, l)] * sb[(l, pp)];
                                if prod.norm() == 0.0 || !keep(e(qq, l) + e(l, pp)) {
                                    continue;
                                }
                                let d = corr(a, b, e(pp, l))? + corr(a, b, e(qq, l))?;
                                acc -= prod * (0.25 * d);
                            }
                        }
                        let prod = sb[(p, q)] * sa[(qq, pp)];
                        if prod.norm() != 0.0 && keep(e(p, q) + e(qq, pp)) {
                            let d = corr(a, b, e(qq, pp))? + corr(a, b, e(q, p))?;
                            acc += prod * (0.5 * d);
                        }
                    }
                    kernel.set(p, pp, q, qq, acc);
                }
            }
        }
    }
    Ok(kernel)
}

/// Rejects spectra where two transition frequencies of one reservoir differ by
/// more than the secular tolerance but by too little to be called distinct.
fn check_secular_resolvable(system: &SystemSpec, label: &str, eps: f64) -> Result<()> {
    let freqs = system.transition_frequencies(label)?;
    for (i, &w1) in freqs.iter().enumerate() {
        for &w2 in &freqs[i + 1..] {
            let gap = (w1 - w2).abs();
            if gap > eps && gap < AMBIGUOUS_GAP_FACTOR * eps {
                return Err(Error::NearDegenerate {
                    reservoir: label.to_string(),
                    first: w1,
                    second: w2,
                });
            }
        }
    }
    Ok(())
}

/// `max_{q,q'} |Σ_p K_{pp,qq'}|`; vanishes for a trace-preserving kernel.
pub fn check_trace_condition(kernel: &SuperKernel) -> f64 {
    let n = kernel.dim();
    let mut worst = 0.0f64;
    for q in 0..n {
        for qq in 0..n {
            let s: Complex64 = (0..n).map(|p| kernel.get(p, p, q, qq)).sum();
            worst = worst.max(s.norm());
        }
    }
    worst
}

/// Entrywise sum of kernels sharing one dimension and one mode.
pub fn combine_kernels(kernels: &[SuperKernel]) -> Result<SuperKernel> {
    combine(kernels, false)
}

/// Like [`combine_kernels`] but accepts mixed modes, logging a warning.
///
/// A mixed sum is labelled [`KernelMode::Redfield`] since it is no longer
/// guaranteed to be of GKSL form.
pub fn combine_kernels_mixed(kernels: &[SuperKernel]) -> Result<SuperKernel> {
    combine(kernels, true)
}

fn combine(kernels: &[SuperKernel], allow_mixed: bool) -> Result<SuperKernel> {
    let first = kernels
        .first()
        .ok_or_else(|| Error::Domain("no kernels to combine".into()))?;
    let mut out = first.clone();
    for k in &kernels[1..] {
        if k.dim != out.dim {
            return Err(Error::DimensionMismatch {
                expected: out.dim,
                found: k.dim,
            });
        }
        if k.mode != out.mode {
            if !allow_mixed {
                return Err(Error::ModeMismatch);
            }
            log::warn!(
                "combining {} kernel of {:?} with {} kernel",
                k.mode,
                k.reservoirs,
                out.mode
            );
            out.mode = KernelMode::Redfield;
        }
        out.matrix += &k.matrix;
        out.reservoirs.extend(k.reservoirs.iter().cloned());
    }
    Ok(out)
}
