//! Closed-form steady states and currents for the single-qubit and
//! coupled-qubit models.
//!
//! These are written term by term as the analytic results read, without
//! algebraic simplification, so that they serve as independent oracles for
//! the generic kernel → steady state → current pipeline.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bath::{planck_occupation, BathSpec};
use crate::error::{domain, Error, Result};
use crate::steady::DensityMatrix;
use crate::system::CoupledDiag;

fn check_rate(name: &str, g: f64) -> Result<()> {
    if g.is_finite() && g >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be nonnegative, got {g}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitClosed {
    pub rho_plus: f64,
    pub rho_minus: f64,
    /// `ρ_{++}/ρ_{−−}`.
    pub ratio: f64,
    pub q_a: f64,
    pub q_b: f64,
}

pub fn single_qubit_closed(omega0: f64, g_a: f64, g_b: f64, t_a: f64, t_b: f64) -> Result<SingleQubitClosed> {
    check_rate("g_A", g_a)?;
    check_rate("g_B", g_b)?;
    if g_a == 0.0 && g_b == 0.0 {
        return Err(Error::NoDissipation);
    }
    let n_a = planck_occupation(omega0, t_a)?;
    let n_b = planck_occupation(omega0, t_b)?;
    let denom = g_a * (1.0 + 2.0 * n_a) + g_b * (1.0 + 2.0 * n_b);
    let rho_plus = (g_a * n_a + g_b * n_b) / denom;
    let rho_minus = (g_a * (1.0 + n_a) + g_b * (1.0 + n_b)) / denom;
    let ratio = (g_a * n_a + g_b * n_b) / (g_a * (1.0 + n_a) + g_b * (1.0 + n_b));
    let prefactor = g_a * g_b * omega0 / denom;
    Ok(SingleQubitClosed {
        rho_plus,
        rho_minus,
        ratio,
        q_a: prefactor * (n_a - n_b),
        q_b: prefactor * (n_b - n_a),
    })
}

/// Heat currents split by the `ω₊` and `ω₋` transition groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCurrents {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
}

impl BranchCurrents {
    pub fn q_a(&self) -> f64 {
        self.a_plus + self.a_minus
    }

    pub fn q_b(&self) -> f64 {
        self.b_plus + self.b_minus
    }
}

/// Spectral weights and occupations of both reservoirs at `ω±`.
#[derive(Debug, Clone, Copy)]
struct BathAtTransitions {
    g_a: [f64; 2],
    g_b: [f64; 2],
    n_a: [f64; 2],
    n_b: [f64; 2],
}

const PLUS: usize = 0;
const MINUS: usize = 1;

impl BathAtTransitions {
    fn new(d: &CoupledDiag, bath_a: &BathSpec, bath_b: &BathSpec) -> Result<Self> {
        let w = [d.omega_plus, d.omega_minus];
        Ok(Self {
            g_a: [bath_a.g(w[0])?, bath_a.g(w[1])?],
            g_b: [bath_b.g(w[0])?, bath_b.g(w[1])?],
            n_a: [bath_a.occupation(w[0])?, bath_a.occupation(w[1])?],
            n_b: [bath_b.occupation(w[0])?, bath_b.occupation(w[1])?],
        })
    }
}

/// Population transfer rates `a_n` (reservoir A) and `b_n` (reservoir B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionRates {
    pub a: [f64; 4],
    pub b: [f64; 4],
}

impl TransitionRates {
    fn new(d: &CoupledDiag, x: &BathAtTransitions) -> Self {
        let (a2, b2) = (d.alpha * d.alpha, d.beta * d.beta);
        let a = [
            a2 * x.g_a[PLUS] * (1.0 + x.n_a[PLUS]),
            b2 * x.g_a[MINUS] * (1.0 + x.n_a[MINUS]),
            a2 * x.g_a[PLUS] * x.n_a[PLUS],
            b2 * x.g_a[MINUS] * x.n_a[MINUS],
        ];
        let b = [
            b2 * x.g_b[PLUS] * (1.0 + x.n_b[PLUS]),
            a2 * x.g_b[MINUS] * (1.0 + x.n_b[MINUS]),
            b2 * x.g_b[PLUS] * x.n_b[PLUS],
            a2 * x.g_b[MINUS] * x.n_b[MINUS],
        ];
        Self { a, b }
    }

    /// `s_n = a_n + b_n`.
    pub fn s(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.a[i] + self.b[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledLindbladClosed {
    pub diag: CoupledDiag,
    pub rates: TransitionRates,
    pub populations: [f64; 4],
    pub currents: BranchCurrents,
}

impl CoupledLindbladClosed {
    /// Currents in the rate form, `(a₃b₁ − a₁b₃)/(s₁+s₃)·ω₊ + (a₄b₂ − a₂b₄)/(s₂+s₄)·ω₋`.
    pub fn currents_from_rates(&self) -> (f64, f64) {
        let (a, b) = (self.rates.a, self.rates.b);
        let s = self.rates.s();
        let (wp, wm) = (self.diag.omega_plus, self.diag.omega_minus);
        let q_a = (a[2] * b[0] - a[0] * b[2]) / (s[0] + s[2]) * wp + (a[3] * b[1] - a[1] * b[3]) / (s[1] + s[3]) * wm;
        let q_b = (a[0] * b[2] - a[2] * b[0]) / (s[0] + s[2]) * wp + (a[1] * b[3] - a[3] * b[1]) / (s[1] + s[3]) * wm;
        (q_a, q_b)
    }
}

pub fn coupled_lindblad_closed(
    omega1: f64,
    omega2: f64,
    lambda: f64,
    bath_a: &BathSpec,
    bath_b: &BathSpec,
) -> Result<CoupledLindbladClosed> {
    let d = CoupledDiag::new(omega1, omega2, lambda)?;
    let x = BathAtTransitions::new(&d, bath_a, bath_b)?;
    let rates = TransitionRates::new(&d, &x);
    let [s1, s2, s3, s4] = rates.s();
    let norm = (s1 + s3) * (s2 + s4);
    if !(norm > 0.0) {
        return Err(Error::NoDissipation);
    }
    let populations = [s1 * s2 / norm, s1 * s4 / norm, s3 * s2 / norm, s3 * s4 / norm];

    let ab2 = (d.alpha * d.beta).powi(2);
    let (wp, wm) = (d.omega_plus, d.omega_minus);
    let den_plus = d.alpha.powi(2) * x.g_a[PLUS] * (1.0 + 2.0 * x.n_a[PLUS])
        + d.beta.powi(2) * x.g_b[PLUS] * (1.0 + 2.0 * x.n_b[PLUS]);
    let den_minus = d.beta.powi(2) * x.g_a[MINUS] * (1.0 + 2.0 * x.n_a[MINUS])
        + d.alpha.powi(2) * x.g_b[MINUS] * (1.0 + 2.0 * x.n_b[MINUS]);
    let pre_plus = ab2 * x.g_a[PLUS] * x.g_b[PLUS] * wp;
    let pre_minus = ab2 * x.g_a[MINUS] * x.g_b[MINUS] * wm;
    // a branch with no weight on either side carries no current
    let branch = |pre: f64, den: f64, diff: f64| if pre == 0.0 { 0.0 } else { pre / den * diff };
    let currents = BranchCurrents {
        a_plus: branch(pre_plus, den_plus, x.n_a[PLUS] - x.n_b[PLUS]),
        a_minus: branch(pre_minus, den_minus, x.n_a[MINUS] - x.n_b[MINUS]),
        b_plus: branch(pre_plus, den_plus, x.n_b[PLUS] - x.n_a[PLUS]),
        b_minus: branch(pre_minus, den_minus, x.n_b[MINUS] - x.n_a[MINUS]),
    };
    Ok(CoupledLindbladClosed {
        diag: d,
        rates,
        populations,
        currents,
    })
}

/// Intermediate parameters of the Redfield closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    pub a: [f64; 4],
    pub b: [f64; 4],
    pub s: [f64; 4],
    pub c: [f64; 4],
    pub d: [f64; 4],
    /// Population–coherence coupling, `(αβg/2)[n_A(ω₊) − n_B(ω₊) + n_A(ω₋) − n_B(ω₋)]`.
    pub k: f64,
    /// `E_{23} = E_2 − E_3`.
    pub e: f64,
    /// `s₁ + s₂ + s₃ + s₄`.
    pub s_total: f64,
    /// Normalization `N`.
    pub norm: f64,
}

impl RateParams {
    /// `c₁₂ − d₁₂`.
    pub fn k_from_12(&self) -> f64 {
        (self.c[0] + self.c[1]) - (self.d[0] + self.d[1])
    }

    /// `c₃₄ − d₃₄`.
    pub fn k_from_34(&self) -> f64 {
        (self.c[2] + self.c[3]) - (self.d[2] + self.d[3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledRedfieldClosed {
    pub diag: CoupledDiag,
    pub params: RateParams,
    pub populations: [f64; 4],
    pub rho_23: Complex64,
    pub rho_32: Complex64,
}

/// Redfield steady state of the coupled qubits for a uniform spectral density.
pub fn coupled_redfield_closed(
    omega1: f64,
    omega2: f64,
    lambda: f64,
    bath_a: &BathSpec,
    bath_b: &BathSpec,
) -> Result<CoupledRedfieldClosed> {
    let diag = CoupledDiag::new(omega1, omega2, lambda)?;
    let x = BathAtTransitions::new(&diag, bath_a, bath_b)?;
    let g = x.g_a[PLUS];
    let all = [x.g_a[PLUS], x.g_a[MINUS], x.g_b[PLUS], x.g_b[MINUS]];
    if all.iter().any(|&v| (v - g).abs() > 1e-15 * g.abs().max(1.0)) {
        return Err(Error::NonUniformSpectralDensity(format!(
            "g_A(ω₊), g_A(ω₋), g_B(ω₊), g_B(ω₋) = {all:?}"
        )));
    }
    if g == 0.0 {
        return Err(Error::NoDissipation);
    }
    let rates = TransitionRates::new(&diag, &x);
    let s = rates.s();
    let [s1, s2, s3, s4] = s;
    let half = 0.5 * diag.alpha * diag.beta * g;
    let c = [
        half * (1.0 + x.n_a[PLUS]),
        half * (1.0 + x.n_a[MINUS]),
        half * x.n_a[PLUS],
        half * x.n_a[MINUS],
    ];
    let d = [
        half * (1.0 + x.n_b[PLUS]),
        half * (1.0 + x.n_b[MINUS]),
        half * x.n_b[PLUS],
        half * x.n_b[MINUS],
    ];
    let k = half * (x.n_a[PLUS] - x.n_b[PLUS] + x.n_a[MINUS] - x.n_b[MINUS]);
    let e = diag.energies[1] - diag.energies[2];
    let s_total = s1 + s2 + s3 + s4;
    let norm = (s_total * s_total + 4.0 * e * e) * (s1 + s3) * (s2 + s4) - 4.0 * (k * s_total).powi(2);

    let lead = (s_total * s_total + 4.0 * e * e) / norm;
    let corr = 4.0 * k * k / norm;
    let populations = [
        lead * s1 * s2 - corr * (s1 + s4) * (s2 + s3),
        lead * s1 * s4 - corr * (s1 + s4) * (s1 + s4),
        lead * s2 * s3 - corr * (s2 + s3) * (s2 + s3),
        lead * s3 * s4 - corr * (s1 + s4) * (s2 + s3),
    ];
    let coh = -2.0 * k / norm * (s1 * s2 - s3 * s4);
    let rho_23 = Complex64::new(coh * s_total, -coh * 2.0 * e);
    let rho_32 = Complex64::new(coh * s_total, coh * 2.0 * e);
    Ok(CoupledRedfieldClosed {
        diag,
        params: RateParams {
            a: rates.a,
            b: rates.b,
            s,
            c,
            d,
            k,
            e,
            s_total,
            norm,
        },
        populations,
        rho_23,
        rho_32,
    })
}

/// Asymptotic regime of the limiting current formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `T_A, T_B ≫ ω`
    High,
    /// `T_A, T_B ≪ ω`
    Low,
}

/// Limiting single-qubit currents `(q^A, q^B)`.
pub fn single_qubit_limit(regime: Regime, omega0: f64, g_a: f64, g_b: f64, t_a: f64, t_b: f64) -> Result<(f64, f64)> {
    check_rate("g_A", g_a)?;
    check_rate("g_B", g_b)?;
    if !(omega0 > 0.0) {
        return Err(domain(format!("qubit splitting must be positive, got {omega0}")));
    }
    Ok(match regime {
        Regime::High => {
            let pre = 0.5 * g_a * g_b * omega0 / (g_a * t_a + g_b * t_b);
            (pre * (t_a - t_b), pre * (t_b - t_a))
        }
        Regime::Low => {
            let pre = g_a * g_b * omega0 / (g_a + g_b);
            let (ea, eb) = ((-omega0 / t_a).exp(), (-omega0 / t_b).exp());
            (pre * (ea - eb), pre * (eb - ea))
        }
    })
}

/// Limiting coupled-qubit branch currents.
pub fn coupled_limit(
    regime: Regime,
    omega1: f64,
    omega2: f64,
    lambda: f64,
    bath_a: &BathSpec,
    bath_b: &BathSpec,
) -> Result<BranchCurrents> {
    let d = CoupledDiag::new(omega1, omega2, lambda)?;
    let (ta, tb) = (bath_a.temperature(), bath_b.temperature());
    let (wp, wm) = (d.omega_plus, d.omega_minus);
    let (ga_p, ga_m) = (bath_a.g(wp)?, bath_a.g(wm)?);
    let (gb_p, gb_m) = (bath_b.g(wp)?, bath_b.g(wm)?);
    let (a2, b2) = (d.alpha * d.alpha, d.beta * d.beta);
    let ab2 = (d.alpha * d.beta).powi(2);
    let pre_p = ab2 * ga_p * gb_p * wp;
    let pre_m = ab2 * ga_m * gb_m * wm;
    Ok(match regime {
        Regime::High => {
            let p = 0.5 * pre_p / (a2 * ga_p * ta + b2 * gb_p * tb);
            let m = 0.5 * pre_m / (b2 * ga_m * ta + a2 * gb_m * tb);
            BranchCurrents {
                a_plus: p * (ta - tb),
                a_minus: m * (ta - tb),
                b_plus: p * (tb - ta),
                b_minus: m * (tb - ta),
            }
        }
        Regime::Low => {
            let p = pre_p / (a2 * ga_p + b2 * gb_p);
            let m = pre_m / (b2 * ga_m + a2 * gb_m);
            let boltz = |w: f64, t: f64| (-w / t).exp();
            BranchCurrents {
                a_plus: p * (boltz(wp, ta) - boltz(wp, tb)),
                a_minus: m * (boltz(wm, ta) - boltz(wm, tb)),
                b_plus: p * (boltz(wp, tb) - boltz(wp, ta)),
                b_minus: m * (boltz(wm, tb) - boltz(wm, ta)),
            }
        }
    })
}

/// Product `ρ^A ⊗ ρ^B` of the two single-qubit equilibrium states, expressed
/// in the energy basis of the uncoupled (`λ = 0`) Hamiltonian.
pub fn decoupled_product_state(
    omega1: f64,
    omega2: f64,
    bath_a: &BathSpec,
    bath_b: &BathSpec,
) -> Result<DensityMatrix> {
    let d = CoupledDiag::new(omega1, omega2, 0.0)?;
    // (ρ_−, ρ_+) for one qubit
    let qubit = |bath: &BathSpec, w: f64| -> Result<[f64; 2]> {
        let g = bath.g(w)?;
        let n = bath.occupation(w)?;
        let den = g * (1.0 + 2.0 * n);
        if !(den > 0.0) {
            return Err(Error::NoDissipation);
        }
        Ok([g * (1.0 + n) / den, g * n / den])
    };
    let ra = qubit(bath_a, omega1)?;
    let rb = qubit(bath_b, omega2)?;
    // product basis |−−⟩, |−+⟩, |+−⟩, |++⟩ with qubit 1 first
    let product = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[
        ra[0] * rb[0],
        ra[0] * rb[1],
        ra[1] * rb[0],
        ra[1] * rb[1],
    ]));
    let u = d.eigenvectors();
    let energy_basis = u.transpose() * product * u;
    DensityMatrix::new(energy_basis.map(|v| Complex64::new(v, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn baths(g: f64, ta: f64, tb: f64) -> (BathSpec, BathSpec) {
        (
            BathSpec::uniform("A", ta, g).unwrap(),
            BathSpec::uniform("B", tb, g).unwrap(),
        )
    }

    #[test]
    fn single_reservoir_gives_boltzmann_ratio() {
        let r = single_qubit_closed(1.0, 1.0, 0.0, 1.0, 3.0).unwrap();
        assert_relative_eq!(r.ratio, (-1.0f64).exp(), max_relative = 1e-14);
        assert!((r.ratio - 0.367879).abs() < 1e-6);
        assert!((r.rho_plus - 0.268941).abs() < 1e-6);
        assert_eq!(r.q_a, 0.0);
    }

    #[test]
    fn single_qubit_reference_currents() {
        let r = single_qubit_closed(1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert!((r.q_a - 0.153598).abs() < 1e-6);
        assert_eq!(r.q_b, -r.q_a);
        assert_relative_eq!(r.rho_plus, 0.3399216660850968, max_relative = 1e-13);
        assert_relative_eq!(r.rho_plus + r.rho_minus, 1.0, max_relative = 1e-15);
        let eq = single_qubit_closed(1.0, 1.0, 1.0, 1.5, 1.5).unwrap();
        assert_eq!(eq.q_a, 0.0);
    }

    #[test]
    fn single_qubit_needs_dissipation() {
        assert_eq!(single_qubit_closed(1.0, 0.0, 0.0, 1.0, 1.0), Err(Error::NoDissipation));
        assert!(single_qubit_closed(1.0, -1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn identical_reservoirs_ratio() {
        let r = single_qubit_closed(1.0, 0.7, 0.7, 2.0, 0.5).unwrap();
        let (na, nb) = (
            planck_occupation(1.0, 2.0).unwrap(),
            planck_occupation(1.0, 0.5).unwrap(),
        );
        assert_relative_eq!(r.ratio, (na + nb) / (2.0 + na + nb), max_relative = 1e-14);
    }

    #[test]
    fn coupled_lindblad_reference_currents() {
        let (a, b) = baths(1.0, 1.5, 1.0);
        let r = coupled_lindblad_closed(1.0, 2.0, 0.5, &a, &b).unwrap();
        assert_relative_eq!(r.currents.a_plus, 0.03706204099827313, max_relative = 1e-12);
        assert_relative_eq!(r.currents.a_minus, 0.01634602816592994, max_relative = 1e-12);
        assert!((r.currents.q_a() - 0.05342).abs() < 5e-5);
        assert_relative_eq!(r.currents.q_a(), -r.currents.q_b(), max_relative = 1e-15);
        let (qa, qb) = r.currents_from_rates();
        assert_relative_eq!(qa, r.currents.q_a(), max_relative = 1e-12);
        assert_relative_eq!(qb, r.currents.q_b(), max_relative = 1e-12);
        assert_relative_eq!(r.populations.iter().sum::<f64>(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn coupled_lindblad_temperature_limits() {
        let (a, b) = baths(1.0, 1e5, 1e5);
        for p in coupled_lindblad_closed(1.0, 2.0, 0.5, &a, &b).unwrap().populations {
            assert!((p - 0.25).abs() < 1e-4);
        }
        let (a, b) = baths(1.0, 0.01, 0.01);
        let r = coupled_lindblad_closed(1.0, 2.0, 0.5, &a, &b).unwrap();
        assert!(r.populations[0] > 1.0 - 1e-12);
    }

    #[test]
    fn redfield_equilibrium_matches_lindblad() {
        let (a, b) = baths(1.0, 1.7, 1.7);
        let red = coupled_redfield_closed(1.0, 2.0, 0.5, &a, &b).unwrap();
        let lin = coupled_lindblad_closed(1.0, 2.0, 0.5, &a, &b).unwrap();
        assert_eq!(red.params.k, 0.0);
        assert_eq!(red.rho_23, Complex64::new(0.0, 0.0));
        for (x, y) in red.populations.iter().zip(lin.populations) {
            assert_relative_eq!(*x, y, max_relative = 1e-14);
        }
    }

    #[test]
    fn redfield_pathology_point() {
        let (a, b) = baths(1.0, 10.5, 0.5);
        let r = coupled_redfield_closed(1.0, 2.0, 0.5, &a, &b).unwrap();
        assert!(r.populations[1].min(r.populations[3]) < 0.0);
        assert_relative_eq!(r.populations.iter().sum::<f64>(), 1.0, max_relative = 1e-13);
        assert_eq!(r.rho_32, r.rho_23.conj());
    }

    #[test]
    fn redfield_requires_uniform_density() {
        let a = BathSpec::uniform("A", 1.0, 1.0).unwrap();
        let b = BathSpec::uniform("B", 1.0, 2.0).unwrap();
        assert!(matches!(
            coupled_redfield_closed(1.0, 2.0, 0.5, &a, &b),
            Err(Error::NonUniformSpectralDensity(_))
        ));
    }

    #[test]
    fn single_qubit_limits() {
        let (qa, qb) = single_qubit_limit(Regime::Low, 1.0, 1.0, 1.0, 0.05, 0.05).unwrap();
        assert_eq!((qa, qb), (0.0, 0.0));
        let (qa, qb) = single_qubit_limit(Regime::High, 2.0, 1.0, 0.5, 120.0, 100.0).unwrap();
        assert_relative_eq!(qa, 0.5 * 0.5 * 2.0 / (120.0 + 50.0) * 20.0, max_relative = 1e-15);
        assert_eq!(qb, -qa);
    }

    #[test]
    fn coupled_low_limit_is_boltzmann_difference() {
        let (a, b) = baths(1.0, 0.05, 0.04);
        let lim = coupled_limit(Regime::Low, 1.0, 2.0, 0.5, &a, &b).unwrap();
        let d = CoupledDiag::new(1.0, 2.0, 0.5).unwrap();
        let ab2 = (d.alpha * d.beta).powi(2);
        let expected = ab2 * d.omega_plus / (d.alpha.powi(2) + d.beta.powi(2))
            * ((-d.omega_plus / 0.05).exp() - (-d.omega_plus / 0.04).exp());
        assert_relative_eq!(lim.a_plus, expected, max_relative = 1e-14);
    }

    #[test]
    fn decoupled_product_is_diagonal() {
        let (a, b) = baths(1.0, 2.0, 0.5);
        for (w1, w2) in [(1.0, 2.0), (2.0, 1.0)] {
            let rho = decoupled_product_state(w1, w2, &a, &b).unwrap();
            assert!(rho.max_coherence() < 1e-15);
            let lin = coupled_lindblad_closed(w1, w2, 0.0, &a, &b).unwrap();
            for (x, y) in rho.populations().iter().zip(lin.populations) {
                assert_relative_eq!(*x, y, max_relative = 1e-13);
            }
        }
    }

    proptest! {
        #[test]
        fn k_identity_and_positivity(
            w1 in 0.2f64..5.0, w2 in 0.2f64..5.0, frac in 0.01f64..0.9,
            g in 0.1f64..2.0, ta in 0.05f64..10.0, tb in 0.05f64..10.0,
        ) {
            let lambda = frac * (w1 * w2).sqrt();
            let (a, b) = baths(g, ta, tb);
            let r = coupled_redfield_closed(w1, w2, lambda, &a, &b).unwrap();
            let p = r.params;
            let scale = p.c.iter().chain(&p.d).fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
            prop_assert!((p.k_from_12() - p.k).abs() <= 1e-12 * scale);
            prop_assert!((p.k_from_34() - p.k).abs() <= 1e-12 * scale);
            for v in p.a.iter().chain(&p.b).chain(&p.c).chain(&p.d) {
                prop_assert!(*v >= 0.0);
            }
            prop_assert!((r.populations.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn coherences_shift_ground_population(
            frac in 0.05f64..0.9, ta in 0.2f64..10.0, tb in 0.2f64..10.0,
        ) {
            prop_assume!((ta - tb).abs() > 0.05);
            let lambda = frac * 2f64.sqrt();
            let (a, b) = baths(1.0, ta, tb);
            let r = coupled_redfield_closed(1.0, 2.0, lambda, &a, &b).unwrap();
            let s = r.params.s;
            prop_assume!(r.params.k != 0.0 && s[0] * s[1] != s[2] * s[3]);
            // the k = 0 populations are the secular ones
            let secular = s[0] * s[1] / ((s[0] + s[2]) * (s[1] + s[3]));
            prop_assert!((r.populations[0] - secular).abs() > 1e-12 * secular);
            // the −4k² term lowers ρ₁₁ at fixed normalization; N itself can turn
            // negative for strongly unequal temperatures
            let lead = (r.params.s_total.powi(2) + 4.0 * r.params.e.powi(2)) / r.params.norm;
            if r.params.norm > 0.0 {
                prop_assert!(r.populations[0] < lead * s[0] * s[1]);
            }
        }
    }
}
