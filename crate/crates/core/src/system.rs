//! Finite-level systems in their energy eigenbasis.
//!
//! A [`SystemSpec`] holds the energies `E_n` together with, for every
//! reservoir, the raising-channel operator `S¹` expressed in the energy
//! basis. The lowering-channel operator is always `S² = (S¹)†`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bath::Channel;
use crate::error::{domain, Error, Result};

/// Matrix elements below this magnitude are treated as structurally zero.
pub const COUPLING_ZERO: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirCoupling {
    pub label: String,
    raising: DMatrix<Complex64>,
    lowering: DMatrix<Complex64>,
}

impl ReservoirCoupling {
    pub fn raising(&self) -> &DMatrix<Complex64> {
        &self.raising
    }

    pub fn lowering(&self) -> &DMatrix<Complex64> {
        &self.lowering
    }

    pub fn operator(&self, channel: Channel) -> &DMatrix<Complex64> {
        match channel {
            Channel::Raising => &self.raising,
            Channel::Lowering => &self.lowering,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    levels: Vec<f64>,
    couplings: Vec<ReservoirCoupling>,
}

impl SystemSpec {
    /// Builds a system from its energies and per-reservoir raising operators.
    ///
    /// Every nonzero `S¹_{pq}` must connect a lower level `q` to a strictly
    /// higher level `p`.
    pub fn new(levels: Vec<f64>, raising: Vec<(String, DMatrix<Complex64>)>) -> Result<Self> {
        let n = levels.len();
        if n < 2 {
            return Err(domain(format!("a system needs at least two levels, got {n}")));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(domain("energies must be finite"));
        }
        let mut couplings = Vec::with_capacity(raising.len());
        for (label, s1) in raising {
            if s1.nrows() != n || s1.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s1.nrows().max(s1.ncols()),
                });
            }
            if couplings.iter().any(|c: &ReservoirCoupling| c.label == label) {
                return Err(Error::InvalidCoupling {
                    reservoir: label,
                    reason: "duplicate reservoir label".into(),
                });
            }
            for p in 0..n {
                for q in 0..n {
                    if s1[(p, q)].norm() > COUPLING_ZERO && levels[p] - levels[q] <= 0.0 {
                        return Err(Error::InvalidCoupling {
                            reservoir: label,
                            reason: format!(
                                "raising element ({p},{q}) does not raise the energy (E_{p} − E_{q} = {})",
                                levels[p] - levels[q]
                            ),
                        });
                    }
                }
            }
            let lowering = s1.adjoint();
            couplings.push(ReservoirCoupling {
                label,
                raising: s1,
                lowering,
            });
        }
        Ok(Self { levels, couplings })
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// `E_{pq} = E_p − E_q`.
    pub fn transition(&self, p: usize, q: usize) -> f64 {
        self.levels[p] - self.levels[q]
    }

    pub fn couplings(&self) -> &[ReservoirCoupling] {
        &self.couplings
    }

    pub fn coupling(&self, label: &str) -> Result<&ReservoirCoupling> {
        self.couplings
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::MissingReservoir(label.to_string()))
    }

    pub fn reservoir_labels(&self) -> impl Iterator<Item = &str> {
        self.couplings.iter().map(|c| c.label.as_str())
    }

    /// Transition frequencies `E_p − E_q` of the nonzero raising elements of one reservoir.
    pub fn transition_frequencies(&self, label: &str) -> Result<Vec<f64>> {
        let c = self.coupling(label)?;
        let n = self.dim();
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if c.raising[(p, q)].norm() > COUPLING_ZERO {
                    out.push(self.transition(p, q));
                }
            }
        }
        Ok(out)
    }
}

fn single_entry(n: usize, entries: &[((usize, usize), f64)]) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(n, n);
    for &((p, q), v) in entries {
        m[(p, q)] = Complex64::new(v, 0.0);
    }
    m
}

/// A qubit with splitting `ω0` driven through `σ⁺` by reservoirs `A` and `B`.
///
/// Level 0 is `|−⟩` at `−ω0/2`, level 1 is `|+⟩` at `+ω0/2`.
pub fn make_single_qubit(omega0: f64) -> Result<SystemSpec> {
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(domain(format!("qubit splitting must be positive, got {omega0}")));
    }
    let sigma_plus = single_entry(2, &[((1, 0), 1.0)]);
    SystemSpec::new(
        vec![-omega0 / 2.0, omega0 / 2.0],
        vec![("A".into(), sigma_plus.clone()), ("B".into(), sigma_plus)],
    )
}

/// Diagonalization data for two flip-flop coupled qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledDiag {
    pub omega1: f64,
    pub omega2: f64,
    pub lambda: f64,
    pub omega_m: f64,
    pub delta_omega: f64,
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub energies: [f64; 4],
}

impl CoupledDiag {
    pub fn new(omega1: f64, omega2: f64, lambda: f64) -> Result<Self> {
        if !(omega1.is_finite() && omega1 > 0.0 && omega2.is_finite() && omega2 > 0.0) {
            return Err(domain(format!(
                "qubit splittings must be positive, got ω1 = {omega1}, ω2 = {omega2}"
            )));
        }
        let lambda_max = (omega1 * omega2).sqrt();
        if !(lambda >= 0.0 && lambda < lambda_max) {
            return Err(domain(format!(
                "coupling must satisfy 0 ≤ λ < √(ω1ω2) = {lambda_max}, got {lambda}"
            )));
        }
        let omega_m = 0.5 * (omega1 + omega2);
        let delta_omega = 0.5 * (omega1 - omega2);
        let split = delta_omega.hypot(lambda);
        let theta = (2.0 * lambda).atan2(omega1 - omega2);
        let omega_minus = omega_m - split;
        if !(omega_minus > 0.0) {
            return Err(domain(format!("ω₋ = {omega_minus} is not positive")));
        }
        Ok(Self {
            omega1,
            omega2,
            lambda,
            omega_m,
            delta_omega,
            theta,
            alpha: (0.5 * theta).cos(),
            beta: (0.5 * theta).sin(),
            omega_plus: omega_m + split,
            omega_minus,
            energies: [-omega_m, -split, split, omega_m],
        })
    }

    /// Columns are `|1⟩..|4⟩` in the product basis `|−−⟩, |−+⟩, |+−⟩, |++⟩`.
    pub fn eigenvectors(&self) -> DMatrix<f64> {
        let (a, b) = (self.alpha, self.beta);
        #[rustfmt::skip]
        let u = DMatrix::from_row_slice(4, 4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0,   a,   b, 0.0,
            0.0,  -b,   a, 0.0,
            0.0, 0.0, 0.0, 1.0,
        ]);
        u
    }
}

/// Hamiltonian of the coupled qubits in the product basis `|−−⟩, |−+⟩, |+−⟩, |++⟩`.
pub fn coupled_product_hamiltonian(omega1: f64, omega2: f64, lambda: f64) -> DMatrix<f64> {
    let wm = 0.5 * (omega1 + omega2);
    let dw = 0.5 * (omega1 - omega2);
    #[rustfmt::skip]
    let h = DMatrix::from_row_slice(4, 4, &[
        -wm, 0.0, 0.0, 0.0,
        0.0, -dw, lambda, 0.0,
        0.0, lambda, dw, 0.0,
        0.0, 0.0, 0.0, wm,
    ]);
    h
}

/// `σ₁⁺` and `σ₂⁺` in the product basis `|−−⟩, |−+⟩, |+−⟩, |++⟩`.
pub fn product_raising_operators() -> (DMatrix<f64>, DMatrix<f64>) {
    let mut s1 = DMatrix::zeros(4, 4);
    s1[(2, 0)] = 1.0;
    s1[(3, 1)] = 1.0;
    let mut s2 = DMatrix::zeros(4, 4);
    s2[(1, 0)] = 1.0;
    s2[(3, 2)] = 1.0;
    (s1, s2)
}

/// Two qubits with flip-flop coupling `λ`; reservoir `A` drives qubit 1 and
/// reservoir `B` drives qubit 2.
///
/// Levels are ordered `E_1 ≤ E_2 ≤ E_3 ≤ E_4` and stored at indices 0..4.
pub fn make_coupled_qubits(omega1: f64, omega2: f64, lambda: f64) -> Result<(SystemSpec, CoupledDiag)> {
    let d = CoupledDiag::new(omega1, omega2, lambda)?;
    let (a, b) = (d.alpha, d.beta);
    // (σ₁⁺)_{31}, (σ₁⁺)_{42} = α at ω₊; (σ₁⁺)_{43} = β, (σ₁⁺)_{21} = −β at ω₋
    let sigma1 = single_entry(4, &[((2, 0), a), ((3, 1), a), ((3, 2), b), ((1, 0), -b)]);
    // (σ₂⁺)_{21}, (σ₂⁺)_{43} = α at ω₋; (σ₂⁺)_{31} = β, (σ₂⁺)_{42} = −β at ω₊
    let sigma2 = single_entry(4, &[((1, 0), a), ((3, 2), a), ((2, 0), b), ((3, 1), -b)]);
    let system = SystemSpec::new(d.energies.to_vec(), vec![("A".into(), sigma1), ("B".into(), sigma2)])?;
    Ok((system, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn single_qubit_levels_and_coupling() {
        let s = make_single_qubit(1.0).unwrap();
        assert_eq!(s.levels(), &[-0.5, 0.5]);
        let c = s.coupling("A").unwrap();
        assert_eq!(c.raising()[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(c.raising().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(c.lowering(), &c.raising().adjoint());
        assert_eq!(make_single_qubit(2.0).unwrap().transition(1, 0), 2.0);
    }

    #[test]
    fn single_qubit_rejects_nonpositive_splitting() {
        assert!(make_single_qubit(0.0).is_err());
        assert!(make_single_qubit(-1.0).is_err());
    }

    #[test]
    fn coupled_reference_point() {
        let (_, d) = make_coupled_qubits(1.0, 2.0, 0.5).unwrap();
        assert_relative_eq!(d.omega_m, 1.5);
        assert_relative_eq!(d.omega_plus, 1.5 + 0.5f64.sqrt(), max_relative = 1e-15);
        assert!((d.omega_plus - 2.207107).abs() < 1e-6);
        assert!((d.omega_minus - 0.792893).abs() < 1e-6);
        assert!((d.alpha - 0.382683).abs() < 1e-6);
        assert!((d.beta - 0.923880).abs() < 1e-6);
    }

    #[test]
    fn coupled_decoupling_limit() {
        let (_, d) = make_coupled_qubits(2.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(d.alpha, 1.0, epsilon = 1e-10);
        assert!(d.beta.abs() < 1e-10);
        assert_relative_eq!(d.omega_plus, 2.0, epsilon = 1e-10);
        assert_relative_eq!(d.omega_minus, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn coupled_matrix_element_tables() {
        let (s, d) = make_coupled_qubits(1.0, 2.0, 0.5).unwrap();
        for label in ["A", "B"] {
            let m = s.coupling(label).unwrap().raising();
            assert_eq!(m.iter().filter(|z| z.norm() > 0.0).count(), 4);
        }
        let a = s.coupling("A").unwrap().raising();
        assert_eq!(a[(2, 0)].re, d.alpha);
        assert_eq!(a[(1, 0)].re, -d.beta);
        let b = s.coupling("B").unwrap().raising();
        assert_eq!(b[(3, 1)].re, -d.beta);
        assert_eq!(b[(3, 2)].re, d.alpha);
        // transition groups: 1↔3, 2↔4 at ω₊; 1↔2, 3↔4 at ω₋
        assert_relative_eq!(s.transition(2, 0), d.omega_plus, max_relative = 1e-14);
        assert_relative_eq!(s.transition(3, 1), d.omega_plus, max_relative = 1e-14);
        assert_relative_eq!(s.transition(1, 0), d.omega_minus, max_relative = 1e-14);
        assert_relative_eq!(s.transition(3, 2), d.omega_minus, max_relative = 1e-14);
    }

    #[test]
    fn coupled_tables_match_transformed_product_operators() {
        let (s, d) = make_coupled_qubits(1.3, 0.7, 0.4).unwrap();
        let u = d.eigenvectors();
        let (p1, p2) = product_raising_operators();
        for (label, p) in [("A", p1), ("B", p2)] {
            let transformed = u.transpose() * p * &u;
            let table = s.coupling(label).unwrap().raising().map(|z| z.re);
            assert!((transformed - table).abs().max() < 1e-14, "{label}");
        }
    }

    #[test]
    fn coupled_rejects_strong_coupling() {
        assert!(make_coupled_qubits(1.0, 2.0, 2f64.sqrt()).is_err());
        assert!(make_coupled_qubits(1.0, 2.0, 2.0).is_err());
        assert!(make_coupled_qubits(1.0, 2.0, -0.1).is_err());
        assert!(make_coupled_qubits(0.0, 2.0, 0.1).is_err());
    }

    #[test]
    fn coupled_allows_zero_coupling_for_both_orderings() {
        let (_, d) = make_coupled_qubits(1.0, 2.0, 0.0).unwrap();
        assert_relative_eq!(d.omega_plus, 2.0);
        assert_relative_eq!(d.omega_minus, 1.0);
        assert!(d.alpha.abs() < 1e-15 && (d.beta - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_couplings_are_rejected() {
        let mut down = DMatrix::zeros(2, 2);
        down[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            SystemSpec::new(vec![-0.5, 0.5], vec![("A".into(), down)]),
            Err(Error::InvalidCoupling { .. })
        ));
        let wrong = DMatrix::zeros(3, 3);
        assert!(SystemSpec::new(vec![-0.5, 0.5], vec![("A".into(), wrong)]).is_err());
        assert!(SystemSpec::new(vec![0.0], vec![]).is_err());
    }

    proptest! {
        #[test]
        fn diagonalization_reproduces_hamiltonian(
            w1 in 0.2f64..5.0, w2 in 0.2f64..5.0, frac in 0.0f64..0.99,
        ) {
            let lambda = frac * (w1 * w2).sqrt();
            let d = CoupledDiag::new(w1, w2, lambda).unwrap();
            prop_assert!((d.alpha.powi(2) + d.beta.powi(2) - 1.0).abs() < 1e-12);
            prop_assert!(d.alpha >= 0.0 && d.beta >= 0.0);
            prop_assert!(d.omega_minus > 0.0 && d.omega_plus > d.omega_minus);
            let split = (d.delta_omega.powi(2) + lambda.powi(2)).sqrt();
            prop_assert!((d.omega_plus - (d.omega_m + split)).abs() < 1e-12);
            prop_assert!((d.omega_minus - (d.omega_m - split)).abs() < 1e-12);
            prop_assert!(d.energies[0] <= d.energies[1] && d.energies[1] <= d.energies[2] && d.energies[2] <= d.energies[3]);

            let u = d.eigenvectors();
            let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d.energies));
            let rebuilt = &u * diag * u.transpose();
            let direct = coupled_product_hamiltonian(w1, w2, lambda);
            prop_assert!((rebuilt - &direct).abs().max() < 1e-12);

            // brute-force numerical diagonalization
            let mut numeric: Vec<f64> = direct.symmetric_eigen().eigenvalues.iter().copied().collect();
            numeric.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (x, y) in numeric.iter().zip(d.energies.iter()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
