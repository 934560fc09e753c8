//! Thermal bosonic reservoirs.
//!
//! A reservoir enters the kernels only through its temperature and its
//! spectral density `g(ω)`. With the system operators split into a raising
//! channel (index 1) and a lowering channel (index 2), the rotating-wave
//! bath correlation function has two nonvanishing components:
//!
//! ```text
//! D¹²(ω) = g(ω) (1 + n(ω))     ω > 0   (emission into the bath)
//! D²¹(ω) = g(−ω) n(−ω)         ω < 0   (absorption from the bath)
//! ```
//!
//! where `n` is the Planck occupation at the bath temperature. Units are
//! natural (ħ = k_B = 1).

use crate::error::{domain, Error, Result};

/// Relative tolerance used when matching a requested frequency against a
/// tabulated spectral density.
const TABLE_MATCH_RTOL: f64 = 1e-12;

/// Index of a system-operator channel in the bilinear `S^α S^β` sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// `S¹`, raises the system energy.
    Raising,
    /// `S²`, lowers the system energy.
    Lowering,
}

impl Channel {
    pub const BOTH: [Channel; 2] = [Channel::Raising, Channel::Lowering];

    /// One-based index as used in `D^{αβ}`.
    pub fn index(self) -> usize {
        match self {
            Channel::Raising => 1,
            Channel::Lowering => 2,
        }
    }
}

/// Spectral density `g(ω)` for ω > 0.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    Constant(f64),
    /// Finite table of `(ω, g)` pairs; lookups must hit a tabulated frequency.
    Table(Vec<(f64, f64)>),
}

impl SpectralDensity {
    pub fn constant(g: f64) -> Result<Self> {
        if !(g.is_finite() && g >= 0.0) {
            return Err(domain(format!(
                "spectral density must be finite and nonnegative, got {g}"
            )));
        }
        Ok(SpectralDensity::Constant(g))
    }

    pub fn table(entries: Vec<(f64, f64)>) -> Result<Self> {
        for &(omega, g) in &entries {
            if !(omega.is_finite() && omega > 0.0) {
                return Err(domain(format!("tabulated frequency must be positive, got {omega}")));
            }
            if !(g.is_finite() && g >= 0.0) {
                return Err(domain(format!("tabulated g({omega}) must be nonnegative, got {g}")));
            }
        }
        Ok(SpectralDensity::Table(entries))
    }

    pub fn eval(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0) {
            return Err(domain(format!(
                "spectral density queried at non-positive frequency {omega}"
            )));
        }
        match self {
            SpectralDensity::Constant(g) => Ok(*g),
            SpectralDensity::Table(entries) => entries
                .iter()
                .find(|(w, _)| (w - omega).abs() <= TABLE_MATCH_RTOL * omega.max(*w))
                .map(|&(_, g)| g)
                .ok_or(Error::SpectralLookup { omega }),
        }
    }
}

/// One thermal reservoir.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    label: String,
    temperature: f64,
    spectral_density: SpectralDensity,
}

impl BathSpec {
    pub fn new(label: impl Into<String>, temperature: f64, spectral_density: SpectralDensity) -> Result<Self> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(domain(format!("temperature must be nonnegative, got {temperature}")));
        }
        Ok(Self {
            label: label.into(),
            temperature,
            spectral_density,
        })
    }

    /// Reservoir with a frequency-independent spectral density.
    pub fn uniform(label: impl Into<String>, temperature: f64, g: f64) -> Result<Self> {
        Self::new(label, temperature, SpectralDensity::constant(g)?)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn spectral_density(&self) -> &SpectralDensity {
        &self.spectral_density
    }

    pub fn g(&self, omega: f64) -> Result<f64> {
        self.spectral_density.eval(omega)
    }

    pub fn occupation(&self, omega: f64) -> Result<f64> {
        planck_occupation(omega, self.temperature)
    }
}

/// Bose–Einstein occupation `1/(exp(ω/T) − 1)`, with the exact limit 0 at T = 0.
pub fn planck_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(domain(format!("Planck occupation needs ω > 0, got {omega}")));
    }
    if !(temperature >= 0.0) {
        return Err(domain(format!("temperature must be nonnegative, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega / temperature).exp_m1())
}

/// Bath correlation `D^{αβ}(ω)` in the rotating-wave approximation.
///
/// Only `(Raising, Lowering)` at ω > 0 and `(Lowering, Raising)` at ω < 0 are
/// nonzero. Querying either of those channel pairs at ω = 0 is an error.
pub fn bath_correlation(bath: &BathSpec, alpha: Channel, beta: Channel, omega: f64) -> Result<f64> {
    match (alpha, beta) {
        (Channel::Raising, Channel::Lowering) | (Channel::Lowering, Channel::Raising) if omega == 0.0 => {
            Err(domain("bath correlation queried at ω = 0"))
        }
        (Channel::Raising, Channel::Lowering) if omega > 0.0 => Ok(bath.g(omega)? * (1.0 + bath.occupation(omega)?)),
        (Channel::Lowering, Channel::Raising) if omega < 0.0 => Ok(bath.g(-omega)? * bath.occupation(-omega)?),
        _ => Ok(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn planck_zero_temperature_is_exactly_zero() {
        assert_eq!(planck_occupation(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn planck_unit_ratio() {
        let expected = 1.0 / (std::f64::consts::E - 1.0);
        assert_relative_eq!(planck_occupation(1.0, 1.0).unwrap(), expected, max_relative = 1e-15);
        assert_relative_eq!(expected, 0.581_976_706_869_326_5, max_relative = 1e-15);
    }

    #[test]
    fn planck_high_temperature_asymptote() {
        // n ≈ T/ω − 1/2 + ω/(12T)
        let n = planck_occupation(1.0, 100.0).unwrap();
        assert!((n - 99.5).abs() < 0.01, "{n}");
        assert_relative_eq!(n, 100.0 - 0.5 + 1.0 / 1200.0, max_relative = 1e-9);
    }

    #[test]
    fn planck_rejects_nonpositive_frequency() {
        assert!(matches!(planck_occupation(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(planck_occupation(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(planck_occupation(1.0, -0.1).is_err());
    }

    #[test]
    fn planck_large_ratio_does_not_overflow() {
        let n = planck_occupation(5.0, 1e-3).unwrap();
        assert_eq!(n, 0.0);
        let n = planck_occupation(5.0, 0.05).unwrap();
        assert_relative_eq!(n, (-100.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn correlation_examples() {
        let cold = BathSpec::uniform("A", 0.0, 1.0).unwrap();
        use Channel::*;
        assert_eq!(bath_correlation(&cold, Raising, Lowering, 1.0).unwrap(), 1.0);
        assert_eq!(bath_correlation(&cold, Lowering, Raising, -1.0).unwrap(), 0.0);
        let warm = BathSpec::uniform("A", 1.0, 1.0).unwrap();
        assert_relative_eq!(
            bath_correlation(&warm, Lowering, Raising, -1.0).unwrap(),
            0.581_976_706_869_326_5,
            max_relative = 1e-15
        );
    }

    #[test]
    fn correlation_wrong_sign_vanishes() {
        let bath = BathSpec::uniform("A", 1.0, 1.0).unwrap();
        use Channel::*;
        assert_eq!(bath_correlation(&bath, Raising, Lowering, -1.0).unwrap(), 0.0);
        assert_eq!(bath_correlation(&bath, Lowering, Raising, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn correlation_at_zero_frequency_is_an_error() {
        let bath = BathSpec::uniform("A", 1.0, 1.0).unwrap();
        use Channel::*;
        assert!(bath_correlation(&bath, Raising, Lowering, 0.0).is_err());
        assert!(bath_correlation(&bath, Lowering, Raising, 0.0).is_err());
    }

    #[test]
    fn tabulated_density_lookup() {
        let g = SpectralDensity::table(vec![(0.5, 0.3), (2.0, 1.7)]).unwrap();
        let bath = BathSpec::new("B", 1.0, g).unwrap();
        assert_eq!(bath.g(2.0).unwrap(), 1.7);
        assert_eq!(bath.g(0.5 * (1.0 + 1e-14)).unwrap(), 0.3);
        assert_eq!(
            bath_correlation(&bath, Channel::Raising, Channel::Lowering, 1.0),
            Err(Error::SpectralLookup { omega: 1.0 })
        );
    }

    #[test]
    fn invalid_bath_parameters() {
        assert!(BathSpec::uniform("A", -1.0, 1.0).is_err());
        assert!(BathSpec::uniform("A", 1.0, -1.0).is_err());
        assert!(SpectralDensity::table(vec![(0.0, 1.0)]).is_err());
        assert!(SpectralDensity::table(vec![(1.0, -1.0)]).is_err());
    }

    proptest! {
        #[test]
        fn detailed_balance(omega in 0.01f64..10.0, t in 0.05f64..50.0, g in 0.01f64..5.0) {
            let bath = BathSpec::uniform("A", t, g).unwrap();
            let emit = bath_correlation(&bath, Channel::Raising, Channel::Lowering, omega).unwrap();
            let absorb = bath_correlation(&bath, Channel::Lowering, Channel::Raising, -omega).unwrap();
            let ratio = emit / absorb;
            let expected = (omega / t).exp();
            prop_assert!((ratio - expected).abs() <= 1e-12 * expected);
        }

        #[test]
        fn occupation_increases_with_temperature(omega in 0.01f64..10.0, t in 0.05f64..50.0, dt in 1e-3f64..10.0) {
            prop_assert!(planck_occupation(omega, t + dt).unwrap() > planck_occupation(omega, t).unwrap());
        }

        #[test]
        fn same_channel_correlations_vanish(omega in -10.0f64..10.0, t in 0.0f64..10.0) {
            let bath = BathSpec::uniform("A", t, 1.0).unwrap();
            for c in Channel::BOTH {
                prop_assert_eq!(bath_correlation(&bath, c, c, omega).unwrap(), 0.0);
            }
        }
    }
}
