//! Small harness for the acceptance suite: seeded parameter draws, error
//! bookkeeping and the one-line verdict format.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded uniform draws.
pub struct Draws(ChaCha8Rng);

impl Draws {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.random_range(lo..hi)
    }
}

/// `|x − y| / |y|`, taking two exact zeros as agreement.
pub fn rel_err(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        (x - y).abs() / y.abs()
    }
}

/// Largest observed value of some error measure, with where it happened.
#[derive(Debug, Clone, Default)]
pub struct Worst {
    pub value: f64,
    pub at: String,
}

impl Worst {
    pub fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }

    pub fn below(&self, tol: f64) -> bool {
        self.value < tol
    }
}

impl fmt::Display for Worst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at.is_empty() {
            write!(f, "{:.2e}", self.value)
        } else {
            write!(f, "{:.2e} at {}", self.value, self.at)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(id: u8, title: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            id,
            title,
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible_and_in_range() {
        let (mut a, mut b) = (Draws::new(7), Draws::new(7));
        for _ in 0..100 {
            let x = a.uniform(0.2, 5.0);
            assert_eq!(x, b.uniform(0.2, 5.0));
            assert!((0.2..5.0).contains(&x));
        }
    }

    #[test]
    fn worst_tracks_maximum_and_nan() {
        let mut w = Worst::default();
        w.record(1e-12, || "a".into());
        w.record(1e-14, || "b".into());
        assert_eq!(w.at, "a");
        assert!(w.below(1e-10));
        w.record(f64::NAN, || "c".into());
        assert!(!w.below(1e-10));
    }

    #[test]
    fn relative_error() {
        assert_eq!(rel_err(0.0, 0.0), 0.0);
        assert_eq!(rel_err(1.1, 1.0), 0.10000000000000009);
        assert!(rel_err(1.0, 0.0).is_infinite());
    }

    #[test]
    fn verdict_line() {
        let v = Verdict::new(4, "first law", true, "max 1e-16");
        assert_eq!(v.to_string(), "criterion  4 PASS first law: max 1e-16");
    }
}
