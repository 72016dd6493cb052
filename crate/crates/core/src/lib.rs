//! Certified lower and upper bounds for the modified Bessel function ratios
//! `I_nu(x)/I_(nu-1)(x)` and `K_(nu-1)(x)/K_nu(x)`.
//!
//! The crate has five parts:
//!
//! * [`riccati`] — the generic characteristic-root engine: roots of the
//!   Riccati right-hand side, the iterated change-of-function construction,
//!   and numeric certification of the bounding hypotheses on sample grids;
//! * [`bounds_i`] / [`bounds_k`] — the closed-form bound families each ratio
//!   admits, their validity tables and best-enclosure selection;
//! * [`cf`] — recurrence-map machinery: convergent bracket sequences,
//!   zero-tail approximants, tail-estimated ratio evaluation, and the
//!   asymptotic sharpness models;
//! * [`oracle`] — high-precision reference values along independent routes,
//!   used to validate every inequality at desk scale;
//! * [`verify`] — the named property suites driven by the CLI.
//!
//! Certification here is numeric: verdicts rest on finitely many samples and
//! every report says so. Proven validity, by contrast, is encoded in the
//! validity tables, which only admit parameter ranges with established
//! theorems behind them.

// Negated comparisons (`!(x > 0.0)`) are deliberate: they reject NaN along
// with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod bounds_i;
pub mod bounds_k;
pub mod cf;
mod error;
pub mod oracle;
pub mod riccati;
pub mod verify;

pub use bound::{BoundValue, Enclosure, Side, Validity};
pub use error::{Error, Result};

/// `n` logarithmically spaced points covering `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2, "need 0 < lo < hi and n >= 2");
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            (llo + f * (lhi - llo)).exp()
        })
        .collect()
}

/// `n` linearly spaced points covering `[lo, hi]`.
pub fn lin_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(hi > lo && n >= 2, "need lo < hi and n >= 2");
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_cross_thread_boundaries() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<riccati::CoefficientSet>();
        assert_send_sync::<oracle::PrecisionConfig>();
        assert_send_sync::<oracle::PreciseValue>();
        assert_send_sync::<cf::CfRun>();
        assert_send_sync::<Enclosure<bounds_i::IBoundSpec>>();
        assert_send_sync::<Enclosure<bounds_k::KBoundSpec>>();
        assert_send_sync::<riccati::CertificateReport>();
    }

    #[test]
    fn grids_cover_their_ranges() {
        let g = log_spaced(1e-3, 1e3, 25);
        assert_eq!(g.len(), 25);
        assert!((g[0] - 1e-3).abs() < 1e-18);
        assert!((g[24] - 1e3).abs() < 1e-9);
        assert!(g.windows(2).all(|w| w[0] < w[1]));

        let l = lin_spaced(0.0, 1.0, 5);
        assert_eq!(l, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
