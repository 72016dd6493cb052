//! Numeric certification of the root-bound hypotheses against oracle-backed
//! ratio probes.

use ratio_bounds::log_spaced;
use ratio_bounds::oracle::{self, PrecisionConfig};
use ratio_bounds::riccati::{certify, Branch, CoefficientSet, Verdict};
use ratio_bounds::Side;

fn grid() -> Vec<f64> {
    log_spaced(1e-3, 1e3, 50)
}

#[test]
fn i_side_root_is_certified_as_upper_bound() {
    let cfg = PrecisionConfig::with_digits(30);
    let coeffs = CoefficientSet::bessel_i(1.0, 0.0);
    let root = |x: f64| ratio_bounds::riccati::characteristic_root(&coeffs, x, Branch::Plus);
    let probe = |x: f64| Ok(oracle::oracle_ratio_i(1.0, x, &cfg)?.value.to_f64());
    let report = certify(&coeffs, root, probe, &grid()).unwrap();
    assert_eq!(report.verdict, Verdict::Certified);
    assert_eq!(report.implied_side, Some(Side::Upper));
    assert!(report.checks.root_strictly_monotonic);
    assert!(report.witness.is_none());
    assert!(report.sampling_evidence_only);
    assert_eq!(report.samples.len(), 50);
}

#[test]
fn k_side_root_is_certified_as_lower_bound() {
    let cfg = PrecisionConfig::with_digits(30);
    let coeffs = CoefficientSet::bessel_k(1.0, 0.0);
    let root = |x: f64| ratio_bounds::riccati::characteristic_root(&coeffs, x, Branch::Plus);
    let probe = |x: f64| Ok(oracle::oracle_ratio_k(1.0, x, &cfg)?.value.to_f64());
    // The K instance has C0 > 0, so the endpoint condition is taken at the
    // top of the grid.
    let report = certify(&coeffs, root, probe, &log_spaced(1e-2, 1e2, 40)).unwrap();
    assert_eq!(report.verdict, Verdict::Certified);
    assert_eq!(report.implied_side, Some(Side::Lower));
}

#[test]
fn fractional_alpha_is_refuted_with_witness() {
    let cfg = PrecisionConfig::with_digits(30);
    let alpha = 0.5;
    let coeffs = CoefficientSet::bessel_i(2.0, alpha);
    let root = |x: f64| ratio_bounds::riccati::characteristic_root(&coeffs, x, Branch::Plus);
    // Probe for the transformed unknown x^-alpha * ratio.
    let probe = |x: f64| Ok(x.powf(-alpha) * oracle::oracle_ratio_i(2.0, x, &cfg)?.value.to_f64());
    let report = certify(&coeffs, root, probe, &grid()).unwrap();
    assert_eq!(report.verdict, Verdict::Refuted);
    let (lo, hi) = report
        .witness
        .expect("refutation carries a witness bracket");
    assert!(lo < hi);
    // The root of this instance is non-monotonic on the grid as well.
    assert!(!report.checks.root_strictly_monotonic);
}
