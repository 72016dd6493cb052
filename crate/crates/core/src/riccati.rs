//! Characteristic-root machinery for Riccati equations `h' = A + B h + C h^2`
//! and the iterated change-of-function construction that turns one
//! characteristic-root bound into a sharper one.
//!
//! The engine works on an abstract coefficient set with `A0(x) C0(x) < 0`.
//! Writing `gamma = -C0/A0 > 0` and `eta_0 = -B0/(2 A0)`, the characteristic
//! roots of the level-0 equation are `1/(eta_0 ± sqrt(eta_0^2 + gamma))`.
//! Dividing the unknown by a root and re-deriving the Riccati equation yields
//! a new root at every level; the shift recursion is
//!
//! ```text
//! eta_n = eta_0 -/+ (eta'_{n-1} + beta_{n-1} gamma' / 2)
//!                   / (2 A0 sqrt(eta_{n-1}^2 + gamma))
//! beta_n = 1 / (eta_n +/- sqrt(eta_n^2 + gamma))
//! ```
//!
//! where the upper signs go together: a `+` branch in `beta_{n-1}` selects
//! `-` in the `eta_n` update.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared evaluable function of one real variable.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Root-branch choice for one iteration step.
///
/// `Plus` selects `1/(eta + sqrt(eta^2 + gamma))`, which is the positive
/// root whenever `gamma > 0`; `Minus` selects the other (negative) root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Riccati coefficients `A0, B0, C0` and their first derivatives, all
/// evaluable on an open interval.
#[derive(Clone)]
pub struct CoefficientSet {
    a0: RealFn,
    b0: RealFn,
    c0: RealFn,
    da0: RealFn,
    db0: RealFn,
    dc0: RealFn,
    domain: (f64, f64),
}

impl CoefficientSet {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a0: RealFn,
        b0: RealFn,
        c0: RealFn,
        da0: RealFn,
        db0: RealFn,
        dc0: RealFn,
        domain: (f64, f64),
    ) -> Self {
        CoefficientSet {
            a0,
            b0,
            c0,
            da0,
            db0,
            dc0,
            domain,
        }
    }

    /// Coefficients of the equation satisfied by `x^-alpha I_nu(x)/I_(nu-1)(x)`:
    /// `h' = x^-alpha - (2 lambda / x) h - x^alpha h^2` with
    /// `lambda = nu + (alpha - 1)/2`.
    pub fn bessel_i(nu: f64, alpha: f64) -> Self {
        let lambda = nu + 0.5 * (alpha - 1.0);
        CoefficientSet {
            a0: Arc::new(move |x| x.powf(-alpha)),
            b0: Arc::new(move |x| -2.0 * lambda / x),
            c0: Arc::new(move |x| -x.powf(alpha)),
            da0: Arc::new(move |x| -alpha * x.powf(-alpha - 1.0)),
            db0: Arc::new(move |x| 2.0 * lambda / (x * x)),
            dc0: Arc::new(move |x| -alpha * x.powf(alpha - 1.0)),
            domain: (0.0, f64::INFINITY),
        }
    }

    /// Coefficients of the equation satisfied by `x^-alpha K_(nu-1)(x)/K_nu(x)`:
    /// `h' = -x^-alpha + (2 tau / x) h + x^alpha h^2` with
    /// `tau = nu - (alpha + 1)/2`.
    pub fn bessel_k(nu: f64, alpha: f64) -> Self {
        let tau = nu - 0.5 * (alpha + 1.0);
        CoefficientSet {
            a0: Arc::new(move |x| -x.powf(-alpha)),
            b0: Arc::new(move |x| 2.0 * tau / x),
            c0: Arc::new(move |x| x.powf(alpha)),
            da0: Arc::new(move |x| alpha * x.powf(-alpha - 1.0)),
            db0: Arc::new(move |x| -2.0 * tau / (x * x)),
            dc0: Arc::new(move |x| alpha * x.powf(alpha - 1.0)),
            domain: (0.0, f64::INFINITY),
        }
    }

    pub fn a0(&self, x: f64) -> f64 {
        (self.a0)(x)
    }

    pub fn b0(&self, x: f64) -> f64 {
        (self.b0)(x)
    }

    pub fn c0(&self, x: f64) -> f64 {
        (self.c0)(x)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// `gamma = -C0/A0`; positive wherever `A0 C0 < 0`.
    pub fn gamma(&self, x: f64) -> f64 {
        -(self.c0)(x) / (self.a0)(x)
    }

    pub fn gamma_prime(&self, x: f64) -> f64 {
        let a = (self.a0)(x);
        -((self.dc0)(x) * a - (self.c0)(x) * (self.da0)(x)) / (a * a)
    }

    /// Level-0 shift `eta_0 = -B0/(2 A0)`.
    pub fn eta0(&self, x: f64) -> f64 {
        -(self.b0)(x) / (2.0 * (self.a0)(x))
    }

    pub fn eta0_prime(&self, x: f64) -> f64 {
        let a = (self.a0)(x);
        -((self.db0)(x) * a - (self.b0)(x) * (self.da0)(x)) / (2.0 * a * a)
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.domain.0 && x < self.domain.1
    }

    pub(crate) fn check_domain(&self, x: f64) -> Result<()> {
        if !x.is_finite() || !self.contains(x) {
            return Err(Error::domain(format!(
                "x = {x} outside the coefficient domain ({}, {})",
                self.domain.0, self.domain.1
            )));
        }
        Ok(())
    }

    pub(crate) fn check_sign_hypothesis(&self, x: f64) -> Result<()> {
        let product = (self.a0)(x) * (self.c0)(x);
        if !(product < 0.0) {
            return Err(Error::Hypothesis { x, product });
        }
        Ok(())
    }

    /// Compares the supplied derivative evaluators against central finite
    /// differences at the given sample points (relative tolerance 1e-6).
    pub fn verify_derivatives(&self, samples: &[f64]) -> Result<()> {
        for &x in samples {
            self.check_domain(x)?;
            let h = fd_step(x);
            for (f, df) in [
                (&self.a0, &self.da0),
                (&self.b0, &self.db0),
                (&self.c0, &self.dc0),
            ] {
                let numeric = (f(x + h) - f(x - h)) / (2.0 * h);
                let claimed = df(x);
                let scale = claimed.abs().max(numeric.abs()).max(1e-300);
                let rel = (numeric - claimed).abs() / scale;
                if rel > 1e-6 {
                    return Err(Error::Derivative {
                        x,
                        coarse: numeric,
                        fine: claimed,
                        rel,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Central-difference step `max(1, |x|) * eps^(1/3)`.
fn fd_step(x: f64) -> f64 {
    x.abs().max(1.0) * f64::EPSILON.cbrt()
}

/// Evaluates `1/(eta + branch * sqrt(eta^2 + gamma))` without subtractive
/// cancellation. Requires `gamma > 0`.
fn branch_reciprocal(eta: f64, gamma: f64, branch: Branch) -> f64 {
    let s = (eta * eta + gamma).sqrt();
    match branch {
        // 1/(eta + s); for eta < 0 use the equal form (s - eta)/gamma.
        Branch::Plus => {
            if eta >= 0.0 {
                1.0 / (eta + s)
            } else {
                (s - eta) / gamma
            }
        }
        // 1/(eta - s) = -(eta + s)/gamma.
        Branch::Minus => {
            if eta <= 0.0 {
                1.0 / (eta - s)
            } else {
                -(eta + s) / gamma
            }
        }
    }
}

/// A characteristic root of `A0 + B0 phi + C0 phi^2 = 0` at one point.
///
/// `Branch::Plus` picks the root that is positive whenever `A0 C0 < 0`.
pub fn characteristic_root(coeffs: &CoefficientSet, x: f64, branch: Branch) -> Result<f64> {
    coeffs.check_domain(x)?;
    coeffs.check_sign_hypothesis(x)?;
    let eta0 = coeffs.eta0(x);
    let gamma = coeffs.gamma(x);
    Ok(branch_reciprocal(eta0, gamma, branch))
}

/// The iterated construction for a fixed coefficient set and a fixed branch
/// chain. `branches[i]` is the root branch taken at level `i`; the number of
/// iteration steps is `branches.len() - 1`.
#[derive(Clone)]
pub struct IterationState<'c> {
    coeffs: &'c CoefficientSet,
    branches: Vec<Branch>,
}

impl<'c> IterationState<'c> {
    pub fn new(coeffs: &'c CoefficientSet, branches: Vec<Branch>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::domain("branch chain must have at least one entry"));
        }
        Ok(IterationState { coeffs, branches })
    }

    /// Step index `n` of the deepest level.
    pub fn step_count(&self) -> usize {
        self.branches.len() - 1
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Levels beyond the first iteration are numerical approximations only;
    /// they are not certified as bounds by anything in this crate.
    pub fn approximation_only(&self) -> bool {
        self.step_count() >= 2
    }

    pub fn gamma(&self, x: f64) -> f64 {
        self.coeffs.gamma(x)
    }

    pub fn gamma_prime(&self, x: f64) -> f64 {
        self.coeffs.gamma_prime(x)
    }

    /// Shift `eta_level(x)`, computed by the recursion.
    pub fn eta(&self, level: usize, x: f64) -> Result<f64> {
        self.require_level(level)?;
        self.coeffs.check_domain(x)?;
        self.coeffs.check_sign_hypothesis(x)?;
        self.eta_unchecked(level, x)
    }

    fn eta_unchecked(&self, level: usize, x: f64) -> Result<f64> {
        if level == 0 {
            return Ok(self.coeffs.eta0(x));
        }
        let prev = level - 1;
        let eta_prev = self.eta_unchecked(prev, x)?;
        let deta_prev = self.eta_prime_unchecked(prev, x)?;
        let beta_prev = branch_reciprocal(eta_prev, self.coeffs.gamma(x), self.branches[prev]);
        let numer = deta_prev + 0.5 * beta_prev * self.coeffs.gamma_prime(x);
        let denom = 2.0 * self.coeffs.a0(x) * (eta_prev * eta_prev + self.coeffs.gamma(x)).sqrt();
        let eta = self.coeffs.eta0(x) - self.branches[prev].sign() * numer / denom;
        if !eta.is_finite() {
            return Err(Error::Evaluation {
                x,
                context: format!("eta_{level}"),
            });
        }
        Ok(eta)
    }

    /// Derivative of `eta_level`. Level 0 comes from the coefficient
    /// derivatives in closed form; deeper levels fall back to central
    /// differences validated by a two-step consistency check.
    pub fn eta_prime(&self, level: usize, x: f64) -> Result<f64> {
        self.require_level(level)?;
        self.coeffs.check_domain(x)?;
        self.eta_prime_unchecked(level, x)
    }

    fn eta_prime_unchecked(&self, level: usize, x: f64) -> Result<f64> {
        if level == 0 {
            return Ok(self.coeffs.eta0_prime(x));
        }
        let h = fd_step(x).min(0.25 * x);
        let coarse = self.central_difference(level, x, h)?;
        let fine = self.central_difference(level, x, 0.5 * h)?;
        let scale = coarse.abs().max(fine.abs());
        if scale > 0.0 {
            let rel = (coarse - fine).abs() / scale;
            if rel > 1e-4 {
                return Err(Error::Derivative {
                    x,
                    coarse,
                    fine,
                    rel,
                });
            }
        }
        // Richardson extrapolation of the two estimates.
        Ok((4.0 * fine - coarse) / 3.0)
    }

    fn central_difference(&self, level: usize, x: f64, h: f64) -> Result<f64> {
        let hi = self.eta_unchecked(level, x + h)?;
        let lo = self.eta_unchecked(level, x - h)?;
        Ok((hi - lo) / (2.0 * h))
    }

    /// Cumulative root product `beta_level(x)`.
    pub fn beta(&self, level: usize, x: f64) -> Result<f64> {
        self.require_level(level)?;
        self.coeffs.check_domain(x)?;
        self.coeffs.check_sign_hypothesis(x)?;
        let eta = self.eta_unchecked(level, x)?;
        let beta = branch_reciprocal(eta, self.coeffs.gamma(x), self.branches[level]);
        if !beta.is_finite() {
            return Err(Error::Evaluation {
                x,
                context: format!("beta_{level}"),
            });
        }
        Ok(beta)
    }

    /// `(beta_n, eta_n)` at the deepest configured level.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let n = self.step_count();
        let eta = self.eta(n, x)?;
        let beta = branch_reciprocal(eta, self.coeffs.gamma(x), self.branches[n]);
        Ok((beta, eta))
    }

    fn require_level(&self, level: usize) -> Result<()> {
        if level >= self.branches.len() {
            return Err(Error::domain(format!(
                "level {level} exceeds configured chain of {} branches",
                self.branches.len()
            )));
        }
        Ok(())
    }
}

/// One-shot evaluation of the iteration: `branches` must have length `n + 1`.
pub fn iterate(
    coeffs: &CoefficientSet,
    n: usize,
    branches: &[Branch],
    x: f64,
) -> Result<(f64, f64)> {
    if branches.len() != n + 1 {
        return Err(Error::domain(format!(
            "need {} branch signs for {n} steps, got {}",
            n + 1,
            branches.len()
        )));
    }
    IterationState::new(coeffs, branches.to_vec())?.eval(x)
}

/// Default all-positive branch chain of length `n + 1`.
pub fn positive_branches(n: usize) -> Vec<Branch> {
    vec![Branch::Plus; n + 1]
}

/// Numeric certification verdict. A certificate is sampling evidence, not a
/// proof; see [`CertificateReport::sampling_evidence_only`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

/// Outcome of the individual hypothesis checks on the sample grid.
#[derive(Debug, Clone, Copy)]
pub struct HypothesisChecks {
    pub root_positive: bool,
    pub root_strictly_monotonic: bool,
    /// `phi' * h' > 0` near the endpoint selected by the sign of `C0`,
    /// together with positivity of the ratio probe there.
    pub endpoint_sign_condition: bool,
    pub c_sign_constant: bool,
    pub coefficient_product_negative: bool,
}

impl HypothesisChecks {
    fn all(&self) -> bool {
        self.root_positive
            && self.root_strictly_monotonic
            && self.endpoint_sign_condition
            && self.c_sign_constant
            && self.coefficient_product_negative
    }
}

/// One evaluated grid point kept in the report.
#[derive(Debug, Clone, Copy)]
pub struct SamplePoint {
    pub x: f64,
    pub root: f64,
    pub probe: f64,
    pub c0: f64,
}

#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub checks: HypothesisChecks,
    pub verdict: Verdict,
    /// Grid bracket where the probe crosses the root, when refuted.
    pub witness: Option<(f64, f64)>,
    /// Side implied by the sign analysis when certified: the root bounds the
    /// probe from this side.
    pub implied_side: Option<crate::bound::Side>,
    pub samples: Vec<SamplePoint>,
    /// Always true: verdicts rest on finitely many samples.
    pub sampling_evidence_only: bool,
}

/// Checks the bound-theorem hypotheses for a candidate root against a ratio
/// probe on a sample grid.
///
/// * `Refuted` requires a concrete witness bracket where probe and root cross.
/// * `Certified` means every sampled hypothesis check passed and no crossing
///   was seen.
/// * Anything else is `Inconclusive` (including grids with fewer than two
///   points, where monotonicity cannot be sampled).
pub fn certify<R, P>(
    coeffs: &CoefficientSet,
    root: R,
    ratio_probe: P,
    grid: &[f64],
) -> Result<CertificateReport>
where
    R: Fn(f64) -> Result<f64>,
    P: Fn(f64) -> Result<f64>,
{
    if grid.is_empty() {
        return Err(Error::domain("certification grid is empty"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(
            "certification grid must be strictly increasing",
        ));
    }
    for &x in grid {
        coeffs.check_domain(x)?;
    }

    let mut samples = Vec::with_capacity(grid.len());
    for &x in grid {
        let r = root(x)?;
        let p = ratio_probe(x)?;
        let c = coeffs.c0(x);
        if !r.is_finite() || !p.is_finite() || !c.is_finite() {
            return Err(Error::Evaluation {
                x,
                context: "certification sample".into(),
            });
        }
        samples.push(SamplePoint {
            x,
            root: r,
            probe: p,
            c0: c,
        });
    }

    let first_c = samples[0].c0;
    let c_sign_constant = samples.iter().all(|s| s.c0 * first_c > 0.0);
    let coefficient_product_negative = grid.iter().all(|&x| coeffs.a0(x) * coeffs.c0(x) < 0.0);
    let root_positive = samples.iter().all(|s| s.root > 0.0);

    // Strict sign changes only: exact touching (the documented equality
    // cases) does not refute a bound.
    let mut witness = None;
    let mut prev_signed: Option<(f64, f64)> = None;
    for s in &samples {
        let d = s.probe - s.root;
        if d == 0.0 {
            continue;
        }
        if let Some((px, pd)) = prev_signed {
            if (pd < 0.0) != (d < 0.0) {
                witness = Some((px, s.x));
                break;
            }
        }
        prev_signed = Some((s.x, d));
    }

    if samples.len() < 2 {
        return Ok(CertificateReport {
            checks: HypothesisChecks {
                root_positive,
                root_strictly_monotonic: false,
                endpoint_sign_condition: false,
                c_sign_constant,
                coefficient_product_negative,
            },
            verdict: Verdict::Inconclusive,
            witness: None,
            implied_side: None,
            samples,
            sampling_evidence_only: true,
        });
    }

    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1].root - w[0].root).collect();
    let increasing = diffs.iter().all(|&d| d > 0.0);
    let decreasing = diffs.iter().all(|&d| d < 0.0);
    let root_strictly_monotonic = increasing || decreasing;

    // Endpoint choice follows the sign of C0: negative C examines 0+, positive
    // C examines +infinity.
    let (pa, pb) = if first_c < 0.0 {
        (samples[0], samples[1])
    } else {
        (samples[samples.len() - 2], samples[samples.len() - 1])
    };
    let dx = pb.x - pa.x;
    let probe_slope = (pb.probe - pa.probe) / dx;
    let root_slope = (pb.root - pa.root) / dx;
    let endpoint_probe = if first_c < 0.0 { pa.probe } else { pb.probe };
    let endpoint_sign_condition = probe_slope * root_slope > 0.0 && endpoint_probe > 0.0;

    let checks = HypothesisChecks {
        root_positive,
        root_strictly_monotonic,
        endpoint_sign_condition,
        c_sign_constant,
        coefficient_product_negative,
    };

    let verdict = if witness.is_some() {
        Verdict::Refuted
    } else if checks.all() {
        Verdict::Certified
    } else {
        Verdict::Inconclusive
    };

    let implied_side = if verdict == Verdict::Certified {
        // C < 0: probe below an increasing root / above a decreasing one;
        // C > 0: the opposite pairing.
        let upper = (first_c < 0.0) == increasing;
        Some(if upper {
            crate::bound::Side::Upper
        } else {
            crate::bound::Side::Lower
        })
    } else {
        None
    };

    Ok(CertificateReport {
        checks,
        verdict,
        witness,
        implied_side,
        samples,
        sampling_evidence_only: true,
    })
}
