//! High-precision reference values for both ratios, computed by routes
//! independent of the closed-form bound families: backward continued-fraction
//! evaluation for the I side, real-line quadrature of the integral
//! representation `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt`
//! (DLMF 10.32.9) for the K side, plus a power-series cross-check and a
//! sign-change search used to refute non-bounds.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision and self-validation tolerances for the oracle.
#[derive(Debug, Clone)]
pub struct PrecisionConfig {
    /// Working precision in decimal digits (>= 20).
    pub digits: u32,
    /// Agreement tolerance for truncation/step self-validation.
    pub cf_tol: f64,
    /// Initial trapezoid step for the K quadrature.
    pub quad_step: f64,
    /// Explicit quadrature cutoff; `None` derives one from `digits`.
    pub quad_cutoff: Option<f64>,
    /// Hard cap on continued-fraction depth and on quadrature nodes.
    pub max_terms: usize,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig::with_digits(50)
    }
}

impl PrecisionConfig {
    /// Config for the given digit count with `cf_tol = 10^(5 - digits)`.
    pub fn with_digits(digits: u32) -> Self {
        PrecisionConfig {
            digits,
            cf_tol: 10f64.powi(5 - digits.min(300) as i32),
            quad_step: 0.125,
            quad_cutoff: None,
            max_terms: 2_000_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.digits < 20 {
            return Err(Error::domain(format!(
                "oracle precision must be at least 20 digits, got {}",
                self.digits
            )));
        }
        if !(self.cf_tol > 0.0) || !(self.quad_step > 0.0) || self.max_terms < 64 {
            return Err(Error::domain("invalid precision configuration"));
        }
        Ok(())
    }

    fn bits(&self) -> usize {
        let raw = (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
        raw.div_ceil(64) * 64
    }
}

/// A value carried at extended precision, with cheap `f64` projection.
#[derive(Debug, Clone)]
pub struct PreciseValue {
    raw: BigFloat,
    bits: usize,
}

impl PreciseValue {
    fn new(raw: BigFloat, bits: usize) -> Self {
        PreciseValue { raw, bits }
    }

    pub fn big(&self) -> &BigFloat {
        &self.raw
    }

    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.raw)
    }

    /// `|a - b| / max(|a|, |b|)`, computed at extended precision.
    pub fn rel_diff(&self, other: &PreciseValue) -> f64 {
        let p = self.bits.max(other.bits);
        big_to_f64(&rel_diff_big(&self.raw, &other.raw, p))
    }

    pub fn rel_diff_f64(&self, v: f64) -> f64 {
        let other = BigFloat::from_f64(v, self.bits);
        big_to_f64(&rel_diff_big(&self.raw, &other, self.bits))
    }
}

fn big_to_f64(v: &BigFloat) -> f64 {
    if v.is_nan() {
        return f64::NAN;
    }
    if v.is_inf_pos() {
        return f64::INFINITY;
    }
    if v.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if v.is_zero() {
        return 0.0;
    }
    let Some((words, _, _, exp, _)) = v.as_raw_parts() else {
        return f64::NAN;
    };
    let nw = words.len();
    let mut frac = words[nw - 1] as f64 / 2f64.powi(64);
    if nw >= 2 {
        frac += words[nw - 2] as f64 / 2f64.powi(128);
    }
    let magnitude = frac * 2f64.powi(exp);
    if v.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

fn rel_diff_big(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    let diff = a.sub(b, p, RM).abs();
    let scale = a.abs().max(&b.abs());
    if scale.is_zero() {
        return BigFloat::from_f64(0.0, p);
    }
    diff.div(&scale, p, RM)
}

/// Exponent-based negligibility test: `term` cannot change `sum` at the
/// working precision plus a safety margin.
fn negligible(term: &BigFloat, sum: &BigFloat, p: usize) -> bool {
    if term.is_zero() {
        return true;
    }
    match (term.exponent(), sum.exponent()) {
        (Some(te), Some(se)) => (se as i64 - te as i64) > p as i64 + 32,
        _ => false,
    }
}

/// Outcome of one oracle evaluation.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub value: PreciseValue,
    /// Continued-fraction depth or total quadrature nodes spent.
    pub work: usize,
    /// Relative disagreement of the final self-validation pair.
    pub self_check: f64,
}

/// Reference value of `I_nu(x)/I_(nu-1)(x)` by backward evaluation of the
/// continued fraction, from a depth at which the zero-tail and bound-tail
/// results agree to `cf_tol`; also cross-checked between two depths.
pub fn oracle_ratio_i(nu: f64, x: f64, cfg: &PrecisionConfig) -> Result<OracleRun> {
    cfg.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "x must be positive and finite, got {x}"
        )));
    }
    if !(nu >= 0.0) {
        return Err(Error::domain(format!(
            "I-side oracle requires nu >= 0, got {nu}"
        )));
    }
    let p = cfg.bits();
    let bx = BigFloat::from_f64(x, p);
    let tol = BigFloat::from_f64(cfg.cf_tol, p);

    let descend = |depth: usize, tail: BigFloat| -> BigFloat {
        let mut r = tail;
        for k in (0..depth).rev() {
            let two_order = BigFloat::from_f64(2.0 * (nu + k as f64), p);
            let den = two_order.div(&bx, p, RM).add(&r, p, RM);
            r = den.reciprocal(p, RM);
        }
        r
    };
    // Upper tail estimate x/(lam + sqrt(lam^2 + x^2)) at the truncation order.
    let tail_upper = |depth: usize| -> BigFloat {
        let lam = BigFloat::from_f64(nu + depth as f64 - 0.5, p);
        let s = lam
            .mul(&lam, p, RM)
            .add(&bx.mul(&bx, p, RM), p, RM)
            .sqrt(p, RM);
        bx.div(&lam.add(&s, p, RM), p, RM)
    };

    let mut depth = 16usize;
    let mut previous: Option<BigFloat> = None;
    loop {
        let r_zero = descend(depth, BigFloat::from_f64(0.0, p));
        let r_tail = descend(depth, tail_upper(depth));
        let disagreement = rel_diff_big(&r_zero, &r_tail, p);
        let settled = match &previous {
            Some(prev) => rel_diff_big(prev, &r_tail, p) <= tol,
            None => false,
        };
        if disagreement <= tol && settled {
            let half = BigFloat::from_f64(0.5, p);
            let mid = r_zero.add(&r_tail, p, RM).mul(&half, p, RM);
            return Ok(OracleRun {
                value: PreciseValue::new(mid, p),
                work: depth,
                self_check: big_to_f64(&disagreement),
            });
        }
        previous = Some(r_tail);
        if depth >= cfg.max_terms {
            return Err(Error::Convergence {
                limit: cfg.max_terms,
                context: format!("continued-fraction oracle at nu = {nu}, x = {x}"),
            });
        }
        depth = (depth * 2).min(cfg.max_terms);
    }
}

/// Reference value of `K_(nu-1)(x)/K_nu(x)` as a quotient of two trapezoid
/// quadratures of the integral representation, self-validated by step
/// halving.
pub fn oracle_ratio_k(nu: f64, x: f64, cfg: &PrecisionConfig) -> Result<OracleRun> {
    cfg.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "x must be positive and finite, got {x}"
        )));
    }
    if !(nu.abs() <= 50.0) {
        return Err(Error::domain(format!(
            "K-side oracle is tuned for |nu| <= 50, got {nu}"
        )));
    }
    let p = cfg.bits();
    let mu_hi = nu.abs().max((nu - 1.0).abs());
    let cutoff = cfg
        .quad_cutoff
        .unwrap_or_else(|| quad_cutoff(x, mu_hi, cfg.digits));
    let t_star = (mu_hi / x).asinh();
    let tol = BigFloat::from_f64(cfg.cf_tol, p);

    // Trapezoid weight sums W = f(0)/2 + sum f(k h); the step factor cancels
    // in the ratio. Refinement adds the odd multiples of the halved step.
    let f0 = with_consts(|cc| BigFloat::from_f64(-x, p).exp(p, RM, cc));
    let half = BigFloat::from_f64(0.5, p);
    let mut num = f0.mul(&half, p, RM); // order nu - 1
    let mut den = num.clone(); // order nu

    let mut nodes_total = 0usize;
    let mut h = cfg.quad_step;
    let mut level = 0usize;
    let mut previous: Option<BigFloat> = None;
    loop {
        // Level 0 visits every multiple of h; deeper levels only the odd ones.
        let stride = if level == 0 { 1 } else { 2 };
        let start = 1usize;
        let mut k = start;
        let (step_t, first_t) = (stride as f64 * h, start as f64 * h);
        let (mut et, mut evt, e_step, ev_step) = with_consts(|cc| {
            (
                BigFloat::from_f64(first_t, p).exp(p, RM, cc),
                BigFloat::from_f64(nu * first_t, p).exp(p, RM, cc),
                BigFloat::from_f64(step_t, p).exp(p, RM, cc),
                BigFloat::from_f64(nu * step_t, p).exp(p, RM, cc),
            )
        });
        loop {
            let t = k as f64 * h;
            if t > cutoff {
                break;
            }
            // cosh t and the exponential weight.
            let inv_et = et.reciprocal(p, RM);
            let cosh_t = et.add(&inv_et, p, RM).mul(&half, p, RM);
            let arg = BigFloat::from_f64(-x, p).mul(&cosh_t, p, RM);
            let w = with_consts(|cc| arg.exp(p, RM, cc));
            // cosh(nu t) and cosh((nu-1) t) share the exponential chain.
            let inv_evt = evt.reciprocal(p, RM);
            let cosh_nu = evt.add(&inv_evt, p, RM).mul(&half, p, RM);
            let em1 = evt.div(&et, p, RM);
            let cosh_nu1 = em1.add(&em1.reciprocal(p, RM), p, RM).mul(&half, p, RM);

            let term_num = w.mul(&cosh_nu1, p, RM);
            let term_den = w.mul(&cosh_nu, p, RM);
            num = num.add(&term_num, p, RM);
            den = den.add(&term_den, p, RM);
            nodes_total += 1;

            if t > t_star && negligible(&term_num, &num, p) && negligible(&term_den, &den, p) {
                break;
            }
            if nodes_total > cfg.max_terms {
                return Err(Error::Accuracy(format!(
                    "quadrature node budget {} exhausted at nu = {nu}, x = {x}",
                    cfg.max_terms
                )));
            }
            et = et.mul(&e_step, p, RM);
            evt = evt.mul(&ev_step, p, RM);
            k += stride;
        }

        let ratio = num.div(&den, p, RM);
        if let Some(prev) = &previous {
            let agreement = rel_diff_big(prev, &ratio, p);
            if agreement <= tol {
                return Ok(OracleRun {
                    value: PreciseValue::new(ratio, p),
                    work: nodes_total,
                    self_check: big_to_f64(&agreement),
                });
            }
        }
        previous = Some(ratio);
        h *= 0.5;
        level += 1;
        if level > 40 {
            return Err(Error::Accuracy(format!(
                "step-halving did not settle at nu = {nu}, x = {x}"
            )));
        }
    }
}

/// Cutoff `T` with `x cosh T - mu T` at least `digits` orders beyond the
/// integrand maximum.
fn quad_cutoff(x: f64, mu: f64, digits: u32) -> f64 {
    let target = (digits as f64 + 12.0) * std::f64::consts::LN_10 + 25.0;
    let t_star = (mu / x).asinh();
    let m_star = x * t_star.cosh() - mu * t_star;
    let rhs = m_star + target;
    let mut t = t_star + 5.0;
    for _ in 0..64 {
        let arg = ((rhs + mu * t) / x).max(1.0 + 1e-12);
        let next = arg.acosh().max(t_star + 0.5);
        if (next - t).abs() < 1e-9 {
            t = next;
            break;
        }
        t = next;
    }
    t + 0.5
}

/// Power-series route for the I-side ratio:
/// `I_nu/I_(nu-1) = (x/2)/nu * S(nu)/S(nu-1)` with
/// `S(mu) = sum_k (x^2/4)^k / (k! (mu+1)...(mu+k))`.
///
/// Independent of the continued fraction; used to cross-check the oracle.
pub fn series_ratio_i(nu: f64, x: f64, cfg: &PrecisionConfig) -> Result<PreciseValue> {
    cfg.validate()?;
    if !(nu > 0.0) {
        return Err(Error::domain(format!(
            "series route requires nu > 0, got {nu}"
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "x must be positive and finite, got {x}"
        )));
    }
    let p = cfg.bits();
    let q = BigFloat::from_f64(x, p).mul(&BigFloat::from_f64(0.25 * x, p), p, RM);

    let series = |mu: f64| -> Result<BigFloat> {
        let mut term = BigFloat::from_f64(1.0, p);
        let mut sum = term.clone();
        for k in 0..100_000usize {
            let denom = BigFloat::from_f64((k + 1) as f64 * (mu + (k + 1) as f64), p);
            term = term.mul(&q, p, RM).div(&denom, p, RM);
            sum = sum.add(&term, p, RM);
            if negligible(&term, &sum, p) {
                return Ok(sum);
            }
        }
        Err(Error::Convergence {
            limit: 100_000,
            context: format!("power series at mu = {mu}"),
        })
    };

    let s_hi = series(nu)?;
    let s_lo = series(nu - 1.0)?;
    let prefactor = BigFloat::from_f64(x, p).div(&BigFloat::from_f64(2.0 * nu, p), p, RM);
    let value = prefactor.mul(&s_hi.div(&s_lo, p, RM), p, RM);
    Ok(PreciseValue::new(value, p))
}

/// Relative gap of the recurrence bracket sequence seeded with the root pair
/// `[b_1, b_0]` at order `nu + depth` and mapped down to `nu`, computed at
/// extended precision.
///
/// The f64 bracket collapses below one ulp within a few refinements at small
/// `x`, so gap-recursion measurements go through this route.
pub fn root_bracket_gap_precise(
    nu: f64,
    x: f64,
    depth: usize,
    cfg: &PrecisionConfig,
) -> Result<f64> {
    cfg.validate()?;
    if !(x > 0.0) || !(nu >= 0.0) {
        return Err(Error::domain(format!(
            "bracket gaps need nu >= 0 and x > 0, got nu = {nu}, x = {x}"
        )));
    }
    let p = cfg.bits();
    let bx = BigFloat::from_f64(x, p);
    let seed = |shift: f64| -> BigFloat {
        let lam = BigFloat::from_f64(nu + depth as f64 + shift, p);
        let s = lam
            .mul(&lam, p, RM)
            .add(&bx.mul(&bx, p, RM), p, RM)
            .sqrt(p, RM);
        bx.div(&lam.add(&s, p, RM), p, RM)
    };
    // b_1 has lambda = order, b_0 has lambda = order - 1/2.
    let mut lo = seed(0.0);
    let mut hi = seed(-0.5);
    for k in (0..depth).rev() {
        let two_order_over_x = BigFloat::from_f64(2.0 * (nu + k as f64), p).div(&bx, p, RM);
        let new_lo = two_order_over_x.add(&hi, p, RM).reciprocal(p, RM);
        let new_hi = two_order_over_x.add(&lo, p, RM).reciprocal(p, RM);
        lo = new_lo;
        hi = new_hi;
    }
    let one = BigFloat::from_f64(1.0, p);
    Ok(big_to_f64(&hi.div(&lo, p, RM).sub(&one, p, RM)))
}

/// All consecutive log-grid pairs on which `f - g` changes sign. An empty
/// result means no crossing was detected at this resolution, not that none
/// exists.
pub fn crossing_search<F, G>(f: F, g: G, x_lo: f64, x_hi: f64, n: usize) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64>,
    G: Fn(f64) -> Result<f64>,
{
    if !(x_lo > 0.0) || !(x_hi > x_lo) {
        return Err(Error::domain(format!(
            "need 0 < x_lo < x_hi, got [{x_lo}, {x_hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::domain(
            "crossing search needs at least 2 grid points",
        ));
    }
    let grid = crate::log_spaced(x_lo, x_hi, n);
    let mut brackets = Vec::new();
    // Exact zeros are touch points, not crossings; carry the last nonzero
    // sign across them.
    let mut prev: Option<(f64, f64)> = None;
    for &x in &grid {
        let d = f(x)? - g(x)?;
        if !d.is_finite() {
            return Err(Error::Evaluation {
                x,
                context: "crossing search".into(),
            });
        }
        if d == 0.0 {
            continue;
        }
        if let Some((px, pd)) = prev {
            if (pd < 0.0) != (d < 0.0) {
                brackets.push((px, x));
            }
        }
        prev = Some((x, d));
    }
    Ok(brackets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn i_oracle_reference_values() {
        let run = oracle_ratio_i(1.0, 1.0, &cfg()).unwrap();
        assert!(run.value.rel_diff_f64(0.446_389_965_896_534_5) < 1e-15);
        assert!(run.self_check <= 1e-45);

        // Half order reduces to tanh.
        let run = oracle_ratio_i(0.5, 1.0, &cfg()).unwrap();
        assert!(run.value.rel_diff_f64(0.761_594_155_955_764_9) < 1e-15);

        // Maclaurin regime: x/(2 nu) to leading order.
        let run = oracle_ratio_i(1.0, 1e-8, &cfg()).unwrap();
        assert!(run.value.rel_diff_f64(5.0e-9) < 1e-15);
    }

    #[test]
    fn k_oracle_reference_values() {
        let run = oracle_ratio_k(1.0, 1.0, &cfg()).unwrap();
        assert!(run.value.rel_diff_f64(0.699_483_935_593_772_3) < 1e-15);
        assert!(run.self_check <= 1e-45);

        // K_(-1/2) = K_(1/2) forces the ratio to 1.
        let run = oracle_ratio_k(0.5, 3.0, &cfg()).unwrap();
        assert!(run.value.rel_diff_f64(1.0) < 1e-40);

        // Sandwiched by the root pair at a large argument.
        let run = oracle_ratio_k(1.0, 50.0, &cfg()).unwrap();
        let v = run.value.to_f64();
        let d0 = crate::bounds_k::d_alpha(1.0, 0.0, 50.0).unwrap();
        assert!(d0 < v && v < 1.0);
    }

    #[test]
    fn k_oracle_handles_negative_and_large_orders() {
        let run = oracle_ratio_k(-2.0, 1.0, &cfg()).unwrap();
        assert!(run.value.rel_diff_f64(4.370_441_174_631_418) < 1e-13);
        let run = oracle_ratio_k(50.0, 1.0, &cfg()).unwrap();
        assert!(run.value.to_f64().is_finite());
        assert!(oracle_ratio_k(50.5, 1.0, &cfg()).is_err());
    }

    #[test]
    fn series_and_cf_routes_agree() {
        let c = cfg();
        for (nu, x) in [(0.5, 0.5), (1.0, 1.0), (2.0, 2.0)] {
            let cf = oracle_ratio_i(nu, x, &c).unwrap();
            let series = series_ratio_i(nu, x, &c).unwrap();
            assert!(
                cf.value.rel_diff(&series) < 1e-30,
                "routes differ at ({nu}, {x})"
            );
        }
    }

    #[test]
    fn digits_floor_is_enforced() {
        let mut c = PrecisionConfig::with_digits(19);
        assert!(oracle_ratio_i(1.0, 1.0, &c).is_err());
        c.digits = 25;
        assert!(oracle_ratio_i(1.0, 1.0, &c).is_ok());
    }

    #[test]
    fn doubling_digits_is_consistent() {
        let c50 = PrecisionConfig::with_digits(50);
        let c100 = PrecisionConfig::with_digits(100);
        let a = oracle_ratio_i(2.0, 3.0, &c50).unwrap();
        let b = oracle_ratio_i(2.0, 3.0, &c100).unwrap();
        assert!(a.value.rel_diff(&b.value) < 1e-42);
        let ka = oracle_ratio_k(2.0, 3.0, &c50).unwrap();
        let kb = oracle_ratio_k(2.0, 3.0, &c100).unwrap();
        assert!(ka.value.rel_diff(&kb.value) < 1e-42);
    }

    #[test]
    fn crossing_search_contracts() {
        // Identical functions never cross.
        let none = crossing_search(Ok, Ok, 0.01, 100.0, 50).unwrap();
        assert!(none.is_empty());
        // x - 1 crosses zero once on a log grid.
        let one = crossing_search(Ok, |_| Ok(1.0), 0.01, 100.0, 201).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].0 <= 1.0 && 1.0 <= one[0].1);
        assert!(crossing_search(Ok, |_| Ok(1.0), 0.0, 1.0, 10).is_err());
        assert!(crossing_search(Ok, |_| Ok(1.0), 1.0, 2.0, 1).is_err());
        assert!(matches!(
            crossing_search(|_| Ok(f64::NAN), |_| Ok(1.0), 1.0, 2.0, 4),
            Err(Error::Evaluation { .. })
        ));
    }
}
