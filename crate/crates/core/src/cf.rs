//! Recurrence and continued-fraction machinery for the I-side ratio.
//!
//! The three-term recurrence (DLMF 10.29.1) rewrites the ratio as
//! `I_nu/I_(nu-1) = 1/(2 nu/x + I_(nu+1)/I_nu)`, an antitone map in the tail
//! term. Feeding a bound pair for the tail through the map produces a bound
//! pair one order lower with the sides swapped; iterating yields convergent
//! bracket sequences, and substituting sharper tail estimates at the
//! truncation order shortens the descent.

use crate::bound::{BoundValue, Enclosure, Side, Validity};
use crate::bounds_i::{self, IBoundSpec, IFamily};
use crate::error::{Error, Result};

/// Hard cap on the truncation depth of ratio evaluation.
pub const DEFAULT_MAX_DEPTH: usize = 10_000;

/// Tail estimate supplied at the truncation order of a descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailPolicy {
    /// Zero-tail approximants: bracket `[0, x/(2 order)]`.
    Zero,
    /// Root-family pair `[b_1, b_0]` at the truncation order.
    RootPair,
    /// Iterated-family pair `[B_2, B_0]` at the truncation order.
    IteratedPair,
}

impl std::fmt::Display for TailPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TailPolicy::Zero => write!(f, "zero"),
            TailPolicy::RootPair => write!(f, "b"),
            TailPolicy::IteratedPair => write!(f, "B"),
        }
    }
}

/// Result of a tail-bracketed continued-fraction evaluation.
#[derive(Debug, Clone)]
pub struct CfRun {
    /// Midpoint of the final bracket.
    pub value: f64,
    /// Truncation depth that met the tolerance.
    pub iterations: usize,
    /// Final bracket at the query order.
    pub bracket: (f64, f64),
    /// Brackets along the final descent, from the truncation order down to
    /// the query order. Relative widths are non-increasing along this list.
    pub history: Vec<(f64, f64)>,
}

/// One application of the recurrence map `t -> 1/(2 nu/x + t)`.
///
/// Antitone in `t`: feeding an upper bound for the order-`nu+1` ratio yields
/// a lower bound for the order-`nu` ratio, and vice versa.
pub fn cf_map_i(nu: f64, x: f64, t: f64) -> Result<f64> {
    bounds_i::ensure_positive_x(x)?;
    let den = 2.0 * nu / x + t;
    if !(den > 0.0) {
        return Err(Error::domain(format!(
            "recurrence map needs 2nu/x + t > 0, got {den} at nu = {nu}"
        )));
    }
    Ok(1.0 / den)
}

/// K-side recurrence map `t -> 1/(2(nu-1)/x + t)` taking an estimate for
/// `K_(nu-2)/K_(nu-1)` to one for `K_(nu-1)/K_nu`.
///
/// Exposed for experimentation only: iterating it shrinks the validity range
/// in the order, so nothing in this crate certifies its output as a bound.
pub fn cf_map_k(nu: f64, x: f64, t: f64) -> Result<f64> {
    bounds_i::ensure_positive_x(x)?;
    let den = 2.0 * (nu - 1.0) / x + t;
    if !(den > 0.0) {
        return Err(Error::domain(format!(
            "recurrence map needs 2(nu-1)/x + t > 0, got {den} at nu = {nu}"
        )));
    }
    Ok(1.0 / den)
}

/// Zero-tail approximant `H^(depth)` of the continued fraction:
/// `H^(i+1)_nu = 1/(2nu/x + H^(i)_(nu+1))`, `H^(0) = 0`.
///
/// Odd depths are upper bounds for the ratio, even depths lower bounds.
pub fn cf_approximant(nu: f64, x: f64, depth: usize) -> Result<f64> {
    bounds_i::ensure_positive_x(x)?;
    if depth == 0 {
        return Err(Error::domain("approximant depth must be at least 1"));
    }
    let mut t = 0.0;
    for k in (0..depth).rev() {
        t = cf_map_i(nu + k as f64, x, t)?;
    }
    Ok(t)
}

/// Leading-order model of the relative gap `H^(2i-1)/H^(2i) - 1` between
/// consecutive odd/even approximants for large `x`.
pub fn approximant_gap_model(nu: f64, x: f64, i: usize) -> f64 {
    let two_i = (2 * i) as f64;
    x * x / (two_i * two_i * (nu + i as f64) * (nu + i as f64 - 1.0))
}

fn seed_pair(policy: TailPolicy, order: f64, x: f64) -> Result<(f64, f64)> {
    match policy {
        TailPolicy::Zero => Ok((0.0, x / (2.0 * order))),
        TailPolicy::RootPair => Ok((
            bounds_i::b_alpha(order, 1.0, x)?,
            bounds_i::b_alpha(order, 0.0, x)?,
        )),
        TailPolicy::IteratedPair => Ok((
            bounds_i::big_b_alpha(order, 2.0, x)?,
            bounds_i::big_b_alpha(order, 0.0, x)?,
        )),
    }
}

/// Raw map with IEEE semantics for internal descents: a zero denominator
/// produces an infinite bracket end, which later steps absorb.
fn raw_map(nu: f64, x: f64, t: f64) -> f64 {
    1.0 / (2.0 * nu / x + t)
}

fn descend(
    nu: f64,
    x: f64,
    depth: usize,
    policy: TailPolicy,
    mut record: Option<&mut Vec<(f64, f64)>>,
) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = seed_pair(policy, nu + depth as f64, x)?;
    if let Some(h) = record.as_deref_mut() {
        h.push((lo, hi));
    }
    for k in (0..depth).rev() {
        let order = nu + k as f64;
        let new_lo = raw_map(order, x, hi);
        let new_hi = raw_map(order, x, lo);
        lo = new_lo;
        hi = new_hi;
        if let Some(h) = record.as_deref_mut() {
            h.push((lo, hi));
        }
    }
    Ok((lo, hi))
}

fn bracket_gap((lo, hi): (f64, f64)) -> f64 {
    if lo > 0.0 {
        hi / lo - 1.0
    } else {
        f64::INFINITY
    }
}

/// Gap used by the stop criterion, floored at machine epsilon: the descent
/// rounds, so a width below one ulp is never certified even when both ends
/// land on the same float.
fn certified_gap(bracket: (f64, f64)) -> f64 {
    bracket_gap(bracket).max(f64::EPSILON)
}

/// Sequence of bracket enclosures from iterating the recurrence map on a
/// seed enclosure at order `nu + depth`.
///
/// `seed_level` selects the starting pair: 0 for the root family, 1 for the
/// iterated/mapped level. The relative gap is non-increasing in `depth` at
/// fixed `(nu, x)`.
pub fn iterate_enclosure_i(
    nu: f64,
    x: f64,
    depth: usize,
    seed_level: u8,
) -> Result<Enclosure<IBoundSpec>> {
    bounds_i::ensure_positive_x(x)?;
    if !(nu >= 0.0) {
        return Err(Error::Validity(format!(
            "bracket iteration requires nu >= 0, got {nu}"
        )));
    }
    let seed = bounds_i::enclosure_i(nu + depth as f64, x, seed_level)?;
    if depth == 0 {
        return Ok(seed);
    }
    let (mut lo, mut hi) = (seed.lower.value, seed.upper.value);
    for k in (0..depth).rev() {
        let order = nu + k as f64;
        let new_lo = cf_map_i(order, x, hi)?;
        let new_hi = cf_map_i(order, x, lo)?;
        lo = new_lo;
        hi = new_hi;
    }
    let label = |side_label: &str| format!("cf{depth}({side_label})");
    Ok(Enclosure {
        lower: BoundValue {
            value: lo,
            spec: IBoundSpec::new(IFamily::Cf1, 0.0, Side::Lower),
            validity: Validity::valid("recurrence-mapped valid enclosure"),
            nu,
            x,
            label: label(&seed.upper.label),
        },
        upper: BoundValue {
            value: hi,
            spec: IBoundSpec::new(IFamily::Cf1, 0.0, Side::Upper),
            validity: Validity::valid("recurrence-mapped valid enclosure"),
            nu,
            x,
            label: label(&seed.lower.label),
        },
    })
}

/// Evaluates the ratio by descending the continued fraction with the
/// policy's bound pair as tail bracket, deepening until the bracket's
/// relative width reaches `tol`.
pub fn evaluate_ratio_i(nu: f64, x: f64, tol: f64, policy: TailPolicy) -> Result<CfRun> {
    evaluate_ratio_i_with_limit(nu, x, tol, policy, DEFAULT_MAX_DEPTH)
}

/// [`evaluate_ratio_i`] with an explicit depth cap.
pub fn evaluate_ratio_i_with_limit(
    nu: f64,
    x: f64,
    tol: f64,
    policy: TailPolicy,
    max_depth: usize,
) -> Result<CfRun> {
    bounds_i::ensure_positive_x(x)?;
    if !(nu >= 0.0) {
        return Err(Error::Validity(format!(
            "ratio evaluation requires nu >= 0, got {nu}"
        )));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let gap_at = |m: usize| -> Result<f64> { Ok(certified_gap(descend(nu, x, m, policy, None)?)) };

    // Exponential probe for a passing depth, then bisect to the smallest one.
    let mut lo_fail = 0usize;
    let mut hi_pass = None;
    let mut m = 1usize;
    loop {
        if m > max_depth {
            if gap_at(max_depth)? <= tol {
                hi_pass = Some(max_depth);
            }
            break;
        }
        if gap_at(m)? <= tol {
            hi_pass = Some(m);
            break;
        }
        lo_fail = m;
        m *= 2;
    }
    let mut hi = match hi_pass {
        Some(h) => h,
        None => {
            return Err(Error::Convergence {
                limit: max_depth,
                context: format!("bracket width above {tol:e} for policy {policy}"),
            })
        }
    };
    let mut lo = lo_fail;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if gap_at(mid)? <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let mut history = Vec::with_capacity(hi + 1);
    let bracket = descend(nu, x, hi, policy, Some(&mut history))?;
    Ok(CfRun {
        value: 0.5 * (bracket.0 + bracket.1),
        iterations: hi,
        bracket,
        history,
    })
}

/// Which gap model family a sharpness query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapModelKind {
    /// Gaps of the root pair `[b_1, b_0]`.
    RootPair,
    /// Gaps of the iterated pair `[B_2, B_0]`.
    IteratedPair,
}

/// Asymptotic regime of a sharpness model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticLimit {
    SmallX,
    LargeNu,
    LargeX,
}

/// Leading-order model of the relative enclosure gap `upper/lower - 1` in
/// the given limit, after `depth` recurrence refinements.
///
/// The large-`x` models are depth-independent: recurrence iteration does not
/// improve the order of approximation there.
pub fn sharpness_model(
    kind: GapModelKind,
    limit: AsymptoticLimit,
    nu: f64,
    x: f64,
    depth: usize,
) -> f64 {
    let i = depth as i32;
    match (kind, limit) {
        (GapModelKind::RootPair, AsymptoticLimit::LargeX) => 1.0 / (2.0 * x),
        (GapModelKind::IteratedPair, AsymptoticLimit::LargeX) => 1.0 / (2.0 * x * x),
        (GapModelKind::RootPair, AsymptoticLimit::SmallX) if depth == 0 => 1.0 / (2.0 * nu - 1.0),
        (GapModelKind::RootPair, AsymptoticLimit::LargeNu) if depth == 0 => 1.0 / (2.0 * nu),
        (GapModelKind::RootPair, _) => (1.0 / (2.0 * nu)) * (x / (2.0 * nu)).powi(2 * i),
        (GapModelKind::IteratedPair, AsymptoticLimit::SmallX) if depth == 0 => {
            8.0 * x * x / ((4.0 * nu * nu - 1.0) * (4.0 * nu * nu - 1.0))
        }
        (GapModelKind::IteratedPair, AsymptoticLimit::LargeNu) if depth == 0 => {
            x * x / (2.0 * nu * nu * nu * nu)
        }
        (GapModelKind::IteratedPair, _) => {
            (1.0 / (2.0 * nu * nu)) * (x / (2.0 * nu)).powi(2 * i + 2)
        }
    }
}

/// One-step contraction factor `x^2/(4 nu^2)` of the gap recursion
/// `gap_nu(depth+1) ~ factor * gap_(nu+1)(depth)` for small `x` or large `nu`.
pub fn gap_recursion_factor(nu: f64, x: f64) -> f64 {
    x * x / (4.0 * nu * nu)
}

/// Bracket from the fixed family pair (`[b_1, b_0]` or `[B_2, B_0]`) seeded
/// at order `nu + depth` and mapped down to `nu`.
///
/// Unlike [`iterate_enclosure_i`], this never swaps in a sharper family; the
/// asymptotic gap models describe exactly these pairs.
pub fn iterate_pair_bracket(
    kind: GapModelKind,
    nu: f64,
    x: f64,
    depth: usize,
) -> Result<(f64, f64)> {
    bounds_i::ensure_positive_x(x)?;
    if !(nu >= 0.0) {
        return Err(Error::Validity(format!(
            "pair brackets require nu >= 0, got {nu}"
        )));
    }
    let order = nu + depth as f64;
    let (mut lo, mut hi) = match kind {
        GapModelKind::RootPair => (
            bounds_i::b_alpha(order, 1.0, x)?,
            bounds_i::b_alpha(order, 0.0, x)?,
        ),
        GapModelKind::IteratedPair => (
            bounds_i::big_b_alpha(order, 2.0, x)?,
            bounds_i::big_b_alpha(order, 0.0, x)?,
        ),
    };
    for k in (0..depth).rev() {
        let ord = nu + k as f64;
        let new_lo = cf_map_i(ord, x, hi)?;
        let new_hi = cf_map_i(ord, x, lo)?;
        lo = new_lo;
        hi = new_hi;
    }
    Ok((lo, hi))
}
