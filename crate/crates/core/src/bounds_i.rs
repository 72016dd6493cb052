//! Closed-form bound families for `I_nu(x)/I_(nu-1)(x)`.
//!
//! Four families are provided, all of the shape `x/(a + sqrt(b^2 + x^2))`:
//!
//! * `b_alpha`  — characteristic-root family, `a = b = nu + (alpha-1)/2`;
//! * `cf1`      — one recurrence step applied to the sharpest `b` pair;
//! * `B_alpha`  — first iteration of the root construction;
//! * `Btilde_alpha` — one recurrence step applied to `B_alpha` at order `nu+1`.
//!
//! Only the (family, alpha, side, nu) combinations in [`validity_i`] are
//! certified; everything else evaluates but is flagged invalid.

use std::fmt;

use crate::bound::{BoundValue, Enclosure, Side, Validity};
use crate::error::{Error, Result};

/// Bound family selector for the I-side ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IFamily {
    /// Characteristic-root family `b_alpha`.
    Root,
    /// Single recurrence refinement of the best root pair.
    Cf1,
    /// Once-iterated family `B_alpha`.
    Iterated,
    /// Recurrence-mapped iterated family `Btilde_alpha`.
    Mapped,
}

impl fmt::Display for IFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IFamily::Root => write!(f, "b"),
            IFamily::Cf1 => write!(f, "cf1"),
            IFamily::Iterated => write!(f, "B"),
            IFamily::Mapped => write!(f, "Btilde"),
        }
    }
}

/// A fully specified I-side bound request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IBoundSpec {
    pub family: IFamily,
    /// Ignored for `Cf1`.
    pub alpha: f64,
    pub side: Side,
}

impl IBoundSpec {
    pub fn new(family: IFamily, alpha: f64, side: Side) -> Self {
        IBoundSpec {
            family,
            alpha,
            side,
        }
    }

    /// Compact tag such as `b0`, `B2`, `Btilde0`, `cf1`.
    pub fn label(&self) -> String {
        if self.family == IFamily::Cf1 {
            return "cf1".into();
        }
        format!("{}{}", self.family, format_alpha(self.alpha))
    }
}

pub(crate) fn format_alpha(alpha: f64) -> String {
    if alpha == alpha.trunc() && alpha.abs() < 1e15 {
        format!("{}", alpha as i64)
    } else {
        format!("{alpha}")
    }
}

pub(crate) fn ensure_positive_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "x must be positive and finite, got {x}"
        )));
    }
    Ok(())
}

/// `x / (a + sqrt(b^2 + x^2))` with the cancellation-safe rewrite
/// `x (sqrt(b^2+x^2) - a) / (b^2 - a^2 + x^2)` when `a < 0`.
pub(crate) fn shifted_ratio(a: f64, b: f64, x: f64) -> f64 {
    let s = b.hypot(x);
    if a >= 0.0 {
        x / (a + s)
    } else {
        let denom = (b - a) * (b + a) + x * x;
        if denom > 0.0 {
            x * (s - a) / denom
        } else {
            // Only reachable for uncertified parameter choices.
            x / (a + s)
        }
    }
}

/// `b_alpha(nu, x) = x/(lambda + sqrt(lambda^2 + x^2))`,
/// `lambda = nu + (alpha - 1)/2`. Strictly decreasing in `alpha`.
pub fn b_alpha(nu: f64, alpha: f64, x: f64) -> Result<f64> {
    ensure_positive_x(x)?;
    let lambda = nu + 0.5 * (alpha - 1.0);
    Ok(shifted_ratio(lambda, lambda, x))
}

/// `B_alpha(nu, x) = x/(delta + sqrt(delta^2 + x^2))` with
/// `delta = (nu - 1/2) + lambda/(2 sqrt(lambda^2 + x^2))`.
/// Strictly decreasing in `alpha`.
pub fn big_b_alpha(nu: f64, alpha: f64, x: f64) -> Result<f64> {
    ensure_positive_x(x)?;
    let lambda = nu + 0.5 * (alpha - 1.0);
    let delta = (nu - 0.5) + lambda / (2.0 * lambda.hypot(x));
    Ok(shifted_ratio(delta, delta, x))
}

/// `Btilde_alpha(nu, x) = x/(dm + sqrt(dp^2 + x^2))` with
/// `dm = (nu - 1/2) - sigma/(2 sqrt(sigma^2 + x^2))`,
/// `dp = (nu + 1/2) + sigma/(2 sqrt(sigma^2 + x^2))`,
/// `sigma = nu + (alpha + 1)/2`. Note the asymmetric placement of the
/// two shifts.
pub fn big_b_tilde_alpha(nu: f64, alpha: f64, x: f64) -> Result<f64> {
    ensure_positive_x(x)?;
    let sigma = nu + 0.5 * (alpha + 1.0);
    let half = sigma / (2.0 * sigma.hypot(x));
    let dm = (nu - 0.5) - half;
    let dp = (nu + 0.5) + half;
    Ok(shifted_ratio(dm, dp, x))
}

/// Validity table for the I side. Every verdict carries the proven
/// condition that grants it (or the one that fails).
pub fn validity_i(spec: &IBoundSpec, nu: f64) -> Validity {
    let IBoundSpec {
        family,
        alpha,
        side,
    } = *spec;
    match (family, side) {
        (IFamily::Root, Side::Upper) => {
            if alpha > 0.0 {
                Validity::invalid("upper bounds require alpha <= 0")
            } else if nu >= 0.5 {
                Validity::valid("alpha <= 0 and nu >= 1/2")
            } else if alpha <= -1.0 && nu >= 0.0 {
                Validity::valid("alpha <= -1 and nu >= 0")
            } else if alpha <= -1.0 {
                Validity::invalid("nu >= 0")
            } else {
                Validity::invalid("nu >= 1/2")
            }
        }
        (IFamily::Root, Side::Lower) => {
            if alpha < 1.0 {
                Validity::invalid("lower bounds require alpha >= 1")
            } else if nu >= 0.0 {
                Validity::valid("alpha >= 1 and nu >= 0")
            } else {
                Validity::invalid("nu >= 0")
            }
        }
        (IFamily::Iterated, Side::Upper) => {
            if alpha > 0.0 {
                Validity::invalid("upper bounds require alpha <= 0")
            } else if nu >= 0.5 {
                Validity::valid("alpha <= 0 and nu >= 1/2")
            } else {
                Validity::invalid("nu >= 1/2")
            }
        }
        (IFamily::Iterated, Side::Lower) => {
            if alpha < 2.0 {
                Validity::invalid("lower bounds require alpha >= 2")
            } else if nu >= 0.0 {
                Validity::valid("alpha >= 2 and nu >= 0")
            } else {
                Validity::invalid("nu >= 0")
            }
        }
        (IFamily::Mapped, Side::Lower) => {
            if alpha != 0.0 {
                Validity::invalid("only alpha = 0 is proven as a lower bound")
            } else if nu >= 0.0 {
                Validity::valid("alpha = 0 and nu >= 0")
            } else {
                Validity::invalid("nu >= 0")
            }
        }
        (IFamily::Mapped, Side::Upper) => {
            if alpha != 2.0 {
                Validity::invalid("only alpha = 2 is proven as an upper bound")
            } else if nu >= 0.0 {
                Validity::valid("alpha = 2 and nu >= 0")
            } else {
                Validity::invalid("nu >= 0")
            }
        }
        (IFamily::Cf1, _) => {
            if nu >= 0.0 {
                Validity::valid("nu >= 0")
            } else {
                Validity::invalid("nu >= 0")
            }
        }
    }
}

fn make_bound(spec: IBoundSpec, nu: f64, x: f64, value: f64) -> BoundValue<IBoundSpec> {
    BoundValue {
        value,
        validity: validity_i(&spec, nu),
        label: spec.label(),
        spec,
        nu,
        x,
    }
}

/// The pair obtained by one recurrence step from the sharpest root pair at
/// order `nu + 1`:
/// lower `x/(nu - 1/2 + sqrt((nu + 1/2)^2 + x^2))`,
/// upper `x/(nu - 1 + sqrt((nu + 1)^2 + x^2))`.
pub fn cf1_bounds(nu: f64, x: f64) -> Result<Enclosure<IBoundSpec>> {
    ensure_positive_x(x)?;
    if !(nu >= 0.0) {
        return Err(Error::Validity(format!(
            "cf1 bounds require nu >= 0, got {nu}"
        )));
    }
    let lower = shifted_ratio(nu - 0.5, nu + 0.5, x);
    let upper = shifted_ratio(nu - 1.0, nu + 1.0, x);
    Ok(Enclosure {
        lower: make_bound(
            IBoundSpec::new(IFamily::Cf1, 0.0, Side::Lower),
            nu,
            x,
            lower,
        ),
        upper: make_bound(
            IBoundSpec::new(IFamily::Cf1, 0.0, Side::Upper),
            nu,
            x,
            upper,
        ),
    })
}

fn evaluate(family: IFamily, nu: f64, alpha: f64, x: f64) -> Result<f64> {
    match family {
        IFamily::Root => b_alpha(nu, alpha, x),
        IFamily::Iterated => big_b_alpha(nu, alpha, x),
        IFamily::Mapped => big_b_tilde_alpha(nu, alpha, x),
        IFamily::Cf1 => Err(Error::domain("cf1 is a pair; use cf1_bounds")),
    }
}

fn best_of(
    candidates: &[(IFamily, f64)],
    side: Side,
    nu: f64,
    x: f64,
) -> Result<BoundValue<IBoundSpec>> {
    let mut best: Option<BoundValue<IBoundSpec>> = None;
    for &(family, alpha) in candidates {
        let spec = IBoundSpec::new(family, alpha, side);
        if !validity_i(&spec, nu).valid {
            continue;
        }
        let value = evaluate(family, nu, alpha, x)?;
        let keep = match (&best, side) {
            (None, _) => true,
            (Some(b), Side::Lower) => value > b.value,
            (Some(b), Side::Upper) => value < b.value,
        };
        if keep {
            best = Some(make_bound(spec, nu, x, value));
        }
    }
    best.ok_or_else(|| Error::Validity(format!("no valid {side} bound candidate at nu = {nu}")))
}

/// Best proven enclosure at the requested refinement level.
///
/// * level 0: sharpest valid root pair;
/// * level 1: sharpest valid pair among the iterated and mapped families;
/// * level 2: level 1 intersected with one recurrence step applied to the
///   level-1 enclosure at order `nu + 1`.
pub fn enclosure_i(nu: f64, x: f64, level: u8) -> Result<Enclosure<IBoundSpec>> {
    ensure_positive_x(x)?;
    if !(nu >= 0.0) {
        return Err(Error::Validity(format!(
            "enclosures require nu >= 0, got {nu}"
        )));
    }
    match level {
        0 => Ok(Enclosure {
            lower: best_of(&[(IFamily::Root, 1.0)], Side::Lower, nu, x)?,
            upper: best_of(
                &[(IFamily::Root, 0.0), (IFamily::Root, -1.0)],
                Side::Upper,
                nu,
                x,
            )?,
        }),
        1 => Ok(Enclosure {
            lower: best_of(
                &[(IFamily::Iterated, 2.0), (IFamily::Mapped, 0.0)],
                Side::Lower,
                nu,
                x,
            )?,
            upper: best_of(
                &[(IFamily::Iterated, 0.0), (IFamily::Mapped, 2.0)],
                Side::Upper,
                nu,
                x,
            )?,
        }),
        2 => {
            let base = enclosure_i(nu, x, 1)?;
            let shifted = enclosure_i(nu + 1.0, x, 1)?;
            let mapped_lower = crate::cf::cf_map_i(nu, x, shifted.upper.value)?;
            let mapped_upper = crate::cf::cf_map_i(nu, x, shifted.lower.value)?;

            let mut lower = base.lower;
            if mapped_lower > lower.value {
                lower = BoundValue {
                    value: mapped_lower,
                    spec: IBoundSpec::new(IFamily::Cf1, 0.0, Side::Lower),
                    validity: Validity::valid("recurrence step on a valid upper bound"),
                    nu,
                    x,
                    label: format!("cf1({})", shifted.upper.label),
                };
            }
            let mut upper = base.upper;
            if mapped_upper < upper.value {
                upper = BoundValue {
                    value: mapped_upper,
                    spec: IBoundSpec::new(IFamily::Cf1, 0.0, Side::Upper),
                    validity: Validity::valid("recurrence step on a valid lower bound"),
                    nu,
                    x,
                    label: format!("cf1({})", shifted.lower.label),
                };
            }
            Ok(Enclosure { lower, upper })
        }
        _ => Err(Error::domain(format!(
            "enclosure level must be 0, 1 or 2, got {level}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-14;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn root_family_reference_values() {
        assert!(close(
            b_alpha(1.0, 0.0, 1.0).unwrap(),
            0.618_033_988_749_894_8,
            TOL
        ));
        assert!(close(
            b_alpha(1.0, 1.0, 1.0).unwrap(),
            0.414_213_562_373_095_05,
            TOL
        ));
        assert!(close(b_alpha(1.0, -1.0, 1.0).unwrap(), 1.0, TOL));
        // lambda = 0 collapses to 1 for every x.
        for x in [1e-3, 1.0, 50.0] {
            assert_eq!(b_alpha(0.5, 0.0, x).unwrap(), 1.0);
        }
    }

    #[test]
    fn iterated_family_reference_values() {
        assert!(close(
            big_b_alpha(1.0, 0.0, 1.0).unwrap(),
            0.510_737_885_776_457_6,
            TOL
        ));
        assert!(close(
            big_b_alpha(1.0, 2.0, 1.0).unwrap(),
            0.440_109_827_767_513_06,
            TOL
        ));
        // B_(1-2nu) collapses to b_0 exactly.
        assert_eq!(
            big_b_alpha(1.0, -1.0, 1.0).unwrap(),
            b_alpha(1.0, 0.0, 1.0).unwrap()
        );
    }

    #[test]
    fn mapped_family_reference_values() {
        assert!(close(
            big_b_tilde_alpha(1.0, 0.0, 1.0).unwrap(),
            0.445_382_768_894_628_1,
            TOL
        ));
        assert!(close(
            big_b_tilde_alpha(1.0, 2.0, 1.0).unwrap(),
            0.446_448_211_354_949_4,
            TOL
        ));
        // Vanishing numerator as x -> 0+.
        assert!(big_b_tilde_alpha(1.0, 0.0, 1e-12).unwrap() < 1e-11);
    }

    #[test]
    fn cf1_reference_values() {
        let e = cf1_bounds(1.0, 1.0).unwrap();
        assert!(close(e.lower.value, 0.434_258_545_910_664_9, TOL));
        assert!(close(e.upper.value, 0.447_213_595_499_957_9, TOL));
        // Upper may exceed 1 near nu = 0.
        let e0 = cf1_bounds(0.0, 1.0).unwrap();
        assert!(close(e0.upper.value, 2.414_213_562_373_095, TOL));
        // Both ends vanish with x.
        let tiny = cf1_bounds(1.0, 1e-14).unwrap();
        assert!(tiny.lower.value < 1e-13 && tiny.upper.value < 1e-13);
        assert!(cf1_bounds(-0.5, 1.0).is_err());
    }

    #[test]
    fn validity_table_spot_checks() {
        let v = validity_i(&IBoundSpec::new(IFamily::Root, 0.0, Side::Upper), 0.3);
        assert!(!v.valid);
        assert_eq!(v.reason, "nu >= 1/2");
        assert!(validity_i(&IBoundSpec::new(IFamily::Root, -1.0, Side::Upper), 0.0).valid);
        assert!(validity_i(&IBoundSpec::new(IFamily::Iterated, 2.0, Side::Lower), 0.0).valid);
        assert!(!validity_i(&IBoundSpec::new(IFamily::Root, 0.5, Side::Upper), 2.0).valid);
        assert!(!validity_i(&IBoundSpec::new(IFamily::Mapped, 1.0, Side::Lower), 2.0).valid);
        assert!(!validity_i(&IBoundSpec::new(IFamily::Cf1, 0.0, Side::Lower), -0.1).valid);
    }

    #[test]
    fn enclosure_levels_at_reference_point() {
        let e0 = enclosure_i(1.0, 1.0, 0).unwrap();
        assert!(close(e0.lower.value, 0.414_213_562_373_095_05, TOL));
        assert!(close(e0.upper.value, 0.618_033_988_749_894_8, TOL));
        assert_eq!(e0.lower.label, "b1");
        assert_eq!(e0.upper.label, "b0");

        let e1 = enclosure_i(1.0, 1.0, 1).unwrap();
        assert!(close(e1.lower.value, 0.445_382_768_894_628_1, TOL));
        assert!(close(e1.upper.value, 0.446_448_211_354_949_4, TOL));
        assert_eq!(e1.lower.label, "Btilde0");
        assert_eq!(e1.upper.label, "Btilde2");

        let e2 = enclosure_i(1.0, 1.0, 2).unwrap();
        assert!(e2.lower.value >= e1.lower.value);
        assert!(e2.upper.value <= e1.upper.value);
        assert!(e2.lower.value <= e2.upper.value);
    }

    #[test]
    fn enclosure_below_half_excludes_restricted_uppers() {
        let e = enclosure_i(0.3, 1.0, 0).unwrap();
        assert_eq!(e.upper.label, "b-1");
        let e1 = enclosure_i(0.3, 1.0, 1).unwrap();
        assert_eq!(e1.upper.label, "Btilde2");
    }

    #[test]
    fn half_order_upper_saturates_at_one() {
        // At nu = 1/2 the ratio is tanh(x) and the level-0 upper is exactly 1.
        let e = enclosure_i(0.5, 3.0, 0).unwrap();
        assert_eq!(e.upper.value, 1.0);
        assert_eq!(e.upper.label, "b0");
        assert!(e.lower.value < 0.995_054_753_686_730_5);
    }

    #[test]
    fn domain_errors() {
        assert!(b_alpha(1.0, 0.0, 0.0).is_err());
        assert!(big_b_alpha(1.0, 0.0, -2.0).is_err());
        assert!(enclosure_i(-1.0, 1.0, 0).is_err());
        assert!(enclosure_i(1.0, 1.0, 3).is_err());
    }
}
