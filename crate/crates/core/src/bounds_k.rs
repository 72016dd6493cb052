//! Closed-form bound families for `K_(nu-1)(x)/K_nu(x)`.
//!
//! Two families: the characteristic-root family `d_alpha` and the
//! once-iterated family `D_alpha`. The reflection `K_mu = K_(-mu)` links the
//! two tails of the `d` family; see [`reflect_k`].

use std::fmt;

use crate::bound::{BoundValue, Enclosure, Side, Validity};
use crate::bounds_i::{ensure_positive_x, format_alpha, shifted_ratio};
use crate::error::{Error, Result};

/// Bound family selector for the K-side ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KFamily {
    /// Characteristic-root family `d_alpha`.
    Root,
    /// Once-iterated family `D_alpha`.
    Iterated,
}

impl fmt::Display for KFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KFamily::Root => write!(f, "d"),
            KFamily::Iterated => write!(f, "D"),
        }
    }
}

/// A fully specified K-side bound request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KBoundSpec {
    pub family: KFamily,
    pub alpha: f64,
    pub side: Side,
}

impl KBoundSpec {
    pub fn new(family: KFamily, alpha: f64, side: Side) -> Self {
        KBoundSpec {
            family,
            alpha,
            side,
        }
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.family, format_alpha(self.alpha))
    }
}

/// `d_alpha(nu, x) = x/(tau + sqrt(tau^2 + x^2))`, `tau = nu - (alpha+1)/2`.
/// Strictly increasing in `alpha`.
pub fn d_alpha(nu: f64, alpha: f64, x: f64) -> Result<f64> {
    ensure_positive_x(x)?;
    let tau = nu - 0.5 * (alpha + 1.0);
    Ok(shifted_ratio(tau, tau, x))
}

/// `D_alpha(nu, x) = x/(phi + sqrt(phi^2 + x^2))` with
/// `phi = (nu - 1/2) - tau/(2 sqrt(tau^2 + x^2))`.
/// Strictly decreasing in `alpha`.
pub fn big_d_alpha(nu: f64, alpha: f64, x: f64) -> Result<f64> {
    ensure_positive_x(x)?;
    let tau = nu - 0.5 * (alpha + 1.0);
    let phi = (nu - 0.5) - tau / (2.0 * tau.hypot(x));
    Ok(shifted_ratio(phi, phi, x))
}

/// Validity table for the K side.
pub fn validity_k(spec: &KBoundSpec, nu: f64) -> Validity {
    let KBoundSpec {
        family,
        alpha,
        side,
    } = *spec;
    match (family, side) {
        (KFamily::Root, Side::Upper) => {
            if alpha >= 1.0 {
                Validity::valid("alpha >= 1 for all real nu")
            } else {
                Validity::invalid("upper bounds require alpha >= 1")
            }
        }
        (KFamily::Root, Side::Lower) => {
            if alpha > 0.0 {
                Validity::invalid("lower bounds require alpha <= 0")
            } else if alpha <= -1.0 {
                Validity::valid("alpha <= -1 for all real nu")
            } else if nu >= 0.5 {
                Validity::valid("alpha <= 0 and nu >= 1/2")
            } else {
                Validity::invalid("nu >= 1/2")
            }
        }
        (KFamily::Iterated, Side::Upper) => {
            if alpha > 0.0 {
                Validity::invalid("upper bounds require alpha <= 0")
            } else if nu >= 0.5 {
                Validity::valid("alpha <= 0 and nu >= 1/2")
            } else {
                Validity::invalid("nu >= 1/2")
            }
        }
        (KFamily::Iterated, Side::Lower) => {
            if nu < 0.5 {
                Validity::invalid("nu >= 1/2")
            } else if alpha >= 2.0 * nu - 1.0 {
                Validity::valid("alpha >= 2nu - 1 and nu >= 1/2")
            } else {
                Validity::invalid("lower bounds require alpha >= 2nu - 1")
            }
        }
    }
}

/// Turns a valid upper bound for `K_(-nu)(x)/K_(1-nu)(x)` into a lower bound
/// for `K_(nu-1)(x)/K_nu(x)` via `K_mu = K_(-mu)`.
pub fn reflect_k(_nu: f64, x: f64, upper_of_reflected: f64) -> Result<f64> {
    ensure_positive_x(x)?;
    if !(upper_of_reflected > 0.0) || !upper_of_reflected.is_finite() {
        return Err(Error::domain(format!(
            "reflected upper bound must be positive, got {upper_of_reflected}"
        )));
    }
    Ok(1.0 / upper_of_reflected)
}

fn make_bound(spec: KBoundSpec, nu: f64, x: f64, value: f64) -> BoundValue<KBoundSpec> {
    BoundValue {
        value,
        validity: validity_k(&spec, nu),
        label: spec.label(),
        spec,
        nu,
        x,
    }
}

fn best_of(
    candidates: &[(KFamily, f64)],
    side: Side,
    nu: f64,
    x: f64,
) -> Result<BoundValue<KBoundSpec>> {
    let mut best: Option<BoundValue<KBoundSpec>> = None;
    for &(family, alpha) in candidates {
        let spec = KBoundSpec::new(family, alpha, side);
        if !validity_k(&spec, nu).valid {
            continue;
        }
        let value = match family {
            KFamily::Root => d_alpha(nu, alpha, x)?,
            KFamily::Iterated => big_d_alpha(nu, alpha, x)?,
        };
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
/// * level 0: sharpest valid `d` pair (`d_0` lower for `nu >= 1/2`, else
///   `d_(-1)`; `d_1` upper);
/// * level 1: `d_0` lower and `D_0` upper for `nu >= 1/2`; falls back to
///   level 0 below that.
pub fn enclosure_k(nu: f64, x: f64, level: u8) -> Result<Enclosure<KBoundSpec>> {
    ensure_positive_x(x)?;
    match level {
        0 => Ok(Enclosure {
            lower: best_of(
                &[(KFamily::Root, 0.0), (KFamily::Root, -1.0)],
                Side::Lower,
                nu,
                x,
            )?,
            upper: best_of(&[(KFamily::Root, 1.0)], Side::Upper, nu, x)?,
        }),
        1 => {
            if nu < 0.5 {
                return enclosure_k(nu, x, 0);
            }
            Ok(Enclosure {
                lower: best_of(
                    &[(KFamily::Root, 0.0), (KFamily::Root, -1.0)],
                    Side::Lower,
                    nu,
                    x,
                )?,
                upper: best_of(
                    &[(KFamily::Root, 1.0), (KFamily::Iterated, 0.0)],
                    Side::Upper,
                    nu,
                    x,
                )?,
            })
        }
        _ => Err(Error::domain(format!(
            "enclosure level must be 0 or 1, got {level}"
        ))),
    }
}
