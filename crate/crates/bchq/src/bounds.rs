//! Closed-form constants for quasi-Banach Lie algebras: Aoki-Rolewicz data,
//! convergence radii of the exponential-coordinate group law, Lipschitz
//! constants, Neumann/resolvent radii, and the weak-Schatten specialization.
//!
//! All values are plain doubles; the defining formulas are algebraic, and a
//! documented 1e-12 identity tolerance covers the transcendental evaluation.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance for the floating-point identities tying the constants together
/// (for example c2 = 2^(1/p) = 2 * c_tri).
pub const IDENTITY_TOL: f64 = 1e-12;

/// The constant tuple of a quasi-Banach Lie algebra and its Aoki-Rolewicz
/// data.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantSet {
    /// Quasi-triangle constant, >= 1.
    pub c_tri: f64,
    /// Submultiplicativity constant of an ambient associative algebra, when
    /// one is given.
    pub c_mult: Option<f64>,
    /// Bracket continuity constant.
    pub c_bracket: f64,
    /// Aoki-Rolewicz exponent p = 1/log2(2 c_tri), in (0, 1].
    pub p: f64,
    /// Lower p-norm equivalence constant (always 1).
    pub c1: f64,
    /// Upper p-norm equivalence constant 2^(1/p) = 2 c_tri.
    pub c2: f64,
    /// Combined conservative constant c_tri * c_bracket.
    pub c_total: f64,
}

/// Radii derived from a [`ConstantSet`]; every field is a closed form.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusReport {
    /// Series convergence region: |x| + |y| < 1/(4 c_bracket).
    pub r_bch: f64,
    /// Conservative variant 1/(4 c_total).
    pub r_conservative: f64,
    /// Associative-embedding bound 1/(8 c_tri^2 c_mult), when c_mult is known.
    pub r_assoc: Option<f64>,
    /// Ball on which the group operation is defined: 1/(8 c_bracket).
    pub rho: f64,
    /// Ball carrying the Lipschitz constant 2: 1/(16 c_bracket).
    pub rho0: f64,
    /// Inverse-existence radius 1/(8 c_bracket (1 + 2 c_tri)^2).
    pub rho_inv: f64,
    /// Lipschitz constant of the group law on B(0, rho0).
    pub lipschitz_l0: f64,
}

/// Builds the full constant tuple from c_tri and at least one of c_mult,
/// c_bracket. When c_bracket is absent it is set to 2 c_tri c_mult (the
/// commutator bound in an ambient associative algebra).
pub fn derive_constants(
    c_tri: f64,
    c_mult: Option<f64>,
    c_bracket: Option<f64>,
) -> Result<ConstantSet> {
    if !c_tri.is_finite() || c_tri < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "quasi-triangle constant must be >= 1, got {c_tri}"
        )));
    }
    if let Some(m) = c_mult {
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "submultiplicativity constant must be positive, got {m}"
            )));
        }
    }
    if let Some(b) = c_bracket {
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "bracket constant must be positive, got {b}"
            )));
        }
    }
    let c_bracket = match (c_bracket, c_mult) {
        (Some(b), Some(m)) => {
            let limit = 2.0 * c_tri * m;
            if b > limit + IDENTITY_TOL {
                return Err(Error::InvalidArgument(format!(
                    "c_bracket = {b} exceeds the commutator bound 2*c_tri*c_mult = {limit}"
                )));
            }
            b
        }
        (Some(b), None) => b,
        (None, Some(m)) => 2.0 * c_tri * m,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "at least one of c_mult, c_bracket is required".into(),
            ))
        }
    };
    let p = 1.0 / (2.0 * c_tri).log2();
    let c2 = 2f64.powf(1.0 / p);
    Ok(ConstantSet {
        c_tri,
        c_mult,
        c_bracket,
        p,
        c1: 1.0,
        c2,
        c_total: c_tri * c_bracket,
    })
}

/// Weak-Schatten specialization: on the p-ideal with 0 < p < 1 the
/// quasi-triangle constant is 2^(1/p - 1) and the bracket bound follows from
/// the ideal submultiplicativity constant.
pub fn schatten_constants(p: f64, c_ideal: f64) -> Result<ConstantSet> {
    if !p.is_finite() || p <= 0.0 || p >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "weak-Schatten exponent must lie in (0, 1), got {p}"
        )));
    }
    if !c_ideal.is_finite() || c_ideal <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "ideal constant must be positive, got {c_ideal}"
        )));
    }
    let c_tri = 2f64.powf(1.0 / p - 1.0);
    derive_constants(c_tri, Some(c_ideal), None)
}

/// All derived radii for a constant set.
pub fn radii(c: &ConstantSet) -> RadiusReport {
    RadiusReport {
        r_bch: 1.0 / (4.0 * c.c_bracket),
        r_conservative: 1.0 / (4.0 * c.c_total),
        r_assoc: c.c_mult.map(|m| 1.0 / (8.0 * c.c_tri * c.c_tri * m)),
        rho: 1.0 / (8.0 * c.c_bracket),
        rho0: 1.0 / (16.0 * c.c_bracket),
        rho_inv: 1.0 / (8.0 * c.c_bracket * (1.0 + 2.0 * c.c_tri).powi(2)),
        lipschitz_l0: 2.0,
    }
}

/// Tail of the p-norm majorant series,
/// sum_{n >= N} (2 c_tri)^p (4 c_bracket)^(p(n-1)) r^(pn), in closed
/// geometric form. Requires 4 c_bracket r < 1.
pub fn pnorm_tail_bound(c: &ConstantSet, r: f64, n_start: usize) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "radius must be nonnegative, got {r}"
        )));
    }
    if n_start == 0 {
        return Err(Error::InvalidArgument("tail index must be >= 1".into()));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let lhs = 4.0 * c.c_bracket * r;
    if lhs >= 1.0 {
        return Err(Error::Domain {
            inequality: "4*C_b*r < 1".into(),
            lhs,
            rhs: 1.0,
        });
    }
    let q = lhs.powf(c.p);
    let first = (2.0 * c.c_tri).powf(c.p)
        * (4.0 * c.c_bracket).powf(c.p * (n_start as f64 - 1.0))
        * r.powf(c.p * n_start as f64);
    Ok(first / (1.0 - q))
}

/// Lipschitz factor 1/(1 - 4 c_bracket s) of the group law in its second
/// argument, for s = |x| + max(|y|, |z|) < 1/(4 c_bracket).
pub fn lipschitz_bound(c: &ConstantSet, s: f64) -> Result<f64> {
    let lhs = 4.0 * c.c_bracket * s;
    if s < 0.0 || lhs >= 1.0 {
        return Err(Error::Domain {
            inequality: "4*C_b*s < 1".into(),
            lhs,
            rhs: 1.0,
        });
    }
    Ok(1.0 / (1.0 - lhs))
}

/// Norm radius under which the Neumann series of (Id - T)^(-1) converges:
/// |T| < 2^(-1/p) = 1/c2.
pub fn neumann_radius(c: &ConstantSet) -> f64 {
    1.0 / c.c2
}

/// Resolvent bound 1/(1 - 2^(1/p) |T|), valid for |T| < 2^(-1/p).
pub fn neumann_resolvent_bound(c: &ConstantSet, t_norm: f64) -> Result<f64> {
    if t_norm < 0.0 || t_norm >= neumann_radius(c) {
        return Err(Error::Domain {
            inequality: "|T| < 2^(-1/p)".into(),
            lhs: t_norm,
            rhs: neumann_radius(c),
        });
    }
    Ok(1.0 / (1.0 - c.c2 * t_norm))
}

/// Resolvent bound for a bounded operator of norm <= alpha:
/// |(mu - T)^(-1)| <= 1/(|mu| - 2^(1/p) alpha) for |mu| > 2^(1/p) alpha.
pub fn operator_resolvent_bound(c: &ConstantSet, alpha: f64, mu_abs: f64) -> Result<f64> {
    if alpha < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "operator norm bound must be >= 0, got {alpha}"
        )));
    }
    let threshold = c.c2 * alpha;
    if mu_abs <= threshold {
        return Err(Error::Domain {
            inequality: "|mu| > 2^(1/p)*alpha".into(),
            lhs: mu_abs,
            rhs: threshold,
        });
    }
    Ok(1.0 / (mu_abs - threshold))
}

/// Spectral radius bound for the adjoint operator: rho(ad_x) <= c_bracket |x|,
/// plus the associative-embedding variant 2 c_tri c_mult |x| when available.
pub fn spectral_bound(c: &ConstantSet, x_norm: f64) -> (f64, Option<f64>) {
    (
        c.c_bracket * x_norm,
        c.c_mult.map(|m| 2.0 * c.c_tri * m * x_norm),
    )
}
