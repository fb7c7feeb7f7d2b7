//! Cavity geometry: configuration validation, wing point sets, limit angles
//! and the effective separation parameter.
//!
//! The configuration is a symmetric trapezoid cavity in the (x, z) plane:
//! the right wing runs from the origin along (cos phi, sin phi) for a length
//! R, the left wing from (-dx, -a) along (cos phi, -sin phi). Virtual rays
//! from a wing point to the two ends of the opposite wing bound the angular
//! kernel integral; their limit angles are measured from the wing's own
//! forward direction.

use crate::scalar::{as_f64, real, Real};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance band for arccos arguments that land outside [-1, 1] through
/// rounding; anything further out is a domain error.
pub const ACOS_CLAMP_TOL: f64 = 1e-12;

/// |sin(phi - theta2)| below this is treated as a singular separation.
pub const SINGULAR_SIN_TOL: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("opening angle {phi} rad exceeds the permitted maximum {max} rad")]
    AngleOutOfRange { phi: f64, max: f64 },
    #[error("dimension `{0}` must be positive")]
    NonPositiveDimension(&'static str),
    #[error("a = 0 is only permitted together with dx = 0")]
    DegenerateTriangle,
    #[error("arccos argument {argument} lies outside [-1, 1] beyond rounding tolerance")]
    NumericalDomain { argument: f64 },
    #[error("|sin(phi - theta2)| = {value:e} is below the singularity threshold")]
    SingularSeparation { value: f64 },
}

/// Which wing of the cavity a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WingSide {
    Right,
    Left,
}

impl WingSide {
    pub const BOTH: [WingSide; 2] = [WingSide::Right, WingSide::Left];

    pub fn other(self) -> WingSide {
        match self {
            WingSide::Right => WingSide::Left,
            WingSide::Left => WingSide::Right,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WingSide::Right => "right",
            WingSide::Left => "left",
        }
    }
}

impl std::fmt::Display for WingSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The five geometric parameters of a scenario (SI units, angles in rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityConfig<S> {
    /// Plate separation at the narrow end (m).
    pub a: S,
    /// Wing length R (m).
    pub wing_length: S,
    /// Cavity width L along y (m); enters forces as a plain factor.
    pub width: S,
    /// Half-opening angle of each wing (rad).
    pub phi: S,
    /// Leftward shift of the left wing (m, >= 0).
    pub dx: S,
}

impl<S: Real> CavityConfig<S> {
    pub fn new(a: S, wing_length: S, width: S, phi: S, dx: S) -> Self {
        CavityConfig {
            a,
            wing_length,
            width,
            phi,
            dx,
        }
    }
}

/// A `CavityConfig` that has passed `validate`; the only way to obtain one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedConfig<S>(CavityConfig<S>);

impl<S: Real> ValidatedConfig<S> {
    pub fn config(&self) -> &CavityConfig<S> {
        &self.0
    }
}

impl<S> std::ops::Deref for ValidatedConfig<S> {
    type Target = CavityConfig<S>;

    fn deref(&self) -> &CavityConfig<S> {
        &self.0
    }
}

/// Largest admissible opening angle for the given separation and shift:
/// arccot(dx/a) for a shifted cavity, pi/2 otherwise.
pub fn max_opening_angle<S: Real>(a: S, dx: S) -> S {
    if a > S::zero() && dx > S::zero() {
        (a / dx).atan()
    } else {
        S::FRAC_PI_2()
    }
}

/// Checks every configuration invariant and tags the config as valid.
pub fn validate<S: Real>(config: CavityConfig<S>) -> Result<ValidatedConfig<S>, GeometryError> {
    if !(config.wing_length > S::zero()) {
        return Err(GeometryError::NonPositiveDimension("R"));
    }
    if !(config.width > S::zero()) {
        return Err(GeometryError::NonPositiveDimension("L"));
    }
    if !(config.a >= S::zero()) {
        return Err(GeometryError::NonPositiveDimension("a"));
    }
    if !(config.dx >= S::zero()) {
        return Err(GeometryError::NonPositiveDimension("dx"));
    }
    if config.a == S::zero() && config.dx > S::zero() {
        return Err(GeometryError::DegenerateTriangle);
    }

    let max = max_opening_angle(config.a, config.dx);
    let in_range = if config.dx > S::zero() && config.a > S::zero() {
        config.phi >= S::zero() && config.phi <= max
    } else {
        config.phi >= S::zero() && config.phi < max
    };
    if !in_range {
        return Err(GeometryError::AngleOutOfRange {
            phi: as_f64(config.phi),
            max: as_f64(max),
        });
    }

    Ok(ValidatedConfig(config))
}

/// A point in the (x, z) plane (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub z: S,
}

/// The four construction points for the virtual rays at a wing point:
/// m1 is the evaluation point, m2/m3 the far and near ends of the opposite
/// wing (m3 doubles as the left wing base), m0 the right wing base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSet<S> {
    pub m0: Point<S>,
    pub m1: Point<S>,
    pub m2: Point<S>,
    pub m3: Point<S>,
}

/// Construction points for the ray geometry at parameter `r` on `side`.
///
/// Requires `0 <= r <= R`.
pub fn point_set<S: Real>(config: &ValidatedConfig<S>, r: S, side: WingSide) -> PointSet<S> {
    let c = config.config();
    let (sin_phi, cos_phi) = c.phi.sin_cos();
    let m0 = Point {
        x: S::zero(),
        z: S::zero(),
    };
    let m3 = Point {
        x: -c.dx,
        z: -c.a,
    };
    match side {
        WingSide::Right => PointSet {
            m0,
            m1: Point {
                x: r * cos_phi,
                z: r * sin_phi,
            },
            m2: Point {
                x: c.wing_length * cos_phi - c.dx,
                z: -c.wing_length * sin_phi - c.a,
            },
            m3,
        },
        WingSide::Left => PointSet {
            m0,
            m1: Point {
                x: r * cos_phi - c.dx,
                z: -r * sin_phi - c.a,
            },
            m2: Point {
                x: c.wing_length * cos_phi,
                z: c.wing_length * sin_phi,
            },
            m3,
        },
    }
}

/// The pair of limit angles bounding the virtual-ray integral at a wing
/// point, measured from the wing's forward direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitAngles<S> {
    /// Angle of the ray to the far end of the opposite wing.
    pub theta1: S,
    /// Angle of the ray to the near end of the opposite wing.
    pub theta2: S,
}

fn acos_clamped<S: Real>(argument: S) -> Result<S, GeometryError> {
    let one = S::one();
    let tol = real::<S>(ACOS_CLAMP_TOL);
    if argument > one {
        if argument <= one + tol {
            Ok(S::zero())
        } else {
            Err(GeometryError::NumericalDomain {
                argument: as_f64(argument),
            })
        }
    } else if argument < -one {
        if argument >= -one - tol {
            Ok(S::PI())
        } else {
            Err(GeometryError::NumericalDomain {
                argument: as_f64(argument),
            })
        }
    } else {
        Ok(argument.acos())
    }
}

/// Limit angles at parameter `r` on the right wing, for arbitrary shift.
///
/// Requires `0 <= r <= R`, and `r > 0` when `a = 0`.
pub fn limit_angles_right<S: Real>(
    config: &ValidatedConfig<S>,
    r: S,
) -> Result<LimitAngles<S>, GeometryError> {
    let c = config.config();
    let (sin_phi, cos_phi) = c.phi.sin_cos();
    let two = real::<S>(2.0);
    let cos_2phi = (two * c.phi).cos();

    let n1 = r + c.a * sin_phi + c.dx * cos_phi - c.wing_length * cos_2phi;
    let d1 = (c.a + (c.wing_length + r) * sin_phi).hypot(c.dx + (r - c.wing_length) * cos_phi);
    let theta1 = acos_clamped(n1 / -d1)?;

    let n2 = r + c.a * sin_phi + c.dx * cos_phi;
    let d2 = (c.a + r * sin_phi).hypot(c.dx + r * cos_phi);
    let theta2 = acos_clamped(n2 / -d2)?;

    Ok(LimitAngles { theta1, theta2 })
}

/// Limit angles at parameter `r` on the left wing, for arbitrary shift.
///
/// The branch is fixed so that the angles are the unsigned vector angles
/// against the left wing's forward direction; at dx = 0 they coincide with
/// the right wing's (mirror symmetry).
pub fn limit_angles_left<S: Real>(
    config: &ValidatedConfig<S>,
    r: S,
) -> Result<LimitAngles<S>, GeometryError> {
    let c = config.config();
    let (sin_phi, cos_phi) = c.phi.sin_cos();
    let two = real::<S>(2.0);
    let cos_2phi = (two * c.phi).cos();

    let n1 = r + c.a * sin_phi - c.dx * cos_phi - c.wing_length * cos_2phi;
    let d1 = (c.a + (c.wing_length + r) * sin_phi).hypot(c.dx + (c.wing_length - r) * cos_phi);
    let theta1 = acos_clamped(n1 / -d1)?;

    let n2 = r + c.a * sin_phi - c.dx * cos_phi;
    let d2 = (c.a + r * sin_phi).hypot(c.dx - r * cos_phi);
    let theta2 = acos_clamped(n2 / -d2)?;

    Ok(LimitAngles { theta1, theta2 })
}

/// Limit angles of the unshifted closed forms (right wing, dx ignored).
///
/// `limit_angles_right` reduces to this at dx = 0; kept as the independent
/// reduction target.
pub fn limit_angles_right_unshifted<S: Real>(
    config: &ValidatedConfig<S>,
    r: S,
) -> Result<LimitAngles<S>, GeometryError> {
    let c = config.config();
    let (sin_phi, cos_phi) = c.phi.sin_cos();
    let two = real::<S>(2.0);
    let cos_2phi = (two * c.phi).cos();

    let n1 = r + c.a * sin_phi - c.wing_length * cos_2phi;
    let d1 = (c.a + (c.wing_length + r) * sin_phi).hypot((r - c.wing_length) * cos_phi);
    let theta1 = acos_clamped(-(n1 / d1))?;

    let n2 = r + c.a * sin_phi;
    let d2 = (c.a + r * sin_phi).hypot(r * cos_phi);
    let theta2 = acos_clamped(-(n2 / d2))?;

    Ok(LimitAngles { theta1, theta2 })
}

/// Effective separation entering the pressure as s^-4.
///
/// `theta2` is the second limit angle of the wing in question; the same
/// expression serves both wings. Equals `a` exactly at phi = 0.
pub fn s_parameter<S: Real>(
    config: &ValidatedConfig<S>,
    r: S,
    theta2: S,
) -> Result<S, GeometryError> {
    let c = config.config();
    let denom = (c.phi - theta2).sin();
    if denom.abs() < real::<S>(SINGULAR_SIN_TOL) {
        return Err(GeometryError::SingularSeparation {
            value: as_f64(denom.abs()),
        });
    }
    let two = real::<S>(2.0);
    Ok((two * c.phi - theta2).sin() * (c.a + r * c.phi.sin()) / denom)
}
