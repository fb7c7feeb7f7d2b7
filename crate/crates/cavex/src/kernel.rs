//! Angular kernels and local specific forces.
//!
//! The closed forms integrate sin(T - 2 phi)^4 cos(T - phi) and
//! sin(T - 2 phi)^4 sin(T - phi) between the limit angles; `a1_quad` and
//! `a2_quad` integrate the raw integrands adaptively and serve as the
//! independent oracle for the closed forms.

use crate::geometry::{
    limit_angles_left, limit_angles_right, s_parameter, GeometryError, ValidatedConfig, WingSide,
};
use crate::quad::{integrate, QuadError, QuadOptions};
use crate::scalar::{real, Real};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reduced Planck constant (J s). Fixed, not user-configurable.
pub const HBAR: f64 = 1.054571817e-34;

/// Light velocity (m/s). Fixed, not user-configurable.
pub const LIGHT_SPEED: f64 = 299_792_458.0;

/// The physical constants behind every pressure value, echoed in output
/// metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
}

pub const PHYSICAL_CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    c: LIGHT_SPEED,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("plate separation must be positive")]
    NonPositiveSeparation,
}

/// Both angular kernels at one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue<S> {
    /// z-direction kernel (sin weight).
    pub a1: S,
    /// x-direction kernel (cos weight).
    pub a2: S,
}

/// Local specific force (pressure) at a wing point. `p_z` points toward the
/// opposite wing in each wing's own convention; `p_x` is the global
/// x-component for both wings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecificForce<S> {
    pub p_x: S,
    pub p_z: S,
    pub r: S,
    pub side: WingSide,
}

/// Antiderivative of sin(T - 2 phi)^4 sin(T - phi), scaled by 240.
fn a1_antiderivative<S: Real>(phi: S, t: S) -> S {
    let c = real::<S>;
    -c(90.0) * (phi - t).cos() - c(60.0) * (c(3.0) * phi - t).cos()
        + c(20.0) * (c(5.0) * phi - c(3.0) * t).cos()
        + c(5.0) * (c(7.0) * phi - c(3.0) * t).cos()
        - c(3.0) * (c(9.0) * phi - c(5.0) * t).cos()
}

/// Antiderivative of sin(T - 2 phi)^4 cos(T - phi), scaled by 240.
fn a2_antiderivative<S: Real>(phi: S, t: S) -> S {
    let c = real::<S>;
    -c(90.0) * (phi - t).sin() + c(60.0) * (c(3.0) * phi - t).sin()
        + c(20.0) * (c(5.0) * phi - c(3.0) * t).sin()
        - c(5.0) * (c(7.0) * phi - c(3.0) * t).sin()
        - c(3.0) * (c(9.0) * phi - c(5.0) * t).sin()
}

/// Closed form of the z-direction kernel over [theta1, theta2].
pub fn a1_closed<S: Real>(phi: S, theta1: S, theta2: S) -> S {
    (a1_antiderivative(phi, theta2) - a1_antiderivative(phi, theta1)) / real::<S>(240.0)
}

/// Closed form of the x-direction kernel over [theta1, theta2].
pub fn a2_closed<S: Real>(phi: S, theta1: S, theta2: S) -> S {
    (a2_antiderivative(phi, theta2) - a2_antiderivative(phi, theta1)) / real::<S>(240.0)
}

/// Both kernels at once.
pub fn kernels<S: Real>(phi: S, theta1: S, theta2: S) -> KernelValue<S> {
    KernelValue {
        a1: a1_closed(phi, theta1, theta2),
        a2: a2_closed(phi, theta1, theta2),
    }
}

fn oriented_quad<S: Real>(
    f: impl FnMut(S) -> S,
    theta1: S,
    theta2: S,
) -> Result<S, QuadError> {
    let opts = QuadOptions::oracle();
    if theta1 <= theta2 {
        Ok(integrate(f, theta1, theta2, &opts)?.value)
    } else {
        Ok(-integrate(f, theta2, theta1, &opts)?.value)
    }
}

/// Adaptive quadrature of the raw z-kernel integrand; oracle for `a1_closed`.
pub fn a1_quad<S: Real>(phi: S, theta1: S, theta2: S) -> Result<S, QuadError> {
    let two = real::<S>(2.0);
    oriented_quad(
        move |t: S| (t - two * phi).sin().powi(4) * (t - phi).sin(),
        theta1,
        theta2,
    )
}

/// Adaptive quadrature of the raw x-kernel integrand; oracle for `a2_closed`.
pub fn a2_quad<S: Real>(phi: S, theta1: S, theta2: S) -> Result<S, QuadError> {
    let two = real::<S>(2.0);
    oriented_quad(
        move |t: S| (t - two * phi).sin().powi(4) * (t - phi).cos(),
        theta1,
        theta2,
    )
}

/// Classical Casimir pressure between ideal parallel mirrors at separation
/// `a`: -hbar c pi^2 / (240 a^4).
pub fn classical_casimir_pressure<S: Real>(a: S) -> Result<S, KernelError> {
    if !(a > S::zero()) {
        return Err(KernelError::NonPositiveSeparation);
    }
    let pi2 = S::PI() * S::PI();
    let prefactor = real::<S>(HBAR) * real::<S>(LIGHT_SPEED) * pi2 / real::<S>(240.0);
    Ok(-prefactor / (a * a * a * a))
}

/// Local specific forces at parameter `r` on `side`, from the limit angles
/// and separation of the shifted geometry.
pub fn specific_force<S: Real>(
    config: &ValidatedConfig<S>,
    r: S,
    side: WingSide,
) -> Result<SpecificForce<S>, KernelError> {
    let angles = match side {
        WingSide::Right => limit_angles_right(config, r)?,
        WingSide::Left => limit_angles_left(config, r)?,
    };
    let s = s_parameter(config, r, angles.theta2)?;
    let k = kernels(config.phi, angles.theta1, angles.theta2);
    let pi2 = S::PI() * S::PI();
    let scale = real::<S>(HBAR) * real::<S>(LIGHT_SPEED) * pi2 / (real::<S>(240.0) * s * s * s * s);
    Ok(SpecificForce {
        p_x: -scale * k.a2,
        p_z: -scale * k.a1,
        r,
        side,
    })
}
