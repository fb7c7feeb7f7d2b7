//! Noncompensated Casimir expulsion forces in shifted nanocavities.
//!
//! A trapezoid cavity of two perfectly mirrored wings (length R, narrow-end
//! separation a, half-opening phi, left wing shifted by dx) carries local
//! vacuum pressures that integrate to per-wing and total forces, a centroid
//! torque, and an optimal wing length maximizing the expulsion
//! effectiveness |F_x|/R.
//!
//! The numeric core ([`geometry`], [`kernel`], [`quad`], [`search`],
//! [`forces`]) is generic over the scalar type through [`scalar::Real`];
//! the sweep/catalog layer and the CLI work in `f64`, for which type
//! aliases are exported at the crate root.

pub mod catalog;
pub mod configfile;
pub mod forces;
pub mod geometry;
pub mod kernel;
pub mod quad;
pub mod scalar;
pub mod search;
pub mod sweep;

pub use configfile::{parse_config, ConfigParseError};
pub use geometry::{
    limit_angles_left, limit_angles_right, limit_angles_right_unshifted, max_opening_angle,
    point_set, s_parameter, validate, GeometryError, WingSide,
};
pub use kernel::{
    a1_closed, a1_quad, a2_closed, a2_quad, classical_casimir_pressure, kernels, specific_force,
    KernelError, PhysicalConstants, HBAR, LIGHT_SPEED, PHYSICAL_CONSTANTS,
};
pub use forces::{
    expulsion_effectiveness, find_reff, force_profile, force_ratio, integrate_wing, total_force,
    ForceError, APEX_CUTOFF_EPS,
};
pub use scalar::Real;
pub use sweep::{emit_csv, emit_json, run_sweep, OutputKind, SweepError, SweepSpec, SweptQuantity};

/// `f64` instantiations of the generic core types.
pub type CavityConfig64 = geometry::CavityConfig<f64>;
pub type ValidatedConfig64 = geometry::ValidatedConfig<f64>;
pub type LimitAngles64 = geometry::LimitAngles<f64>;
pub type PointSet64 = geometry::PointSet<f64>;
pub type SpecificForce64 = kernel::SpecificForce<f64>;
pub type KernelValue64 = kernel::KernelValue<f64>;
pub type WingForce64 = forces::WingForce<f64>;
pub type TotalForce64 = forces::TotalForce<f64>;
pub type ForceProfile64 = forces::ForceProfile<f64>;
pub type EffectivenessResult64 = forces::EffectivenessResult<f64>;
