//! Integrated wing and configuration forces, centroid torque, expulsion
//! effectiveness and the optimal wing length search.
//!
//! Per-wing force components keep each wing's own convention (p_z toward
//! the opposite wing); the torque converts to global (x, z) components, so
//! the unshifted symmetric cavity carries zero torque.

use crate::geometry::{validate, CavityConfig, GeometryError, ValidatedConfig, WingSide};
use crate::kernel::{specific_force, KernelError};
use crate::quad::{integrate, QuadError, QuadOptions, QuadResult};
use crate::scalar::{as_f64, real, Real};
use crate::search::{maximize_log_bracket, SearchError};
use thiserror::Error;

/// Fraction of R used as the lower integration cutoff when a = 0; the
/// pressure diverges as s^-4 at the triangle apex.
pub const APEX_CUTOFF_EPS: f64 = 1e-9;

/// Accepted integration error relative to the dominant force component.
const WING_ERROR_BOUND: f64 = 1e-6;

/// Grid size of the coarse scan preceding golden-section refinement.
const REFF_SCAN_POINTS: usize = 64;

/// Relative position tolerance of the golden-section stage.
const REFF_REL_TOL: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForceError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("force profile needs at least 2 samples")]
    InvalidSampleCount,
    #[error("sample at r = {r:e} failed: {source}")]
    SampleFailed {
        r: f64,
        source: KernelError,
    },
    #[error("effectiveness has {} separated local maxima on the scan grid", candidates.len())]
    NotUnimodal { candidates: Vec<(f64, f64)> },
    #[error("effectiveness maximum sits on the {} end of the search bracket", if *at_lower { "lower" } else { "upper" })]
    MaximumAtBoundary { at_lower: bool },
    #[error("search bracket must satisfy 0 < r_min < r_max")]
    InvalidBracket,
    #[error("total compression force is zero, ratio undefined")]
    DivisionByZeroForce,
}

impl From<GeometryError> for ForceError {
    fn from(e: GeometryError) -> Self {
        ForceError::Kernel(KernelError::Geometry(e))
    }
}

/// Integrated force on one wing: the r-integral of the local pressure
/// times the cavity width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WingForce<S> {
    pub f_x: S,
    pub f_z: S,
    pub side: WingSide,
    /// Estimated absolute integration error (sum over both components).
    pub quadrature_error: S,
}

/// Forces on the whole configuration plus the centroid torque.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalForce<S> {
    pub f_x_total: S,
    pub f_z_total: S,
    pub per_wing: [WingForce<S>; 2],
    /// Moment per unit width about the area centroid, positive anticlockwise
    /// in the (x, z) plane.
    pub torque_y: S,
}

/// One sampled point of a force profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample<S> {
    /// Normalized position r/R in [0, 1].
    pub position: S,
    pub p_x: S,
    pub p_z: S,
}

/// Sampled specific-force curves along one wing.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceProfile<S> {
    pub samples: Vec<ProfileSample<S>>,
    pub side: WingSide,
    pub config: CavityConfig<S>,
}

/// Result of the optimal wing length search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivenessResult<S> {
    /// |F_x| / R at the maximizer.
    pub w_x: S,
    /// Wing length maximizing the effectiveness.
    pub r_eff: S,
    /// Total F_x at `r_eff` (signed).
    pub f_at_reff: S,
}

/// Lower end of the r-integration domain: 0, or eps R for the triangle.
fn domain_start<S: Real>(config: &ValidatedConfig<S>) -> S {
    if config.a == S::zero() {
        real::<S>(APEX_CUTOFF_EPS) * config.wing_length
    } else {
        S::zero()
    }
}

/// Uniformly sampled specific forces along `side`.
pub fn force_profile<S: Real>(
    config: &ValidatedConfig<S>,
    side: WingSide,
    n_samples: usize,
) -> Result<ForceProfile<S>, ForceError> {
    if n_samples < 2 {
        return Err(ForceError::InvalidSampleCount);
    }
    let big_r = config.wing_length;
    let lo = domain_start(config);
    let step = (big_r - lo) / real::<S>((n_samples - 1) as f64);
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let r = if i + 1 == n_samples {
            big_r
        } else {
            lo + step * real::<S>(i as f64)
        };
        let f = specific_force(config, r, side).map_err(|source| ForceError::SampleFailed {
            r: as_f64(r),
            source,
        })?;
        samples.push(ProfileSample {
            position: r / big_r,
            p_x: f.p_x,
            p_z: f.p_z,
        });
    }
    Ok(ForceProfile {
        samples,
        side,
        config: *config.config(),
    })
}

/// Integrates a pointwise quantity along one wing, capturing the first
/// evaluation failure instead of poisoning the quadrature.
fn integrate_along_wing<S: Real>(
    config: &ValidatedConfig<S>,
    side: WingSide,
    pick: impl Fn(S, S, S) -> S,
) -> Result<QuadResult<S>, ForceError> {
    let mut failure: Option<KernelError> = None;
    let lo = domain_start(config);
    let result = integrate(
        |r: S| match specific_force(config, r, side) {
            Ok(f) => pick(r, f.p_x, f.p_z),
            Err(e) => {
                failure.get_or_insert(e);
                S::zero()
            }
        },
        lo,
        config.wing_length,
        &QuadOptions::wing_force(),
    );
    if let Some(source) = failure {
        return Err(ForceError::Kernel(source));
    }
    Ok(result?)
}

/// Integrated force on one wing: f = L * integral of p dr.
pub fn integrate_wing<S: Real>(
    config: &ValidatedConfig<S>,
    side: WingSide,
) -> Result<WingForce<S>, ForceError> {
    let ix = integrate_along_wing(config, side, |_, p_x, _| p_x)?;
    let iz = integrate_along_wing(config, side, |_, _, p_z| p_z)?;
    let width = config.width;
    let f_x = width * ix.value;
    let f_z = width * iz.value;
    let quadrature_error = width * (ix.error_estimate + iz.error_estimate);

    let bound = real::<S>(WING_ERROR_BOUND) * f_x.abs().max(f_z.abs());
    if quadrature_error > bound {
        return Err(ForceError::Quadrature(QuadError::NonConvergence {
            value: as_f64(f_x),
            error_estimate: as_f64(quadrature_error),
            panels: ix.panels + iz.panels,
        }));
    }

    Ok(WingForce {
        f_x,
        f_z,
        side,
        quadrature_error,
    })
}

/// Area centroid of the two wing segments.
fn centroid<S: Real>(config: &ValidatedConfig<S>) -> (S, S) {
    let half = real::<S>(0.5);
    let x = (config.wing_length * config.phi.cos() - config.dx) * half;
    let z = -config.a * half;
    (x, z)
}

/// Torque of the distributed load about the configuration centroid, per
/// unit width. Pressures enter with global (x, z) components: the left
/// wing's p_z flips sign relative to its toward-the-opposite-wing value.
fn centroid_torque<S: Real>(config: &ValidatedConfig<S>) -> Result<S, ForceError> {
    let (x_bar, z_bar) = centroid(config);
    let (sin_phi, cos_phi) = config.phi.sin_cos();

    let right = integrate_along_wing(config, WingSide::Right, move |r, p_x, p_z| {
        let x = r * cos_phi;
        let z = r * sin_phi;
        (x - x_bar) * p_z - (z - z_bar) * p_x
    })?;
    let dx = config.dx;
    let a = config.a;
    let left = integrate_along_wing(config, WingSide::Left, move |r, p_x, p_z| {
        let x = r * cos_phi - dx;
        let z = -r * sin_phi - a;
        (x - x_bar) * (-p_z) - (z - z_bar) * p_x
    })?;
    Ok(right.value + left.value)
}

/// Per-wing forces, their sums, and the centroid torque.
///
/// Summation order is fixed (right then left) so results are independent of
/// any caller-side parallelism.
pub fn total_force<S: Real>(config: &ValidatedConfig<S>) -> Result<TotalForce<S>, ForceError> {
    let right = integrate_wing(config, WingSide::Right)?;
    let left = integrate_wing(config, WingSide::Left)?;
    let torque_y = centroid_torque(config)?;
    Ok(TotalForce {
        f_x_total: right.f_x + left.f_x,
        f_z_total: right.f_z + left.f_z,
        per_wing: [right, left],
        torque_y,
    })
}

/// Expulsion effectiveness W_x = |F_x| / R of the whole configuration.
pub fn expulsion_effectiveness<S: Real>(config: &ValidatedConfig<S>) -> Result<S, ForceError> {
    let total = total_force(config)?;
    Ok(total.f_x_total.abs() / config.wing_length)
}

/// Ratio of the total expulsion to the total compression, F_x / F_z.
pub fn force_ratio<S: Real>(config: &ValidatedConfig<S>) -> Result<S, ForceError> {
    let total = total_force(config)?;
    if total.f_z_total == S::zero() {
        return Err(ForceError::DivisionByZeroForce);
    }
    Ok(total.f_x_total / total.f_z_total)
}

/// Finds the wing length in `[r_min, r_max]` maximizing W_x, holding a,
/// L, phi and dx fixed. Coarse 64-point log scan, then golden-section
/// refinement to relative position tolerance 1e-4.
pub fn find_reff<S: Real>(
    config: &ValidatedConfig<S>,
    r_min: S,
    r_max: S,
) -> Result<EffectivenessResult<S>, ForceError> {
    if !(r_min > S::zero()) || !(r_max > r_min) {
        return Err(ForceError::InvalidBracket);
    }
    let base = *config.config();
    let eval = |wing_length: S| -> Result<S, ForceError> {
        let candidate = validate(CavityConfig {
            wing_length,
            ..base
        })?;
        expulsion_effectiveness(&candidate)
    };

    let maximum = maximize_log_bracket(eval, r_min, r_max, REFF_SCAN_POINTS, REFF_REL_TOL)
        .map_err(|e| match e {
            SearchError::NotUnimodal { candidates } => ForceError::NotUnimodal { candidates },
            SearchError::MaximumAtBoundary { at_lower } => {
                ForceError::MaximumAtBoundary { at_lower }
            }
            SearchError::InvalidBracket => ForceError::InvalidBracket,
            SearchError::Eval(inner) => inner,
        })?;

    let best = validate(CavityConfig {
        wing_length: maximum.argmax,
        ..base
    })?;
    let f_at_reff = total_force(&best)?.f_x_total;
    Ok(EffectivenessResult {
        w_x: maximum.value,
        r_eff: maximum.argmax,
        f_at_reff,
    })
}
