//! Globally adaptive quadrature on a Gauss–Kronrod 7/15 embedded pair.
//!
//! The worst interval (largest error estimate, ties broken by the left
//! endpoint) is bisected until the summed error estimate meets the absolute
//! or relative target, or drops to the roundoff floor of the accumulated
//! |f| integral. Interval sums run in ascending-endpoint order so results
//! do not depend on the refinement history.

use crate::scalar::{as_f64, real, Real};
use thiserror::Error;

/// 15-point Kronrod abscissae on [-1, 1] (positive half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights paired with `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// 7-point Gauss weights for the abscissae XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Roundoff acceptance factor: refinement stops once the error estimate is
/// indistinguishable from noise on the accumulated |f| integral.
const ROUNDOFF_FACTOR: f64 = 50.0;

/// Consecutive splits without a measurable error reduction before the
/// estimate is declared noise-limited and accepted as is. Integrands built
/// from antiderivative differences carry relative noise well above machine
/// epsilon, which caps how far refinement can push the estimate.
const STALL_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Relative error target (against |integral|).
    pub rel_tol: f64,
    /// Subdivision budget; exceeding it is `NonConvergence`.
    pub max_intervals: usize,
    /// Number of equal initial panels before adaptation.
    pub initial_panels: usize,
}

impl QuadOptions {
    /// Oracle-grade options: absolute tolerance 1e-13, budget 2^20.
    pub fn oracle() -> Self {
        QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 0.0,
            max_intervals: 1 << 20,
            initial_panels: 1,
        }
    }

    /// Options for wing force integrals: relative 1e-9, absolute floor 1e-30.
    /// Smooth wing profiles resolve in a few hundred panels; the budget only
    /// trips on near-singular boundary configurations.
    pub fn wing_force() -> Self {
        QuadOptions {
            abs_tol: 1e-30,
            rel_tol: 1e-9,
            max_intervals: 1 << 14,
            initial_panels: 8,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<S> {
    pub value: S,
    /// Summed |K15 - G7| over accepted panels.
    pub error_estimate: S,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not reach tolerance within {panels} panels (value {value:e}, error estimate {error_estimate:e})")]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        panels: usize,
    },
}

#[derive(Debug, Clone, Copy)]
struct Panel<S> {
    lo: S,
    hi: S,
    value: S,
    error: S,
    resabs: S,
}

/// One Gauss–Kronrod 7/15 evaluation of `f` over `[lo, hi]`.
fn gk15<S: Real, F: FnMut(S) -> S>(f: &mut F, lo: S, hi: S) -> Panel<S> {
    let half = real::<S>(0.5);
    let center = (lo + hi) * half;
    let h = (hi - lo) * half;

    let fc = f(center);
    let mut kronrod = real::<S>(WGK[7]) * fc;
    let mut gauss = real::<S>(WG[3]) * fc;
    let mut resabs = real::<S>(WGK[7]) * fc.abs();

    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate().take(7) {
        let dx = h * real::<S>(x);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let wk = real::<S>(wk);
        kronrod = kronrod + wk * (f1 + f2);
        resabs = resabs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + real::<S>(WG[j / 2]) * (f1 + f2);
        }
    }

    Panel {
        lo,
        hi,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
        resabs: resabs * h.abs(),
    }
}

/// Integrates `f` over `[lo, hi]` (`lo <= hi`) to the requested tolerance.
pub fn integrate<S: Real, F: FnMut(S) -> S>(
    mut f: F,
    lo: S,
    hi: S,
    opts: &QuadOptions,
) -> Result<QuadResult<S>, QuadError> {
    if lo == hi {
        return Ok(QuadResult {
            value: S::zero(),
            error_estimate: S::zero(),
            panels: 0,
            evaluations: 0,
        });
    }

    let panels_init = opts.initial_panels.max(1);
    let mut panels: Vec<Panel<S>> = Vec::with_capacity(panels_init * 2);
    let width = (hi - lo) / real::<S>(panels_init as f64);
    let mut evaluations = 0;
    for i in 0..panels_init {
        let a = lo + width * real::<S>(i as f64);
        let b = if i + 1 == panels_init {
            hi
        } else {
            lo + width * real::<S>((i + 1) as f64)
        };
        panels.push(gk15(&mut f, a, b));
        evaluations += 15;
    }

    let mut total_value = panels.iter().fold(S::zero(), |s, p| s + p.value);
    let mut total_error = panels.iter().fold(S::zero(), |s, p| s + p.error);
    let mut total_resabs = panels.iter().fold(S::zero(), |s, p| s + p.resabs);

    let abs_tol = real::<S>(opts.abs_tol);
    let rel_tol = real::<S>(opts.rel_tol);
    let roundoff = real::<S>(ROUNDOFF_FACTOR) * S::epsilon();
    let stall_ratio = S::one() - real::<S>(1e-6);
    let mut stalled = 0usize;
    let mut best_error = total_error;

    loop {
        let target = abs_tol.max(rel_tol * total_value.abs());
        if total_error <= target || total_error <= roundoff * total_resabs {
            break;
        }
        if stalled >= STALL_LIMIT {
            // estimates have hit the integrand's noise floor
            break;
        }
        if panels.len() >= opts.max_intervals {
            return Err(QuadError::NonConvergence {
                value: as_f64(total_value),
                error_estimate: as_f64(total_error),
                panels: panels.len(),
            });
        }

        // worst panel; ties resolved toward the smaller left endpoint
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate().skip(1) {
            let w = &panels[worst];
            if p.error > w.error || (p.error == w.error && p.lo < w.lo) {
                worst = i;
            }
        }

        let old = panels[worst];
        let mid = (old.lo + old.hi) * real::<S>(0.5);
        if mid <= old.lo || mid >= old.hi {
            // panel no longer splittable in this precision
            return Err(QuadError::NonConvergence {
                value: as_f64(total_value),
                error_estimate: as_f64(total_error),
                panels: panels.len(),
            });
        }
        let left = gk15(&mut f, old.lo, mid);
        let right = gk15(&mut f, mid, old.hi);
        evaluations += 30;

        total_value = total_value - old.value + left.value + right.value;
        total_error = total_error - old.error + left.error + right.error;
        total_resabs = total_resabs - old.resabs + left.resabs + right.resabs;
        panels[worst] = left;
        panels.push(right);

        if total_error < best_error * stall_ratio {
            best_error = total_error;
            stalled = 0;
        } else {
            stalled += 1;
        }
    }

    // fixed-order summation so the result is independent of refinement order
    panels.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("panel endpoints are ordered"));
    let value = panels.iter().fold(S::zero(), |s, p| s + p.value);
    let error_estimate = panels.iter().fold(S::zero(), |s, p| s + p.error);

    Ok(QuadResult {
        value,
        error_estimate,
        panels: panels.len(),
        evaluations,
    })
}
